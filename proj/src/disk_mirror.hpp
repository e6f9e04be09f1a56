// Copyright 2026 The TwinCloud Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "twincloud/mock_provider.hpp"

namespace twincloud {

// Write-through persistence for MockProvider. Paths inside the root mirror
// provider paths segment by segment.
class DiskMirror {
 public:
  struct Loaded {
    ProviderStore store;
    std::map<std::string, std::string> tokens;
  };

  explicit DiskMirror(std::filesystem::path root);

  Loaded load() const;

  void write_accounts(const std::map<std::string, std::string>& accounts);
  void write_tokens(const std::map<std::string, std::string>& tokens);
  void write_acl(const std::map<StoreKey, std::map<std::string, Permission>>& acl);

  void add_owner(const std::string& owner);
  void remove_owner(const std::string& owner);

  void put_object(const StoreKey& key, ByteView bytes);
  void make_folder(const StoreKey& key);
  void remove_live(const StoreKey& key);
  void remove_trash(const StoreKey& key);
  // Moves a live file or folder tree into trash/, merging with whatever is
  // already there.
  void move_to_trash(const StoreKey& key);

 private:
  std::filesystem::path data_path(const StoreKey& key) const;
  std::filesystem::path trash_path(const StoreKey& key) const;

  std::filesystem::path root_;
};

}  // namespace twincloud
