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
#include <vector>

namespace twincloud {

// Saved access tokens, one "provider-id TAB username TAB token" line each.
// The file is kept readable by its owner only.
class TokenCache {
 public:
  explicit TokenCache(std::filesystem::path file) : file_(std::move(file)) {}

  // provider id -> token for `username`; empty when nothing is cached.
  std::map<std::string, std::string> load(const std::string& username) const;
  // Replaces every line for `username`, keeping other users' lines.
  void store(const std::string& username,
             const std::map<std::string, std::string>& tokens) const;
  void forget(const std::string& username) const;
  // Distinct usernames present in the file.
  std::vector<std::string> usernames() const;

  const std::filesystem::path& file() const { return file_; }

 private:
  struct Line {
    std::string provider;
    std::string username;
    std::string token;
  };
  std::vector<Line> read_all() const;
  void write_all(const std::vector<Line>& lines) const;

  std::filesystem::path file_;
};

}  // namespace twincloud
