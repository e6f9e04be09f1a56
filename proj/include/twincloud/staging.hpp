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
#include <string_view>

#include "twincloud/bytes.hpp"

namespace twincloud {

// Local temporary area for key files and envelopes in flight. Every staged
// file is overwritten and unlinked when its handle goes away, so the
// directory is empty again once an operation returns or throws.
class StagingArea {
 public:
  class File {
   public:
    File(File&& other) noexcept;
    File& operator=(File&&) = delete;
    File(const File&) = delete;
    File& operator=(const File&) = delete;
    ~File();

    const std::filesystem::path& path() const { return path_; }
    Bytes read() const;

   private:
    friend class StagingArea;
    explicit File(std::filesystem::path path) : path_(std::move(path)) {}
    std::filesystem::path path_;
  };

  explicit StagingArea(std::filesystem::path dir);

  File stage(std::string_view label, ByteView bytes) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace twincloud
