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

#include <string>
#include <string_view>
#include <vector>

namespace twincloud {

enum class EntryKind { kFile, kFolder };

// Absolute provider path. The empty segment list is the root folder.
class RemotePath {
 public:
  RemotePath() = default;
  // Throws Error(kInvalidArgument) on empty, "." or ".." segments or on
  // segments holding '/' or control characters.
  RemotePath(std::vector<std::string> segments, EntryKind kind);

  // Parses "/a/b". A leading slash is optional; "/" is the root.
  static RemotePath parse(std::string_view text, EntryKind kind);
  static RemotePath file(std::string_view text) { return parse(text, EntryKind::kFile); }
  static RemotePath folder(std::string_view text) { return parse(text, EntryKind::kFolder); }

  static bool is_valid_segment(std::string_view segment);

  const std::vector<std::string>& segments() const { return segments_; }
  EntryKind kind() const { return kind_; }
  bool is_root() const { return segments_.empty(); }
  bool is_folder() const { return kind_ == EntryKind::kFolder; }

  // Last segment; empty for the root.
  std::string_view name() const;
  RemotePath parent() const;
  RemotePath child(std::string_view segment, EntryKind kind) const;
  // True if this path is a strict ancestor of `other`.
  bool is_ancestor_of(const RemotePath& other) const;

  std::string str() const;

  bool operator==(const RemotePath&) const = default;

 private:
  std::vector<std::string> segments_;
  EntryKind kind_ = EntryKind::kFolder;
};

}  // namespace twincloud
