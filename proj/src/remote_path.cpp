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

#include "twincloud/remote_path.hpp"

#include <algorithm>

#include "twincloud/error.hpp"

namespace twincloud {

bool RemotePath::is_valid_segment(std::string_view segment) {
  if (segment.empty() || segment == "." || segment == "..") return false;
  return std::none_of(segment.begin(), segment.end(), [](char c) {
    return c == '/' || static_cast<unsigned char>(c) < 0x20 || c == 0x7f;
  });
}

RemotePath::RemotePath(std::vector<std::string> segments, EntryKind kind)
    : segments_(std::move(segments)), kind_(kind) {
  for (const auto& segment : segments_) {
    if (!is_valid_segment(segment)) {
      fail(ErrorKind::kInvalidArgument, "invalid path segment '" + segment + "'");
    }
  }
  if (segments_.empty() && kind_ != EntryKind::kFolder) {
    fail(ErrorKind::kInvalidArgument, "the root path is a folder");
  }
}

RemotePath RemotePath::parse(std::string_view text, EntryKind kind) {
  std::vector<std::string> segments;
  if (!text.empty() && text.front() == '/') text.remove_prefix(1);
  while (!text.empty()) {
    auto slash = text.find('/');
    segments.emplace_back(text.substr(0, slash));
    if (slash == std::string_view::npos) break;
    text.remove_prefix(slash + 1);
    if (text.empty()) segments.emplace_back();  // trailing slash is invalid
  }
  return RemotePath(std::move(segments), kind);
}

std::string_view RemotePath::name() const {
  return segments_.empty() ? std::string_view{} : std::string_view{segments_.back()};
}

RemotePath RemotePath::parent() const {
  if (segments_.empty()) fail(ErrorKind::kInvalidArgument, "the root has no parent");
  RemotePath p;
  p.segments_.assign(segments_.begin(), segments_.end() - 1);
  return p;
}

RemotePath RemotePath::child(std::string_view segment, EntryKind kind) const {
  std::vector<std::string> segments = segments_;
  segments.emplace_back(segment);
  return RemotePath(std::move(segments), kind);
}

bool RemotePath::is_ancestor_of(const RemotePath& other) const {
  return segments_.size() < other.segments_.size() &&
         std::equal(segments_.begin(), segments_.end(), other.segments_.begin());
}

std::string RemotePath::str() const {
  if (segments_.empty()) return "/";
  std::string out;
  for (const auto& segment : segments_) {
    out += '/';
    out += segment;
  }
  return out;
}

}  // namespace twincloud
