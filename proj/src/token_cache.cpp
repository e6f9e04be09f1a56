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

#include "twincloud/token_cache.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>

#include "twincloud/error.hpp"

namespace twincloud {
namespace fs = std::filesystem;

std::vector<TokenCache::Line> TokenCache::read_all() const {
  std::vector<Line> lines;
  std::ifstream in(file_);
  if (!in) return lines;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    auto first = text.find('\t');
    auto second = first == std::string::npos ? first : text.find('\t', first + 1);
    // Unparseable lines are dropped; the cache is only an optimization.
    if (second == std::string::npos || text.find('\t', second + 1) != std::string::npos) {
      continue;
    }
    lines.push_back(Line{text.substr(0, first), text.substr(first + 1, second - first - 1),
                         text.substr(second + 1)});
  }
  return lines;
}

void TokenCache::write_all(const std::vector<Line>& lines) const {
  std::error_code ec;
  if (file_.has_parent_path()) fs::create_directories(file_.parent_path(), ec);
  fs::path tmp = file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write token cache " + tmp.string());
    fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write,
                    fs::perm_options::replace, ec);
    if (ec) fail(ErrorKind::kIo, "cannot restrict token cache permissions");
    for (const auto& line : lines) {
      out << line.provider << '\t' << line.username << '\t' << line.token << '\n';
    }
    if (!out) fail(ErrorKind::kIo, "cannot write token cache " + tmp.string());
  }
  fs::rename(tmp, file_, ec);
  if (ec) fail(ErrorKind::kIo, "cannot replace token cache: " + ec.message());
}

std::map<std::string, std::string> TokenCache::load(const std::string& username) const {
  std::map<std::string, std::string> tokens;
  for (auto& line : read_all()) {
    if (line.username == username) tokens[line.provider] = line.token;
  }
  return tokens;
}

void TokenCache::store(const std::string& username,
                       const std::map<std::string, std::string>& tokens) const {
  auto lines = read_all();
  std::erase_if(lines, [&](const Line& l) { return l.username == username; });
  for (const auto& [provider, token] : tokens) lines.push_back(Line{provider, username, token});
  write_all(lines);
}

void TokenCache::forget(const std::string& username) const {
  auto lines = read_all();
  std::erase_if(lines, [&](const Line& l) { return l.username == username; });
  write_all(lines);
}

std::vector<std::string> TokenCache::usernames() const {
  std::vector<std::string> names;
  for (auto& line : read_all()) {
    if (std::find(names.begin(), names.end(), line.username) == names.end()) {
      names.push_back(line.username);
    }
  }
  return names;
}

}  // namespace twincloud
