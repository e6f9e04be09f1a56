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

#include "disk_mirror.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "twincloud/error.hpp"

namespace twincloud {
namespace fs = std::filesystem;
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::vector<std::vector<std::string>> read_tsv(const fs::path& file,
                                               std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(file);
  if (!in) return rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != columns) {
      fail(ErrorKind::kIo, "malformed line in " + file.string());
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

void write_text(const fs::path& file, const std::string& text) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) fail(ErrorKind::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) fail(ErrorKind::kIo, "cannot replace " + file.string() + ": " + ec.message());
}

Bytes read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read " + file.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

fs::path under(const fs::path& base, const StoreKey& key) {
  fs::path p = base / key.owner;
  auto path = RemotePath::folder(key.path);
  for (const auto& segment : path.segments()) p /= segment;
  return p;
}

void remove_tree(const fs::path& p) {
  std::error_code ec;
  fs::remove_all(p, ec);
  if (ec) fail(ErrorKind::kIo, "cannot remove " + p.string() + ": " + ec.message());
}

// Replaces any plain file standing where a directory has to go.
void ensure_directories(const fs::path& base, const fs::path& target) {
  fs::path cur = base;
  for (const auto& part : fs::relative(target, base)) {
    cur /= part;
    if (fs::is_regular_file(cur)) fs::remove(cur);
    if (!fs::is_directory(cur)) fs::create_directory(cur);
  }
}

void merge_move(const fs::path& from, const fs::path& to) {
  if (fs::is_directory(from)) {
    if (fs::exists(to) && !fs::is_directory(to)) fs::remove(to);
    if (!fs::exists(to)) {
      fs::rename(from, to);
      return;
    }
    std::vector<fs::path> children;
    for (const auto& entry : fs::directory_iterator(from)) children.push_back(entry.path());
    for (const auto& child : children) merge_move(child, to / child.filename());
    fs::remove(from);
  } else {
    if (fs::exists(to)) fs::remove_all(to);
    fs::rename(from, to);
  }
}

std::string path_of(const fs::path& owner_dir, const fs::path& p) {
  std::string out;
  for (const auto& part : fs::relative(p, owner_dir)) {
    out += '/';
    out += part.string();
  }
  return out;
}

void load_tree(const fs::path& area, std::map<StoreKey, Bytes>& objects,
               std::set<StoreKey>& folders) {
  if (!fs::is_directory(area)) return;
  for (const auto& owner_entry : fs::directory_iterator(area)) {
    if (!owner_entry.is_directory()) continue;
    std::string owner = owner_entry.path().filename().string();
    for (const auto& entry : fs::recursive_directory_iterator(owner_entry.path())) {
      StoreKey key{owner, path_of(owner_entry.path(), entry.path())};
      if (entry.is_directory()) {
        folders.insert(key);
      } else if (entry.is_regular_file()) {
        objects.emplace(key, read_file(entry.path()));
      }
    }
  }
}

}  // namespace

DiskMirror::DiskMirror(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "data", ec);
  if (!ec) fs::create_directories(root_ / "trash", ec);
  if (ec) fail(ErrorKind::kIo, "cannot create provider root " + root_.string());
}

DiskMirror::Loaded DiskMirror::load() const {
  Loaded loaded;
  for (auto& row : read_tsv(root_ / "accounts.tsv", 2)) {
    loaded.store.accounts[row[0]] = row[1];
  }
  for (auto& row : read_tsv(root_ / "tokens.tsv", 2)) loaded.tokens[row[0]] = row[1];
  for (auto& row : read_tsv(root_ / "acl.tsv", 4)) {
    if (row[3] != "R" && row[3] != "E") fail(ErrorKind::kIo, "bad permission in acl.tsv");
    loaded.store.acl[StoreKey{row[1], row[0]}][row[2]] =
        row[3] == "E" ? Permission::kEdit : Permission::kRead;
  }
  load_tree(root_ / "data", loaded.store.objects, loaded.store.folders);
  load_tree(root_ / "trash", loaded.store.trash_objects, loaded.store.trash_folders);
  return loaded;
}

void DiskMirror::write_accounts(const std::map<std::string, std::string>& accounts) {
  std::ostringstream out;
  for (const auto& [user, password] : accounts) out << user << '\t' << password << '\n';
  write_text(root_ / "accounts.tsv", out.str());
}

void DiskMirror::write_tokens(const std::map<std::string, std::string>& tokens) {
  std::ostringstream out;
  for (const auto& [token, user] : tokens) out << token << '\t' << user << '\n';
  write_text(root_ / "tokens.tsv", out.str());
}

void DiskMirror::write_acl(
    const std::map<StoreKey, std::map<std::string, Permission>>& acl) {
  std::ostringstream out;
  for (const auto& [key, grants] : acl) {
    for (const auto& [grantee, perm] : grants) {
      out << key.path << '\t' << key.owner << '\t' << grantee << '\t'
          << (perm == Permission::kEdit ? 'E' : 'R') << '\n';
    }
  }
  write_text(root_ / "acl.tsv", out.str());
}

void DiskMirror::add_owner(const std::string& owner) {
  std::error_code ec;
  fs::create_directories(root_ / "data" / owner, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create owner directory: " + ec.message());
}

void DiskMirror::remove_owner(const std::string& owner) {
  remove_tree(root_ / "data" / owner);
  remove_tree(root_ / "trash" / owner);
}

void DiskMirror::put_object(const StoreKey& key, ByteView bytes) {
  fs::path p = data_path(key);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "cannot write " + p.string());
}

void DiskMirror::make_folder(const StoreKey& key) {
  std::error_code ec;
  fs::create_directory(data_path(key), ec);
  if (ec) fail(ErrorKind::kIo, "cannot create folder: " + ec.message());
}

void DiskMirror::remove_live(const StoreKey& key) { remove_tree(data_path(key)); }

void DiskMirror::remove_trash(const StoreKey& key) { remove_tree(trash_path(key)); }

void DiskMirror::move_to_trash(const StoreKey& key) {
  try {
    fs::path from = data_path(key);
    fs::path to = trash_path(key);
    ensure_directories(root_ / "trash", to.parent_path());
    merge_move(from, to);
  } catch (const fs::filesystem_error& e) {
    fail(ErrorKind::kIo, std::string("cannot move to trash: ") + e.what());
  }
}

fs::path DiskMirror::data_path(const StoreKey& key) const {
  return under(root_ / "data", key);
}

fs::path DiskMirror::trash_path(const StoreKey& key) const {
  return under(root_ / "trash", key);
}

}  // namespace twincloud
