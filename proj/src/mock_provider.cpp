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

#include "twincloud/mock_provider.hpp"

#include <algorithm>

#include "disk_mirror.hpp"
#include "twincloud/error.hpp"

namespace twincloud {
namespace {

bool at_or_under(const std::string& path, const std::string& top) {
  return path == top ||
         (path.size() > top.size() && path.compare(0, top.size(), top) == 0 &&
          path[top.size()] == '/');
}

std::string random_opaque(std::string_view prefix) {
  return std::string(prefix) + to_hex(crypto::random_bytes(24));
}

void require_file_path(const RemotePath& path) {
  if (path.is_root()) fail(ErrorKind::kInvalidArgument, "the root is not a file");
}

// Entries at or below `top` in a sorted key container, parents first.
template <typename Container>
std::vector<StoreKey> keys_under(const Container& container, const StoreKey& top) {
  std::vector<StoreKey> keys;
  for (auto it = container.lower_bound(StoreKey{top.owner, top.path});
       it != container.end(); ++it) {
    const StoreKey& key = [&]() -> const StoreKey& {
      if constexpr (requires { it->first; }) return it->first;
      else return *it;
    }();
    if (key.owner != top.owner) break;
    // Siblings such as "/a.b" sort between "/a" and "/a/b", so skip rather
    // than stop on a non-match.
    if (key.path.compare(0, top.path.size(), top.path) != 0) break;
    if (at_or_under(key.path, top.path)) keys.push_back(key);
  }
  return keys;
}

}  // namespace

std::string_view permission_name(Permission perm) {
  return perm == Permission::kEdit ? "edit" : "read";
}

MockProvider::MockProvider(ProviderConfig config)
    : config_(std::move(config)), clock_([] { return std::chrono::steady_clock::now(); }) {
  if (config_.id.empty()) fail(ErrorKind::kInvalidArgument, "provider id must be non-empty");
  if (config_.url.empty()) fail(ErrorKind::kInvalidArgument, "provider url must be non-empty");
  if (config_.persistence_root) {
    disk_ = std::make_unique<DiskMirror>(*config_.persistence_root);
    auto loaded = disk_->load();
    store_ = std::move(loaded.store);
    tokens_ = std::move(loaded.tokens);
  }
}

MockProvider::~MockProvider() = default;

void MockProvider::enter(ProviderCall call) {
  ++calls_[static_cast<std::size_t>(call)];
  if (fault_countdown_) {
    if (*fault_countdown_ == 0) {
      fault_countdown_.reset();
      fail(ErrorKind::kUnavailable, "provider " + config_.id + " is unavailable (injected)");
    }
    --*fault_countdown_;
  }
}

const std::string& MockProvider::caller_of(const AccessToken& token) const {
  auto it = tokens_.find(token.opaque);
  if (it == tokens_.end() || it->second != token.username ||
      !store_.accounts.contains(it->second)) {
    fail(ErrorKind::kAuth, "invalid access token for " + config_.id);
  }
  return it->second;
}

std::string MockProvider::resolve_owner(const std::string& caller,
                                        std::string_view owner) const {
  if (owner.empty() || owner == caller) return caller;
  std::string name(owner);
  if (!store_.accounts.contains(name)) fail(ErrorKind::kNotFound, "no such user " + name);
  return name;
}

void MockProvider::check_password(const std::string& username,
                                  const crypto::DerivedPassword& password) const {
  auto it = store_.accounts.find(username);
  if (it == store_.accounts.end() || it->second != password.text()) {
    fail(ErrorKind::kAuth, "bad credentials for " + config_.id);
  }
}

std::optional<Permission> MockProvider::effective_permission(
    const std::string& user, const std::string& owner, const RemotePath& path) const {
  if (user == owner) return Permission::kEdit;
  std::optional<Permission> best;
  RemotePath cur = path;
  while (!cur.is_root()) {
    auto it = store_.acl.find(StoreKey{owner, cur.str()});
    if (it != store_.acl.end()) {
      auto grant = it->second.find(user);
      if (grant != it->second.end() &&
          (!best || grant->second == Permission::kEdit)) {
        best = grant->second;
      }
    }
    cur = cur.parent();
  }
  return best;
}

bool MockProvider::is_live(const StoreKey& key) const {
  return store_.objects.contains(key) || store_.folders.contains(key);
}

EntryMeta MockProvider::meta_for(const StoreKey& key, bool folder,
                                 std::optional<std::string> shared_from) const {
  EntryMeta meta{RemotePath::parse(key.path, folder ? EntryKind::kFolder : EntryKind::kFile),
                 key.owner, 0, std::move(shared_from)};
  if (!folder) meta.size = store_.objects.at(key).size();
  return meta;
}

void MockProvider::move_to_trash(const StoreKey& key) {
  // Ancestors exist as folders in the trash, mirroring data/.
  RemotePath path = RemotePath::parse(key.path, EntryKind::kFolder);
  for (RemotePath cur = path.parent(); !cur.is_root(); cur = cur.parent()) {
    StoreKey ancestor{key.owner, cur.str()};
    store_.trash_objects.erase(ancestor);
    store_.trash_folders.insert(ancestor);
  }
  std::vector<StoreKey> moved;
  for (auto& k : keys_under(store_.folders, key)) moved.push_back(k);
  for (auto& k : keys_under(store_.objects, key)) moved.push_back(k);
  std::sort(moved.begin(), moved.end());
  for (const StoreKey& k : moved) {
    if (auto node = store_.objects.extract(k)) {
      purge_trash(k);
      store_.trash_objects.insert(std::move(node));
    } else {
      store_.folders.erase(k);
      store_.trash_objects.erase(k);
      store_.trash_folders.insert(k);
    }
  }
  for (auto& k : keys_under(store_.acl, key)) store_.acl.erase(k);
  if (disk_) disk_->move_to_trash(key);
}

void MockProvider::purge_trash(const StoreKey& key) {
  for (auto& k : keys_under(store_.trash_objects, key)) store_.trash_objects.erase(k);
  for (auto& k : keys_under(store_.trash_folders, key)) store_.trash_folders.erase(k);
}

const Bytes& MockProvider::readable_object(const std::string& caller,
                                           const std::string& owner,
                                           const RemotePath& path) const {
  require_file_path(path);
  auto it = store_.objects.find(StoreKey{owner, path.str()});
  if (it == store_.objects.end()) fail(ErrorKind::kNotFound, "no such object " + path.str());
  if (!effective_permission(caller, owner, path)) {
    fail(ErrorKind::kAccessDenied, "no access to " + path.str());
  }
  return it->second;
}

Account MockProvider::create_account(const std::string& username,
                                     const crypto::DerivedPassword& password) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kCreateAccount);
  if (!RemotePath::is_valid_segment(username)) {
    fail(ErrorKind::kInvalidArgument, "invalid username");
  }
  if (password.text().size() < kMinPasswordLength) {
    fail(ErrorKind::kPolicy, "password must be at least 8 characters");
  }
  if (!RemotePath::is_valid_segment(password.text())) {
    fail(ErrorKind::kPolicy, "password contains forbidden characters");
  }
  if (store_.accounts.contains(username)) {
    fail(ErrorKind::kConflict, "username " + username + " is taken on " + config_.id);
  }
  store_.accounts[username] = password.text();
  if (disk_) {
    disk_->add_owner(username);
    disk_->write_accounts(store_.accounts);
  }
  return Account{username, password};
}

void MockProvider::delete_account(const std::string& username,
                                  const crypto::DerivedPassword& password) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kDeleteAccount);
  check_password(username, password);
  auto owned = [&](const StoreKey& k) { return k.owner == username; };
  std::erase_if(store_.objects, [&](const auto& e) { return owned(e.first); });
  std::erase_if(store_.trash_objects, [&](const auto& e) { return owned(e.first); });
  std::erase_if(store_.folders, owned);
  std::erase_if(store_.trash_folders, owned);
  std::erase_if(store_.acl, [&](const auto& e) { return owned(e.first); });
  for (auto& [key, grants] : store_.acl) grants.erase(username);
  std::erase_if(store_.acl, [](const auto& e) { return e.second.empty(); });
  std::erase_if(tokens_, [&](const auto& e) { return e.second == username; });
  std::erase_if(codes_, [&](const auto& e) { return e.second.username == username; });
  store_.accounts.erase(username);
  if (disk_) {
    disk_->remove_owner(username);
    disk_->write_acl(store_.acl);
    disk_->write_tokens(tokens_);
    disk_->write_accounts(store_.accounts);
  }
}

AuthCode MockProvider::authenticate(const std::string& username,
                                    const crypto::DerivedPassword& password) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kAuthenticate);
  check_password(username, password);
  AuthCode code{random_opaque("code-"), username, clock_() + kAuthCodeLifetime};
  codes_[code.opaque] = PendingCode{username, code.expiry};
  return code;
}

AccessToken MockProvider::exchange_code(const AuthCode& code) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kExchangeCode);
  auto node = codes_.extract(code.opaque);
  if (!node) fail(ErrorKind::kAuth, "unknown or already used authorization code");
  const PendingCode& pending = node.mapped();
  if (clock_() >= pending.expiry) fail(ErrorKind::kAuth, "authorization code expired");
  if (pending.username != code.username || !store_.accounts.contains(pending.username)) {
    fail(ErrorKind::kAuth, "authorization code does not match its user");
  }
  AccessToken token{random_opaque("tok-"), pending.username};
  tokens_[token.opaque] = token.username;
  if (disk_) disk_->write_tokens(tokens_);
  return token;
}

EntryMeta MockProvider::upload_object(const AccessToken& token, std::string_view owner,
                                      const RemotePath& path, ByteView bytes,
                                      bool overwrite) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kUpload);
  const std::string& caller = caller_of(token);
  std::string ns = resolve_owner(caller, owner);
  require_file_path(path);
  StoreKey key{ns, path.str()};
  RemotePath parent = path.parent();
  if (!parent.is_root() && !store_.folders.contains(StoreKey{ns, parent.str()})) {
    fail(ErrorKind::kNotFound, "parent folder " + parent.str() + " does not exist");
  }
  bool exists = store_.objects.contains(key);
  if (caller != ns) {
    auto perm = effective_permission(caller, ns, exists ? path : parent);
    if (perm != Permission::kEdit) {
      fail(ErrorKind::kAccessDenied, "no edit permission on " + path.str());
    }
  }
  if (store_.folders.contains(key)) fail(ErrorKind::kConflict, path.str() + " is a folder");
  if (exists && !overwrite) fail(ErrorKind::kConflict, path.str() + " already exists");
  if (disk_) disk_->put_object(key, bytes);
  store_.objects[key] = Bytes(bytes.begin(), bytes.end());
  return meta_for(key, false, caller == ns ? std::nullopt : std::optional(ns));
}

Bytes MockProvider::download_object(const AccessToken& token, std::string_view owner,
                                    const RemotePath& path) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kDownload);
  const std::string& caller = caller_of(token);
  return readable_object(caller, resolve_owner(caller, owner), path);
}

Bytes MockProvider::read_range(const AccessToken& token, std::string_view owner,
                               const RemotePath& path, std::uint64_t offset,
                               std::uint64_t length) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kReadRange);
  const std::string& caller = caller_of(token);
  const Bytes& object = readable_object(caller, resolve_owner(caller, owner), path);
  if (offset >= object.size()) return {};
  auto end = offset + std::min<std::uint64_t>(length, object.size() - offset);
  return Bytes(object.begin() + static_cast<std::ptrdiff_t>(offset),
               object.begin() + static_cast<std::ptrdiff_t>(end));
}

EntryMeta MockProvider::create_folder(const AccessToken& token, std::string_view owner,
                                      const RemotePath& path) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kCreateFolder);
  const std::string& caller = caller_of(token);
  std::string ns = resolve_owner(caller, owner);
  if (path.is_root()) fail(ErrorKind::kConflict, "the root already exists");
  StoreKey key{ns, path.str()};
  RemotePath parent = path.parent();
  if (!parent.is_root() && !store_.folders.contains(StoreKey{ns, parent.str()})) {
    fail(ErrorKind::kNotFound, "parent folder " + parent.str() + " does not exist");
  }
  if (caller != ns && effective_permission(caller, ns, parent) != Permission::kEdit) {
    fail(ErrorKind::kAccessDenied, "no edit permission on " + parent.str());
  }
  if (is_live(key)) fail(ErrorKind::kConflict, path.str() + " already exists");
  if (disk_) disk_->make_folder(key);
  store_.folders.insert(key);
  return meta_for(key, true, caller == ns ? std::nullopt : std::optional(ns));
}

void MockProvider::delete_path(const AccessToken& token, std::string_view owner,
                               const RemotePath& path) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kDelete);
  const std::string& caller = caller_of(token);
  std::string ns = resolve_owner(caller, owner);
  StoreKey key{ns, path.str()};
  if (path.is_root() || !is_live(key)) fail(ErrorKind::kNotFound, "no such entry " + path.str());
  if (caller != ns) fail(ErrorKind::kAccessDenied, "only the owner can delete " + path.str());
  // Move-to-trash immediately followed by a purge of that trash entry; the
  // net effect is that neither the live tree nor the trash keeps anything at
  // or under the path.
  for (auto& k : keys_under(store_.objects, key)) store_.objects.erase(k);
  for (auto& k : keys_under(store_.folders, key)) store_.folders.erase(k);
  for (auto& k : keys_under(store_.acl, key)) store_.acl.erase(k);
  purge_trash(key);
  if (disk_) {
    disk_->remove_live(key);
    disk_->remove_trash(key);
    disk_->write_acl(store_.acl);
  }
}

void MockProvider::share_path(const AccessToken& token, std::string_view owner,
                              const RemotePath& path, const std::string& grantee,
                              Permission perm) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kShare);
  const std::string& caller = caller_of(token);
  std::string ns = resolve_owner(caller, owner);
  StoreKey key{ns, path.str()};
  if (path.is_root() || !is_live(key)) fail(ErrorKind::kNotFound, "no such entry " + path.str());
  if (caller != ns) fail(ErrorKind::kAccessDenied, "only the owner can share " + path.str());
  if (!store_.accounts.contains(grantee)) fail(ErrorKind::kNotFound, "no such user " + grantee);
  if (grantee == ns) fail(ErrorKind::kInvalidArgument, "cannot share with the owner");
  if (store_.objects.contains(key) && !config_.supports_file_sharing) {
    fail(ErrorKind::kCapability, config_.id + " can only share folders");
  }
  store_.acl[key][grantee] = perm;
  if (disk_) disk_->write_acl(store_.acl);
}

void MockProvider::unshare_path(const AccessToken& token, std::string_view owner,
                                const RemotePath& path, const std::string& grantee) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kUnshare);
  const std::string& caller = caller_of(token);
  std::string ns = resolve_owner(caller, owner);
  StoreKey key{ns, path.str()};
  if (path.is_root() || !is_live(key)) fail(ErrorKind::kNotFound, "no such entry " + path.str());
  if (caller != ns) fail(ErrorKind::kAccessDenied, "only the owner can unshare " + path.str());
  auto it = store_.acl.find(key);
  if (it == store_.acl.end() || it->second.erase(grantee) == 0) {
    fail(ErrorKind::kNotFound, path.str() + " is not shared with " + grantee);
  }
  if (it->second.empty()) store_.acl.erase(it);
  if (disk_) disk_->write_acl(store_.acl);
}

std::vector<EntryMeta> MockProvider::list_entries(const AccessToken& token) {
  std::lock_guard lock(mu_);
  enter(ProviderCall::kList);
  const std::string& caller = caller_of(token);

  std::map<StoreKey, bool> owned;  // key -> is folder
  std::map<std::pair<std::string, std::string>, bool> shared;  // (path, owner)
  for (const auto& [key, bytes] : store_.objects) {
    if (key.owner == caller) owned[key] = false;
  }
  for (const auto& key : store_.folders) {
    if (key.owner == caller) owned[key] = true;
  }
  for (const auto& [key, grants] : store_.acl) {
    if (!grants.contains(caller) || !is_live(key)) continue;
    for (const auto& k : keys_under(store_.folders, key)) shared[{k.path, k.owner}] = true;
    for (const auto& k : keys_under(store_.objects, key)) shared[{k.path, k.owner}] = false;
  }

  std::vector<EntryMeta> out;
  out.reserve(owned.size() + shared.size());
  for (const auto& [key, folder] : owned) out.push_back(meta_for(key, folder, std::nullopt));
  for (const auto& [path_owner, folder] : shared) {
    StoreKey key{path_owner.second, path_owner.first};
    out.push_back(meta_for(key, folder, key.owner));
  }
  return out;
}

ProviderStore MockProvider::dump_store() const {
  std::lock_guard lock(mu_);
  if (disk_) return disk_->load().store;
  return store_;
}

std::size_t MockProvider::call_count(ProviderCall call) const {
  std::lock_guard lock(mu_);
  return calls_[static_cast<std::size_t>(call)];
}

void MockProvider::reset_call_counts() {
  std::lock_guard lock(mu_);
  calls_.fill(0);
}

void MockProvider::inject_fault(std::size_t calls_to_skip) {
  std::lock_guard lock(mu_);
  fault_countdown_ = calls_to_skip;
}

void MockProvider::clear_fault() {
  std::lock_guard lock(mu_);
  fault_countdown_.reset();
}

void MockProvider::revoke_all_tokens() {
  std::lock_guard lock(mu_);
  tokens_.clear();
  if (disk_) disk_->write_tokens(tokens_);
}

void MockProvider::set_clock(Clock clock) {
  std::lock_guard lock(mu_);
  clock_ = std::move(clock);
}

void MockProvider::admin_put_object(const std::string& owner, const RemotePath& path,
                                    ByteView bytes) {
  std::lock_guard lock(mu_);
  StoreKey key{owner, path.str()};
  if (!store_.objects.contains(key)) fail(ErrorKind::kNotFound, "no such object " + path.str());
  if (disk_) disk_->put_object(key, bytes);
  store_.objects[key] = Bytes(bytes.begin(), bytes.end());
}

void MockProvider::admin_trash(const std::string& owner, const RemotePath& path) {
  std::lock_guard lock(mu_);
  StoreKey key{owner, path.str()};
  if (path.is_root() || !is_live(key)) fail(ErrorKind::kNotFound, "no such entry " + path.str());
  move_to_trash(key);
  if (disk_) disk_->write_acl(store_.acl);
}

}  // namespace twincloud
