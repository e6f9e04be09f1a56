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

#include "twincloud/gateway.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <system_error>
#include <tuple>
#include <utility>

#include "twincloud/key_file.hpp"
#include "twincloud/staging.hpp"
#include "twincloud/token_cache.hpp"

namespace twincloud {
namespace fs = std::filesystem;

struct Gateway::Located {
  LogicalEntry entry;
  std::string owner;
  std::string data_name;
  std::vector<RemotePath> key_folders;  // one per key provider
  std::vector<RemotePath> key_files;
  RemotePath mac_file;
  RemotePath blob;
  RemotePath mackey;
};

struct Gateway::KnownShares {
  std::mutex mu;
  // (username, logical name) -> location.
  std::map<std::pair<std::string, std::string>, Located> by_name;
};

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

RemotePath top_level(std::string_view name, EntryKind kind) {
  return RemotePath({std::string(name)}, kind);
}

RemotePath name_key_path() {
  return RemotePath({std::string(Gateway::kControlFolder), std::string(Gateway::kNameKeyFile)},
                    EntryKind::kFile);
}

template <typename Fn>
void best_effort(Fn&& fn) {
  try {
    fn();
  } catch (...) {
  }
}

Bytes read_local_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    fail(ErrorKind::kNotFound, "no such local file " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Writes through a sibling temporary and renames, so dest_path either gets
// the complete content or is left alone.
void write_local_file(const fs::path& dest_path, ByteView content) {
  fs::path tmp = dest_path;
  tmp += ".partial-" + to_hex(crypto::random_bytes(6));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(content.data()),
              static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      fail(ErrorKind::kIo, "cannot write " + dest_path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, dest_path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    fail(ErrorKind::kIo, "cannot write " + dest_path.string() + ": " + ec.message());
  }
}

}  // namespace

void check_logical_name(std::string_view name) {
  if (name.empty() || name.size() > crypto::kMaxTokenNameBytes ||
      !RemotePath::is_valid_segment(name) || !is_valid_utf8(as_bytes(name))) {
    fail(ErrorKind::kInvalidArgument, "invalid file name '" + std::string(name) + "'");
  }
}

void PlacementPolicy::validate() const {
  if (key_providers.empty()) fail(ErrorKind::kConfig, "placement needs at least one key provider");
  if (data_provider.empty()) fail(ErrorKind::kConfig, "placement needs a data provider");
  std::set<std::string> seen;
  for (const auto& id : key_providers) {
    if (id.empty()) fail(ErrorKind::kConfig, "placement has an empty provider id");
    if (!seen.insert(id).second) {
      fail(ErrorKind::kConfig, "provider '" + id + "' listed twice in key_providers");
    }
  }
  if (seen.contains(data_provider)) {
    fail(ErrorKind::kConfig,
         "data_provider '" + data_provider + "' is also a key provider");
  }
}

std::vector<std::string> PlacementPolicy::ring() const {
  std::vector<std::string> ids = key_providers;
  ids.push_back(data_provider);
  return ids;
}

Gateway::Gateway(std::vector<std::shared_ptr<CloudProvider>> providers,
                 PlacementPolicy placement, GatewayOptions options)
    : placement_(std::move(placement)),
      options_(std::move(options)),
      known_shares_(std::make_shared<KnownShares>()) {
  placement_.validate();
  for (auto& p : providers) {
    if (!p) fail(ErrorKind::kConfig, "null provider");
    std::string id = p->config().id;
    if (!providers_.emplace(id, std::move(p)).second) {
      fail(ErrorKind::kConfig, "duplicate provider id '" + id + "'");
    }
  }
  for (const auto& id : placement_.ring()) {
    if (!providers_.contains(id)) {
      fail(ErrorKind::kConfig, "placement references unknown provider '" + id + "'");
    }
  }
}

CloudProvider& Gateway::provider(const std::string& id) const {
  auto it = providers_.find(id);
  if (it == providers_.end()) fail(ErrorKind::kConfig, "unknown provider '" + id + "'");
  return *it->second;
}

AccessToken Gateway::fresh_token(CloudProvider& p, const std::string& username,
                                 const std::string& password) {
  auto derived = crypto::derive_provider_password(username, password, p.config().url);
  return p.exchange_code(p.authenticate(username, derived));
}

Session Gateway::open_session(const std::string& username,
                              std::map<std::string, AccessToken> tokens) {
  Session session{username, std::move(tokens), {}, placement_, options_.staging_dir};
  auto ring = placement_.ring();
  const std::size_t n = ring.size();
  // The name key for ring[i] is kept on ring[i + 1].
  for (std::size_t host = 0; host < n; ++host) {
    Bytes bytes = provider(ring[host]).download_object(session.tokens.at(ring[host]), "",
                                                       name_key_path());
    session.name_keys[ring[(host + n - 1) % n]] = crypto::NameKeyPair::parse(bytes);
    crypto::secure_wipe(bytes);
  }
  return session;
}

void Gateway::save_tokens(const Session& session) const {
  if (!options_.token_cache) return;
  std::map<std::string, std::string> lines;
  for (const auto& [id, token] : session.tokens) lines[id] = token.opaque;
  TokenCache(*options_.token_cache).store(session.username, lines);
}

Session Gateway::signup(const std::string& username, const std::string& password) {
  if (username.empty() || password.empty()) {
    fail(ErrorKind::kInvalidArgument, "username and password must be non-empty");
  }
  auto ring = placement_.ring();
  const std::size_t n = ring.size();
  std::vector<std::pair<CloudProvider*, crypto::DerivedPassword>> created;
  try {
    for (const auto& id : ring) {
      CloudProvider& p = provider(id);
      auto derived = crypto::derive_provider_password(username, password, p.config().url);
      p.create_account(username, derived);
      created.emplace_back(&p, derived);
    }
    std::map<std::string, AccessToken> tokens;
    for (const auto& id : ring) tokens[id] = fresh_token(provider(id), username, password);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& host = ring[(i + 1) % n];
      CloudProvider& p = provider(host);
      const AccessToken& token = tokens.at(host);
      p.create_folder(token, "", top_level(kControlFolder, EntryKind::kFolder));
      Bytes key_bytes = crypto::NameKeyPair::generate().serialize();
      p.upload_object(token, "", name_key_path(), key_bytes, false);
      crypto::secure_wipe(key_bytes);
    }
    Session session = open_session(username, std::move(tokens));
    save_tokens(session);
    return session;
  } catch (...) {
    for (auto it = created.rbegin(); it != created.rend(); ++it) {
      best_effort([&] { it->first->delete_account(username, it->second); });
    }
    throw;
  }
}

Session Gateway::login(const std::string& username, const std::string& password) {
  if (username.empty() || password.empty()) {
    fail(ErrorKind::kInvalidArgument, "username and password must be non-empty");
  }
  std::map<std::string, std::string> cached;
  if (options_.token_cache) cached = TokenCache(*options_.token_cache).load(username);

  std::map<std::string, AccessToken> tokens;
  std::vector<std::string> from_cache;
  for (const auto& id : placement_.ring()) {
    if (auto it = cached.find(id); it != cached.end()) {
      tokens[id] = AccessToken{it->second, username};
      from_cache.push_back(id);
    } else {
      tokens[id] = fresh_token(provider(id), username, password);
    }
  }
  std::optional<Session> session;
  try {
    session = open_session(username, tokens);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kAuth || from_cache.empty()) throw;
    // A cached token was rejected: redo the full flow for those providers.
    for (const auto& id : from_cache) tokens[id] = fresh_token(provider(id), username, password);
    session = open_session(username, tokens);
  }
  save_tokens(*session);
  return std::move(*session);
}

Session Gateway::resume(const std::string& username) {
  if (!options_.token_cache) fail(ErrorKind::kAuth, "no token cache configured; log in first");
  auto cached = TokenCache(*options_.token_cache).load(username);
  std::map<std::string, AccessToken> tokens;
  for (const auto& id : placement_.ring()) {
    auto it = cached.find(id);
    if (it == cached.end()) fail(ErrorKind::kAuth, "not logged in to " + id + "; log in first");
    tokens[id] = AccessToken{it->second, username};
  }
  return open_session(username, std::move(tokens));
}

Gateway::Located Gateway::layout_for(const Session& session,
                                     std::string_view logical_name) const {
  check_logical_name(logical_name);
  Located l;
  l.entry.logical_name = std::string(logical_name);
  l.entry.owned = true;
  l.owner = session.username;
  l.data_name = crypto::encrypt_name(session.name_keys.at(placement_.data_provider), logical_name);
  for (const auto& id : placement_.key_providers) {
    std::string token = crypto::encrypt_name(session.name_keys.at(id), logical_name);
    RemotePath folder = top_level(token + std::string(kKeyFolderSuffix), EntryKind::kFolder);
    l.key_files.push_back(folder.child(token + std::string(kKeySuffix), EntryKind::kFile));
    if (l.key_folders.empty()) {
      l.mac_file = folder.child(token + std::string(kMacSuffix), EntryKind::kFile);
    }
    l.key_folders.push_back(std::move(folder));
  }
  l.blob = top_level(l.data_name, EntryKind::kFile);
  l.mackey = top_level(l.data_name + std::string(kMacKeySuffix), EntryKind::kFile);
  return l;
}

bool Gateway::owns(const Session& session, const Located& located) const {
  try {
    data_provider().read_range(session.tokens.at(placement_.data_provider), "", located.blob, 0, 0);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNotFound) return false;
    throw;
  }
}

std::vector<Gateway::Located> Gateway::locate_all(const Session& session) {
  std::vector<Located> out;
  CloudProvider& data = data_provider();
  const AccessToken& data_token = session.tokens.at(placement_.data_provider);

  // Owned entries come from the data provider's own namespace.
  std::map<std::pair<std::string, std::string>, std::uint64_t> shared_sizes;
  for (const EntryMeta& meta : data.list_entries(data_token)) {
    if (meta.shared_from) {
      shared_sizes[{meta.owner, meta.path.str()}] = meta.size;
      continue;
    }
    if (meta.path.is_folder() || meta.path.segments().size() != 1) continue;
    std::string token(meta.path.name());
    if (ends_with(token, kMacKeySuffix)) continue;
    try {
      std::string name =
          crypto::decrypt_name(session.name_keys.at(placement_.data_provider), token);
      Located l = layout_for(session, name);
      l.entry.size = meta.size;
      out.push_back(std::move(l));
    } catch (const Error& e) {
      Located l;
      l.entry = LogicalEntry{"?unreadable:" + token, meta.size, true, std::nullopt, e.what()};
      l.owner = session.username;
      out.push_back(std::move(l));
    }
  }

  // Shared entries: key folders shared with us on each key provider, paired
  // through the data-name pointer in their key files.
  struct ShareRef {
    RemotePath folder;
    RemotePath file;
    crypto::Key256 share;
  };
  using OwnerAndData = std::pair<std::string, std::string>;
  const std::size_t k = placement_.key_providers.size();
  std::vector<std::map<OwnerAndData, ShareRef>> refs(k);
  for (std::size_t i = 0; i < k; ++i) {
    CloudProvider& p = provider(placement_.key_providers[i]);
    const AccessToken& token = session.tokens.at(placement_.key_providers[i]);
    for (const EntryMeta& meta : p.list_entries(token)) {
      if (!meta.shared_from || !meta.path.is_folder() || meta.path.segments().size() != 1) {
        continue;
      }
      std::string folder_name(meta.path.name());
      if (!ends_with(folder_name, kKeyFolderSuffix) ||
          folder_name.size() == kKeyFolderSuffix.size()) {
        continue;
      }
      std::string base = folder_name.substr(0, folder_name.size() - kKeyFolderSuffix.size());
      try {
        RemotePath file = meta.path.child(base + std::string(kKeySuffix), EntryKind::kFile);
        Bytes raw = p.download_object(token, meta.owner, file);
        KeyFileRecord record = KeyFileRecord::parse(raw);
        crypto::secure_wipe(raw);
        refs[i][{meta.owner, record.data_name}] = ShareRef{meta.path, file, record.key_share};
        crypto::secure_wipe(record.key_share);
      } catch (const Error& e) {
        if (i != 0) continue;
        Located l;
        l.entry = LogicalEntry{"?unreadable:" + folder_name, 0, false, meta.owner, e.what()};
        l.owner = meta.owner;
        out.push_back(std::move(l));
      }
    }
  }

  for (const auto& [owner_and_data, first] : refs[0]) {
    const auto& [owner, data_name] = owner_and_data;
    Located l;
    l.owner = owner;
    l.data_name = data_name;
    l.entry.owned = false;
    l.entry.shared_from = owner;
    l.entry.logical_name = "?unreadable:" + data_name;
    try {
      std::vector<crypto::KeyShare> shares;
      for (std::size_t i = 0; i < k; ++i) {
        auto it = refs[i].find(owner_and_data);
        if (it == refs[i].end()) {
          fail(ErrorKind::kNotFound, "key share missing on " + placement_.key_providers[i]);
        }
        l.key_folders.push_back(it->second.folder);
        l.key_files.push_back(it->second.file);
        shares.push_back(crypto::KeyShare{i, it->second.share});
      }
      std::string base0 = std::string(first.folder.name());
      base0.resize(base0.size() - kKeyFolderSuffix.size());
      l.mac_file = first.folder.child(base0 + std::string(kMacSuffix), EntryKind::kFile);
      l.blob = top_level(data_name, EntryKind::kFile);
      l.mackey = top_level(data_name + std::string(kMacKeySuffix), EntryKind::kFile);
      auto size_it = shared_sizes.find({owner, l.blob.str()});
      if (size_it == shared_sizes.end()) {
        fail(ErrorKind::kNotFound, "envelope is not shared on " + placement_.data_provider);
      }
      l.entry.size = size_it->second;

      crypto::SymmetricKey key = crypto::combine_key(shares);
      for (auto& s : shares) crypto::secure_wipe(s.bytes);
      Bytes prefix = data.read_range(data_token, owner, l.blob, 0, crypto::kHeaderProbeBytes);
      std::size_t extent = crypto::blob_header_extent(key, prefix);
      if (extent > prefix.size() && prefix.size() < l.entry.size) {
        prefix = data.read_range(data_token, owner, l.blob, 0, extent);
      }
      std::string name = crypto::decrypt_blob_name(key, prefix, l.entry.size);
      check_logical_name(name);
      l.entry.logical_name = std::move(name);
    } catch (const Error& e) {
      l.entry.diagnostic = e.what();
    }
    out.push_back(std::move(l));
  }
  for (auto& ref_map : refs) {
    for (auto& [key, ref] : ref_map) crypto::secure_wipe(ref.share);
  }

  std::sort(out.begin(), out.end(), [](const Located& a, const Located& b) {
    return std::make_tuple(a.entry.logical_name, !a.entry.owned, a.owner) <
           std::make_tuple(b.entry.logical_name, !b.entry.owned, b.owner);
  });
  {
    std::lock_guard lock(known_shares_->mu);
    for (const Located& l : out) {
      if (!l.entry.owned && !l.entry.diagnostic) {
        known_shares_->by_name.insert_or_assign({session.username, l.entry.logical_name}, l);
      }
    }
  }
  return out;
}

Gateway::Located Gateway::locate(const Session& session, std::string_view logical_name) {
  Located owned = layout_for(session, logical_name);
  if (owns(session, owned)) return owned;
  std::vector<Located> matches;
  for (auto& l : locate_all(session)) {
    if (!l.entry.owned && !l.entry.diagnostic && l.entry.logical_name == logical_name) {
      matches.push_back(std::move(l));
    }
  }
  if (matches.empty()) {
    std::lock_guard lock(known_shares_->mu);
    auto it = known_shares_->by_name.find({session.username, std::string(logical_name)});
    if (it != known_shares_->by_name.end()) return it->second;
    fail(ErrorKind::kNotFound, "no such file " + std::string(logical_name));
  }
  if (matches.size() > 1) {
    fail(ErrorKind::kConflict,
         "several users shared a file named " + std::string(logical_name));
  }
  return std::move(matches.front());
}

Gateway::Located Gateway::locate_owned(const Session& session, std::string_view logical_name) {
  Located owned = layout_for(session, logical_name);
  if (owns(session, owned)) return owned;
  for (const auto& l : locate_all(session)) {
    if (!l.entry.owned && l.entry.logical_name == logical_name) {
      fail(ErrorKind::kAccessDenied,
           std::string(logical_name) + " is shared with you by " + l.owner +
               "; only the owner can do that");
    }
  }
  fail(ErrorKind::kNotFound, "no such file " + std::string(logical_name));
}

LogicalEntry Gateway::upload_file(const Session& session, const fs::path& local_path,
                                  bool overwrite) {
  std::string name = local_path.filename().string();
  check_logical_name(name);
  Bytes content = read_local_file(local_path);
  Located l = layout_for(session, name);
  if (!overwrite && owns(session, l)) fail(ErrorKind::kConflict, name + " already exists");

  crypto::SymmetricKey key = crypto::generate_key();
  crypto::CipherBlob blob = crypto::encrypt_blob(key, name, content);
  crypto::MacKey mac_key = crypto::MacKey::generate();
  crypto::MacTag tag = crypto::compute_mac(mac_key, content);
  crypto::secure_wipe(content);
  auto shares = crypto::split_key(key, placement_.key_providers.size());

  StagingArea staging(session.staging_dir);
  std::vector<StagingArea::File> staged_keys;
  for (auto& share : shares) {
    KeyFileRecord record{share.bytes, l.data_name};
    Bytes bytes = record.serialize();
    staged_keys.push_back(staging.stage("key", bytes));
    crypto::secure_wipe(bytes);
    crypto::secure_wipe(record.key_share);
    crypto::secure_wipe(share.bytes);
  }
  StagingArea::File staged_blob = staging.stage("blob", blob.serialize());

  struct Undo {
    CloudProvider* provider;
    const AccessToken* token;
    RemotePath path;
    std::optional<Bytes> previous;
  };
  std::vector<Undo> journal;
  auto put = [&](CloudProvider& p, const AccessToken& token, const RemotePath& path,
                 ByteView bytes) {
    std::optional<Bytes> previous;
    if (overwrite) {
      try {
        previous = p.download_object(token, "", path);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNotFound) throw;
      }
    }
    p.upload_object(token, "", path, bytes, overwrite);
    journal.push_back(Undo{&p, &token, path, std::move(previous)});
  };

  try {
    for (std::size_t i = 0; i < placement_.key_providers.size(); ++i) {
      const std::string& id = placement_.key_providers[i];
      CloudProvider& p = provider(id);
      const AccessToken& token = session.tokens.at(id);
      try {
        p.create_folder(token, "", l.key_folders[i]);
        journal.push_back(Undo{&p, &token, l.key_folders[i], std::nullopt});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kConflict) throw;
        // A key folder without an envelope is left over from an interrupted
        // upload; only an explicit overwrite may reuse it.
        if (!overwrite) fail(ErrorKind::kConflict, name + " already has key material on " + id);
      }
      Bytes record = staged_keys[i].read();
      put(p, token, l.key_files[i], record);
      crypto::secure_wipe(record);
      if (i == 0) put(p, token, l.mac_file, tag.bytes());
    }
    const AccessToken& data_token = session.tokens.at(placement_.data_provider);
    put(data_provider(), data_token, l.blob, staged_blob.read());
    put(data_provider(), data_token, l.mackey, mac_key.bytes());
  } catch (...) {
    for (auto it = journal.rbegin(); it != journal.rend(); ++it) {
      best_effort([&] {
        if (it->previous) {
          it->provider->upload_object(*it->token, "", it->path, *it->previous, true);
        } else {
          it->provider->delete_path(*it->token, "", it->path);
        }
      });
    }
    throw;
  }
  l.entry.size = blob.serialized_size();
  return l.entry;
}

void Gateway::download_located(const Session& session, const Located& l,
                               const fs::path& dest_path) {
  if (l.entry.diagnostic) {
    fail(ErrorKind::kFormat, l.entry.logical_name + ": " + *l.entry.diagnostic);
  }
  StagingArea staging(session.staging_dir);
  std::vector<StagingArea::File> staged_keys;
  for (std::size_t i = 0; i < placement_.key_providers.size(); ++i) {
    const std::string& id = placement_.key_providers[i];
    staged_keys.push_back(staging.stage(
        "key", provider(id).download_object(session.tokens.at(id), l.owner, l.key_files[i])));
  }
  const std::string& first_key = placement_.key_providers.front();
  StagingArea::File staged_tag = staging.stage(
      "mac", provider(first_key).download_object(session.tokens.at(first_key), l.owner, l.mac_file));
  const AccessToken& data_token = session.tokens.at(placement_.data_provider);
  StagingArea::File staged_blob =
      staging.stage("blob", data_provider().download_object(data_token, l.owner, l.blob));
  StagingArea::File staged_mackey =
      staging.stage("mackey", data_provider().download_object(data_token, l.owner, l.mackey));

  std::vector<crypto::KeyShare> shares;
  for (std::size_t i = 0; i < staged_keys.size(); ++i) {
    Bytes raw = staged_keys[i].read();
    KeyFileRecord record = KeyFileRecord::parse(raw);
    crypto::secure_wipe(raw);
    if (record.data_name != l.data_name) {
      fail(ErrorKind::kIntegrity, "key file does not belong to " + l.entry.logical_name);
    }
    shares.push_back(crypto::KeyShare{i, record.key_share});
    crypto::secure_wipe(record.key_share);
  }
  crypto::SymmetricKey key = crypto::combine_key(shares);
  for (auto& s : shares) crypto::secure_wipe(s.bytes);

  crypto::BlobContents contents =
      crypto::decrypt_blob(key, crypto::CipherBlob::parse(staged_blob.read()));
  if (contents.logical_name != l.entry.logical_name) {
    crypto::secure_wipe(contents.content);
    fail(ErrorKind::kIntegrity, "envelope carries a different name than " + l.entry.logical_name);
  }
  Bytes mac_key_bytes = staged_mackey.read();
  crypto::MacKey mac_key = crypto::MacKey::from_bytes(mac_key_bytes);
  crypto::secure_wipe(mac_key_bytes);
  crypto::MacTag tag = crypto::MacTag::from_bytes(staged_tag.read());
  if (!crypto::verify_mac(mac_key, contents.content, tag)) {
    crypto::secure_wipe(contents.content);
    fail(ErrorKind::kIntegrity, "integrity check failed for " + l.entry.logical_name);
  }
  write_local_file(dest_path, contents.content);
  crypto::secure_wipe(contents.content);
}

void Gateway::download_file(const Session& session, std::string_view logical_name,
                            const fs::path& dest_path) {
  download_located(session, locate(session, logical_name), dest_path);
}

void Gateway::delete_file(const Session& session, std::string_view logical_name) {
  Located l = locate_owned(session, logical_name);
  auto remove = [&](const std::string& id, const RemotePath& path) {
    try {
      provider(id).delete_path(session.tokens.at(id), "", path);
    } catch (const Error& e) {
      // Leftovers of an interrupted delete are already gone.
      if (e.kind() != ErrorKind::kNotFound) throw;
    }
  };
  for (std::size_t i = 0; i < placement_.key_providers.size(); ++i) {
    remove(placement_.key_providers[i], l.key_folders[i]);
  }
  remove(placement_.data_provider, l.blob);
  remove(placement_.data_provider, l.mackey);
}

void Gateway::share_file(const Session& session, std::string_view logical_name,
                         const std::string& grantee, Permission perm) {
  if (grantee == session.username) {
    fail(ErrorKind::kInvalidArgument, "cannot share a file with yourself");
  }
  Located l = locate_owned(session, logical_name);
  std::vector<std::pair<std::string, RemotePath>> legs;
  for (std::size_t i = 0; i < placement_.key_providers.size(); ++i) {
    legs.emplace_back(placement_.key_providers[i], l.key_folders[i]);
  }
  legs.emplace_back(placement_.data_provider, l.blob);
  legs.emplace_back(placement_.data_provider, l.mackey);

  std::size_t done = 0;
  try {
    for (; done < legs.size(); ++done) {
      const auto& [id, path] = legs[done];
      provider(id).share_path(session.tokens.at(id), "", path, grantee, perm);
    }
  } catch (...) {
    while (done-- > 0) {
      const auto& [id, path] = legs[done];
      best_effort([&] { provider(id).unshare_path(session.tokens.at(id), "", path, grantee); });
    }
    throw;
  }
}

void Gateway::unshare_file(const Session& session, std::string_view logical_name,
                           const std::string& grantee) {
  Located l = locate_owned(session, logical_name);
  std::vector<std::pair<std::string, RemotePath>> legs;
  for (std::size_t i = 0; i < placement_.key_providers.size(); ++i) {
    legs.emplace_back(placement_.key_providers[i], l.key_folders[i]);
  }
  legs.emplace_back(placement_.data_provider, l.blob);
  legs.emplace_back(placement_.data_provider, l.mackey);

  std::size_t removed = 0;
  for (const auto& [id, path] : legs) {
    try {
      provider(id).unshare_path(session.tokens.at(id), "", path, grantee);
      ++removed;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotFound) throw;
    }
  }
  if (removed == 0) {
    fail(ErrorKind::kNotFound,
         std::string(logical_name) + " is not shared with " + grantee);
  }
}

std::vector<LogicalEntry> Gateway::list_files(const Session& session) {
  std::vector<LogicalEntry> out;
  for (auto& l : locate_all(session)) out.push_back(std::move(l.entry));
  return out;
}

SyncReport Gateway::sync_all(const Session& session, const fs::path& dest_dir) {
  std::error_code ec;
  fs::create_directories(dest_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + dest_dir.string());
  SyncReport report;
  std::set<std::string> written;
  for (const Located& l : locate_all(session)) {
    const std::string& name = l.entry.logical_name;
    try {
      if (l.entry.diagnostic) fail(ErrorKind::kFormat, *l.entry.diagnostic);
      if (!written.insert(name).second) {
        fail(ErrorKind::kConflict, "another entry named " + name + " was already written");
      }
      download_located(session, l, dest_dir / name);
      ++report.written;
      report.files.push_back(name);
    } catch (const Error& e) {
      report.failures.push_back(SyncFailure{name, e.kind(), e.what()});
    }
  }
  return report;
}

}  // namespace twincloud
