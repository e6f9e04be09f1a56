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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twincloud/crypto.hpp"
#include "twincloud/error.hpp"
#include "twincloud/provider.hpp"
#include "twincloud/remote_path.hpp"

namespace twincloud {

// K key providers hold XOR shares of every file key; one data provider holds
// the envelopes. The ring order used for name-key placement is
// key_providers..., data_provider.
struct PlacementPolicy {
  std::vector<std::string> key_providers;
  std::string data_provider;

  // Throws Error(kConfig) on empty, duplicate or overlapping ids.
  void validate() const;
  std::vector<std::string> ring() const;
};

struct Session {
  std::string username;
  std::map<std::string, AccessToken> tokens;            // by provider id
  std::map<std::string, crypto::NameKeyPair> name_keys;  // keys for names ON that provider
  PlacementPolicy placement;
  std::filesystem::path staging_dir;
};

struct LogicalEntry {
  std::string logical_name;
  // Stored envelope size on the data provider.
  std::uint64_t size = 0;
  bool owned = false;
  std::optional<std::string> shared_from;
  // Set when the entry could not be decoded; logical_name is then a
  // placeholder.
  std::optional<std::string> diagnostic;
};

struct SyncFailure {
  std::string logical_name;
  ErrorKind kind;
  std::string message;
};

struct SyncReport {
  std::size_t written = 0;
  std::vector<std::string> files;  // logical names written, in order
  std::vector<SyncFailure> failures;
};

struct GatewayOptions {
  std::filesystem::path staging_dir;
  // Where access tokens are saved between logins; unset disables caching.
  std::optional<std::filesystem::path> token_cache;
};

// Client-side protocol engine. Files are encrypted locally; key shares go to
// the key providers inside per-file "_keyFolder" folders, envelopes go to the
// data provider, and sharing is done purely with provider ACLs. All remote
// names are deterministic name tokens, so nothing is indexed locally.
//
// Operations on distinct logical names may run concurrently. Failed uploads
// and shares are rolled back; staging is empty after every call.
class Gateway {
 public:
  static constexpr std::string_view kKeyFolderSuffix = "_keyFolder";
  static constexpr std::string_view kKeySuffix = ".key";
  static constexpr std::string_view kMacSuffix = ".mac";
  static constexpr std::string_view kMacKeySuffix = ".mackey";
  static constexpr std::string_view kControlFolder = ".twincloud";
  static constexpr std::string_view kNameKeyFile = "namekey";

  Gateway(std::vector<std::shared_ptr<CloudProvider>> providers, PlacementPolicy placement,
          GatewayOptions options);

  // Creates one account per provider with derived passwords, then generates
  // and cross-places the name keys. Nothing remains if any step fails.
  Session signup(const std::string& username, const std::string& password);
  // Reuses cached tokens when they still work; otherwise runs the
  // authenticate/exchange flow for that provider.
  Session login(const std::string& username, const std::string& password);
  // Login from the token cache alone. Throws kAuth when it is cold or stale.
  Session resume(const std::string& username);

  LogicalEntry upload_file(const Session& session, const std::filesystem::path& local_path,
                           bool overwrite);
  // Writes the verified plaintext to dest_path; on any failure no file is
  // created there.
  void download_file(const Session& session, std::string_view logical_name,
                     const std::filesystem::path& dest_path);
  void delete_file(const Session& session, std::string_view logical_name);
  void share_file(const Session& session, std::string_view logical_name,
                  const std::string& grantee, Permission perm);
  void unshare_file(const Session& session, std::string_view logical_name,
                    const std::string& grantee);
  // Owned and shared-with-me entries sorted by logical name.
  std::vector<LogicalEntry> list_files(const Session& session);
  SyncReport sync_all(const Session& session, const std::filesystem::path& dest_dir);

  const PlacementPolicy& placement() const { return placement_; }

 private:
  struct Located;
  // Where shared entries seen in earlier listings live, so that a revoked
  // grantee is refused by the provider instead of told the file is gone.
  struct KnownShares;

  CloudProvider& provider(const std::string& id) const;
  CloudProvider& data_provider() const { return provider(placement_.data_provider); }

  Session open_session(const std::string& username,
                       std::map<std::string, AccessToken> tokens);
  AccessToken fresh_token(CloudProvider& p, const std::string& username,
                          const std::string& password);
  void save_tokens(const Session& session) const;

  Located layout_for(const Session& session, std::string_view logical_name) const;
  bool owns(const Session& session, const Located& located) const;
  std::vector<Located> locate_all(const Session& session);
  Located locate(const Session& session, std::string_view logical_name);
  Located locate_owned(const Session& session, std::string_view logical_name);
  void download_located(const Session& session, const Located& located,
                        const std::filesystem::path& dest_path);

  std::map<std::string, std::shared_ptr<CloudProvider>> providers_;
  PlacementPolicy placement_;
  GatewayOptions options_;
  std::shared_ptr<KnownShares> known_shares_;
};

// Validates a logical file name: one path segment, 1..255 bytes, UTF-8.
void check_logical_name(std::string_view name);

}  // namespace twincloud
