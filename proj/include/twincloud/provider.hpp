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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twincloud/bytes.hpp"
#include "twincloud/crypto.hpp"
#include "twincloud/remote_path.hpp"

namespace twincloud {

struct ProviderConfig {
  std::string id;
  // Feeds password derivation; never contacted.
  std::string url;
  // False models a provider that can only share folders privately.
  bool supports_file_sharing = true;
  // Unset keeps the provider state in memory.
  std::optional<std::filesystem::path> persistence_root;
};

enum class Permission { kRead, kEdit };

std::string_view permission_name(Permission perm);

struct Account {
  std::string username;
  crypto::DerivedPassword password;
};

struct AuthCode {
  std::string opaque;
  std::string username;
  std::chrono::steady_clock::time_point expiry;
};

struct AccessToken {
  std::string opaque;
  std::string username;
};

struct EntryMeta {
  RemotePath path;
  std::string owner;
  std::uint64_t size = 0;
  // Set when the entry is visible through a grant rather than ownership.
  std::optional<std::string> shared_from;
};

// What the gateway needs from a cloud storage provider.
//
// Every path-taking call names the namespace owner explicitly; an empty
// `owner` means the token's own user. All calls throw twincloud::Error:
// kAuth for bad tokens or credentials, kNotFound, kConflict, kAccessDenied,
// kCapability, kPolicy, and kUnavailable for transport failures.
class CloudProvider {
 public:
  virtual ~CloudProvider() = default;

  virtual const ProviderConfig& config() const = 0;

  // Password must be at least 8 characters.
  virtual Account create_account(const std::string& username,
                                 const crypto::DerivedPassword& password) = 0;
  // Removes the account and everything it owns. Used to undo a partial
  // signup.
  virtual void delete_account(const std::string& username,
                              const crypto::DerivedPassword& password) = 0;

  // Authorization-code flow: credentials -> single-use code -> token.
  virtual AuthCode authenticate(const std::string& username,
                                const crypto::DerivedPassword& password) = 0;
  virtual AccessToken exchange_code(const AuthCode& code) = 0;

  virtual EntryMeta upload_object(const AccessToken& token, std::string_view owner,
                                  const RemotePath& path, ByteView bytes,
                                  bool overwrite) = 0;
  virtual Bytes download_object(const AccessToken& token, std::string_view owner,
                                const RemotePath& path) = 0;
  // Bytes [offset, offset + length) clipped to the object size.
  virtual Bytes read_range(const AccessToken& token, std::string_view owner,
                           const RemotePath& path, std::uint64_t offset,
                           std::uint64_t length) = 0;
  virtual EntryMeta create_folder(const AccessToken& token, std::string_view owner,
                                  const RemotePath& path) = 0;
  // Removes the entry, its children and any trash copies. Owner only.
  virtual void delete_path(const AccessToken& token, std::string_view owner,
                           const RemotePath& path) = 0;
  virtual void share_path(const AccessToken& token, std::string_view owner,
                          const RemotePath& path, const std::string& grantee,
                          Permission perm) = 0;
  virtual void unshare_path(const AccessToken& token, std::string_view owner,
                            const RemotePath& path, const std::string& grantee) = 0;
  // Owned entries by path, then entries shared with the caller by path.
  virtual std::vector<EntryMeta> list_entries(const AccessToken& token) = 0;
};

}  // namespace twincloud
