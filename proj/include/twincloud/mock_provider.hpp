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

#include <array>
#include <chrono>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "twincloud/provider.hpp"

namespace twincloud {

struct StoreKey {
  std::string owner;
  std::string path;  // RemotePath::str()

  auto operator<=>(const StoreKey&) const = default;
};

// Deep copy of everything a mock provider holds.
struct ProviderStore {
  std::map<std::string, std::string> accounts;  // username -> password
  std::map<StoreKey, Bytes> objects;
  std::set<StoreKey> folders;
  std::map<StoreKey, std::map<std::string, Permission>> acl;
  std::map<StoreKey, Bytes> trash_objects;
  std::set<StoreKey> trash_folders;

  bool operator==(const ProviderStore&) const = default;
};

enum class ProviderCall : std::size_t {
  kCreateAccount,
  kDeleteAccount,
  kAuthenticate,
  kExchangeCode,
  kUpload,
  kDownload,
  kReadRange,
  kCreateFolder,
  kDelete,
  kShare,
  kUnshare,
  kList,
};
inline constexpr std::size_t kProviderCallCount = 12;

class DiskMirror;

// Desk-scale stand-in for a commercial storage provider. With a
// persistence_root every mutation is written through to disk using the
// layout accounts.tsv, tokens.tsv, acl.tsv, data/<owner>/..., trash/<owner>/...
// and the state is reloaded from there on construction.
//
// Thread-safe: each call runs under one lock and either fully applies or
// leaves the store untouched.
class MockProvider final : public CloudProvider {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  static constexpr std::chrono::seconds kAuthCodeLifetime{60};
  static constexpr std::size_t kMinPasswordLength = 8;

  explicit MockProvider(ProviderConfig config);
  ~MockProvider() override;

  MockProvider(const MockProvider&) = delete;
  MockProvider& operator=(const MockProvider&) = delete;

  const ProviderConfig& config() const override { return config_; }

  Account create_account(const std::string& username,
                         const crypto::DerivedPassword& password) override;
  void delete_account(const std::string& username,
                      const crypto::DerivedPassword& password) override;
  AuthCode authenticate(const std::string& username,
                        const crypto::DerivedPassword& password) override;
  AccessToken exchange_code(const AuthCode& code) override;
  EntryMeta upload_object(const AccessToken& token, std::string_view owner,
                          const RemotePath& path, ByteView bytes,
                          bool overwrite) override;
  Bytes download_object(const AccessToken& token, std::string_view owner,
                        const RemotePath& path) override;
  Bytes read_range(const AccessToken& token, std::string_view owner,
                   const RemotePath& path, std::uint64_t offset,
                   std::uint64_t length) override;
  EntryMeta create_folder(const AccessToken& token, std::string_view owner,
                          const RemotePath& path) override;
  void delete_path(const AccessToken& token, std::string_view owner,
                   const RemotePath& path) override;
  void share_path(const AccessToken& token, std::string_view owner,
                  const RemotePath& path, const std::string& grantee,
                  Permission perm) override;
  void unshare_path(const AccessToken& token, std::string_view owner,
                    const RemotePath& path, const std::string& grantee) override;
  std::vector<EntryMeta> list_entries(const AccessToken& token) override;

  // --- Mock administration, not part of CloudProvider. ---

  // Snapshot of the stored state. For disk-backed providers this is read
  // back from the persistence root, so it reflects what is on disk.
  ProviderStore dump_store() const;

  std::size_t call_count(ProviderCall call) const;
  void reset_call_counts();

  // The call after `calls_to_skip` further calls fails with kUnavailable
  // without touching the store. One-shot.
  void inject_fault(std::size_t calls_to_skip);
  void clear_fault();

  void revoke_all_tokens();
  void set_clock(Clock clock);

  // Replaces object bytes in place, bypassing access control. Fault
  // injection hook for integrity tests.
  void admin_put_object(const std::string& owner, const RemotePath& path, ByteView bytes);
  // Deletes the way an external client would: the entry moves to the trash.
  void admin_trash(const std::string& owner, const RemotePath& path);

 private:
  struct PendingCode {
    std::string username;
    std::chrono::steady_clock::time_point expiry;
  };

  void enter(ProviderCall call);
  const std::string& caller_of(const AccessToken& token) const;
  std::string resolve_owner(const std::string& caller, std::string_view owner) const;
  void check_password(const std::string& username,
                      const crypto::DerivedPassword& password) const;
  std::optional<Permission> effective_permission(const std::string& user,
                                                 const std::string& owner,
                                                 const RemotePath& path) const;
  bool is_live(const StoreKey& key) const;
  EntryMeta meta_for(const StoreKey& key, bool folder,
                     std::optional<std::string> shared_from) const;
  // Moves `key` and its descendants to the trash; removes their grants.
  void move_to_trash(const StoreKey& key);
  void purge_trash(const StoreKey& key);
  const Bytes& readable_object(const std::string& caller, const std::string& owner,
                               const RemotePath& path) const;

  ProviderConfig config_;
  std::unique_ptr<DiskMirror> disk_;

  mutable std::mutex mu_;
  ProviderStore store_;
  std::map<std::string, std::string> tokens_;  // opaque -> username
  std::map<std::string, PendingCode> codes_;
  std::array<std::size_t, kProviderCallCount> calls_{};
  std::optional<std::size_t> fault_countdown_;
  Clock clock_;
};

}  // namespace twincloud
