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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twincloud/bytes.hpp"

// Cryptographic primitives: AES-256-CBC content envelopes, HMAC-SHA-256
// integrity tags, deterministic filename tokens, provider password
// derivation and XOR key splitting. Backed by OpenSSL's libcrypto.
namespace twincloud::crypto {

inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kBlockSize = 16;
inline constexpr std::size_t kIvSize = 16;
inline constexpr std::size_t kMacTagSize = 32;
inline constexpr std::size_t kNameKeyPairSize = 64;
inline constexpr std::size_t kMaxBlobNameBytes = 65535;
inline constexpr std::size_t kMaxTokenNameBytes = 255;
inline constexpr std::size_t kDerivedPasswordLength = 24;
// IV plus the first two ciphertext blocks: always enough to read the
// name-length field of an envelope.
inline constexpr std::size_t kHeaderProbeBytes = kIvSize + 2 * kBlockSize;

using Block = std::array<std::uint8_t, kBlockSize>;
using Key256 = std::array<std::uint8_t, kKeySize>;

// Overwrites `bytes` in a way the optimizer cannot elide.
void secure_wipe(std::span<std::uint8_t> bytes);

// Fills `out` from the OS CSPRNG; throws Error(kCrypto) on failure.
void random_fill(std::span<std::uint8_t> out);
Bytes random_bytes(std::size_t n);

struct KeyShare;

// 256-bit content-encryption key. Only generate_key() and combine_key()
// can mint one.
class SymmetricKey {
 public:
  SymmetricKey(const SymmetricKey&) = default;
  SymmetricKey& operator=(const SymmetricKey&) = default;
  ~SymmetricKey() { secure_wipe(bytes_); }

  ByteView bytes() const { return bytes_; }
  bool operator==(const SymmetricKey&) const = default;

 private:
  explicit SymmetricKey(const Key256& bytes) : bytes_(bytes) {}

  friend SymmetricKey generate_key();
  friend SymmetricKey combine_key(std::span<const KeyShare> shares);

  Key256 bytes_;
};

class MacKey {
 public:
  // Throws Error(kFormat) unless `bytes` is exactly 32 bytes.
  static MacKey from_bytes(ByteView bytes);
  static MacKey generate();

  MacKey(const MacKey&) = default;
  MacKey& operator=(const MacKey&) = default;
  ~MacKey() { secure_wipe(bytes_); }

  ByteView bytes() const { return bytes_; }

 private:
  explicit MacKey(const Key256& bytes) : bytes_(bytes) {}
  Key256 bytes_;
};

class MacTag {
 public:
  static MacTag from_bytes(ByteView bytes);
  explicit MacTag(const std::array<std::uint8_t, kMacTagSize>& bytes)
      : bytes_(bytes) {}

  ByteView bytes() const { return bytes_; }
  bool operator==(const MacTag&) const = default;

 private:
  std::array<std::uint8_t, kMacTagSize> bytes_;
};

// One pair per provider whose object names get encrypted. Serialized as
// enc_part || mac_part.
struct NameKeyPair {
  Key256 enc_part{};
  Key256 mac_part{};

  static NameKeyPair generate();
  static NameKeyPair parse(ByteView bytes);
  Bytes serialize() const;

  bool operator==(const NameKeyPair&) const = default;
};

struct KeyShare {
  std::size_t index = 0;
  Key256 bytes{};
};

class DerivedPassword {
 public:
  explicit DerivedPassword(std::string text) : text_(std::move(text)) {}
  const std::string& text() const { return text_; }
  bool operator==(const DerivedPassword&) const = default;

 private:
  std::string text_;
};

// IV-prefixed CBC ciphertext.
struct CipherBlob {
  std::array<std::uint8_t, kIvSize> iv{};
  Bytes ciphertext;

  Bytes serialize() const;
  // Throws Error(kFormat) if the ciphertext part is empty or not a multiple
  // of the block size.
  static CipherBlob parse(ByteView serialized);
  std::size_t serialized_size() const { return kIvSize + ciphertext.size(); }
};

struct BlobContents {
  std::string logical_name;
  Bytes content;
};

// Serialized envelope length for a name and content of the given sizes.
constexpr std::size_t blob_size_for(std::size_t name_bytes,
                                    std::size_t content_bytes) {
  std::size_t plain = 2 + name_bytes + content_bytes;
  return kIvSize + (plain / kBlockSize + 1) * kBlockSize;
}

SymmetricKey generate_key();

// Plaintext layout: u16be name length || name || content, PKCS7 padded,
// then AES-256-CBC under a fresh random IV.
CipherBlob encrypt_blob(const SymmetricKey& key, std::string_view logical_name,
                        ByteView content);
BlobContents decrypt_blob(const SymmetricKey& key, const CipherBlob& blob);

// Number of leading serialized bytes that hold the whole name header, read
// from the first kHeaderProbeBytes of a serialized envelope.
std::size_t blob_header_extent(const SymmetricKey& key, ByteView probe);

// Recovers only the logical name from a serialized envelope prefix of at
// least blob_header_extent() bytes. `blob_size` is the full envelope size;
// when the prefix is the whole envelope the padding is checked as well.
std::string decrypt_blob_name(const SymmetricKey& key, ByteView prefix,
                              std::size_t blob_size);

MacTag compute_mac(const MacKey& key, ByteView content);
bool verify_mac(const MacKey& key, ByteView content, const MacTag& tag);

// First 24 base64url characters of SHA-256(password || username || url).
DerivedPassword derive_provider_password(std::string_view username,
                                         std::string_view password,
                                         std::string_view provider_url);

// Deterministic name token: the IV is the first 16 bytes of
// HMAC-SHA-256(mac_part, name), the body is CBC under enc_part.
std::string encrypt_name(const NameKeyPair& keys, std::string_view name);
std::string decrypt_name(const NameKeyPair& keys, std::string_view token);

std::vector<KeyShare> split_key(const SymmetricKey& key, std::size_t n);
SymmetricKey combine_key(std::span<const KeyShare> shares);

namespace detail {

// Unauthenticated building blocks, exposed for vector tests.
Bytes aes256_cbc_encrypt(ByteView key, ByteView iv, ByteView plaintext,
                         bool pkcs7);
Bytes aes256_cbc_decrypt(ByteView key, ByteView iv, ByteView ciphertext,
                         bool pkcs7);
std::array<std::uint8_t, 32> hmac_sha256(ByteView key, ByteView data);
std::array<std::uint8_t, 32> sha256(ByteView data);

}  // namespace detail
}  // namespace twincloud::crypto
