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

#include "twincloud/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <algorithm>
#include <limits>
#include <memory>

#include "twincloud/error.hpp"

namespace twincloud::crypto {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

// Wipes a plaintext buffer when it leaves scope.
class WipeOnExit {
 public:
  explicit WipeOnExit(Bytes& bytes) : bytes_(bytes) {}
  ~WipeOnExit() { secure_wipe(bytes_); }
  WipeOnExit(const WipeOnExit&) = delete;
  WipeOnExit& operator=(const WipeOnExit&) = delete;

 private:
  Bytes& bytes_;
};

Bytes run_cbc(bool encrypt, ByteView key, ByteView iv, ByteView input,
              bool pkcs7) {
  if (key.size() != kKeySize || iv.size() != kIvSize) {
    fail(ErrorKind::kInvalidArgument, "AES-256-CBC needs a 32-byte key and 16-byte IV");
  }
  if (input.size() > static_cast<std::size_t>(std::numeric_limits<int>::max() - 32)) {
    fail(ErrorKind::kInvalidArgument, "input too large");
  }
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) fail(ErrorKind::kCrypto, "EVP_CIPHER_CTX_new failed");
  if (EVP_CipherInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr, key.data(),
                        iv.data(), encrypt ? 1 : 0) != 1) {
    fail(ErrorKind::kCrypto, "EVP_CipherInit_ex failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx.get(), pkcs7 ? 1 : 0);

  Bytes out(input.size() + kBlockSize);
  int written = 0;
  if (EVP_CipherUpdate(ctx.get(), out.data(), &written, input.data(),
                       static_cast<int>(input.size())) != 1) {
    fail(ErrorKind::kCrypto, "EVP_CipherUpdate failed");
  }
  int final_len = 0;
  if (EVP_CipherFinal_ex(ctx.get(), out.data() + written, &final_len) != 1) {
    secure_wipe(out);
    if (encrypt) fail(ErrorKind::kInvalidArgument, "input is not block aligned");
    fail(ErrorKind::kFormat, pkcs7 ? "invalid PKCS7 padding"
                                   : "ciphertext is not block aligned");
  }
  out.resize(static_cast<std::size_t>(written + final_len));
  return out;
}

Key256 random_key() {
  Key256 k;
  random_fill(k);
  return k;
}

void require_utf8(std::string_view name, ErrorKind kind) {
  if (!is_valid_utf8(as_bytes(name))) fail(kind, "name is not valid UTF-8");
}

}  // namespace

void secure_wipe(std::span<std::uint8_t> bytes) {
  if (!bytes.empty()) OPENSSL_cleanse(bytes.data(), bytes.size());
}

void random_fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    fail(ErrorKind::kCrypto, "randomness source failure");
  }
}

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  random_fill(out);
  return out;
}

MacKey MacKey::from_bytes(ByteView bytes) {
  if (bytes.size() != kKeySize) fail(ErrorKind::kFormat, "MAC key must be 32 bytes");
  Key256 k;
  std::copy(bytes.begin(), bytes.end(), k.begin());
  return MacKey(k);
}

MacKey MacKey::generate() { return MacKey(random_key()); }

MacTag MacTag::from_bytes(ByteView bytes) {
  if (bytes.size() != kMacTagSize) fail(ErrorKind::kFormat, "MAC tag must be 32 bytes");
  std::array<std::uint8_t, kMacTagSize> t;
  std::copy(bytes.begin(), bytes.end(), t.begin());
  return MacTag(t);
}

NameKeyPair NameKeyPair::generate() {
  return NameKeyPair{random_key(), random_key()};
}

NameKeyPair NameKeyPair::parse(ByteView bytes) {
  if (bytes.size() != kNameKeyPairSize) {
    fail(ErrorKind::kFormat, "name key file must be 64 bytes");
  }
  NameKeyPair keys;
  std::copy_n(bytes.begin(), kKeySize, keys.enc_part.begin());
  std::copy_n(bytes.begin() + kKeySize, kKeySize, keys.mac_part.begin());
  return keys;
}

Bytes NameKeyPair::serialize() const {
  Bytes out(enc_part.begin(), enc_part.end());
  out.insert(out.end(), mac_part.begin(), mac_part.end());
  return out;
}

Bytes CipherBlob::serialize() const {
  Bytes out;
  out.reserve(serialized_size());
  out.insert(out.end(), iv.begin(), iv.end());
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  return out;
}

CipherBlob CipherBlob::parse(ByteView serialized) {
  if (serialized.size() < kIvSize + kBlockSize ||
      (serialized.size() - kIvSize) % kBlockSize != 0) {
    fail(ErrorKind::kFormat, "envelope length is not IV plus whole blocks");
  }
  CipherBlob blob;
  std::copy_n(serialized.begin(), kIvSize, blob.iv.begin());
  blob.ciphertext.assign(serialized.begin() + kIvSize, serialized.end());
  return blob;
}

SymmetricKey generate_key() { return SymmetricKey(random_key()); }

CipherBlob encrypt_blob(const SymmetricKey& key, std::string_view logical_name,
                        ByteView content) {
  if (logical_name.size() > kMaxBlobNameBytes) {
    fail(ErrorKind::kInvalidArgument, "logical name longer than 65535 bytes");
  }
  require_utf8(logical_name, ErrorKind::kInvalidArgument);

  Bytes plain;
  WipeOnExit wipe(plain);
  plain.reserve(2 + logical_name.size() + content.size());
  plain.push_back(static_cast<std::uint8_t>(logical_name.size() >> 8));
  plain.push_back(static_cast<std::uint8_t>(logical_name.size() & 0xff));
  auto name = as_bytes(logical_name);
  plain.insert(plain.end(), name.begin(), name.end());
  plain.insert(plain.end(), content.begin(), content.end());

  CipherBlob blob;
  random_fill(blob.iv);
  blob.ciphertext = detail::aes256_cbc_encrypt(key.bytes(), blob.iv, plain, true);
  return blob;
}

BlobContents decrypt_blob(const SymmetricKey& key, const CipherBlob& blob) {
  if (blob.ciphertext.empty() || blob.ciphertext.size() % kBlockSize != 0) {
    fail(ErrorKind::kFormat, "ciphertext is not a positive multiple of 16 bytes");
  }
  Bytes plain = detail::aes256_cbc_decrypt(key.bytes(), blob.iv, blob.ciphertext, true);
  WipeOnExit wipe(plain);
  if (plain.size() < 2) fail(ErrorKind::kFormat, "envelope shorter than its header");
  std::size_t name_len = std::size_t{plain[0]} << 8 | plain[1];
  if (name_len > plain.size() - 2) {
    fail(ErrorKind::kFormat, "name length field exceeds envelope");
  }
  ByteView name(plain.data() + 2, name_len);
  if (!is_valid_utf8(name)) fail(ErrorKind::kFormat, "embedded name is not UTF-8");
  BlobContents out;
  out.logical_name = to_string(name);
  out.content.assign(plain.begin() + 2 + static_cast<std::ptrdiff_t>(name_len),
                     plain.end());
  return out;
}

std::size_t blob_header_extent(const SymmetricKey& key, ByteView probe) {
  if (probe.size() < kIvSize + kBlockSize) {
    fail(ErrorKind::kFormat, "envelope probe shorter than one block");
  }
  Bytes first = detail::aes256_cbc_decrypt(key.bytes(), probe.first(kIvSize),
                                           probe.subspan(kIvSize, kBlockSize), false);
  WipeOnExit wipe(first);
  std::size_t name_len = std::size_t{first[0]} << 8 | first[1];
  std::size_t header = 2 + name_len;
  return kIvSize + (header + kBlockSize - 1) / kBlockSize * kBlockSize;
}

std::string decrypt_blob_name(const SymmetricKey& key, ByteView prefix,
                              std::size_t blob_size) {
  if (prefix.size() >= blob_size) {
    return decrypt_blob(key, CipherBlob::parse(prefix.first(blob_size))).logical_name;
  }
  if (prefix.size() < kIvSize + kBlockSize) {
    fail(ErrorKind::kFormat, "envelope prefix shorter than one block");
  }
  std::size_t blocks = (prefix.size() - kIvSize) / kBlockSize;
  Bytes plain = detail::aes256_cbc_decrypt(
      key.bytes(), prefix.first(kIvSize),
      prefix.subspan(kIvSize, blocks * kBlockSize), false);
  WipeOnExit wipe(plain);
  std::size_t name_len = std::size_t{plain[0]} << 8 | plain[1];
  if (2 + name_len > plain.size()) {
    fail(ErrorKind::kFormat, "envelope prefix does not cover the name header");
  }
  ByteView name(plain.data() + 2, name_len);
  if (!is_valid_utf8(name)) fail(ErrorKind::kFormat, "embedded name is not UTF-8");
  return to_string(name);
}

MacTag compute_mac(const MacKey& key, ByteView content) {
  return MacTag(detail::hmac_sha256(key.bytes(), content));
}

bool verify_mac(const MacKey& key, ByteView content, const MacTag& tag) {
  auto expected = detail::hmac_sha256(key.bytes(), content);
  return CRYPTO_memcmp(expected.data(), tag.bytes().data(), kMacTagSize) == 0;
}

DerivedPassword derive_provider_password(std::string_view username,
                                         std::string_view password,
                                         std::string_view provider_url) {
  if (username.empty() || password.empty() || provider_url.empty()) {
    fail(ErrorKind::kInvalidArgument,
         "username, password and provider URL must be non-empty");
  }
  Bytes input;
  WipeOnExit wipe(input);
  for (std::string_view part : {password, username, provider_url}) {
    auto bytes = as_bytes(part);
    input.insert(input.end(), bytes.begin(), bytes.end());
  }
  auto digest = detail::sha256(input);
  std::string encoded = base64url_encode(digest);
  secure_wipe(digest);
  return DerivedPassword(encoded.substr(0, kDerivedPasswordLength));
}

std::string encrypt_name(const NameKeyPair& keys, std::string_view name) {
  if (name.empty() || name.size() > kMaxTokenNameBytes) {
    fail(ErrorKind::kInvalidArgument, "name must be 1..255 bytes");
  }
  require_utf8(name, ErrorKind::kInvalidArgument);
  auto mac = detail::hmac_sha256(keys.mac_part, as_bytes(name));
  ByteView iv(mac.data(), kIvSize);
  Bytes body = detail::aes256_cbc_encrypt(keys.enc_part, iv, as_bytes(name), true);
  Bytes token(iv.begin(), iv.end());
  token.insert(token.end(), body.begin(), body.end());
  return base64url_encode(token);
}

std::string decrypt_name(const NameKeyPair& keys, std::string_view token) {
  if (token.size() < 43) fail(ErrorKind::kFormat, "name token too short");
  Bytes raw = base64url_decode(token);
  if (raw.size() < kIvSize + kBlockSize || (raw.size() - kIvSize) % kBlockSize != 0) {
    fail(ErrorKind::kFormat, "name token has a bad length");
  }
  ByteView iv(raw.data(), kIvSize);
  Bytes name = detail::aes256_cbc_decrypt(
      keys.enc_part, iv, ByteView(raw).subspan(kIvSize), true);
  if (name.empty()) fail(ErrorKind::kFormat, "name token decrypts to an empty name");
  auto mac = detail::hmac_sha256(keys.mac_part, name);
  if (CRYPTO_memcmp(mac.data(), iv.data(), kIvSize) != 0) {
    fail(ErrorKind::kFormat, "name token failed its synthetic IV check");
  }
  if (!is_valid_utf8(name)) fail(ErrorKind::kFormat, "decrypted name is not UTF-8");
  return to_string(name);
}

std::vector<KeyShare> split_key(const SymmetricKey& key, std::size_t n) {
  if (n < 1) fail(ErrorKind::kInvalidArgument, "split_key needs at least one share");
  std::vector<KeyShare> shares(n);
  Key256 last;
  std::copy(key.bytes().begin(), key.bytes().end(), last.begin());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    shares[i].index = i;
    random_fill(shares[i].bytes);
    for (std::size_t b = 0; b < kKeySize; ++b) last[b] ^= shares[i].bytes[b];
  }
  shares[n - 1].index = n - 1;
  shares[n - 1].bytes = last;
  secure_wipe(last);
  return shares;
}

SymmetricKey combine_key(std::span<const KeyShare> shares) {
  if (shares.empty()) fail(ErrorKind::kInvalidArgument, "combine_key needs shares");
  std::vector<bool> seen(shares.size(), false);
  Key256 acc{};
  for (const KeyShare& share : shares) {
    if (share.index >= shares.size() || seen[share.index]) {
      fail(ErrorKind::kInvalidArgument, "key shares have a missing or duplicate index");
    }
    seen[share.index] = true;
    for (std::size_t b = 0; b < kKeySize; ++b) acc[b] ^= share.bytes[b];
  }
  SymmetricKey key(acc);
  secure_wipe(acc);
  return key;
}

namespace detail {

Bytes aes256_cbc_encrypt(ByteView key, ByteView iv, ByteView plaintext, bool pkcs7) {
  return run_cbc(true, key, iv, plaintext, pkcs7);
}

Bytes aes256_cbc_decrypt(ByteView key, ByteView iv, ByteView ciphertext, bool pkcs7) {
  return run_cbc(false, key, iv, ciphertext, pkcs7);
}

std::array<std::uint8_t, 32> hmac_sha256(ByteView key, ByteView data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  static const std::uint8_t kEmpty = 0;
  if (HMAC(EVP_sha256(), key.empty() ? &kEmpty : key.data(),
           static_cast<int>(key.size()), data.empty() ? &kEmpty : data.data(),
           data.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
    fail(ErrorKind::kCrypto, "HMAC-SHA-256 failed");
  }
  return out;
}

std::array<std::uint8_t, 32> sha256(ByteView data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    fail(ErrorKind::kCrypto, "SHA-256 failed");
  }
  return out;
}

}  // namespace detail
}  // namespace twincloud::crypto
