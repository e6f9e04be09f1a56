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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "twincloud/error.hpp"

namespace twincloud::crypto {
namespace {

using twincloud::testing::random_content;
using twincloud::testing::random_name;

SymmetricKey key_from(ByteView bytes) {
  KeyShare share;
  std::copy(bytes.begin(), bytes.end(), share.bytes.begin());
  std::vector<KeyShare> one{share};
  return combine_key(one);
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kIo;
}

// CBC-AES256 vectors, SP 800-38A F.2.5 / F.2.6.
constexpr std::string_view kNistKey =
    "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4";
constexpr std::string_view kNistIv = "000102030405060708090a0b0c0d0e0f";
constexpr std::string_view kNistPlain =
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710";
constexpr std::string_view kNistCipher =
    "f58c4c04d6e5f1ba779eabfb5f7bfbd69cfc4e967edb808d679f777bc6702c7d"
    "39f23369a9d9bacfa530e26304231461b2eb05e2c39be9fcda6c19078c6a9d1b";

TEST(CbcVectors, EncryptMatchesNist) {
  Bytes ct = detail::aes256_cbc_encrypt(from_hex(kNistKey), from_hex(kNistIv),
                                        from_hex(kNistPlain), false);
  EXPECT_EQ(to_hex(ct), kNistCipher);
}

TEST(CbcVectors, DecryptMatchesNist) {
  Bytes pt = detail::aes256_cbc_decrypt(from_hex(kNistKey), from_hex(kNistIv),
                                        from_hex(kNistCipher), false);
  EXPECT_EQ(to_hex(pt), kNistPlain);
}

TEST(CbcVectors, PaddedModeAppendsFullBlockOnAlignedInput) {
  Bytes ct = detail::aes256_cbc_encrypt(from_hex(kNistKey), from_hex(kNistIv),
                                        from_hex(kNistPlain), true);
  ASSERT_EQ(ct.size(), 80u);
  EXPECT_EQ(to_hex(ByteView(ct).first(64)), kNistCipher);
}

struct HmacVector {
  std::string key_hex;
  std::string data_hex;
  std::string tag_hex;
};

TEST(HmacVectors, Rfc4231) {
  const std::vector<HmacVector> vectors = {
      {"0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b",
       to_hex(as_bytes("Hi There")),
       "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"},
      {to_hex(as_bytes("Jefe")), to_hex(as_bytes("what do ya want for nothing?")),
       "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"},
      {std::string(40, 'a'), std::string(100, 'd'),
       "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"},
  };
  for (const auto& v : vectors) {
    auto tag = detail::hmac_sha256(from_hex(v.key_hex), from_hex(v.data_hex));
    EXPECT_EQ(to_hex(tag), v.tag_hex);
  }
}

TEST(HmacVectors, ComputeMacUsesHmacSha256) {
  // RFC 4231 keys are shorter than 32 bytes, so go through the primitive
  // for the vector and check compute_mac agrees with it on a full key.
  std::mt19937_64 rng(7);
  Bytes key = random_content(rng, 32);
  Bytes data = random_content(rng, 1000);
  auto expected = detail::hmac_sha256(key, data);
  EXPECT_EQ(to_hex(compute_mac(MacKey::from_bytes(key), data).bytes()), to_hex(expected));
}

TEST(GenerateKey, LengthAndDistinctness) {
  std::set<Bytes> seen;
  for (int i = 0; i < 1000; ++i) {
    SymmetricKey k = generate_key();
    ASSERT_EQ(k.bytes().size(), kKeySize);
    seen.emplace(k.bytes().begin(), k.bytes().end());
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(GenerateKey, EveryBytePositionVaries) {
  std::vector<std::set<std::uint8_t>> values(kKeySize);
  for (int i = 0; i < 100; ++i) {
    SymmetricKey k = generate_key();
    for (std::size_t b = 0; b < kKeySize; ++b) values[b].insert(k.bytes()[b]);
  }
  for (const auto& v : values) EXPECT_GE(v.size(), 2u);
}

TEST(Envelope, OneCharNameEmptyContentIsOneBlock) {
  auto blob = encrypt_blob(generate_key(), "a", {});
  EXPECT_EQ(blob.ciphertext.size(), 16u);
  EXPECT_EQ(blob.serialized_size(), 32u);
}

TEST(Envelope, OneMebibyteLength) {
  std::mt19937_64 rng(1);
  Bytes content = random_content(rng, 1u << 20);
  auto key = generate_key();
  auto blob = encrypt_blob(key, "hello.txt", content);
  std::size_t plain = 2 + 9 + (1u << 20) + 1;
  EXPECT_EQ(blob.ciphertext.size(), 16 * ((plain + 15) / 16));
  auto back = decrypt_blob(key, blob);
  EXPECT_EQ(back.logical_name, "hello.txt");
  EXPECT_EQ(back.content, content);
}

TEST(Envelope, PlaintextLayout) {
  auto key = generate_key();
  auto blob = encrypt_blob(key, "hi", as_bytes("xyz"));
  Bytes plain = detail::aes256_cbc_decrypt(key.bytes(), blob.iv, blob.ciphertext, true);
  EXPECT_EQ(to_hex(plain), "0002" + to_hex(as_bytes("hi")) + to_hex(as_bytes("xyz")));
}

TEST(Envelope, RoundTripAndLengthLaw) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    auto key = generate_key();
    std::size_t name_len = 1 + rng() % 255;
    // Mostly small, a few large, so the loop stays quick.
    std::size_t content_len = (i % 50 == 0) ? rng() % (1u << 20) : rng() % 4096;
    std::string name = random_name(rng, name_len);
    Bytes content = random_content(rng, content_len);
    auto blob = encrypt_blob(key, name, content);
    Bytes wire = blob.serialize();
    std::size_t expected = 16 + 16 * ((2 + name_len + content_len + 1 + 15) / 16);
    ASSERT_EQ(wire.size(), expected) << "case " << i;
    ASSERT_EQ(blob_size_for(name_len, content_len), expected);
    auto back = decrypt_blob(key, CipherBlob::parse(wire));
    ASSERT_EQ(back.logical_name, name);
    ASSERT_EQ(back.content, content);
  }
}

TEST(Envelope, Utf8NameRoundTrip) {
  auto key = generate_key();
  std::string name = "r\xc3\xa9sum\xc3\xa9 \xe6\x97\xa5\xe6\x9c\xac.txt";
  auto back = decrypt_blob(key, encrypt_blob(key, name, as_bytes("x")));
  EXPECT_EQ(back.logical_name, name);
}

TEST(Envelope, FreshIvs) {
  auto key = generate_key();
  auto a = encrypt_blob(key, "same", as_bytes("same content"));
  auto b = encrypt_blob(key, "same", as_bytes("same content"));
  EXPECT_NE(a.iv, b.iv);
  EXPECT_NE(a.ciphertext, b.ciphertext);
}

TEST(Envelope, NameLimits) {
  auto key = generate_key();
  std::string max(kMaxBlobNameBytes, 'n');
  auto back = decrypt_blob(key, encrypt_blob(key, max, {}));
  EXPECT_EQ(back.logical_name.size(), kMaxBlobNameBytes);
  EXPECT_EQ(kind_of([&] { encrypt_blob(key, std::string(kMaxBlobNameBytes + 1, 'n'), {}); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([&] { encrypt_blob(key, "bad\xff", {}); }), ErrorKind::kInvalidArgument);
}

TEST(Envelope, WrongKeyNeverSilentlySucceeds) {
  std::mt19937_64 rng(99);
  int format_errors = 0;
  for (int i = 0; i < 1000; ++i) {
    auto key = generate_key();
    auto other = generate_key();
    std::string name = random_name(rng, 8);
    Bytes content = random_content(rng, rng() % 200);
    auto blob = encrypt_blob(key, name, content);
    try {
      auto back = decrypt_blob(other, blob);
      EXPECT_FALSE(back.logical_name == name && back.content == content);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kFormat);
      ++format_errors;
    }
  }
  // Padding alone rejects about 255/256 of wrong keys.
  EXPECT_GE(format_errors, 980);
}

TEST(Envelope, TruncatedBlobIsFormatError) {
  auto key = generate_key();
  Bytes wire = encrypt_blob(key, "t.txt", as_bytes("some content here")).serialize();
  for (std::size_t cut : {1u, 5u, 15u, 17u}) {
    Bytes shorter(wire.begin(), wire.end() - static_cast<std::ptrdiff_t>(cut));
    EXPECT_EQ(kind_of([&] { decrypt_blob(key, CipherBlob::parse(shorter)); }),
              ErrorKind::kFormat)
        << cut;
  }
  EXPECT_EQ(kind_of([&] { CipherBlob::parse(ByteView(wire).first(16)); }), ErrorKind::kFormat);
  CipherBlob odd;
  odd.ciphertext.resize(20);
  EXPECT_EQ(kind_of([&] { decrypt_blob(key, odd); }), ErrorKind::kFormat);
}

TEST(Envelope, HeaderProbeRecoversName) {
  std::mt19937_64 rng(5);
  for (std::size_t len : {1u, 13u, 14u, 29u, 30u, 31u, 200u, 255u}) {
    auto key = generate_key();
    std::string name = random_name(rng, len);
    Bytes content = random_content(rng, 100);
    Bytes wire = encrypt_blob(key, name, content).serialize();
    std::size_t extent = blob_header_extent(key, ByteView(wire).first(kHeaderProbeBytes));
    ASSERT_LE(extent, wire.size());
    EXPECT_EQ(decrypt_blob_name(key, ByteView(wire).first(extent), wire.size()), name);
    EXPECT_EQ(decrypt_blob_name(key, wire, wire.size()), name);
  }
}

TEST(Mac, DeterministicAndBitSensitive) {
  std::mt19937_64 rng(11);
  auto key = MacKey::generate();
  Bytes content = random_content(rng, 512);
  auto tag = compute_mac(key, content);
  EXPECT_EQ(compute_mac(key, content), tag);
  for (int i = 0; i < 100; ++i) {
    Bytes flipped = content;
    std::size_t bit = rng() % (content.size() * 8);
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(compute_mac(key, flipped) == tag);
  }
}

TEST(Mac, VerifyAcceptsOnlyExactTag) {
  std::mt19937_64 rng(12);
  auto key = MacKey::generate();
  Bytes content = random_content(rng, 77);
  auto tag = compute_mac(key, content);
  EXPECT_TRUE(verify_mac(key, content, tag));
  for (std::size_t bit = 0; bit < kMacTagSize * 8; ++bit) {
    Bytes raw(tag.bytes().begin(), tag.bytes().end());
    raw[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(verify_mac(key, content, MacTag::from_bytes(raw))) << bit;
  }
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(verify_mac(MacKey::generate(), content, tag));
  }
}

TEST(Mac, KeyAndTagSizes) {
  EXPECT_EQ(kind_of([] { MacKey::from_bytes(Bytes(31)); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { MacTag::from_bytes(Bytes(33)); }), ErrorKind::kFormat);
}

struct PasswordRow {
  std::string username, password, url_a, url_b, expected_a, expected_b;
};

std::vector<PasswordRow> load_password_rows() {
  std::ifstream in(std::string(TWINCLOUD_TEST_DATA_DIR) + "/derived_passwords.tsv");
  std::vector<PasswordRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    PasswordRow r;
    std::getline(fields, r.username, '\t');
    std::getline(fields, r.password, '\t');
    std::getline(fields, r.url_a, '\t');
    std::getline(fields, r.url_b, '\t');
    std::getline(fields, r.expected_a, '\t');
    std::getline(fields, r.expected_b, '\t');
    rows.push_back(r);
  }
  return rows;
}

TEST(DerivedPasswords, MatchFrozenOracle) {
  auto rows = load_password_rows();
  ASSERT_EQ(rows.size(), 101u);
  for (const auto& r : rows) {
    EXPECT_EQ(derive_provider_password(r.username, r.password, r.url_a).text(), r.expected_a);
    EXPECT_EQ(derive_provider_password(r.username, r.password, r.url_b).text(), r.expected_b);
  }
}

TEST(DerivedPasswords, AliceHunter2) {
  EXPECT_EQ(derive_provider_password("alice", "hunter2", "https://key.example").text(),
            "JGMzvg1mrBBdJ908n3mkqgxy");
}

TEST(DerivedPasswords, ShapeAndDeterminism) {
  auto a = derive_provider_password("alice", "pw", "https://a.example");
  auto b = derive_provider_password("alice", "pw", "https://b.example");
  EXPECT_EQ(a, derive_provider_password("alice", "pw", "https://a.example"));
  EXPECT_NE(a, b);
  EXPECT_EQ(a.text().size(), kDerivedPasswordLength);
  EXPECT_EQ(a.text().find_first_not_of(
                "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"),
            std::string::npos);
}

TEST(DerivedPasswords, EmptyInputRejected) {
  EXPECT_EQ(kind_of([] { derive_provider_password("", "pw", "u"); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([] { derive_provider_password("a", "", "u"); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([] { derive_provider_password("a", "pw", ""); }),
            ErrorKind::kInvalidArgument);
}

TEST(NameTokens, LengthAndAlphabet) {
  auto nk = NameKeyPair::generate();
  std::string token = encrypt_name(nk, "hello.txt");
  EXPECT_EQ(token.size(), 43u);
  EXPECT_EQ(token.find_first_not_of(
                "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_"),
            std::string::npos);
  EXPECT_EQ(encrypt_name(nk, "hello.txt"), token);
  EXPECT_EQ(decrypt_name(nk, token), "hello.txt");
}

TEST(NameTokens, InjectiveOnSample) {
  std::mt19937_64 rng(3);
  auto nk = NameKeyPair::generate();
  std::set<std::string> names;
  std::set<std::string> tokens;
  while (names.size() < 10000) {
    std::string name = random_name(rng, 1 + rng() % 40);
    if (!names.insert(name).second) continue;
    std::string token = encrypt_name(nk, name);
    ASSERT_TRUE(tokens.insert(token).second) << name;
    ASSERT_EQ(decrypt_name(nk, token), name);
  }
}

TEST(NameTokens, WrongKeyRejected) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    auto nk = NameKeyPair::generate();
    std::string token = encrypt_name(nk, random_name(rng, 12));
    EXPECT_EQ(kind_of([&] { decrypt_name(NameKeyPair::generate(), token); }),
              ErrorKind::kFormat);
  }
}

TEST(NameTokens, EverySingleCharacterCorruptionRejected) {
  static constexpr std::string_view kAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  auto nk = NameKeyPair::generate();
  std::string token = encrypt_name(nk, "quarterly-report.pdf");
  for (std::size_t pos = 0; pos < token.size(); ++pos) {
    for (char c : kAlphabet) {
      if (c == token[pos]) continue;
      std::string bad = token;
      bad[pos] = c;
      ASSERT_EQ(kind_of([&] { decrypt_name(nk, bad); }), ErrorKind::kFormat)
          << "pos " << pos << " char " << c;
    }
    std::string bad = token;
    bad[pos] = '=';
    ASSERT_EQ(kind_of([&] { decrypt_name(nk, bad); }), ErrorKind::kFormat);
  }
}

TEST(NameTokens, Limits) {
  auto nk = NameKeyPair::generate();
  EXPECT_EQ(kind_of([&] { encrypt_name(nk, ""); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([&] { encrypt_name(nk, std::string(256, 'x')); }),
            ErrorKind::kInvalidArgument);
  std::string longest(255, 'x');
  EXPECT_EQ(decrypt_name(nk, encrypt_name(nk, longest)), longest);
  EXPECT_EQ(kind_of([&] { decrypt_name(nk, "short"); }), ErrorKind::kFormat);
}

TEST(NameKeyPairs, SerializeRoundTrip) {
  auto nk = NameKeyPair::generate();
  Bytes wire = nk.serialize();
  ASSERT_EQ(wire.size(), 64u);
  EXPECT_TRUE(std::equal(nk.enc_part.begin(), nk.enc_part.end(), wire.begin()));
  EXPECT_EQ(NameKeyPair::parse(wire), nk);
  EXPECT_EQ(kind_of([] { NameKeyPair::parse(Bytes(63)); }), ErrorKind::kFormat);
}

TEST(KeySplitting, SingleShareIsTheKey) {
  auto k = generate_key();
  auto shares = split_key(k, 1);
  ASSERT_EQ(shares.size(), 1u);
  EXPECT_TRUE(std::equal(shares[0].bytes.begin(), shares[0].bytes.end(), k.bytes().begin()));
}

TEST(KeySplitting, CombineInvertsSplit) {
  std::mt19937_64 rng(8);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      auto k = generate_key();
      auto shares = split_key(k, n);
      ASSERT_EQ(shares.size(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(shares[i].index, i);
      EXPECT_EQ(combine_key(shares), k);
      std::shuffle(shares.begin(), shares.end(), rng);
      EXPECT_EQ(combine_key(shares), k);
    }
  }
}

TEST(KeySplitting, ProperSubsetsRevealNothing) {
  for (int trial = 0; trial < 1000; ++trial) {
    auto k = generate_key();
    auto shares = split_key(k, 3);
    for (unsigned mask = 1; mask < 7; ++mask) {
      Key256 acc{};
      for (std::size_t i = 0; i < 3; ++i) {
        if (mask & (1u << i)) {
          for (std::size_t b = 0; b < kKeySize; ++b) acc[b] ^= shares[i].bytes[b];
        }
      }
      ASSERT_FALSE(std::equal(acc.begin(), acc.end(), k.bytes().begin()));
    }
  }
}

TEST(KeySplitting, Preconditions) {
  auto k = generate_key();
  EXPECT_EQ(kind_of([&] { split_key(k, 0); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(kind_of([] { combine_key(std::vector<KeyShare>{}); }),
            ErrorKind::kInvalidArgument);
  auto shares = split_key(k, 3);
  shares[2].index = 1;
  EXPECT_EQ(kind_of([&] { combine_key(shares); }), ErrorKind::kInvalidArgument);
  shares[2].index = 5;
  EXPECT_EQ(kind_of([&] { combine_key(shares); }), ErrorKind::kInvalidArgument);
}

TEST(KeyMaterial, KeyFromBytesHelper) {
  Bytes raw = from_hex(kNistKey);
  EXPECT_EQ(to_hex(key_from(raw).bytes()), kNistKey);
}

}  // namespace
}  // namespace twincloud::crypto
