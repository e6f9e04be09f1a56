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

#include <gtest/gtest.h>
#include <sys/stat.h>

#include <functional>
#include <random>

#include "test_support.hpp"
#include "twincloud/bytes.hpp"
#include "twincloud/error.hpp"
#include "twincloud/key_file.hpp"
#include "twincloud/remote_path.hpp"
#include "twincloud/staging.hpp"
#include "twincloud/token_cache.hpp"

namespace twincloud {
namespace {

using testing::TempDir;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kIo;
}

TEST(Base64Url, Rfc4648Examples) {
  // RFC 4648 section 10, translated to the URL alphabet without padding.
  EXPECT_EQ(base64url_encode(as_bytes("")), "");
  EXPECT_EQ(base64url_encode(as_bytes("f")), "Zg");
  EXPECT_EQ(base64url_encode(as_bytes("fo")), "Zm8");
  EXPECT_EQ(base64url_encode(as_bytes("foo")), "Zm9v");
  EXPECT_EQ(base64url_encode(as_bytes("foob")), "Zm9vYg");
  EXPECT_EQ(base64url_encode(as_bytes("fooba")), "Zm9vYmE");
  EXPECT_EQ(base64url_encode(as_bytes("foobar")), "Zm9vYmFy");
  EXPECT_EQ(base64url_encode(Bytes{0xfb, 0xff}), "-_8");
}

TEST(Base64Url, RoundTrip) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 0; n < 200; ++n) {
    Bytes data = testing::random_content(rng, n);
    EXPECT_EQ(base64url_decode(base64url_encode(data)), data);
  }
}

TEST(Base64Url, StrictDecoding) {
  EXPECT_EQ(kind_of([] { base64url_decode("Zg=="); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { base64url_decode("Zm9+"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { base64url_decode("Zm9/"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { base64url_decode("Z"); }), ErrorKind::kFormat);
  // "Zh" carries non-zero leftover bits.
  EXPECT_EQ(kind_of([] { base64url_decode("Zh"); }), ErrorKind::kFormat);
}

TEST(Hex, RoundTripAndErrors) {
  EXPECT_EQ(to_hex(Bytes{0x00, 0xab, 0xff}), "00abff");
  EXPECT_EQ(from_hex("00ABff"), (Bytes{0x00, 0xab, 0xff}));
  EXPECT_EQ(kind_of([] { from_hex("abc"); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { from_hex("zz"); }), ErrorKind::kFormat);
}

TEST(Utf8, Validation) {
  EXPECT_TRUE(is_valid_utf8(as_bytes("plain")));
  EXPECT_TRUE(is_valid_utf8(as_bytes("\xe2\x82\xac")));
  EXPECT_TRUE(is_valid_utf8(as_bytes("\xf0\x9f\x98\x80")));
  EXPECT_FALSE(is_valid_utf8(as_bytes("\xff")));
  EXPECT_FALSE(is_valid_utf8(as_bytes("\xc0\xaf")));        // overlong
  EXPECT_FALSE(is_valid_utf8(as_bytes("\xed\xa0\x80")));    // surrogate
  EXPECT_FALSE(is_valid_utf8(as_bytes("\xe2\x82")));        // truncated
}

TEST(KeyFile, LayoutIsExact) {
  KeyFileRecord record;
  for (std::size_t i = 0; i < record.key_share.size(); ++i) {
    record.key_share[i] = static_cast<std::uint8_t>(i);
  }
  record.data_name = "abc";
  Bytes wire = record.serialize();
  ASSERT_EQ(wire.size(), KeyFileRecord::kFixedSize + 3);
  EXPECT_EQ(to_hex(ByteView(wire).first(5)), "5457433101");
  EXPECT_EQ(wire[5], 0x00);
  EXPECT_EQ(wire[36], 0x1f);
  EXPECT_EQ(to_hex(ByteView(wire).subspan(37, 2)), "0003");
  EXPECT_EQ(to_string(ByteView(wire).subspan(39)), "abc");

  auto back = KeyFileRecord::parse(wire);
  EXPECT_EQ(back.key_share, record.key_share);
  EXPECT_EQ(back.data_name, "abc");
}

TEST(KeyFile, RejectsMalformed) {
  KeyFileRecord record;
  record.data_name = "token";
  Bytes good = record.serialize();

  Bytes bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { KeyFileRecord::parse(bad_magic); }), ErrorKind::kFormat);
  Bytes bad_version = good;
  bad_version[4] = 0x02;
  EXPECT_EQ(kind_of([&] { KeyFileRecord::parse(bad_version); }), ErrorKind::kFormat);
  Bytes short_one(good.begin(), good.end() - 1);
  EXPECT_EQ(kind_of([&] { KeyFileRecord::parse(short_one); }), ErrorKind::kFormat);
  Bytes long_one = good;
  long_one.push_back('x');
  EXPECT_EQ(kind_of([&] { KeyFileRecord::parse(long_one); }), ErrorKind::kFormat);
  Bytes non_ascii = good;
  non_ascii.back() = 0xc3;
  EXPECT_EQ(kind_of([&] { KeyFileRecord::parse(non_ascii); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([] { KeyFileRecord::parse(Bytes(10)); }), ErrorKind::kFormat);
}

TEST(RemotePaths, ParseAndNavigate) {
  auto p = RemotePath::file("/a_keyFolder/a.key");
  EXPECT_EQ(p.segments(), (std::vector<std::string>{"a_keyFolder", "a.key"}));
  EXPECT_EQ(p.str(), "/a_keyFolder/a.key");
  EXPECT_EQ(p.name(), "a.key");
  EXPECT_EQ(p.parent(), RemotePath::folder("/a_keyFolder"));
  EXPECT_TRUE(p.parent().is_ancestor_of(p));
  EXPECT_TRUE(RemotePath().is_ancestor_of(p));
  EXPECT_FALSE(p.is_ancestor_of(p));
  EXPECT_EQ(RemotePath::folder("/").str(), "/");
  EXPECT_TRUE(RemotePath::folder("/").is_root());
  EXPECT_EQ(RemotePath::file("x").str(), "/x");
  EXPECT_EQ(RemotePath().child("f", EntryKind::kFile), RemotePath::file("/f"));
}

TEST(RemotePaths, RejectsBadSegments) {
  for (std::string_view bad : {"/a/../b", "/./a", "/a//b", "/a\x01", "/a\x7f"}) {
    EXPECT_EQ(kind_of([&] { RemotePath::file(bad); }), ErrorKind::kInvalidArgument) << bad;
  }
  EXPECT_EQ(kind_of([] { RemotePath({}, EntryKind::kFile); }), ErrorKind::kInvalidArgument);
  EXPECT_FALSE(RemotePath::is_valid_segment("a/b"));
  EXPECT_TRUE(RemotePath::is_valid_segment(".twincloud"));
}

TEST(TokenCacheFile, StoreLoadAndPermissions) {
  TempDir dir;
  TokenCache cache(dir / "sub" / "tokens.tsv");
  EXPECT_TRUE(cache.load("alice").empty());
  cache.store("alice", {{"p1", "tok-a1"}, {"p2", "tok-a2"}});
  cache.store("bob", {{"p1", "tok-b1"}});
  EXPECT_EQ(cache.load("alice"), (std::map<std::string, std::string>{{"p1", "tok-a1"},
                                                                     {"p2", "tok-a2"}}));
  EXPECT_EQ(cache.usernames(), (std::vector<std::string>{"alice", "bob"}));

  struct stat st {};
  ASSERT_EQ(::stat(cache.file().c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);

  auto text = to_string(testing::read_file(cache.file()));
  EXPECT_TRUE(testing::contains(text, "p1\talice\ttok-a1\n"));

  cache.store("alice", {{"p1", "tok-new"}});
  EXPECT_EQ(cache.load("alice").size(), 1u);
  EXPECT_EQ(cache.load("bob").at("p1"), "tok-b1");
  cache.forget("bob");
  EXPECT_TRUE(cache.load("bob").empty());
}

TEST(Staging, FilesVanishWithTheirHandles) {
  TempDir dir;
  StagingArea area(dir / "staging");
  {
    auto a = area.stage("key", as_bytes("secret"));
    auto b = area.stage("key", as_bytes("other"));
    EXPECT_NE(a.path(), b.path());
    EXPECT_EQ(to_string(a.read()), "secret");
    auto moved = std::move(a);
    EXPECT_EQ(to_string(moved.read()), "secret");
    EXPECT_FALSE(std::filesystem::is_empty(area.dir()));
  }
  EXPECT_TRUE(std::filesystem::is_empty(area.dir()));
}

}  // namespace
}  // namespace twincloud
