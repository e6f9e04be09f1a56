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

#include "twincloud/config.hpp"

#include <gtest/gtest.h>
#include <stdlib.h>

#include <sstream>

#include "test_support.hpp"
#include "twincloud/error.hpp"

namespace twincloud {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kTwoProviders = R"(staging_dir = stage
token_cache = cache/tokens.tsv
default_dest = /srv/out

[provider.dropbox]
id = keycloud
url = https://key.example
file_sharing = false
root = memory

[provider.gdrive]
id = datacloud
url = https://data.example
root = stores/data

[placement]
key_providers = keycloud
data_provider = datacloud
)";

CliConfig parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in, "/base");
}

std::string config_error(std::string_view text) {
  try {
    parse(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "config was accepted";
  return {};
}

std::string replace(std::string text, std::string_view from, std::string_view to) {
  auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(Config, TwoProviders) {
  CliConfig c = parse(kTwoProviders);
  ASSERT_EQ(c.providers.size(), 2u);
  EXPECT_EQ(c.providers[0].id, "keycloud");
  EXPECT_FALSE(c.providers[0].supports_file_sharing);
  EXPECT_FALSE(c.providers[0].persistence_root);
  EXPECT_TRUE(c.providers[1].supports_file_sharing);
  EXPECT_EQ(c.providers[1].persistence_root, fs::path("/base/stores/data"));
  EXPECT_EQ(c.placement.key_providers, (std::vector<std::string>{"keycloud"}));
  EXPECT_EQ(c.placement.data_provider, "datacloud");
  EXPECT_EQ(c.staging_dir, fs::path("/base/stage"));
  EXPECT_EQ(c.token_cache, fs::path("/base/cache/tokens.tsv"));
  EXPECT_EQ(c.default_dest, fs::path("/srv/out"));
}

TEST(Config, ThreeProvidersTwoKeyClouds) {
  std::string text = replace(std::string(kTwoProviders), "[placement]",
                             "[provider.third]\nid = other\nurl = https://o.example\n"
                             "file_sharing = false\nroot = memory\n\n[placement]");
  text = replace(text, "key_providers = keycloud", "key_providers = keycloud, other");
  CliConfig c = parse(text);
  EXPECT_EQ(c.providers.size(), 3u);
  EXPECT_EQ(c.placement.key_providers, (std::vector<std::string>{"keycloud", "other"}));
}

TEST(Config, UndeclaredProviderIsNamed) {
  auto msg = config_error(replace(std::string(kTwoProviders), "data_provider = datacloud",
                                  "data_provider = onedrive"));
  EXPECT_TRUE(testing::contains(msg, "onedrive")) << msg;
}

TEST(Config, ValidationNamesTheField) {
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "root = memory", "colour = blue")),
      "'colour' in [provider.dropbox]"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "url = https://key.example\n", "")),
      "'url' in [provider.dropbox]"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "file_sharing = false",
                           "file_sharing = maybe")),
      "file_sharing"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "staging_dir = stage\n", "")),
      "staging_dir"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "[placement]", "[mystery]\nx = 1\n\n[placement]")),
      "mystery"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "id = datacloud", "id = keycloud")),
      "duplicate"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "default_dest = /srv/out",
                           "default_dest = stage")),
      "staging_dir"));
  EXPECT_TRUE(testing::contains(
      config_error(replace(std::string(kTwoProviders), "data_provider = datacloud",
                           "data_provider = keycloud")),
      "keycloud"));
}

TEST(Config, MalformedSyntax) {
  config_error("staging_dir = a\n[unterminated\n");
  config_error("");
}

TEST(Config, DefaultDestDefaultsToConfigDirectory) {
  CliConfig c = parse(replace(std::string(kTwoProviders), "default_dest = /srv/out\n", ""));
  EXPECT_EQ(c.default_dest, fs::path("/base"));
}

TEST(Config, LookupOrder) {
  testing::TempDir dir;
  auto write = [&](const fs::path& p) {
    fs::create_directories(p.parent_path());
    testing::write_file(p, as_bytes(kTwoProviders));
  };
  write(dir / "flag.ini");
  write(dir / "env.ini");
  write(dir / "xdg" / "twincloud" / "config.ini");

  ::setenv("TWINCLOUD_CONFIG", (dir / "env.ini").c_str(), 1);
  ::setenv("XDG_CONFIG_HOME", (dir / "xdg").c_str(), 1);
  EXPECT_EQ(load_config(dir / "flag.ini").staging_dir, dir / "stage");
  EXPECT_EQ(load_config(std::nullopt).staging_dir, dir / "stage");
  ::unsetenv("TWINCLOUD_CONFIG");
  EXPECT_EQ(default_config_path(), dir / "xdg" / "twincloud" / "config.ini");
  EXPECT_EQ(load_config(std::nullopt).token_cache,
            dir / "xdg" / "twincloud" / "cache" / "tokens.tsv");
  ::unsetenv("XDG_CONFIG_HOME");

  try {
    load_config(dir / "absent.ini");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_TRUE(testing::contains(e.what(), "absent.ini"));
  }
}

}  // namespace
}  // namespace twincloud
