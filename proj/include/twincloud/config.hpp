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

#include <filesystem>
#include <istream>
#include <optional>
#include <vector>

#include "twincloud/gateway.hpp"
#include "twincloud/provider.hpp"

namespace twincloud {

// INI-style configuration:
//
//   staging_dir  = /var/tmp/twincloud/staging
//   token_cache  = ~/.config/twincloud/tokens
//   default_dest = ~/TwinCloud
//
//   [provider:keycloud]
//   id           = keycloud
//   url          = https://key.example
//   file_sharing = false
//   ; a directory, or "memory"
//   root         = /srv/keycloud
//
//   [placement]
//   key_providers = keycloud
//   data_provider = datacloud
//
// Relative paths are resolved against the config file's directory.
struct CliConfig {
  std::vector<ProviderConfig> providers;
  PlacementPolicy placement;
  std::filesystem::path staging_dir;
  std::filesystem::path token_cache;
  std::filesystem::path default_dest;
};

// Throws Error(kConfig) with the offending field in the message.
CliConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);

// Resolution order: `flag_path`, then $TWINCLOUD_CONFIG, then
// $XDG_CONFIG_HOME/twincloud/config.ini, then ~/.config/twincloud/config.ini.
CliConfig load_config(const std::optional<std::filesystem::path>& flag_path);

std::filesystem::path default_config_path();

}  // namespace twincloud
