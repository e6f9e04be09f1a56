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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include "twincloud/error.hpp"

namespace twincloud {
namespace fs = std::filesystem;
namespace pt = boost::property_tree;
namespace {

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    std::string item = trim(text.substr(start, comma - start));
    items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

fs::path resolve(const fs::path& base_dir, const std::string& value) {
  fs::path p = value;
  if (!value.empty() && value.front() == '~') {
    const char* home = std::getenv("HOME");
    if (home) p = fs::path(home) / value.substr(value.size() > 1 && value[1] == '/' ? 2 : 1);
  }
  fs::path out = p.is_absolute() ? p.lexically_normal() : (base_dir / p).lexically_normal();
  if (!out.has_filename() && out != out.root_path()) out = out.parent_path();
  return out;
}

class Section {
 public:
  Section(std::string name, const pt::ptree& node) : name_(std::move(name)), node_(node) {}

  void allow(std::set<std::string> keys) {
    for (const auto& [key, child] : node_) {
      if (!child.empty()) fail(ErrorKind::kConfig, field(key) + " is a nested section");
      if (!keys.contains(key)) fail(ErrorKind::kConfig, "unknown field " + field(key));
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    auto it = node_.find(key);
    if (it == node_.not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  std::string require(const std::string& key) const {
    auto value = get(key);
    if (!value || value->empty()) fail(ErrorKind::kConfig, "missing field " + field(key));
    return *value;
  }

  std::string field(const std::string& key) const {
    return name_.empty() ? "'" + key + "'" : "'" + key + "' in [" + name_ + "]";
  }

 private:
  std::string name_;
  const pt::ptree& node_;
};

}  // namespace

CliConfig parse_config(std::istream& in, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::kConfig, std::string("malformed config: ") + e.what());
  }

  CliConfig config;
  pt::ptree top_level;
  bool have_placement = false;
  std::set<std::string> ids;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      top_level.push_back({name, node});
      continue;
    }
    if (name == "placement") {
      Section section(name, node);
      section.allow({"key_providers", "data_provider"});
      config.placement.key_providers = split_list(section.require("key_providers"));
      config.placement.data_provider = section.require("data_provider");
      have_placement = true;
    } else if (name.rfind("provider", 0) == 0) {
      Section section(name, node);
      section.allow({"id", "url", "file_sharing", "root"});
      ProviderConfig provider;
      provider.id = section.require("id");
      provider.url = section.require("url");
      std::string sharing = section.get("file_sharing").value_or("true");
      if (sharing != "true" && sharing != "false") {
        fail(ErrorKind::kConfig, section.field("file_sharing") + " must be true or false");
      }
      provider.supports_file_sharing = sharing == "true";
      std::string root = section.require("root");
      if (root != "memory") provider.persistence_root = resolve(base_dir, root);
      if (!ids.insert(provider.id).second) {
        fail(ErrorKind::kConfig, "duplicate provider id '" + provider.id + "' in [" + name + "]");
      }
      config.providers.push_back(std::move(provider));
    } else {
      fail(ErrorKind::kConfig, "unknown section [" + name + "]");
    }
  }

  Section top("", top_level);
  top.allow({"staging_dir", "token_cache", "default_dest"});
  config.staging_dir = resolve(base_dir, top.require("staging_dir"));
  config.token_cache = resolve(base_dir, top.require("token_cache"));
  config.default_dest = resolve(base_dir, top.get("default_dest").value_or("."));

  if (!have_placement) fail(ErrorKind::kConfig, "missing section [placement]");
  for (const auto& id : config.placement.ring()) {
    if (!ids.contains(id)) {
      fail(ErrorKind::kConfig, "placement references undeclared provider '" + id + "'");
    }
  }
  config.placement.validate();
  if (config.staging_dir == config.default_dest) {
    fail(ErrorKind::kConfig, "'staging_dir' must differ from 'default_dest'");
  }
  return config;
}

fs::path default_config_path() {
  if (const char* xdg = std::getenv("XDG_CONFIG_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "twincloud" / "config.ini";
  }
  const char* home = std::getenv("HOME");
  return fs::path(home ? home : ".") / ".config" / "twincloud" / "config.ini";
}

CliConfig load_config(const std::optional<fs::path>& flag_path) {
  fs::path path;
  if (flag_path) {
    path = *flag_path;
  } else if (const char* env = std::getenv("TWINCLOUD_CONFIG"); env && *env) {
    path = env;
  } else {
    path = default_config_path();
  }
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kConfig, "cannot open config file " + path.string());
  return parse_config(in, fs::absolute(path).parent_path());
}

}  // namespace twincloud
