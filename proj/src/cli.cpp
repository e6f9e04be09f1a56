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

#include "twincloud/cli.hpp"

#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>

#include "twincloud/config.hpp"
#include "twincloud/gateway.hpp"
#include "twincloud/mock_provider.hpp"
#include "twincloud/token_cache.hpp"

namespace twincloud {
namespace fs = std::filesystem;
namespace {

std::string read_password(std::ostream& err) {
  if (const char* env = std::getenv("TWINCLOUD_PASSWORD"); env && *env) return env;
  if (!isatty(STDIN_FILENO)) {
    fail(ErrorKind::kAuth, "no password available: set TWINCLOUD_PASSWORD or run interactively");
  }
  err << "Password: " << std::flush;
  termios saved{};
  tcgetattr(STDIN_FILENO, &saved);
  termios quiet = saved;
  quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
  tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  std::string password;
  std::getline(std::cin, password);
  tcsetattr(STDIN_FILENO, TCSANOW, &saved);
  err << '\n';
  if (password.empty()) fail(ErrorKind::kAuth, "empty password");
  return password;
}

std::string resolve_user(const std::string& flag, const CliConfig& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TWINCLOUD_USER"); env && *env) return env;
  auto cached = TokenCache(config.token_cache).usernames();
  if (cached.size() == 1) return cached.front();
  fail(ErrorKind::kInvalidArgument, "no user given: pass --user or set TWINCLOUD_USER");
}

Session open_session(Gateway& gateway, const std::string& user, std::ostream& err) {
  try {
    return gateway.resume(user);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kAuth) throw;
  }
  return gateway.login(user, read_password(err));
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kAuth:
      return kExitAuthError;
    case ErrorKind::kIntegrity:
    case ErrorKind::kFormat:
      return kExitIntegrityError;
    case ErrorKind::kConfig:
      return kExitConfigError;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kNotFound:
    case ErrorKind::kConflict:
    case ErrorKind::kAccessDenied:
    case ErrorKind::kPolicy:
    case ErrorKind::kCapability:
    case ErrorKind::kUnavailable:
    case ErrorKind::kIo:
    case ErrorKind::kCrypto:
      return kExitUserError;
  }
  return kExitUserError;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Client-side encrypted storage split across cloud providers.", "twincloud"};
  app.require_subcommand(1);

  std::string config_path;
  std::string user_flag;
  app.add_option("--config", config_path, "Config file (else $TWINCLOUD_CONFIG)");
  app.add_option("-u,--user", user_flag, "Account name (else $TWINCLOUD_USER)");

  auto* signup = app.add_subcommand("signup", "Create accounts on every provider");
  auto* login = app.add_subcommand("login", "Log in and cache provider tokens");

  std::string local_path;
  bool force = false;
  auto* up = app.add_subcommand("up", "Encrypt and upload a local file");
  up->add_option("local-path", local_path)->required();
  up->add_flag("--force", force, "Overwrite an existing file of the same name");

  std::string name;
  std::string dest;
  auto* down = app.add_subcommand("down", "Download and decrypt a file");
  down->add_option("name", name)->required();
  down->add_option("--dest", dest, "Destination path");

  auto* ls = app.add_subcommand("ls", "List owned and shared files");

  auto* rm = app.add_subcommand("rm", "Delete a file everywhere, trash included");
  rm->add_option("name", name)->required();

  std::string grantee;
  bool edit = false;
  auto* share = app.add_subcommand("share", "Share a file with another user");
  share->add_option("name", name)->required();
  share->add_option("user", grantee)->required();
  share->add_flag("--edit", edit, "Grant edit instead of read");

  auto* unshare = app.add_subcommand("unshare", "Revoke a user's access to a file");
  unshare->add_option("name", name)->required();
  unshare->add_option("user", grantee)->required();

  auto* sync = app.add_subcommand("sync", "Download every file into a directory");
  sync->add_option("--dest", dest, "Destination directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    CliConfig config = load_config(config_path.empty() ? std::nullopt
                                                       : std::optional<fs::path>(config_path));
    std::vector<std::shared_ptr<CloudProvider>> providers;
    for (const auto& pc : config.providers) providers.push_back(std::make_shared<MockProvider>(pc));
    Gateway gateway(std::move(providers), config.placement,
                    GatewayOptions{config.staging_dir, config.token_cache});

    if (*signup) {
      std::string user = resolve_user(user_flag, config);
      gateway.signup(user, read_password(err));
      out << "signup\t" << user << '\n';
      return kExitOk;
    }
    if (*login) {
      std::string user = resolve_user(user_flag, config);
      gateway.login(user, read_password(err));
      out << "login\t" << user << '\n';
      return kExitOk;
    }

    Session session = open_session(gateway, resolve_user(user_flag, config), err);
    if (*up) {
      LogicalEntry entry = gateway.upload_file(session, local_path, force);
      out << entry.logical_name << "\tuploaded\t" << entry.size << '\n';
    } else if (*down) {
      if (dest.empty()) fs::create_directories(config.default_dest);
      fs::path target = dest.empty() ? config.default_dest / name : fs::path(dest);
      gateway.download_file(session, name, target);
      out << name << '\t' << target.string() << '\n';
    } else if (*ls) {
      for (const auto& entry : gateway.list_files(session)) {
        out << entry.logical_name << '\t'
            << (entry.owned ? std::string("owned") : "from:" + entry.shared_from.value_or("?"))
            << '\n';
        if (entry.diagnostic) err << "warning: " << entry.logical_name << ": " << *entry.diagnostic << '\n';
      }
    } else if (*rm) {
      gateway.delete_file(session, name);
      out << name << "\tdeleted\n";
    } else if (*share) {
      Permission perm = edit ? Permission::kEdit : Permission::kRead;
      gateway.share_file(session, name, grantee, perm);
      out << name << "\tshared\t" << grantee << '\t' << permission_name(perm) << '\n';
    } else if (*unshare) {
      gateway.unshare_file(session, name, grantee);
      out << name << "\tunshared\t" << grantee << '\n';
    } else if (*sync) {
      fs::path target = dest.empty() ? config.default_dest : fs::path(dest);
      SyncReport report = gateway.sync_all(session, target);
      for (const auto& file : report.files) out << file << '\t' << (target / file).string() << '\n';
      out << "synced\t" << report.written << '\n';
      for (const auto& failure : report.failures) {
        err << "error: " << failure.logical_name << ": " << error_kind_name(failure.kind)
            << ": " << failure.message << '\n';
      }
      if (!report.failures.empty()) return exit_code_for(report.failures.front().kind);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }
}

}  // namespace twincloud
