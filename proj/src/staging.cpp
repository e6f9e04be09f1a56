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

#include "twincloud/staging.hpp"

#include <fstream>
#include <system_error>
#include <vector>

#include "twincloud/crypto.hpp"
#include "twincloud/error.hpp"

namespace twincloud {
namespace fs = std::filesystem;

StagingArea::StagingArea(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    fail(ErrorKind::kIo, "cannot create staging directory " + dir_.string());
  }
}

StagingArea::File StagingArea::stage(std::string_view label, ByteView bytes) const {
  fs::path path = dir_ / (std::string(label) + "-" + to_hex(crypto::random_bytes(8)));
  File file(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "cannot write staging file " + path.string());
  return file;
}

StagingArea::File::File(File&& other) noexcept : path_(std::move(other.path_)) {
  other.path_.clear();
}

StagingArea::File::~File() {
  if (path_.empty()) return;
  std::error_code ec;
  // Single overwrite pass before unlinking.
  auto size = fs::file_size(path_, ec);
  if (!ec && size > 0) {
    std::ofstream out(path_, std::ios::binary | std::ios::in | std::ios::out);
    std::vector<char> zeros(64 * 1024, 0);
    while (out && size > 0) {
      auto n = std::min<std::uintmax_t>(size, zeros.size());
      out.write(zeros.data(), static_cast<std::streamsize>(n));
      size -= n;
    }
  }
  fs::remove(path_, ec);
}

Bytes StagingArea::File::read() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read staging file " + path_.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace twincloud
