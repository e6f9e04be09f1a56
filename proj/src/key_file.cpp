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

#include "twincloud/key_file.hpp"

#include <algorithm>

#include "twincloud/error.hpp"

namespace twincloud {

Bytes KeyFileRecord::serialize() const {
  if (data_name.size() > 0xffff) fail(ErrorKind::kInvalidArgument, "data name too long");
  Bytes out;
  out.reserve(kFixedSize + data_name.size());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(kVersion);
  out.insert(out.end(), key_share.begin(), key_share.end());
  out.push_back(static_cast<std::uint8_t>(data_name.size() >> 8));
  out.push_back(static_cast<std::uint8_t>(data_name.size() & 0xff));
  auto name = as_bytes(data_name);
  out.insert(out.end(), name.begin(), name.end());
  return out;
}

KeyFileRecord KeyFileRecord::parse(ByteView bytes) {
  if (bytes.size() < kFixedSize) fail(ErrorKind::kFormat, "key file truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    fail(ErrorKind::kFormat, "key file has bad magic");
  }
  if (bytes[4] != kVersion) fail(ErrorKind::kFormat, "unsupported key file version");
  std::size_t name_len = std::size_t{bytes[37]} << 8 | bytes[38];
  if (bytes.size() != kFixedSize + name_len) {
    fail(ErrorKind::kFormat, "key file length does not match its name length");
  }
  KeyFileRecord record;
  std::copy_n(bytes.begin() + 5, crypto::kKeySize, record.key_share.begin());
  auto name = bytes.subspan(kFixedSize);
  if (std::any_of(name.begin(), name.end(), [](std::uint8_t c) { return c < 0x21 || c > 0x7e; })) {
    fail(ErrorKind::kFormat, "key file data name is not printable ASCII");
  }
  record.data_name = to_string(name);
  return record;
}

}  // namespace twincloud
