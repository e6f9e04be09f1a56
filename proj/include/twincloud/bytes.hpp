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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twincloud {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  auto view = as_bytes(s);
  return {view.begin(), view.end()};
}

inline std::string to_string(ByteView bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

std::string to_hex(ByteView bytes);

// Throws Error(kFormat) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

// RFC 4648 section 5 alphabet, no padding. Decoding is strict: padding,
// foreign characters and non-zero trailing bits are all rejected.
std::string base64url_encode(ByteView bytes);
Bytes base64url_decode(std::string_view text);

bool is_valid_utf8(ByteView bytes);

}  // namespace twincloud
