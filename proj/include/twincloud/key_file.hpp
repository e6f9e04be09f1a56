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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "twincloud/bytes.hpp"
#include "twincloud/crypto.hpp"

namespace twincloud {

// Plaintext key artifact stored on a key provider:
//   "TWC1" | version 0x01 | key share (32) | u16be name length | name token
// The name token is the data provider's object name for the envelope.
struct KeyFileRecord {
  static constexpr std::array<std::uint8_t, 4> kMagic{0x54, 0x57, 0x43, 0x31};
  static constexpr std::uint8_t kVersion = 0x01;
  static constexpr std::size_t kFixedSize = 39;

  crypto::Key256 key_share{};
  std::string data_name;

  Bytes serialize() const;
  // Throws Error(kFormat) on bad magic, version, length or a non-ASCII name.
  static KeyFileRecord parse(ByteView bytes);
};

}  // namespace twincloud
