// Copyright 2026 The Corridor Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CKM1 channel map files. Layout, all little-endian:
//
//   "CKM1"                      4 bytes
//   site index                  u32
//   nx, ny, nz                  3 x u32
//   origin x, y, z              3 x f64
//   step x, y, z                3 x f64
//   gains                       nx*ny*nz x f64, x-major then y then z
//   LoS bits                    ceil(nx*ny*nz / 8) bytes, LSB first

#ifndef CORRIDOR_CKM_IO_H_
#define CORRIDOR_CKM_IO_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include "corridor/channel_map.h"

namespace corridor {

class CkmFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void WriteCkm(const ChannelMap& map, std::ostream& out);
ChannelMap ReadCkm(std::istream& in);

void WriteCkmFile(const ChannelMap& map, const std::filesystem::path& path);
ChannelMap ReadCkmFile(const std::filesystem::path& path);

// "site_007.ckm" style name for a 0-based site index.
std::string CkmFileName(int site_index);

// Lowercase hex SHA-256 of a byte buffer or a whole file.
std::string Sha256Hex(std::span<const unsigned char> bytes);
std::string Sha256File(const std::filesystem::path& path);

}  // namespace corridor

#endif  // CORRIDOR_CKM_IO_H_
