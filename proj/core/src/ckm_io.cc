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

#include "corridor/ckm_io.h"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <memory>
#include <ostream>
#include <vector>

namespace corridor {
namespace {

constexpr char kMagic[4] = {'C', 'K', 'M', '1'};

void PutU32(std::ostream& out, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void PutF64(std::ostream& out, double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<unsigned char>(bits >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(b), 8);
}

void ReadExact(std::istream& in, unsigned char* dst, size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) {
    throw CkmFormatError("CKM file truncated");
  }
}

uint32_t GetU32(std::istream& in) {
  unsigned char b[4];
  ReadExact(in, b, 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

double GetF64(std::istream& in) {
  unsigned char b[8];
  ReadExact(in, b, 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void WriteCkm(const ChannelMap& map, std::ostream& out) {
  const LatticeGeometry& g = map.lattice;
  if (map.gains.size() != g.size() || map.los.size() != g.size()) {
    throw CkmFormatError("channel map arrays do not match the lattice");
  }
  out.write(kMagic, 4);
  PutU32(out, static_cast<uint32_t>(map.site_index));
  PutU32(out, static_cast<uint32_t>(g.nx));
  PutU32(out, static_cast<uint32_t>(g.ny));
  PutU32(out, static_cast<uint32_t>(g.nz));
  PutF64(out, g.origin_x);
  PutF64(out, g.origin_y);
  PutF64(out, g.origin_z);
  PutF64(out, g.step_x);
  PutF64(out, g.step_y);
  PutF64(out, g.step_z);
  for (double gain : map.gains) PutF64(out, gain);
  std::vector<unsigned char> packed((g.size() + 7) / 8, 0);
  for (size_t n = 0; n < g.size(); ++n) {
    if (map.los[n]) packed[n / 8] |= static_cast<unsigned char>(1u << (n % 8));
  }
  out.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size()));
  if (!out) throw CkmFormatError("failed writing CKM data");
}

ChannelMap ReadCkm(std::istream& in) {
  unsigned char magic[4];
  ReadExact(in, magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw CkmFormatError("bad CKM magic (expected \"CKM1\")");
  }
  ChannelMap map;
  map.site_index = static_cast<int>(GetU32(in));
  LatticeGeometry& g = map.lattice;
  g.nx = static_cast<int>(GetU32(in));
  g.ny = static_cast<int>(GetU32(in));
  g.nz = static_cast<int>(GetU32(in));
  constexpr uint64_t kMaxPoints = uint64_t{1} << 32;
  if (static_cast<uint64_t>(g.nx) * g.ny * g.nz > kMaxPoints) {
    throw CkmFormatError("CKM lattice dimensions are implausible");
  }
  g.origin_x = GetF64(in);
  g.origin_y = GetF64(in);
  g.origin_z = GetF64(in);
  g.step_x = GetF64(in);
  g.step_y = GetF64(in);
  g.step_z = GetF64(in);
  map.gains.resize(g.size());
  for (double& gain : map.gains) gain = GetF64(in);
  std::vector<unsigned char> packed((g.size() + 7) / 8);
  ReadExact(in, packed.data(), packed.size());
  map.los.resize(g.size());
  for (size_t n = 0; n < g.size(); ++n) {
    map.los[n] = (packed[n / 8] >> (n % 8)) & 1u;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw CkmFormatError("trailing bytes after CKM payload");
  }
  return map;
}

void WriteCkmFile(const ChannelMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CkmFormatError("cannot open " + path.string());
  WriteCkm(map, out);
}

ChannelMap ReadCkmFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CkmFormatError("cannot open " + path.string());
  try {
    return ReadCkm(in);
  } catch (const CkmFormatError& e) {
    throw CkmFormatError(path.string() + ": " + e.what());
  }
}

std::string CkmFileName(int site_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "site_%03d.ckm", site_index);
  return buf;
}

std::string Sha256Hex(std::span<const unsigned char> bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int n = 0; n < length; ++n) {
    out.push_back(kHex[digest[n] >> 4]);
    out.push_back(kHex[digest[n] & 0xf]);
  }
  return out;
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  return Sha256Hex(bytes);
}

}  // namespace corridor
