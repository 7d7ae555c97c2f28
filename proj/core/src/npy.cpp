// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiogrid/npy.hpp"

#include <bit>
#include <cstring>
#include <regex>
#include <string>

#include "radiogrid/dataset_io.hpp"
#include "radiogrid/error.hpp"

namespace radiogrid::npy {
namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kPreamble = 10;  // magic, version, u16 header length

std::uint64_t load_le(const std::uint8_t* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode(const FeatureGrid& g) {
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" +
                       std::to_string(g.rows()) + ", " + std::to_string(g.cols()) +
                       "), }";
  const std::size_t unpadded = kPreamble + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::vector<std::uint8_t> out(kMagic, kMagic + kMagicLen);
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size()));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  out.reserve(out.size() + 4 * g.size());
  for (double v : g.values()) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int shift = 0; shift < 32; shift += 8) {
      out.push_back(static_cast<std::uint8_t>(bits >> shift));
    }
  }
  return out;
}

FeatureGrid decode(std::span<const std::uint8_t> bytes, GridKind kind,
                   std::string_view name) {
  const std::string prefix = std::string(name) + ": ";
  if (bytes.size() < kPreamble || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    throw FormatError(prefix + "not an NPY file");
  }
  const unsigned major = bytes[6];
  std::size_t header_len = 0;
  std::size_t data_start = 0;
  if (major == 1) {
    header_len = load_le(bytes.data() + 8, 2);
    data_start = kPreamble + header_len;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw TruncatedFileError(prefix + "truncated header");
    header_len = load_le(bytes.data() + 8, 4);
    data_start = 12 + header_len;
  } else {
    throw VersionError(prefix + "unsupported format version " + std::to_string(major));
  }
  if (bytes.size() < data_start) throw TruncatedFileError(prefix + "truncated header");
  const std::string header(reinterpret_cast<const char*>(bytes.data()) + data_start -
                               header_len,
                           header_len);

  std::smatch m;
  static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
  if (!std::regex_search(header, m, descr_re)) throw FormatError(prefix + "no descr");
  const std::string descr = m[1];
  std::size_t width;
  if (descr == "<f4") {
    width = 4;
  } else if (descr == "<f8") {
    width = 8;
  } else {
    throw FormatError(prefix + "unsupported dtype '" + descr + "' (expected <f4 or <f8)");
  }
  if (!std::regex_search(header, m, order_re)) throw FormatError(prefix + "no fortran_order");
  if (m[1] == "True") throw FormatError(prefix + "Fortran-ordered arrays are not supported");
  if (!std::regex_search(header, m, shape_re)) throw FormatError(prefix + "no shape");
  std::vector<std::size_t> shape;
  const std::string dims = m[1];
  static const std::regex num_re(R"(\d+)");
  for (auto it = std::sregex_iterator(dims.begin(), dims.end(), num_re);
       it != std::sregex_iterator(); ++it) {
    shape.push_back(std::stoull(it->str()));
  }
  if (shape.size() == 1) shape.insert(shape.begin(), 1);
  if (shape.size() != 2) {
    throw FormatError(prefix + "expected a 1-D or 2-D array, got " +
                      std::to_string(shape.size()) + " dimensions");
  }
  const std::size_t count = shape[0] * shape[1];
  if (bytes.size() - data_start < count * width) {
    throw TruncatedFileError(prefix + "data holds " +
                             std::to_string((bytes.size() - data_start) / width) +
                             " of " + std::to_string(count) + " values");
  }
  std::vector<double> values(count);
  const std::uint8_t* p = bytes.data() + data_start;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t raw = load_le(p + i * width, width);
    values[i] = width == 4 ? std::bit_cast<float>(static_cast<std::uint32_t>(raw))
                           : std::bit_cast<double>(raw);
  }
  return FeatureGrid(shape[0], shape[1], kind, std::move(values));
}

void save(const std::filesystem::path& path, const FeatureGrid& g) {
  dataset::write_file_atomic(path, encode(g));
}

FeatureGrid load(const std::filesystem::path& path, GridKind kind) {
  return decode(dataset::read_file(path), kind, path.string());
}

}  // namespace radiogrid::npy
