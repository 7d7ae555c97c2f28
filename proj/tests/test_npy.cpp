// Copyright 2026 The radiogrid Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <string>

#include "radiogrid/error.hpp"
#include "radiogrid/npy.hpp"
#include "test_support.hpp"

using namespace radiogrid;
using radiogrid::testing::random_grid;
using radiogrid::testing::TempDir;

namespace {

std::vector<std::uint8_t> handmade(const std::string& dict, const std::vector<std::uint8_t>& body,
                                   std::uint8_t major = 1) {
  std::string header = dict;
  const std::size_t prefix = major == 1 ? 10 : 12;
  while ((prefix + header.size() + 1) % 64 != 0) header += ' ';
  header += '\n';
  std::vector<std::uint8_t> out{0x93, 'N', 'U', 'M', 'P', 'Y', major, 0};
  const auto len = static_cast<std::uint32_t>(header.size());
  out.push_back(static_cast<std::uint8_t>(len & 0xff));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  if (major != 1) {
    out.push_back(0);
    out.push_back(0);
  }
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

template <typename T>
std::vector<std::uint8_t> raw(std::initializer_list<T> values) {
  std::vector<std::uint8_t> out(values.size() * sizeof(T));
  std::memcpy(out.data(), std::data(values), out.size());
  return out;
}

}  // namespace

TEST_CASE("encoded header is v1.0 little-endian float32 C order") {
  const FeatureGrid g = random_grid(3, 5, 1);
  const auto bytes = npy::encode(g);
  CHECK(bytes[0] == 0x93);
  CHECK(std::memcmp(bytes.data() + 1, "NUMPY", 5) == 0);
  CHECK(bytes[6] == 1);
  CHECK(bytes[7] == 0);
  const std::size_t hlen = bytes[8] | (bytes[9] << 8);
  CHECK((10 + hlen) % 64 == 0);
  const std::string header(bytes.begin() + 10, bytes.begin() + 10 + static_cast<long>(hlen));
  CHECK(header.find("'descr': '<f4'") != std::string::npos);
  CHECK(header.find("'fortran_order': False") != std::string::npos);
  CHECK(header.find("'shape': (3, 5)") != std::string::npos);
  CHECK(header.back() == '\n');
  CHECK(bytes.size() == 10 + hlen + 15 * 4);
}

TEST_CASE("save and load round trip at float32 precision") {
  TempDir dir("npy");
  const FeatureGrid g = random_grid(17, 9, 4);
  npy::save(dir / "g.npy", g);
  const FeatureGrid back = npy::load(dir / "g.npy", GridKind::kNormalized);
  REQUIRE(back.same_shape(g));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(back[i] == static_cast<double>(static_cast<float>(g[i])));
  }
  const FeatureGrid mask = random_grid(4, 4, 2, GridKind::kLosMask);
  npy::save(dir / "m.npy", mask);
  CHECK(npy::load(dir / "m.npy", GridKind::kLosMask) == mask);
}

TEST_CASE("float64, version 2 and one-dimensional inputs decode") {
  const auto f8 = handmade("{'descr': '<f8', 'fortran_order': False, 'shape': (2, 2), }",
                           raw<double>({1.5, -2.0, 3.25, 4.0}));
  const FeatureGrid a = npy::decode(f8, GridKind::kPathloss);
  CHECK(a.rows() == 2);
  CHECK(a(1, 0) == 3.25);

  const auto v2 = handmade("{'descr': '<f4', 'fortran_order': False, 'shape': (3,), }",
                           raw<float>({1.0f, 2.0f, 3.0f}), 2);
  const FeatureGrid b = npy::decode(v2, GridKind::kNormalized);
  CHECK(b.rows() == 1);
  CHECK(b.cols() == 3);
  CHECK(b[2] == 3.0);
}

TEST_CASE("malformed files are rejected") {
  const auto good = handmade("{'descr': '<f4', 'fortran_order': False, 'shape': (2, 2), }",
                             raw<float>({1, 2, 3, 4}));
  auto bad_magic = good;
  bad_magic[1] = 'X';
  CHECK_THROWS_AS(npy::decode(bad_magic, GridKind::kNormalized), FormatError);

  auto short_body = good;
  short_body.resize(short_body.size() - 3);
  CHECK_THROWS_AS(npy::decode(short_body, GridKind::kNormalized), TruncatedFileError);

  auto future = good;
  future[6] = 7;
  CHECK_THROWS_AS(npy::decode(future, GridKind::kNormalized), VersionError);

  const auto fortran = handmade("{'descr': '<f4', 'fortran_order': True, 'shape': (2, 2), }",
                                raw<float>({1, 2, 3, 4}));
  CHECK_THROWS_AS(npy::decode(fortran, GridKind::kNormalized), FormatError);

  const auto ints = handmade("{'descr': '<i4', 'fortran_order': False, 'shape': (2, 2), }",
                             raw<std::int32_t>({1, 2, 3, 4}));
  CHECK_THROWS_AS(npy::decode(ints, GridKind::kNormalized), FormatError);

  try {
    (void)npy::decode(bad_magic, GridKind::kNormalized, "maps/x.npy");
    FAIL("accepted");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("maps/x.npy") != std::string::npos);
  }
}
