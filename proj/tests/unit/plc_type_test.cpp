// Copyright 2026 The adsbench Authors
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

#include <gtest/gtest.h>

#include "adsbench/plc/plc_type.hpp"

namespace adsbench::plc {
namespace {

TEST(PlcTypeTest, FourteenScalarSizes) {
  const std::pair<const char*, std::size_t> expected[] = {
      {"BOOL", 1}, {"BYTE", 1}, {"WORD", 2},  {"DWORD", 4}, {"SINT", 1},  {"USINT", 1}, {"INT", 2},
      {"UINT", 2}, {"DINT", 4}, {"UDINT", 4}, {"LINT", 8},  {"ULINT", 8}, {"REAL", 4},  {"LREAL", 8}};
  ASSERT_EQ(kAllScalarTypes.size(), 14u);
  for (const auto& [kw, size] : expected) {
    auto t = parse_scalar_type(kw);
    ASSERT_TRUE(t) << kw;
    EXPECT_EQ(scalar_size(*t), size) << kw;
    EXPECT_EQ(keyword(*t), kw);
  }
}

TEST(PlcTypeTest, ArraySizeIsCountTimesElement) {
  for (auto t : kAllScalarTypes) {
    for (std::uint32_t n : {1u, 3u, 17u}) {
      EXPECT_EQ(PlcType::array(t, n).size(), n * scalar_size(t));
    }
  }
}

TEST(PlcTypeTest, ParsesBothArraySpellings) {
  EXPECT_EQ(parse_plc_type("LREAL[3]"), PlcType::array(ScalarType::kLReal, 3));
  EXPECT_EQ(parse_plc_type("ARRAY[0..2] OF LREAL"), PlcType::array(ScalarType::kLReal, 3));
  EXPECT_EQ(parse_plc_type("array[1..3] of dint"), PlcType::array(ScalarType::kDInt, 3));
  EXPECT_EQ(parse_plc_type(" sint "), PlcType::scalar(ScalarType::kSInt));
  EXPECT_FALSE(parse_plc_type("FLOAT"));
  EXPECT_FALSE(parse_plc_type("LREAL[0]"));
  EXPECT_FALSE(parse_plc_type("ARRAY[2..1] OF INT"));
  EXPECT_FALSE(parse_plc_type("INT[x]"));
}

TEST(PlcTypeTest, DisplayNamesFollowTableSpelling) {
  EXPECT_EQ(PlcType::scalar(ScalarType::kLReal).display(), "LReal");
  EXPECT_EQ(PlcType::scalar(ScalarType::kLInt).display(), "LInt");
  EXPECT_EQ(PlcType::scalar(ScalarType::kSInt).display(), "SInt");
  EXPECT_EQ(PlcType::scalar(ScalarType::kByte).display(), "Byte");
  EXPECT_EQ(PlcType::array(ScalarType::kLReal, 3).display(), "LReal[3]");
}

}  // namespace
}  // namespace adsbench::plc
