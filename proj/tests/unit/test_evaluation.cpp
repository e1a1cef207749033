//==============================================================================
// Copyright 2026 The rangemos Authors
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
//==============================================================================

#include "rangemos/errors.hpp"
#include "rangemos/evaluation.hpp"

#include "../support/test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace rangemos;
using rangemos::testing::Rng;

using Bits = std::vector<std::uint8_t>;

TEST(Confusion, AllStatic)
{
  const ConfusionMatrix cm = rangemos::accumulate(Bits{0, 0, 0, 0}, Bits{0, 0, 0, 0});
  EXPECT_EQ(cm, (ConfusionMatrix{0, 0, 0, 4}));
}

TEST(Confusion, OneOfEach)
{
  const ConfusionMatrix cm = rangemos::accumulate(Bits{1, 1, 0, 0}, Bits{1, 0, 1, 0});
  EXPECT_EQ(cm, (ConfusionMatrix{1, 1, 1, 1}));
}

TEST(Confusion, EmptyLeavesInputUnchanged)
{
  const ConfusionMatrix start{3, 2, 1, 7};
  EXPECT_EQ(rangemos::accumulate(Bits{}, Bits{}, start), start);
}

TEST(Confusion, LengthMismatchIsContractError)
{
  EXPECT_THROW(rangemos::accumulate(Bits{1}, Bits{1, 0}), ContractError);
}

TEST(Iou, HandCountedValues)
{
  EXPECT_DOUBLE_EQ(*iou_moving({3, 1, 1, 0}), 0.6);
  EXPECT_DOUBLE_EQ(*iou_moving({5, 0, 0, 9}), 1.0);
  EXPECT_DOUBLE_EQ(*iou_moving({0, 2, 2, 0}), 0.0);
  EXPECT_FALSE(iou_moving({0, 0, 0, 12}).has_value());
}

TEST(Confusion, OrderIndependentAndSymmetricProperty)
{
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial)
  {
    std::vector<std::pair<Bits, Bits>> scans;
    for (int s = 0; s < 6; ++s)
    {
      const auto n = static_cast<std::size_t>(rng.integer(0, 200));
      scans.emplace_back(rangemos::testing::random_binary(rng, n, 0.3),
                         rangemos::testing::random_binary(rng, n, 0.3));
    }
    ConfusionMatrix forward;
    for (const auto& [p, g] : scans)
      forward = rangemos::accumulate(p, g, forward);
    std::shuffle(scans.begin(), scans.end(), rng.engine());
    ConfusionMatrix shuffled;
    std::vector<ConfusionMatrix> parts;
    for (const auto& [p, g] : scans)
      parts.push_back(rangemos::accumulate(p, g));
    for (const auto& part : parts)
      shuffled += part;
    EXPECT_EQ(forward, shuffled);

    ConfusionMatrix swapped;
    std::size_t total = 0;
    for (const auto& [p, g] : scans)
    {
      swapped = rangemos::accumulate(g, p, swapped);
      total += p.size();
    }
    EXPECT_EQ(swapped.fp, forward.fn);
    EXPECT_EQ(swapped.fn, forward.fp);
    EXPECT_EQ(forward.total(), total);
    const auto a = iou_moving(forward);
    const auto b = iou_moving(swapped);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a)
    {
      EXPECT_DOUBLE_EQ(*a, *b);
      EXPECT_GE(*a, 0.0);
      EXPECT_LE(*a, 1.0);
    }
  }
}

TEST(Report, KeyValueAndTextFormats)
{
  EvaluationReport report;
  report.scans.push_back({0, {3, 1, 1, 5}});
  report.scans.push_back({1, {0, 0, 0, 4}});
  EXPECT_EQ(report.overall(), (ConfusionMatrix{3, 1, 1, 9}));
  EXPECT_EQ(report.excluded_scans(), 1u);

  const std::string kv = report.to_key_value();
  EXPECT_NE(kv.find("scan=0 tp=3 fp=1 fn=1 tn=5 iou_moving=0.600000"), std::string::npos) << kv;
  EXPECT_NE(kv.find("scan=1 tp=0 fp=0 fn=0 tn=4 iou_moving=undefined"), std::string::npos) << kv;
  EXPECT_NE(kv.find("excluded_scans=1\n"), std::string::npos) << kv;
  EXPECT_NE(kv.find("iou_moving=0.600000\n"), std::string::npos) << kv;
  for (std::size_t start = 0; start < kv.size();)
  {
    const auto end = kv.find('\n', start);
    ASSERT_NE(end, std::string::npos);
    const std::string line = kv.substr(start, end - start);
    EXPECT_NE(line.find('='), std::string::npos) << line;
    start = end + 1;
  }
  const std::string text = report.to_text();
  EXPECT_NE(text.find("overall"), std::string::npos);
  EXPECT_NE(text.find("undefined"), std::string::npos);
}
