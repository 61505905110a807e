// Copyright 2026 The tagdiff Authors
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

#include "support/dense_oracle.hpp"

#include <vector>

#include "gtest/gtest.h"
#include "support/fixtures.hpp"

namespace tagdiff::oracle {
namespace {

TEST(DenseOracleTest, WorkedFixtureTagWeighted) {
  const auto model = to_dense(build_store(testing::fixture_w()));
  const auto scores = dense_scores(model, 0, Algorithm::kTagWeighted);
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_NEAR(scores[0], 0.28, 1e-12);
  EXPECT_NEAR(scores[1], 0.57, 1e-12);
  EXPECT_NEAR(scores[2], 0.15, 1e-12);
}

TEST(DenseOracleTest, WorkedFixtureBaseline) {
  const auto model = to_dense(build_store(testing::fixture_w()));
  const auto scores = dense_scores(model, 0, Algorithm::kBaseline);
  EXPECT_NEAR(scores[0], 0.75, 1e-12);
  EXPECT_NEAR(scores[1], 1.0, 1e-12);
  EXPECT_NEAR(scores[2], 0.25, 1e-12);
}

TEST(DenseOracleTest, WeightRowsSumToOne) {
  const auto model = to_dense(build_store(testing::fixture_w()));
  EXPECT_NEAR(model.weight[0][0], 0.4, 1e-12);
  EXPECT_NEAR(model.weight[0][1], 0.6, 1e-12);
  EXPECT_EQ(model.weight[0][2], 0.0);
  for (const auto& row : model.weight) {
    double s = 0.0;
    for (double w : row) s += w;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(DenseOracleTest, SingleCell) {
  const auto model = to_dense(build_store(std::vector<Triple>{{"a", "x", "t"}}));
  EXPECT_EQ(dense_scores(model, 0, Algorithm::kTagWeighted), std::vector<double>{1.0});
}

TEST(DenseOracleTest, EmptyRowIsColdStart) {
  const auto full = build_store(testing::fixture_w());
  std::vector<Assignment> only_u1;
  for (const auto& a : full.assignments()) {
    if (a.user.index == 0) only_u1.push_back(a);
  }
  const auto model = to_dense(FolksonomyStore::from_assignments(full.symbols(), only_u1));
  EXPECT_THROW(dense_scores(model, 1, Algorithm::kTagWeighted), ColdStartError);
}

}  // namespace
}  // namespace tagdiff::oracle
