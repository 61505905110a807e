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

#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "tagdiff/folksonomy.hpp"

namespace tagdiff::testing {

// Worked fixture: u1 tags i1 {t1}, i2 {t1, t2}; u2 tags i2 {t2}, i3 {t1}.
inline std::vector<Triple> fixture_w() {
  return {
      {"u1", "i1", "t1"}, {"u1", "i2", "t1"}, {"u1", "i2", "t2"},
      {"u2", "i2", "t2"}, {"u2", "i3", "t1"},
  };
}

inline UserId user(const FolksonomyStore& s, const std::string& label) { return *s.find_user(label); }
inline ItemId item(const FolksonomyStore& s, const std::string& label) { return *s.find_item(label); }
inline TagId tag(const FolksonomyStore& s, const std::string& label) { return *s.find_tag(label); }

// Random triples over at most the given entity counts. Every user gets at
// least one item; items may end up with a single collector.
inline std::vector<Triple> random_triples(std::mt19937& rng, std::size_t max_users,
                                          std::size_t max_items, std::size_t max_tags) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const auto users = pick(1, max_users);
  const auto items = pick(1, max_items);
  const auto tags = pick(1, max_tags);
  std::vector<Triple> out;
  for (std::size_t u = 0; u < users; ++u) {
    const auto count = pick(1, std::min<std::size_t>(items, 12));
    for (std::size_t k = 0; k < count; ++k) {
      const auto j = pick(0, items - 1);
      const auto tag_count = pick(1, std::min<std::size_t>(tags, 3));
      for (std::size_t x = 0; x < tag_count; ++x) {
        out.push_back({"u" + std::to_string(u), "i" + std::to_string(j),
                       "t" + std::to_string(pick(0, tags - 1))});
      }
    }
  }
  return out;
}

// Random triples where each assignment has exactly one tag and a user never
// reuses a tag, so every tag frequency is 1.
inline std::vector<Triple> random_single_use_tags(std::mt19937& rng, std::size_t max_users,
                                                  std::size_t max_items) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const auto users = pick(2, max_users);
  const auto items = pick(2, max_items);
  std::vector<Triple> out;
  for (std::size_t u = 0; u < users; ++u) {
    std::vector<bool> taken(items, false);
    const auto count = pick(1, std::min<std::size_t>(items, 15));
    for (std::size_t k = 0; k < count; ++k) {
      const auto j = pick(0, items - 1);
      if (taken[j]) continue;
      taken[j] = true;
      out.push_back({"u" + std::to_string(u), "i" + std::to_string(j),
                     "t" + std::to_string(u) + "_" + std::to_string(k)});
    }
  }
  return out;
}

}  // namespace tagdiff::testing
