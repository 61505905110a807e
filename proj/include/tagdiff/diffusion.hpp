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

// Mass diffusion on the user-item bipartite graph.
//
// Tag-weighted variant, for a target user i:
//   1. f_j  = w(i, j)                       over the items i collected
//   2. r_l  = sum_{j in items(l)} f_j / d(j)
//   3. f'_j = sum_{k in users(j)} r_k * w(k, j)
// where w(k, j) is the tag mass of k's assignment on j (the sum of k's usage
// counts of the tags put on j) divided by k's total tag mass, so each user's
// weights sum to one.
//
// The baseline is the same pipeline with f_j = 1 on collected items and
// w(k, j) = 1 / degree(k).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagdiff/error.hpp"
#include "tagdiff/folksonomy.hpp"

namespace tagdiff {

/// Sparse non-negative score vector, entries sorted by id. Zeros are never stored.
template <typename Kind>
class SparseVector {
 public:
  using Key = Id<Kind>;
  using Entry = std::pair<Key, double>;

  SparseVector() = default;

  SparseVector(std::initializer_list<Entry> entries) {
    for (const auto& [key, value] : entries) {
      if (!(value >= 0.0)) throw std::invalid_argument("negative or NaN score");
      if (value > 0.0) entries_.emplace_back(key, value);
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < entries_.size(); ++k) {
      if (entries_[k - 1].first == entries_[k].first) {
        throw std::invalid_argument("duplicate key in sparse vector");
      }
    }
  }

  /// Compacts a dense accumulator indexed by id.
  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] > 0.0) v.entries_.emplace_back(Key{static_cast<std::uint32_t>(i)}, dense[i]);
    }
    return v;
  }

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double operator[](Key key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const Entry& e, Key k) { return e.first < k; });
    return (it != entries_.end() && it->first == key) ? it->second : 0.0;
  }

  double sum() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += e.second;
    return s;
  }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

using ItemVector = SparseVector<ItemKind>;
using UserVector = SparseVector<UserKind>;

enum class Algorithm { kTagWeighted, kBaseline };

inline std::string_view to_string(Algorithm a) {
  return a == Algorithm::kTagWeighted ? "tagweighted" : "baseline";
}

inline Algorithm parse_algorithm(std::string_view name) {
  if (name == "tagweighted") return Algorithm::kTagWeighted;
  if (name == "baseline") return Algorithm::kBaseline;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

struct RankedItem {
  ItemId item;
  double score = 0.0;

  friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

/// Top-L list for one user: score descending, ties by ascending item id
/// (see ranking_key for what counts as a tie).
struct RankedList {
  UserId target;
  std::vector<RankedItem> entries;
  std::size_t requested_length = 0;

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// The three stages of one diffusion run.
struct Diffusion {
  ItemVector initial;
  UserVector users;
  ItemVector scores;
};

namespace detail {

inline void require_collector(const FolksonomyStore& store, UserId target) {
  if (store.user_degree(target) == 0) {
    throw ColdStartError("user '" + store.user_label(target) + "' has no collected items");
  }
}

}  // namespace detail

/// Step 1: the target's per-assignment tag weights.
inline ItemVector initial_vector(const FolksonomyStore& store, UserId target) {
  detail::require_collector(store, target);
  const auto mass = static_cast<double>(store.user_tag_mass(target));
  const auto items = store.items_of_user(target);
  const auto masses = store.assignment_tag_masses(target);
  std::vector<double> dense(store.item_count(), 0.0);
  for (std::size_t k = 0; k < items.size(); ++k) {
    dense[items[k].item.index] = static_cast<double>(masses[k]) / mass;
  }
  return ItemVector::from_dense(dense);
}

/// Baseline step 1: unit resource on every collected item.
inline ItemVector initial_vector_uniform(const FolksonomyStore& store, UserId target) {
  detail::require_collector(store, target);
  std::vector<double> dense(store.item_count(), 0.0);
  for (const auto& a : store.items_of_user(target)) dense[a.item.index] = 1.0;
  return ItemVector::from_dense(dense);
}

/// Step 2: every item splits its value evenly among its collectors.
inline UserVector diffuse_to_users(const FolksonomyStore& store, const ItemVector& f) {
  std::vector<double> dense(store.user_count(), 0.0);
  for (const auto& [item, value] : f) {
    if (item.index >= store.item_count() || store.item_degree(item) == 0) {
      throw LookupError("item id " + std::to_string(item.index) + " is not in the store");
    }
    const auto collectors = store.users_of_item(item);
    const double share = value / static_cast<double>(collectors.size());
    for (UserId u : collectors) dense[u.index] += share;
  }
  return UserVector::from_dense(dense);
}

/// Step 3: every user redistributes to their items by tag weight.
inline ItemVector diffuse_to_items_weighted(const FolksonomyStore& store, const UserVector& r) {
  std::vector<double> dense(store.item_count(), 0.0);
  for (const auto& [user, value] : r) {
    if (user.index >= store.user_count()) {
      throw LookupError("user id " + std::to_string(user.index) + " is not in the store");
    }
    const auto mass = static_cast<double>(store.user_tag_mass(user));
    const auto items = store.items_of_user(user);
    const auto masses = store.assignment_tag_masses(user);
    for (std::size_t k = 0; k < items.size(); ++k) {
      dense[items[k].item.index] += value * (static_cast<double>(masses[k]) / mass);
    }
  }
  return ItemVector::from_dense(dense);
}

/// Baseline step 3: every user splits their value evenly among their items.
inline ItemVector diffuse_to_items_uniform(const FolksonomyStore& store, const UserVector& r) {
  std::vector<double> dense(store.item_count(), 0.0);
  for (const auto& [user, value] : r) {
    if (user.index >= store.user_count()) {
      throw LookupError("user id " + std::to_string(user.index) + " is not in the store");
    }
    const auto items = store.items_of_user(user);
    if (items.empty()) {
      throw DegenerateUserError("user '" + store.user_label(user) + "' has no assignments");
    }
    const double share = value / static_cast<double>(items.size());
    for (const auto& a : items) dense[a.item.index] += share;
  }
  return ItemVector::from_dense(dense);
}

inline Diffusion diffuse(const FolksonomyStore& store, UserId target, Algorithm algorithm) {
  Diffusion d;
  if (algorithm == Algorithm::kTagWeighted) {
    d.initial = initial_vector(store, target);
    d.users = diffuse_to_users(store, d.initial);
    d.scores = diffuse_to_items_weighted(store, d.users);
  } else {
    d.initial = initial_vector_uniform(store, target);
    d.users = diffuse_to_users(store, d.initial);
    d.scores = diffuse_to_items_uniform(store, d.users);
  }
  return d;
}

/// Significant bits kept when ranking. Scores that agree to this many bits
/// are ties, so last-ulp differences from summation order cannot reorder
/// items that are equal in exact arithmetic.
inline constexpr int kRankingBits = 40;

/// Monotone rounding of a score to kRankingBits significant bits.
inline double ranking_key(double score) {
  int exponent = 0;
  const double mantissa = std::frexp(score, &exponent);
  return std::ldexp(std::round(std::ldexp(mantissa, kRankingBits)), exponent - kRankingBits);
}

/// Keeps the `length` best positive-score items not in `exclude`. Order is
/// ranking_key descending, then item id ascending; entries keep the raw score.
inline RankedList rank_top_l(const ItemVector& scores, std::span<const ItemId> exclude,
                             std::size_t length) {
  if (length == 0) throw ConfigError("recommendation length must be at least 1");
  std::vector<ItemId> excluded(exclude.begin(), exclude.end());
  std::sort(excluded.begin(), excluded.end());

  struct Candidate {
    double key;
    RankedItem entry;
  };
  std::vector<Candidate> candidates;
  for (const auto& [item, score] : scores) {
    if (score > 0.0 && !std::binary_search(excluded.begin(), excluded.end(), item)) {
      candidates.push_back({ranking_key(score), {item, score}});
    }
  }
  const auto keep = std::min(length, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), [](const Candidate& a, const Candidate& b) {
                      if (a.key != b.key) return a.key > b.key;
                      return a.entry.item < b.entry.item;
                    });

  RankedList out;
  out.entries.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) out.entries.push_back(candidates[k].entry);
  out.requested_length = length;
  return out;
}

inline RankedList recommend(const FolksonomyStore& store, UserId target, std::size_t length,
                            Algorithm algorithm) {
  if (length == 0) throw ConfigError("recommendation length must be at least 1");
  const auto scores = diffuse(store, target, algorithm).scores;
  std::vector<ItemId> collected;
  for (const auto& a : store.items_of_user(target)) collected.push_back(a.item);
  auto list = rank_top_l(scores, collected, length);
  list.target = target;
  return list;
}

inline RankedList recommend_tagweighted(const FolksonomyStore& store, UserId target,
                                        std::size_t length) {
  return recommend(store, target, length, Algorithm::kTagWeighted);
}

inline RankedList recommend_baseline(const FolksonomyStore& store, UserId target,
                                     std::size_t length) {
  return recommend(store, target, length, Algorithm::kBaseline);
}

}  // namespace tagdiff
