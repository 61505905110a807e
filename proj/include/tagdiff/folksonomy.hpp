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

// Immutable user-item-tag store. Every quantity the diffusion reads (degrees,
// per-user tag frequencies, per-assignment and per-user tag mass) is
// precomputed at build time and exposed through constant-time lookups.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tagdiff/error.hpp"

namespace tagdiff {

/// Dense index of one entity class. `Kind` only separates the types.
template <typename Kind>
struct Id {
  std::uint32_t index = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t i) : index(i) {}

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

struct UserKind;
struct ItemKind;
struct TagKind;

using UserId = Id<UserKind>;
using ItemId = Id<ItemKind>;
using TagId = Id<TagKind>;

/// One raw (user, item, tag) record. `line` is the 1-based source line, or 0
/// when the record was not read from a file; it does not take part in equality.
struct Triple {
  std::string user;
  std::string item;
  std::string tag;
  std::size_t line = 0;

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.user == b.user && a.item == b.item && a.tag == b.tag;
  }
};

/// One user-item relation with the (sorted, non-empty) set of tags the user put on it.
struct Assignment {
  UserId user;
  ItemId item;
  std::vector<TagId> tags;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Label <-> dense index map, ids handed out in first-seen order.
class SymbolTable {
 public:
  std::uint32_t intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<std::uint32_t> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Symbols {
  SymbolTable users;
  SymbolTable items;
  SymbolTable tags;
};

class FolksonomyStore {
 public:
  /// Builds a store over an existing id space. Training stores use this so that
  /// ids stay comparable with the full dataset; entities without assignments
  /// simply have degree 0.
  static FolksonomyStore from_assignments(std::shared_ptr<const Symbols> symbols,
                                          std::vector<Assignment> assignments);

  std::size_t user_count() const noexcept { return symbols_->users.size(); }
  std::size_t item_count() const noexcept { return symbols_->items.size(); }
  std::size_t tag_count() const noexcept { return symbols_->tags.size(); }
  std::size_t assignment_count() const noexcept { return assignments_.size(); }

  /// All assignments, grouped by ascending user id.
  std::span<const Assignment> assignments() const noexcept { return assignments_; }

  std::span<const Assignment> items_of_user(UserId u) const {
    check(u);
    return std::span<const Assignment>(assignments_)
        .subspan(user_offsets_[u.index], user_offsets_[u.index + 1] - user_offsets_[u.index]);
  }

  /// Collectors of `j`, ascending.
  std::span<const UserId> users_of_item(ItemId j) const {
    check(j);
    return std::span<const UserId>(item_users_)
        .subspan(item_offsets_[j.index], item_offsets_[j.index + 1] - item_offsets_[j.index]);
  }

  std::size_t user_degree(UserId u) const {
    check(u);
    return user_offsets_[u.index + 1] - user_offsets_[u.index];
  }

  std::size_t item_degree(ItemId j) const {
    check(j);
    return item_offsets_[j.index + 1] - item_offsets_[j.index];
  }

  /// Number of distinct items `u` has tagged with `t`.
  std::uint32_t tag_frequency(UserId u, TagId t) const {
    check(u);
    check(t);
    const auto begin = user_tags_.begin() + static_cast<std::ptrdiff_t>(user_tag_offsets_[u.index]);
    const auto end = user_tags_.begin() + static_cast<std::ptrdiff_t>(user_tag_offsets_[u.index + 1]);
    auto it = std::lower_bound(begin, end, t,
                               [](const auto& entry, TagId key) { return entry.first < key; });
    return (it != end && it->first == t) ? it->second : 0;
  }

  /// Sum over the user's assignments of the tag frequencies of their tags.
  std::uint64_t user_tag_mass(UserId u) const {
    check(u);
    if (user_mass_[u.index] == 0) {
      throw DegenerateUserError("user '" + user_label(u) + "' has no assignments");
    }
    return user_mass_[u.index];
  }

  /// Per-assignment tag mass, aligned with items_of_user(u).
  std::span<const std::uint64_t> assignment_tag_masses(UserId u) const {
    check(u);
    return std::span<const std::uint64_t>(assignment_mass_)
        .subspan(user_offsets_[u.index], user_offsets_[u.index + 1] - user_offsets_[u.index]);
  }

  const std::string& user_label(UserId u) const { check(u); return symbols_->users.label(u.index); }
  const std::string& item_label(ItemId j) const { check(j); return symbols_->items.label(j.index); }
  const std::string& tag_label(TagId t) const { check(t); return symbols_->tags.label(t.index); }

  std::optional<UserId> find_user(std::string_view label) const {
    if (auto i = symbols_->users.find(label)) return UserId{*i};
    return std::nullopt;
  }
  std::optional<ItemId> find_item(std::string_view label) const {
    if (auto i = symbols_->items.find(label)) return ItemId{*i};
    return std::nullopt;
  }
  std::optional<TagId> find_tag(std::string_view label) const {
    if (auto i = symbols_->tags.find(label)) return TagId{*i};
    return std::nullopt;
  }

  const std::shared_ptr<const Symbols>& symbols() const noexcept { return symbols_; }

  /// Every stored (user, item, tag) as labelled triples, in assignment order.
  std::vector<Triple> dump() const {
    std::vector<Triple> out;
    for (const auto& a : assignments_) {
      for (TagId t : a.tags) {
        out.push_back({user_label(a.user), item_label(a.item), tag_label(t)});
      }
    }
    return out;
  }

 private:
  FolksonomyStore() = default;

  void check(UserId u) const {
    if (u.index >= user_count()) throw LookupError("unknown user id " + std::to_string(u.index));
  }
  void check(ItemId j) const {
    if (j.index >= item_count()) throw LookupError("unknown item id " + std::to_string(j.index));
  }
  void check(TagId t) const {
    if (t.index >= tag_count()) throw LookupError("unknown tag id " + std::to_string(t.index));
  }

  std::shared_ptr<const Symbols> symbols_;
  std::vector<Assignment> assignments_;
  std::vector<std::uint64_t> assignment_mass_;
  std::vector<std::size_t> user_offsets_;
  std::vector<std::size_t> item_offsets_;
  std::vector<UserId> item_users_;
  std::vector<std::size_t> user_tag_offsets_;
  std::vector<std::pair<TagId, std::uint32_t>> user_tags_;
  std::vector<std::uint64_t> user_mass_;
};

inline FolksonomyStore FolksonomyStore::from_assignments(std::shared_ptr<const Symbols> symbols,
                                                         std::vector<Assignment> assignments) {
  if (!symbols) symbols = std::make_shared<const Symbols>();
  const std::size_t n_users = symbols->users.size();
  const std::size_t n_items = symbols->items.size();
  const std::size_t n_tags = symbols->tags.size();

  for (auto& a : assignments) {
    if (a.user.index >= n_users) throw LookupError("assignment references unknown user id");
    if (a.item.index >= n_items) throw LookupError("assignment references unknown item id");
    if (a.tags.empty()) throw ConfigError("assignment without tags");
    std::sort(a.tags.begin(), a.tags.end());
    a.tags.erase(std::unique(a.tags.begin(), a.tags.end()), a.tags.end());
    if (a.tags.back().index >= n_tags) throw LookupError("assignment references unknown tag id");
  }
  std::stable_sort(assignments.begin(), assignments.end(),
                   [](const Assignment& x, const Assignment& y) { return x.user < y.user; });

  FolksonomyStore s;
  s.symbols_ = std::move(symbols);
  s.assignments_ = std::move(assignments);

  s.user_offsets_.assign(n_users + 1, 0);
  s.item_offsets_.assign(n_items + 1, 0);
  for (const auto& a : s.assignments_) {
    ++s.user_offsets_[a.user.index + 1];
    ++s.item_offsets_[a.item.index + 1];
  }
  for (std::size_t i = 0; i < n_users; ++i) s.user_offsets_[i + 1] += s.user_offsets_[i];
  for (std::size_t j = 0; j < n_items; ++j) s.item_offsets_[j + 1] += s.item_offsets_[j];

  // Assignments are grouped by ascending user, so filling in order leaves
  // every collector list sorted.
  s.item_users_.resize(s.assignments_.size());
  std::vector<std::size_t> cursor(s.item_offsets_.begin(), s.item_offsets_.end() - 1);
  for (const auto& a : s.assignments_) {
    const auto slot = cursor[a.item.index]++;
    if (slot > s.item_offsets_[a.item.index] && s.item_users_[slot - 1] == a.user) {
      throw ConfigError("duplicate assignment for user '" + s.symbols_->users.label(a.user.index) +
                        "' and item '" + s.symbols_->items.label(a.item.index) + "'");
    }
    s.item_users_[slot] = a.user;
  }

  s.user_tag_offsets_.assign(n_users + 1, 0);
  s.user_mass_.assign(n_users, 0);
  s.assignment_mass_.assign(s.assignments_.size(), 0);
  std::vector<std::uint32_t> freq(n_tags, 0);
  std::vector<TagId> touched;
  for (std::size_t u = 0; u < n_users; ++u) {
    const auto begin = s.user_offsets_[u];
    const auto end = s.user_offsets_[u + 1];
    for (auto k = begin; k < end; ++k) {
      for (TagId t : s.assignments_[k].tags) {
        if (freq[t.index]++ == 0) touched.push_back(t);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (TagId t : touched) s.user_tags_.emplace_back(t, freq[t.index]);
    s.user_tag_offsets_[u + 1] = s.user_tags_.size();

    std::uint64_t mass = 0;
    for (auto k = begin; k < end; ++k) {
      std::uint64_t m = 0;
      for (TagId t : s.assignments_[k].tags) m += freq[t.index];
      s.assignment_mass_[k] = m;
      mass += m;
    }
    s.user_mass_[u] = mass;

    for (TagId t : touched) freq[t.index] = 0;
    touched.clear();
  }
  return s;
}

/// Builds a store from raw triples. Labels get ids in first-seen order and
/// duplicate triples collapse. Throws RecordError for a triple with an empty field.
inline FolksonomyStore build_store(std::span<const Triple> triples) {
  auto symbols = std::make_shared<Symbols>();
  std::vector<Assignment> assignments;
  std::unordered_map<std::uint64_t, std::size_t> pair_index;

  for (const auto& tr : triples) {
    if (tr.user.empty() || tr.item.empty() || tr.tag.empty()) {
      throw RecordError(tr.line, "empty field in triple");
    }
    const UserId u{symbols->users.intern(tr.user)};
    const ItemId j{symbols->items.intern(tr.item)};
    const TagId t{symbols->tags.intern(tr.tag)};
    const std::uint64_t key = (std::uint64_t{u.index} << 32) | j.index;
    auto [it, inserted] = pair_index.try_emplace(key, assignments.size());
    if (inserted) assignments.push_back({u, j, {}});
    assignments[it->second].tags.push_back(t);
  }
  return FolksonomyStore::from_assignments(std::move(symbols), std::move(assignments));
}

}  // namespace tagdiff

template <typename Kind>
struct std::hash<tagdiff::Id<Kind>> {
  std::size_t operator()(const tagdiff::Id<Kind>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.index);
  }
};
