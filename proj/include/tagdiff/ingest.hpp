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

// Triple files, dataset filtering and statistics, synthetic folksonomies.
//
// File format: UTF-8, one `<user>\t<item>\t<tag>\n` record per line. Lines
// starting with '#' and blank lines are skipped.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tagdiff/error.hpp"
#include "tagdiff/folksonomy.hpp"
#include "tagdiff/random.hpp"

namespace tagdiff {

struct Diagnostic {
  std::size_t line = 0;
  std::string reason;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseResult {
  std::vector<Triple> triples;
  std::vector<Diagnostic> rejected;
};

/// Parses a triple stream. Bad lines become diagnostics; only a failing
/// stream throws (StreamError).
inline ParseResult parse_triples(std::istream& in) {
  ParseResult out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 3) {
      out.rejected.push_back({number, "expected 3 tab-separated fields"});
      continue;
    }
    if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      out.rejected.push_back({number, "empty field"});
      continue;
    }
    out.triples.push_back(
        {std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), number});
  }
  if (in.bad()) throw StreamError("read error after line " + std::to_string(number));
  return out;
}

inline ParseResult read_triple_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StreamError("cannot open '" + path.string() + "'");
  return parse_triples(in);
}

inline void write_triples(std::ostream& out, std::span<const Triple> triples) {
  for (const auto& t : triples) {
    for (const std::string* field : {&t.user, &t.item, &t.tag}) {
      if (field->empty() || field->find_first_of("\t\n") != std::string::npos) {
        throw RecordError(t.line, "field cannot be written as a triple line: '" + *field + "'");
      }
    }
    out << t.user << '\t' << t.item << '\t' << t.tag << '\n';
  }
  if (!out) throw StreamError("write error");
}

inline void write_triple_file(const std::filesystem::path& path, std::span<const Triple> triples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StreamError("cannot open '" + path.string() + "' for writing");
  write_triples(out, triples);
  out.flush();
  if (!out) throw StreamError("write error on '" + path.string() + "'");
}

struct DatasetStats {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t tags = 0;
  std::size_t relations = 0;        // distinct (user, item)
  std::size_t tag_assignments = 0;  // distinct (user, item, tag)
  std::size_t rejected_lines = 0;
  std::size_t collapsed_duplicates = 0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

namespace detail {

// Triples mapped onto dense label ids, duplicates dropped (first occurrence kept).
struct IndexedTriples {
  std::vector<std::uint32_t> user, item, tag;
  std::vector<std::size_t> source;  // position in the input
  std::size_t users = 0, items = 0, tags = 0;
};

inline IndexedTriples index_triples(std::span<const Triple> triples) {
  IndexedTriples out;
  std::unordered_map<std::string_view, std::uint32_t> users, items, tags;
  auto intern = [](auto& table, std::string_view label) {
    return table.try_emplace(label, static_cast<std::uint32_t>(table.size())).first->second;
  };
  struct KeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint32_t>& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
    }
  };
  std::unordered_set<std::pair<std::uint64_t, std::uint32_t>, KeyHash> seen;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const auto u = intern(users, triples[k].user);
    const auto i = intern(items, triples[k].item);
    const auto t = intern(tags, triples[k].tag);
    if (!seen.emplace((std::uint64_t{u} << 32) | i, t).second) continue;
    out.user.push_back(u);
    out.item.push_back(i);
    out.tag.push_back(t);
    out.source.push_back(k);
  }
  out.users = users.size();
  out.items = items.size();
  out.tags = tags.size();
  return out;
}

}  // namespace detail

/// Table-style counts, computed after duplicate collapse.
inline DatasetStats dataset_stats(std::span<const Triple> triples, std::size_t rejected_lines = 0) {
  const auto idx = detail::index_triples(triples);
  std::unordered_set<std::uint64_t> relations;
  for (std::size_t k = 0; k < idx.user.size(); ++k) {
    relations.insert((std::uint64_t{idx.user[k]} << 32) | idx.item[k]);
  }
  DatasetStats s;
  s.users = idx.users;
  s.items = idx.items;
  s.tags = idx.tags;
  s.relations = relations.size();
  s.tag_assignments = idx.user.size();
  s.rejected_lines = rejected_lines;
  s.collapsed_duplicates = triples.size() - idx.user.size();
  return s;
}

struct FilterResult {
  std::vector<Triple> triples;
  DatasetStats before;
  DatasetStats after;
};

/// Drops records until every user holds at least one item, every item has at
/// least two distinct collectors and every relation carries a tag. Removal is
/// repeated until nothing changes. Duplicates are collapsed on the way.
/// Throws EmptyDatasetError when nothing survives.
inline FilterResult filter_dataset(std::span<const Triple> triples) {
  FilterResult out;
  out.before = dataset_stats(triples);
  const auto idx = detail::index_triples(triples);

  std::vector<bool> alive(idx.user.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    std::unordered_set<std::uint64_t> relations;
    std::vector<std::size_t> collectors(idx.items, 0);
    std::vector<std::size_t> user_items(idx.users, 0);
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (!alive[k]) continue;
      if (relations.insert((std::uint64_t{idx.user[k]} << 32) | idx.item[k]).second) {
        ++collectors[idx.item[k]];
        ++user_items[idx.user[k]];
      }
    }
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (alive[k] && (collectors[idx.item[k]] < 2 || user_items[idx.user[k]] < 1)) {
        alive[k] = false;
        changed = true;
      }
    }
  }

  for (std::size_t k = 0; k < alive.size(); ++k) {
    if (!alive[k]) continue;
    // Every surviving relation has at least this record's tag.
    out.triples.push_back(triples[idx.source[k]]);
  }
  if (out.triples.empty()) throw EmptyDatasetError("no records left after filtering");
  out.after = dataset_stats(out.triples);
  return out;
}

struct SynthSpec {
  std::size_t users = 200;
  std::size_t items = 400;
  std::size_t tags = 40;
  double mean_items_per_user = 20.0;
  double tag_affinity = 0.8;
  std::uint64_t seed = 1;
};

inline void validate(const SynthSpec& spec) {
  if (spec.users < 2) throw ConfigError("synthetic spec needs at least 2 users");
  if (spec.items < 2) throw ConfigError("synthetic spec needs at least 2 items");
  if (spec.tags < 1) throw ConfigError("synthetic spec needs at least 1 tag");
  if (!(spec.mean_items_per_user > 0.0) ||
      spec.mean_items_per_user > static_cast<double>(spec.items)) {
    throw ConfigError("mean_items_per_user must be in (0, items]");
  }
  if (!(spec.tag_affinity >= 0.0 && spec.tag_affinity <= 1.0)) {
    throw ConfigError("tag_affinity must be in [0, 1]");
  }
}

/// Synthetic folksonomy in which tag usage can predict a user's items.
///
/// Every item is associated with up to three "home" tags. Every user prefers
/// up to three tags with weights 0.6 / 0.3 / 0.1. Each collection step picks,
/// with probability tag_affinity, a preferred tag and then an item from that
/// tag's pool, tagging it with that tag; otherwise an item uniformly at random,
/// tagged with one of its home tags. A quarter of the assignments get a second
/// home tag. Items left with fewer than two collectors are handed to extra
/// random users, so the output already satisfies filter_dataset.
inline std::vector<Triple> generate_synthetic(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);

  const std::size_t home_count = std::min<std::size_t>(3, spec.tags);
  std::vector<std::vector<std::uint32_t>> home(spec.items);
  std::vector<std::vector<std::uint32_t>> pool(spec.tags);
  for (std::size_t j = 0; j < spec.items; ++j) {
    while (home[j].size() < home_count) {
      const auto t = static_cast<std::uint32_t>(rng.index(spec.tags));
      if (std::find(home[j].begin(), home[j].end(), t) == home[j].end()) home[j].push_back(t);
    }
    for (auto t : home[j]) pool[t].push_back(static_cast<std::uint32_t>(j));
  }

  struct Held {
    std::uint32_t item;
    std::vector<std::uint32_t> tags;
  };
  std::vector<std::vector<Held>> held(spec.users);
  std::vector<std::vector<bool>> has(spec.users, std::vector<bool>(spec.items, false));

  auto add = [&](std::size_t u, std::uint32_t j, std::uint32_t t) {
    Held h{j, {t}};
    if (home[j].size() > 1 && rng.bernoulli(0.25)) {
      const auto extra = home[j][rng.index(home[j].size())];
      if (extra != t) h.tags.push_back(extra);
    }
    held[u].push_back(std::move(h));
    has[u][j] = true;
  };

  const std::vector<double> preference_weights = {0.6, 0.3, 0.1};
  for (std::size_t u = 0; u < spec.users; ++u) {
    std::vector<std::uint32_t> favourites;
    while (favourites.size() < home_count) {
      const auto t = static_cast<std::uint32_t>(rng.index(spec.tags));
      if (std::find(favourites.begin(), favourites.end(), t) == favourites.end()) {
        favourites.push_back(t);
      }
    }
    const std::vector<double> weights(preference_weights.begin(),
                                      preference_weights.begin() +
                                          static_cast<std::ptrdiff_t>(favourites.size()));

    const double draw = std::round(spec.mean_items_per_user * (0.5 + rng.real()));
    const auto target = static_cast<std::size_t>(
        std::clamp(draw, 1.0, static_cast<double>(spec.items)));
    for (std::size_t n = 0; n < target; ++n) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::uint32_t j;
        std::uint32_t t;
        const bool from_pool = rng.bernoulli(spec.tag_affinity);
        if (from_pool) {
          t = favourites[rng.weighted(weights)];
          if (pool[t].empty()) continue;
          j = pool[t][rng.index(pool[t].size())];
        } else {
          j = static_cast<std::uint32_t>(rng.index(spec.items));
          t = home[j][rng.index(home[j].size())];
        }
        if (has[u][j]) continue;
        add(u, j, t);
        break;
      }
    }
  }

  std::vector<std::size_t> collectors(spec.items, 0);
  for (const auto& list : held) {
    for (const auto& h : list) ++collectors[h.item];
  }
  for (std::size_t j = 0; j < spec.items; ++j) {
    while (collectors[j] < 2) {
      const auto u = rng.index(spec.users);
      if (has[u][j]) continue;
      add(u, static_cast<std::uint32_t>(j), home[j][rng.index(home[j].size())]);
      ++collectors[j];
    }
  }

  std::vector<Triple> out;
  for (std::size_t u = 0; u < spec.users; ++u) {
    for (const auto& h : held[u]) {
      for (auto t : h.tags) {
        out.push_back({"user" + std::to_string(u), "item" + std::to_string(h.item),
                       "tag" + std::to_string(t)});
      }
    }
  }
  return out;
}

}  // namespace tagdiff
