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

// Offline evaluation: random train/test splits of user-item relations,
// top-L recommendation for every eligible user, Precision / Recall / F1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <locale>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagdiff/diffusion.hpp"
#include "tagdiff/error.hpp"
#include "tagdiff/folksonomy.hpp"
#include "tagdiff/random.hpp"

namespace tagdiff {

struct SplitSpec {
  double train_fraction = 0.95;
  std::uint64_t seed = 42;
  std::uint64_t run_index = 0;

  std::uint64_t effective_seed() const noexcept { return seed + run_index; }
};

struct SplitResult {
  std::vector<Assignment> train;
  std::vector<Assignment> test;
};

/// Number of training relations: round-half-up of fraction * total.
inline std::size_t train_size(std::size_t total, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total) + 0.5));
}

/// Uniform split without replacement. Both halves keep the input order, and
/// each assignment moves with its full tag set.
inline SplitResult split(std::span<const Assignment> assignments, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("train fraction must be in (0, 1)");
  }
  if (assignments.size() < 2) throw ConfigError("need at least 2 assignments to split");

  std::vector<std::size_t> order(assignments.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.effective_seed());
  rng.shuffle(order);

  std::vector<bool> in_train(assignments.size(), false);
  const auto n_train = train_size(assignments.size(), spec.train_fraction);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;

  SplitResult out;
  out.train.reserve(n_train);
  out.test.reserve(assignments.size() - n_train);
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    (in_train[k] ? out.train : out.test).push_back(assignments[k]);
  }
  return out;
}

/// Total hits over n * L.
inline double precision(std::span<const std::size_t> hits, std::size_t n, std::size_t length) {
  if (n == 0) throw EmptyEvaluationError("precision over zero users");
  if (length == 0) throw ConfigError("recommendation length must be at least 1");
  const auto total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(length));
}

/// Total hits over total held-out items.
inline double recall(std::span<const std::size_t> hits, std::span<const std::size_t> test_counts) {
  if (hits.size() != test_counts.size()) {
    throw std::invalid_argument("hit and test count vectors differ in length");
  }
  const auto pool = std::accumulate(test_counts.begin(), test_counts.end(), std::size_t{0});
  if (pool == 0) throw EmptyEvaluationError("recall over an empty test pool");
  const auto total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return static_cast<double>(total) / static_cast<double>(pool);
}

/// Harmonic mean; 0 when both inputs are 0.
inline double f1(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

inline std::vector<std::size_t> make_lengths(std::size_t first, std::size_t last, std::size_t step) {
  if (first == 0 || step == 0 || last < first) {
    throw ConfigError("length sweep needs 1 <= min <= max and step >= 1");
  }
  std::vector<std::size_t> out;
  for (auto l = first; l <= last; l += step) out.push_back(l);
  return out;
}

struct EvalConfig {
  double train_fraction = 0.95;
  std::size_t runs = 10;
  std::uint64_t seed = 42;
  std::vector<std::size_t> lengths = make_lengths(10, 100, 10);
  std::vector<Algorithm> algorithms = {Algorithm::kTagWeighted, Algorithm::kBaseline};
};

/// One (algorithm, L) cell of a single run. Integer counts are kept so the
/// metric identities can be checked exactly.
struct RunMetrics {
  Algorithm algorithm = Algorithm::kTagWeighted;
  std::size_t length = 0;
  std::size_t users = 0;       // n
  std::size_t hits = 0;        // sum of N_r
  std::size_t test_items = 0;  // sum of N_p
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RunRecord {
  std::uint64_t run_index = 0;
  bool ok = false;
  std::string error;
  std::size_t eligible_users = 0;
  std::vector<RunMetrics> metrics;

  const RunMetrics& at(Algorithm a, std::size_t length) const {
    for (const auto& m : metrics) {
      if (m.algorithm == a && m.length == length) return m;
    }
    throw LookupError("no metrics for that algorithm and length");
  }
};

/// Run-averaged metrics. `f1` is the mean of per-run F1; `f1_of_means` is F1
/// of the averaged precision and recall, kept for comparison.
struct EvalRow {
  Algorithm algorithm = Algorithm::kTagWeighted;
  std::size_t length = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double f1_of_means = 0.0;
  std::size_t runs = 0;
  double eligible_users_mean = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<RunRecord> runs;

  const EvalRow& row(Algorithm a, std::size_t length) const {
    for (const auto& r : rows) {
      if (r.algorithm == a && r.length == length) return r;
    }
    throw LookupError("no row for that algorithm and length");
  }
};

/// Evaluates one fixed split. Users count as eligible when they have at least
/// one training and one test relation. A run without eligible users comes back
/// with ok == false.
inline RunRecord evaluate_run(const FolksonomyStore& dataset, const SplitResult& parts,
                              std::span<const Algorithm> algorithms,
                              std::span<const std::size_t> lengths, std::uint64_t run_index = 0) {
  if (lengths.empty()) throw ConfigError("no recommendation lengths given");
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    if (lengths[k] == 0 || (k > 0 && lengths[k] <= lengths[k - 1])) {
      throw ConfigError("lengths must be positive and strictly ascending");
    }
  }
  const std::size_t max_length = lengths.back();

  RunRecord record;
  record.run_index = run_index;

  const auto train = FolksonomyStore::from_assignments(dataset.symbols(), parts.train);
  std::vector<std::vector<ItemId>> test_items(train.user_count());
  for (const auto& a : parts.test) {
    if (a.user.index >= train.user_count()) throw LookupError("test relation with unknown user");
    test_items[a.user.index].push_back(a.item);
  }
  for (auto& items : test_items) std::sort(items.begin(), items.end());

  std::vector<UserId> eligible;
  std::vector<std::size_t> test_counts;
  for (std::uint32_t u = 0; u < train.user_count(); ++u) {
    if (train.user_degree(UserId{u}) > 0 && !test_items[u].empty()) {
      eligible.push_back(UserId{u});
      test_counts.push_back(test_items[u].size());
    }
  }
  record.eligible_users = eligible.size();
  if (eligible.empty()) {
    record.error = "no eligible users";
    return record;
  }
  const auto pool = std::accumulate(test_counts.begin(), test_counts.end(), std::size_t{0});

  for (Algorithm algorithm : algorithms) {
    // hits[l][u]: hits of user u within the top lengths[l].
    std::vector<std::vector<std::size_t>> hits(lengths.size(),
                                               std::vector<std::size_t>(eligible.size(), 0));
    for (std::size_t e = 0; e < eligible.size(); ++e) {
      const UserId u = eligible[e];
      const auto list = recommend(train, u, max_length, algorithm);
      const auto collected = train.items_of_user(u);
      std::size_t found = 0;
      std::size_t next = 0;
      for (std::size_t rank = 0; rank < list.entries.size(); ++rank) {
        const ItemId item = list.entries[rank].item;
        if (std::any_of(collected.begin(), collected.end(),
                        [&](const Assignment& a) { return a.item == item; })) {
          throw std::logic_error("recommended an item from the training collection");
        }
        while (next < lengths.size() && rank >= lengths[next]) hits[next++][e] = found;
        if (std::binary_search(test_items[u.index].begin(), test_items[u.index].end(), item)) {
          ++found;
        }
      }
      while (next < lengths.size()) hits[next++][e] = found;
    }

    for (std::size_t l = 0; l < lengths.size(); ++l) {
      RunMetrics m;
      m.algorithm = algorithm;
      m.length = lengths[l];
      m.users = eligible.size();
      m.hits = std::accumulate(hits[l].begin(), hits[l].end(), std::size_t{0});
      m.test_items = pool;
      m.precision = precision(hits[l], eligible.size(), lengths[l]);
      m.recall = recall(hits[l], test_counts);
      m.f1 = f1(m.precision, m.recall);
      record.metrics.push_back(m);
    }
  }
  record.ok = true;
  return record;
}

/// Repeats split + evaluate_run for every run and averages each metric over
/// the runs that produced a result. Every algorithm sees the same splits.
inline EvalReport evaluate(const FolksonomyStore& dataset, const EvalConfig& config) {
  if (config.runs == 0) throw ConfigError("runs must be at least 1");
  if (config.algorithms.empty()) throw ConfigError("no algorithms selected");

  EvalReport report;
  for (std::size_t run = 0; run < config.runs; ++run) {
    const auto parts = split(dataset.assignments(), {config.train_fraction, config.seed, run});
    report.runs.push_back(evaluate_run(dataset, parts, config.algorithms, config.lengths, run));
  }

  std::size_t ok_runs = 0;
  double eligible_sum = 0.0;
  for (const auto& r : report.runs) {
    if (!r.ok) continue;
    ++ok_runs;
    eligible_sum += static_cast<double>(r.eligible_users);
  }
  if (ok_runs == 0) throw EmptyEvaluationError("no run had eligible users");

  for (Algorithm algorithm : config.algorithms) {
    for (std::size_t length : config.lengths) {
      EvalRow row;
      row.algorithm = algorithm;
      row.length = length;
      row.runs = ok_runs;
      row.eligible_users_mean = eligible_sum / static_cast<double>(ok_runs);
      for (const auto& r : report.runs) {
        if (!r.ok) continue;
        const auto& m = r.at(algorithm, length);
        row.precision += m.precision;
        row.recall += m.recall;
        row.f1 += m.f1;
      }
      row.precision /= static_cast<double>(ok_runs);
      row.recall /= static_cast<double>(ok_runs);
      row.f1 /= static_cast<double>(ok_runs);
      row.f1_of_means = f1(row.precision, row.recall);
      report.rows.push_back(row);
    }
  }
  return report;
}

/// CSV with header `algorithm,L,precision,recall,f1,runs`, 6 decimals, '.' separator.
inline void write_csv(std::ostream& out, const EvalReport& report) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << "algorithm,L,precision,recall,f1,runs\n" << std::fixed << std::setprecision(6);
  for (const auto& r : report.rows) {
    buf << to_string(r.algorithm) << ',' << r.length << ',' << r.precision << ',' << r.recall << ','
        << r.f1 << ',' << r.runs << '\n';
  }
  out << buf.str();
  if (!out) throw StreamError("write error");
}

}  // namespace tagdiff
