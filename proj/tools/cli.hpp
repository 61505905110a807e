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

// `tagdiff` command line: stats, evaluate, recommend, synth.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 empty after filtering,
// 4 unknown user, 5 cold-start user.

#pragma once

#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tagdiff/tagdiff.hpp"

namespace tagdiff::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kEmptyAfterFilter = 3,
  kUnknownUser = 4,
  kColdStart = 5,
};

struct RunConfig {
  std::string data;
  std::string algorithm = "both";
  double train_fraction = 0.95;
  std::size_t runs = 10;
  std::size_t l_min = 10;
  std::size_t l_max = 100;
  std::size_t l_step = 10;
  std::uint64_t seed = 42;
  std::string output;  // empty: standard output
};

struct RecommendConfig {
  std::string data;
  std::string user;
  std::string algorithm = "tagweighted";
  std::size_t length = 10;
  bool no_filter = false;
};

struct SynthConfig {
  SynthSpec spec;
  std::string output;
};

inline ParseResult load(const std::string& path, std::ostream& err) {
  auto parsed = read_triple_file(path);
  for (const auto& d : parsed.rejected) {
    err << path << ":" << d.line << ": " << d.reason << '\n';
  }
  return parsed;
}

inline int cmd_stats(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto parsed = load(path, err);
  const auto s = dataset_stats(parsed.triples, parsed.rejected.size());
  out << "users: " << s.users << '\n'
      << "items: " << s.items << '\n'
      << "tags: " << s.tags << '\n'
      << "relations: " << s.relations << '\n'
      << "tag_assignments: " << s.tag_assignments << '\n'
      << "rejected_lines: " << s.rejected_lines << '\n'
      << "collapsed_duplicates: " << s.collapsed_duplicates << '\n';
  return kOk;
}

inline int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  EvalConfig eval;
  eval.train_fraction = config.train_fraction;
  eval.runs = config.runs;
  eval.seed = config.seed;
  eval.lengths = make_lengths(config.l_min, config.l_max, config.l_step);
  if (config.algorithm == "both") {
    eval.algorithms = {Algorithm::kTagWeighted, Algorithm::kBaseline};
  } else {
    eval.algorithms = {parse_algorithm(config.algorithm)};
  }

  const auto parsed = load(config.data, err);
  const auto filtered = filter_dataset(parsed.triples);
  const auto store = build_store(filtered.triples);
  const auto report = evaluate(store, eval);
  for (const auto& r : report.runs) {
    if (!r.ok) err << "run " << r.run_index << " skipped: " << r.error << '\n';
  }

  if (config.output.empty()) {
    write_csv(out, report);
  } else {
    std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
    if (!file) throw StreamError("cannot open '" + config.output + "' for writing");
    write_csv(file, report);
  }
  return kOk;
}

inline int cmd_recommend(const RecommendConfig& config, std::ostream& out, std::ostream& err) {
  const Algorithm algorithm = parse_algorithm(config.algorithm);
  auto parsed = load(config.data, err);
  const auto triples = config.no_filter ? std::move(parsed.triples)
                                        : filter_dataset(parsed.triples).triples;
  const auto store = build_store(triples);
  const auto user = store.find_user(config.user);
  if (!user) {
    err << "unknown user '" << config.user << "'\n";
    return kUnknownUser;
  }
  const auto list = recommend(store, *user, config.length, algorithm);

  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << std::fixed << std::setprecision(6);
  for (std::size_t rank = 0; rank < list.entries.size(); ++rank) {
    buf << rank + 1 << '\t' << store.item_label(list.entries[rank].item) << '\t'
        << list.entries[rank].score << '\n';
  }
  out << buf.str();
  return kOk;
}

inline int cmd_synth(const SynthConfig& config, std::ostream& out) {
  const auto triples = generate_synthetic(config.spec);
  if (config.output.empty()) {
    write_triples(out, triples);
  } else {
    write_triple_file(config.output, triples);
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tag-weighted mass diffusion recommender", "tagdiff"};
  app.require_subcommand(1);

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "Print dataset statistics");
  stats->add_option("file", stats_path, "Triple file")->required();

  RunConfig run_config;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the split/recommend/score protocol");
  evaluate_cmd->add_option("-d,--data", run_config.data, "Triple file")->required();
  evaluate_cmd->add_option("-a,--algorithm", run_config.algorithm, "tagweighted | baseline | both")
      ->check(CLI::IsMember({"tagweighted", "baseline", "both"}));
  evaluate_cmd->add_option("--train-fraction", run_config.train_fraction, "Training share")
      ->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_option("--runs", run_config.runs, "Independent splits")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--l-min", run_config.l_min, "Shortest list")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--l-max", run_config.l_max, "Longest list")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--l-step", run_config.l_step, "List length step")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--seed", run_config.seed, "Base seed");
  evaluate_cmd->add_option("-o,--output", run_config.output, "CSV path (default: stdout)");

  RecommendConfig rec_config;
  auto* recommend_cmd = app.add_subcommand("recommend", "Top-L list for one user");
  recommend_cmd->add_option("-d,--data", rec_config.data, "Triple file")->required();
  recommend_cmd->add_option("-u,--user", rec_config.user, "User label")->required();
  recommend_cmd->add_option("-a,--algorithm", rec_config.algorithm, "tagweighted | baseline")
      ->check(CLI::IsMember({"tagweighted", "baseline"}));
  recommend_cmd->add_option("-L,--length", rec_config.length, "List length")->check(CLI::PositiveNumber);
  recommend_cmd->add_flag("--no-filter", rec_config.no_filter, "Skip dataset filtering");

  SynthConfig synth_config;
  auto* synth = app.add_subcommand("synth", "Write a synthetic triple file");
  synth->add_option("--users", synth_config.spec.users, "Number of users");
  synth->add_option("--items", synth_config.spec.items, "Number of items");
  synth->add_option("--tags", synth_config.spec.tags, "Number of tags");
  synth->add_option("--mean-items", synth_config.spec.mean_items_per_user, "Mean items per user");
  synth->add_option("--tag-affinity", synth_config.spec.tag_affinity, "Tag/item coupling in [0,1]");
  synth->add_option("--seed", synth_config.spec.seed, "Seed");
  synth->add_option("-o,--output", synth_config.output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*stats) return cmd_stats(stats_path, out, err);
    if (*evaluate_cmd) return cmd_evaluate(run_config, out, err);
    if (*recommend_cmd) return cmd_recommend(rec_config, out, err);
    if (*synth) return cmd_synth(synth_config, out);
  } catch (const StreamError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const EmptyDatasetError& e) {
    err << "error: " << e.what() << '\n';
    return kEmptyAfterFilter;
  } catch (const EmptyEvaluationError& e) {
    err << "error: " << e.what() << '\n';
    return kEmptyAfterFilter;
  } catch (const ColdStartError& e) {
    err << "error: " << e.what() << '\n';
    return kColdStart;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace tagdiff::cli
