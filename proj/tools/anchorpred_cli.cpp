// Copyright 2026 The Anchorpred Authors.
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

// Command-line front end: build, rank, evaluate, compare, stats,
// sample-lists, kappa. Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anchorpred/anchorpred.hpp"

namespace ap = anchorpred;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ap::DataError("cannot write '" + path + "'");
  return out;
}

void write_json(const std::string &path, const nlohmann::ordered_json &j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::optional<ap::Split> split_option(const std::string &s) {
  if (s == "all") return std::nullopt;
  return ap::parse_split(s);
}

std::size_t token_limit(std::size_t v) { return v == 0 ? ap::kUnlimited : v; }

std::string url_for(const std::string &base, const ap::Article &target,
                    const ap::CandidateAnchor &cand) {
  std::string id = target.id;
  for (char &c : id) {
    if (c == ' ') c = '_';
  }
  return base + ap::percent_encode(id) + ap::make_fragment(target, cand).encoded;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Anchor prediction toolkit: dataset construction, ranking baselines, "
               "evaluation and text-fragment URLs."};
  app.set_config("--config", "", "TOML-style config file; command-line flags take precedence");
  app.require_subcommand(1);

  // build
  auto *build = app.add_subcommand("build", "Build an anchor dataset from a corpus");
  std::string build_corpus, build_out, build_report, build_name;
  build->add_option("--corpus", build_corpus, "Corpus JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--out", build_out, "Dataset JSON Lines output")->required();
  build->add_option("--report", build_report, "Funnel report JSON (default: <out>.report.json)");

  // rank
  auto *rank = app.add_subcommand("rank", "Predict an anchor for every example");
  std::string rank_corpus, rank_dataset, rank_out, rank_split = "all", ranker_name;
  std::string train_dataset, url_base = "https://en.wikipedia.org/wiki/";
  ap::RankerConfig cfg;
  std::size_t lead_tokens = 64, candidate_tokens = 256, title_tokens = 0;
  bool emit_urls = false;
  rank->add_option("--corpus", rank_corpus, "Corpus JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--dataset", rank_dataset, "Dataset JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  rank->add_option("--ranker", ranker_name, "Ranker name")
      ->required()
      ->check(CLI::IsMember(ap::available_rankers()));
  rank->add_option("--split", rank_split, "train|dev|test|eval_only|all")->capture_default_str();
  rank->add_option("--out", rank_out, "Predictions JSON Lines output")->required();
  rank->add_option("--k1", cfg.bm25.k1, "BM25 k1")->capture_default_str();
  rank->add_option("--b", cfg.bm25.b, "BM25 b")->capture_default_str();
  rank->add_option("--window", cfg.window_tokens, "Context tokens per side of the link")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  rank->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  rank->add_option("--scorer", cfg.scorer.endpoint,
                   "External scorer: shell command or tcp://host:port");
  rank->add_option("--timeout-ms", cfg.scorer.timeout_ms, "External scorer idle timeout")
      ->capture_default_str();
  rank->add_option("--train-dataset", train_dataset,
                   "Dataset whose train split feeds the majority baseline (default: --dataset)")
      ->check(CLI::ExistingFile);
  rank->add_option("--lead-tokens", lead_tokens, "Lead excerpt tokens in queries (0 = all)")
      ->capture_default_str();
  rank->add_option("--candidate-tokens", candidate_tokens, "Candidate tokens in queries (0 = all)")
      ->capture_default_str();
  rank->add_option("--title-tokens", title_tokens, "Title tokens in queries (0 = all)")
      ->capture_default_str();
  rank->add_flag("--emit-urls", emit_urls, "Attach a text-fragment URL to each prediction");
  rank->add_option("--url-base", url_base, "Prefix for emitted URLs")->capture_default_str();

  // evaluate
  auto *eval = app.add_subcommand("evaluate", "Score predictions against a dataset");
  std::string eval_dataset, eval_preds, eval_out, eval_split = "all", eval_ranker, eval_name;
  eval->add_option("--dataset", eval_dataset, "Dataset JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--predictions", eval_preds, "Predictions JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--split", eval_split, "train|dev|test|eval_only|all")->capture_default_str();
  eval->add_option("--ranker-name", eval_ranker, "Ranker label for the report");
  eval->add_option("--name", eval_name, "Dataset label for the report (default: file name)");
  eval->add_option("--out", eval_out, "EvalReport JSON output");

  // compare
  auto *cmp = app.add_subcommand("compare", "Tabulate accuracy of several reports");
  std::vector<std::string> cmp_reports;
  std::string cmp_out;
  cmp->add_option("reports", cmp_reports, "EvalReport JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--out", cmp_out, "TSV output");

  // stats
  auto *stats = app.add_subcommand("stats", "Dataset statistics");
  std::string stats_dataset, stats_corpus, stats_out, stats_split = "all";
  stats->add_option("--dataset", stats_dataset, "Dataset JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--corpus", stats_corpus, "Corpus JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--split", stats_split, "train|dev|test|eval_only|all")->capture_default_str();
  stats->add_option("--out", stats_out, "StatsReport JSON output");

  // sample-lists
  auto *lists = app.add_subcommand("sample-lists", "Export listwise training lists");
  std::string lists_dataset, lists_corpus, lists_out, lists_split = "train";
  std::size_t list_size = 36;
  std::uint64_t lists_seed = 0;
  lists->add_option("--dataset", lists_dataset, "Dataset JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  lists->add_option("--corpus", lists_corpus, "Corpus JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  lists->add_option("--m", list_size, "List size")->capture_default_str()->check(CLI::Range(2, 1 << 20));
  lists->add_option("--seed", lists_seed, "Random seed")->capture_default_str();
  lists->add_option("--split", lists_split, "train|dev|test|eval_only|all")->capture_default_str();
  lists->add_option("--out", lists_out, "Training lists JSON Lines output")->required();

  // kappa
  auto *kappa = app.add_subcommand("kappa", "Annotator agreement on a reader-annotation file");
  std::string kappa_in, kappa_out;
  kappa->add_option("--annotations", kappa_in, "Annotation JSON Lines file")
      ->required()
      ->check(CLI::ExistingFile);
  kappa->add_option("--out", kappa_out, "Agreement JSON output");

  // Config files may hold one [section] per subcommand.
  for (auto *sub : {build, rank, eval, cmp, stats, lists, kappa}) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*build) {
      const ap::Corpus corpus = ap::load_corpus_file(build_corpus);
      const ap::BuildResult result = ap::build_dataset(corpus, {}, "dataset");
      {
        auto out = open_out(build_out);
        ap::write_dataset(out, result.dataset);
      }
      write_json(build_report.empty() ? build_out + ".report.json" : build_report,
                 ap::report_to_json(result.report));
      const auto &r = result.report;
      std::cout << "articles " << r.articles << ", accepted targets " << r.accepted_targets
                << ", anchored links " << r.extracted << ", deduplicated " << r.deduplicated
                << ", non-trivial " << r.nontrivial << ", examples " << r.examples << '\n';
    } else if (*rank) {
      const ap::Corpus corpus = ap::load_corpus_file(rank_corpus);
      const ap::Dataset dataset = ap::read_dataset_file(rank_dataset);
      cfg.name = ranker_name;
      cfg.limits.lead_tokens = token_limit(lead_tokens);
      cfg.limits.candidate_tokens = token_limit(candidate_tokens);
      cfg.limits.title_tokens = token_limit(title_tokens);
      cfg.limits.context_window = cfg.window_tokens;
      if (ranker_name == "majority") {
        cfg.train_stats = ap::TrainStats::from_dataset(
            train_dataset.empty() ? dataset : ap::read_dataset_file(train_dataset));
      }
      if (ranker_name == "external" && cfg.scorer.endpoint.empty()) {
        throw UsageError("--ranker external requires --scorer");
      }
      const ap::Dataset selected = ap::select_split(dataset, split_option(rank_split));
      const auto ranker = ap::make_ranker(cfg, corpus);
      std::vector<ap::Prediction> preds = ap::rank_all(*ranker, selected.examples);
      if (emit_urls) {
        for (std::size_t i = 0; i < preds.size(); ++i) {
          const ap::Example &ex = selected.examples[i];
          const ap::Article &target = corpus.at(ex.link.target_id);
          try {
            preds[i].url = url_for(url_base, target, ex.candidates[preds[i].chosen_index]);
          } catch (const ap::FragmentError &e) {
            std::cerr << "warning: no URL for " << ex.example_id << ": " << e.what() << '\n';
          }
        }
      }
      auto out = open_out(rank_out);
      ap::write_predictions(out, preds);
      std::cout << "ranked " << preds.size() << " examples with " << ranker->name() << '\n';
    } else if (*eval) {
      const ap::Dataset dataset = ap::select_split(
          ap::read_dataset_file(eval_dataset, eval_name), split_option(eval_split));
      const auto preds = ap::read_predictions_file(eval_preds);
      const ap::EvalReport report = ap::evaluate(preds, dataset, eval_ranker);
      if (!eval_out.empty()) write_json(eval_out, ap::eval_report_to_json(report));
      std::cout << ap::compare(std::vector<ap::EvalReport>{report}).render_text();
      std::cout << report.n_correct << "/" << report.n_examples << " correct\n";
    } else if (*cmp) {
      std::vector<ap::EvalReport> reports;
      for (const auto &path : cmp_reports) {
        std::ifstream in(path);
        reports.push_back(ap::eval_report_from_json(nlohmann::json::parse(in)));
      }
      const ap::ComparisonTable table = ap::compare(reports);
      std::cout << table.render_text();
      if (!cmp_out.empty()) open_out(cmp_out) << table.render_tsv();
    } else if (*stats) {
      const ap::Corpus corpus = ap::load_corpus_file(stats_corpus);
      const ap::Dataset dataset =
          ap::select_split(ap::read_dataset_file(stats_dataset), split_option(stats_split));
      const ap::StatsReport report = ap::dataset_statistics(dataset, corpus);
      if (!stats_out.empty()) write_json(stats_out, ap::stats_to_json(report));
      std::cout << ap::render_stats(report);
    } else if (*lists) {
      const ap::Corpus corpus = ap::load_corpus_file(lists_corpus);
      const ap::Dataset dataset =
          ap::select_split(ap::read_dataset_file(lists_dataset), split_option(lists_split));
      auto out = open_out(lists_out);
      std::size_t n = 0, skipped = 0;
      for (const ap::Example &ex : dataset.examples) {
        try {
          for (const auto &l : ap::sample_training_lists(ex, corpus, list_size, lists_seed)) {
            out << ap::training_list_to_json(l).dump() << '\n';
            ++n;
          }
        } catch (const ap::DataError &e) {
          std::cerr << "warning: skipping " << ex.example_id << ": " << e.what() << '\n';
          ++skipped;
        }
      }
      std::cout << "wrote " << n << " lists (" << skipped << " examples skipped)\n";
    } else if (*kappa) {
      const ap::Dataset annotations = ap::read_dataset_file(kappa_in);
      const ap::KappaSummary k = ap::mean_pairwise_kappa(annotations);
      const ap::AgreementHistogram h = ap::agreement_distribution(annotations);
      nlohmann::ordered_json j;
      j["mean_pairwise_kappa"] = k.mean_kappa;
      j["pairs"] = nlohmann::ordered_json::array();
      for (const auto &[pair, value] : k.pairs) {
        j["pairs"].push_back({{"a", pair.first}, {"b", pair.second}, {"kappa", value}});
      }
      j["agreement"] = ap::agreement_to_json(h);
      if (!kappa_out.empty()) write_json(kappa_out, j);
      std::printf("mean pairwise kappa %.4f over %zu pairs\n", k.mean_kappa, k.pairs.size());
      std::cout << j["agreement"].dump(2) << '\n';
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ap::UnknownRankerError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
