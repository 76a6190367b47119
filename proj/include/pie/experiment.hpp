//
// Copyright 2026 The piebench Authors
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
//

#ifndef PIE_EXPERIMENT_HPP_
#define PIE_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pie/core.hpp"
#include "pie/metrics.hpp"
#include "pie/prompting.hpp"

// End-to-end pipeline: run extraction jobs over a dataset (resumable,
// parallel), score the resulting records, and render aggregate reports.
namespace pie::experiment {

// Thrown when a report is requested over an empty score file.
class EmptyScores : public std::runtime_error {
 public:
  explicit EmptyScores(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::string manifest_path;
  std::string train_manifest_path;  // required by the scraper extractor

  // regex | keyword | entity | scraper | llm
  std::string extractor = "regex";

  // LLM settings. persona selects the backend: compliant | injectable |
  // scripted:<fixture.json> | paraphrase-identity | http (a real endpoint
  // configured through the environment).
  std::string persona = "compliant";
  std::string model = "default";
  prompt::PromptStyle prompt_style = prompt::PromptStyle::kDirect;
  int icl_examples = 0;
  bool bypass = false;
  prompt::ProfileMode profile_mode = prompt::ProfileMode::kFiltered;
  std::string adaptive = "none";  // adaptive attack tag, see adaptive_from_key
  std::uint64_t adaptive_seed = 0;
  double retokenize_prob = 0.2;

  // Defense applied to every profile before extraction; DefenseSpec grammar.
  std::string defense = "none";
  std::uint64_t defense_seed = 0;

  std::vector<CategoryId> categories;  // empty means all eight

  std::uint64_t seed = 0;
  int workers = 1;
  std::string cache_dir;
  std::string results_path = "results.jsonl";

  // Stable fingerprint over every field that changes what a job computes
  // (paths, extractor settings, defense, seed). Worker count, cache location
  // and output location do not affect it.
  std::string run_id() const;

  static ExperimentConfig from_json_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

struct RunSummary {
  std::string run_id;
  int total_jobs = 0;
  int executed = 0;
  int skipped_existing = 0;
  int errors = 0;
};

// Executes every (profile, category) job that is not already present in the
// results file for this config's run id, appending one JSON line per job.
// Failures are captured per record, never aborting the run.
RunSummary run_experiment(const ExperimentConfig& config);

// Scores each extraction record in `results_path` against the manifest's
// ground truth and writes one score line per record, sorted for stable
// output. Unparsable lines (e.g. a truncated tail from an interrupted run)
// are skipped.
int evaluate_results(const std::filesystem::path& results_path,
                     const std::filesystem::path& manifest_path,
                     metrics::EmbeddingProvider& provider,
                     const std::filesystem::path& scores_path);

struct ReportOptions {
  std::string group_by = "extractor";  // extractor | defense
};

struct Report {
  std::string markdown;
  std::string csv;
};

// Aggregates scores into one row per group and one column per category.
// Markdown cells show "NN% / 0.DD" (primary metric percent, embedding score);
// the CSV carries unrounded means. Deterministic byte-for-byte for the same
// score file.
Report render_report(const std::filesystem::path& scores_path,
                     const ReportOptions& options);

}  // namespace pie::experiment

#endif  // PIE_EXPERIMENT_HPP_
