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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pie/core.hpp"
#include "pie/defenses.hpp"
#include "pie/experiment.hpp"
#include "pie/generator.hpp"
#include "pie/metrics.hpp"

namespace {

using namespace pie;

std::vector<gen::Style> parse_styles(const std::string& list) {
  std::vector<gen::Style> styles;
  for (const std::string& item : split(list, ',')) {
    std::string key = trim(item);
    if (key.empty()) continue;
    auto style = gen::style_from_key(key);
    if (!style) throw CLI::ValidationError("unknown style: " + key);
    styles.push_back(*style);
  }
  return styles;
}

std::vector<CategoryId> parse_categories(const std::string& list) {
  std::vector<CategoryId> cats;
  for (const std::string& item : split(list, ',')) {
    std::string key = trim(item);
    if (key.empty()) continue;
    auto cat = category_from_key(key);
    if (!cat) throw CLI::ValidationError("unknown category: " + key);
    cats.push_back(*cat);
  }
  return cats;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

int cmd_gen(const std::string& out_dir, int count, std::uint64_t seed,
            const std::string& styles, const std::string& complexity,
            double absence_rate, const std::string& name) {
  gen::GeneratorConfig config;
  config.seed = seed;
  config.count = count;
  config.styles = parse_styles(styles);
  auto level = gen::complexity_from_key(complexity);
  if (!level) throw CLI::ValidationError("unknown complexity: " + complexity);
  config.complexity = *level;
  config.absence_rate = absence_rate;
  config.dataset_name = name;

  DatasetManifest manifest = gen::generate_dataset(config);
  save_dataset(manifest, out_dir);
  std::printf("wrote %zu profiles to %s\n", manifest.entries.size(),
              out_dir.c_str());
  return 0;
}

int cmd_defend(const std::string& manifest_path, const std::string& out_dir,
               const std::string& defense_tag, std::uint64_t defense_seed) {
  DatasetManifest manifest = load_manifest(manifest_path);
  defense::DefenseSpec spec = defense::DefenseSpec::parse(defense_tag);
  spec.seed = defense_seed;

  DatasetManifest defended;
  defended.name = manifest.name + "-" + spec.tag();
  for (const ManifestEntry& entry : manifest.entries) {
    ManifestEntry out = entry;
    out.document = defense::apply_defense(entry.document, entry.truth, spec);
    defended.entries.push_back(std::move(out));
  }
  save_dataset(defended, out_dir);
  std::printf("wrote %zu defended profiles to %s\n", defended.entries.size(),
              out_dir.c_str());
  return 0;
}

int cmd_extract(const experiment::ExperimentConfig& config) {
  experiment::RunSummary summary = experiment::run_experiment(config);
  std::printf(
      "run %s: %d jobs, %d executed, %d already present, %d errors -> %s\n",
      summary.run_id.c_str(), summary.total_jobs, summary.executed,
      summary.skipped_existing, summary.errors, config.results_path.c_str());
  return summary.errors == 0 ? 0 : 1;
}

int cmd_eval(const std::string& results, const std::string& manifest,
             const std::string& scores, const std::string& embeddings,
             const std::string& embed_model, const std::string& cache_dir) {
  std::unique_ptr<metrics::EmbeddingProvider> provider;
  if (embeddings == "trigram") {
    provider = std::make_unique<metrics::TrigramHashProvider>();
  } else if (embeddings == "http") {
    const char* url = std::getenv("PIE_BACKEND_URL");
    if (url == nullptr || *url == '\0') {
      throw metrics::ProviderUnavailable(
          "PIE_BACKEND_URL is not set; no embedding endpoint configured");
    }
    const char* key = std::getenv("PIE_BACKEND_KEY");
    provider = std::make_unique<metrics::RemoteHttpProvider>(
        url, key ? key : "", embed_model, cache_dir);
  } else {
    throw CLI::ValidationError("embeddings must be trigram or http");
  }

  int n = experiment::evaluate_results(results, manifest, *provider, scores);
  std::printf("scored %d records -> %s\n", n, scores.c_str());
  return 0;
}

int cmd_report(const std::string& scores, const std::string& group_by,
               const std::string& md_path, const std::string& csv_path) {
  experiment::ReportOptions options;
  options.group_by = group_by;
  experiment::Report report = experiment::render_report(scores, options);
  if (!md_path.empty()) write_file(md_path, report.markdown);
  if (!csv_path.empty()) write_file(csv_path, report.csv);
  if (md_path.empty() && csv_path.empty()) {
    std::fputs(report.markdown.c_str(), stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark for personal information extraction from web "
               "profiles: synthetic data, attacks, defenses and scoring"};
  app.require_subcommand(1);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string gen_out = "dataset";
  int gen_count = 10;
  std::uint64_t gen_seed = 0;
  std::string gen_styles;
  std::string gen_complexity = "medium";
  double gen_absence = 0.0;
  std::string gen_name = "synthetic";
  gen_cmd->add_option("--out", gen_out, "Output directory");
  gen_cmd->add_option("--count", gen_count, "Number of profiles");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--styles", gen_styles,
                      "Comma separated styles (default: all five)");
  gen_cmd->add_option("--complexity", gen_complexity, "low|medium|high");
  gen_cmd->add_option("--absence-rate", gen_absence,
                      "Probability that a non-name category is absent");
  gen_cmd->add_option("--name", gen_name, "Dataset name");

  // defend
  auto* defend_cmd =
      app.add_subcommand("defend", "Apply a defense to every profile");
  std::string defend_manifest;
  std::string defend_out = "defended";
  std::string defend_tag = "symbol:at+dot";
  std::uint64_t defend_seed = 0;
  defend_cmd->add_option("--manifest", defend_manifest, "Input manifest.json")
      ->required();
  defend_cmd->add_option("--out", defend_out, "Output directory");
  defend_cmd->add_option("--defense", defend_tag,
                         "none|symbol:MODE|keyword|hyperlink|text2image[:cats]"
                         "|inject:STRATEGY[:cats]");
  defend_cmd->add_option("--defense-seed", defend_seed,
                         "Seed for fake injected data");

  // extract
  auto* extract_cmd =
      app.add_subcommand("extract", "Run an extractor over a dataset");
  experiment::ExperimentConfig config;
  std::string config_path;
  std::string extract_categories;
  extract_cmd->add_option("--config", config_path,
                          "JSON config; explicit flags override its values");
  auto* opt_manifest =
      extract_cmd->add_option("--manifest", config.manifest_path);
  auto* opt_train =
      extract_cmd->add_option("--train-manifest", config.train_manifest_path,
                              "Training manifest for the scraper extractor");
  auto* opt_extractor = extract_cmd->add_option(
      "--extractor", config.extractor, "regex|keyword|entity|scraper|llm");
  auto* opt_persona = extract_cmd->add_option(
      "--persona", config.persona,
      "compliant|injectable|scripted:<fixture>|paraphrase-identity|http");
  auto* opt_model = extract_cmd->add_option("--model", config.model);
  std::string prompt_style = "direct";
  auto* opt_style = extract_cmd->add_option("--prompt-style", prompt_style,
                                            "direct|persona|contextual|"
                                            "pseudocode");
  auto* opt_icl =
      extract_cmd->add_option("--icl", config.icl_examples,
                              "Number of in-context examples");
  auto* opt_bypass = extract_cmd->add_flag("--bypass", config.bypass,
                                           "Append the symbol bypass clause");
  std::string profile_mode = "filtered";
  auto* opt_mode = extract_cmd->add_option("--profile-mode", profile_mode,
                                           "direct|filtered");
  auto* opt_adaptive = extract_cmd->add_option(
      "--adaptive", config.adaptive,
      "none|paraphrase|retokenize|isolate-quotes|isolate-xml|isolate-randseq|"
      "instructional|sandwich");
  auto* opt_adaptive_seed =
      extract_cmd->add_option("--adaptive-seed", config.adaptive_seed);
  auto* opt_retok_prob =
      extract_cmd->add_option("--retokenize-prob", config.retokenize_prob);
  auto* opt_defense = extract_cmd->add_option("--defense", config.defense);
  auto* opt_defense_seed =
      extract_cmd->add_option("--defense-seed", config.defense_seed);
  auto* opt_categories = extract_cmd->add_option(
      "--categories", extract_categories, "Comma separated category subset");
  auto* opt_seed = extract_cmd->add_option("--seed", config.seed);
  auto* opt_workers = extract_cmd->add_option("--workers", config.workers);
  auto* opt_cache = extract_cmd->add_option("--cache-dir", config.cache_dir);
  auto* opt_results = extract_cmd->add_option("--results",
                                              config.results_path);

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "Score extraction results against the truth");
  std::string eval_results = "results.jsonl";
  std::string eval_manifest;
  std::string eval_scores = "scores.jsonl";
  std::string eval_embeddings = "trigram";
  std::string eval_embed_model = "default";
  std::string eval_cache;
  eval_cmd->add_option("--results", eval_results, "Extraction results JSONL");
  eval_cmd->add_option("--manifest", eval_manifest, "Dataset manifest")
      ->required();
  eval_cmd->add_option("--scores", eval_scores, "Output scores JSONL");
  eval_cmd->add_option("--embeddings", eval_embeddings, "trigram|http");
  eval_cmd->add_option("--embed-model", eval_embed_model);
  eval_cmd->add_option("--cache-dir", eval_cache, "Embedding cache directory");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Aggregate scores into a table");
  std::string report_scores = "scores.jsonl";
  std::string report_group = "extractor";
  std::string report_md;
  std::string report_csv;
  report_cmd->add_option("--scores", report_scores, "Scores JSONL");
  report_cmd->add_option("--group-by", report_group, "extractor|defense");
  report_cmd->add_option("--md", report_md, "Write markdown table here");
  report_cmd->add_option("--csv", report_csv, "Write CSV table here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      return cmd_gen(gen_out, gen_count, gen_seed, gen_styles, gen_complexity,
                     gen_absence, gen_name);
    }
    if (defend_cmd->parsed()) {
      return cmd_defend(defend_manifest, defend_out, defend_tag, defend_seed);
    }
    if (extract_cmd->parsed()) {
      if (!config_path.empty()) {
        experiment::ExperimentConfig file_config =
            experiment::ExperimentConfig::from_json_file(config_path);
        // Explicit flags win over the config file.
        if (!*opt_manifest) config.manifest_path = file_config.manifest_path;
        if (!*opt_train) {
          config.train_manifest_path = file_config.train_manifest_path;
        }
        if (!*opt_extractor) config.extractor = file_config.extractor;
        if (!*opt_persona) config.persona = file_config.persona;
        if (!*opt_model) config.model = file_config.model;
        if (!*opt_style) config.prompt_style = file_config.prompt_style;
        if (!*opt_icl) config.icl_examples = file_config.icl_examples;
        if (!*opt_bypass) config.bypass = file_config.bypass;
        if (!*opt_mode) config.profile_mode = file_config.profile_mode;
        if (!*opt_adaptive) config.adaptive = file_config.adaptive;
        if (!*opt_adaptive_seed) {
          config.adaptive_seed = file_config.adaptive_seed;
        }
        if (!*opt_retok_prob) {
          config.retokenize_prob = file_config.retokenize_prob;
        }
        if (!*opt_defense) config.defense = file_config.defense;
        if (!*opt_defense_seed) {
          config.defense_seed = file_config.defense_seed;
        }
        if (!*opt_categories) config.categories = file_config.categories;
        if (!*opt_seed) config.seed = file_config.seed;
        if (!*opt_workers) config.workers = file_config.workers;
        if (!*opt_cache) config.cache_dir = file_config.cache_dir;
        if (!*opt_results) config.results_path = file_config.results_path;
      }
      if (*opt_style) {
        auto style = prompt::prompt_style_from_key(prompt_style);
        if (!style) {
          throw CLI::ValidationError("unknown prompt style: " + prompt_style);
        }
        config.prompt_style = *style;
      }
      if (*opt_mode) {
        auto mode = prompt::profile_mode_from_key(profile_mode);
        if (!mode) {
          throw CLI::ValidationError("unknown profile mode: " + profile_mode);
        }
        config.profile_mode = *mode;
      }
      if (*opt_categories) {
        config.categories = parse_categories(extract_categories);
      }
      if (config.manifest_path.empty()) {
        throw CLI::ValidationError("--manifest (or a config file) is required");
      }
      return cmd_extract(config);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_results, eval_manifest, eval_scores,
                      eval_embeddings, eval_embed_model, eval_cache);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_scores, report_group, report_md, report_csv);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
