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

#include "pie/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "pie/backend.hpp"
#include "pie/baselines.hpp"
#include "pie/defenses.hpp"
#include "pie/generator.hpp"
#include "pie/rng.hpp"

namespace pie::experiment {
namespace {

using nlohmann::json;

json identity_json(const ExperimentConfig& c) {
  json j;
  j["manifest"] = c.manifest_path;
  j["train_manifest"] = c.train_manifest_path;
  j["extractor"] = c.extractor;
  j["persona"] = c.persona;
  j["model"] = c.model;
  j["prompt_style"] = std::string(prompt::prompt_style_key(c.prompt_style));
  j["icl_examples"] = c.icl_examples;
  j["bypass"] = c.bypass;
  j["profile_mode"] = std::string(prompt::profile_mode_key(c.profile_mode));
  j["adaptive"] = c.adaptive;
  j["adaptive_seed"] = c.adaptive_seed;
  j["retokenize_prob"] = c.retokenize_prob;
  j["defense"] = c.defense;
  j["defense_seed"] = c.defense_seed;
  json cats = json::array();
  for (CategoryId cat : c.categories) {
    cats.push_back(std::string(category_key(cat)));
  }
  j["categories"] = std::move(cats);
  j["seed"] = c.seed;
  return j;
}

void apply_config_json(ExperimentConfig& c, const json& j) {
  static const std::set<std::string> kKnown = {
      "manifest",     "train_manifest", "extractor",      "persona",
      "model",        "prompt_style",   "icl_examples",   "bypass",
      "profile_mode", "adaptive",       "adaptive_seed",  "retokenize_prob",
      "defense",      "defense_seed",   "categories",     "seed",
      "workers",      "cache_dir",      "results"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.count(key)) {
      throw std::invalid_argument("unknown config key: " + key);
    }
    (void)value;
  }

  if (j.contains("manifest")) c.manifest_path = j["manifest"].get<std::string>();
  if (j.contains("train_manifest")) {
    c.train_manifest_path = j["train_manifest"].get<std::string>();
  }
  if (j.contains("extractor")) c.extractor = j["extractor"].get<std::string>();
  if (j.contains("persona")) c.persona = j["persona"].get<std::string>();
  if (j.contains("model")) c.model = j["model"].get<std::string>();
  if (j.contains("prompt_style")) {
    auto style = prompt::prompt_style_from_key(
        j["prompt_style"].get<std::string>());
    if (!style) {
      throw std::invalid_argument("unknown prompt_style: " +
                                  j["prompt_style"].get<std::string>());
    }
    c.prompt_style = *style;
  }
  if (j.contains("icl_examples")) c.icl_examples = j["icl_examples"].get<int>();
  if (j.contains("bypass")) c.bypass = j["bypass"].get<bool>();
  if (j.contains("profile_mode")) {
    auto mode =
        prompt::profile_mode_from_key(j["profile_mode"].get<std::string>());
    if (!mode) {
      throw std::invalid_argument("unknown profile_mode: " +
                                  j["profile_mode"].get<std::string>());
    }
    c.profile_mode = *mode;
  }
  if (j.contains("adaptive")) c.adaptive = j["adaptive"].get<std::string>();
  if (j.contains("adaptive_seed")) {
    c.adaptive_seed = j["adaptive_seed"].get<std::uint64_t>();
  }
  if (j.contains("retokenize_prob")) {
    c.retokenize_prob = j["retokenize_prob"].get<double>();
  }
  if (j.contains("defense")) c.defense = j["defense"].get<std::string>();
  if (j.contains("defense_seed")) {
    c.defense_seed = j["defense_seed"].get<std::uint64_t>();
  }
  if (j.contains("categories")) {
    c.categories.clear();
    for (const auto& item : j["categories"]) {
      std::string key = item.get<std::string>();
      auto cat = category_from_key(key);
      if (!cat) throw std::invalid_argument("unknown category: " + key);
      c.categories.push_back(*cat);
    }
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) c.workers = j["workers"].get<int>();
  if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
  if (j.contains("results")) c.results_path = j["results"].get<std::string>();
}

// Collapses newlines so a value fits in a one-line in-context block.
std::string single_line(const std::string& text) {
  std::string out = text;
  for (char& ch : out) {
    if (ch == '\n') ch = ';';
  }
  return collapse_whitespace(out);
}

std::string icl_snippet(const GroundTruthRecord& truth) {
  static const std::array<std::string_view, 8> kLabels = {
      "Email", "Phone", "Address", "Name",
      "Work",  "Education", "Affiliation", "Occupation"};
  std::string out;
  for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
    const Extraction& label = truth.label(kAllCategories[i]);
    if (!label) continue;
    if (!out.empty()) out += " ";
    out += std::string(kLabels[i]) + ": " + single_line(*label) + ".";
  }
  return out;
}

std::unique_ptr<backend::ChatBackend> make_backend(
    const ExperimentConfig& config) {
  const std::string& persona = config.persona;
  if (persona == "http") {
    return backend::HttpBackend::from_env(config.model);
  }
  if (persona.rfind("scripted:", 0) == 0) {
    return backend::MockPersonaBackend::scripted(
        persona.substr(std::string("scripted:").size()));
  }
  if (auto p = backend::persona_from_key(persona)) {
    return std::make_unique<backend::MockPersonaBackend>(*p);
  }
  throw std::invalid_argument("unknown persona: " + persona);
}

struct CellStats {
  double primary_sum = 0.0;
  double bert_sum = 0.0;
  int n = 0;
};

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

std::string ExperimentConfig::run_id() const {
  return to_hex16(fnv1a64(identity_json(*this).dump()));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad experiment config: ") +
                                e.what());
  }
  ExperimentConfig config;
  apply_config_json(config, j);
  return config;
}

ExperimentConfig ExperimentConfig::from_json_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

RunSummary run_experiment(const ExperimentConfig& config) {
  DatasetManifest manifest = load_manifest(config.manifest_path);

  defense::DefenseSpec dspec = defense::DefenseSpec::parse(config.defense);
  dspec.seed = config.defense_seed;

  auto adaptive_kind = prompt::adaptive_from_key(config.adaptive);
  if (!adaptive_kind) {
    throw std::invalid_argument("unknown adaptive attack: " + config.adaptive);
  }

  std::vector<CategoryId> cats;
  for (CategoryId cat : kAllCategories) {
    if (config.categories.empty() ||
        std::find(config.categories.begin(), config.categories.end(), cat) !=
            config.categories.end()) {
      cats.push_back(cat);
    }
  }

  RunSummary summary;
  summary.run_id = config.run_id();
  summary.total_jobs =
      static_cast<int>(manifest.entries.size() * cats.size());

  // Already-recorded jobs for this run id survive a restart untouched.
  std::set<std::string> done;
  {
    std::ifstream in(config.results_path);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      try {
        ExtractionRecord rec = extraction_record_from_json(line);
        done.insert(rec.run_id + "|" + rec.profile_id + "|" +
                    std::string(category_key(rec.category)));
      } catch (const std::exception&) {
        // A truncated tail from an interrupted run; the job reruns.
      }
    }
  }

  // Defended documents are per profile, not per job; prepare them up front.
  struct Prepared {
    ProfileDocument doc;
    std::optional<std::string> error;
  };
  std::vector<Prepared> prepared(manifest.entries.size());
  std::filesystem::path defended_dir;
  if (dspec.kind != defense::DefenseSpec::Kind::kNone &&
      !config.cache_dir.empty()) {
    defended_dir = std::filesystem::path(config.cache_dir) / "defended";
    std::filesystem::create_directories(defended_dir);
  }
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    if (dspec.kind == defense::DefenseSpec::Kind::kNone) {
      prepared[i].doc = entry.document;
      continue;
    }
    std::filesystem::path cached;
    if (!defended_dir.empty()) {
      std::uint64_t fp = fnv1a64(
          fnv1a64(entry.document.content),
          dspec.tag() + "|" + std::to_string(config.defense_seed));
      cached = defended_dir / (entry.document.id + "-" + to_hex16(fp) +
                               ".html");
      std::ifstream in(cached, std::ios::binary);
      if (in) {
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        prepared[i].doc = entry.document;
        prepared[i].doc.content = std::move(content);
        continue;
      }
    }
    try {
      prepared[i].doc = defense::apply_defense(entry.document, entry.truth,
                                               dspec);
      if (!cached.empty()) {
        std::filesystem::path temp = cached;
        temp += ".tmp";
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out << prepared[i].doc.content;
        out.close();
        std::error_code ec;
        std::filesystem::rename(temp, cached, ec);
      }
    } catch (const std::exception& e) {
      prepared[i].doc = entry.document;
      prepared[i].error = e.what();
    }
  }

  std::unique_ptr<backend::ChatBackend> chat;
  std::unique_ptr<backend::ResponseCache> cache;
  std::string extractor_tag = config.extractor;
  if (config.extractor == "llm") {
    chat = make_backend(config);
    extractor_tag = "llm:" + chat->model();
    if (!config.cache_dir.empty()) {
      cache = std::make_unique<backend::ResponseCache>(
          std::filesystem::path(config.cache_dir) / "responses");
    }
  } else if (config.extractor != "regex" && config.extractor != "keyword" &&
             config.extractor != "entity" && config.extractor != "scraper") {
    throw std::invalid_argument("unknown extractor: " + config.extractor);
  }

  baselines::SelectorModel scraper;
  if (config.extractor == "scraper") {
    if (config.train_manifest_path.empty()) {
      throw std::invalid_argument(
          "the scraper extractor needs a training manifest");
    }
    DatasetManifest train = load_manifest(config.train_manifest_path);
    scraper.train(train.entries);
  }

  // Deterministic in-context examples, shared across categories.
  std::vector<GroundTruthRecord> icl_truths;
  if (config.extractor == "llm") {
    for (int k = 0; k < config.icl_examples; ++k) {
      auto [doc, truth] = gen::generate_profile(
          derive_seed(config.seed, "icl-" + std::to_string(k)),
          gen::Style::kNeat, gen::Complexity::kLow, 0.0);
      icl_truths.push_back(std::move(truth));
    }
  }

  struct Job {
    std::size_t entry_index;
    CategoryId category;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    for (CategoryId cat : cats) {
      std::string key = summary.run_id + "|" +
                        manifest.entries[i].document.id + "|" +
                        std::string(category_key(cat));
      if (done.count(key)) {
        ++summary.skipped_existing;
      } else {
        jobs.push_back({i, cat});
      }
    }
  }

  std::ofstream out(config.results_path, std::ios::app);
  if (!out) {
    throw IoError("cannot open results file: " + config.results_path);
  }

  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<int> errors{0};

  auto worker = [&]() {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) break;
      const Job& job = jobs[k];
      const ManifestEntry& entry = manifest.entries[job.entry_index];
      const Prepared& prep = prepared[job.entry_index];

      ExtractionRecord rec;
      rec.run_id = summary.run_id;
      rec.profile_id = entry.document.id;
      rec.category = job.category;
      rec.extractor = extractor_tag;
      rec.timestamp = iso8601_utc_now();
      if (dspec.kind != defense::DefenseSpec::Kind::kNone) {
        rec.defense = dspec.tag();
      }

      try {
        if (prep.error) {
          throw std::runtime_error("defense failed: " + *prep.error);
        }
        if (config.extractor == "llm") {
          prompt::PromptSpec pspec;
          pspec.category = job.category;
          pspec.style = config.prompt_style;
          pspec.bypass_clause = config.bypass;
          pspec.profile_mode = config.profile_mode;
          pspec.adaptive.kind = *adaptive_kind;
          pspec.adaptive.seed = config.adaptive_seed;
          pspec.adaptive.split_prob = config.retokenize_prob;
          for (const GroundTruthRecord& truth : icl_truths) {
            prompt::IclExample example;
            example.snippet = icl_snippet(truth);
            const Extraction& answer = truth.label(job.category);
            example.answer = answer ? single_line(*answer) : "none";
            pspec.examples.push_back(std::move(example));
          }
          ExtractionRecord llm = backend::extract_with_llm(
              prep.doc, pspec, *chat, cache.get());
          rec.extracted = llm.extracted;
          rec.prompt_fingerprint = llm.prompt_fingerprint;
          rec.extractor = llm.extractor;
        } else if (config.extractor == "regex") {
          rec.extracted = baselines::regex_extract(prep.doc, job.category);
        } else if (config.extractor == "keyword") {
          rec.extracted = baselines::keyword_extract(prep.doc, job.category);
        } else if (config.extractor == "entity") {
          rec.extracted = baselines::entity_extract(prep.doc, job.category);
        } else {
          rec.extracted = scraper.extract(prep.doc, job.category);
        }
      } catch (const std::exception& e) {
        rec.extracted = std::nullopt;
        rec.error = e.what();
        errors.fetch_add(1);
      }

      std::lock_guard<std::mutex> lock(write_mutex);
      out << extraction_record_to_json(rec) << "\n";
      out.flush();
    }
  };

  std::size_t thread_count = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, config.workers)), jobs.size());
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
      threads.emplace_back(worker);
    }
    for (auto& t : threads) t.join();
  }

  summary.executed = static_cast<int>(jobs.size());
  summary.errors = errors.load();
  return summary;
}

int evaluate_results(const std::filesystem::path& results_path,
                     const std::filesystem::path& manifest_path,
                     metrics::EmbeddingProvider& provider,
                     const std::filesystem::path& scores_path) {
  DatasetManifest manifest = load_manifest(manifest_path);
  std::ifstream in(results_path);
  if (!in) throw IoError("cannot read results: " + results_path.string());

  std::vector<metrics::ScoreRecord> scores;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ExtractionRecord rec;
    try {
      rec = extraction_record_from_json(line);
    } catch (const std::exception&) {
      continue;  // interrupted-run debris
    }
    const ManifestEntry* entry = manifest.find(rec.profile_id);
    if (!entry) {
      throw IoError("results reference unknown profile: " + rec.profile_id);
    }
    scores.push_back(metrics::score_record(rec, entry->truth, provider));
  }

  // Deterministic output independent of worker interleaving.
  std::sort(scores.begin(), scores.end(),
            [](const metrics::ScoreRecord& a, const metrics::ScoreRecord& b) {
              auto key = [](const metrics::ScoreRecord& s) {
                return std::make_tuple(s.extractor,
                                       s.defense.value_or(std::string()),
                                       s.profile_id,
                                       static_cast<int>(s.category));
              };
              return key(a) < key(b);
            });

  std::ofstream out(scores_path, std::ios::trunc);
  if (!out) throw IoError("cannot write scores: " + scores_path.string());
  for (const auto& score : scores) {
    out << metrics::score_to_json(score) << "\n";
  }
  return static_cast<int>(scores.size());
}

Report render_report(const std::filesystem::path& scores_path,
                     const ReportOptions& options) {
  if (options.group_by != "extractor" && options.group_by != "defense") {
    throw std::invalid_argument("group_by must be extractor or defense");
  }

  std::ifstream in(scores_path);
  if (!in) throw IoError("cannot read scores: " + scores_path.string());

  std::map<std::string, std::array<CellStats, 8>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    metrics::ScoreRecord score;
    try {
      score = metrics::score_from_json(line);
    } catch (const std::exception&) {
      continue;
    }
    std::string group = options.group_by == "extractor"
                            ? score.extractor
                            : score.defense.value_or("none");
    CellStats& cell = table[group][static_cast<std::size_t>(score.category)];
    double primary = metrics::uses_accuracy_metric(score.category)
                         ? score.accuracy.value_or(0.0)
                         : score.rouge1.value_or(0.0);
    cell.primary_sum += primary;
    cell.bert_sum += score.bert.value_or(0.0);
    cell.n += 1;
  }
  if (table.empty()) {
    throw EmptyScores("no scores in " + scores_path.string());
  }

  Report report;
  report.markdown = "| " + options.group_by;
  for (CategoryId cat : kAllCategories) {
    report.markdown += " | " + std::string(category_phrase(cat));
  }
  report.markdown += " |\n|---";
  for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
    report.markdown += "|---";
  }
  report.markdown += "|\n";

  report.csv = "group,category,records,primary_metric,primary_mean,bert_mean\n";

  for (const auto& [group, cells] : table) {
    report.markdown += "| " + group;
    for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
      const CellStats& cell = cells[i];
      if (cell.n == 0) {
        report.markdown += " | -";
        continue;
      }
      double primary = cell.primary_sum / cell.n;
      double bert = cell.bert_sum / cell.n;
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%d%% / %.2f",
                    static_cast<int>(std::llround(primary * 100.0)), bert);
      report.markdown += " | " + std::string(buf);
    }
    report.markdown += " |\n";

    for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
      const CellStats& cell = cells[i];
      if (cell.n == 0) continue;
      CategoryId cat = kAllCategories[i];
      report.csv += group;
      report.csv += ",";
      report.csv += std::string(category_key(cat));
      report.csv += ",";
      report.csv += std::to_string(cell.n);
      report.csv += ",";
      report.csv += metrics::uses_accuracy_metric(cat) ? "accuracy" : "rouge1";
      report.csv += ",";
      report.csv += format_double(cell.primary_sum / cell.n);
      report.csv += ",";
      report.csv += format_double(cell.bert_sum / cell.n);
      report.csv += "\n";
    }
  }

  return report;
}

}  // namespace pie::experiment
