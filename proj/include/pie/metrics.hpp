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

#ifndef PIE_METRICS_HPP_
#define PIE_METRICS_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pie/core.hpp"

// Scoring: exact-match accuracy, unigram Rouge-1, and an embedding-based
// BERT-style token similarity score. Email and phone extractions are scored
// by accuracy, all other categories by Rouge-1; every category additionally
// gets the embedding score.
namespace pie::metrics {

// Thrown when a remote embedding provider cannot serve a request.
class ProviderUnavailable : public std::runtime_error {
 public:
  explicit ProviderUnavailable(const std::string& what)
      : std::runtime_error(what) {}
};

// Lowercased word tokens: maximal runs of alphanumeric characters
// (multi-byte UTF-8 sequences count as word characters); punctuation is
// dropped. "albert.einstein@gmail.com" -> {albert, einstein, gmail, com}.
std::vector<std::string> tokenize(std::string_view text);

// Canonical form used by exact-match accuracy: NFC, trimmed, whitespace
// collapsed; emails and phone numbers lowercased, phone numbers additionally
// stripped of spaces, parentheses and dashes.
std::string canonical_for_accuracy(std::string_view value,
                                   CategoryId category);

// Exact-match accuracy (1 or 0). Handles absence: when the ground truth is
// Absent the extraction counts as correct iff it is Absent too (absence
// phrases are normalized first); when the truth is present an Absent
// extraction scores 0.
int accuracy(const Extraction& extracted, const Extraction& truth,
             CategoryId category);

struct Rouge1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Unigram overlap with multiset clipping: shared counts are bounded by each
// side's own token counts. Empty token lists score 0.
Rouge1 rouge1(const std::string& candidate, const std::string& reference);

// --- Embedding-based score ----------------------------------------------------

// Embeds word tokens into unit-norm vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<std::vector<double>> embed(
      const std::vector<std::string>& tokens) = 0;
  virtual std::string name() const = 0;
};

// Deterministic offline provider: character trigrams of the padded token are
// feature-hashed into 64 buckets and L2-normalized. Identical tokens get
// identical vectors on every platform.
class TrigramHashProvider : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = 64;

  std::size_t dimension() const override { return kDimension; }
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& tokens) override;
  std::string name() const override { return "trigram-hash"; }
};

// Fetches embeddings from an OpenAI-style /v1/embeddings endpoint. Vectors
// are re-normalized on receipt. An optional cache directory stores one JSON
// file per (model, token), written atomically.
class RemoteHttpProvider : public EmbeddingProvider {
 public:
  RemoteHttpProvider(std::string base_url, std::string api_key,
                     std::string model, std::string cache_dir = "");

  std::size_t dimension() const override { return dimension_; }
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& tokens) override;
  std::string name() const override { return "remote:" + model_; }

 private:
  std::string host_part_;
  std::string path_prefix_;
  std::string api_key_;
  std::string model_;
  std::string cache_dir_;
  std::size_t dimension_ = 0;  // learned from the first response
};

struct BertScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy maximum-cosine matching over the token *sets* of candidate and
// reference (duplicates collapse). Negative cosines clamp to zero. Either
// side empty scores 0.
BertScore bert_score(const std::string& candidate, const std::string& reference,
                     EmbeddingProvider& provider);

// --- Per-record scoring --------------------------------------------------------

struct ScoreRecord {
  std::string profile_id;
  CategoryId category = CategoryId::kEmailAddress;
  std::string extractor;
  std::optional<std::string> defense;
  std::optional<double> accuracy;  // email, phone
  std::optional<double> rouge1;    // all other categories
  std::optional<double> bert;      // always
};

// True for the categories whose primary metric is exact-match accuracy.
bool uses_accuracy_metric(CategoryId category);

// Scores one extraction record against the ground truth, applying the
// category pairing rule and the absence conventions.
ScoreRecord score_record(const ExtractionRecord& record,
                         const GroundTruthRecord& truth,
                         EmbeddingProvider& provider);

std::string score_to_json(const ScoreRecord& score);
ScoreRecord score_from_json(const std::string& line);

}  // namespace pie::metrics

#endif  // PIE_METRICS_HPP_
