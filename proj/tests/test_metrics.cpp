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

#include "pie/metrics.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "pie/core.hpp"
#include "pie/rng.hpp"

namespace {

namespace fs = std::filesystem;
namespace metrics = pie::metrics;

using pie::CategoryId;
using pie::Extraction;
using pie::ExtractionRecord;
using pie::GroundTruthRecord;

constexpr std::size_t npos = std::string::npos;

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("pie-metrics-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Independent Rouge-1 reference: overlap as the sum over distinct tokens of
// min(candidate count, reference count). Deliberately a different algorithm
// from the consume-as-you-scan implementation under test.
metrics::Rouge1 oracle_rouge1(const std::vector<std::string>& cand,
                              const std::vector<std::string>& ref) {
  metrics::Rouge1 r;
  if (cand.empty() || ref.empty()) return r;
  std::map<std::string, int> cc;
  std::map<std::string, int> rc;
  for (const auto& t : cand) ++cc[t];
  for (const auto& t : ref) ++rc[t];
  int overlap = 0;
  for (const auto& [token, count] : cc) {
    auto it = rc.find(token);
    if (it != rc.end()) overlap += std::min(count, it->second);
  }
  r.precision = static_cast<double>(overlap) / static_cast<double>(cand.size());
  r.recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

// Set-based Rouge-1 over deduplicated tokens; with orthogonal unit embeddings
// the greedy token-set matcher must reduce to exactly this.
metrics::Rouge1 oracle_set_rouge1(const std::vector<std::string>& cand,
                                  const std::vector<std::string>& ref) {
  metrics::Rouge1 r;
  std::set<std::string> cs(cand.begin(), cand.end());
  std::set<std::string> rs(ref.begin(), ref.end());
  if (cs.empty() || rs.empty()) return r;
  int overlap = 0;
  for (const auto& t : cs) overlap += rs.count(t) ? 1 : 0;
  r.precision = static_cast<double>(overlap) / static_cast<double>(cs.size());
  r.recall = static_cast<double>(overlap) / static_cast<double>(rs.size());
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

// Every distinct token gets its own dimension: cosine 1 for equal tokens,
// 0 otherwise.
class OneHotProvider : public metrics::EmbeddingProvider {
 public:
  std::size_t dimension() const override { return kDim; }
  std::string name() const override { return "one-hot-test"; }

  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& tokens) override {
    std::vector<std::vector<double>> out;
    for (const auto& t : tokens) {
      auto [it, inserted] = index_.try_emplace(t, index_.size());
      REQUIRE(it->second < kDim);
      std::vector<double> v(kDim, 0.0);
      v[it->second] = 1.0;
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  static constexpr std::size_t kDim = 128;
  std::map<std::string, std::size_t> index_;
};

// "anti" points opposite to every other token, producing cosine -1 pairs.
class SignProvider : public metrics::EmbeddingProvider {
 public:
  std::size_t dimension() const override { return 2; }
  std::string name() const override { return "sign-test"; }

  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& tokens) override {
    std::vector<std::vector<double>> out;
    for (const auto& t : tokens) {
      out.push_back({t == "anti" ? -1.0 : 1.0, 0.0});
    }
    return out;
  }
};

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> kVocab = {
      "alpha", "bravo",  "charlie", "delta", "echo",  "foxtrot", "golf",
      "hotel", "india",  "juliet",  "kilo",  "lima",  "mike",    "november",
      "oscar", "papa",   "quebec",  "romeo", "sierra", "tango"};
  return kVocab;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += " ";
    out += t;
  }
  return out;
}

std::vector<std::string> random_tokens(pie::SplitMix64& rng,
                                       std::size_t max_len) {
  std::vector<std::string> out;
  std::size_t len = rng.next_below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(vocabulary()[rng.next_below(vocabulary().size())]);
  }
  return out;
}

std::vector<std::string> random_distinct_tokens(pie::SplitMix64& rng) {
  std::vector<std::string> pool = vocabulary();
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[rng.next_below(i)]);
  }
  pool.resize(1 + rng.next_below(pool.size()));
  return pool;
}

}  // namespace

TEST_CASE("tokenizer lowers case and drops punctuation") {
  CHECK(metrics::tokenize("albert.einstein@gmail.com") ==
        std::vector<std::string>{"albert", "einstein", "gmail", "com"});
  CHECK(metrics::tokenize("Hello, World!") ==
        std::vector<std::string>{"hello", "world"});
  CHECK(metrics::tokenize("(555) 123-4567") ==
        std::vector<std::string>{"555", "123", "4567"});
  CHECK(metrics::tokenize("") == std::vector<std::string>{});
  CHECK(metrics::tokenize("  ---  ") == std::vector<std::string>{});
  // Multi-byte sequences stay inside tokens, untouched by ASCII lowering.
  CHECK(metrics::tokenize("José Núñez") ==
        std::vector<std::string>{"josé", "núñez"});
}

TEST_CASE("accuracy canonicalization is category aware") {
  CHECK(metrics::canonical_for_accuracy("  Jane.Doe@Example.COM ",
                                        CategoryId::kEmailAddress) ==
        "jane.doe@example.com");
  CHECK(metrics::canonical_for_accuracy("(555) 123-4567",
                                        CategoryId::kPhoneNumber) ==
        "5551234567");
  CHECK(metrics::canonical_for_accuracy("+1 555-123-4567",
                                        CategoryId::kPhoneNumber) ==
        "+15551234567");
  // Dots are meaningful separators in some regions; they survive.
  CHECK(metrics::canonical_for_accuracy("555.123.4567",
                                        CategoryId::kPhoneNumber) ==
        "555.123.4567");
  // Names keep their case; runs of whitespace collapse.
  CHECK(metrics::canonical_for_accuracy("Elena   Vasquez", CategoryId::kName) ==
        "Elena Vasquez");
  // Combining marks compose, so decomposed input matches precomposed truth.
  CHECK(metrics::canonical_for_accuracy("Jose\xCC\x81", CategoryId::kName) ==
        "Jos\xC3\xA9");
}

TEST_CASE("accuracy applies the absence rule in all four cases") {
  const Extraction absent = std::nullopt;
  const Extraction value = "jane@corp.example";
  const CategoryId email = CategoryId::kEmailAddress;

  CHECK(metrics::accuracy(absent, absent, email) == 1);
  CHECK(metrics::accuracy(value, absent, email) == 0);
  CHECK(metrics::accuracy(absent, value, email) == 0);
  CHECK(metrics::accuracy(value, value, email) == 1);
  CHECK(metrics::accuracy(Extraction("other@corp.example"), value, email) ==
        0);

  // Absence phrases normalize to Absent before comparison.
  CHECK(metrics::accuracy(Extraction("The email address is not provided."),
                          absent, email) == 1);
  CHECK(metrics::accuracy(Extraction("none"), absent, email) == 1);
  CHECK(metrics::accuracy(Extraction("none"), value, email) == 0);

  // Canonicalization applies to both sides.
  CHECK(metrics::accuracy(Extraction(" JANE@CORP.EXAMPLE "), value, email) ==
        1);
  CHECK(metrics::accuracy(Extraction("(555) 123-4567"),
                          Extraction("555 123 4567"),
                          CategoryId::kPhoneNumber) == 1);
}

TEST_CASE("rouge1 matches hand-computed fixtures") {
  metrics::Rouge1 r = metrics::rouge1("the cat sat", "the cat");
  CHECK(r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.recall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.f1 == doctest::Approx(0.8).epsilon(1e-12));

  SUBCASE("identical strings score one") {
    metrics::Rouge1 s = metrics::rouge1("alpha beta", "Alpha, beta.");
    CHECK(s.precision == doctest::Approx(1.0));
    CHECK(s.recall == doctest::Approx(1.0));
    CHECK(s.f1 == doctest::Approx(1.0));
  }
  SUBCASE("duplicate tokens are clipped on both sides") {
    metrics::Rouge1 a = metrics::rouge1("a a a", "a");
    CHECK(a.precision == doctest::Approx(1.0 / 3.0));
    CHECK(a.recall == doctest::Approx(1.0));
    CHECK(a.f1 == doctest::Approx(0.5));

    metrics::Rouge1 b = metrics::rouge1("a", "a a a");
    CHECK(b.precision == doctest::Approx(1.0));
    CHECK(b.recall == doctest::Approx(1.0 / 3.0));
    CHECK(b.f1 == doctest::Approx(0.5));
  }
  SUBCASE("empty sides score zero") {
    metrics::Rouge1 e = metrics::rouge1("", "the cat");
    CHECK(e.precision == 0.0);
    CHECK(e.recall == 0.0);
    CHECK(e.f1 == 0.0);
    CHECK(metrics::rouge1("the cat", "").f1 == 0.0);
    CHECK(metrics::rouge1("...", "the cat").f1 == 0.0);
  }
  SUBCASE("no overlap scores zero") {
    CHECK(metrics::rouge1("alpha bravo", "charlie delta").f1 == 0.0);
  }
}

TEST_CASE("rouge1 agrees with the multiset oracle on random pairs") {
  pie::SplitMix64 rng(20260814);
  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> cand = random_tokens(rng, 12);
    std::vector<std::string> ref = random_tokens(rng, 12);
    metrics::Rouge1 expected = oracle_rouge1(cand, ref);
    metrics::Rouge1 got = metrics::rouge1(join_tokens(cand), join_tokens(ref));
    CHECK(std::abs(got.precision - expected.precision) < 1e-9);
    CHECK(std::abs(got.recall - expected.recall) < 1e-9);
    CHECK(std::abs(got.f1 - expected.f1) < 1e-9);
  }
}

TEST_CASE("trigram hash provider emits deterministic unit vectors") {
  metrics::TrigramHashProvider provider;
  CHECK(provider.dimension() == 64);
  CHECK(provider.name() == "trigram-hash");

  std::vector<std::string> tokens = {"hello", "world", "hello", "a"};
  auto first = provider.embed(tokens);
  auto second = provider.embed(tokens);
  REQUIRE(first.size() == 4);
  CHECK(first == second);
  CHECK(first[0] == first[2]);  // same token, same vector
  CHECK(first[0] != first[1]);

  for (const auto& v : first) {
    REQUIRE(v.size() == 64);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);
  }
}

TEST_CASE("bert score is one for identical token sets") {
  metrics::TrigramHashProvider provider;
  metrics::BertScore s =
      metrics::bert_score("Software Engineer", "software engineer", provider);
  CHECK(std::abs(s.precision - 1.0) < 1e-9);
  CHECK(std::abs(s.recall - 1.0) < 1e-9);
  CHECK(std::abs(s.f1 - 1.0) < 1e-9);

  // Duplicates collapse before matching.
  metrics::BertScore dup = metrics::bert_score("a a b", "b a", provider);
  CHECK(std::abs(dup.f1 - 1.0) < 1e-9);

  metrics::BertScore empty = metrics::bert_score("", "software", provider);
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
  CHECK(metrics::bert_score("software", "", provider).f1 == 0.0);
}

TEST_CASE("bert score clamps negative similarities to zero") {
  SignProvider provider;
  metrics::BertScore s = metrics::bert_score("anti", "pro", provider);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f1 == 0.0);
}

TEST_CASE("bert score reduces to set rouge under orthogonal embeddings") {
  pie::SplitMix64 rng(777);
  for (int round = 0; round < 50; ++round) {
    OneHotProvider provider;
    std::vector<std::string> cand = random_distinct_tokens(rng);
    std::vector<std::string> ref = random_distinct_tokens(rng);
    metrics::Rouge1 expected = oracle_set_rouge1(cand, ref);
    metrics::BertScore got =
        metrics::bert_score(join_tokens(cand), join_tokens(ref), provider);
    CHECK(std::abs(got.precision - expected.precision) < 1e-9);
    CHECK(std::abs(got.recall - expected.recall) < 1e-9);
    CHECK(std::abs(got.f1 - expected.f1) < 1e-9);
  }
}

TEST_CASE("remote embedding provider speaks the embeddings protocol") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/api/v1/embeddings", [&](const httplib::Request& req,
                                        httplib::Response& res) {
    ++hits;
    CHECK(req.get_header_value("Authorization") == "Bearer emb-key");
    nlohmann::json body = nlohmann::json::parse(req.body);
    CHECK(body.at("model") == "test-embed");
    nlohmann::json data = nlohmann::json::array();
    for (const auto& token : body.at("input")) {
      double scale = static_cast<double>(token.get<std::string>().size()) + 1;
      data.push_back({{"embedding", {3.0 * scale, 4.0 * scale}}});
    }
    res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
  });
  server.Post("/fail/v1/embeddings",
              [&](const httplib::Request&, httplib::Response& res) {
                res.status = 500;
              });
  server.Post("/garbled/v1/embeddings",
              [&](const httplib::Request&, httplib::Response& res) {
                res.set_content("{\"data\": ", "application/json");
              });
  server.Post("/short/v1/embeddings",
              [&](const httplib::Request&, httplib::Response& res) {
                res.set_content("{\"data\": [{\"embedding\": [1.0, 0.0]}]}",
                                "application/json");
              });

  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::string origin = "http://127.0.0.1:" + std::to_string(port);

  SUBCASE("vectors come back renormalized and set the dimension") {
    metrics::RemoteHttpProvider provider(origin + "/api/", "emb-key",
                                         "test-embed");
    CHECK(provider.dimension() == 0);
    auto vecs = provider.embed({"alpha", "longertoken"});
    REQUIRE(vecs.size() == 2);
    // The server scales [3, 4] per token; normalization lands on [0.6, 0.8].
    for (const auto& v : vecs) {
      REQUIRE(v.size() == 2);
      CHECK(std::abs(v[0] - 0.6) < 1e-12);
      CHECK(std::abs(v[1] - 0.8) < 1e-12);
    }
    CHECK(provider.dimension() == 2);
    CHECK(provider.name() == "remote:test-embed");

    // Without a cache directory every call goes to the endpoint.
    int before = hits.load();
    provider.embed({"alpha"});
    CHECK(hits.load() == before + 1);
  }
  SUBCASE("the cache short-circuits repeat embeddings") {
    fs::path dir = fresh_dir("emb-cache");
    metrics::RemoteHttpProvider provider(origin + "/api", "emb-key",
                                         "test-embed", dir.string());
    int start = hits.load();
    auto first = provider.embed({"alpha", "beta"});
    CHECK(hits.load() == start + 1);
    auto second = provider.embed({"alpha", "beta"});
    CHECK(hits.load() == start + 1);
    CHECK(second == first);

    // A partially cached batch fetches only the unseen token.
    auto third = provider.embed({"alpha", "gamma"});
    CHECK(hits.load() == start + 2);
    CHECK(third[0] == first[0]);

    bool tmp_leftover = false;
    int entries = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
      ++entries;
      std::string name = e.path().filename().string();
      if (name.find(".tmp") != npos) tmp_leftover = true;
      CHECK(name.rfind("emb-", 0) == 0);
    }
    CHECK_FALSE(tmp_leftover);
    CHECK(entries == 3);

    // A fresh provider over the same directory never hits the network.
    metrics::RemoteHttpProvider warm(origin + "/api", "emb-key", "test-embed",
                                     dir.string());
    int before = hits.load();
    warm.embed({"alpha", "beta", "gamma"});
    CHECK(hits.load() == before);
  }
  SUBCASE("server failures raise ProviderUnavailable") {
    metrics::RemoteHttpProvider failing(origin + "/fail", "k", "test-embed");
    CHECK_THROWS_AS(failing.embed({"alpha"}), metrics::ProviderUnavailable);

    metrics::RemoteHttpProvider garbled(origin + "/garbled", "k",
                                        "test-embed");
    CHECK_THROWS_AS(garbled.embed({"alpha"}), metrics::ProviderUnavailable);

    metrics::RemoteHttpProvider short_reply(origin + "/short", "k",
                                            "test-embed");
    CHECK_THROWS_AS(short_reply.embed({"alpha", "beta"}),
                    metrics::ProviderUnavailable);

    metrics::RemoteHttpProvider unreachable("http://127.0.0.1:1", "k",
                                            "test-embed");
    CHECK_THROWS_AS(unreachable.embed({"alpha"}),
                    metrics::ProviderUnavailable);
  }

  server.stop();
  server_thread.join();
}

TEST_CASE("metric pairing follows the category rule") {
  for (CategoryId cat : pie::kAllCategories) {
    bool expected = cat == CategoryId::kEmailAddress ||
                    cat == CategoryId::kPhoneNumber;
    CHECK(metrics::uses_accuracy_metric(cat) == expected);
  }
}

TEST_CASE("score record pairs metrics and applies absence conventions") {
  metrics::TrigramHashProvider provider;

  GroundTruthRecord truth;
  truth.profile_id = "p1";
  truth.labels[CategoryId::kEmailAddress] = "jane@corp.example";
  truth.labels[CategoryId::kWorkExperience] =
      "Software Engineer at Initech (2015 - 2019)";
  truth.labels[CategoryId::kPhoneNumber] = std::nullopt;

  ExtractionRecord rec;
  rec.profile_id = "p1";
  rec.extractor = "regex";
  rec.defense = "none";

  SUBCASE("email scores by accuracy, case-insensitively") {
    rec.category = CategoryId::kEmailAddress;
    rec.extracted = "Jane@Corp.EXAMPLE";
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    REQUIRE(s.accuracy.has_value());
    CHECK(*s.accuracy == 1.0);
    CHECK_FALSE(s.rouge1.has_value());
    REQUIRE(s.bert.has_value());
    CHECK(std::abs(*s.bert - 1.0) < 1e-9);
    CHECK(s.profile_id == "p1");
    CHECK(s.category == CategoryId::kEmailAddress);
    CHECK(s.extractor == "regex");
    CHECK(s.defense == "none");
  }
  SUBCASE("wrong email scores zero but keeps the bert field") {
    rec.category = CategoryId::kEmailAddress;
    rec.extracted = "other@corp.example";
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    REQUIRE(s.accuracy.has_value());
    CHECK(*s.accuracy == 0.0);
    REQUIRE(s.bert.has_value());
    CHECK(*s.bert < 1.0);
  }
  SUBCASE("narrative categories score by rouge") {
    rec.category = CategoryId::kWorkExperience;
    rec.extracted = "Software Engineer at Initech";
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    CHECK_FALSE(s.accuracy.has_value());
    REQUIRE(s.rouge1.has_value());
    double expected =
        metrics::rouge1(*rec.extracted,
                        *truth.label(CategoryId::kWorkExperience))
            .f1;
    CHECK(*s.rouge1 == doctest::Approx(expected).epsilon(1e-12));
    REQUIRE(s.bert.has_value());
    CHECK(*s.bert > 0.0);
  }
  SUBCASE("absent truth rewards absent extraction") {
    rec.category = CategoryId::kPhoneNumber;
    rec.extracted = std::nullopt;
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    CHECK(*s.accuracy == 1.0);
    CHECK(*s.bert == 1.0);
  }
  SUBCASE("absent truth penalizes any extracted value") {
    rec.category = CategoryId::kPhoneNumber;
    rec.extracted = "555-123-4567";
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    CHECK(*s.accuracy == 0.0);
    CHECK(*s.bert == 0.0);
  }
  SUBCASE("absence phrases count as absent extractions") {
    rec.category = CategoryId::kPhoneNumber;
    rec.extracted = "The phone number is not available.";
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    CHECK(*s.accuracy == 1.0);
    CHECK(*s.bert == 1.0);
  }
  SUBCASE("present truth penalizes absent extraction") {
    rec.category = CategoryId::kEmailAddress;
    rec.extracted = std::nullopt;
    metrics::ScoreRecord s = metrics::score_record(rec, truth, provider);
    CHECK(*s.accuracy == 0.0);
    CHECK(*s.bert == 0.0);

    rec.category = CategoryId::kWorkExperience;
    metrics::ScoreRecord w = metrics::score_record(rec, truth, provider);
    CHECK(*w.rouge1 == 0.0);
    CHECK(*w.bert == 0.0);
  }
}

TEST_CASE("score records round trip through json lines") {
  metrics::ScoreRecord score;
  score.profile_id = "p9";
  score.category = CategoryId::kWorkExperience;
  score.extractor = "llm:mock-compliant";
  score.defense = "inject:ci+id";
  score.rouge1 = 0.25;
  score.bert = 0.5;

  std::string line = metrics::score_to_json(score);
  CHECK(line.find("\"work_experience\"") != npos);
  metrics::ScoreRecord back = metrics::score_from_json(line);
  CHECK(back.profile_id == "p9");
  CHECK(back.category == CategoryId::kWorkExperience);
  CHECK(back.extractor == "llm:mock-compliant");
  CHECK(back.defense == "inject:ci+id");
  CHECK_FALSE(back.accuracy.has_value());
  CHECK(back.rouge1 == 0.25);
  CHECK(back.bert == 0.5);

  SUBCASE("zero scores stay engaged through the round trip") {
    metrics::ScoreRecord zero;
    zero.profile_id = "p0";
    zero.category = CategoryId::kEmailAddress;
    zero.extractor = "regex";
    zero.accuracy = 0.0;
    zero.bert = 0.0;
    metrics::ScoreRecord again =
        metrics::score_from_json(metrics::score_to_json(zero));
    REQUIRE(again.accuracy.has_value());
    CHECK(*again.accuracy == 0.0);
    REQUIRE(again.bert.has_value());
    CHECK(*again.bert == 0.0);
    CHECK_FALSE(again.defense.has_value());
    CHECK(metrics::score_to_json(zero).find("defense") == npos);
  }
  SUBCASE("unknown categories are rejected") {
    CHECK_THROWS_AS(
        metrics::score_from_json(
            R"({"profile_id":"x","category":"nope","extractor":"r"})"),
        std::invalid_argument);
    CHECK_THROWS(metrics::score_from_json("not json"));
  }
}
