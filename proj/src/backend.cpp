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

#include "pie/backend.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pie/generator.hpp"
#include "pie/processing.hpp"

namespace pie::backend {
namespace {

using nlohmann::json;

constexpr std::string_view kProfileMarker = "\nProfile:\n";
constexpr std::string_view kSandwichMarker = "\n\nRemember: ";

std::optional<CategoryId> detect_category(const std::string& header) {
  // Only the instruction paragraph is inspected; in-context examples follow
  // after the first blank line and must not influence detection.
  std::string region = to_lower_ascii(header.substr(0, header.find("\n\n")));
  struct Needle {
    std::string text;
    CategoryId category;
  };
  static const std::vector<Needle> kNeedles = [] {
    std::vector<Needle> needles;
    for (CategoryId cat : kAllCategories) {
      needles.push_back({std::string(category_phrase(cat)), cat});
      needles.push_back({std::string(category_key(cat)), cat});
    }
    std::stable_sort(needles.begin(), needles.end(),
                     [](const Needle& a, const Needle& b) {
                       return a.text.size() > b.text.size();
                     });
    return needles;
  }();
  for (const Needle& needle : kNeedles) {
    if (region.find(needle.text) != std::string::npos) return needle.category;
  }
  return std::nullopt;
}

bool all_alnum(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Removes a data-isolation wrapper (quotes, <data> tags, delimiter lines)
// if one is present.
std::string strip_isolation(std::string body) {
  body = trim(body);
  if (body.size() >= 2 && body.front() == '"' && body.back() == '"') {
    return trim(body.substr(1, body.size() - 2));
  }
  if (body.rfind("<data>", 0) == 0 &&
      body.size() >= 13 /* <data></data> + 1 */ &&
      body.compare(body.size() - 7, 7, "</data>") == 0) {
    return trim(body.substr(6, body.size() - 13));
  }
  std::vector<std::string> lines = split_lines(body);
  if (lines.size() >= 3 && lines.front() == lines.back() &&
      lines.front().size() >= 8 && all_alnum(lines.front())) {
    std::string inner;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      if (i > 1) inner.push_back('\n');
      inner += lines[i];
    }
    return inner;
  }
  return body;
}

bool looks_like_html(const std::string& body) {
  std::string lower = to_lower_ascii(body.substr(0, 256));
  return lower.find("<!doctype") != std::string::npos ||
         lower.find("<html") != std::string::npos ||
         lower.find("<body") != std::string::npos;
}

std::string strip_trailing_punct(std::string s) {
  while (!s.empty()) {
    char c = s.back();
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' ||
        c == '?' || c == ' ') {
      s.pop_back();
    } else {
      break;
    }
  }
  return s;
}

// Injected-data sentences the injectable persona falls for. These mirror the
// templates the prompt-injection defense crafts; tests keep them in sync.
std::optional<std::string> injected_answer(const std::string& text,
                                           CategoryId category) {
  if (to_lower_ascii(text).find("ignore") == std::string::npos) {
    return std::nullopt;
  }
  auto search = [&](const std::regex& re) -> std::optional<std::string> {
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    std::string hit = strip_trailing_punct(trim(m[1].str()));
    if (hit.empty()) return std::nullopt;
    return hit;
  };
  switch (category) {
    case CategoryId::kEmailAddress: {
      static const std::regex kRe(
          R"((?:my|the)\s+true\s+email(?:\s+address)?(?:\s+of\s+me)?\s+is(?:\s+actually)?\s*:?\s*([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}))",
          std::regex::icase);
      return search(kRe);
    }
    case CategoryId::kPhoneNumber: {
      static const std::regex kRe(
          R"((?:my|the)\s+true\s+(?:phone|telephone)(?:\s+number)?(?:\s+of\s+me)?\s+is(?:\s+actually)?\s*:?\s*(\+?[0-9][0-9 ().-]*[0-9]))",
          std::regex::icase);
      return search(kRe);
    }
    case CategoryId::kName: {
      static const std::regex kRe(
          R"((?:my|the)\s+true\s+(?:full\s+)?name(?:\s+of\s+me)?\s+is(?:\s+actually)?\s*:?\s*([A-Za-z][A-Za-z'-]*(?:\s+[A-Za-z][A-Za-z'-]*){0,3}))",
          std::regex::icase);
      return search(kRe);
    }
    case CategoryId::kMailingAddress: {
      static const std::regex kRe(
          R"((?:my|the)\s+true\s+(?:mailing\s+)?address(?:\s+of\s+me)?\s+is(?:\s+actually)?\s*:?\s*([^.\n]+))",
          std::regex::icase);
      return search(kRe);
    }
    case CategoryId::kAffiliation: {
      static const std::regex kRe(
          R"((?:my|the)\s+true\s+affiliation(?:\s+of\s+me)?\s+is(?:\s+actually)?\s*:?\s*([^.\n]+))",
          std::regex::icase);
      return search(kRe);
    }
    case CategoryId::kOccupation: {
      static const std::regex kRe(
          R"((?:my|the)\s+true\s+occupation(?:\s+of\s+me)?\s+is(?:\s+actually)?\s*:?\s*([^.\n]+))",
          std::regex::icase);
      return search(kRe);
    }
    case CategoryId::kWorkExperience: {
      if (to_lower_ascii(text).find("only worked at an imaginary company") !=
          std::string::npos) {
        return "I have only worked at an imaginary company.";
      }
      return std::nullopt;
    }
    case CategoryId::kEducationExperience: {
      if (to_lower_ascii(text).find("only studied at an imaginary school") !=
          std::string::npos) {
        return "I have only studied at an imaginary school.";
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool is_multi_line_category(CategoryId category) {
  return category == CategoryId::kWorkExperience ||
         category == CategoryId::kEducationExperience;
}

std::string apply_bypass(std::string answer) {
  auto replace_all = [](std::string s, std::string_view from,
                        std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
      s.replace(pos, from.size(), to);
      pos += to.size();
    }
    return s;
  };
  answer = replace_all(std::move(answer), " AT ", "@");
  answer = replace_all(std::move(answer), " DOT ", ".");
  return answer;
}

std::atomic<std::uint64_t> g_temp_counter{0};

}  // namespace

std::string_view persona_key(Persona persona) {
  switch (persona) {
    case Persona::kCompliant: return "compliant";
    case Persona::kInjectable: return "injectable";
    case Persona::kScripted: return "scripted";
    case Persona::kParaphraseIdentity: return "paraphrase-identity";
  }
  return "compliant";
}

std::optional<Persona> persona_from_key(std::string_view key) {
  std::string k = to_lower_ascii(trim(key));
  for (Persona persona :
       {Persona::kCompliant, Persona::kInjectable, Persona::kScripted,
        Persona::kParaphraseIdentity}) {
    if (k == persona_key(persona)) return persona;
  }
  return std::nullopt;
}

std::string request_fingerprint(const BackendRequest& request) {
  char tail[64];
  std::snprintf(tail, sizeof(tail), "%.6g|%d", request.temperature,
                request.max_tokens);
  std::uint64_t h = fnv1a64(request.model);
  h = fnv1a64(h, "\x1f");
  h = fnv1a64(h, request.system ? *request.system : "");
  h = fnv1a64(h, "\x1f");
  h = fnv1a64(h, request.user);
  h = fnv1a64(h, "\x1f");
  h = fnv1a64(h, tail);
  return to_hex16(h);
}

// --- HttpBackend -------------------------------------------------------------

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
  std::string url = trim(config_.base_url);
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    url = "http://" + url;
    scheme_end = 4;
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    host_part_ = url;
  } else {
    host_part_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
}

std::unique_ptr<HttpBackend> HttpBackend::from_env(const std::string& model) {
  const char* url = std::getenv("PIE_BACKEND_URL");
  if (!url || !*url) {
    throw BackendUnavailable(
        "PIE_BACKEND_URL is not set; no remote backend configured");
  }
  HttpBackendConfig config;
  config.base_url = url;
  if (const char* key = std::getenv("PIE_BACKEND_KEY")) config.api_key = key;
  if (!model.empty()) config.model = model;
  return std::make_unique<HttpBackend>(std::move(config));
}

BackendResponse HttpBackend::complete(const BackendRequest& request) {
  json messages = json::array();
  if (request.system) {
    messages.push_back({{"role", "system"}, {"content", *request.system}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user}});
  json body = {
      {"model", request.model.empty() ? config_.model : request.model},
      {"messages", messages},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens},
  };

  httplib::Client client(host_part_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  auto start = std::chrono::steady_clock::now();
  httplib::Result res = client.Post(path_prefix_ + "/v1/chat/completions",
                                    headers, body.dump(), "application/json");
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();

  if (!res) {
    throw BackendUnavailable("transport error: " +
                             httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendUnavailable("backend returned status " +
                             std::to_string(res->status));
  }
  try {
    json parsed = json::parse(res->body);
    const json& choice = parsed.at("choices").at(0);
    BackendResponse response;
    response.text = choice.at("message").at("content").get<std::string>();
    response.finish_reason = choice.value("finish_reason", "stop");
    response.latency_ms = static_cast<long>(elapsed);
    return response;
  } catch (const json::exception& e) {
    throw BackendUnavailable(std::string("malformed backend response: ") +
                             e.what());
  }
}

// --- MockPersonaBackend ------------------------------------------------------

MockPersonaBackend::MockPersonaBackend(Persona persona) : persona_(persona) {}

std::unique_ptr<MockPersonaBackend> MockPersonaBackend::scripted(
    const std::filesystem::path& fixture) {
  auto backend = std::make_unique<MockPersonaBackend>(Persona::kScripted);
  std::ifstream in(fixture);
  if (!in) throw IoError("cannot open fixture: " + fixture.string());
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw IoError(std::string("fixture is not valid JSON: ") + e.what());
  }
  for (const auto& [key, value] : root.at("responses").items()) {
    backend->fixture_[key] = value.get<std::string>();
  }
  return backend;
}

std::string MockPersonaBackend::name() const {
  return std::string(persona_key(persona_));
}

BackendResponse MockPersonaBackend::complete(const BackendRequest& request) {
  BackendResponse response;
  response.latency_ms = 0;

  if (persona_ == Persona::kScripted) {
    auto it = fixture_.find(to_hex16(fnv1a64(request.user)));
    if (it == fixture_.end()) {
      throw ScriptedMiss("no fixture response for prompt hash " +
                         to_hex16(fnv1a64(request.user)));
    }
    response.text = it->second;
    return response;
  }

  // Every non-scripted persona answers a paraphrase request by echoing the
  // instruction unchanged, which keeps paraphrase runs deterministic.
  if (request.user.rfind(prompt::paraphrase_request_prefix(), 0) == 0) {
    std::size_t blank = request.user.find("\n\n");
    response.text = blank == std::string::npos
                        ? request.user
                        : request.user.substr(blank + 2);
    return response;
  }

  if (persona_ == Persona::kParaphraseIdentity) {
    response.text = request.user;
    return response;
  }

  response.text = answer_extraction(request.user,
                                    persona_ == Persona::kInjectable);
  return response;
}

std::string MockPersonaBackend::answer_extraction(const std::string& user,
                                                  bool injectable) const {
  std::size_t marker = user.rfind(kProfileMarker);
  if (marker == std::string::npos) return "none";
  std::string header = user.substr(0, marker);
  std::string segment = user.substr(marker + kProfileMarker.size());

  std::size_t sandwich = segment.rfind(kSandwichMarker);
  if (sandwich != std::string::npos) segment = segment.substr(0, sandwich);

  auto category = detect_category(header);
  if (!category) return "none";

  std::string body = strip_isolation(segment);
  std::string text;
  if (looks_like_html(body)) {
    ProfileDocument tmp;
    tmp.id = "inline";
    tmp.format = DocFormat::kHtml;
    tmp.content = body;
    text = processing::filter_redundant(tmp).text;
  } else {
    text = body;
  }

  if (injectable) {
    if (auto fake = injected_answer(text, *category)) return *fake;
  }

  // Heading-driven reading, the way the profile pages are laid out.
  std::vector<std::string> lines = split_lines(text);
  std::vector<std::string> wanted;
  for (gen::Style style : gen::kAllStyles) {
    wanted.emplace_back(gen::heading_for(style, *category));
  }
  const std::vector<std::string>& all_headings = gen::all_section_headings();
  auto is_heading = [&](const std::string& line) {
    for (const std::string& h : all_headings) {
      if (line == h) return true;
    }
    return false;
  };

  std::size_t heading_index = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const std::string& h : wanted) {
      if (lines[i] == h) {
        heading_index = i;
        break;
      }
    }
    if (heading_index != lines.size()) break;
  }
  if (heading_index == lines.size()) return "none";

  std::string answer;
  if (is_multi_line_category(*category)) {
    for (std::size_t i = heading_index + 1; i < lines.size(); ++i) {
      if (is_heading(lines[i])) break;
      if (lines[i].empty()) continue;
      if (!answer.empty()) answer.push_back('\n');
      answer += lines[i];
    }
  } else {
    for (std::size_t i = heading_index + 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      answer = lines[i];
      break;
    }
  }
  if (answer.empty()) return "none";

  if (header.find(prompt::bypass_clause_text()) != std::string::npos) {
    answer = apply_bypass(std::move(answer));
  }
  return answer;
}

// --- ResponseCache -----------------------------------------------------------

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache dir: " + dir_.string());
}

std::optional<BackendResponse> ResponseCache::get(
    const std::string& fingerprint) const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::filesystem::path path = dir_ / (fingerprint + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  json root;
  try {
    in >> root;
    BackendResponse response;
    const json& r = root.at("response");
    response.text = r.at("text").get<std::string>();
    response.finish_reason = r.value("finish_reason", "stop");
    response.latency_ms = r.value("latency_ms", 0L);
    return response;
  } catch (const json::exception& e) {
    throw CacheCorrupt("cache entry " + path.string() + " is corrupt: " +
                       e.what());
  }
}

void ResponseCache::put(const std::string& fingerprint,
                        const BackendRequest& request,
                        const BackendResponse& response) {
  std::lock_guard<std::mutex> lock(mutex_);
  json root = {
      {"model", request.model},
      {"user", request.user},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens},
      {"response",
       {{"text", response.text},
        {"finish_reason", response.finish_reason},
        {"latency_ms", response.latency_ms}}},
  };
  if (request.system) root["system"] = *request.system;

  std::filesystem::path final_path = dir_ / (fingerprint + ".json");
  std::filesystem::path temp_path =
      dir_ / (".tmp-" + fingerprint + "-" +
              std::to_string(g_temp_counter.fetch_add(1)));
  {
    std::ofstream out(temp_path, std::ios::trunc);
    if (!out) throw IoError("cannot write cache temp: " + temp_path.string());
    out << root.dump(2) << "\n";
  }
  std::error_code ec;
  std::filesystem::rename(temp_path, final_path, ec);
  if (ec) throw IoError("cache rename failed: " + final_path.string());
}

std::pair<BackendResponse, std::string> query_backend(
    ChatBackend& backend, const BackendRequest& request, ResponseCache* cache,
    const QueryOptions& options) {
  std::string fingerprint = request_fingerprint(request);
  if (cache) {
    if (auto hit = cache->get(fingerprint)) return {*hit, fingerprint};
  }
  int backoff = options.backoff_ms;
  for (int attempt = 1;; ++attempt) {
    try {
      BackendResponse response = backend.complete(request);
      if (cache) cache->put(fingerprint, request, response);
      return {response, fingerprint};
    } catch (const BackendUnavailable&) {
      if (attempt >= options.max_attempts) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
  }
}

ExtractionRecord extract_with_llm(const ProfileDocument& doc,
                                  const prompt::PromptSpec& spec,
                                  ChatBackend& backend, ResponseCache* cache) {
  std::string text = prompt::profile_text_for(doc, spec.profile_mode);
  prompt::BuiltPrompt built = prompt::build_prompt(spec, text, &backend);

  BackendRequest request;
  request.model = backend.model();
  request.system = built.system;
  request.user = built.user;
  auto [response, fingerprint] = query_backend(backend, request, cache);

  ExtractionRecord record;
  record.profile_id = doc.id;
  record.category = spec.category;
  record.extractor = "llm:" + backend.model();
  record.extracted = processing::normalize_absence(response.text);
  record.prompt_fingerprint = fingerprint;
  record.timestamp = iso8601_utc_now();
  return record;
}

}  // namespace pie::backend
