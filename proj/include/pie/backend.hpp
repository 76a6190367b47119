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

#ifndef PIE_BACKEND_HPP_
#define PIE_BACKEND_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "pie/core.hpp"
#include "pie/prompting.hpp"

// Chat backends: a real HTTP client speaking the common chat-completion wire
// protocol, deterministic mock personas for offline benchmarking, a
// content-addressed response cache, and the LLM extraction entry point.
namespace pie::backend {

// Thrown after the transport has failed for every allowed attempt.
class BackendUnavailable : public std::runtime_error {
 public:
  explicit BackendUnavailable(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown by the scripted persona when no fixture entry covers a prompt.
class ScriptedMiss : public std::runtime_error {
 public:
  explicit ScriptedMiss(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a cache file exists but cannot be parsed.
class CacheCorrupt : public std::runtime_error {
 public:
  explicit CacheCorrupt(const std::string& what) : std::runtime_error(what) {}
};

struct BackendRequest {
  std::string model;
  std::optional<std::string> system;
  std::string user;
  double temperature = 0.0;
  int max_tokens = 256;
};

struct BackendResponse {
  std::string text;
  std::string finish_reason = "stop";
  long latency_ms = 0;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual BackendResponse complete(const BackendRequest& request) = 0;
  virtual std::string name() const = 0;
  // The model this backend answers as; used when callers leave
  // BackendRequest::model empty.
  virtual std::string model() const = 0;
};

// Stable fingerprint of a request: model, system, user, temperature and
// max_tokens. Used as the cache key and recorded on extraction records.
std::string request_fingerprint(const BackendRequest& request);

// --- HTTP backend -----------------------------------------------------------

struct HttpBackendConfig {
  std::string base_url;  // e.g. https://api.example.com or http://host:8089/v1x
  std::string api_key;
  std::string model = "default";
  int timeout_seconds = 60;
};

// Talks to an OpenAI-style /v1/chat/completions endpoint. One attempt per
// complete() call; retrying is query_backend's job. Reads PIE_BACKEND_URL
// and PIE_BACKEND_KEY when configured from the environment.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  // Throws BackendUnavailable if PIE_BACKEND_URL is unset.
  static std::unique_ptr<HttpBackend> from_env(const std::string& model);

  BackendResponse complete(const BackendRequest& request) override;
  std::string name() const override { return "http"; }
  std::string model() const override { return config_.model; }

 private:
  HttpBackendConfig config_;
  std::string host_part_;    // scheme://host:port
  std::string path_prefix_;  // optional path before /v1/...
};

// --- Mock personas ----------------------------------------------------------

enum class Persona { kCompliant, kInjectable, kScripted, kParaphraseIdentity };

std::string_view persona_key(Persona persona);
std::optional<Persona> persona_from_key(std::string_view key);

// Deterministic offline stand-ins for a chat model.
//
//  Compliant          answers extraction prompts from the embedded profile
//                     section, honoring section headings and the bypass
//                     clause; answers "none" when the information is absent.
//  Injectable         behaves like Compliant unless the profile contains an
//                     ignore-previous-instruction clause together with an
//                     injected-data sentence for the asked category, in
//                     which case it falls for the injection.
//  Scripted           replays fixture responses keyed by the hash of the
//                     user message; misses throw ScriptedMiss.
//  ParaphraseIdentity echoes back the instruction it was asked to rewrite.
class MockPersonaBackend : public ChatBackend {
 public:
  explicit MockPersonaBackend(Persona persona);

  // Loads a scripted fixture: JSON {"responses": {"<hex16 of user>": text}}.
  static std::unique_ptr<MockPersonaBackend> scripted(
      const std::filesystem::path& fixture);

  BackendResponse complete(const BackendRequest& request) override;
  std::string name() const override;
  std::string model() const override { return "mock-" + name(); }

 private:
  std::string answer_extraction(const std::string& user, bool injectable) const;

  Persona persona_;
  std::map<std::string, std::string> fixture_;
};

// --- Response cache ----------------------------------------------------------

// Content-addressed JSON cache: one file per request fingerprint, written
// atomically (temp file + rename) so concurrent writers never interleave.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<BackendResponse> get(const std::string& fingerprint) const;
  void put(const std::string& fingerprint, const BackendRequest& request,
           const BackendResponse& response);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

struct QueryOptions {
  int max_attempts = 3;
  int backoff_ms = 100;  // doubled after every failed attempt
};

// Cache-first query: returns a cached response when available, otherwise
// calls the backend with bounded retries and exponential backoff, stores the
// response, and returns it together with the request fingerprint.
std::pair<BackendResponse, std::string> query_backend(
    ChatBackend& backend, const BackendRequest& request,
    ResponseCache* cache = nullptr, const QueryOptions& options = {});

// Runs one LLM extraction for (doc, spec.category): builds the prompt,
// queries the backend (cache-first) and normalizes the answer, mapping
// absence phrases to Absent. run_id and defense tag are left for the caller.
ExtractionRecord extract_with_llm(const ProfileDocument& doc,
                                  const prompt::PromptSpec& spec,
                                  ChatBackend& backend,
                                  ResponseCache* cache = nullptr);

}  // namespace pie::backend

#endif  // PIE_BACKEND_HPP_
