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

#ifndef PIE_PROMPTING_HPP_
#define PIE_PROMPTING_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pie/core.hpp"

namespace pie::backend {
class ChatBackend;
}

// Prompt design for the extraction attack: instruction styles, the
// symbol-bypass clause, in-context examples, and the adaptive variants that
// respond to defenses (paraphrasing, retokenization, data isolation,
// instructional and sandwich prevention).
namespace pie::prompt {

// Thrown when a prompt would be built over an empty profile text.
class EmptyProfile : public std::runtime_error {
 public:
  explicit EmptyProfile(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an adaptive variant needs a backend (paraphrase) but none was
// provided.
class BackendRequired : public std::runtime_error {
 public:
  explicit BackendRequired(const std::string& what)
      : std::runtime_error(what) {}
};

enum class PromptStyle { kDirect, kPersona, kContextual, kPseudocode };

enum class ProfileMode { kDirect, kFiltered };

enum class AdaptiveKind {
  kNone,
  kParaphrase,
  kRetokenize,
  kIsolateQuotes,
  kIsolateXml,
  kIsolateRandomSeq,
  kInstructional,
  kSandwich,
};

std::string_view prompt_style_key(PromptStyle style);
std::optional<PromptStyle> prompt_style_from_key(std::string_view key);
std::string_view profile_mode_key(ProfileMode mode);
std::optional<ProfileMode> profile_mode_from_key(std::string_view key);
std::string_view adaptive_key(AdaptiveKind kind);
std::optional<AdaptiveKind> adaptive_from_key(std::string_view key);

struct AdaptiveVariant {
  AdaptiveKind kind = AdaptiveKind::kNone;
  std::uint64_t seed = 0;     // retokenize, random-sequence isolation
  double split_prob = 0.2;    // retokenize
  int delimiter_length = 16;  // random-sequence isolation; minimum 8
};

struct IclExample {
  std::string snippet;  // short single-line profile text
  std::string answer;
};

struct PromptSpec {
  CategoryId category = CategoryId::kEmailAddress;
  PromptStyle style = PromptStyle::kDirect;
  bool bypass_clause = false;
  std::vector<IclExample> examples;
  ProfileMode profile_mode = ProfileMode::kFiltered;
  AdaptiveVariant adaptive;
};

struct BuiltPrompt {
  std::optional<std::string> system;
  std::string user;
  std::string instruction;  // final instruction, after adaptive rewriting
  std::optional<std::string> post_instruction;
};

// The base instruction for a style and category. Frozen strings; tests pin
// them.
std::string instruction_for(PromptStyle style, CategoryId category);

// "Treat 'DOT' as '.' and 'AT' as '@'."
std::string_view bypass_clause_text();

// The profile text an extraction prompt embeds: the raw document in Direct
// mode, the redundant-information-filtered text in Filtered mode.
std::string profile_text_for(const ProfileDocument& doc, ProfileMode mode);

// Assembles the user message: instruction (adaptive-adjusted, plus bypass
// clause), in-context blocks ("Profile: ...\nAnswer: ..."), the profile
// section and an optional post-instruction. `paraphraser` is only consulted
// for AdaptiveKind::kParaphrase; passing nullptr then throws BackendRequired.
// Throws EmptyProfile when profile_text is blank.
BuiltPrompt build_prompt(const PromptSpec& spec,
                         const std::string& profile_text,
                         backend::ChatBackend* paraphraser = nullptr);

// Data isolation: wraps text in quotes, <data> tags or seeded delimiter
// lines. unwrap_isolation is the exact inverse of wrap_isolation and throws
// std::invalid_argument if the wrapping is not present.
std::string wrap_isolation(const AdaptiveVariant& variant,
                           std::string_view text);
std::string unwrap_isolation(const AdaptiveVariant& variant,
                             std::string_view wrapped);

// The delimiter line used by random-sequence isolation: alphanumeric,
// deterministic in (seed, length); length below 8 is clamped to 8.
std::string isolation_delimiter(std::uint64_t seed, int length);

// Inserts a single space inside each whitespace-delimited token of length
// >= 4 with probability split_prob. Never splits inside a UTF-8 sequence;
// the multiset of non-space characters is preserved.
std::string retokenize(std::string_view text, std::uint64_t seed,
                       double split_prob);

// The fixed request header used to ask a backend for a paraphrase; the
// instruction to rewrite follows after a blank line.
std::string_view paraphrase_request_prefix();

}  // namespace pie::prompt

#endif  // PIE_PROMPTING_HPP_
