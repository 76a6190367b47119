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

#ifndef PIE_DEFENSES_HPP_
#define PIE_DEFENSES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pie/core.hpp"

// Countermeasures applied to HTML profiles before they are exposed to an
// extractor. All transforms parse the document, edit the DOM and re-serialize;
// they never touch the ground-truth labels.
namespace pie::defense {

// Which separators of an email address get spelled out.
enum class SymbolMode { kAt, kDot, kAtDot };

// Prompt-injection payload composition: context-ignoring clause, injected
// fake data, or both.
enum class InjectStrategy { kContextIgnoring, kInjectedData, kCombined };

std::string_view symbol_mode_key(SymbolMode mode);
std::string_view inject_strategy_key(InjectStrategy strategy);

// Class name carried by the invisible injection span; visible-text filtering
// treats it as hidden regardless of styling.
inline constexpr std::string_view kInvisibleSpanClass = "pie-invisible";

// Plausible but fabricated replacement values, guaranteed distinct from the
// profile's true labels under metric canonicalization.
struct FakeIdentity {
  std::map<CategoryId, std::string> values;

  const std::string& value(CategoryId category) const {
    return values.at(category);
  }
};

// Deterministic fake for one category, guaranteed distinct from the profile's
// true label under metric canonicalization.
std::string fake_value(CategoryId category, std::uint64_t seed,
                       const GroundTruthRecord& truth);

FakeIdentity make_fake_identity(std::uint64_t seed,
                                const GroundTruthRecord& truth);

// The injected instruction text for the given protected categories.
// kContextIgnoring yields only the ignore clause; kInjectedData yields one
// fake-data sentence per category; kCombined concatenates both.
std::string craft_injected_prompt(const std::vector<CategoryId>& categories,
                                  InjectStrategy strategy,
                                  const FakeIdentity& fakes);

// --- Document transforms -------------------------------------------------------

// Rewrites every email address in text content, spelling out '@' as " AT "
// and/or the dots of the address as " DOT ".
ProfileDocument symbol_replace(const ProfileDocument& doc, SymbolMode mode);

// Replaces name-derived parts of the email's local part with placeholder
// keywords, e.g. albert.einstein@gmail.com -> <first_name>.<last_name>@gmail.com.
ProfileDocument keyword_replace(const ProfileDocument& doc,
                                const GroundTruthRecord& truth);

// Moves the first email address out of text content into a mailto: hyperlink
// whose anchor text is "Contact me". No-op when the profile has no email in
// its text.
ProfileDocument hyperlink_email(const ProfileDocument& doc);

// Replaces each protected label (every line of multi-line labels) with an
// inline data-URI PNG rendering of the same text; alt text stays empty.
// Occurrences inside attribute values and head-only text are scrubbed.
ProfileDocument text_to_image(const ProfileDocument& doc,
                              const GroundTruthRecord& truth,
                              const std::vector<CategoryId>& categories);

// Inserts one invisible span (text color equal to the effective background,
// user-select:none, aria-hidden) carrying the injected prompt right after the
// block that holds the first protected field. Visible text is unchanged.
ProfileDocument inject_prompt(const ProfileDocument& doc,
                              const GroundTruthRecord& truth,
                              const std::vector<CategoryId>& categories,
                              InjectStrategy strategy, std::uint64_t seed);

// --- Uniform dispatch ----------------------------------------------------------

struct DefenseSpec {
  enum class Kind {
    kNone,
    kSymbol,
    kKeyword,
    kHyperlink,
    kTextToImage,
    kPromptInject,
  };

  Kind kind = Kind::kNone;
  SymbolMode symbol_mode = SymbolMode::kAtDot;
  InjectStrategy strategy = InjectStrategy::kCombined;
  std::vector<CategoryId> categories;  // empty means all eight
  std::uint64_t seed = 0;

  // Canonical string form, also used to tag extraction records:
  //   none | symbol:at | symbol:dot | symbol:at+dot | keyword | hyperlink |
  //   text2image[:cat,...] | inject:ci|id|ci+id[:cat,...]
  std::string tag() const;

  // Parses the tag grammar above; throws std::invalid_argument on anything
  // unrecognized.
  static DefenseSpec parse(std::string_view text);
};

// Applies the configured defense. kNone returns the document unchanged.
ProfileDocument apply_defense(const ProfileDocument& doc,
                              const GroundTruthRecord& truth,
                              const DefenseSpec& spec);

}  // namespace pie::defense

#endif  // PIE_DEFENSES_HPP_
