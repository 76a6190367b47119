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

#ifndef PIE_GENERATOR_HPP_
#define PIE_GENERATOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pie/core.hpp"

// Deterministic synthetic profile generator. Profiles are seeded HTML pages
// in one of five presentation styles; the identity values (and therefore the
// ground-truth labels) depend only on the seed, never on the style, so the
// same person can be rendered in different layouts.
namespace pie::gen {

enum class Style { kNeat, kGeeky, kColorful, kFancy, kFormal };
enum class Complexity { kLow, kMedium, kHigh };

inline constexpr std::array<Style, 5> kAllStyles = {
    Style::kNeat, Style::kGeeky, Style::kColorful, Style::kFancy,
    Style::kFormal};

std::string_view style_key(Style style);
std::optional<Style> style_from_key(std::string_view key);
std::string_view complexity_key(Complexity complexity);
std::optional<Complexity> complexity_from_key(std::string_view key);

// The section heading a given style uses for a category. Profiles always
// place a category's value directly under this heading, which is what makes
// heading-driven extraction possible at all.
std::string_view heading_for(Style style, CategoryId category);

// Every heading of every style, in a fixed order. Consumers that need to
// know where a section ends (for multi-line values) match against this list.
const std::vector<std::string>& all_section_headings();

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int count = 1;
  std::vector<Style> styles;  // empty means all five
  Complexity complexity = Complexity::kMedium;
  double absence_rate = 0.0;  // applied to every category except Name
  std::string dataset_name = "synthetic";
};

// Generates a single profile. Byte-identical output for identical inputs.
// Labels are NFC-normalized, trimmed and verbatim present in the document
// text. Multi-entry labels (work, education) join their entries with '\n'.
std::pair<ProfileDocument, GroundTruthRecord> generate_profile(
    std::uint64_t seed, Style style, Complexity complexity,
    double absence_rate);

// Generates `count` profiles with ids syn-0000, syn-0001, ... Styles are
// drawn from config.styles with a seed-derived stream. Present email labels
// are unique across the dataset. Deterministic for identical configs.
DatasetManifest generate_dataset(const GeneratorConfig& config);

}  // namespace pie::gen

#endif  // PIE_GENERATOR_HPP_
