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

#ifndef PIE_PROCESSING_HPP_
#define PIE_PROCESSING_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pie/core.hpp"
#include "pie/html.hpp"

// Profile processing: turning raw documents into the text that is handed to
// an extractor. Two views exist deliberately. filter_redundant is the
// attacker's view: markup noise removed, every piece of text kept, hidden or
// not. visible_text is the human reader's view: only what a rendered page
// would actually show.
namespace pie::processing {

// Result of redundant-information filtering. `text` is the canonical text:
// one line per block-level run, runs of whitespace collapsed, empty lines
// dropped. `blocks` holds the same lines individually.
struct FilteredText {
  std::string text;
  std::vector<std::string> blocks;
};

// Removes markup, script/style bodies, head content and comments. Keeps the
// text of all body text nodes (including invisible ones) and image alt text.
// Non-HTML documents get the same whitespace canonicalization only.
FilteredText filter_redundant(const ProfileDocument& doc);

// Like filter_redundant, but additionally prunes content a rendered page
// would not show: display:none, visibility:hidden, text whose inline color
// matches the effective background color (nearest ancestor with an inline
// background-color, default #FFFFFF), aria-hidden="true", and elements
// carrying the toolkit's invisibility marker class.
std::string visible_text(const ProfileDocument& doc);

// Converts an HTML profile to Markdown: headings to #-prefixes, list items
// to "-"/"1." lines, anchors to [text](href), emphasis to */**. Hidden
// content keeps its text; hiddenness does not survive the conversion.
ProfileDocument html_to_markdown(const ProfileDocument& doc);

// Maps a model/extractor answer to Absent when it is one of the known
// absence markers ("none", "n/a", ...) or matches the absence phrase
// pattern ("The email address is unknown."). Otherwise returns the trimmed
// original text. Empty input is Absent.
Extraction normalize_absence(std::string_view answer);

// The exact marker strings normalize_absence recognizes (lowercase).
const std::vector<std::string>& absence_markers();

// Canonical text of a parsed HTML subtree: the same whitespace and block
// rules filter_redundant applies, without hidden-content pruning.
std::string subtree_text(const html::Node& node);

// Parses an inline style attribute into (property, value) pairs.
// Property names are lowercased and trimmed; order is preserved.
std::vector<std::pair<std::string, std::string>> parse_style(
    std::string_view style);

// Normalizes a CSS color to uppercase #RRGGBB. Accepts #RGB, #RRGGBB,
// rgb(r,g,b) and a small set of named colors. Unknown colors yield nullopt.
std::optional<std::string> normalize_color(std::string_view color);

// The class name the toolkit stamps on injected invisible spans.
inline constexpr std::string_view kInvisibleMarkerClass = "pie-invisible";

}  // namespace pie::processing

#endif  // PIE_PROCESSING_HPP_
