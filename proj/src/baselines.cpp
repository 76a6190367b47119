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

#include "pie/baselines.hpp"

#include <cctype>
#include <regex>

#include "pie/html.hpp"
#include "pie/processing.hpp"

namespace pie::baselines {
namespace {

using html::Node;

// Frozen surface patterns; see docs/extraction-rules.md.
const std::regex& email_pattern() {
  static const std::regex kRe(
      R"([a-zA-Z0-9._%+-]+@[a-zA-Z0-9.-]+\.[a-zA-Z]{2,})");
  return kRe;
}

const std::regex& phone_pattern() {
  static const std::regex kRe(
      R"((\+?\d{1,2}[ .-])?(\(\d{3}\)[ .-]?|\d{3}[ .-])\d{3}[ .-]\d{4})");
  return kRe;
}

const std::regex& address_pattern() {
  static const std::regex kRe(
      R"(\d{1,5}\s+[A-Z][A-Za-z]*(?:\s+[A-Z][A-Za-z]*)*\s+(?:Street|Avenue|Road|Lane|Drive|Boulevard|Court)\b(?:,[^\n]*)?)");
  return kRe;
}

const std::regex& honorific_name_pattern() {
  static const std::regex kRe(
      R"((?:Mr|Mrs|Ms|Dr|Prof)\.\s+([A-Z][A-Za-z'-]+(?:\s+[A-Z][A-Za-z'-]+){0,2}))");
  return kRe;
}

const std::regex& org_pattern() {
  static const std::regex kRe(
      R"((?:[A-Z][A-Za-z&'-]*\s+){1,4}(?:University|Institute|Laboratories|Labs|College|Technologies|Systems|Analytics|Foundation|Hospital|Corporation|Company|Corp\.?|Inc\.?))");
  return kRe;
}

const std::regex& year_range_pattern() {
  static const std::regex kRe(R"(\(\d{4}\s*-\s*\d{4}\))");
  return kRe;
}

Extraction first_match(const std::string& text, const std::regex& re,
                       int group = 0) {
  std::smatch m;
  if (!std::regex_search(text, m, re)) return std::nullopt;
  std::string hit = trim(m[static_cast<std::size_t>(group)].str());
  if (hit.empty()) return std::nullopt;
  return hit;
}

std::string filtered_text(const ProfileDocument& doc) {
  return processing::filter_redundant(doc).text;
}

bool contains_any(const std::string& haystack,
                  const std::vector<std::string>& needles) {
  for (const std::string& needle : needles) {
    if (haystack.find(needle) != std::string::npos) return true;
  }
  return false;
}

// --- keyword search over the DOM --------------------------------------------

bool is_heading_candidate(const Node& node) {
  static const std::vector<std::string> kTags = {
      "h1", "h2", "h3", "h4", "h5", "h6", "dt", "th", "strong", "b"};
  for (const std::string& tag : kTags) {
    if (node.tag == tag) return true;
  }
  return false;
}

bool is_content_block(const Node& node) {
  static const std::vector<std::string> kTags = {"p",  "div", "li",
                                                 "dd", "td",  "span"};
  for (const std::string& tag : kTags) {
    if (node.tag == tag) return true;
  }
  return false;
}

// Text of the siblings that follow `index` inside `parent`, used both for
// heading values and for the remainder after an inline <b>Label:</b>.
Extraction following_sibling_text(const Node& parent, std::size_t index) {
  for (std::size_t i = index + 1; i < parent.children.size(); ++i) {
    const Node& sibling = parent.children[i];
    if (sibling.kind == Node::Kind::kText) {
      // Inline label: the value may sit right in the text node.
      std::string text = trim(sibling.text);
      while (!text.empty() && (text.front() == ':' || text.front() == '-')) {
        text = trim(text.substr(1));
      }
      if (!text.empty()) return collapse_whitespace(text);
      continue;
    }
    if (sibling.kind != Node::Kind::kElement) continue;
    std::string text = processing::subtree_text(sibling);
    if (!text.empty()) return text;
  }
  return std::nullopt;
}

struct KeywordSearch {
  CategoryId category;
  const std::vector<std::string>& keywords;
  const std::vector<std::string>& exclusions;
  Extraction result;

  bool matches(const std::string& heading_text) const {
    std::string canon = to_lower_ascii(heading_text);
    return contains_any(canon, keywords) && !contains_any(canon, exclusions);
  }

  // Pre-order scan; returns true once a value has been found.
  bool scan(const Node& node) {
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const Node& child = node.children[i];
      if (child.kind != Node::Kind::kElement) continue;
      if (child.tag == "head" || html::is_raw_text_element(child.tag)) {
        continue;
      }
      if (is_heading_candidate(child) &&
          matches(processing::subtree_text(child))) {
        if (auto value = following_sibling_text(node, i)) {
          result = value;
          return true;
        }
      }
      if (is_content_block(child)) {
        std::string text = processing::subtree_text(child);
        std::size_t colon = text.find(':');
        if (colon != std::string::npos && colon > 0 && colon <= 40 &&
            text.find('\n') > colon) {
          std::string prefix = text.substr(0, colon);
          std::string value = trim(text.substr(colon + 1));
          if (matches(prefix) && !value.empty()) {
            result = value;
            return true;
          }
        }
      }
      if (scan(child)) return true;
    }
    return false;
  }
};

Extraction keyword_extract_text(const std::string& content,
                                const KeywordSearch& search) {
  // Markdown / plain text: "Label: value" lines and short heading lines
  // followed by the value on the next line.
  std::vector<std::string> lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = collapse_whitespace(lines[i]);
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon != std::string::npos && colon > 0 && colon <= 40) {
      std::string value = trim(line.substr(colon + 1));
      if (search.matches(line.substr(0, colon)) && !value.empty()) {
        return value;
      }
    }
    std::string heading = line;
    while (!heading.empty() && (heading[0] == '#' || heading[0] == ' ')) {
      heading = heading.substr(1);
    }
    if (heading.size() <= 40 && search.matches(heading)) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        std::string value = collapse_whitespace(lines[j]);
        if (!value.empty()) return value;
      }
    }
  }
  return std::nullopt;
}

// --- entity detection helpers ------------------------------------------------

bool is_titlecase_word(const std::string& token) {
  if (token.size() < 2) return false;
  if (!std::isupper(static_cast<unsigned char>(token[0]))) return false;
  for (std::size_t i = 1; i < token.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(token[i]);
    if (std::isupper(c) && token[i - 1] != '\'' && token[i - 1] != '-') {
      return false;
    }
    if (std::isdigit(c) || std::ispunct(c)) {
      if (c != '\'' && c != '-') return false;
    }
  }
  return true;
}

std::string strip_honorific(const std::string& line) {
  static const std::regex kHonorific(R"(^(?:Mr|Mrs|Ms|Dr|Prof)\.?\s+)");
  return std::regex_replace(line, kHonorific, "");
}

Extraction entity_name(const std::string& text) {
  for (const std::string& raw_line : split_lines(text)) {
    std::string line = strip_honorific(collapse_whitespace(raw_line));
    std::vector<std::string> tokens = split(line, ' ');
    std::vector<std::string> run;
    for (const std::string& token : tokens) {
      if (is_titlecase_word(token)) {
        run.push_back(token);
        continue;
      }
      if (run.size() >= 2) break;
      run.clear();
    }
    if (run.size() >= 2 && run.size() <= 4) {
      std::string name = run[0];
      for (std::size_t i = 1; i < run.size(); ++i) name += " " + run[i];
      return name;
    }
  }
  return std::nullopt;
}

const std::vector<std::string>& occupation_gazetteer() {
  static const std::vector<std::string> kTitles = {
      "Engineer",   "Scientist",  "Professor",  "Nurse",      "Manager",
      "Analyst",    "Designer",   "Developer",  "Teacher",    "Consultant",
      "Specialist", "Technician", "Writer",     "Journalist", "Psychologist",
      "Biologist",  "Architect",  "Accountant", "Librarian"};
  return kTitles;
}

Extraction entity_occupation(const std::string& text) {
  for (const std::string& raw_line : split_lines(text)) {
    std::string line = collapse_whitespace(raw_line);
    if (line.empty() || line.find(" at ") != std::string::npos) continue;
    bool has_digit = false;
    for (char c : line) {
      if (std::isdigit(static_cast<unsigned char>(c))) has_digit = true;
    }
    if (has_digit) continue;
    std::vector<std::string> tokens = split(line, ' ');
    if (tokens.size() > 6) continue;
    for (const std::string& title : occupation_gazetteer()) {
      for (const std::string& token : tokens) {
        if (token == title) return line;
      }
    }
  }
  return std::nullopt;
}

Extraction entity_lines_matching(const std::string& text,
                                 const std::function<bool(const std::string&)>&
                                     predicate) {
  std::string out;
  for (const std::string& raw_line : split_lines(text)) {
    std::string line = collapse_whitespace(raw_line);
    if (line.empty() || !predicate(line)) continue;
    if (!out.empty()) out.push_back('\n');
    out += line;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// --- selector learner --------------------------------------------------------

struct RawStep {
  std::string tag;
  std::string cls;
  int index = 0;
};

using RawPath = std::vector<RawStep>;

void collect_label_paths(const Node& node, const std::string& label,
                         RawPath& current, std::vector<RawPath>& out) {
  std::map<std::string, int> tag_counts;
  for (const Node& child : node.children) {
    if (child.kind != Node::Kind::kElement) continue;
    int index = tag_counts[child.tag]++;
    const std::string* cls = child.attr("class");
    current.push_back({child.tag, cls ? collapse_whitespace(*cls) : "", index});
    if (processing::subtree_text(child) == label) out.push_back(current);
    collect_label_paths(child, label, current, out);
    current.pop_back();
  }
}

bool unify_paths(const RawPath& base, const RawPath& other,
                 std::vector<SelectorStep>& unified) {
  if (base.size() != other.size()) return false;
  unified.clear();
  unified.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i].tag != other[i].tag) return false;
    SelectorStep step;
    step.tag = base[i].tag;
    if (!base[i].cls.empty() && base[i].cls == other[i].cls) {
      step.cls = base[i].cls;
    } else if (base[i].index == other[i].index) {
      step.index = base[i].index;
    } else {
      return false;
    }
    unified.push_back(std::move(step));
  }
  return true;
}

void match_selector(const Node& node, const std::vector<SelectorStep>& steps,
                    std::size_t depth, std::vector<const Node*>& out) {
  if (depth == steps.size()) {
    out.push_back(&node);
    return;
  }
  const SelectorStep& step = steps[depth];
  std::map<std::string, int> tag_counts;
  for (const Node& child : node.children) {
    if (child.kind != Node::Kind::kElement) continue;
    int index = tag_counts[child.tag]++;
    if (child.tag != step.tag) continue;
    if (!step.cls.empty()) {
      const std::string* cls = child.attr("class");
      if (!cls || collapse_whitespace(*cls) != step.cls) continue;
    } else if (index != step.index) {
      continue;
    }
    match_selector(child, steps, depth + 1, out);
  }
}

}  // namespace

Extraction regex_extract(const ProfileDocument& doc, CategoryId category) {
  std::string text = filtered_text(doc);
  switch (category) {
    case CategoryId::kEmailAddress:
      return first_match(text, email_pattern());
    case CategoryId::kPhoneNumber:
      return first_match(text, phone_pattern());
    case CategoryId::kMailingAddress:
      return first_match(text, address_pattern());
    case CategoryId::kName:
      return first_match(text, honorific_name_pattern(), 1);
    default:
      return std::nullopt;
  }
}

Extraction keyword_extract(const ProfileDocument& doc, CategoryId category) {
  KeywordSearch search{category, keywords_for(category),
                       keyword_exclusions_for(category), std::nullopt};
  if (doc.format != DocFormat::kHtml) {
    return keyword_extract_text(doc.content, search);
  }
  Node root = html::parse(doc.content);
  search.scan(root);
  return search.result;
}

Extraction entity_extract(const ProfileDocument& doc, CategoryId category) {
  std::string text = filtered_text(doc);
  switch (category) {
    case CategoryId::kEmailAddress:
      return first_match(text, email_pattern());
    case CategoryId::kPhoneNumber:
      return first_match(text, phone_pattern());
    case CategoryId::kMailingAddress:
      return first_match(text, address_pattern());
    case CategoryId::kName:
      return entity_name(text);
    case CategoryId::kAffiliation:
      return first_match(text, org_pattern());
    case CategoryId::kOccupation:
      return entity_occupation(text);
    case CategoryId::kWorkExperience:
      return entity_lines_matching(text, [](const std::string& line) {
        return std::regex_search(line, year_range_pattern());
      });
    case CategoryId::kEducationExperience:
      return entity_lines_matching(text, [](const std::string& line) {
        static const std::regex kDegree(
            R"(\b(?:B\.S\.|B\.A\.|M\.S\.|MBA|Ph\.D\.)\s)");
        return std::regex_search(line, kDegree);
      });
  }
  return std::nullopt;
}

const std::vector<std::string>& keywords_for(CategoryId category) {
  static const std::map<CategoryId, std::vector<std::string>> kKeywords = {
      {CategoryId::kEmailAddress, {"email", "e-mail"}},
      {CategoryId::kPhoneNumber, {"phone", "telephone", "call", "ring"}},
      {CategoryId::kMailingAddress, {"address", "residence", "location"}},
      {CategoryId::kName, {"name", "handle", "who i am"}},
      {CategoryId::kWorkExperience,
       {"work", "experience", "career", "professional"}},
      {CategoryId::kEducationExperience,
       {"education", "school", "degree", "scholarly", "learned"}},
      {CategoryId::kAffiliation,
       {"affiliation", "organization", "guild", "crew"}},
      {CategoryId::kOccupation,
       {"occupation", "position", "vocation", "class", "what i do"}},
  };
  return kKeywords.at(category);
}

const std::vector<std::string>& keyword_exclusions_for(CategoryId category) {
  static const std::map<CategoryId, std::vector<std::string>> kExclusions = {
      {CategoryId::kEmailAddress, {}},
      {CategoryId::kPhoneNumber, {}},
      {CategoryId::kMailingAddress, {"email", "e-mail"}},
      {CategoryId::kName, {}},
      {CategoryId::kWorkExperience, {"education"}},
      {CategoryId::kEducationExperience, {}},
      {CategoryId::kAffiliation, {}},
      {CategoryId::kOccupation, {}},
  };
  return kExclusions.at(category);
}

void SelectorModel::train(const std::vector<ManifestEntry>& examples,
                          CategoryId category) {
  std::vector<std::vector<RawPath>> per_example;
  for (const ManifestEntry& example : examples) {
    const Extraction& label = example.truth.label(category);
    if (!label) continue;
    if (example.document.format != DocFormat::kHtml) continue;
    Node root = html::parse(example.document.content);
    std::vector<RawPath> paths;
    RawPath current;
    collect_label_paths(root, *label, current, paths);
    if (paths.empty()) {
      throw LabelNotFound("label for " + std::string(category_key(category)) +
                          " not found in profile " + example.document.id);
    }
    per_example.push_back(std::move(paths));
  }
  if (per_example.empty()) return;

  for (const RawPath& candidate : per_example[0]) {
    std::vector<SelectorStep> unified;
    bool ok = true;
    // Unify the candidate against one matching path in every example.
    std::vector<SelectorStep> accumulated;
    if (!unify_paths(candidate, candidate, accumulated)) continue;
    for (std::size_t e = 1; e < per_example.size() && ok; ++e) {
      bool any = false;
      for (const RawPath& other : per_example[e]) {
        if (unify_paths(candidate, other, unified)) {
          // Merge: a step keeps its class only if both agree.
          for (std::size_t s = 0; s < accumulated.size(); ++s) {
            if (accumulated[s].cls != unified[s].cls) {
              if (accumulated[s].cls.empty() || unified[s].cls.empty()) {
                accumulated[s].cls.clear();
                accumulated[s].index = candidate[s].index;
              } else {
                accumulated[s].cls.clear();
              }
            }
          }
          any = true;
          break;
        }
      }
      ok = any;
    }
    if (ok) {
      selectors_[category] = accumulated;
      return;
    }
  }
  throw NoConsistentSelector("no consistent selector for " +
                             std::string(category_key(category)));
}

void SelectorModel::train(const std::vector<ManifestEntry>& examples) {
  selectors_.clear();
  for (CategoryId category : kAllCategories) {
    try {
      train(examples, category);
    } catch (const NoConsistentSelector&) {
      // Expected across structurally varied profiles (one work entry renders
      // differently from three); the category stays un-extractable.
    }
  }
}

Extraction SelectorModel::extract(const ProfileDocument& doc,
                                  CategoryId category) const {
  auto it = selectors_.find(category);
  if (it == selectors_.end()) return std::nullopt;
  if (doc.format != DocFormat::kHtml) return std::nullopt;
  Node root = html::parse(doc.content);
  std::vector<const Node*> matches;
  match_selector(root, it->second, 0, matches);
  for (const Node* node : matches) {
    std::string text = processing::subtree_text(*node);
    if (!text.empty()) return text;
  }
  return std::nullopt;
}

bool SelectorModel::has_selector(CategoryId category) const {
  return selectors_.count(category) > 0;
}

const std::vector<SelectorStep>* SelectorModel::selector(
    CategoryId category) const {
  auto it = selectors_.find(category);
  return it == selectors_.end() ? nullptr : &it->second;
}

}  // namespace pie::baselines
