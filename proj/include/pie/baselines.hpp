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

#ifndef PIE_BASELINES_HPP_
#define PIE_BASELINES_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pie/core.hpp"

// Traditional (non-LLM) extraction baselines: regular expressions, keyword
// driven heading search, lightweight entity detection, and a structural
// selector learner. The exact patterns and keyword sets are frozen in
// docs/extraction-rules.md; tests pin them.
namespace pie::baselines {

// Pattern-based extraction on the filtered document text. Returns the first
// match in document order, or Absent. Categories without a usable surface
// pattern (work experience, education, affiliation, occupation) always
// return Absent.
Extraction regex_extract(const ProfileDocument& doc, CategoryId category);

// Heading-driven search: scans heading-like elements (h1-h6, dt, th, strong,
// b) and "Label:" prefixed blocks for the category's keywords, then returns
// the content that follows. Keyword and exclusion sets are per category.
Extraction keyword_extract(const ProfileDocument& doc, CategoryId category);

// Heuristic entity detection over the filtered text: title-case runs for
// names, an organization-suffix gazetteer for affiliations, shape patterns
// for the rest.
Extraction entity_extract(const ProfileDocument& doc, CategoryId category);

// Keywords / exclusions used by keyword_extract, exposed for documentation
// and tests.
const std::vector<std::string>& keywords_for(CategoryId category);
const std::vector<std::string>& keyword_exclusions_for(CategoryId category);

// --- Selector learner -------------------------------------------------------

// Thrown by SelectorModel::train when no structural path matches every
// training example for a category that is present in all of them.
class NoConsistentSelector : public std::runtime_error {
 public:
  explicit NoConsistentSelector(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when a present training label cannot be located in its document.
class LabelNotFound : public std::runtime_error {
 public:
  explicit LabelNotFound(const std::string& what)
      : std::runtime_error(what) {}
};

// One step of a structural path: a tag plus either a class requirement or a
// positional index among same-tag siblings.
struct SelectorStep {
  std::string tag;
  std::string cls;  // empty means positional matching
  int index = 0;    // used when cls is empty
};

// Learns, per category, a structural path from labelled example documents
// and applies it to unseen ones. Classes are preferred when they are
// consistent across examples; otherwise positions are used.
class SelectorModel {
 public:
  // Learns the selector for one category. Examples where the category is
  // Absent are ignored; when no example carries it the call is a no-op.
  // Throws LabelNotFound / NoConsistentSelector.
  void train(const std::vector<ManifestEntry>& examples, CategoryId category);

  // Trains every category present in the examples. Categories whose labels
  // sit at irreconcilable paths are skipped (extract yields Absent for
  // them); LabelNotFound still propagates, it indicates broken data.
  void train(const std::vector<ManifestEntry>& examples);

  // Returns the text under the learned selector, or Absent when the
  // category was never trained or the path does not match.
  Extraction extract(const ProfileDocument& doc, CategoryId category) const;

  bool has_selector(CategoryId category) const;
  const std::vector<SelectorStep>* selector(CategoryId category) const;

 private:
  std::map<CategoryId, std::vector<SelectorStep>> selectors_;
};

}  // namespace pie::baselines

#endif  // PIE_BASELINES_HPP_
