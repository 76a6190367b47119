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

#include <string>
#include <vector>

#include "doctest.h"
#include "pie/baselines.hpp"
#include "pie/core.hpp"
#include "pie/generator.hpp"

using namespace pie;
using baselines::entity_extract;
using baselines::keyword_extract;
using baselines::regex_extract;

namespace {

ProfileDocument html_doc(std::string content) {
  ProfileDocument doc;
  doc.id = "t";
  doc.format = DocFormat::kHtml;
  doc.content = std::move(content);
  return doc;
}

ManifestEntry entry_with(std::string content,
                         std::map<CategoryId, Extraction> labels) {
  ManifestEntry entry;
  entry.document = html_doc(std::move(content));
  entry.truth.profile_id = entry.document.id;
  entry.truth.labels = std::move(labels);
  return entry;
}

}  // namespace

TEST_CASE("regex extraction finds surface patterns in document order") {
  ProfileDocument doc = html_doc(
      "<body><p>Dr. Elena Vasquez lives at 12 Maple Street, Springfield.</p>"
      "<p>Mail elena.vasquez+work@lab.example.org or first@second.io.</p>"
      "<p>Call (555) 123-4567 today.</p></body>");
  CHECK(regex_extract(doc, CategoryId::kEmailAddress).value() ==
        "elena.vasquez+work@lab.example.org");
  CHECK(regex_extract(doc, CategoryId::kPhoneNumber).value() ==
        "(555) 123-4567");
  CHECK(regex_extract(doc, CategoryId::kMailingAddress).value() ==
        "12 Maple Street, Springfield.");
  CHECK(regex_extract(doc, CategoryId::kName).value() == "Elena Vasquez");
}

TEST_CASE("regex extraction has no pattern for narrative categories") {
  ProfileDocument doc = html_doc(
      "<body><p>Software Engineer at Initech (2015 - 2020). "
      "B.S. Computer Science.</p></body>");
  CHECK_FALSE(regex_extract(doc, CategoryId::kWorkExperience).has_value());
  CHECK_FALSE(regex_extract(doc, CategoryId::kEducationExperience).has_value());
  CHECK_FALSE(regex_extract(doc, CategoryId::kAffiliation).has_value());
  CHECK_FALSE(regex_extract(doc, CategoryId::kOccupation).has_value());
}

TEST_CASE("email pattern pins") {
  auto email_of = [](const std::string& text) {
    return regex_extract(html_doc("<body><p>" + text + "</p></body>"),
                         CategoryId::kEmailAddress);
  };
  CHECK(email_of("write a@b.co now").value() == "a@b.co");
  CHECK(email_of("x first.last%2+tag-x@sub-2.domain.org y").value() ==
        "first.last%2+tag-x@sub-2.domain.org");
  // One-letter TLDs and spelled-out symbols do not match.
  CHECK_FALSE(email_of("a@b.c").has_value());
  CHECK_FALSE(email_of("jane AT site DOT com").has_value());
  CHECK_FALSE(email_of("jane AT_DOT site").has_value());
  CHECK_FALSE(email_of("no email here").has_value());
}

TEST_CASE("phone pattern pins") {
  auto phone_of = [](const std::string& text) {
    return regex_extract(html_doc("<body><p>" + text + "</p></body>"),
                         CategoryId::kPhoneNumber);
  };
  CHECK(phone_of("call 555-123-4567 now").value() == "555-123-4567");
  CHECK(phone_of("call (555) 123-4567").value() == "(555) 123-4567");
  CHECK(phone_of("call +1 555-123-4567").value() == "+1 555-123-4567");
  CHECK(phone_of("call 555.123.4567").value() == "555.123.4567");
  CHECK_FALSE(phone_of("room 123-45").has_value());
  CHECK_FALSE(phone_of("in 2026 or 2027").has_value());
}

TEST_CASE("keyword extraction follows headings") {
  ProfileDocument doc = html_doc(
      "<body><h2>Email</h2><p>kim@files.net</p>"
      "<h2>Home Address</h2><p>9 Birch Road, Fairview</p>"
      "<h2>Education</h2><p>B.A. History, Northfield College</p></body>");
  CHECK(keyword_extract(doc, CategoryId::kEmailAddress).value() ==
        "kim@files.net");
  CHECK(keyword_extract(doc, CategoryId::kMailingAddress).value() ==
        "9 Birch Road, Fairview");
  CHECK(keyword_extract(doc, CategoryId::kEducationExperience).value() ==
        "B.A. History, Northfield College");
  CHECK_FALSE(keyword_extract(doc, CategoryId::kOccupation).has_value());
}

TEST_CASE("keyword exclusions resolve heading collisions") {
  // "Email Address" contains the mailing keyword "address"; the exclusion
  // list keeps the mailing category away from it.
  ProfileDocument doc = html_doc(
      "<body><h2>Email Address</h2><p>kim@files.net</p>"
      "<h2>Address</h2><p>9 Birch Road</p></body>");
  CHECK(keyword_extract(doc, CategoryId::kEmailAddress).value() ==
        "kim@files.net");
  CHECK(keyword_extract(doc, CategoryId::kMailingAddress).value() ==
        "9 Birch Road");

  // "Education Experience" contains the work keyword "experience"; the
  // exclusion keeps work experience away from it.
  ProfileDocument cv = html_doc(
      "<body><h2>Education Experience</h2><p>M.S. Biology</p>"
      "<h2>Work Experience</h2><p>Field Researcher at Plainsworth</p></body>");
  CHECK(keyword_extract(cv, CategoryId::kWorkExperience).value() ==
        "Field Researcher at Plainsworth");
  CHECK(keyword_extract(cv, CategoryId::kEducationExperience).value() ==
        "M.S. Biology");
}

TEST_CASE("keyword extraction reads inline label prefixes") {
  ProfileDocument doc = html_doc(
      "<body><p><b>Phone:</b> 555-987-1234</p>"
      "<dl><dt>Occupation</dt><dd>Cartographer</dd></dl></body>");
  CHECK(keyword_extract(doc, CategoryId::kPhoneNumber).value() ==
        "555-987-1234");
  CHECK(keyword_extract(doc, CategoryId::kOccupation).value() ==
        "Cartographer");
}

TEST_CASE("keyword extraction works on plain text and markdown") {
  ProfileDocument doc;
  doc.id = "t";
  doc.format = DocFormat::kMarkdown;
  doc.content =
      "# Profile\n\nEmail: kim@files.net\n\n## What I Do\n\nCartographer\n";
  CHECK(keyword_extract(doc, CategoryId::kEmailAddress).value() ==
        "kim@files.net");
  CHECK(keyword_extract(doc, CategoryId::kOccupation).value() ==
        "Cartographer");
  CHECK_FALSE(keyword_extract(doc, CategoryId::kAffiliation).has_value());
}

TEST_CASE("keyword sets exist for all categories and stay disjoint enough") {
  for (CategoryId category : kAllCategories) {
    CHECK_FALSE(baselines::keywords_for(category).empty());
    // Exclusions never overlap the category's own keywords.
    for (const std::string& kw : baselines::keywords_for(category)) {
      for (const std::string& ex : baselines::keyword_exclusions_for(category)) {
        CHECK(kw != ex);
      }
    }
  }
}

TEST_CASE("entity extraction heuristics") {
  ProfileDocument doc = html_doc(
      "<body><p>the quick brown fox</p>"
      "<p>Marisol Vega Duarte</p>"
      "<p>Senior Data Analyst</p>"
      "<p>Field Researcher at Plainsworth Analytics (2015 - 2020)</p>"
      "<p>Junior Surveyor at Meridian Systems (2011 - 2015)</p>"
      "<p>M.S. Geography, Northfield University (2009 - 2011)</p>"
      "<p>Plainsworth Analytics</p></body>");
  CHECK(entity_extract(doc, CategoryId::kName).value() ==
        "Marisol Vega Duarte");
  CHECK(entity_extract(doc, CategoryId::kOccupation).value() ==
        "Senior Data Analyst");
  CHECK(entity_extract(doc, CategoryId::kAffiliation).value() ==
        "Plainsworth Analytics");
  // Work experience joins every year-ranged line, in order.
  CHECK(entity_extract(doc, CategoryId::kWorkExperience).value() ==
        "Field Researcher at Plainsworth Analytics (2015 - 2020)\n"
        "Junior Surveyor at Meridian Systems (2011 - 2015)\n"
        "M.S. Geography, Northfield University (2009 - 2011)");
  CHECK(entity_extract(doc, CategoryId::kEducationExperience).value() ==
        "M.S. Geography, Northfield University (2009 - 2011)");
}

TEST_CASE("entity extraction returns absent when nothing matches") {
  ProfileDocument doc = html_doc("<body><p>nothing to see here</p></body>");
  for (CategoryId category : kAllCategories) {
    CHECK_FALSE(entity_extract(doc, category).has_value());
  }
}

TEST_CASE("baselines hold on generated profiles") {
  auto [doc, truth] = gen::generate_profile(11, gen::Style::kNeat,
                                            gen::Complexity::kMedium, 0.0);
  CHECK(regex_extract(doc, CategoryId::kEmailAddress) ==
        truth.label(CategoryId::kEmailAddress));
  CHECK(keyword_extract(doc, CategoryId::kEmailAddress) ==
        truth.label(CategoryId::kEmailAddress));
}

TEST_CASE("selector model learns class-anchored paths") {
  std::vector<ManifestEntry> train;
  train.push_back(entry_with(
      "<body><div class=\"contact\"><p class=\"val-email\">a@x.io</p>"
      "<p class=\"val-phone\">555-111-2222</p></div></body>",
      {{CategoryId::kEmailAddress, "a@x.io"},
       {CategoryId::kPhoneNumber, "555-111-2222"}}));
  train.push_back(entry_with(
      "<body><p>intro filler up front</p>"
      "<div class=\"contact\"><p class=\"val-email\">b@y.io</p>"
      "<p class=\"val-phone\">555-333-4444</p></div></body>",
      {{CategoryId::kEmailAddress, "b@y.io"},
       {CategoryId::kPhoneNumber, "555-333-4444"}}));

  baselines::SelectorModel model;
  model.train(train);
  REQUIRE(model.has_selector(CategoryId::kEmailAddress));
  REQUIRE(model.has_selector(CategoryId::kPhoneNumber));
  CHECK_FALSE(model.has_selector(CategoryId::kName));
  CHECK(model.selector(CategoryId::kName) == nullptr);

  ProfileDocument unseen = html_doc(
      "<body><h1>New Person</h1>"
      "<div class=\"contact\"><p class=\"val-email\">c@z.io</p>"
      "<p class=\"val-phone\">555-555-6666</p></div></body>");
  CHECK(model.extract(unseen, CategoryId::kEmailAddress).value() == "c@z.io");
  CHECK(model.extract(unseen, CategoryId::kPhoneNumber).value() ==
        "555-555-6666");
  CHECK_FALSE(model.extract(unseen, CategoryId::kName).has_value());
}

TEST_CASE("selector model falls back to positions without classes") {
  std::vector<ManifestEntry> train;
  train.push_back(entry_with(
      "<body><div><p>skip</p><p>a@x.io</p></div></body>",
      {{CategoryId::kEmailAddress, "a@x.io"}}));
  train.push_back(entry_with(
      "<body><div><p>skip</p><p>b@y.io</p></div></body>",
      {{CategoryId::kEmailAddress, "b@y.io"}}));
  baselines::SelectorModel model;
  model.train(train);
  ProfileDocument unseen =
      html_doc("<body><div><p>skip</p><p>c@z.io</p></div></body>");
  CHECK(model.extract(unseen, CategoryId::kEmailAddress).value() == "c@z.io");

  const std::vector<baselines::SelectorStep>* path =
      model.selector(CategoryId::kEmailAddress);
  REQUIRE(path != nullptr);
  REQUIRE_FALSE(path->empty());
  CHECK(path->back().tag == "p");
  CHECK(path->back().cls.empty());
  CHECK(path->back().index == 1);
}

TEST_CASE("selector model trains across generator styles per style") {
  // Two same-style profiles suffice to learn email for that style.
  std::vector<ManifestEntry> train;
  for (std::uint64_t seed : {100ULL, 101ULL}) {
    auto [doc, truth] = gen::generate_profile(seed, gen::Style::kGeeky,
                                              gen::Complexity::kLow, 0.0);
    ManifestEntry entry;
    entry.document = std::move(doc);
    entry.truth = std::move(truth);
    train.push_back(std::move(entry));
  }
  baselines::SelectorModel model;
  model.train(train);
  auto [held_out, truth] = gen::generate_profile(500, gen::Style::kGeeky,
                                                 gen::Complexity::kLow, 0.0);
  CHECK(model.extract(held_out, CategoryId::kEmailAddress) ==
        truth.label(CategoryId::kEmailAddress));
}

TEST_CASE("selector model throws on unlocatable labels") {
  std::vector<ManifestEntry> train;
  train.push_back(entry_with("<body><p>a@x.io</p></body>",
                             {{CategoryId::kEmailAddress, "missing@no.where"}}));
  baselines::SelectorModel model;
  CHECK_THROWS_AS(model.train(train), baselines::LabelNotFound);
}

TEST_CASE("selector model throws when structures disagree") {
  std::vector<ManifestEntry> train;
  train.push_back(entry_with("<body><h1>One</h1><p>a@x.io</p></body>",
                             {{CategoryId::kEmailAddress, "a@x.io"}}));
  train.push_back(entry_with("<body><h1>Two</h1><ul><li>b@y.io</li></ul></body>",
                             {{CategoryId::kEmailAddress, "b@y.io"}}));
  baselines::SelectorModel model;
  CHECK_THROWS_AS(model.train(train, CategoryId::kEmailAddress),
                  baselines::NoConsistentSelector);

  // The bulk trainer tolerates the inconsistency and simply learns nothing.
  model.train(train);
  CHECK_FALSE(model.has_selector(CategoryId::kEmailAddress));
  CHECK_FALSE(
      model.extract(train[0].document, CategoryId::kEmailAddress).has_value());
}

TEST_CASE("per-category training is a no-op without examples") {
  std::vector<ManifestEntry> train;
  train.push_back(entry_with("<body><p>a@x.io</p></body>",
                             {{CategoryId::kEmailAddress, "a@x.io"}}));
  baselines::SelectorModel model;
  model.train(train, CategoryId::kName);
  CHECK_FALSE(model.has_selector(CategoryId::kName));
  // Self-consistency: one example trains a selector that reproduces it.
  model.train(train, CategoryId::kEmailAddress);
  CHECK(model.extract(train[0].document, CategoryId::kEmailAddress).value() ==
        "a@x.io");
}
