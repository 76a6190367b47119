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

#include "doctest.h"
#include "pie/core.hpp"
#include "pie/html.hpp"
#include "pie/processing.hpp"

using namespace pie;
using processing::filter_redundant;
using processing::html_to_markdown;
using processing::normalize_absence;
using processing::visible_text;

namespace {

ProfileDocument html_doc(std::string content) {
  ProfileDocument doc;
  doc.id = "t";
  doc.format = DocFormat::kHtml;
  doc.content = std::move(content);
  return doc;
}

ProfileDocument text_doc(std::string content) {
  ProfileDocument doc;
  doc.id = "t";
  doc.format = DocFormat::kPlainText;
  doc.content = std::move(content);
  return doc;
}

}  // namespace

TEST_CASE("filter_redundant drops markup noise but keeps hidden text") {
  ProfileDocument doc = html_doc(
      "<html><head><title>Skip me</title><style>p{color:red}</style></head>"
      "<body><!-- note --><script>var x = 'skip';</script>"
      "<h1>About</h1>"
      "<p>Reach me at <b>a@b.com</b>.</p>"
      "<p style=\"display:none\">hidden but kept</p>"
      "</body></html>");
  processing::FilteredText filtered = filter_redundant(doc);
  CHECK(filtered.text.find("Skip me") == std::string::npos);
  CHECK(filtered.text.find("color:red") == std::string::npos);
  CHECK(filtered.text.find("note") == std::string::npos);
  CHECK(filtered.text.find("skip") == std::string::npos);
  CHECK(filtered.text.find("hidden but kept") != std::string::npos);
  // One line per block-level run; inline markup fuses.
  REQUIRE(filtered.blocks.size() == 3);
  CHECK(filtered.blocks[0] == "About");
  CHECK(filtered.blocks[1] == "Reach me at a@b.com.");
  CHECK(filtered.blocks[2] == "hidden but kept");
  CHECK(filtered.text == "About\nReach me at a@b.com.\nhidden but kept");
}

TEST_CASE("filter_redundant collapses whitespace and keeps image alt") {
  ProfileDocument doc = html_doc(
      "<body><p>  a \n\t b  </p><p><img src=\"x.png\" alt=\"pic text\"></p>"
      "<p>   </p></body>");
  processing::FilteredText filtered = filter_redundant(doc);
  REQUIRE(filtered.blocks.size() == 2);
  CHECK(filtered.blocks[0] == "a b");
  CHECK(filtered.blocks[1] == "pic text");
}

TEST_CASE("non-HTML documents canonicalize per line") {
  ProfileDocument doc = text_doc("  first   line \n\n  second\t line \n");
  processing::FilteredText filtered = filter_redundant(doc);
  REQUIRE(filtered.blocks.size() == 2);
  CHECK(filtered.blocks[0] == "first line");
  CHECK(filtered.blocks[1] == "second line");
  CHECK(visible_text(doc) == "first line\nsecond line");
}

TEST_CASE("visible_text prunes what a rendered page hides") {
  SUBCASE("display none and visibility hidden") {
    ProfileDocument doc = html_doc(
        "<body><p>shown</p><p style=\"display: none\">gone1</p>"
        "<p style=\"visibility:hidden\">gone2</p></body>");
    std::string text = visible_text(doc);
    CHECK(text == "shown");
  }
  SUBCASE("color equal to effective background") {
    ProfileDocument doc = html_doc(
        "<body style=\"background-color: #ABCDEF\">"
        "<p>shown</p>"
        "<span style=\"color:#abcdef\">camouflaged</span>"
        "<span style=\"color:#000000\">black text</span>"
        "</body>");
    std::string text = visible_text(doc);
    CHECK(text.find("camouflaged") == std::string::npos);
    CHECK(text.find("shown") != std::string::npos);
    CHECK(text.find("black text") != std::string::npos);
  }
  SUBCASE("background inherits from nearest styled ancestor") {
    ProfileDocument doc = html_doc(
        "<body style=\"background-color:black\"><div><p>"
        "<span style=\"color:#000\">invisible deep</span>"
        "<span style=\"color:white\">readable</span>"
        "</p></div></body>");
    std::string text = visible_text(doc);
    CHECK(text.find("invisible deep") == std::string::npos);
    CHECK(text.find("readable") != std::string::npos);
  }
  SUBCASE("default background is white") {
    ProfileDocument doc = html_doc(
        "<body><span style=\"color:#FFF\">white on white</span>ok</body>");
    std::string text = visible_text(doc);
    CHECK(text.find("white on white") == std::string::npos);
    CHECK(text.find("ok") != std::string::npos);
  }
  SUBCASE("marker class and aria-hidden") {
    ProfileDocument doc = html_doc(
        "<body><p>keep</p>"
        "<span class=\"pie-invisible\">marked</span>"
        "<span aria-hidden=\"true\">announced away</span></body>");
    std::string text = visible_text(doc);
    CHECK(text.find("marked") == std::string::npos);
    CHECK(text.find("announced away") == std::string::npos);
    CHECK(text.find("keep") != std::string::npos);
  }
  SUBCASE("hidden content still reaches filter_redundant") {
    ProfileDocument doc = html_doc(
        "<body><span class=\"pie-invisible\">marked</span></body>");
    CHECK(filter_redundant(doc).text == "marked");
    CHECK(visible_text(doc).empty());
  }
}

TEST_CASE("html_to_markdown conversion") {
  ProfileDocument doc = html_doc(
      "<body><h1>Title</h1><h3>Sub</h3>"
      "<p>Go to <a href=\"https://x.io\">my site</a> for <b>bold</b> and "
      "<em>soft</em> and <code>mono</code>.</p>"
      "<ul><li>alpha</li><li>beta</li></ul>"
      "<ol><li>one</li><li>two</li></ol>"
      "<table><tr><th>k</th><th>v</th></tr><tr><td>email</td><td>a@b.c</td>"
      "</tr></table>"
      "<p><img src=\"u.png\" alt=\"described image\"></p></body>");
  ProfileDocument md = html_to_markdown(doc);
  CHECK(md.format == DocFormat::kMarkdown);
  CHECK(md.content.find("# Title") != std::string::npos);
  CHECK(md.content.find("### Sub") != std::string::npos);
  CHECK(md.content.find("[my site](https://x.io)") != std::string::npos);
  CHECK(md.content.find("**bold**") != std::string::npos);
  CHECK(md.content.find("*soft*") != std::string::npos);
  CHECK(md.content.find("`mono`") != std::string::npos);
  CHECK(md.content.find("- alpha\n- beta") != std::string::npos);
  CHECK(md.content.find("1. one\n2. two") != std::string::npos);
  CHECK(md.content.find("k | v") != std::string::npos);
  CHECK(md.content.find("email | a@b.c") != std::string::npos);
  CHECK(md.content.find("described image") != std::string::npos);
  CHECK(md.content.find("<") == std::string::npos);
}

TEST_CASE("html_to_markdown keeps hidden text and passes non-HTML through") {
  ProfileDocument doc = html_doc(
      "<body><p style=\"display:none\">still here</p></body>");
  CHECK(html_to_markdown(doc).content == "still here");

  ProfileDocument plain = text_doc("as-is\ncontent");
  ProfileDocument out = html_to_markdown(plain);
  CHECK(out.content == "as-is\ncontent");
  CHECK(out.format == DocFormat::kMarkdown);
}

TEST_CASE("normalize_absence maps markers and phrases to Absent") {
  for (const std::string& marker : processing::absence_markers()) {
    CAPTURE(marker);
    CHECK_FALSE(normalize_absence(marker).has_value());
    CHECK_FALSE(normalize_absence(" " + marker + " ").has_value());
  }
  CHECK_FALSE(normalize_absence("None").has_value());
  CHECK_FALSE(normalize_absence("N/A").has_value());
  CHECK_FALSE(normalize_absence("The email address is unknown.").has_value());
  CHECK_FALSE(normalize_absence("My phone number is not available").has_value());
  CHECK_FALSE(normalize_absence("the mailing address is not provided.").has_value());
  CHECK_FALSE(normalize_absence("").has_value());
  CHECK_FALSE(normalize_absence("   ").has_value());

  // Real answers pass through trimmed.
  Extraction kept = normalize_absence("  jane@doe.com ");
  REQUIRE(kept.has_value());
  CHECK(*kept == "jane@doe.com");
  CHECK(normalize_absence("Nathan Doe").value() == "Nathan Doe");
  // "none" inside a longer answer is not an absence marker.
  CHECK(normalize_absence("none of your business street 5").has_value());
}

TEST_CASE("parse_style splits declarations") {
  auto pairs = processing::parse_style(
      " Color : #FFF ; background-color:rgb(1, 2, 3); ;user-select:none ");
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].first == "color");
  CHECK(pairs[0].second == "#FFF");
  CHECK(pairs[1].first == "background-color");
  CHECK(pairs[1].second == "rgb(1, 2, 3)");
  CHECK(pairs[2].first == "user-select");
  CHECK(pairs[2].second == "none");
  CHECK(processing::parse_style("").empty());
}

TEST_CASE("normalize_color accepts hex, rgb and named forms") {
  CHECK(processing::normalize_color("#fff").value() == "#FFFFFF");
  CHECK(processing::normalize_color("#AbC").value() == "#AABBCC");
  CHECK(processing::normalize_color("#10141a").value() == "#10141A");
  CHECK(processing::normalize_color("rgb(16, 20, 26)").value() == "#10141A");
  CHECK(processing::normalize_color("rgb(0,0,0)").value() == "#000000");
  CHECK(processing::normalize_color("white").value() == "#FFFFFF");
  CHECK(processing::normalize_color("Black").value() == "#000000");
  CHECK(processing::normalize_color(" silver ").value() == "#C0C0C0");
  CHECK_FALSE(processing::normalize_color("mauve").has_value());
  CHECK_FALSE(processing::normalize_color("#12").has_value());
  CHECK_FALSE(processing::normalize_color("#12345").has_value());
  CHECK_FALSE(processing::normalize_color("rgb(300,0,0)").has_value());
  CHECK_FALSE(processing::normalize_color("").has_value());
}

TEST_CASE("subtree_text mirrors filter rules on a node") {
  html::Node root = html::parse(
      "<div><p> two  words </p><script>skip</script><p>more</p></div>");
  CHECK(processing::subtree_text(root) == "two words\nmore");
}
