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

#include "pie/processing.hpp"

#include <cctype>
#include <cstdio>
#include <regex>

namespace pie::processing {
namespace {

using html::Node;

struct TextCollector {
  std::vector<std::string> blocks;
  std::string current;

  void flush() {
    std::string line = collapse_whitespace(current);
    current.clear();
    if (!line.empty()) blocks.push_back(std::move(line));
  }
  void append(std::string_view text) { current += text; }
};

bool style_hides(const Node& element, const std::string& effective_bg) {
  const std::string* style = element.attr("style");
  if (style) {
    for (const auto& [prop, value] : parse_style(*style)) {
      if (prop == "display" && to_lower_ascii(value) == "none") return true;
      if (prop == "visibility" && to_lower_ascii(value) == "hidden") {
        return true;
      }
      if (prop == "color") {
        auto color = normalize_color(value);
        if (color && *color == effective_bg) return true;
      }
    }
  }
  if (element.has_class(std::string(kInvisibleMarkerClass))) return true;
  const std::string* aria = element.attr("aria-hidden");
  return aria && to_lower_ascii(*aria) == "true";
}

std::string background_of(const Node& element, const std::string& inherited) {
  const std::string* style = element.attr("style");
  if (!style) return inherited;
  for (const auto& [prop, value] : parse_style(*style)) {
    if (prop == "background-color" || prop == "background") {
      if (auto color = normalize_color(value)) return *color;
    }
  }
  return inherited;
}

void collect_text(const Node& node, bool prune_hidden, std::string bg,
                  TextCollector& out) {
  switch (node.kind) {
    case Node::Kind::kComment:
    case Node::Kind::kDoctype:
      return;
    case Node::Kind::kText:
      out.append(node.text);
      return;
    case Node::Kind::kDocument:
      for (const Node& child : node.children) {
        collect_text(child, prune_hidden, bg, out);
      }
      return;
    case Node::Kind::kElement:
      break;
  }

  if (node.tag == "head" || html::is_raw_text_element(node.tag)) return;
  bg = background_of(node, bg);
  if (prune_hidden && style_hides(node, bg)) return;

  if (node.tag == "br") {
    out.flush();
    return;
  }
  if (node.tag == "img") {
    if (const std::string* alt = node.attr("alt")) out.append(*alt);
    return;
  }

  const bool block = html::is_block_element(node.tag);
  if (block) out.flush();
  for (const Node& child : node.children) {
    collect_text(child, prune_hidden, bg, out);
  }
  if (block) out.flush();
}

FilteredText canonicalize_plain(std::string_view content) {
  FilteredText result;
  for (const std::string& line : split_lines(content)) {
    std::string collapsed = collapse_whitespace(line);
    if (!collapsed.empty()) result.blocks.push_back(std::move(collapsed));
  }
  for (std::size_t i = 0; i < result.blocks.size(); ++i) {
    if (i) result.text.push_back('\n');
    result.text += result.blocks[i];
  }
  return result;
}

FilteredText collect_document(const ProfileDocument& doc, bool prune_hidden) {
  if (doc.format != DocFormat::kHtml) return canonicalize_plain(doc.content);
  Node root = html::parse(doc.content);
  TextCollector collector;
  collect_text(root, prune_hidden, "#FFFFFF", collector);
  collector.flush();
  FilteredText result;
  result.blocks = std::move(collector.blocks);
  for (std::size_t i = 0; i < result.blocks.size(); ++i) {
    if (i) result.text.push_back('\n');
    result.text += result.blocks[i];
  }
  return result;
}

// --- Markdown conversion ----------------------------------------------------

struct MarkdownWriter {
  std::vector<std::string> blocks;

  void add_block(std::string_view text) {
    std::string collapsed = collapse_whitespace(text);
    if (!collapsed.empty()) blocks.emplace_back(std::move(collapsed));
  }
};

std::string inline_markdown(const Node& node);

std::string inline_children(const Node& node) {
  std::string out;
  for (const Node& child : node.children) out += inline_markdown(child);
  return out;
}

std::string inline_markdown(const Node& node) {
  switch (node.kind) {
    case Node::Kind::kText:
      return node.text;
    case Node::Kind::kComment:
    case Node::Kind::kDoctype:
      return "";
    case Node::Kind::kDocument:
      return inline_children(node);
    case Node::Kind::kElement:
      break;
  }
  if (node.tag == "head" || html::is_raw_text_element(node.tag)) return "";
  if (node.tag == "br") return " ";
  if (node.tag == "img") {
    const std::string* alt = node.attr("alt");
    return alt ? *alt : "";
  }
  if (node.tag == "a") {
    const std::string* href = node.attr("href");
    std::string text = collapse_whitespace(inline_children(node));
    if (href && !href->empty()) return "[" + text + "](" + *href + ")";
    return text;
  }
  if (node.tag == "strong" || node.tag == "b") {
    return "**" + collapse_whitespace(inline_children(node)) + "**";
  }
  if (node.tag == "em" || node.tag == "i") {
    return "*" + collapse_whitespace(inline_children(node)) + "*";
  }
  if (node.tag == "code") {
    return "`" + collapse_whitespace(inline_children(node)) + "`";
  }
  return inline_children(node);
}

int heading_level(std::string_view tag) {
  if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') {
    return tag[1] - '0';
  }
  return 0;
}

void markdown_node(const Node& node, MarkdownWriter& out);

void markdown_children(const Node& node, MarkdownWriter& out) {
  // Consecutive inline children form one paragraph; block children recurse.
  std::string run;
  auto flush_run = [&] {
    out.add_block(run);
    run.clear();
  };
  for (const Node& child : node.children) {
    const bool is_block =
        child.kind == Node::Kind::kElement &&
        (html::is_block_element(child.tag) || heading_level(child.tag) > 0);
    if (is_block) {
      flush_run();
      markdown_node(child, out);
    } else {
      run += inline_markdown(child);
    }
  }
  flush_run();
}

void markdown_node(const Node& node, MarkdownWriter& out) {
  if (node.kind == Node::Kind::kDocument) {
    markdown_children(node, out);
    return;
  }
  if (node.kind != Node::Kind::kElement) return;
  if (node.tag == "head" || html::is_raw_text_element(node.tag)) return;

  if (int level = heading_level(node.tag); level > 0) {
    out.add_block(std::string(static_cast<std::size_t>(level), '#') + " " +
                  inline_children(node));
    return;
  }
  if (node.tag == "ul" || node.tag == "ol") {
    int index = 1;
    std::vector<std::string> items;
    for (const Node& child : node.children) {
      if (child.kind != Node::Kind::kElement || child.tag != "li") continue;
      std::string text = collapse_whitespace(inline_children(child));
      if (text.empty()) continue;
      if (node.tag == "ul") {
        items.push_back("- " + text);
      } else {
        items.push_back(std::to_string(index) + ". " + text);
      }
      ++index;
    }
    if (!items.empty()) {
      std::string block;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) block.push_back('\n');
        block += items[i];
      }
      out.blocks.push_back(std::move(block));
    }
    return;
  }
  if (node.tag == "tr") {
    std::string row;
    for (const Node& child : node.children) {
      if (child.kind != Node::Kind::kElement ||
          (child.tag != "td" && child.tag != "th")) {
        continue;
      }
      std::string cell = collapse_whitespace(inline_children(child));
      if (!row.empty()) row += " | ";
      row += cell;
    }
    out.add_block(row);
    return;
  }
  markdown_children(node, out);
}

}  // namespace

FilteredText filter_redundant(const ProfileDocument& doc) {
  return collect_document(doc, /*prune_hidden=*/false);
}

std::string visible_text(const ProfileDocument& doc) {
  return collect_document(doc, /*prune_hidden=*/true).text;
}

ProfileDocument html_to_markdown(const ProfileDocument& doc) {
  ProfileDocument out;
  out.id = doc.id;
  out.source = doc.source;
  out.format = DocFormat::kMarkdown;
  if (doc.format != DocFormat::kHtml) {
    out.content = doc.content;
    return out;
  }
  Node root = html::parse(doc.content);
  MarkdownWriter writer;
  markdown_node(root, writer);
  for (std::size_t i = 0; i < writer.blocks.size(); ++i) {
    if (i) out.content += "\n\n";
    out.content += writer.blocks[i];
  }
  return out;
}

std::string subtree_text(const html::Node& node) {
  TextCollector collector;
  collect_text(node, /*prune_hidden=*/false, "#FFFFFF", collector);
  collector.flush();
  std::string out;
  for (std::size_t i = 0; i < collector.blocks.size(); ++i) {
    if (i) out.push_back('\n');
    out += collector.blocks[i];
  }
  return out;
}

Extraction normalize_absence(std::string_view answer) {
  std::string trimmed = trim(answer);
  if (trimmed.empty()) return std::nullopt;
  std::string canon = to_lower_ascii(collapse_whitespace(trimmed));
  for (const std::string& marker : absence_markers()) {
    if (canon == marker) return std::nullopt;
  }
  static const std::regex kAbsencePhrase(
      R"(^(?:my\s+|the\s+)?(?:[a-z-]+\s+){0,5}?is\s+(?:unknown|not\s+available|not\s+provided|not\s+found)[.!]?$)");
  if (std::regex_match(canon, kAbsencePhrase)) return std::nullopt;
  return trimmed;
}

const std::vector<std::string>& absence_markers() {
  static const std::vector<std::string> kMarkers = {
      "none",         "n/a",          "na",        "unknown",
      "not available", "not provided", "not found", "null",
  };
  return kMarkers;
}

std::vector<std::pair<std::string, std::string>> parse_style(
    std::string_view style) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& decl : split(style, ';')) {
    std::size_t colon = decl.find(':');
    if (colon == std::string::npos) continue;
    std::string prop = to_lower_ascii(trim(decl.substr(0, colon)));
    std::string value = trim(decl.substr(colon + 1));
    if (!prop.empty() && !value.empty()) out.emplace_back(prop, value);
  }
  return out;
}

std::optional<std::string> normalize_color(std::string_view color) {
  std::string c = to_lower_ascii(trim(color));
  static const std::vector<std::pair<std::string, std::string>> kNamed = {
      {"white", "#FFFFFF"}, {"black", "#000000"}, {"red", "#FF0000"},
      {"green", "#008000"}, {"blue", "#0000FF"},  {"yellow", "#FFFF00"},
      {"gray", "#808080"},  {"grey", "#808080"},  {"silver", "#C0C0C0"},
      {"transparent", "#FFFFFF"},
  };
  for (const auto& [name, hex] : kNamed) {
    if (c == name) return hex;
  }
  auto hex_digit = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    return -1;
  };
  if (!c.empty() && c[0] == '#') {
    std::string digits = c.substr(1);
    if (digits.size() == 3) {
      std::string expanded;
      for (char ch : digits) {
        expanded.push_back(ch);
        expanded.push_back(ch);
      }
      digits = expanded;
    }
    if (digits.size() != 6) return std::nullopt;
    std::string out = "#";
    for (char ch : digits) {
      if (hex_digit(ch) < 0) return std::nullopt;
      out.push_back(
          static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    return out;
  }
  if (c.rfind("rgb(", 0) == 0 && c.back() == ')') {
    std::vector<std::string> parts = split(c.substr(4, c.size() - 5), ',');
    if (parts.size() != 3) return std::nullopt;
    char buf[8];
    int values[3];
    for (int i = 0; i < 3; ++i) {
      std::string part = trim(parts[static_cast<std::size_t>(i)]);
      if (part.empty()) return std::nullopt;
      for (char ch : part) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
      }
      values[i] = std::stoi(part);
      if (values[i] > 255) return std::nullopt;
    }
    std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", values[0], values[1],
                  values[2]);
    return std::string(buf);
  }
  return std::nullopt;
}

}  // namespace pie::processing
