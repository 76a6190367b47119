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

#include "pie/html.hpp"

#include <array>
#include <cctype>
#include <cstdint>
#include <map>

#include "pie/core.hpp"

namespace pie::html {
namespace {

constexpr std::size_t kMaxDepth = 512;

constexpr std::array<std::string_view, 14> kVoidElements = {
    "area", "base",  "br",   "col",  "embed",  "hr",    "img",
    "input", "link", "meta", "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 30> kBlockElements = {
    "address", "article", "aside", "blockquote", "body", "div",  "dl",
    "dd",      "dt",      "footer", "h1",        "h2",   "h3",   "h4",
    "h5",      "h6",      "header", "hr",        "html", "li",   "main",
    "nav",     "ol",      "p",      "section",   "table", "td",  "th",
    "tr",      "ul"};

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Tags that implicitly close an open element with the same role.
// Opening a key while the top of the stack is one of the values pops it.
bool implies_end(std::string_view opening, std::string_view open_top) {
  if (opening == "li" && open_top == "li") return true;
  if ((opening == "dt" || opening == "dd") &&
      (open_top == "dt" || open_top == "dd")) {
    return true;
  }
  if (opening == "tr" && (open_top == "tr" || open_top == "td" ||
                          open_top == "th")) {
    return true;
  }
  if ((opening == "td" || opening == "th") &&
      (open_top == "td" || open_top == "th")) {
    return true;
  }
  if (opening == "option" && open_top == "option") return true;
  if (open_top == "p" && is_block_element(opening) && opening != "body" &&
      opening != "html") {
    return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(const std::string& input) : in_(input) {}

  Node run() {
    Node doc;
    doc.kind = Node::Kind::kDocument;
    stack_.push_back(&doc);
    std::string text;

    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c == '\0') throw UnparsableDocument("NUL byte in document");
      if (c != '<') {
        text.push_back(c);
        ++pos_;
        continue;
      }
      // Only a handful of constructs start with '<'; anything else is text.
      if (starts_with("<!--")) {
        flush_text(text);
        parse_comment();
      } else if (starts_with("<!")) {
        flush_text(text);
        parse_declaration();
      } else if (starts_with("</")) {
        if (pos_ + 2 < in_.size() && is_ascii_alpha(in_[pos_ + 2])) {
          flush_text(text);
          parse_close_tag();
        } else {
          text.push_back(c);
          ++pos_;
        }
      } else if (pos_ + 1 < in_.size() && is_ascii_alpha(in_[pos_ + 1])) {
        flush_text(text);
        parse_open_tag();
      } else {
        text.push_back(c);
        ++pos_;
      }
    }
    flush_text(text);
    return doc;
  }

 private:
  bool starts_with(std::string_view prefix) const {
    return in_.compare(pos_, prefix.size(), prefix) == 0;
  }

  void flush_text(std::string& text) {
    if (text.empty()) return;
    Node node;
    node.kind = Node::Kind::kText;
    node.text = decode_entities(text);
    stack_.back()->children.push_back(std::move(node));
    text.clear();
  }

  void parse_comment() {
    pos_ += 4;  // <!--
    std::size_t end = in_.find("-->", pos_);
    Node node;
    node.kind = Node::Kind::kComment;
    if (end == std::string::npos) {
      node.text = in_.substr(pos_);
      pos_ = in_.size();
    } else {
      node.text = in_.substr(pos_, end - pos_);
      pos_ = end + 3;
    }
    stack_.back()->children.push_back(std::move(node));
  }

  void parse_declaration() {
    pos_ += 2;  // <!
    std::size_t end = in_.find('>', pos_);
    Node node;
    node.kind = Node::Kind::kDoctype;
    if (end == std::string::npos) {
      node.text = in_.substr(pos_);
      pos_ = in_.size();
    } else {
      node.text = in_.substr(pos_, end - pos_);
      pos_ = end + 1;
    }
    stack_.back()->children.push_back(std::move(node));
  }

  std::string read_tag_name() {
    std::string name;
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (is_ascii_alpha(c) || (c >= '0' && c <= '9') || c == '-' ||
          c == '_' || c == ':') {
        name.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        ++pos_;
      } else {
        break;
      }
    }
    return name;
  }

  void skip_ws() {
    while (pos_ < in_.size() &&
           std::isspace(static_cast<unsigned char>(in_[pos_]))) {
      ++pos_;
    }
  }

  void parse_close_tag() {
    pos_ += 2;  // </
    std::string name = read_tag_name();
    std::size_t end = in_.find('>', pos_);
    pos_ = (end == std::string::npos) ? in_.size() : end + 1;
    // Pop to the matching element; a stray close tag is ignored.
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag == name) {
        stack_.resize(i);
        return;
      }
    }
  }

  void parse_open_tag() {
    ++pos_;  // <
    Node node;
    node.kind = Node::Kind::kElement;
    node.tag = read_tag_name();

    bool self_closing = false;
    while (pos_ < in_.size()) {
      skip_ws();
      if (pos_ >= in_.size()) break;
      char c = in_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < in_.size() && in_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      parse_attribute(node);
    }

    while (stack_.size() > 1 && implies_end(node.tag, stack_.back()->tag)) {
      stack_.pop_back();
    }
    if (stack_.size() >= kMaxDepth) {
      throw UnparsableDocument("element nesting exceeds limit");
    }

    const bool is_void = is_void_element(node.tag);
    const bool raw = is_raw_text_element(node.tag);
    stack_.back()->children.push_back(std::move(node));
    Node* elem = &stack_.back()->children.back();
    if (raw) {
      read_raw_text(*elem);
      return;
    }
    if (!is_void && !self_closing) stack_.push_back(elem);
  }

  void parse_attribute(Node& node) {
    Attribute attr;
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c == '=' || c == '>' || c == '/' ||
          std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      attr.name.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++pos_;
    }
    if (attr.name.empty()) {
      ++pos_;  // skip a stray character so the loop advances
      return;
    }
    skip_ws();
    if (pos_ < in_.size() && in_[pos_] == '=') {
      ++pos_;
      skip_ws();
      if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
        char quote = in_[pos_++];
        std::size_t end = in_.find(quote, pos_);
        if (end == std::string::npos) {
          attr.value = decode_entities(in_.substr(pos_));
          pos_ = in_.size();
        } else {
          attr.value = decode_entities(in_.substr(pos_, end - pos_));
          pos_ = end + 1;
        }
      } else {
        std::string raw;
        while (pos_ < in_.size() && in_[pos_] != '>' &&
               !std::isspace(static_cast<unsigned char>(in_[pos_]))) {
          raw.push_back(in_[pos_++]);
        }
        attr.value = decode_entities(raw);
      }
    }
    node.attrs.push_back(std::move(attr));
  }

  void read_raw_text(Node& elem) {
    // script/style content runs verbatim until the matching close tag.
    std::string close = "</" + elem.tag;
    std::size_t end = std::string::npos;
    std::size_t search = pos_;
    while (search < in_.size()) {
      std::size_t hit = in_.find(close, search);
      if (hit == std::string::npos) break;
      std::size_t after = hit + close.size();
      if (after >= in_.size() || in_[after] == '>' ||
          std::isspace(static_cast<unsigned char>(in_[after]))) {
        end = hit;
        break;
      }
      search = hit + 1;
    }
    Node text;
    text.kind = Node::Kind::kText;
    if (end == std::string::npos) {
      text.text = in_.substr(pos_);
      pos_ = in_.size();
    } else {
      text.text = in_.substr(pos_, end - pos_);
      std::size_t gt = in_.find('>', end);
      pos_ = (gt == std::string::npos) ? in_.size() : gt + 1;
    }
    if (!text.text.empty()) elem.children.push_back(std::move(text));
  }

  const std::string& in_;
  std::size_t pos_ = 0;
  std::vector<Node*> stack_;
};

void serialize_node(const Node& node, std::string& out) {
  switch (node.kind) {
    case Node::Kind::kDocument:
      for (const Node& child : node.children) serialize_node(child, out);
      return;
    case Node::Kind::kText:
      out += encode_text(node.text);
      return;
    case Node::Kind::kComment:
      out += "<!--" + node.text + "-->";
      return;
    case Node::Kind::kDoctype:
      out += "<!" + node.text + ">";
      return;
    case Node::Kind::kElement:
      break;
  }
  out.push_back('<');
  out += node.tag;
  for (const Attribute& attr : node.attrs) {
    out.push_back(' ');
    out += attr.name;
    out += "=\"";
    out += encode_attribute(attr.value);
    out.push_back('"');
  }
  out.push_back('>');
  if (is_void_element(node.tag)) return;
  if (is_raw_text_element(node.tag)) {
    for (const Node& child : node.children) out += child.text;
  } else {
    for (const Node& child : node.children) serialize_node(child, out);
  }
  out += "</" + node.tag + ">";
}

}  // namespace

const std::string* Node::attr(std::string_view name) const {
  for (const Attribute& a : attrs) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

std::string* Node::attr(std::string_view name) {
  for (Attribute& a : attrs) {
    if (a.name == name) return &a.value;
  }
  return nullptr;
}

void Node::set_attr(std::string_view name, std::string_view value) {
  if (std::string* existing = attr(name)) {
    *existing = std::string(value);
    return;
  }
  attrs.push_back({std::string(name), std::string(value)});
}

bool Node::has_class(std::string_view cls) const {
  const std::string* value = attr("class");
  if (!value) return false;
  for (const std::string& token : pie::split(*value, ' ')) {
    if (token == cls) return true;
  }
  return false;
}

Node parse(const std::string& input) { return Parser(input).run(); }

std::string serialize(const Node& node) {
  std::string out;
  out.reserve(256);
  serialize_node(node, out);
  return out;
}

std::string decode_entities(std::string_view s) {
  static const std::map<std::string, std::string, std::less<>> kNamed = {
      {"amp", "&"},  {"lt", "<"},   {"gt", ">"},
      {"quot", "\""}, {"apos", "'"}, {"nbsp", " "},
  };
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string_view body = s.substr(i + 1, semi - i - 1);
    if (!body.empty() && body[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = body.size() > 1;
      if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
        for (char c : body.substr(2)) {
          if (!std::isxdigit(static_cast<unsigned char>(c))) { ok = false; break; }
          cp = cp * 16 + static_cast<std::uint32_t>(
              std::isdigit(static_cast<unsigned char>(c))
                  ? c - '0'
                  : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
        }
      } else {
        for (char c : body.substr(1)) {
          if (!std::isdigit(static_cast<unsigned char>(c))) { ok = false; break; }
          cp = cp * 10 + static_cast<std::uint32_t>(c - '0');
        }
      }
      if (ok && cp > 0 && cp <= 0x10FFFF) {
        if (cp < 0x80) {
          out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
          out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
          out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
          out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
          out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
        i = semi + 1;
        continue;
      }
    } else if (auto it = kNamed.find(body); it != kNamed.end()) {
      out += it->second;
      i = semi + 1;
      continue;
    }
    out.push_back(s[i++]);  // unknown entity stays literal
  }
  return out;
}

std::string encode_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string encode_attribute(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

bool is_void_element(std::string_view tag) {
  for (std::string_view v : kVoidElements) {
    if (v == tag) return true;
  }
  return false;
}

bool is_block_element(std::string_view tag) {
  for (std::string_view v : kBlockElements) {
    if (v == tag) return true;
  }
  return false;
}

bool is_raw_text_element(std::string_view tag) {
  return tag == "script" || tag == "style";
}

void for_each_element(Node& root, const std::function<bool(Node&)>& visit) {
  if (root.kind == Node::Kind::kElement && !visit(root)) return;
  for (Node& child : root.children) for_each_element(child, visit);
}

void for_each_element(const Node& root,
                      const std::function<bool(const Node&)>& visit) {
  if (root.kind == Node::Kind::kElement && !visit(root)) return;
  for (const Node& child : root.children) for_each_element(child, visit);
}

}  // namespace pie::html
