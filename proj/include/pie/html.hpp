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

#ifndef PIE_HTML_HPP_
#define PIE_HTML_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// A small error-recovering HTML parser and serializer. It handles the
// document shapes this toolkit produces and ingests: nested elements,
// attributes (order preserved), comments, doctype, raw-text script/style,
// void elements and a few implied end tags. It is not a full HTML5 parser.
namespace pie::html {

// Thrown when a document cannot be turned into a DOM at all (binary input,
// pathological nesting). Plain tag soup never throws; it is recovered.
class UnparsableDocument : public std::runtime_error {
 public:
  explicit UnparsableDocument(const std::string& what)
      : std::runtime_error(what) {}
};

struct Attribute {
  std::string name;   // lowercase
  std::string value;  // entity-decoded
};

struct Node {
  enum class Kind { kDocument, kElement, kText, kComment, kDoctype };

  Kind kind = Kind::kDocument;
  std::string tag;   // lowercase; elements only
  std::string text;  // text (decoded) / comment body / doctype body
  std::vector<Attribute> attrs;
  std::vector<Node> children;

  // Returns the attribute value or nullptr.
  const std::string* attr(std::string_view name) const;
  std::string* attr(std::string_view name);
  void set_attr(std::string_view name, std::string_view value);
  bool has_class(std::string_view cls) const;
};

// Parses `input` into a document node. Unclosed tags are closed at EOF,
// stray close tags are dropped, unterminated comments run to EOF.
Node parse(const std::string& input);

// Serializes a DOM back to HTML. Text and attribute values are re-encoded;
// attribute order and document structure are preserved.
std::string serialize(const Node& node);

std::string decode_entities(std::string_view s);
std::string encode_text(std::string_view s);        // escapes & < >
std::string encode_attribute(std::string_view s);   // escapes & < > "

bool is_void_element(std::string_view tag);
bool is_block_element(std::string_view tag);
bool is_raw_text_element(std::string_view tag);

// Pre-order traversal over element nodes. Return false to skip the subtree.
void for_each_element(Node& root, const std::function<bool(Node&)>& visit);
void for_each_element(const Node& root,
                      const std::function<bool(const Node&)>& visit);

}  // namespace pie::html

#endif  // PIE_HTML_HPP_
