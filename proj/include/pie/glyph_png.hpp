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

#ifndef PIE_GLYPH_PNG_HPP_
#define PIE_GLYPH_PNG_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

// Deterministic text rasterizer for the text-to-image defense. Renders a
// single line of printable ASCII with an embedded 5x7 column font (one
// descender row, so 8 pixel rows per glyph) into an 8-bit grayscale PNG.
namespace pie::defense {

// Thrown when the text contains a character outside printable ASCII
// (0x20..0x7E); the embedded font has no glyph for it.
class GlyphMissing : public std::runtime_error {
 public:
  explicit GlyphMissing(const std::string& what) : std::runtime_error(what) {}
};

// Raw PNG bytes for the rendered text. Black glyphs on a white background,
// one pixel margin on every side. Identical input yields identical bytes.
std::string render_text_png(std::string_view text);

// "data:image/png;base64,..." form of render_text_png.
std::string render_text_data_uri(std::string_view text);

// Standard base64 with padding; needed here for data URIs but generally
// useful for fixtures.
std::string base64_encode(std::string_view bytes);

}  // namespace pie::defense

#endif  // PIE_GLYPH_PNG_HPP_
