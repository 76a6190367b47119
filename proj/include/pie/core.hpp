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

#ifndef PIE_CORE_HPP_
#define PIE_CORE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Core domain model shared by every other module: the eight personal
// information categories, profile documents, ground-truth labels, dataset
// manifests and extraction records, plus the small string utilities the rest
// of the toolkit builds on.
namespace pie {

// Thrown when a manifest file violates the schema (bad JSON, missing or
// unknown label keys, duplicate ids, empty profile content).
class MalformedManifest : public std::runtime_error {
 public:
  explicit MalformedManifest(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when a manifest entry points at a profile file that cannot be read.
class MissingProfileFile : public std::runtime_error {
 public:
  explicit MissingProfileFile(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown for generic filesystem failures (unwritable output, rename failure).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// The eight categories of personal information handled by the toolkit.
// The declaration order is the canonical order used for deterministic
// iteration everywhere (prompt crafting, report columns, dataset layout).
enum class CategoryId {
  kEmailAddress = 0,
  kPhoneNumber,
  kMailingAddress,
  kName,
  kWorkExperience,
  kEducationExperience,
  kAffiliation,
  kOccupation,
};

inline constexpr std::array<CategoryId, 8> kAllCategories = {
    CategoryId::kEmailAddress,     CategoryId::kPhoneNumber,
    CategoryId::kMailingAddress,   CategoryId::kName,
    CategoryId::kWorkExperience,   CategoryId::kEducationExperience,
    CategoryId::kAffiliation,      CategoryId::kOccupation,
};

// Stable snake_case key used in manifests, result records and reports.
std::string_view category_key(CategoryId id);

// Human-readable phrase used inside prompts ("email address", ...).
std::string_view category_phrase(CategoryId id);

// Inverse of category_key. Also accepts the short CLI aliases
// ("email", "tel", "phone", "mail", "address", "edu", ...).
std::optional<CategoryId> category_from_key(std::string_view key);

// An extracted or labelled value. Absent (std::nullopt) means the
// information is genuinely not present; it is distinct from an empty string,
// which is never stored.
using Extraction = std::optional<std::string>;

enum class DocFormat { kHtml, kMarkdown, kPlainText };
enum class DocSource { kSynthetic, kIngested };

std::string_view format_key(DocFormat f);
std::optional<DocFormat> format_from_key(std::string_view key);

// One personal profile document. `content` is the raw document body in the
// given format, already NFC-normalized. Invariant: id and content non-empty.
struct ProfileDocument {
  std::string id;
  DocFormat format = DocFormat::kHtml;
  DocSource source = DocSource::kSynthetic;
  std::string content;
};

// Ground-truth labels for one profile: exactly one slot per category.
// An Absent slot means the profile genuinely lacks that information.
struct GroundTruthRecord {
  std::string profile_id;
  std::map<CategoryId, Extraction> labels;

  const Extraction& label(CategoryId id) const;
};

// One dataset entry: a document together with its labels and the relative
// path the document was loaded from (or will be written to).
struct ManifestEntry {
  std::string profile_path;
  ProfileDocument document;
  GroundTruthRecord truth;
  // Optional provenance: the generator style that produced the profile.
  std::optional<std::string> style;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(std::string_view profile_id) const;
};

// Loads a manifest JSON file and every profile document it references.
// Paths inside the manifest are resolved relative to the manifest's
// directory. All text (document content, labels, names) is NFC-normalized.
// Throws MalformedManifest on schema violations and MissingProfileFile when
// a referenced document cannot be read.
DatasetManifest load_manifest(const std::filesystem::path& manifest_path);

// Writes manifest.json plus every profile document under `out_dir`.
// Round-trips through load_manifest: labels, ids, formats, styles and
// document bytes are preserved exactly.
void save_dataset(const DatasetManifest& manifest,
                  const std::filesystem::path& out_dir);

// The outcome of one extraction attempt for one (profile, category) pair.
struct ExtractionRecord {
  std::string run_id;
  std::string profile_id;
  CategoryId category = CategoryId::kEmailAddress;
  std::string extractor;
  Extraction extracted;  // Absent or a non-empty trimmed value.
  std::optional<std::string> prompt_fingerprint;
  std::string timestamp;  // ISO-8601 UTC.
  std::optional<std::string> defense;
  std::optional<std::string> error;
};

std::string extraction_record_to_json(const ExtractionRecord& rec);
ExtractionRecord extraction_record_from_json(const std::string& line);

// --- String utilities -------------------------------------------------------

// Strips ASCII whitespace from both ends.
std::string trim(std::string_view s);

// Lowercases ASCII letters only; multi-byte UTF-8 sequences pass through.
std::string to_lower_ascii(std::string_view s);

// Collapses every run of ASCII whitespace to a single space and trims.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Canonical Unicode composition for the Latin combining sequences that occur
// in personal names (grave, acute, circumflex, tilde, diaeresis, ring above,
// cedilla). Sequences outside the table pass through unchanged.
std::string nfc_normalize(std::string_view s);

// FNV-1a 64-bit hash, used for fingerprints, cache keys and seed derivation.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t fnv1a64(std::uint64_t seed, std::string_view s);
std::string to_hex16(std::uint64_t v);

// Current wall-clock time formatted as ISO-8601 UTC (seconds precision).
std::string iso8601_utc_now();

}  // namespace pie

#endif  // PIE_CORE_HPP_
