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

#include "pie/core.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pie {
namespace {

using nlohmann::json;

struct CategoryInfo {
  CategoryId id;
  std::string_view key;
  std::string_view phrase;
};

constexpr std::array<CategoryInfo, 8> kCategoryTable = {{
    {CategoryId::kEmailAddress, "email_address", "email address"},
    {CategoryId::kPhoneNumber, "phone_number", "phone number"},
    {CategoryId::kMailingAddress, "mailing_address", "mailing address"},
    {CategoryId::kName, "name", "name"},
    {CategoryId::kWorkExperience, "work_experience", "work experience"},
    {CategoryId::kEducationExperience, "education_experience",
     "education experience"},
    {CategoryId::kAffiliation, "affiliation", "affiliation"},
    {CategoryId::kOccupation, "occupation", "occupation"},
}};

const CategoryInfo& info_for(CategoryId id) {
  return kCategoryTable[static_cast<std::size_t>(id)];
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingProfileFile("cannot open profile file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw MissingProfileFile("read failure: " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failure: " + path.string());
}

// UTF-8 <-> codepoint helpers for nfc_normalize. Invalid sequences are
// passed through byte by byte so normalization never throws.
std::vector<std::uint32_t> decode_utf8(std::string_view s) {
  std::vector<std::uint32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::uint32_t cp = c;
    std::size_t len = 1;
    if (c >= 0xF0 && i + 3 < s.size()) {
      cp = (c & 0x07u) << 18 | (s[i + 1] & 0x3Fu) << 12 |
           (s[i + 2] & 0x3Fu) << 6 | (s[i + 3] & 0x3Fu);
      len = 4;
    } else if (c >= 0xE0 && i + 2 < s.size()) {
      cp = (c & 0x0Fu) << 12 | (s[i + 1] & 0x3Fu) << 6 | (s[i + 2] & 0x3Fu);
      len = 3;
    } else if (c >= 0xC0 && i + 1 < s.size()) {
      cp = (c & 0x1Fu) << 6 | (s[i + 1] & 0x3Fu);
      len = 2;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
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
}

// Composition table for the Latin combining marks that occur in names.
// Keyed by (base << 16) | combining-mark codepoint.
std::uint32_t compose_pair(std::uint32_t base, std::uint32_t mark) {
  struct Entry {
    std::uint32_t mark;
    std::string_view bases;
    std::string_view composed;  // UTF-8, same order as bases
  };
  static const Entry kTable[] = {
      {0x0300, "AEIOUaeiou", "ÀÈÌÒÙàèìòù"},
      {0x0301, "AEIOUYaeiouyCcNnSsZz", "ÁÉÍÓÚÝáéíóúýĆćŃńŚśŹź"},
      {0x0302, "AEIOUaeiou", "ÂÊÎÔÛâêîôû"},
      {0x0303, "ANOano", "ÃÑÕãñõ"},
      {0x0308, "AEIOUaeiouy", "ÄËÏÖÜäëïöüÿ"},
      {0x030A, "Aa", "Åå"},
      {0x0327, "Cc", "Çç"},
  };
  for (const auto& entry : kTable) {
    if (entry.mark != mark) continue;
    auto composed = decode_utf8(entry.composed);
    for (std::size_t i = 0; i < entry.bases.size(); ++i) {
      if (static_cast<std::uint32_t>(entry.bases[i]) == base) {
        return composed[i];
      }
    }
  }
  return 0;
}

Extraction label_from_json(const json& v, const std::string& context) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) {
    throw MalformedManifest("label must be string or null: " + context);
  }
  std::string s = nfc_normalize(v.get<std::string>());
  std::string trimmed = trim(s);
  if (trimmed.empty()) {
    throw MalformedManifest("label must not be empty: " + context);
  }
  return trimmed;
}

}  // namespace

std::string_view category_key(CategoryId id) { return info_for(id).key; }
std::string_view category_phrase(CategoryId id) { return info_for(id).phrase; }

std::optional<CategoryId> category_from_key(std::string_view key) {
  std::string k = to_lower_ascii(trim(key));
  for (const auto& entry : kCategoryTable) {
    if (k == entry.key) return entry.id;
  }
  if (k == "email" || k == "e-mail" || k == "mail_address") {
    return CategoryId::kEmailAddress;
  }
  if (k == "tel" || k == "phone" || k == "telephone") {
    return CategoryId::kPhoneNumber;
  }
  if (k == "mail" || k == "address" || k == "mailing") {
    return CategoryId::kMailingAddress;
  }
  if (k == "work") return CategoryId::kWorkExperience;
  if (k == "education" || k == "edu") return CategoryId::kEducationExperience;
  return std::nullopt;
}

std::string_view format_key(DocFormat f) {
  switch (f) {
    case DocFormat::kHtml: return "html";
    case DocFormat::kMarkdown: return "markdown";
    case DocFormat::kPlainText: return "text";
  }
  return "html";
}

std::optional<DocFormat> format_from_key(std::string_view key) {
  std::string k = to_lower_ascii(trim(key));
  if (k == "html") return DocFormat::kHtml;
  if (k == "markdown" || k == "md") return DocFormat::kMarkdown;
  if (k == "text" || k == "txt" || k == "plain") return DocFormat::kPlainText;
  return std::nullopt;
}

const Extraction& GroundTruthRecord::label(CategoryId id) const {
  static const Extraction kAbsent;
  auto it = labels.find(id);
  return it == labels.end() ? kAbsent : it->second;
}

const ManifestEntry* DatasetManifest::find(std::string_view profile_id) const {
  for (const auto& entry : entries) {
    if (entry.document.id == profile_id) return &entry;
  }
  return nullptr;
}

DatasetManifest load_manifest(const std::filesystem::path& manifest_path) {
  json root;
  {
    std::ifstream in(manifest_path);
    if (!in) {
      throw MalformedManifest("cannot open manifest: " + manifest_path.string());
    }
    try {
      in >> root;
    } catch (const json::exception& e) {
      throw MalformedManifest(std::string("manifest is not valid JSON: ") +
                              e.what());
    }
  }
  if (!root.is_object() || !root.contains("name") || !root.contains("entries")) {
    throw MalformedManifest("manifest must be an object with name and entries");
  }
  if (!root["entries"].is_array()) {
    throw MalformedManifest("entries must be an array");
  }

  DatasetManifest manifest;
  manifest.name = nfc_normalize(root["name"].get<std::string>());
  const auto base_dir = manifest_path.parent_path();
  std::set<std::string> seen_ids;

  for (const auto& je : root["entries"]) {
    if (!je.is_object()) throw MalformedManifest("entry must be an object");
    for (const char* field : {"id", "profile_path", "format", "labels"}) {
      if (!je.contains(field)) {
        throw MalformedManifest(std::string("entry missing field: ") + field);
      }
    }
    ManifestEntry entry;
    entry.document.id = je["id"].get<std::string>();
    if (entry.document.id.empty()) throw MalformedManifest("entry id is empty");
    if (!seen_ids.insert(entry.document.id).second) {
      throw MalformedManifest("duplicate profile id: " + entry.document.id);
    }
    entry.profile_path = je["profile_path"].get<std::string>();
    auto format = format_from_key(je["format"].get<std::string>());
    if (!format) {
      throw MalformedManifest("unknown format for entry " + entry.document.id);
    }
    entry.document.format = *format;
    entry.document.source = DocSource::kIngested;
    if (je.contains("style") && je["style"].is_string()) {
      entry.style = je["style"].get<std::string>();
    }

    const json& labels = je["labels"];
    if (!labels.is_object()) {
      throw MalformedManifest("labels must be an object: " + entry.document.id);
    }
    for (const auto& [key, value] : labels.items()) {
      auto cat = category_from_key(key);
      if (!cat || key != category_key(*cat)) {
        throw MalformedManifest("unknown category key '" + key +
                                "' in entry " + entry.document.id);
      }
      entry.truth.labels[*cat] =
          label_from_json(value, entry.document.id + "/" + key);
    }
    for (CategoryId cat : kAllCategories) {
      if (!entry.truth.labels.count(cat)) {
        throw MalformedManifest("entry " + entry.document.id +
                                " missing label slot: " +
                                std::string(category_key(cat)));
      }
    }
    entry.truth.profile_id = entry.document.id;

    entry.document.content =
        nfc_normalize(read_file(base_dir / entry.profile_path));
    if (trim(entry.document.content).empty()) {
      throw MalformedManifest("profile content is empty: " + entry.document.id);
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void save_dataset(const DatasetManifest& manifest,
                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + out_dir.string());

  json entries = json::array();
  for (const auto& entry : manifest.entries) {
    json labels = json::object();
    for (CategoryId cat : kAllCategories) {
      const Extraction& label = entry.truth.label(cat);
      labels[std::string(category_key(cat))] =
          label ? json(*label) : json(nullptr);
    }
    json je = {
        {"id", entry.document.id},
        {"profile_path", entry.profile_path},
        {"format", std::string(format_key(entry.document.format))},
        {"labels", labels},
    };
    if (entry.style) je["style"] = *entry.style;
    entries.push_back(je);
    write_file(out_dir / entry.profile_path, entry.document.content);
  }
  json root = {{"name", manifest.name}, {"entries", entries}};
  write_file(out_dir / "manifest.json", root.dump(2) + "\n");
}

std::string extraction_record_to_json(const ExtractionRecord& rec) {
  json j = {
      {"run_id", rec.run_id},
      {"profile_id", rec.profile_id},
      {"category", std::string(category_key(rec.category))},
      {"extractor", rec.extractor},
      {"extracted", rec.extracted ? json(*rec.extracted) : json(nullptr)},
      {"timestamp", rec.timestamp},
  };
  if (rec.prompt_fingerprint) j["prompt_fingerprint"] = *rec.prompt_fingerprint;
  if (rec.defense) j["defense"] = *rec.defense;
  if (rec.error) j["error"] = *rec.error;
  return j.dump();
}

ExtractionRecord extraction_record_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError(std::string("bad record line: ") + e.what());
  }
  ExtractionRecord rec;
  rec.run_id = j.at("run_id").get<std::string>();
  rec.profile_id = j.at("profile_id").get<std::string>();
  auto cat = category_from_key(j.at("category").get<std::string>());
  if (!cat) throw IoError("bad record category");
  rec.category = *cat;
  rec.extractor = j.at("extractor").get<std::string>();
  if (!j.at("extracted").is_null()) {
    rec.extracted = j["extracted"].get<std::string>();
  }
  rec.timestamp = j.value("timestamp", "");
  if (j.contains("prompt_fingerprint")) {
    rec.prompt_fingerprint = j["prompt_fingerprint"].get<std::string>();
  }
  if (j.contains("defense")) rec.defense = j["defense"].get<std::string>();
  if (j.contains("error")) rec.error = j["error"].get<std::string>();
  return rec;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_ws = true;
      continue;
    }
    if (in_ws && !out.empty()) out.push_back(' ');
    in_ws = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '\n') {
      std::string line(s.substr(start, i - start));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      out.push_back(std::move(line));
      start = i + 1;
    }
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string nfc_normalize(std::string_view s) {
  bool has_multibyte = false;
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) {
      has_multibyte = true;
      break;
    }
  }
  if (!has_multibyte) return std::string(s);

  auto cps = decode_utf8(s);
  std::vector<std::uint32_t> out;
  out.reserve(cps.size());
  for (std::uint32_t cp : cps) {
    if (!out.empty()) {
      std::uint32_t composed = compose_pair(out.back(), cp);
      if (composed != 0) {
        out.back() = composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  std::string result;
  result.reserve(s.size());
  for (std::uint32_t cp : out) encode_utf8(cp, result);
  return result;
}

std::uint64_t fnv1a64(std::string_view s) {
  return fnv1a64(UINT64_C(0xcbf29ce484222325), s);
}

std::uint64_t fnv1a64(std::uint64_t seed, std::string_view s) {
  std::uint64_t h = seed;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= UINT64_C(0x100000001b3);
  }
  return h;
}

std::string to_hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::string iso8601_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

}  // namespace pie
