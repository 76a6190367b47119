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

#include "pie/generator.hpp"

#include <cstdio>
#include <set>

#include "pie/html.hpp"
#include "pie/rng.hpp"

namespace pie::gen {
namespace {

constexpr std::string_view kFirstNames[] = {
    "Albert", "Maria",  "James",  "Sofia",  "Henry",  "Amara", "Noah",
    "Chloé",  "Elena",  "Marcus", "Priya",  "Tomás",  "Grace", "Felix",
    "Ingrid", "Omar",   "Lucia",  "Björn",  "Hana",   "Victor", "Renée",
    "Samuel", "Yuki",   "Nadia"};

constexpr std::string_view kLastNames[] = {
    "Carter",  "Nguyen",   "Patel",   "Kimura",  "Rossi",   "Larsen",
    "Okafor",  "Dubois",   "Mendes",  "Haines",  "Novak",   "Silva",
    "Keller",  "O'Brien",  "Vance",   "Moreau",  "Lindgren", "Araya",
    "Whitfield", "Santos", "Becker",  "Iyer",    "Marsh",   "Delgado"};

constexpr std::string_view kEmailDomains[] = {
    "gmail.com",    "yahoo.com",  "outlook.com", "protonmail.com",
    "fastmail.com", "zoho.com",   "icloud.com",  "mail.com"};

constexpr std::string_view kStreetNames[] = {
    "Maple",  "Oak",     "Cedar",  "Birch",   "Willow", "Juniper",
    "Aspen",  "Hickory", "Laurel", "Magnolia", "Sycamore", "Chestnut"};

constexpr std::string_view kStreetTypes[] = {
    "Street", "Avenue", "Road", "Lane", "Drive", "Boulevard", "Court"};

constexpr std::pair<std::string_view, std::string_view> kCities[] = {
    {"Springfield", "IL"}, {"Dayton", "OH"},   {"Austin", "TX"},
    {"Portland", "OR"},    {"Madison", "WI"},  {"Boulder", "CO"},
    {"Raleigh", "NC"},     {"Tacoma", "WA"},   {"Savannah", "GA"},
    {"Albany", "NY"}};

constexpr std::string_view kJobTitles[] = {
    "Software Engineer", "Data Scientist",   "Research Assistant",
    "Product Manager",   "Systems Analyst",  "Marketing Manager",
    "Pediatric Nurse",   "Lab Technician",   "Financial Analyst",
    "UX Designer",       "Field Biologist",  "Technical Writer"};

constexpr std::string_view kOccupations[] = {
    "Software Engineer",    "Data Scientist",      "Professor of Physics",
    "Pediatric Nurse",      "Marketing Manager",   "Civil Engineer",
    "Research Scientist",   "High School Teacher", "Financial Analyst",
    "UX Designer",          "Science Journalist",  "Clinical Psychologist"};

constexpr std::string_view kOrgNames[] = {
    "Bluewater", "Northfield", "Quantum",  "Helios",   "Crestview",
    "Ironwood",  "Silverline", "Cascadia", "Meridian", "Lakeshore",
    "Pinnacle",  "Harborview"};

constexpr std::string_view kOrgSuffixes[] = {
    "University", "Institute", "Laboratories", "College",
    "Technologies", "Systems",  "Analytics",    "Foundation"};

constexpr std::string_view kDegrees[] = {"B.S.", "B.A.", "M.S.", "MBA",
                                         "Ph.D."};

constexpr std::string_view kFields[] = {
    "Computer Science", "Biology",   "Economics",  "Physics",
    "Linguistics",      "Chemistry", "Statistics", "History",
    "Mechanical Engineering", "Psychology"};

constexpr std::string_view kSchoolNames[] = {
    "Westbrook", "Eastgate", "Clearwater", "Stonebridge", "Fairmont",
    "Ridgeline", "Brookside", "Kingsford",  "Summitvale",  "Larkspur"};

// Filler sentences deliberately avoid colons, bold markup and category
// keywords so they never look like labelled fields.
constexpr std::string_view kFillerSentences[] = {
    "On weekends I tend a small garden and experiment with sourdough.",
    "I enjoy long-distance cycling and keep a journal of every route.",
    "Travel photography has been a hobby of mine for over a decade.",
    "I volunteer at the local animal shelter twice a month.",
    "Reading science fiction keeps my imagination in good shape.",
    "I brew my own coffee and rate every bag I buy.",
    "Hiking the nearby trails is how I clear my head.",
    "I collect vintage fountain pens and restore them myself.",
    "Board game nights with friends are a fixed part of my week.",
    "I practice the piano most evenings after dinner.",
    "My bookshelf is organized by color rather than by author.",
    "I am slowly learning to identify birds by their songs.",
    "Homemade pasta turned out to be easier than it looks.",
    "I keep a small aquarium and find it very calming.",
    "Every spring I plant tomatoes and every summer I regret the quantity.",
};

constexpr std::string_view kMonths[] = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

struct StyleSpec {
  std::string_view key;
  std::string_view title_word;
  std::string_view body_style;
  std::string_view css;
  std::array<std::string_view, 8> headings;  // canonical category order
};

constexpr std::array<StyleSpec, 5> kStyles = {{
    {"neat", "Profile",
     "background-color:#FFFFFF",
     "body{font-family:Georgia,serif;margin:2rem;}\n"
     "h3{margin-bottom:0.2rem;}",
     {"Email", "Phone", "Address", "Name", "Work Experience", "Education",
      "Affiliation", "Occupation"}},
    {"geeky", "Home Node",
     "background-color:#10141A;color:#D7E1EA",
     "body{font-family:'Fira Mono',monospace;margin:1rem;}\n"
     "h2.term{color:#7FE787;}\n"
     "code{background:#1B222C;padding:0 0.3em;}",
     {"Ping Me At", "Call Sign", "Basecamp", "Handle", "Quest Log",
      "Skill Tree", "Guild", "Class"}},
    {"colorful", "Hello World",
     "background-color:#FFF8E7",
     "body{font-family:'Comic Sans MS',cursive;margin:1.5rem;}\n"
     "h4{color:#C2185B;letter-spacing:0.05em;}",
     {"Say Hello", "Ring Ring", "Find Me", "Who I Am", "My Adventures",
      "Where I Learned", "My Crew", "What I Do"}},
    {"fancy", "Portfolio",
     "background-color:#FDFDFD",
     "body{font-family:'Didot',serif;margin:3rem;}\n"
     "dt{font-variant:small-caps;margin-top:0.8em;}",
     {"Correspondence", "Telephone", "Residence", "The Name",
      "Professional Journey", "Scholarly Pursuits", "Esteemed Affiliation",
      "Vocation"}},
    {"formal", "Curriculum Vitae",
     "background-color:#FFFFFF",
     "body{font-family:'Times New Roman',serif;margin:2.5rem;}\n"
     "table.record th{text-align:left;padding-right:1.5em;}",
     {"Email Address", "Telephone Number", "Mailing Address", "Full Name",
      "Professional Experience", "Education History",
      "Institutional Affiliation", "Current Position"}},
}};

const StyleSpec& spec_for(Style style) {
  return kStyles[static_cast<std::size_t>(style)];
}

// Maps accented Latin letters to ASCII for email local parts.
std::string ascii_fold(std::string_view s) {
  static const std::vector<std::pair<std::string_view, char>> kFold = {
      {"á", 'a'}, {"à", 'a'}, {"â", 'a'}, {"ä", 'a'}, {"å", 'a'}, {"ã", 'a'},
      {"é", 'e'}, {"è", 'e'}, {"ê", 'e'}, {"ë", 'e'}, {"í", 'i'}, {"ì", 'i'},
      {"î", 'i'}, {"ï", 'i'}, {"ó", 'o'}, {"ò", 'o'}, {"ô", 'o'}, {"ö", 'o'},
      {"õ", 'o'}, {"ú", 'u'}, {"ù", 'u'}, {"û", 'u'}, {"ü", 'u'}, {"ý", 'y'},
      {"ÿ", 'y'}, {"ñ", 'n'}, {"ç", 'c'}, {"ć", 'c'}, {"ś", 's'}, {"ź", 'z'},
      {"ń", 'n'}, {"ø", 'o'}, {"æ", 'a'}, {"ß", 's'}};
  std::string lower = to_lower_ascii(s);
  std::string out;
  out.reserve(lower.size());
  std::size_t i = 0;
  while (i < lower.size()) {
    unsigned char c = static_cast<unsigned char>(lower[i]);
    if (c < 0x80) {
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        out.push_back(static_cast<char>(c));
      }
      ++i;
      continue;
    }
    bool mapped = false;
    for (const auto& [seq, repl] : kFold) {
      if (lower.compare(i, seq.size(), seq) == 0) {
        out.push_back(repl);
        i += seq.size();
        mapped = true;
        break;
      }
    }
    if (!mapped) ++i;  // unknown multibyte sequences are dropped
  }
  return out;
}

template <typename T, std::size_t N>
const T& pick(SplitMix64& rng, const T (&table)[N]) {
  return table[rng.next_below(N)];
}

struct Identity {
  std::string name;
  std::map<CategoryId, Extraction> labels;
};

// Value draws happen in one fixed order so that identical seeds produce
// identical identities regardless of style or complexity.
Identity draw_identity(SplitMix64& rng, double absence_rate) {
  Identity id;
  std::string first(pick(rng, kFirstNames));
  std::string last(pick(rng, kLastNames));
  id.name = first + " " + last;

  std::string local;
  std::string folded_first = ascii_fold(first);
  std::string folded_last = ascii_fold(last);
  int pattern = static_cast<int>(rng.next_below(5));
  int nn = rng.next_int(10, 97);
  switch (pattern) {
    case 0: local = folded_first + "." + folded_last; break;
    case 1: local = folded_first + "_" + folded_last; break;
    case 2: local = folded_first + folded_last + std::to_string(nn); break;
    case 3: local = folded_first.substr(0, 1) + folded_last +
                    std::to_string(nn); break;
    default: local = folded_first + "." + folded_last + "." +
                     std::to_string(nn); break;
  }
  std::string email = local + "@" + std::string(pick(rng, kEmailDomains));

  char phone[16];
  std::snprintf(phone, sizeof(phone), "%03d-%03d-%04d", rng.next_int(200, 979),
                rng.next_int(200, 999), rng.next_int(0, 9999));

  std::string address =
      std::to_string(rng.next_int(10, 9999)) + " " +
      std::string(pick(rng, kStreetNames)) + " " +
      std::string(pick(rng, kStreetTypes));
  const auto& city = pick(rng, kCities);
  address += ", " + std::string(city.first) + ", " + std::string(city.second) +
             " " + std::to_string(rng.next_int(10000, 99999));

  int work_count = rng.next_int(1, 3);
  std::vector<std::string> work_entries;
  for (int i = 0; i < work_count; ++i) {
    std::string title(pick(rng, kJobTitles));
    std::string org = std::string(pick(rng, kOrgNames)) + " " +
                      std::string(pick(rng, kOrgSuffixes));
    int start = rng.next_int(1990, 2018);
    int duration = rng.next_int(1, 6);
    work_entries.push_back(title + " at " + org + " (" +
                           std::to_string(start) + " - " +
                           std::to_string(start + duration) + ")");
  }
  std::string work;
  for (std::size_t i = 0; i < work_entries.size(); ++i) {
    if (i) work.push_back('\n');
    work += work_entries[i];
  }

  int edu_count = rng.next_int(1, 2);
  std::vector<std::string> edu_entries;
  for (int i = 0; i < edu_count; ++i) {
    std::string school = std::string(pick(rng, kSchoolNames)) + " " +
                         (rng.next_below(2) ? "University" : "College");
    edu_entries.push_back(std::string(pick(rng, kDegrees)) + " in " +
                          std::string(pick(rng, kFields)) + ", " + school +
                          " (" + std::to_string(rng.next_int(1985, 2020)) +
                          ")");
  }
  std::string education;
  for (std::size_t i = 0; i < edu_entries.size(); ++i) {
    if (i) education.push_back('\n');
    education += edu_entries[i];
  }

  std::string affiliation = std::string(pick(rng, kOrgNames)) + " " +
                            std::string(pick(rng, kOrgSuffixes));
  std::string occupation(pick(rng, kOccupations));

  id.labels[CategoryId::kEmailAddress] = email;
  id.labels[CategoryId::kPhoneNumber] = std::string(phone);
  id.labels[CategoryId::kMailingAddress] = address;
  id.labels[CategoryId::kName] = id.name;
  id.labels[CategoryId::kWorkExperience] = work;
  id.labels[CategoryId::kEducationExperience] = education;
  id.labels[CategoryId::kAffiliation] = affiliation;
  id.labels[CategoryId::kOccupation] = occupation;

  // Absence draws always happen, in category order, so the stream position
  // does not depend on the rate.
  for (CategoryId cat : kAllCategories) {
    if (cat == CategoryId::kName) continue;
    if (rng.next_double() < absence_rate) id.labels[cat] = std::nullopt;
  }
  return id;
}

std::string make_filler(SplitMix64& rng, Style style) {
  int sentences = rng.next_int(2, 4);
  std::string text;
  for (int i = 0; i < sentences; ++i) {
    if (i) text.push_back(' ');
    text += pick(rng, kFillerSentences);
  }
  if (style == Style::kColorful && rng.next_below(2)) {
    text = "★ " + text;
  }
  return "<p class=\"filler\">" + html::encode_text(text) + "</p>\n";
}

// Emits one labelled section. The value always lives in a single element
// with class val-<key> whose subtree text equals the label exactly.
std::string make_section(Style style, CategoryId cat,
                         const std::string& value) {
  const StyleSpec& spec = spec_for(style);
  std::string heading =
      html::encode_text(spec.headings[static_cast<std::size_t>(cat)]);
  std::string cls = "val-" + std::string(category_key(cat));
  std::vector<std::string> lines = split_lines(value);
  const bool multi = lines.size() > 1;

  auto list_of = [&](std::string_view item_open, std::string_view item_close) {
    std::string out;
    for (const std::string& line : lines) {
      out += std::string(item_open) + html::encode_text(line) +
             std::string(item_close);
    }
    return out;
  };

  switch (style) {
    case Style::kNeat: {
      std::string body =
          multi ? "<ul class=\"" + cls + "\">" + list_of("<li>", "</li>") +
                      "</ul>"
                : "<p class=\"" + cls + "\">" + html::encode_text(value) +
                      "</p>";
      return "<h3>" + heading + "</h3>\n" + body + "\n";
    }
    case Style::kGeeky: {
      std::string body =
          multi ? "<ul class=\"" + cls + "\">" + list_of("<li>", "</li>") +
                      "</ul>"
                : "<p class=\"" + cls + "\"><code>" +
                      html::encode_text(value) + "</code></p>";
      return "<h2 class=\"term\">" + heading + "</h2>\n" + body + "\n";
    }
    case Style::kColorful: {
      std::string body =
          multi ? "<ul class=\"" + cls + "\">" + list_of("<li>", "</li>") +
                      "</ul>"
                : "<p class=\"" + cls + "\"><em>" + html::encode_text(value) +
                      "</em></p>";
      return "<h4>" + heading + "</h4>\n" + body + "\n";
    }
    case Style::kFancy: {
      std::string body;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) body += "<br>";
        body += html::encode_text(lines[i]);
      }
      return "<dt>" + heading + "</dt>\n<dd class=\"" + cls + "\">" + body +
             "</dd>\n";
    }
    case Style::kFormal: {
      std::string body =
          multi ? "<ul class=\"" + cls + "\">" + list_of("<li>", "</li>") +
                      "</ul>"
                : "<span class=\"" + cls + "\">" + html::encode_text(value) +
                      "</span>";
      return "<tr><th>" + heading + "</th><td>" + body + "</td></tr>\n";
    }
  }
  return "";
}

}  // namespace

std::string_view style_key(Style style) { return spec_for(style).key; }

std::optional<Style> style_from_key(std::string_view key) {
  std::string k = to_lower_ascii(trim(key));
  for (Style style : kAllStyles) {
    if (k == spec_for(style).key) return style;
  }
  return std::nullopt;
}

std::string_view complexity_key(Complexity complexity) {
  switch (complexity) {
    case Complexity::kLow: return "low";
    case Complexity::kMedium: return "medium";
    case Complexity::kHigh: return "high";
  }
  return "medium";
}

std::optional<Complexity> complexity_from_key(std::string_view key) {
  std::string k = to_lower_ascii(trim(key));
  if (k == "low") return Complexity::kLow;
  if (k == "medium" || k == "mid") return Complexity::kMedium;
  if (k == "high") return Complexity::kHigh;
  return std::nullopt;
}

std::string_view heading_for(Style style, CategoryId category) {
  return spec_for(style).headings[static_cast<std::size_t>(category)];
}

const std::vector<std::string>& all_section_headings() {
  static const std::vector<std::string> kHeadings = [] {
    std::vector<std::string> out;
    for (const StyleSpec& spec : kStyles) {
      for (std::string_view h : spec.headings) out.emplace_back(h);
    }
    return out;
  }();
  return kHeadings;
}

std::pair<ProfileDocument, GroundTruthRecord> generate_profile(
    std::uint64_t seed, Style style, Complexity complexity,
    double absence_rate) {
  SplitMix64 rng(seed);
  Identity identity = draw_identity(rng, absence_rate);
  const StyleSpec& spec = spec_for(style);

  int fillers = 0;
  switch (complexity) {
    case Complexity::kLow: fillers = rng.next_int(1, 2); break;
    case Complexity::kMedium: fillers = rng.next_int(4, 6); break;
    case Complexity::kHigh: fillers = rng.next_int(9, 12); break;
  }
  int intro_fillers = fillers / 2;

  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>" + html::encode_text(identity.name) + " | " +
          std::string(spec.title_word) + "</title>\n";
  html += "<style>\n" + std::string(spec.css) + "\n</style>\n";
  html += "</head>\n<body style=\"" + std::string(spec.body_style) + "\">\n";
  if (style == Style::kGeeky) {
    html += "<script>console.log(\"profile node online\");</script>\n";
  }
  html += "<h1 class=\"name\">" + html::encode_text(identity.name) +
          "</h1>\n";
  if (style == Style::kFormal) {
    html += "<h2>Curriculum Vitae</h2>\n";
  }
  for (int i = 0; i < intro_fillers; ++i) html += make_filler(rng, style);

  std::string sections;
  for (CategoryId cat : kAllCategories) {
    const Extraction& label = identity.labels[cat];
    if (!label) continue;
    sections += make_section(style, cat, *label);
  }
  if (style == Style::kFancy) {
    html += "<hr>\n<dl class=\"details\">\n" + sections + "</dl>\n<hr>\n";
  } else if (style == Style::kFormal) {
    html += "<table class=\"record\">\n" + sections + "</table>\n";
  } else {
    html += sections;
  }

  for (int i = intro_fillers; i < fillers; ++i) html += make_filler(rng, style);
  html += "<footer><p>Last updated " + std::string(pick(rng, kMonths)) + " " +
          std::to_string(rng.next_int(2019, 2026)) + "</p></footer>\n";
  html += "</body>\n</html>\n";

  ProfileDocument doc;
  doc.id = "syn-" + to_hex16(seed);
  doc.format = DocFormat::kHtml;
  doc.source = DocSource::kSynthetic;
  doc.content = std::move(html);

  GroundTruthRecord truth;
  truth.profile_id = doc.id;
  truth.labels = std::move(identity.labels);
  return {std::move(doc), std::move(truth)};
}

DatasetManifest generate_dataset(const GeneratorConfig& config) {
  std::vector<Style> styles = config.styles;
  if (styles.empty()) {
    styles.assign(kAllStyles.begin(), kAllStyles.end());
  }
  SplitMix64 style_stream(derive_seed(config.seed, "style-stream"));

  DatasetManifest manifest;
  manifest.name = config.dataset_name;
  std::set<std::string> seen_emails;

  for (int i = 0; i < config.count; ++i) {
    Style style = styles[style_stream.next_below(styles.size())];
    std::uint64_t profile_seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(i));
    // Present emails must be unique across the dataset; on collision the
    // profile is redrawn from a salted seed.
    std::pair<ProfileDocument, GroundTruthRecord> result;
    for (std::uint64_t attempt = 0;; ++attempt) {
      std::uint64_t seed =
          attempt == 0 ? profile_seed
                       : derive_seed(profile_seed, UINT64_C(0xA11CE) + attempt);
      result = generate_profile(seed, style, config.complexity,
                                config.absence_rate);
      const Extraction& email =
          result.second.label(CategoryId::kEmailAddress);
      if (!email || seen_emails.insert(*email).second) break;
    }

    char id[16];
    std::snprintf(id, sizeof(id), "syn-%04d", i);
    ManifestEntry entry;
    entry.document = std::move(result.first);
    entry.document.id = id;
    entry.truth = std::move(result.second);
    entry.truth.profile_id = id;
    entry.profile_path = std::string(id) + ".html";
    entry.style = std::string(style_key(style));
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace pie::gen
