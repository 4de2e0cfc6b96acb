// Copyright 2026 The design-miner Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "design_miner/errors.hpp"
#include "design_miner/types.hpp"

namespace dminer {

// ---------------------------------------------------------------------------
// Configuration and resources
// ---------------------------------------------------------------------------

struct PipelineConfig {
  std::unordered_set<std::string> stopword_set;
  std::size_t min_len = 3;   // token length bounds, in code points
  std::size_t max_len = 25;
  bool lemmatize = true;
  bool spell_correct = false;  // O(dictionary) per unknown token, off by default
  bool strip_code = true;

  void validate() const {
    if (min_len < 1 || min_len > max_len)
      throw InvalidDataError("pipeline config requires 1 <= min_len <= max_len");
  }
};

// Surface form -> base form table. Lookups are total: unknown forms map to
// themselves. Chains in the input table (a->b, b->c) are compressed at load so
// that lemmatization is idempotent.
class LemmaLexicon {
 public:
  LemmaLexicon() = default;

  explicit LemmaLexicon(std::unordered_map<std::string, std::string> entries) {
    map_ = std::move(entries);
    compress();
  }

  static LemmaLexicon from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactError("cannot open lemma lexicon file: " + path);
    std::unordered_map<std::string, std::string> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw FormatError(path + ":" + std::to_string(lineno) +
                          ": expected \"surface<TAB>lemma\"");
      entries[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return LemmaLexicon(std::move(entries));
  }

  const std::string& lemma(const std::string& surface) const {
    const auto it = map_.find(surface);
    return it == map_.end() ? surface : it->second;
  }

  std::size_t size() const { return map_.size(); }

 private:
  void compress() {
    for (auto& [surface, base] : map_) {
      std::string current = base;
      // follow chains to their fixed point; bail out on cycles
      for (int hops = 0; hops < 16; ++hops) {
        const auto it = map_.find(current);
        if (it == map_.end() || it->second == current) break;
        current = it->second;
      }
      base = current;
    }
  }

  std::unordered_map<std::string, std::string> map_;
};

// Accepted-word list for spell suggestions (merged English variants).
class SpellDictionary {
 public:
  explicit SpellDictionary(std::vector<std::string> words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (words.empty()) throw InvalidDataError("spell dictionary must be non-empty");
    words_ = std::move(words);
    lookup_.insert(words_.begin(), words_.end());
  }

  static SpellDictionary from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifactError("cannot open dictionary file: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::transform(line.begin(), line.end(), line.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      words.push_back(line);
    }
    return SpellDictionary(std::move(words));
  }

  bool contains(const std::string& w) const { return lookup_.count(w) != 0; }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;  // sorted, unique; deterministic iteration
  std::unordered_set<std::string> lookup_;
};

// Stopword file: one word per line, UTF-8, "#" comments.
inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError("cannot open stopword file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && line[start] == ' ') ++start;
    if (start > 0) line = line.substr(start);
    if (line.empty() || line[0] == '#') continue;
    std::transform(line.begin(), line.end(), line.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    out.insert(line);
  }
  return out;
}

// Baseline English stopword list (the usual NLP closed-class words).
inline const std::vector<std::string>& default_english_stopwords() {
  static const std::vector<std::string> kWords = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "aren", "as", "at", "be", "because", "been", "before", "being",
      "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn",
      "did", "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each",
      "few", "for", "from", "further", "had", "hadn", "has", "hasn", "have", "haven",
      "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
      "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just",
      "me", "more", "most", "mustn", "my", "myself", "no", "nor", "not", "now", "of",
      "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
      "over", "own", "same", "shan", "she", "should", "shouldn", "so", "some", "such",
      "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there",
      "these", "they", "this", "those", "through", "to", "too", "under", "until",
      "up", "very", "was", "wasn", "we", "were", "weren", "what", "when", "where",
      "which", "while", "who", "whom", "why", "will", "with", "won", "would",
      "wouldn", "you", "your", "yours", "yourself", "yourselves"};
  return kWords;
}

// Developer-culture noise words; lists like this vary by project culture and
// are meant to be extended via stopword files.
inline const std::vector<std::string>& default_domain_stopwords() {
  static const std::vector<std::string> kWords = {"lgtm", "pinging"};
  return kWords;
}

inline std::unordered_set<std::string> default_stopword_set() {
  std::unordered_set<std::string> s(default_english_stopwords().begin(),
                                    default_english_stopwords().end());
  s.insert(default_domain_stopwords().begin(), default_domain_stopwords().end());
  return s;
}

// Starter lemma table covering frequent English inflections and the
// irregulars that matter most in developer text. Production runs should load
// a full WordNet-derived file via LemmaLexicon::from_file.
inline const LemmaLexicon& default_lemma_lexicon() {
  static const LemmaLexicon kLexicon = [] {
    static constexpr const char* kPairs[][2] = {
        {"running", "run"},       {"ran", "run"},           {"runs", "run"},
        {"wrote", "write"},       {"written", "write"},     {"writes", "write"},
        {"writing", "write"},     {"classes", "class"},     {"methods", "method"},
        {"functions", "function"},{"designs", "design"},    {"designed", "design"},
        {"designing", "design"},  {"patterns", "pattern"},  {"objects", "object"},
        {"interfaces", "interface"}, {"modules", "module"}, {"services", "service"},
        {"dependencies", "dependency"}, {"libraries", "library"}, {"queries", "query"},
        {"repositories", "repository"}, {"properties", "property"}, {"entities", "entity"},
        {"strategies", "strategy"}, {"hierarchies", "hierarchy"}, {"factories", "factory"},
        {"indices", "index"},     {"indexes", "index"},     {"matrices", "matrix"},
        {"vertices", "vertex"},   {"children", "child"},    {"threads", "thread"},
        {"processes", "process"}, {"tests", "test"},        {"tested", "test"},
        {"testing", "test"},      {"builds", "build"},      {"built", "build"},
        {"building", "build"},    {"calls", "call"},        {"called", "call"},
        {"calling", "call"},      {"used", "use"},          {"uses", "use"},
        {"using", "use"},         {"changed", "change"},    {"changes", "change"},
        {"changing", "change"},   {"created", "create"},    {"creates", "create"},
        {"creating", "create"},   {"implemented", "implement"}, {"implements", "implement"},
        {"implementing", "implement"}, {"implementations", "implementation"},
        {"added", "add"},         {"adds", "add"},          {"adding", "add"},
        {"removed", "remove"},    {"removes", "remove"},    {"removing", "remove"},
        {"moved", "move"},        {"moves", "move"},        {"moving", "move"},
        {"fixed", "fix"},         {"fixes", "fix"},         {"fixing", "fix"},
        {"breaking", "break"},    {"broke", "break"},       {"broken", "break"},
        {"breaks", "break"},      {"made", "make"},         {"makes", "make"},
        {"making", "make"},       {"took", "take"},         {"taken", "take"},
        {"takes", "take"},        {"taking", "take"},       {"went", "go"},
        {"gone", "go"},           {"goes", "go"},           {"going", "go"},
        {"got", "get"},           {"gotten", "get"},        {"gets", "get"},
        {"getting", "get"},       {"gave", "give"},         {"given", "give"},
        {"gives", "give"},        {"giving", "give"},       {"found", "find"},
        {"finds", "find"},        {"finding", "find"},      {"thought", "think"},
        {"thinks", "think"},      {"thinking", "think"},    {"knew", "know"},
        {"known", "know"},        {"knows", "know"},        {"knowing", "know"},
        {"saw", "see"},           {"seen", "see"},          {"sees", "see"},
        {"seeing", "see"},        {"said", "say"},          {"says", "say"},
        {"saying", "say"},        {"kept", "keep"},         {"keeps", "keep"},
        {"keeping", "keep"},      {"meant", "mean"},        {"means", "mean"},
        {"meaning", "mean"},      {"needed", "need"},       {"needs", "need"},
        {"needing", "need"},      {"returned", "return"},   {"returns", "return"},
        {"returning", "return"},  {"passed", "pass"},       {"passes", "pass"},
        {"passing", "pass"},      {"failed", "fail"},       {"fails", "fail"},
        {"failing", "fail"},      {"worked", "work"},       {"works", "work"},
        {"working", "work"},      {"better", "good"},       {"best", "good"},
        {"worse", "bad"},         {"worst", "bad"},         {"files", "file"},
        {"lines", "line"},        {"words", "word"},        {"types", "type"},
        {"values", "value"},      {"variables", "variable"},{"arrays", "array"},
        {"lists", "list"},        {"maps", "map"},          {"keys", "key"},
        {"nodes", "node"},        {"trees", "tree"},        {"graphs", "graph"},
        {"users", "user"},        {"developers", "developer"}, {"discussions", "discussion"},
        {"comments", "comment"},  {"commits", "commit"},    {"issues", "issue"},
        {"requests", "request"},  {"branches", "branch"},   {"merges", "merge"},
        {"merged", "merge"},      {"merging", "merge"},     {"versions", "version"},
        {"releases", "release"},  {"features", "feature"},  {"bugs", "bug"},
        {"errors", "error"},      {"exceptions", "exception"}, {"messages", "message"},
        {"events", "event"},      {"states", "state"},      {"systems", "system"},
        {"databases", "database"},{"tables", "table"},      {"models", "model"},
        {"views", "view"},        {"controllers", "controller"}, {"components", "component"},
        {"layers", "layer"},      {"frameworks", "framework"}, {"languages", "language"},
        {"applications", "application"}, {"architectures", "architecture"},
        {"abstractions", "abstraction"}, {"refactored", "refactor"},
        {"refactoring", "refactor"}, {"refactorings", "refactor"}, {"refactors", "refactor"},
    };
    std::unordered_map<std::string, std::string> entries;
    for (const auto& pair : kPairs) entries.emplace(pair[0], pair[1]);
    return LemmaLexicon(std::move(entries));
  }();
  return kLexicon;
}

// ---------------------------------------------------------------------------
// UTF-8 helpers
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_utf8_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Decodes the code point starting at s[i]; advances i past it. Malformed
// sequences decode as U+FFFD one byte at a time.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if (!is_utf8_continuation(cc)) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += len;
  return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
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

// Decimal digits of the scripts we commonly see in scraped discussions.
inline bool is_digit_codepoint(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x0660 && cp <= 0x0669) ||
         (cp >= 0x06F0 && cp <= 0x06F9) || (cp >= 0x0966 && cp <= 0x096F) ||
         (cp >= 0x09E6 && cp <= 0x09EF) || (cp >= 0x0A66 && cp <= 0x0A6F) ||
         (cp >= 0x0BE6 && cp <= 0x0BEF) || (cp >= 0xFF10 && cp <= 0xFF19);
}

}  // namespace detail

// Length of a UTF-8 string in code points.
inline std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (const char c : s)
    if (!detail::is_utf8_continuation(static_cast<unsigned char>(c))) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace detail {

inline bool iequal_ascii(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

// Resolves "&amp;"-style entities. Returns the replacement and advances i past
// the entity, or returns nullopt leaving i untouched.
inline std::optional<char32_t> decode_entity(std::string_view s, std::size_t& i) {
  const std::size_t end = s.find(';', i);
  if (end == std::string_view::npos || end - i > 10) return std::nullopt;
  const std::string_view body = s.substr(i + 1, end - i - 1);
  char32_t cp = 0;
  if (body == "amp") cp = U'&';
  else if (body == "lt") cp = U'<';
  else if (body == "gt") cp = U'>';
  else if (body == "quot") cp = U'"';
  else if (body == "apos") cp = U'\'';
  else if (body == "nbsp") cp = U' ';
  else if (body.size() > 1 && body[0] == '#') {
    char32_t v = 0;
    bool hex = body.size() > 2 && (body[1] == 'x' || body[1] == 'X');
    for (std::size_t k = hex ? 2 : 1; k < body.size(); ++k) {
      const char c = body[k];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else return std::nullopt;
      v = v * (hex ? 16 : 10) + static_cast<char32_t>(d);
      if (v > 0x10FFFF) return std::nullopt;
    }
    cp = v;
  } else {
    return std::nullopt;
  }
  i = end + 1;
  return cp;
}

// Strips markup: removes HTML tags, optionally removes <code>/<pre> spans
// including their content, and decodes common entities.
inline std::string strip_markup(std::string_view raw, bool strip_code) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const char c = raw[i];
    if (c == '&') {
      std::size_t j = i;
      if (auto cp = decode_entity(raw, j)) {
        append_utf8(out, *cp);
        i = j;
        continue;
      }
      out.push_back(c);
      ++i;
      continue;
    }
    if (c != '<') {
      out.push_back(c);
      ++i;
      continue;
    }
    // '<' opens a tag only when followed by a letter or '/'; otherwise it is
    // ordinary text (e.g. "a < b").
    if (i + 1 >= raw.size() ||
        !(std::isalpha(static_cast<unsigned char>(raw[i + 1])) || raw[i + 1] == '/')) {
      out.push_back(c);
      ++i;
      continue;
    }
    const std::size_t close = raw.find('>', i);
    if (close == std::string_view::npos) {  // never closed: not a tag after all
      out.push_back(c);
      ++i;
      continue;
    }
    std::string_view tag = raw.substr(i + 1, close - i - 1);
    bool is_open_code = false;
    for (const std::string_view name : {std::string_view("code"), std::string_view("pre")}) {
      if (tag.size() >= name.size() && iequal_ascii(tag.substr(0, name.size()), name) &&
          (tag.size() == name.size() || tag[name.size()] == ' ')) {
        is_open_code = true;
        // skip the whole element, content included
        if (strip_code) {
          const std::string closing_a = "</" + std::string(name) + ">";
          std::size_t endpos = std::string_view::npos;
          for (std::size_t k = close + 1; k + closing_a.size() <= raw.size(); ++k) {
            if (iequal_ascii(raw.substr(k, closing_a.size()), closing_a)) {
              endpos = k + closing_a.size();
              break;
            }
          }
          out.push_back(' ');
          i = (endpos == std::string_view::npos) ? raw.size() : endpos;
        } else {
          out.push_back(' ');
          i = close + 1;
        }
        break;
      }
    }
    if (!is_open_code) {
      out.push_back(' ');
      i = close + 1;
    }
  }
  return out;
}

}  // namespace detail

// Markup removal, punctuation/digit stripping, whitespace collapsing, and
// lowercasing. Inputs are expected to be NFC-normalized UTF-8; non-ASCII
// letters pass through unchanged, digits of common scripts are stripped.
inline std::string clean_text(std::string_view raw, bool strip_code = true) {
  const std::string unmarked = detail::strip_markup(raw, strip_code);
  std::string out;
  out.reserve(unmarked.size());
  bool pending_space = false;
  std::size_t i = 0;
  const std::string_view s = unmarked;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      if (std::isalpha(c)) {
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
      } else {
        pending_space = true;  // digit, punctuation, whitespace, control
      }
      continue;
    }
    const std::size_t start = i;
    const char32_t cp = detail::decode_utf8(s, i);
    if (detail::is_digit_codepoint(cp) || cp == 0xFFFD || cp == 0x00A0) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(start, i - start));
  }
  return out;
}

// Whitespace split of already-cleaned text; order preserved.
inline TokenSeq tokenize(std::string_view clean) {
  TokenSeq out;
  std::size_t i = 0;
  while (i < clean.size()) {
    while (i < clean.size() && clean[i] == ' ') ++i;
    std::size_t j = i;
    while (j < clean.size() && clean[j] != ' ') ++j;
    if (j > i) out.emplace_back(clean.substr(i, j - i));
    i = j;
  }
  return out;
}

namespace detail {

// Levenshtein distance, early-exiting once the best achievable value exceeds
// the cap. Returns cap+1 when the distance is larger than cap.
inline std::size_t capped_edit_distance(const std::string& a, const std::string& b,
                                        std::size_t cap) {
  const std::size_t n = a.size(), m = b.size();
  const std::size_t big = cap + 1;
  if (n > m + cap || m > n + cap) return big;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > cap) return big;
    std::swap(prev, cur);
  }
  return std::min(prev[m], big);
}

inline std::size_t shared_prefix_len(const std::string& a, const std::string& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  return k;
}

}  // namespace detail

// Dictionary-based spelling candidates. A known token returns itself; an
// unknown one returns the dictionary words at minimal edit distance (search
// radius 2), ranked by (distance, shared-prefix length desc, lexicographic)
// and truncated to max_candidates. No candidate within radius: the token.
inline std::vector<std::string> suggest_spelling(const std::string& token,
                                                 const SpellDictionary& dict,
                                                 std::size_t max_candidates = 5) {
  if (max_candidates < 1) throw InvalidDataError("suggest_spelling: max_candidates must be >= 1");
  if (dict.contains(token)) return {token};
  constexpr std::size_t kRadius = 2;
  struct Candidate {
    std::size_t distance;
    std::size_t prefix;
    const std::string* word;
  };
  std::vector<Candidate> found;
  for (const std::string& w : dict.words()) {
    const std::size_t d = detail::capped_edit_distance(token, w, kRadius);
    if (d <= kRadius)
      found.push_back({d, detail::shared_prefix_len(token, w), &w});
  }
  if (found.empty()) return {token};
  std::stable_sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    if (x.prefix != y.prefix) return x.prefix > y.prefix;
    return *x.word < *y.word;
  });
  std::vector<std::string> out;
  for (const Candidate& c : found) {
    out.push_back(*c.word);
    if (out.size() == max_candidates) break;
  }
  return out;
}

inline std::string lemmatize(const std::string& token, const LemmaLexicon& lexicon) {
  return lexicon.lemma(token);
}

// Full pipeline: clean -> tokenize -> (spell-correct) -> stopword removal ->
// length filter -> lemmatize. Lemmas are re-checked against the stopword and
// length constraints so the output invariants hold and the pipeline is
// idempotent.
inline TokenSeq preprocess(std::string_view raw, const PipelineConfig& config,
                           const LemmaLexicon& lexicon = LemmaLexicon(),
                           const SpellDictionary* dict = nullptr) {
  config.validate();
  if (config.spell_correct && dict == nullptr)
    throw MissingArtifactError("preprocess: spell correction enabled but no dictionary given");
  TokenSeq tokens = tokenize(clean_text(raw, config.strip_code));
  TokenSeq out;
  out.reserve(tokens.size());
  const auto keeps = [&](const std::string& t) {
    const std::size_t len = utf8_length(t);
    return len >= config.min_len && len <= config.max_len &&
           config.stopword_set.count(t) == 0;
  };
  for (std::string& token : tokens) {
    if (config.spell_correct && !dict->contains(token))
      token = suggest_spelling(token, *dict, 1).front();
    if (config.stopword_set.count(token)) continue;
    const std::size_t len = utf8_length(token);
    if (len < config.min_len || len > config.max_len) continue;
    std::string base = config.lemmatize ? lexicon.lemma(token) : token;
    if (!keeps(base)) continue;
    out.push_back(std::move(base));
  }
  return out;
}

inline std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace dminer
