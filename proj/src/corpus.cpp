#include "g2t/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "g2t/error.hpp"

namespace g2t {

namespace {

#include "unicode_tables.inc"

// Decodes one code point starting at text[pos]. Invalid sequences yield
// nullopt with length 1 so the raw byte can be passed through.
struct Decoded {
  std::optional<char32_t> cp;
  std::size_t length;
};

Decoded decode_utf8(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) return {lead, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {std::nullopt, 1};
  }
  if (pos + len > text.size()) return {std::nullopt, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto byte = static_cast<unsigned char>(text[pos + i]);
    if ((byte & 0xC0) != 0x80) return {std::nullopt, 1};
    cp = (cp << 6) | (byte & 0x3F);
  }
  // Reject overlong forms and surrogates.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {std::nullopt, 1};
  }
  return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
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

bool is_separator(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp < 0x80) return cp;
  const auto* end = std::end(kLowerMap);
  const auto* it = std::lower_bound(
      std::begin(kLowerMap), end, cp,
      [](const CaseMapping& m, char32_t value) { return m.from < value; });
  return (it != end && it->from == cp) ? it->to : cp;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

std::string line_error(std::size_t line_no, const std::string& what) {
  return "corpus line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

namespace text {

bool is_punct_or_symbol(char32_t cp) {
  const auto* end = std::end(kPunctSymbolRanges);
  const auto* it = std::upper_bound(
      std::begin(kPunctSymbolRanges), end, cp,
      [](char32_t value, const CodePointRange& r) { return value < r.first; });
  if (it == std::begin(kPunctSymbolRanges)) return false;
  --it;
  return cp >= it->first && cp <= it->last;
}

std::string to_lower(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t pos = 0; pos < utf8.size();) {
    const auto d = decode_utf8(utf8, pos);
    if (d.cp) {
      append_utf8(out, lower_cp(*d.cp));
    } else {
      out.push_back(utf8[pos]);
    }
    pos += d.length;
  }
  return out;
}

std::string strip_punctuation(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t pos = 0; pos < utf8.size();) {
    const auto d = decode_utf8(utf8, pos);
    if (d.cp && is_punct_or_symbol(*d.cp)) {
      out.push_back(' ');
    } else {
      out.append(utf8.substr(pos, d.length));
    }
    pos += d.length;
  }
  return out;
}

}  // namespace text

std::size_t Corpus::total_tokens() const noexcept {
  std::size_t total = 0;
  for (const auto& doc : documents) total += doc.tokens.size();
  return total;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "tsv") return CorpusFormat::kTsv;
  throw_config("unknown corpus format '" + std::string(name) + "'");
}

void PreprocessConfig::validate() const {
  if (min_tokens < 1) {
    throw_config("min_tokens must be >= 1, got " + std::to_string(min_tokens));
  }
}

Corpus read_corpus(std::istream& in, CorpusFormat format) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    Document doc;
    if (format == CorpusFormat::kJsonl) {
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw_input(line_error(line_no, std::string("invalid JSON: ") + e.what()));
      }
      if (!record.is_object() || !record.contains("id") ||
          !record.contains("text") || !record["id"].is_string() ||
          !record["text"].is_string()) {
        throw_input(line_error(line_no, "expected string fields 'id' and 'text'"));
      }
      doc.id = record["id"].get<std::string>();
      doc.raw_text = record["text"].get<std::string>();
    } else {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw_input(line_error(line_no, "expected id<TAB>text"));
      }
      doc.id = line.substr(0, tab);
      doc.raw_text = line.substr(tab + 1);
    }
    if (doc.id.empty()) throw_input(line_error(line_no, "empty id"));
    if (doc.raw_text.empty()) throw_input(line_error(line_no, "empty text"));
    if (!seen.insert(doc.id).second) {
      throw_input(line_error(line_no, "duplicate id '" + doc.id + "'"));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open corpus file " + path.string());
  return read_corpus(in, format);
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open stopword file " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto word = trim(line);
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

namespace {

// Stopwords are matched after normalisation, so callers pass the list
// normalised the same way the text is.
std::unordered_set<std::string> normalized_stopwords(const PreprocessConfig& config) {
  if (!config.lowercase) return config.stopwords;
  std::unordered_set<std::string> out;
  for (const auto& w : config.stopwords) out.insert(text::to_lower(w));
  return out;
}

std::vector<std::string> tokenize_with(std::string_view text, const PreprocessConfig& config,
                                       const std::unordered_set<std::string>& stopwords) {
  std::string normalized(text);
  if (config.lowercase) normalized = text::to_lower(normalized);
  if (config.strip_punctuation) normalized = text::strip_punctuation(normalized);

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (!stopwords.contains(current)) tokens.push_back(current);
    current.clear();
  };
  for (std::size_t pos = 0; pos < normalized.size();) {
    const auto d = decode_utf8(normalized, pos);
    if (d.cp && is_separator(*d.cp)) {
      flush();
    } else {
      current.append(normalized, pos, d.length);
    }
    pos += d.length;
  }
  flush();
  return tokens;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const PreprocessConfig& config) {
  return tokenize_with(text, config, normalized_stopwords(config));
}

Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config) {
  config.validate();

  const auto stopwords = normalized_stopwords(config);

  Corpus out;
  out.dropped = corpus.dropped;
  for (const auto& doc : corpus.documents) {
    Document processed{doc.id, doc.raw_text, tokenize_with(doc.raw_text, config, stopwords)};
    if (processed.tokens.size() < static_cast<std::size_t>(config.min_tokens)) {
      out.dropped.push_back(doc.id);
    } else {
      out.documents.push_back(std::move(processed));
    }
  }
  if (out.documents.empty()) throw_degenerate("no documents survive preprocessing");
  return out;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::word(std::size_t index) const {
  if (index == 0 || index > words_.size()) {
    throw std::out_of_range("vocabulary index " + std::to_string(index));
  }
  return words_[index - 1];
}

std::int64_t Vocabulary::frequency(std::size_t index) const {
  if (index == 0 || index > words_.size()) {
    throw std::out_of_range("vocabulary index " + std::to_string(index));
  }
  return frequencies_[index - 1];
}

Vocabulary build_vocabulary(const Corpus& corpus) {
  if (corpus.documents.empty()) throw_input("cannot build a vocabulary from an empty corpus");
  Vocabulary vocab;
  for (const auto& doc : corpus.documents) {
    for (const auto& token : doc.tokens) {
      const auto [it, inserted] = vocab.index_.try_emplace(token, vocab.words_.size() + 1);
      if (inserted) {
        vocab.words_.push_back(token);
        vocab.frequencies_.push_back(0);
      }
      ++vocab.frequencies_[it->second - 1];
    }
  }
  return vocab;
}

}  // namespace g2t
