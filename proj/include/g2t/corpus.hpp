#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace g2t {

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> dropped;  // ids removed by preprocessing

  std::size_t size() const noexcept { return documents.size(); }
  std::size_t total_tokens() const noexcept;
};

enum class CorpusFormat { kJsonl, kTsv };

CorpusFormat parse_corpus_format(std::string_view name);

struct PreprocessConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  std::unordered_set<std::string> stopwords;
  int min_tokens = 5;

  void validate() const;
};

/// Words carry stable 1-based indices in first-occurrence order.
class Vocabulary {
 public:
  std::size_t size() const noexcept { return words_.size(); }

  /// 1-based index, or nullopt for unknown words.
  std::optional<std::size_t> index_of(std::string_view word) const;
  const std::string& word(std::size_t index) const;
  std::int64_t frequency(std::size_t index) const;

  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::int64_t>& frequencies() const noexcept {
    return frequencies_;
  }

 private:
  friend Vocabulary build_vocabulary(const Corpus& corpus);

  std::vector<std::string> words_;
  std::vector<std::int64_t> frequencies_;
  std::unordered_map<std::string, std::size_t> index_;
};

Corpus read_corpus(std::istream& in, CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// One word per line; blank lines ignored, surrounding whitespace trimmed.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// Tokenizes a single text with the configured normalisation and stopword
/// filtering. Does not apply min_tokens.
std::vector<std::string> tokenize(std::string_view text,
                                  const PreprocessConfig& config);

Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config);

Vocabulary build_vocabulary(const Corpus& corpus);

namespace text {

/// Lowercases using simple one-to-one Unicode case mappings. Invalid UTF-8
/// bytes pass through unchanged.
std::string to_lower(std::string_view utf8);

/// Replaces every code point of general category P* or S* with a space.
std::string strip_punctuation(std::string_view utf8);

bool is_punct_or_symbol(char32_t cp);

}  // namespace text

}  // namespace g2t
