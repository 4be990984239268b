#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "g2t/corpus.hpp"
#include "g2t/embedding.hpp"

namespace g2t {

/// A topic's ranked top words, as consumed by the evaluation metrics.
using TopicWords = std::vector<std::string>;

/// Boolean sliding-window document frequencies: each window counts a word (or
/// an unordered pair of distinct words) at most once.
class CooccurrenceCounts {
 public:
  CooccurrenceCounts() = default;
  explicit CooccurrenceCounts(std::size_t window_size) : window_size_(window_size) {}

  std::size_t window_size() const noexcept { return window_size_; }
  std::int64_t total_windows() const noexcept { return total_windows_; }
  std::int64_t word_count(const std::string& w) const;
  std::int64_t pair_count(const std::string& a, const std::string& b) const;

  double probability(const std::string& w) const;
  double joint_probability(const std::string& a, const std::string& b) const;

  /// Records one window given its distinct words.
  void add_window(const std::vector<std::string>& distinct_words);
  void set_word_count(const std::string& w, std::int64_t count);
  void set_pair_count(const std::string& a, const std::string& b, std::int64_t count);
  void set_total_windows(std::int64_t total) { total_windows_ = total; }

  const std::map<std::string, std::int64_t>& word_windows() const noexcept {
    return word_windows_;
  }
  const std::map<std::pair<std::string, std::string>, std::int64_t>& pair_windows()
      const noexcept {
    return pair_windows_;
  }

 private:
  static std::pair<std::string, std::string> key(const std::string& a, const std::string& b);

  std::size_t window_size_ = 0;
  std::int64_t total_windows_ = 0;
  std::map<std::string, std::int64_t> word_windows_;
  std::map<std::pair<std::string, std::string>, std::int64_t> pair_windows_;
};

struct MetricsConfig {
  double epsilon = 1e-12;
  std::size_t window_size = 10;
  bool pair_normalize = true;  // mean over word pairs instead of the raw sum

  void validate() const;
};

/// Windows of `window_size` consecutive tokens with stride 1 per document; a
/// document shorter than the window contributes one window. When `tracked` is
/// given, only those words (and pairs among them) are counted; window totals
/// are unaffected.
CooccurrenceCounts window_counts(const Corpus& corpus, std::size_t window_size,
                                 const std::unordered_set<std::string>* tracked = nullptr);

double topic_diversity_k(const std::vector<TopicWords>& topics, std::size_t k);
double topic_diversity(const std::vector<TopicWords>& topics);

/// log((P(a,b)+eps) / (P(a)P(b))) / -log(P(a,b)+eps). A pair with a
/// zero-probability word scores -1, the never-co-occurring limit; a pair
/// present in every window scores 1.
double pair_npmi(const std::string& a, const std::string& b, const CooccurrenceCounts& counts,
                 double epsilon);

double topic_npmi_k(const TopicWords& topic, const CooccurrenceCounts& counts,
                    const MetricsConfig& config);
double topic_npmi(const std::vector<TopicWords>& topics, const CooccurrenceCounts& counts,
                  const MetricsConfig& config);

double topic_cv_k(const TopicWords& topic, const CooccurrenceCounts& counts,
                  const MetricsConfig& config);
double topic_cv(const std::vector<TopicWords>& topics, const CooccurrenceCounts& counts,
                const MetricsConfig& config);

/// Mean squared Euclidean distance over ordered pairs of distinct topic words.
double q_w2v_k(const TopicWords& topic, const EmbeddingMatrix& word_vectors);
double q_w2v(const std::vector<TopicWords>& topics, const EmbeddingMatrix& word_vectors);

struct MetricsReport {
  std::optional<double> td, npmi, cv, qw2v;
  std::vector<double> td_per_topic, npmi_per_topic, cv_per_topic, qw2v_per_topic;
};

enum class Metric { kTd, kNpmi, kCv, kQw2v };

Metric parse_metric(std::string_view name);

/// Evaluates the requested metrics. Q_w2v is skipped when `word_vectors` is
/// null.
MetricsReport evaluate(const std::vector<TopicWords>& topics, const Corpus& corpus,
                       const std::vector<Metric>& metrics, const MetricsConfig& config,
                       const EmbeddingMatrix* word_vectors = nullptr);

}  // namespace g2t
