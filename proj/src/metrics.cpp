#include "g2t/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "g2t/error.hpp"

namespace g2t {

std::pair<std::string, std::string> CooccurrenceCounts::key(const std::string& a,
                                                            const std::string& b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::int64_t CooccurrenceCounts::word_count(const std::string& w) const {
  const auto it = word_windows_.find(w);
  return it == word_windows_.end() ? 0 : it->second;
}

std::int64_t CooccurrenceCounts::pair_count(const std::string& a, const std::string& b) const {
  if (a == b) return word_count(a);
  const auto it = pair_windows_.find(key(a, b));
  return it == pair_windows_.end() ? 0 : it->second;
}

double CooccurrenceCounts::probability(const std::string& w) const {
  if (total_windows_ == 0) return 0.0;
  return static_cast<double>(word_count(w)) / static_cast<double>(total_windows_);
}

double CooccurrenceCounts::joint_probability(const std::string& a, const std::string& b) const {
  if (total_windows_ == 0) return 0.0;
  return static_cast<double>(pair_count(a, b)) / static_cast<double>(total_windows_);
}

void CooccurrenceCounts::add_window(const std::vector<std::string>& distinct_words) {
  ++total_windows_;
  for (std::size_t i = 0; i < distinct_words.size(); ++i) {
    ++word_windows_[distinct_words[i]];
    for (std::size_t j = i + 1; j < distinct_words.size(); ++j) {
      ++pair_windows_[key(distinct_words[i], distinct_words[j])];
    }
  }
}

void CooccurrenceCounts::set_word_count(const std::string& w, std::int64_t count) {
  word_windows_[w] = count;
}

void CooccurrenceCounts::set_pair_count(const std::string& a, const std::string& b,
                                        std::int64_t count) {
  if (a == b) throw_input("pair counts are defined for distinct words only");
  pair_windows_[key(a, b)] = count;
}

void MetricsConfig::validate() const {
  if (!(epsilon > 0.0)) throw_config("epsilon must be > 0");
  if (window_size < 2) throw_config("window size must be >= 2");
}

CooccurrenceCounts window_counts(const Corpus& corpus, std::size_t window_size,
                                 const std::unordered_set<std::string>* tracked) {
  if (window_size < 2) throw_config("window size must be >= 2");

  // Counting runs over integer ids of the tracked words; everything else only
  // advances the window total.
  std::unordered_map<std::string, std::size_t> id;
  std::vector<std::string> words;
  auto word_id = [&](const std::string& w) -> std::ptrdiff_t {
    const auto it = id.find(w);
    if (it != id.end()) return static_cast<std::ptrdiff_t>(it->second);
    if (tracked && !tracked->contains(w)) return -1;
    id.emplace(w, words.size());
    words.push_back(w);
    return static_cast<std::ptrdiff_t>(words.size() - 1);
  };

  std::vector<std::int64_t> single;
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> pairs;
  std::int64_t total = 0;
  std::vector<std::ptrdiff_t> ids;
  std::vector<std::size_t> present;
  for (const auto& doc : corpus.documents) {
    if (doc.tokens.empty()) continue;
    ids.clear();
    for (const auto& t : doc.tokens) ids.push_back(word_id(t));
    if (single.size() < words.size()) single.resize(words.size(), 0);

    const auto n = ids.size();
    const auto windows = n <= window_size ? std::size_t{1} : n - window_size + 1;
    const auto span = std::min(n, window_size);
    for (std::size_t start = 0; start < windows; ++start) {
      ++total;
      present.clear();
      for (std::size_t i = start; i < start + span; ++i) {
        if (ids[i] >= 0) present.push_back(static_cast<std::size_t>(ids[i]));
      }
      std::sort(present.begin(), present.end());
      present.erase(std::unique(present.begin(), present.end()), present.end());
      for (std::size_t i = 0; i < present.size(); ++i) {
        ++single[present[i]];
        for (std::size_t j = i + 1; j < present.size(); ++j) {
          ++pairs[{present[i], present[j]}];
        }
      }
    }
  }

  CooccurrenceCounts counts(window_size);
  counts.set_total_windows(total);
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (single[i] > 0) counts.set_word_count(words[i], single[i]);
  }
  for (const auto& [p, c] : pairs) counts.set_pair_count(words[p.first], words[p.second], c);
  return counts;
}

double topic_diversity_k(const std::vector<TopicWords>& topics, std::size_t k) {
  if (k >= topics.size()) throw_input("topic index out of range");
  if (topics[k].empty()) throw_input("topic " + std::to_string(k) + " has no words");
  std::unordered_map<std::string, std::int64_t> occurrences;
  for (const auto& topic : topics) {
    for (const auto& w : topic) ++occurrences[w];
  }
  double sum = 0.0;
  for (const auto& w : topics[k]) sum += 1.0 / static_cast<double>(occurrences.at(w));
  return sum / static_cast<double>(topics[k].size());
}

double topic_diversity(const std::vector<TopicWords>& topics) {
  if (topics.empty()) throw_input("topic diversity needs at least one topic");
  double sum = 0.0;
  for (std::size_t k = 0; k < topics.size(); ++k) sum += topic_diversity_k(topics, k);
  return sum / static_cast<double>(topics.size());
}

double pair_npmi(const std::string& a, const std::string& b, const CooccurrenceCounts& counts,
                 double epsilon) {
  const double pa = counts.probability(a);
  const double pb = counts.probability(b);
  if (pa == 0.0 || pb == 0.0) return -1.0;
  const double joint = counts.joint_probability(a, b) + epsilon;
  const double denominator = -std::log(joint);
  if (denominator <= 0.0) return 1.0;
  return std::log(joint / (pa * pb)) / denominator;
}

namespace {

void require_pairs(const TopicWords& topic) {
  if (topic.size() < 2) throw_input("coherence needs topics with at least 2 words");
}

template <typename PerTopic>
double mean_over_topics(const std::vector<TopicWords>& topics, PerTopic per_topic) {
  if (topics.empty()) throw_input("coherence needs at least one topic");
  double sum = 0.0;
  for (const auto& t : topics) sum += per_topic(t);
  return sum / static_cast<double>(topics.size());
}

}  // namespace

double topic_npmi_k(const TopicWords& topic, const CooccurrenceCounts& counts,
                    const MetricsConfig& config) {
  config.validate();
  require_pairs(topic);
  double sum = 0.0;
  for (std::size_t i = 0; i < topic.size(); ++i) {
    for (std::size_t j = i + 1; j < topic.size(); ++j) {
      sum += pair_npmi(topic[i], topic[j], counts, config.epsilon);
    }
  }
  if (!config.pair_normalize) return sum;
  const double n = static_cast<double>(topic.size());
  return sum / (n * (n - 1) / 2);
}

double topic_npmi(const std::vector<TopicWords>& topics, const CooccurrenceCounts& counts,
                  const MetricsConfig& config) {
  return mean_over_topics(topics, [&](const auto& t) { return topic_npmi_k(t, counts, config); });
}

double topic_cv_k(const TopicWords& topic, const CooccurrenceCounts& counts,
                  const MetricsConfig& config) {
  config.validate();
  require_pairs(topic);
  const auto n = topic.size();
  std::vector<double> profile(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = pair_npmi(topic[i], topic[j], counts, config.epsilon);
      profile[i * n + j] = v;
      profile[j * n + i] = v;
    }
  }
  std::vector<double> norm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) norm[i] += profile[i * n + k] * profile[i * n + k];
    norm[i] = std::sqrt(norm[i]);
    if (norm[i] == 0.0) throw_input("zero NPMI profile vector");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += profile[i * n + k] * profile[j * n + k];
      sum += dot / (norm[i] * norm[j]);
    }
  }
  if (!config.pair_normalize) return sum;
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  return sum / pairs;
}

double topic_cv(const std::vector<TopicWords>& topics, const CooccurrenceCounts& counts,
                const MetricsConfig& config) {
  return mean_over_topics(topics, [&](const auto& t) { return topic_cv_k(t, counts, config); });
}

double q_w2v_k(const TopicWords& topic, const EmbeddingMatrix& word_vectors) {
  require_pairs(topic);
  std::vector<std::span<const double>> vecs;
  std::string missing;
  for (const auto& w : topic) {
    const auto i = word_vectors.index_of(w);
    if (!i) {
      missing += (missing.empty() ? "" : ", ") + w;
      continue;
    }
    vecs.push_back(word_vectors.row(*i));
  }
  if (!missing.empty()) throw_input("missing word vectors: " + missing);

  // Each unordered pair stands for both orderings.
  double sum = 0.0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i + 1; j < vecs.size(); ++j) {
      double d = 0.0;
      for (std::size_t l = 0; l < vecs[i].size(); ++l) {
        const double diff = vecs[i][l] - vecs[j][l];
        d += diff * diff;
      }
      sum += 2.0 * d;
    }
  }
  const double n = static_cast<double>(vecs.size());
  return sum / (n * (n - 1));
}

double q_w2v(const std::vector<TopicWords>& topics, const EmbeddingMatrix& word_vectors) {
  if (topics.empty()) throw_input("Q_w2v needs at least one topic");
  std::string missing;
  for (const auto& t : topics) {
    for (const auto& w : t) {
      if (!word_vectors.index_of(w)) missing += (missing.empty() ? "" : ", ") + w;
    }
  }
  if (!missing.empty()) throw_input("missing word vectors: " + missing);
  return mean_over_topics(topics, [&](const auto& t) { return q_w2v_k(t, word_vectors); });
}

Metric parse_metric(std::string_view name) {
  if (name == "td") return Metric::kTd;
  if (name == "npmi") return Metric::kNpmi;
  if (name == "cv") return Metric::kCv;
  if (name == "qw2v") return Metric::kQw2v;
  throw_config("unknown metric '" + std::string(name) + "'");
}

MetricsReport evaluate(const std::vector<TopicWords>& topics, const Corpus& corpus,
                       const std::vector<Metric>& metrics, const MetricsConfig& config,
                       const EmbeddingMatrix* word_vectors) {
  config.validate();
  if (topics.empty()) throw_input("no topics to evaluate");
  auto wants = [&](Metric m) {
    return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
  };

  MetricsReport report;
  if (wants(Metric::kTd)) {
    for (std::size_t k = 0; k < topics.size(); ++k) {
      report.td_per_topic.push_back(topic_diversity_k(topics, k));
    }
    report.td = topic_diversity(topics);
  }
  if (wants(Metric::kNpmi) || wants(Metric::kCv)) {
    std::unordered_set<std::string> tracked;
    for (const auto& t : topics) tracked.insert(t.begin(), t.end());
    const auto counts = window_counts(corpus, config.window_size, &tracked);
    if (wants(Metric::kNpmi)) {
      for (const auto& t : topics) report.npmi_per_topic.push_back(topic_npmi_k(t, counts, config));
      report.npmi = topic_npmi(topics, counts, config);
    }
    if (wants(Metric::kCv)) {
      for (const auto& t : topics) report.cv_per_topic.push_back(topic_cv_k(t, counts, config));
      report.cv = topic_cv(topics, counts, config);
    }
  }
  if (wants(Metric::kQw2v) && word_vectors) {
    report.qw2v = q_w2v(topics, *word_vectors);
    for (const auto& t : topics) report.qw2v_per_topic.push_back(q_w2v_k(t, *word_vectors));
  }
  return report;
}

}  // namespace g2t
