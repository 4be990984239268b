#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "g2t/community.hpp"
#include "g2t/corpus.hpp"
#include "g2t/embedding.hpp"
#include "g2t/graph.hpp"
#include "g2t/metrics.hpp"
#include "g2t/topics.hpp"

namespace g2t {

using Path = std::filesystem::path;

struct FitConfig {
  Path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kJsonl;
  std::optional<Path> stopwords_path;
  PreprocessConfig preprocess;

  Path embeddings_path;
  ReduceConfig reduce{ReduceMethod::kPca, 5};
  bool similarity_on_original = false;

  double top_p = 95.0;
  PruneMode prune_mode = PruneMode::kKeepFraction;
  DetectorConfig detector;
  std::size_t n_words = 10;

  std::optional<Path> out_topics, out_alpha, out_manifest;
  std::optional<Path> dump_graph, dump_communities;
};

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct FitResult {
  TopicModel model;
  Cover cover;
  SemanticGraph subgraph;
  std::size_t documents_loaded = 0;
  std::size_t documents_dropped = 0;
  std::size_t isolated = 0;
  std::vector<std::vector<std::string>> dropped_components;
  std::vector<StageTiming> timings;
};

/// Checks that, after removing documents dropped by preprocessing, the
/// embedding ids are exactly the retained corpus ids. Returns the matrix
/// reordered to corpus order.
EmbeddingMatrix align_embeddings(const Corpus& corpus, const EmbeddingMatrix& m);

/// Runs preprocess, reduction, graph construction, pruning, component
/// extraction, detection and topic building, writing whichever outputs are
/// configured.
FitResult run_fit(const FitConfig& config);

/// Same pipeline on in-memory inputs; nothing is written.
FitResult fit(const Corpus& preprocessed, const EmbeddingMatrix& embeddings,
              const FitConfig& config);

void write_topics(std::ostream& out, const TopicModel& model);
void write_alpha(std::ostream& out, const DocTopicDistribution& alpha);

/// Topics as stored in a topics file.
struct TopicsFile {
  std::vector<Topic> topics;
  std::vector<std::string> trivial_ids;
};

TopicsFile read_topics(std::istream& in);
TopicsFile load_topics(const Path& path);

struct EvalConfig {
  Path topics_path;
  Path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kJsonl;
  std::optional<Path> stopwords_path;
  PreprocessConfig preprocess;
  std::optional<Path> word_vectors_path;
  std::vector<Metric> metrics{Metric::kTd, Metric::kNpmi, Metric::kCv, Metric::kQw2v};
  MetricsConfig metrics_config;
  std::size_t max_topics = 50;
  std::optional<Path> out;
};

/// Topics ranked by member count (descending, ties by index), capped at
/// `max_topics`.
std::vector<Topic> select_topics(const std::vector<Topic>& topics, std::size_t max_topics);

struct EvalResult {
  std::vector<std::size_t> topic_ids;
  MetricsReport report;
};

EvalResult run_eval(const EvalConfig& config);

void write_report(std::ostream& out, const EvalResult& result);

}  // namespace g2t
