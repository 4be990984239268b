#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "g2t/community.hpp"
#include "g2t/corpus.hpp"
#include "g2t/embedding.hpp"

namespace g2t {

/// The document set behind one topic.
struct TopicCommunity {
  std::size_t index = 0;
  std::vector<std::string> member_ids;
};

struct WordWeight {
  std::string word;
  double weight = 0.0;
};

struct Topic {
  std::size_t index = 0;
  std::size_t size = 0;  // member documents
  std::vector<WordWeight> words;
};

struct TopicWeight {
  std::size_t topic = 0;
  double weight = 0.0;
};

struct DocTopicRow {
  std::string id;
  std::vector<TopicWeight> weights;
};

struct DocTopicDistribution {
  std::vector<DocTopicRow> rows;
};

struct TopicModel {
  std::vector<Topic> topics;
  DocTopicDistribution alpha;
  std::vector<std::string> trivial_ids;
  std::vector<std::string> warnings;
};

struct TopicOptions {
  std::size_t n_words = 10;
  bool overlapping = false;
  std::size_t similarity_neighbours = 10;
};

/// Per-topic word scores, indexed by topic position.
using WordScores = std::vector<std::map<std::string, double>>;

std::vector<TopicCommunity> communities_from_cover(const Cover& cover,
                                                   const SemanticGraph& g);

std::vector<double> softmax(std::span<const double> values);

/// Mean similarity of `doc_id` to its `neighbours` most similar members of the
/// community, never counting itself. A community holding only the document
/// scores 1.
double community_similarity(const std::string& doc_id, const TopicCommunity& community,
                            const EmbeddingMatrix& m, std::size_t neighbours = 10);

/// One alpha row, ordered like `communities`. Overlapping mode applies a
/// softmax over community similarities; otherwise the row is one-hot on the
/// single community containing the document.
std::vector<double> doc_topic_distribution(const std::string& doc_id,
                                           const std::vector<TopicCommunity>& communities,
                                           const EmbeddingMatrix& m, bool overlapping,
                                           std::size_t neighbours = 10);

/// score(k, w) = (count of w in topic k's documents / corpus token count)
///             * (K / number of topics whose documents contain w).
WordScores topic_word_scores(const std::vector<TopicCommunity>& communities,
                             const Corpus& corpus);

TopicModel build_topics(const std::vector<TopicCommunity>& communities,
                        const Corpus& corpus, const EmbeddingMatrix& m,
                        const TopicOptions& options,
                        std::vector<std::string> trivial_ids = {});

}  // namespace g2t
