#include "g2t/topics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "g2t/error.hpp"

namespace g2t {

std::vector<TopicCommunity> communities_from_cover(const Cover& cover,
                                                   const SemanticGraph& g) {
  std::vector<TopicCommunity> out;
  out.reserve(cover.size());
  for (std::size_t k = 0; k < cover.size(); ++k) {
    TopicCommunity c{k, {}};
    for (auto node : cover.communities[k]) c.member_ids.push_back(g.node_ids.at(node));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> softmax(std::span<const double> values) {
  std::vector<double> out(values.size());
  if (values.empty()) return out;
  const double peak = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::exp(values[i] - peak);
    total += out[i];
  }
  for (auto& v : out) v /= total;
  return out;
}

double community_similarity(const std::string& doc_id, const TopicCommunity& community,
                            const EmbeddingMatrix& m, std::size_t neighbours) {
  const auto self = m.row(doc_id);
  std::vector<double> sims;
  sims.reserve(community.member_ids.size());
  for (const auto& member : community.member_ids) {
    if (member == doc_id) continue;
    sims.push_back(cosine_similarity(self, m.row(member)));
  }
  if (sims.empty()) return 1.0;

  const auto take = std::min(neighbours, sims.size());
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(take),
                    sims.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += sims[i];
  return sum / static_cast<double>(take);
}

std::vector<double> doc_topic_distribution(const std::string& doc_id,
                                           const std::vector<TopicCommunity>& communities,
                                           const EmbeddingMatrix& m, bool overlapping,
                                           std::size_t neighbours) {
  if (communities.empty()) throw_input("no communities to distribute over");

  if (overlapping) {
    std::vector<double> cs;
    cs.reserve(communities.size());
    for (const auto& c : communities) {
      cs.push_back(community_similarity(doc_id, c, m, neighbours));
    }
    return softmax(cs);
  }

  std::vector<double> row(communities.size(), 0.0);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < communities.size(); ++k) {
    const auto& ids = communities[k].member_ids;
    if (std::find(ids.begin(), ids.end(), doc_id) != ids.end()) {
      row[k] = 1.0;
      ++hits;
    }
  }
  if (hits == 0) throw_input("document '" + doc_id + "' is not assigned to any community");
  if (hits > 1) {
    throw_input("document '" + doc_id + "' belongs to several communities; "
                "use overlapping mode");
  }
  return row;
}

WordScores topic_word_scores(const std::vector<TopicCommunity>& communities,
                             const Corpus& corpus) {
  std::unordered_map<std::string_view, const Document*> by_id;
  for (const auto& doc : corpus.documents) by_id.emplace(doc.id, &doc);

  const auto total_tokens = static_cast<double>(corpus.total_tokens());
  if (total_tokens == 0.0) throw_input("corpus has no tokens");

  std::vector<std::unordered_map<std::string, std::int64_t>> counts(communities.size());
  std::unordered_map<std::string, std::int64_t> clusters_with_word;
  for (std::size_t k = 0; k < communities.size(); ++k) {
    if (communities[k].member_ids.empty()) {
      throw_input("topic community " + std::to_string(k) + " is empty");
    }
    for (const auto& id : communities[k].member_ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw_input("community member '" + id + "' not in corpus");
      for (const auto& token : it->second->tokens) ++counts[k][token];
    }
    for (const auto& [word, c] : counts[k]) ++clusters_with_word[word];
  }

  const auto K = static_cast<double>(communities.size());
  WordScores scores(communities.size());
  for (std::size_t k = 0; k < communities.size(); ++k) {
    for (const auto& [word, c] : counts[k]) {
      const auto df = static_cast<double>(clusters_with_word.at(word));
      scores[k].emplace(word, (static_cast<double>(c) / total_tokens) * (K / df));
    }
  }
  return scores;
}

TopicModel build_topics(const std::vector<TopicCommunity>& communities,
                        const Corpus& corpus, const EmbeddingMatrix& m,
                        const TopicOptions& options, std::vector<std::string> trivial_ids) {
  if (options.n_words < 1) throw_config("n_words must be >= 1");
  if (communities.empty()) throw_degenerate("no topic communities were detected");

  TopicModel model;
  model.trivial_ids = std::move(trivial_ids);

  const auto scores = topic_word_scores(communities, corpus);
  for (std::size_t k = 0; k < communities.size(); ++k) {
    std::vector<std::pair<std::string, double>> ranked(scores[k].begin(), scores[k].end());
    const auto take = std::min(options.n_words, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end(), [](const auto& a, const auto& b) {
                        return a.second != b.second ? a.second > b.second : a.first < b.first;
                      });
    ranked.resize(take);
    if (take < options.n_words) {
      model.warnings.push_back("topic " + std::to_string(k) + " has only " +
                               std::to_string(take) + " distinct words");
    }

    std::vector<double> raw;
    raw.reserve(take);
    for (const auto& [word, score] : ranked) raw.push_back(score);
    const auto beta = softmax(raw);

    Topic topic{k, communities[k].member_ids.size(), {}};
    for (std::size_t i = 0; i < take; ++i) topic.words.push_back({ranked[i].first, beta[i]});
    model.topics.push_back(std::move(topic));
  }

  // Alpha rows follow corpus order.
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    position.emplace(corpus.documents[i].id, i);
  }
  std::unordered_map<std::string_view, std::vector<std::size_t>> membership;
  for (std::size_t k = 0; k < communities.size(); ++k) {
    for (const auto& id : communities[k].member_ids) membership[id].push_back(k);
  }
  std::vector<std::string_view> docs;
  docs.reserve(membership.size());
  for (const auto& [id, ks] : membership) docs.push_back(id);
  std::sort(docs.begin(), docs.end(),
            [&](auto a, auto b) { return position.at(a) < position.at(b); });

  for (const auto id : docs) {
    DocTopicRow out{std::string(id), {}};
    if (options.overlapping) {
      const auto row = doc_topic_distribution(out.id, communities, m, true,
                                              options.similarity_neighbours);
      for (std::size_t k = 0; k < row.size(); ++k) out.weights.push_back({k, row[k]});
    } else {
      const auto& ks = membership.at(id);
      if (ks.size() != 1) {
        throw_input("document '" + out.id + "' belongs to several communities; "
                    "use overlapping mode");
      }
      for (std::size_t k = 0; k < communities.size(); ++k) {
        out.weights.push_back({k, k == ks.front() ? 1.0 : 0.0});
      }
    }
    model.alpha.rows.push_back(std::move(out));
  }
  return model;
}

}  // namespace g2t
