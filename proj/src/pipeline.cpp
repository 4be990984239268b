#include "g2t/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "g2t/error.hpp"

namespace g2t {

namespace {

using Json = nlohmann::ordered_json;

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  void lap(std::string stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back(
        {std::move(stage), std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::ofstream open_output(const Path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_input("cannot write " + path.string());
  return out;
}

std::string join_first(const std::vector<std::string>& ids, std::size_t limit) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ...";
  return out;
}

Json config_snapshot(const FitConfig& c) {
  Json j;
  j["corpus"] = c.corpus_path.string();
  j["corpus_format"] = c.corpus_format == CorpusFormat::kJsonl ? "jsonl" : "tsv";
  j["stopwords"] = c.stopwords_path ? Json(c.stopwords_path->string()) : Json(nullptr);
  j["lowercase"] = c.preprocess.lowercase;
  j["strip_punctuation"] = c.preprocess.strip_punctuation;
  j["min_tokens"] = c.preprocess.min_tokens;
  j["embeddings"] = c.embeddings_path.string();
  j["reduce"] = c.reduce.method == ReduceMethod::kPca ? "pca" : "none";
  j["dim"] = c.reduce.target_dim;
  j["similarity_on_original"] = c.similarity_on_original;
  j["top_p"] = c.top_p;
  j["prune_mode"] = c.prune_mode == PruneMode::kKeepFraction ? "keep-fraction" : "percentile";
  j["algorithm"] = std::string(algorithm_name(c.detector.algorithm));
  j["seed"] = c.detector.seed;
  j["slpa_iterations"] = c.detector.slpa_iterations;
  j["slpa_threshold"] = c.detector.slpa_threshold;
  j["n_words"] = c.n_words;
  return j;
}

}  // namespace

EmbeddingMatrix align_embeddings(const Corpus& corpus, const EmbeddingMatrix& m) {
  const std::unordered_set<std::string> dropped(corpus.dropped.begin(), corpus.dropped.end());
  std::unordered_set<std::string> retained;
  std::vector<std::string> offending;
  std::vector<std::string> order;
  for (const auto& doc : corpus.documents) {
    retained.insert(doc.id);
    order.push_back(doc.id);
    if (!m.index_of(doc.id)) offending.push_back(doc.id + " (no embedding)");
  }
  for (const auto& id : m.ids()) {
    if (!retained.contains(id) && !dropped.contains(id)) {
      offending.push_back(id + " (not in corpus)");
    }
  }
  if (!offending.empty()) {
    throw_input("corpus and embedding ids differ (" + std::to_string(offending.size()) +
                " offending): " + join_first(offending, 10));
  }
  return m.select(order);
}

FitResult fit(const Corpus& preprocessed, const EmbeddingMatrix& embeddings,
              const FitConfig& config) {
  config.detector.validate();
  if (config.n_words < 1) throw_config("n_words must be >= 1");
  if (!(config.top_p > 0.0 && config.top_p <= 100.0)) {
    throw_config("top-P must be in (0, 100]");
  }

  FitResult result;
  StageClock clock(result.timings);
  result.documents_loaded = preprocessed.documents.size() + preprocessed.dropped.size();
  result.documents_dropped = preprocessed.dropped.size();

  const auto aligned = align_embeddings(preprocessed, embeddings);
  if (aligned.rows() < 2) {
    throw_degenerate("fewer than 2 documents survive preprocessing; no graph to build");
  }
  const auto reduced = reduce_dimensions(aligned, config.reduce);
  const auto& vectors = config.similarity_on_original ? aligned : reduced;
  clock.lap("reduce");

  const auto complete = build_semantic_graph(vectors);
  clock.lap("graph");
  const auto pruned = prune_top_p(complete, config.top_p, config.prune_mode);
  clock.lap("prune");
  auto component = max_connected_subgraph(pruned);
  if (component.subgraph.node_count() == 0) {
    throw_degenerate("pruning left no connected subgraph (every document is isolated)");
  }
  clock.lap("component");

  if (config.dump_graph) {
    auto out = open_output(*config.dump_graph);
    write_edge_list(out, component.subgraph);
  }

  result.cover = detect(component.subgraph, config.detector);
  clock.lap("detect");

  std::vector<std::string> trivial = component.isolated;
  for (const auto& comp : component.dropped_components) {
    trivial.insert(trivial.end(), comp.begin(), comp.end());
  }
  const auto communities = communities_from_cover(result.cover, component.subgraph);
  TopicOptions options;
  options.n_words = config.n_words;
  options.overlapping = is_overlapping(config.detector.algorithm);
  result.model = build_topics(communities, preprocessed, vectors, options, std::move(trivial));
  clock.lap("topics");

  if (config.dump_communities) {
    auto out = open_output(*config.dump_communities);
    for (const auto& c : communities) {
      Json line;
      line["community"] = c.index;
      line["members"] = c.member_ids;
      out << line.dump() << '\n';
    }
  }

  result.isolated = component.isolated.size();
  result.dropped_components = std::move(component.dropped_components);
  result.subgraph = std::move(component.subgraph);
  return result;
}

FitResult run_fit(const FitConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  auto preprocess_config = config.preprocess;
  if (config.stopwords_path) preprocess_config.stopwords = load_stopwords(*config.stopwords_path);
  preprocess_config.validate();

  const auto raw = load_corpus(config.corpus_path, config.corpus_format);
  const auto corpus = preprocess(raw, preprocess_config);
  const auto embeddings = load_embeddings(config.embeddings_path);
  const auto loaded = std::chrono::steady_clock::now();

  auto result = fit(corpus, embeddings, config);
  result.timings.insert(result.timings.begin(),
                        {"load_and_preprocess",
                         std::chrono::duration<double, std::milli>(loaded - start).count()});

  if (config.out_topics) {
    auto out = open_output(*config.out_topics);
    write_topics(out, result.model);
  }
  if (config.out_alpha) {
    auto out = open_output(*config.out_alpha);
    write_alpha(out, result.model.alpha);
  }
  if (config.out_manifest) {
    Json manifest;
    manifest["config"] = config_snapshot(config);
    manifest["k"] = result.model.topics.size();
    manifest["documents_loaded"] = result.documents_loaded;
    manifest["documents_dropped_preprocess"] = result.documents_dropped;
    manifest["isolated_documents"] = result.isolated;
    std::size_t in_dropped = 0;
    for (const auto& c : result.dropped_components) in_dropped += c.size();
    manifest["dropped_components"] = result.dropped_components.size();
    manifest["documents_in_dropped_components"] = in_dropped;
    manifest["subgraph_nodes"] = result.subgraph.node_count();
    manifest["subgraph_edges"] = result.subgraph.edge_count();
    manifest["warnings"] = result.model.warnings;
    Json timings = Json::object();
    for (const auto& t : result.timings) timings[t.stage] = t.milliseconds;
    manifest["timings_ms"] = timings;
    auto out = open_output(*config.out_manifest);
    out << manifest.dump(2) << '\n';
  }
  return result;
}

void write_topics(std::ostream& out, const TopicModel& model) {
  Json doc;
  doc["topics"] = Json::array();
  for (const auto& t : model.topics) {
    Json topic;
    topic["id"] = t.index;
    topic["size"] = t.size;
    topic["words"] = Json::array();
    for (const auto& w : t.words) topic["words"].push_back({{"word", w.word}, {"weight", w.weight}});
    doc["topics"].push_back(std::move(topic));
  }
  doc["trivial_ids"] = model.trivial_ids;
  out << doc.dump(2) << '\n';
}

void write_alpha(std::ostream& out, const DocTopicDistribution& alpha) {
  for (const auto& row : alpha.rows) {
    Json line;
    line["id"] = row.id;
    line["alpha"] = Json::array();
    for (const auto& w : row.weights) {
      line["alpha"].push_back({{"topic", w.topic}, {"weight", w.weight}});
    }
    out << line.dump() << '\n';
  }
}

TopicsFile read_topics(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("corrupt topics file: ") + e.what());
  }
  TopicsFile file;
  try {
    for (const auto& t : doc.at("topics")) {
      Topic topic;
      topic.index = t.at("id").get<std::size_t>();
      topic.size = t.at("size").get<std::size_t>();
      for (const auto& w : t.at("words")) {
        topic.words.push_back({w.at("word").get<std::string>(), w.at("weight").get<double>()});
      }
      if (topic.words.empty()) throw_input("corrupt topics file: topic without words");
      file.topics.push_back(std::move(topic));
    }
    if (doc.contains("trivial_ids")) {
      file.trivial_ids = doc["trivial_ids"].get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("corrupt topics file: ") + e.what());
  }
  if (file.topics.empty()) throw_input("corrupt topics file: no topics");
  return file;
}

TopicsFile load_topics(const Path& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open topics file " + path.string());
  return read_topics(in);
}

std::vector<Topic> select_topics(const std::vector<Topic>& topics, std::size_t max_topics) {
  std::vector<Topic> ranked = topics;
  std::stable_sort(ranked.begin(), ranked.end(), [](const Topic& a, const Topic& b) {
    return a.size != b.size ? a.size > b.size : a.index < b.index;
  });
  if (ranked.size() > max_topics) ranked.resize(max_topics);
  return ranked;
}

EvalResult run_eval(const EvalConfig& config) {
  config.metrics_config.validate();
  if (config.max_topics < 1) throw_config("max topics must be >= 1");

  const auto file = load_topics(config.topics_path);
  auto preprocess_config = config.preprocess;
  if (config.stopwords_path) preprocess_config.stopwords = load_stopwords(*config.stopwords_path);
  const auto corpus = preprocess(load_corpus(config.corpus_path, config.corpus_format),
                                 preprocess_config);
  std::optional<EmbeddingMatrix> vectors;
  if (config.word_vectors_path) vectors = load_embeddings(*config.word_vectors_path);

  EvalResult result;
  std::vector<TopicWords> words;
  for (const auto& t : select_topics(file.topics, config.max_topics)) {
    result.topic_ids.push_back(t.index);
    auto& list = words.emplace_back();
    for (const auto& w : t.words) list.push_back(w.word);
  }
  result.report = evaluate(words, corpus, config.metrics, config.metrics_config,
                           vectors ? &*vectors : nullptr);
  if (config.out) {
    auto out = open_output(*config.out);
    write_report(out, result);
  }
  return result;
}

void write_report(std::ostream& out, const EvalResult& result) {
  const auto& r = result.report;
  Json doc;
  Json per_topic;
  per_topic["topic"] = result.topic_ids;
  if (r.td) {
    doc["td"] = *r.td;
    per_topic["td"] = r.td_per_topic;
  }
  if (r.npmi) {
    doc["npmi"] = *r.npmi;
    per_topic["npmi"] = r.npmi_per_topic;
  }
  if (r.cv) {
    doc["cv"] = *r.cv;
    per_topic["cv"] = r.cv_per_topic;
  }
  if (r.qw2v) {
    doc["qw2v"] = *r.qw2v;
    per_topic["qw2v"] = r.qw2v_per_topic;
  }
  doc["per_topic"] = per_topic;
  out << doc.dump(2) << '\n';
}

}  // namespace g2t
