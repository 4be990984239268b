#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "g2t/error.hpp"
#include "g2t/pipeline.hpp"

namespace py = pybind11;
using namespace g2t;

namespace {

EmbeddingMatrix matrix_from(const std::vector<std::string>& ids,
                            const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
  if (values.ndim() != 2) throw_input("embeddings must be a 2-D array");
  if (static_cast<std::size_t>(values.shape(0)) != ids.size()) {
    throw_input("embeddings have " + std::to_string(values.shape(0)) + " rows for " +
                std::to_string(ids.size()) + " ids");
  }
  const auto dim = static_cast<std::size_t>(values.shape(1));
  std::vector<double> flat(values.data(), values.data() + values.size());
  return EmbeddingMatrix(ids, std::move(flat), dim);
}

py::array_t<double> to_numpy(const EmbeddingMatrix& m) {
  py::array_t<double> out({m.rows(), m.dim()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

PreprocessConfig preprocess_config(bool lowercase, bool strip_punctuation,
                                   const std::vector<std::string>& stopwords, int min_tokens) {
  PreprocessConfig c;
  c.lowercase = lowercase;
  c.strip_punctuation = strip_punctuation;
  c.stopwords.insert(stopwords.begin(), stopwords.end());
  c.min_tokens = min_tokens;
  return c;
}

Partition partition_from(const SemanticGraph& g, const std::vector<std::vector<std::size_t>>& communities) {
  std::vector<std::size_t> labels(g.node_count(), g.node_count());
  for (std::size_t k = 0; k < communities.size(); ++k) {
    for (auto node : communities[k]) {
      if (node >= g.node_count()) throw_input("node " + std::to_string(node) + " is not in the graph");
      if (labels[node] != g.node_count()) throw_input("node " + std::to_string(node) + " appears twice");
      labels[node] = k;
    }
  }
  for (std::size_t node = 0; node < labels.size(); ++node) {
    if (labels[node] == g.node_count()) throw_input("node " + std::to_string(node) + " is unassigned");
  }
  return Partition::from_labels(labels);
}

py::dict topics_dict(const TopicModel& model) {
  py::list topics;
  for (const auto& t : model.topics) {
    py::list words;
    for (const auto& w : t.words) words.append(py::make_tuple(w.word, w.weight));
    py::dict d;
    d["id"] = t.index;
    d["size"] = t.size;
    d["words"] = words;
    topics.append(d);
  }
  py::dict alpha;
  for (const auto& row : model.alpha.rows) {
    std::vector<double> weights;
    for (const auto& w : row.weights) weights.push_back(w.weight);
    alpha[py::str(row.id)] = weights;
  }
  py::dict out;
  out["topics"] = topics;
  out["alpha"] = alpha;
  out["trivial_ids"] = model.trivial_ids;
  out["warnings"] = model.warnings;
  return out;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict out;
  auto put = [&](const char* name, const std::optional<double>& v, const std::vector<double>& per_topic) {
    if (!v) return;
    out[name] = *v;
    out[(std::string(name) + "_per_topic").c_str()] = per_topic;
  };
  put("td", r.td, r.td_per_topic);
  put("npmi", r.npmi, r.npmi_per_topic);
  put("cv", r.cv, r.cv_per_topic);
  put("qw2v", r.qw2v, r.qw2v_per_topic);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph-based topic modelling over document embeddings";

  static py::exception<Error> base(m, "G2TError");
  static py::exception<Error> input_error(m, "InputError", base.ptr());
  static py::exception<Error> config_error(m, "ConfigError", base.ptr());
  static py::exception<Error> degenerate_error(m, "DegenerateError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::kInput: py::set_error(input_error, e.what()); break;
        case ErrorKind::kConfig: py::set_error(config_error, e.what()); break;
        case ErrorKind::kDegenerate: py::set_error(degenerate_error, e.what()); break;
      }
    }
  });

  // corpus
  py::class_<Document>(m, "Document")
      .def_readonly("id", &Document::id)
      .def_readonly("raw_text", &Document::raw_text)
      .def_readonly("tokens", &Document::tokens);
  py::class_<Corpus>(m, "Corpus")
      .def(py::init([](const std::vector<std::string>& ids, const std::vector<std::string>& texts) {
             if (ids.size() != texts.size()) throw_input("ids and texts differ in length");
             Corpus c;
             for (std::size_t i = 0; i < ids.size(); ++i) c.documents.push_back({ids[i], texts[i], {}});
             return c;
           }),
           py::arg("ids"), py::arg("texts"))
      .def_readonly("documents", &Corpus::documents)
      .def_readonly("dropped", &Corpus::dropped)
      .def("__len__", &Corpus::size)
      .def_property_readonly("total_tokens", &Corpus::total_tokens);

  m.def("load_corpus", [](const std::filesystem::path& path, const std::string& format) {
    return load_corpus(path, parse_corpus_format(format));
  }, py::arg("path"), py::arg("format") = "jsonl");
  m.def("tokenize", [](const std::string& text, bool lowercase, bool strip_punctuation,
                       const std::vector<std::string>& stopwords) {
    return tokenize(text, preprocess_config(lowercase, strip_punctuation, stopwords, 5));
  }, py::arg("text"), py::arg("lowercase") = true, py::arg("strip_punctuation") = true,
        py::arg("stopwords") = std::vector<std::string>{});
  m.def("preprocess", [](const Corpus& corpus, bool lowercase, bool strip_punctuation,
                         const std::vector<std::string>& stopwords, int min_tokens) {
    return preprocess(corpus, preprocess_config(lowercase, strip_punctuation, stopwords, min_tokens));
  }, py::arg("corpus"), py::arg("lowercase") = true, py::arg("strip_punctuation") = true,
        py::arg("stopwords") = std::vector<std::string>{}, py::arg("min_tokens") = 5);

  // embeddings
  py::class_<EmbeddingMatrix>(m, "EmbeddingMatrix")
      .def(py::init(&matrix_from), py::arg("ids"), py::arg("values"))
      .def_property_readonly("ids", &EmbeddingMatrix::ids)
      .def_property_readonly("dim", &EmbeddingMatrix::dim)
      .def("__len__", &EmbeddingMatrix::rows)
      .def("to_numpy", &to_numpy);
  m.def("load_embeddings", &load_embeddings, py::arg("path"));
  m.def("save_embeddings", &save_embeddings, py::arg("path"), py::arg("matrix"));
  m.def("reduce_dimensions", [](const EmbeddingMatrix& x, const std::string& method, std::size_t dim) {
    return reduce_dimensions(x, {parse_reduce_method(method), dim});
  }, py::arg("matrix"), py::arg("method") = "pca", py::arg("dim") = 5);
  m.def("cosine_similarity", [](const std::vector<double>& a, const std::vector<double>& b) {
    return cosine_similarity(a, b);
  });

  // graph
  py::class_<SemanticGraph>(m, "SemanticGraph")
      .def_readonly("node_ids", &SemanticGraph::node_ids)
      .def_readonly("weighted", &SemanticGraph::weighted)
      .def_property_readonly("edges", [](const SemanticGraph& g) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        for (const auto& e : g.edges) out.emplace_back(e.u, e.v, e.weight);
        return out;
      })
      .def("node_count", &SemanticGraph::node_count)
      .def("edge_count", &SemanticGraph::edge_count);
  m.def("build_semantic_graph", &build_semantic_graph, py::arg("matrix"));
  m.def("keep_count", &keep_count, py::arg("top_p"), py::arg("edge_count"));
  m.def("prune_top_p", [](const SemanticGraph& g, double top_p, const std::string& mode) {
    return prune_top_p(g, top_p, parse_prune_mode(mode));
  }, py::arg("graph"), py::arg("top_p") = 95.0, py::arg("mode") = "keep-fraction");
  m.def("max_connected_subgraph", [](const SemanticGraph& g) {
    auto r = max_connected_subgraph(g);
    return py::make_tuple(std::move(r.subgraph), r.isolated, r.dropped_components);
  }, py::arg("graph"), "Returns (subgraph, isolated ids, dropped components).");

  // communities
  m.def("modularity", [](const SemanticGraph& g, const std::vector<std::vector<std::size_t>>& communities) {
    return modularity(g, partition_from(g, communities));
  }, py::arg("graph"), py::arg("communities"));
  m.def("detect", [](const SemanticGraph& g, const std::string& algorithm, std::uint64_t seed,
                     int slpa_iterations, double slpa_threshold) {
    DetectorConfig c;
    c.algorithm = parse_algorithm(algorithm);
    c.seed = seed;
    c.slpa_iterations = slpa_iterations;
    c.slpa_threshold = slpa_threshold;
    return detect(g, c).communities;
  }, py::arg("graph"), py::arg("algorithm") = "greedy-modularity", py::arg("seed") = 0,
        py::arg("slpa_iterations") = 20, py::arg("slpa_threshold") = 0.3,
        "Communities as sorted node-index lists.");

  // pipeline
  m.def("fit", [](const Corpus& corpus, const EmbeddingMatrix& embeddings, const std::string& reduce,
                  std::size_t dim, bool similarity_on_original, double top_p, const std::string& prune_mode,
                  const std::string& algorithm, std::uint64_t seed, int slpa_iterations,
                  double slpa_threshold, std::size_t n_words) {
    FitConfig c;
    c.reduce = {parse_reduce_method(reduce), dim};
    c.similarity_on_original = similarity_on_original;
    c.top_p = top_p;
    c.prune_mode = parse_prune_mode(prune_mode);
    c.detector.algorithm = parse_algorithm(algorithm);
    c.detector.seed = seed;
    c.detector.slpa_iterations = slpa_iterations;
    c.detector.slpa_threshold = slpa_threshold;
    c.n_words = n_words;
    const auto result = fit(corpus, embeddings, c);
    auto out = topics_dict(result.model);
    out["subgraph_nodes"] = result.subgraph.node_count();
    out["subgraph_edges"] = result.subgraph.edge_count();
    out["isolated"] = result.isolated;
    return out;
  }, py::arg("corpus"), py::arg("embeddings"), py::arg("reduce") = "pca", py::arg("dim") = 5,
        py::arg("similarity_on_original") = false, py::arg("top_p") = 95.0,
        py::arg("prune_mode") = "keep-fraction", py::arg("algorithm") = "greedy-modularity",
        py::arg("seed") = 0, py::arg("slpa_iterations") = 20, py::arg("slpa_threshold") = 0.3,
        py::arg("n_words") = 10,
        "Runs the pipeline on a preprocessed corpus; returns topics and alpha.");

  // metrics
  m.def("topic_diversity", &topic_diversity, py::arg("topics"));
  m.def("evaluate", [](const std::vector<TopicWords>& topics, const Corpus& corpus,
                       const std::vector<std::string>& metrics, std::size_t window, double epsilon,
                       bool pair_normalize, const EmbeddingMatrix* word_vectors) {
    std::vector<Metric> wanted;
    for (const auto& name : metrics) wanted.push_back(parse_metric(name));
    MetricsConfig c;
    c.window_size = window;
    c.epsilon = epsilon;
    c.pair_normalize = pair_normalize;
    return report_dict(evaluate(topics, corpus, wanted, c, word_vectors));
  }, py::arg("topics"), py::arg("corpus"),
        py::arg("metrics") = std::vector<std::string>{"td", "npmi", "cv", "qw2v"}, py::arg("window") = 10,
        py::arg("epsilon") = 1e-12, py::arg("pair_normalize") = true, py::arg("word_vectors") = nullptr,
        "Scores topics against a preprocessed reference corpus; qw2v needs word_vectors.");
}
