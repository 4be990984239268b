// g2t: topic modelling from document embeddings via semantic-graph communities.
//
//   g2t fit  --corpus F --embeddings F --out-topics F --out-alpha F --out-manifest F ...
//   g2t eval --topics F --corpus F [--word-vectors F] --out F ...
//
// Exit codes: 0 success, 2 input error, 3 degenerate pipeline state, 64 usage.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "g2t/error.hpp"
#include "g2t/pipeline.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitUsage = 64;

struct PreprocessOptions {
  std::string corpus_format = "jsonl";
  std::string stopwords;
  bool keep_case = false;
  bool keep_punctuation = false;
  int min_tokens = 5;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--corpus-format", corpus_format, "Corpus file format")
        ->check(CLI::IsMember({"jsonl", "tsv"}))
        ->capture_default_str();
    cmd.add_option("--stopwords", stopwords, "Stopword file, one word per line");
    cmd.add_flag("--keep-case", keep_case, "Do not lowercase");
    cmd.add_flag("--keep-punctuation", keep_punctuation, "Do not strip punctuation/symbols");
    cmd.add_option("--min-tokens", min_tokens, "Drop documents with fewer tokens")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  void apply(g2t::CorpusFormat& format, std::optional<g2t::Path>& stopwords_path,
             g2t::PreprocessConfig& config) const {
    format = g2t::parse_corpus_format(corpus_format);
    if (!stopwords.empty()) stopwords_path = stopwords;
    config.lowercase = !keep_case;
    config.strip_punctuation = !keep_punctuation;
    config.min_tokens = min_tokens;
  }
};

const auto kTopP = CLI::Validator(
    [](std::string& value) -> std::string {
      double p = 0.0;
      std::istringstream in(value);
      if (!(in >> p) || !(p > 0.0 && p <= 100.0)) return "top-P must be in (0, 100]";
      return {};
    },
    "(0,100]");

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-to-topic modelling over document embeddings"};
  app.require_subcommand(1);

  // fit
  g2t::FitConfig fit;
  PreprocessOptions fit_pre;
  std::string corpus, embeddings, reduce = "pca", algorithm = "greedy-modularity",
              prune_mode = "keep-fraction", out_topics, out_alpha, out_manifest,
              dump_graph, dump_communities;
  std::size_t dim = 5;
  auto* fit_cmd = app.add_subcommand("fit", "Build topics from a corpus and its embeddings");
  fit_cmd->add_option("--corpus", corpus, "Corpus file")->required();
  fit_pre.add_to(*fit_cmd);
  fit_cmd->add_option("--embeddings", embeddings, "Document embeddings (EMB-JSONL)")
      ->required()
      ;
  fit_cmd->add_option("--reduce", reduce, "Dimensionality reduction")
      ->check(CLI::IsMember({"none", "pca"}))
      ->capture_default_str();
  fit_cmd->add_option("--dim", dim, "Reduced dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_flag("--similarity-on-original", fit.similarity_on_original,
                    "Build the graph from unreduced embeddings");
  fit_cmd->add_option("--top-p", fit.top_p, "Percentage of heaviest edges kept")
      ->check(kTopP)
      ->capture_default_str();
  fit_cmd->add_option("--prune-mode", prune_mode, "Pruning semantics")
      ->check(CLI::IsMember({"keep-fraction", "percentile"}))
      ->capture_default_str();
  fit_cmd->add_option("--algorithm", algorithm, "Community detection algorithm")
      ->check(CLI::IsMember({"greedy-modularity", "louvain", "lpa", "slpa"}))
      ->capture_default_str();
  fit_cmd->add_option("--slpa-iterations", fit.detector.slpa_iterations)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--slpa-threshold", fit.detector.slpa_threshold)
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  fit_cmd->add_option("--n-words", fit.n_words, "Words per topic")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit.detector.seed)->capture_default_str();
  fit_cmd->add_option("--out-topics", out_topics)->required();
  fit_cmd->add_option("--out-alpha", out_alpha)->required();
  fit_cmd->add_option("--out-manifest", out_manifest)->required();
  fit_cmd->add_option("--dump-graph", dump_graph, "Write the pruned subgraph edge list");
  fit_cmd->add_option("--dump-communities", dump_communities,
                      "Write community memberships as JSON lines");

  // eval
  g2t::EvalConfig eval;
  PreprocessOptions eval_pre;
  std::string topics, eval_corpus, word_vectors, metrics = "td,npmi,cv,qw2v", out;
  bool raw_sums = false;
  auto* eval_cmd = app.add_subcommand("eval", "Score a topics file");
  eval_cmd->add_option("--topics", topics)->required();
  eval_cmd->add_option("--corpus", eval_corpus, "Reference corpus for co-occurrence")
      ->required()
      ;
  eval_pre.add_to(*eval_cmd);
  eval_cmd->add_option("--word-vectors", word_vectors, "Word vectors (EMB-JSONL) for Q_w2v")
      ;
  eval_cmd->add_option("--metrics", metrics, "Comma-separated subset of td,npmi,cv,qw2v")
      ->capture_default_str();
  eval_cmd->add_option("--window", eval.metrics_config.window_size, "Sliding window size")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30))
      ->capture_default_str();
  eval_cmd->add_option("--epsilon", eval.metrics_config.epsilon)->capture_default_str();
  eval_cmd->add_flag("--raw-sums", raw_sums, "Sum over word pairs instead of averaging");
  eval_cmd->add_option("--max-topics", eval.max_topics, "Evaluate the largest N topics")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fit_cmd) {
      fit_pre.apply(fit.corpus_format, fit.stopwords_path, fit.preprocess);
      fit.corpus_path = corpus;
      fit.embeddings_path = embeddings;
      fit.reduce = {g2t::parse_reduce_method(reduce), dim};
      fit.prune_mode = g2t::parse_prune_mode(prune_mode);
      fit.detector.algorithm = g2t::parse_algorithm(algorithm);
      fit.out_topics = out_topics;
      fit.out_alpha = out_alpha;
      fit.out_manifest = out_manifest;
      if (!dump_graph.empty()) fit.dump_graph = dump_graph;
      if (!dump_communities.empty()) fit.dump_communities = dump_communities;

      const auto result = g2t::run_fit(fit);
      for (const auto& w : result.model.warnings) std::cerr << "warning: " << w << '\n';
      std::cerr << "fit: K=" << result.model.topics.size()
                << " subgraph_nodes=" << result.subgraph.node_count()
                << " trivial=" << result.model.trivial_ids.size() << '\n';
    } else {
      eval_pre.apply(eval.corpus_format, eval.stopwords_path, eval.preprocess);
      eval.topics_path = topics;
      eval.corpus_path = eval_corpus;
      if (!word_vectors.empty()) eval.word_vectors_path = word_vectors;
      eval.metrics.clear();
      std::stringstream list(metrics);
      for (std::string name; std::getline(list, name, ',');) {
        if (!name.empty()) eval.metrics.push_back(g2t::parse_metric(name));
      }
      eval.metrics_config.pair_normalize = !raw_sums;
      eval.out = out;
      g2t::run_eval(eval);
    }
  } catch (const g2t::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case g2t::ErrorKind::kInput: return kExitInput;
      case g2t::ErrorKind::kDegenerate: return kExitDegenerate;
      case g2t::ErrorKind::kConfig: return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
