#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "g2t/error.hpp"
#include "g2t/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace g2t;
namespace fs = std::filesystem;

namespace {

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("g2t_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  FitConfig planted_config() {
    const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
    fixture_ = f;
    FitConfig c;
    c.corpus_path = f.corpus;
    c.embeddings_path = f.embeddings;
    c.reduce = {ReduceMethod::kNone, 5};
    return c;
  }

  fs::path write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
  g2t::testing::PlantedFixture fixture_;
};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no g2t::Error thrown";
  return ErrorKind::kInput;
}

}  // namespace

TEST_F(PipelineTest, PlantedFixtureGeometry) {
  planted_config();
  const auto m = load_embeddings(fixture_.embeddings);
  ASSERT_EQ(m.rows(), 90u);
  double min_intra = 1.0, max_inter = -1.0;
  for (std::size_t a = 0; a < m.rows(); ++a) {
    for (std::size_t b = a + 1; b < m.rows(); ++b) {
      const double s = cosine_similarity(m.row(a), m.row(b));
      if (fixture_.group_of[a] == fixture_.group_of[b]) min_intra = std::min(min_intra, s);
      else max_inter = std::max(max_inter, s);
    }
  }
  EXPECT_GE(min_intra, 0.9);
  EXPECT_LE(max_inter, 0.3);
}

TEST_F(PipelineTest, PlantedFixtureRecoversThreeTopics) {
  auto config = planted_config();
  config.out_topics = dir_ / "topics.json";
  config.out_alpha = dir_ / "alpha.jsonl";
  config.out_manifest = dir_ / "manifest.json";
  const auto result = run_fit(config);
  ASSERT_EQ(result.model.topics.size(), 3u);
  for (const auto& topic : result.model.topics) {
    ASSERT_EQ(topic.words.size(), 10u);
    const auto group = topic.words.front().word.substr(1, 1);
    const auto& vocab = fixture_.vocab[std::stoul(group)];
    for (const auto& w : topic.words) {
      EXPECT_NE(std::find(vocab.begin(), vocab.end(), w.word), vocab.end()) << w.word;
    }
    EXPECT_EQ(topic.size, 30u);
  }

  const auto manifest = nlohmann::json::parse(slurp(*config.out_manifest));
  EXPECT_EQ(manifest["k"], 3);
  EXPECT_EQ(manifest["subgraph_nodes"], 90);
  EXPECT_EQ(manifest["subgraph_edges"], 3805);
  EXPECT_EQ(manifest["config"]["algorithm"], "greedy-modularity");
  EXPECT_TRUE(manifest["timings_ms"].contains("detect"));

  std::ifstream alpha(*config.out_alpha);
  std::size_t lines = 0;
  for (std::string line; std::getline(alpha, line); ++lines) {
    const auto row = nlohmann::json::parse(line);
    double sum = 0.0;
    for (const auto& w : row["alpha"]) sum += w["weight"].get<double>();
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_EQ(lines, 90u);
}

TEST_F(PipelineTest, SameSeedSameBytes) {
  for (auto algorithm : {Algorithm::kGreedyModularity, Algorithm::kLouvain, Algorithm::kLpa,
                         Algorithm::kSlpa}) {
    auto config = planted_config();
    config.reduce = {ReduceMethod::kPca, 5};
    config.detector.algorithm = algorithm;
    config.detector.seed = 9;
    std::string first;
    for (int run = 0; run < 2; ++run) {
      config.out_topics = dir_ / ("topics" + std::to_string(run) + ".json");
      run_fit(config);
      if (run == 0) first = slurp(*config.out_topics);
      else EXPECT_EQ(slurp(*config.out_topics), first);
    }
  }
}

TEST_F(PipelineTest, IdMismatchListsFirstTenIds) {
  std::string corpus, emb;
  for (int i = 0; i < 15; ++i) {
    corpus += "{\"id\":\"c" + std::to_string(i) + "\",\"text\":\"one two three four five\"}\n";
    emb += "{\"id\":\"e" + std::to_string(i) + "\",\"embedding\":[1," + std::to_string(i) + "]}\n";
  }
  FitConfig config;
  config.corpus_path = write("c.jsonl", corpus);
  config.embeddings_path = write("e.jsonl", emb);
  try {
    run_fit(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInput);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("30 offending"), std::string::npos) << msg;
    EXPECT_NE(msg.find("c9"), std::string::npos);
    EXPECT_EQ(msg.find("c10"), std::string::npos);
  }
}

TEST_F(PipelineTest, DroppedDocumentsMayLackEmbeddings) {
  const std::string text = "alpha beta gamma delta epsilon";
  std::string corpus = "{\"id\":\"short\",\"text\":\"too short\"}\n";
  std::string emb;
  for (int i = 0; i < 6; ++i) {
    corpus += "{\"id\":\"d" + std::to_string(i) + "\",\"text\":\"" + text + "\"}\n";
    emb += "{\"id\":\"d" + std::to_string(i) + "\",\"embedding\":[1," + std::to_string(i % 2) + ",0.5]}\n";
  }
  FitConfig config;
  config.corpus_path = write("c.jsonl", corpus);
  config.embeddings_path = write("e.jsonl", emb);
  config.reduce = {ReduceMethod::kNone, 5};
  const auto result = run_fit(config);
  EXPECT_EQ(result.documents_loaded, 7u);
  EXPECT_EQ(result.documents_dropped, 1u);
}

TEST_F(PipelineTest, SingleSurvivingDocumentIsDegenerate) {
  FitConfig config;
  config.corpus_path = write("c.jsonl", "{\"id\":\"a\",\"text\":\"one two three four five\"}\n");
  config.embeddings_path = write("e.jsonl", "{\"id\":\"a\",\"embedding\":[1,2]}\n");
  config.reduce = {ReduceMethod::kNone, 5};
  EXPECT_EQ(kind_of([&] { run_fit(config); }), ErrorKind::kDegenerate);
}

TEST_F(PipelineTest, TopicsFileRoundTrip) {
  TopicModel model;
  model.topics.push_back({0, 4, {{"a", 0.75}, {"b", 0.25}}});
  model.topics.push_back({1, 2, {{"c", 1.0}}});
  model.trivial_ids = {"x"};
  std::stringstream buf;
  write_topics(buf, model);
  const auto file = read_topics(buf);
  ASSERT_EQ(file.topics.size(), 2u);
  EXPECT_EQ(file.topics[0].words[1].word, "b");
  EXPECT_EQ(file.topics[0].words[1].weight, 0.25);
  EXPECT_EQ(file.topics[1].size, 2u);
  EXPECT_EQ(file.trivial_ids, std::vector<std::string>{"x"});

  for (const char* bad : {"", "{", "{\"topics\":[]}", "{\"topics\":[{\"id\":0}]}",
                          "{\"topics\":[{\"id\":0,\"size\":1,\"words\":[]}]}"}) {
    std::istringstream in(bad);
    EXPECT_EQ(kind_of([&] { read_topics(in); }), ErrorKind::kInput) << bad;
  }
}

TEST_F(PipelineTest, SelectTopicsBySize) {
  std::vector<Topic> topics;
  for (std::size_t k = 0; k < 60; ++k) topics.push_back({k, k % 7, {{"w", 1.0}}});
  const auto top = select_topics(topics, 50);
  ASSERT_EQ(top.size(), 50u);
  EXPECT_EQ(top[0].size, 6u);
  EXPECT_EQ(top[0].index, 6u);
  EXPECT_EQ(top[1].index, 13u);
  for (std::size_t i = 1; i < top.size(); ++i) EXPECT_LE(top[i].size, top[i - 1].size);
  EXPECT_EQ(select_topics(topics, 100).size(), 60u);
}

TEST_F(PipelineTest, EvalIdenticalTopics) {
  EvalConfig config;
  config.topics_path = write("t.json",
                             "{\"topics\":[{\"id\":0,\"size\":2,\"words\":[{\"word\":\"aa\",\"weight\":0.5},"
                             "{\"word\":\"bb\",\"weight\":0.5}]},{\"id\":1,\"size\":1,\"words\":"
                             "[{\"word\":\"aa\",\"weight\":0.5},{\"word\":\"bb\",\"weight\":0.5}]}]}");
  config.corpus_path = write("c.jsonl", "{\"id\":\"d\",\"text\":\"aa bb cc dd ee\"}\n");
  config.out = dir_ / "report.json";
  const auto result = run_eval(config);
  EXPECT_EQ(*result.report.td, 0.5);
  const auto report = nlohmann::json::parse(slurp(*config.out));
  EXPECT_EQ(report["td"], 0.5);
  EXPECT_TRUE(report.contains("npmi"));
  EXPECT_TRUE(report.contains("cv"));
  EXPECT_FALSE(report.contains("qw2v"));
  EXPECT_EQ(report["per_topic"]["topic"], nlohmann::json::array({0, 1}));
}
