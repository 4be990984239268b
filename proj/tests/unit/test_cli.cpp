#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "g2t/pipeline.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("g2t_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(G2T_CLI_PATH) + " " + args + " >" + (dir_ / "stdout").string() +
                            " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string fit_args(const g2t::testing::PlantedFixture& f, const std::string& tag) {
    return "fit --corpus " + f.corpus.string() + " --embeddings " + f.embeddings.string() +
           " --out-topics " + path(tag + "topics.json") + " --out-alpha " + path(tag + "alpha.jsonl") +
           " --out-manifest " + path(tag + "manifest.json");
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

const char* kTwoTopics =
    "{\"topics\":[{\"id\":0,\"size\":3,\"words\":[{\"word\":\"g0w1\",\"weight\":0.5},"
    "{\"word\":\"g0w2\",\"weight\":0.5}]},{\"id\":1,\"size\":2,\"words\":[{\"word\":\"g0w1\","
    "\"weight\":0.5},{\"word\":\"g0w2\",\"weight\":0.5}]}]}";

}  // namespace

TEST_F(CliTest, PlantedFixtureGivesThreeTopics) {
  const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
  ASSERT_EQ(run(fit_args(f, "") + " --reduce none --dump-graph " + path("graph.tsv") +
                " --dump-communities " + path("communities.jsonl")),
            0)
      << slurp("stderr");
  const auto topics = nlohmann::json::parse(slurp("topics.json"));
  EXPECT_EQ(topics["topics"].size(), 3u);
  EXPECT_TRUE(topics["trivial_ids"].empty());
  EXPECT_EQ(nlohmann::json::parse(slurp("manifest.json"))["k"], 3);
  EXPECT_TRUE(fs::exists(dir_ / "graph.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "communities.jsonl"));
}

TEST_F(CliTest, SameSeedByteIdentical) {
  const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
  for (const char* algorithm : {"greedy-modularity", "louvain", "lpa", "slpa"}) {
    const std::string extra = std::string(" --algorithm ") + algorithm + " --seed 5";
    ASSERT_EQ(run(fit_args(f, "a") + extra), 0) << slurp("stderr");
    ASSERT_EQ(run(fit_args(f, "b") + extra), 0) << slurp("stderr");
    EXPECT_EQ(slurp("atopics.json"), slurp("btopics.json")) << algorithm;
    EXPECT_EQ(slurp("aalpha.jsonl"), slurp("balpha.jsonl")) << algorithm;
  }
}

TEST_F(CliTest, UsageErrors) {
  const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
  EXPECT_EQ(run(fit_args(f, "") + " --top-p 101"), 64);
  EXPECT_EQ(run(fit_args(f, "") + " --top-p 0"), 64);
  EXPECT_EQ(run(fit_args(f, "") + " --algorithm copra"), 64);
  EXPECT_EQ(run(fit_args(f, "") + " --dim 500"), 64);
  EXPECT_EQ(run("fit --corpus x"), 64);
  EXPECT_EQ(run("frobnicate"), 64);
  EXPECT_EQ(run(""), 64);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, InputErrors) {
  const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
  const auto other = write("other.jsonl", "{\"id\":\"zzz\",\"embedding\":[1,2]}\n");
  EXPECT_EQ(run("fit --corpus " + f.corpus.string() + " --embeddings " + other.string() +
                " --out-topics " + path("t") + " --out-alpha " + path("a") + " --out-manifest " + path("m")),
            2);
  EXPECT_NE(slurp("stderr").find("doc0"), std::string::npos);
  EXPECT_EQ(run("fit --corpus " + path("missing.jsonl") + " --embeddings " + other.string() +
                " --out-topics " + path("t") + " --out-alpha " + path("a") + " --out-manifest " + path("m")),
            2);

  const auto corrupt = write("corrupt.json", "{\"topics\": [");
  EXPECT_EQ(run("eval --topics " + corrupt.string() + " --corpus " + f.corpus.string() + " --out " +
                path("r.json")),
            2);
}

TEST_F(CliTest, DegenerateExit) {
  const auto corpus = write("c.jsonl", "{\"id\":\"a\",\"text\":\"one two three four five\"}\n"
                                       "{\"id\":\"b\",\"text\":\"short\"}\n");
  const auto emb = write("e.jsonl", "{\"id\":\"a\",\"embedding\":[1,2]}\n{\"id\":\"b\",\"embedding\":[2,1]}\n");
  EXPECT_EQ(run("fit --corpus " + corpus.string() + " --embeddings " + emb.string() + " --reduce none" +
                " --out-topics " + path("t") + " --out-alpha " + path("a") + " --out-manifest " + path("m")),
            3);
}

TEST_F(CliTest, EvalIdenticalTopicsAndNoVectors) {
  const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
  const auto topics = write("topics.json", kTwoTopics);
  ASSERT_EQ(run("eval --topics " + topics.string() + " --corpus " + f.corpus.string() + " --out " +
                path("report.json")),
            0)
      << slurp("stderr");
  const auto report = nlohmann::json::parse(slurp("report.json"));
  EXPECT_EQ(report["td"], 0.5);
  EXPECT_FALSE(report.contains("qw2v"));
  EXPECT_TRUE(report.contains("npmi"));
  EXPECT_TRUE(report.contains("cv"));

  const auto vectors = write("vectors.jsonl", "{\"id\":\"g0w1\",\"embedding\":[1,0]}\n"
                                              "{\"id\":\"g0w2\",\"embedding\":[2,1]}\n");
  ASSERT_EQ(run("eval --topics " + topics.string() + " --corpus " + f.corpus.string() +
                " --word-vectors " + vectors.string() + " --out " + path("report2.json")),
            0)
      << slurp("stderr");
  EXPECT_EQ(nlohmann::json::parse(slurp("report2.json"))["qw2v"], 2.0);
}

TEST_F(CliTest, EvalMatchesLibrary) {
  const auto f = g2t::testing::write_planted_fixture(dir_ / "planted");
  ASSERT_EQ(run(fit_args(f, "") + " --reduce none"), 0) << slurp("stderr");
  ASSERT_EQ(run("eval --topics " + path("topics.json") + " --corpus " + f.corpus.string() +
                " --metrics npmi --window 10 --out " + path("report.json")),
            0)
      << slurp("stderr");
  const auto report = nlohmann::json::parse(slurp("report.json"));
  EXPECT_FALSE(report.contains("td"));

  const auto file = g2t::load_topics(dir_ / "topics.json");
  const auto corpus = g2t::preprocess(g2t::load_corpus(f.corpus, g2t::CorpusFormat::kJsonl),
                                      g2t::PreprocessConfig{});
  std::vector<g2t::TopicWords> words;
  for (const auto& t : g2t::select_topics(file.topics, 50)) {
    auto& list = words.emplace_back();
    for (const auto& w : t.words) list.push_back(w.word);
  }
  const auto counts = g2t::window_counts(corpus, 10);
  EXPECT_NEAR(report["npmi"].get<double>(), g2t::topic_npmi(words, counts, g2t::MetricsConfig{}), 1e-12);
}
