#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "padt/cli.hpp"

using namespace padt;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_with(RunConfig cfg, const std::string& input) {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int status = run(cfg, in, out, err);
  return {status, out.str(), err.str()};
}

RunConfig command(const std::string& name) {
  RunConfig cfg;
  cfg.command = name;
  return cfg;
}

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(PADT_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, EncodePresetStrings) {
  RunConfig cfg = command("encode");
  cfg.preset = "dna5";
  cfg.cutoff_k = 3;
  const Outcome r = run_with(cfg, ">s1\nAG\n>s2\nAGT\n");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["data"][0]["number"], "1 + 2*5");
  EXPECT_EQ(j["data"][1]["label"], "s2");
  EXPECT_EQ(j["distances"][0]["distance"], "5^-2");
  EXPECT_EQ(j["field"]["prime"], 5);
}

TEST(Cli, EncodeCustomAlphabetPicksDegree) {
  RunConfig cfg = command("encode");
  cfg.alphabet = "-,A,C,G,T";
  cfg.prime = 2;
  const Outcome r = run_with(cfg, "GATTACA\n");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["field"]["degree"], 3);
  EXPECT_NE(r.err.find("degenerate"), std::string::npos);
}

TEST(Cli, EncodeTreeFixture) {
  RunConfig cfg = command("encode");
  cfg.convention = "paper-binary";
  const Outcome r = run_with(cfg, fixture("eight_point_tree.json"));
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  const FieldDescriptor q2 = FieldDescriptor::make(2, 1);
  const std::vector<std::string> expected{"0", "2^6", "2^5", "2^2", "2^2 + 2^4", "2^2 + 2^3", "1 + 2", "1"};
  ASSERT_EQ(j["data"].size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const PAdicNumber got = parse_padic(j["data"][i]["number"].get<std::string>(), q2, kExactPrecision);
    EXPECT_TRUE(got.same_expansion(parse_padic(expected[i], q2, kExactPrecision))) << i;
  }
  EXPECT_TRUE(j["normality"]["normal"].get<bool>());
}

TEST(Cli, ClassifyFormats) {
  RunConfig cfg = command("classify");
  const Outcome js = run_with(cfg, fixture("eight_points.json"));
  ASSERT_EQ(js.status, 0) << js.err;
  const Json j = Json::parse(js.out);
  EXPECT_EQ(j["internal_edges"].size(), 6u);
  EXPECT_EQ(j["vertex_disc"]["n0"]["radius_exp"], 0);

  cfg.format = "newick";
  const Outcome nw = run_with(cfg, fixture("eight_points.json"));
  ASSERT_EQ(nw.status, 0);
  EXPECT_EQ(oracle::NewickReader(nw.out).canonical(),
            "(1:('x7','x8'),2:(1:('x6',1:('x4','x5')),3:('x3',1:('x1','x2'))))");

  cfg.format = "dot";
  EXPECT_NE(run_with(cfg, fixture("eight_points.json")).out.find("digraph"), std::string::npos);
}

TEST(Cli, ClassifyFasta) {
  RunConfig cfg = command("classify");
  cfg.preset = "dna5";
  cfg.format = "newick";
  const Outcome r = run_with(cfg, fixture("dna_sample.fasta"));
  ASSERT_EQ(r.status, 0) << r.err;
  // seq1..seq3 share "AG", seq1 and seq2 share "AGT"
  EXPECT_EQ(oracle::NewickReader(r.out).canonical(), "('seq4',2:('seq3',1:('seq1','seq2')))");
  EXPECT_NE(r.err.find("not normal"), std::string::npos);
}

TEST(Cli, InvariantsFromDataAndTrees) {
  const Outcome r = run_with(command("invariants"), fixture("eight_points.json"));
  ASSERT_EQ(r.status, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["volume"], 9);
  EXPECT_EQ(j["weights"], Json::parse("[8, 1]"));
  EXPECT_EQ(j["balance"]["re"], 7.0);

  const Outcome t = run_with(command("invariants"), "[" + fixture("eight_point_tree.json") + "]");
  ASSERT_EQ(t.status, 0) << t.err;
  j = Json::parse(t.out);
  EXPECT_EQ(j[0]["volume"], 9);
}

TEST(Cli, TimeseriesTate) {
  const Outcome r = run_with(command("timeseries"), fixture("tate_series.json"));
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["velocity"]["c"], "-3/2");
  EXPECT_EQ(j["velocity"]["period"], 2);
  EXPECT_EQ(j["flow"]["kind"], "translation_at_root");
  EXPECT_EQ(j["curve"]["kind"], "tate");
  EXPECT_EQ(j["curve"]["betti1"], 1);
  EXPECT_EQ(j["curve"]["orbits"], Json::parse("[1, 2, 1, 2]"));
}

TEST(Cli, TimeseriesGenus2) {
  RunConfig cfg = command("timeseries");
  cfg.u = "1";
  const Outcome r = run_with(cfg, fixture("genus2_series.json"));
  ASSERT_EQ(r.status, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["curve"]["kind"], "mumford2");
  EXPECT_EQ(j["curve"]["genus"], 2);
  EXPECT_EQ(j["curve"]["status"], "disjoint");
  EXPECT_EQ(j["curve"]["betti1"], 2);
  EXPECT_EQ(j["curve"]["betti1_traversal"], 2);
  EXPECT_EQ(j["curve"]["bridge_length"], "2");
}

TEST(Cli, ExportRoundTrip) {
  const Outcome r = run_with(command("classify"), fixture("eight_points.json"));
  RunConfig cfg = command("export");
  cfg.format = "newick";
  const Outcome nw = run_with(cfg, r.out);
  ASSERT_EQ(nw.status, 0) << nw.err;
  EXPECT_EQ(oracle::NewickReader(nw.out).canonical(),
            "(1:('x7','x8'),2:(1:('x6',1:('x4','x5')),3:('x3',1:('x1','x2'))))");
}

TEST(Cli, ErrorsAndExitCodes) {
  RunConfig enc = command("encode");
  enc.preset = "dna5";
  Outcome r = run_with(enc, "AGXT\n");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("error: encoding"), std::string::npos);
  EXPECT_NE(r.err.find("position 2"), std::string::npos);

  RunConfig fmt = command("invariants");
  fmt.format = "dot";
  EXPECT_EQ(run_with(fmt, fixture("eight_points.json")).status, 2);

  RunConfig prec = command("classify");
  prec.precision = 3;
  r = run_with(prec, R"([{"label": "a", "number": "1"}, {"label": "b", "number": "1 + 2^5"}])");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("'a'"), std::string::npos);

  RunConfig teich = command("classify");
  teich.reps = "teich";
  teich.normalize = true;
  r = run_with(teich, R"([{"label": "a", "number": "1"}, {"label": "b", "number": "2"}])");
  EXPECT_EQ(r.status, 4) << r.err;

  r = run_with(command("classify"), R"([{"label": "a", "number": "1 +"}])");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("record 0 ('a')"), std::string::npos);

  EXPECT_EQ(run_with(command("timeseries"), "{\"frames\": []}").status, 2);
  EXPECT_EQ(run_with(command("bogus"), "").status, 2);

  EXPECT_EQ(exit_code(ErrorKind::non_discrete), 5);
  EXPECT_EQ(exit_code(ErrorKind::no_translation), 4);
  EXPECT_EQ(exit_code(ErrorKind::configuration), 2);
}

TEST(Cli, NormalizeShiftsFirstDatum) {
  RunConfig cfg = command("classify");
  cfg.normalize = true;
  const Outcome r = run_with(cfg, R"([{"label": "a", "number": "1 + 2"}, {"label": "b", "number": "2"}])");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["coding"]["a"], "0");
}
