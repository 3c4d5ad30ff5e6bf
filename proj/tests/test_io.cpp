#include <gtest/gtest.h>

#include "binarity/named_groups.hpp"
#include "oracles.hpp"

using namespace binarity;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("binarity_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(GroupFile, ParsesCycleStringsAndImageLists) {
  auto j = io::json::parse(R"j({"name": "A4", "degree": 4, "generators": ["(0 1 2)", [1, 0, 3, 2]]})j");
  auto f = io::parse_group_json(j);
  EXPECT_EQ(f.name, "A4");
  EXPECT_EQ(io::to_group(f).order(), 12);
  EXPECT_FALSE(f.subgroup);
}

TEST(GroupFile, OneBased) {
  auto j = io::json::parse(R"j({"degree": 3, "generators": ["(1 2 3)"], "one_based": true})j");
  EXPECT_EQ(io::to_group(io::parse_group_json(j)).generators()[0], parse_permutation("(0 1 2)", 3));
  auto k = io::json::parse(R"j({"degree": 3, "generators": ["(1 2 3)"]})j");
  EXPECT_EQ(io::to_group(io::parse_group_json(k, true)).generators()[0], parse_permutation("(0 1 2)", 3));
}

TEST(GroupFile, RejectsMalformedInput) {
  EXPECT_THROW(io::parse_group_json(io::json::parse(R"j([1, 2])j")), InvalidInput);
  EXPECT_THROW(io::parse_group_json(io::json::parse(R"j({"generators": []})j")), InvalidInput);
  EXPECT_THROW(io::parse_group_json(io::json::parse(R"j({"degree": 3})j")), InvalidInput);
  EXPECT_THROW(io::parse_group_json(io::json::parse(R"j({"degree": 3, "generators": ["(0 3)"]})j")), InvalidInput);
  EXPECT_THROW(io::parse_group_json(io::json::parse(R"j({"degree": 3, "generators": [[0, 1]]})j")), InvalidInput);
  EXPECT_THROW(io::parse_group_json(io::json::parse(R"j({"degree": 3, "generators": [7]})j")), InvalidInput);
  EXPECT_THROW(io::read_group_file("/nonexistent/group.json"), InvalidInput);
}

TEST(GroupFile, RoundTripsWithSubgroup) {
  const auto dir = temp_dir("roundtrip");
  const PermGroup H(5, {parse_permutation("(0 1 2)", 5), parse_permutation("(0 1)(3 4)", 5)});
  io::write_json_file(dir / "g.json", io::group_to_json(groups::alternating(5), H));
  auto f = io::read_group_file(dir / "g.json");
  ASSERT_TRUE(f.subgroup);
  auto A = io::load_action(f);
  EXPECT_EQ(A.kind(), ActionSpace::Kind::Cosets);
  EXPECT_EQ(A.degree(), 10u);
  EXPECT_TRUE(same_group(io::to_group(f), groups::alternating(5)));
}

TEST(WitnessFile, RoundTripAndVerify) {
  auto t = test2_closure(groups::alternating(4));
  ASSERT_TRUE(t.certificate);
  const auto j = io::witness_to_json(*t.certificate);
  auto back = io::witness_from_json(io::json::parse(j.dump()));
  EXPECT_EQ(back.I, t.certificate->I);
  EXPECT_EQ(back.J, t.certificate->J);
  EXPECT_EQ(back.kind, WitnessKind::Strong);
  EXPECT_EQ(back.pair_transporters, t.certificate->pair_transporters);
  EXPECT_TRUE(verify_witness(back).ok);

  auto bad = j;
  bad["pair_transporters"].erase("0,1");
  EXPECT_FALSE(verify_witness(io::witness_from_json(bad)).ok);
  bad["kind"] = "weird";
  EXPECT_THROW(io::witness_from_json(bad), InvalidInput);
}

TEST(Pipeline, AlternatingFourIsNonBinary) {
  auto rep = analyze(groups::alternating(4), AnalyzeOptions{});
  EXPECT_EQ(rep.verdict, "NonBinary");
  ASSERT_EQ(rep.outcomes.size(), 4u);
  EXPECT_EQ(rep.outcomes[0].status, Status::NonBinary);
  EXPECT_EQ(rep.outcomes[1].status, Status::NonBinary);
  EXPECT_EQ(rep.outcomes[2].status, Status::NonBinary);
}

TEST(Pipeline, SymmetricFiveIsLikelyBinary) {
  AnalyzeOptions opt;
  opt.oracle = true;
  auto rep = analyze(groups::symmetric(5), opt);
  EXPECT_EQ(rep.verdict, "Inconclusive-likely-binary");
  ASSERT_TRUE(rep.oracle);
  EXPECT_EQ(rep.oracle->value, 2u);
}

TEST(Pipeline, ReportsAreDeterministic) {
  AnalyzeOptions opt;
  opt.test5_d = 2;
  for (const auto& G : {groups::pgl2(7), groups::m11(), groups::dihedral(5)}) {
    const auto a = analyze(G, opt), b = analyze(G, opt);
    EXPECT_EQ(render_text(a), render_text(b));
    EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
  }
}

TEST(Pipeline, TestFiveNeedsPrimitivity) {
  AnalyzeOptions opt;
  opt.tests = {};
  opt.test5_d = 2;
  auto rep = analyze(groups::dihedral(4), opt);
  ASSERT_TRUE(rep.test5);
  EXPECT_EQ(rep.test5->status, Status::Skipped);
}

TEST(Corpus, EmptyDirectory) {
  const auto dir = temp_dir("empty");
  EXPECT_TRUE(corpus_run(dir, AnalyzeOptions{}).empty());
  EXPECT_EQ(render_corpus_table({}), "file\tdegree\torder\tverdict\toracle\n");
}

TEST(Corpus, MalformedFileBecomesErrorRow) {
  const auto dir = temp_dir("malformed");
  io::write_json_file(dir / "a4.json", io::group_to_json(groups::alternating(4)));
  std::ofstream(dir / "broken.json") << "{ not json";
  auto rows = corpus_run(dir, AnalyzeOptions{}, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].file, "a4.json");
  ASSERT_TRUE(rows[0].report);
  EXPECT_EQ(rows[0].report->verdict, "NonBinary");
  EXPECT_EQ(rows[1].file, "broken.json");
  EXPECT_FALSE(rows[1].report);
  EXPECT_FALSE(rows[1].error.empty());
}

TEST(Corpus, ParallelRunMatchesSerialRun) {
  AnalyzeOptions opt;
  opt.tests = {1, 3};
  const auto dir = oracle::corpus_dir() / "deg6";
  EXPECT_EQ(render_corpus_table(corpus_run(dir, opt, 1)), render_corpus_table(corpus_run(dir, opt, 4)));
}
