#include <gtest/gtest.h>

#include "nafree/io.hpp"
#include "nafree/report.hpp"

using namespace nafree;
using nlohmann::json;

namespace {

const std::string kData = NAFREE_DATA_DIR;

io::Workspace bundled(const std::string& name) { return io::load_workspace(io::read_json_file(kData + "/" + name)); }

}  // namespace

TEST(Io, Rationals) {
  EXPECT_EQ(io::parse_rational(json("1/2")), Rational(1, 2));
  EXPECT_EQ(io::parse_rational(json(3)), Rational(3));
  EXPECT_EQ(io::parse_rational(json("-4/8")), Rational(-1, 2));
  EXPECT_THROW(io::parse_rational(json(0.5)), io::SchemaError);
  EXPECT_THROW(io::parse_rational(json("1/0")), io::SchemaError);
  EXPECT_THROW(io::parse_rational(json("0.5")), io::SchemaError);
}

TEST(Io, SpaceParsing) {
  auto j = json::parse(R"({"points": ["a", "b"], "dist": [["0", "1/2"], ["1/2", 0]], "basepoint": "b"})");
  auto s = io::parse_space(j);
  EXPECT_EQ(s.d(0, 1), Rational(1, 2));
  EXPECT_EQ(s.basepoint(), 1);
  EXPECT_EQ(io::parse_space(j, std::string("a")).basepoint(), 0);
  EXPECT_THROW(io::parse_space(j, std::string("z")), io::SchemaError);

  EXPECT_THROW(io::parse_space(json::parse(R"({"points": ["a"]})")), io::SchemaError);
  EXPECT_THROW(io::parse_space(json::parse(R"({"points": ["a", "b"], "dist": [["0"]]})")), io::SchemaError);
  EXPECT_THROW(io::parse_space(json::parse(R"({"points": ["0", "b"], "dist": [["0", "1"], ["1", "0"]]})")), InputError);
  EXPECT_THROW(io::parse_space(json::parse(R"({"points": ["a", "a"], "dist": [["0", "1"], ["1", "0"]]})")), InputError);
}

TEST(Io, WordsRoundTrip) {
  auto ws = bundled("two_clusters.json");
  const auto& names = ws.space.names();
  auto u = io::parse_boolean_word(json::parse(R"(["r", "p", "q", "q"])"), ws.space);
  EXPECT_EQ(u, BooleanWord::of({0, 2}));
  EXPECT_EQ(io::boolean_word_to_json(u, names), json::parse(R"(["p", "r"])"));
  EXPECT_THROW(io::parse_boolean_word(json::parse(R"(["0"])"), ws.space), io::SchemaError);
  EXPECT_THROW(io::parse_boolean_word(json::parse(R"(["z"])"), ws.space), io::SchemaError);

  auto a = io::parse_abelian_word(json::parse(R"({"p": 2, "q": -1})"), ws.space);
  EXPECT_EQ(a, (AbelianWord{{0, 2}, {1, -1}}));
  EXPECT_EQ(io::abelian_word_to_json(a, names).dump(), R"({"p":2,"q":-1})");
  EXPECT_TRUE(io::parse_abelian_word(json::object(), ws.space).is_zero());

  auto f = io::parse_free_word(json::parse(R"(["p", "q'", "q", "r"])"), names);
  EXPECT_EQ(io::free_word_to_json(f, names), json::parse(R"(["p", "r"])"));
  EXPECT_THROW(io::parse_free_word(json::parse(R"(["t'"])"), names), io::SchemaError);
}

TEST(Io, Partitions) {
  auto ws = bundled("two_clusters.json");
  auto p = io::parse_partition(json::parse(R"([["s", "r"], ["q", "p"]])"), ws.space);
  EXPECT_EQ(p, ws.partitions.at("clusters"));
  EXPECT_EQ(io::partition_to_json(p, ws.space.names()), json::parse(R"({"blocks": [["p", "q"], ["r", "s"]]})"));
  try {
    io::parse_partition(json::parse(R"([["p", "q"], ["q", "r", "s"]])"), ws.space);
    FAIL() << "overlap accepted";
  } catch (const PartitionError& e) {
    EXPECT_EQ(e.point(), 1);
  }
  EXPECT_THROW(io::parse_partition(json::parse(R"([["p", "q"]])"), ws.space), PartitionError);
}

TEST(Io, BundledWorkspaces) {
  auto two = bundled("two_clusters.json");
  EXPECT_EQ(two.chains.size(), 2u);
  EXPECT_EQ(two.actions.size(), 2u);
  EXPECT_FALSE(two.alphabet.has_value());
  auto five = bundled("five_points.json");
  ASSERT_TRUE(five.alphabet.has_value());
  EXPECT_EQ(five.alphabet_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(five.chains.at("coarse_to_fine").size(), 4u);
  EXPECT_THROW(bundled("broken_metric.json"), InputError);
  EXPECT_THROW(bundled("overlapping_partition.json"), PartitionError);
  EXPECT_THROW(io::read_json_file(kData + "/missing.json"), io::SchemaError);
  EXPECT_THROW(io::parse_json_text("[1,"), io::SchemaError);
}

TEST(Io, CertificateJson) {
  auto ws = bundled("two_clusters.json");
  auto aug = extend_with_zero(ws.space);
  auto c = graev_norm_fast(BooleanWord::of({0, 2}), aug);
  EXPECT_EQ(io::certificate_to_json(c, aug).dump(), R"({"basepoint":"p","value":"2","witness":[["p","r"]]})");
  auto odd = graev_norm_fast(BooleanWord::of({2}), aug);
  EXPECT_EQ(io::certificate_to_json(odd, aug)["witness"], json::parse(R"([["r", "0"]])"));
}

TEST(Report, BundledWorkspacePassesAndIsDeterministic) {
  for (const char* file : {"two_clusters.json", "five_points.json"}) {
    auto ws = bundled(file);
    auto first = report::to_json(report::run(ws)).dump(2);
    auto second = report::to_json(report::run(bundled(file))).dump(2);
    EXPECT_EQ(first, second);
    auto suite = report::run(ws);
    for (const auto& row : suite.rows) {
      EXPECT_TRUE(row.passed()) << file << " " << row.name << ": " << row.first_failure;
      EXPECT_GT(row.checked, 0u) << row.name;
    }
  }
}

TEST(Report, OnlySelectsOneRow) {
  auto ws = bundled("two_clusters.json");
  report::Options opt;
  opt.only = "isometric_embedding";
  auto suite = report::run(ws, opt);
  ASSERT_EQ(suite.rows.size(), 1u);
  EXPECT_EQ(suite.rows[0].name, "isometric_embedding");
  opt.only = "nonsense";
  EXPECT_THROW(report::run(ws, opt), InputError);
}
