#include <gtest/gtest.h>

#include <sstream>

#include "srgraph/error.hpp"
#include "srgraph/io.hpp"

namespace srgraph {
namespace {

TEST(Csv, TargetIsLastColumnByDefault) {
  std::istringstream in("a,b,y\n1,2,3\n4,5,6\n");
  const Dataset d = read_csv(in);
  EXPECT_EQ(d.rows(), 2u);
  EXPECT_EQ(d.cols(), 2u);
  EXPECT_EQ(d.x(1, 0), 4.0);
  EXPECT_EQ(d.y()[1], 6.0);
  EXPECT_EQ(d.column_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, NamedTarget) {
  std::istringstream in("y,a\n3,1\n");
  const Dataset d = read_csv(in, "y");
  EXPECT_EQ(d.y()[0], 3.0);
  EXPECT_EQ(d.x(0, 0), 1.0);
}

TEST(Csv, Errors) {
  std::istringstream header_only("a,y\n");
  EXPECT_THROW(read_csv(header_only), StructuralError);
  std::istringstream ragged("a,y\n1\n");
  EXPECT_THROW(read_csv(ragged), StructuralError);
  std::istringstream junk("a,y\n1,zz\n");
  EXPECT_THROW(read_csv(junk), StructuralError);
  std::istringstream no_target("a,y\n1,2\n");
  EXPECT_THROW(read_csv(no_target, "q"), StructuralError);
  EXPECT_THROW(read_csv_file("/nonexistent/file.csv"), StructuralError);
}

TEST(Csv, WriteReadRoundTrip) {
  const Dataset d(2, 1, {0.1, 1e-300}, {2.5, -3.0}, {"x1"});
  std::ostringstream out;
  write_csv(out, d);
  std::istringstream in(out.str());
  const Dataset back = read_csv(in);
  EXPECT_EQ(back.x(0, 0), 0.1);
  EXPECT_EQ(back.x(1, 0), 1e-300);
  EXPECT_EQ(back.y(), d.y());
}

TEST(SpecConfig, DefaultsAndNamedConstants) {
  const SymbolGraphSpec s = parse_spec(R"({"levels": 2, "variables": 2})");
  EXPECT_EQ(s.levels, 2);
  EXPECT_EQ(s.operators.size(), 11u);
  const SymbolGraphSpec t = parse_spec(R"({"levels": 1, "constants": ["pi", 2], "operators": ["+", "sin"]})");
  ASSERT_EQ(t.constants.size(), 2u);
  EXPECT_DOUBLE_EQ(t.constants[0], 3.141592653589793);
  EXPECT_EQ(t.operators[0], find_operator("add"));
  EXPECT_EQ(parse_spec(spec_to_json(t)).constants, t.constants);
}

TEST(SpecConfig, Rejects) {
  EXPECT_THROW(parse_spec(R"({"levels": 1, "colour": 3})"), StructuralError);
  EXPECT_THROW(parse_spec(R"({"levels": 1, "operators": ["tan"]})"), StructuralError);
  EXPECT_THROW(parse_spec(R"({"levels": 0})"), StructuralError);
  EXPECT_THROW(parse_spec("{"), StructuralError);
}

TEST(Instance, UndirectedRoundTrip) {
  const std::string text = "undirected 3 2\n0 1 2.5\n1 2 3\nterminals 2 0 2\ndegrees 1\n1 2\n";
  std::istringstream in(text);
  const auto inst = read_instance(in);
  ASSERT_TRUE(std::holds_alternative<UndirectedGraph>(inst));
  const auto& g = std::get<UndirectedGraph>(inst);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.bound(1), 2);
  EXPECT_EQ(g.bound(0), kUnbounded);
  std::ostringstream out;
  write_instance(out, g);
  std::istringstream again(out.str());
  std::ostringstream twice;
  write_instance(twice, std::get<UndirectedGraph>(read_instance(again)));
  EXPECT_EQ(out.str(), twice.str());
}

TEST(Instance, DirectedWithComments) {
  std::istringstream in("# comment\ndirected 2 1\n0 1 0.1\nterminals 2 0 1\nroot 0\ndegrees 0\n");
  const auto inst = read_instance(in);
  ASSERT_TRUE(std::holds_alternative<WeightedDigraph>(inst));
  EXPECT_EQ(std::get<WeightedDigraph>(inst).arcs[0].weight, 0.1);
}

TEST(Instance, Errors) {
  std::istringstream bad_kind("sideways 2 1\n");
  EXPECT_THROW(read_instance(bad_kind), StructuralError);
  std::istringstream missing_edges("undirected 2 2\n0 1 1\nterminals 1 0\n");
  EXPECT_THROW(read_instance(missing_edges), StructuralError);
  std::istringstream out_of_range("undirected 2 1\n0 5 1\nterminals 1 0\ndegrees 0\n");
  EXPECT_THROW(read_instance(out_of_range), StructuralError);
}

TEST(FormatDouble, Shortest) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(3.0), "3");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace srgraph
