#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "srgraph/expr.hpp"
#include "srgraph/reductions.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph {

/// CSV with a header row. The target column is `target` when given, otherwise
/// the last column; every other column becomes an input in file order.
Dataset read_csv(std::istream& in, std::string_view target = {});
Dataset read_csv_file(const std::string& path, std::string_view target = {});
void write_csv(std::ostream& out, const Dataset& data);

/// JSON spec config with keys levels, copies, variable_copies, variables,
/// constants (numbers, "pi" or "e") and operators (names or symbols). Missing
/// keys take the defaults of SymbolGraphSpec::with_defaults.
SymbolGraphSpec parse_spec(std::string_view json_text);
SymbolGraphSpec read_spec_file(const std::string& path);
std::string spec_to_json(const SymbolGraphSpec& spec);

/// Line-oriented instance format:
///
///   undirected <n> <m>        or   directed <n> <m>
///   <u> <v> <w>               (m lines)
///   terminals <k> <t1> ... <tk>
///   root <r>                  (directed only)
///   degrees <c>               then c lines "<vertex> <bound>"
///
/// Lines starting with '#' are comments. Writing uses the shortest round-trip
/// form of each weight, so read-then-write is byte-stable.
using GraphInstance = std::variant<UndirectedGraph, WeightedDigraph>;

GraphInstance read_instance(std::istream& in);
GraphInstance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const UndirectedGraph& g);
void write_instance(std::ostream& out, const WeightedDigraph& g);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace srgraph
