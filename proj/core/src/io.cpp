#include "srgraph/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json_util.hpp"
#include "srgraph/error.hpp"

namespace srgraph {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw StructuralError("csv line " + std::to_string(line) + " column " +
                          std::to_string(col + 1) + ": '" + text + "' is not a number");
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  return in;
}

// Tokenizer for instance files: skips blank lines and '#' comments.
class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) tokens_.push_back(tok);
    }
  }

  bool done() const { return pos_ == tokens_.size(); }

  std::string word(std::string_view what) {
    if (done()) throw StructuralError("instance file ended early, expected " + std::string(what));
    return tokens_[pos_++];
  }

  void keyword(std::string_view kw) {
    const std::string w = word(kw);
    if (w != kw) throw StructuralError("instance file: expected '" + std::string(kw) + "', got '" + w + "'");
  }

  long long integer(std::string_view what) {
    const std::string w = word(what);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw StructuralError("instance file: " + std::string(what) + " '" + w + "' is not an integer");
    }
    return v;
  }

  VertexId vertex(std::size_t n, std::string_view what) {
    const long long v = integer(what);
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      throw StructuralError("instance file: " + std::string(what) + " " + std::to_string(v) +
                            " out of range");
    }
    return static_cast<VertexId>(v);
  }

  double real(std::string_view what) {
    const std::string w = word(what);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size() || !std::isfinite(v)) {
      throw StructuralError("instance file: " + std::string(what) + " '" + w + "' is not a finite number");
    }
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

void write_terminals(std::ostream& out, const std::vector<VertexId>& terminals) {
  out << "terminals " << terminals.size();
  for (VertexId t : terminals) out << ' ' << t;
  out << '\n';
}

void write_degrees(std::ostream& out, const std::vector<int>& bounds) {
  std::size_t c = 0;
  for (int b : bounds) c += b != kUnbounded;
  out << "degrees " << c << '\n';
  for (std::size_t v = 0; v < bounds.size(); ++v) {
    if (bounds[v] != kUnbounded) out << v << ' ' << bounds[v] << '\n';
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Dataset read_csv(std::istream& in, std::string_view target) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.size() < 2) {
    throw StructuralError("csv needs a header with at least one input column and a target");
  }
  std::size_t ycol = header.size() - 1;
  if (!target.empty()) {
    auto it = std::find(header.begin(), header.end(), target);
    if (it == header.end()) throw StructuralError("csv has no column named '" + std::string(target) + "'");
    ycol = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != ycol) names.push_back(header[j]);
  }
  std::vector<double> x, y;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw StructuralError("csv line " + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const double v = parse_number(cells[j], lineno, j);
      (j == ycol ? y : x).push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw StructuralError("csv has no data rows");
  const std::size_t cols = names.size();
  return Dataset(rows, cols, std::move(x), std::move(y), std::move(names));
}

Dataset read_csv_file(const std::string& path, std::string_view target) {
  auto in = open_input(path);
  return read_csv(in, target);
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (j < data.column_names().size()) {
      out << data.column_names()[j];
    } else {
      out << 'x' << j + 1;
    }
    out << ',';
  }
  out << "y\n";
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) out << format_double(data.x(i, j)) << ',';
    out << format_double(data.y()[i]) << '\n';
  }
}

namespace detail {

nlohmann::json spec_to_json(const SymbolGraphSpec& spec) {
  nlohmann::json ops = nlohmann::json::array();
  for (const OperatorDef* op : spec.operators) ops.push_back(std::string(op->name));
  nlohmann::json constants = nlohmann::json::array();
  for (double c : spec.constants) {
    if (c == std::numbers::pi) {
      constants.push_back("pi");
    } else if (c == std::numbers::e) {
      constants.push_back("e");
    } else {
      constants.push_back(c);
    }
  }
  return {{"levels", spec.levels},
          {"copies", spec.copies},
          {"variable_copies", spec.variable_copies},
          {"variables", spec.num_variables},
          {"constants", constants},
          {"operators", ops}};
}

SymbolGraphSpec spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw StructuralError("spec must be a JSON object");
  static const std::vector<std::string> known{"levels",    "copies",    "variable_copies",
                                              "variables", "constants", "operators"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw StructuralError("spec has unknown field '" + it.key() + "'");
    }
  }
  auto integer = [&](const char* key, int fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) {
      throw StructuralError(std::string("spec field '") + key + "' must be an integer");
    }
    return v.get<int>();
  };
  SymbolGraphSpec spec = SymbolGraphSpec::with_defaults(integer("levels", 1), integer("variables", 1));
  spec.copies = integer("copies", spec.copies);
  spec.variable_copies = integer("variable_copies", spec.variable_copies);
  if (doc.contains("constants")) {
    const auto& cs = doc.at("constants");
    if (!cs.is_array()) throw StructuralError("spec field 'constants' must be an array");
    spec.constants.clear();
    for (const auto& c : cs) {
      if (c.is_number()) {
        spec.constants.push_back(c.get<double>());
      } else if (c.is_string() && c.get<std::string>() == "pi") {
        spec.constants.push_back(std::numbers::pi);
      } else if (c.is_string() && c.get<std::string>() == "e") {
        spec.constants.push_back(std::numbers::e);
      } else {
        throw StructuralError("spec field 'constants': entries must be numbers, \"pi\" or \"e\"");
      }
    }
  }
  if (doc.contains("operators")) {
    const auto& os = doc.at("operators");
    if (!os.is_array()) throw StructuralError("spec field 'operators' must be an array");
    spec.operators.clear();
    for (const auto& o : os) {
      if (!o.is_string()) throw StructuralError("spec field 'operators': entries must be strings");
      const OperatorDef* op = find_operator(o.get<std::string>());
      if (op == nullptr) {
        throw StructuralError("spec field 'operators': unknown operator '" + o.get<std::string>() + "'");
      }
      spec.operators.push_back(op);
    }
  }
  spec.check();
  return spec;
}

}  // namespace detail

SymbolGraphSpec parse_spec(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StructuralError(std::string("spec is not valid JSON: ") + e.what());
  }
  return detail::spec_from_json(doc);
}

SymbolGraphSpec read_spec_file(const std::string& path) {
  auto in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const SymbolGraphSpec& spec) {
  return detail::spec_to_json(spec).dump(2) + "\n";
}

GraphInstance read_instance(std::istream& in) {
  Tokens tok(in);
  const std::string kind = tok.word("graph kind");
  if (kind != "undirected" && kind != "directed") {
    throw StructuralError("instance file must start with 'undirected' or 'directed', got '" + kind + "'");
  }
  const long long n = tok.integer("vertex count");
  const long long m = tok.integer("edge count");
  if (n < 1 || m < 0) throw StructuralError("instance file: bad vertex or edge count");
  const auto nv = static_cast<std::size_t>(n);
  std::vector<WeightedEdge> edges;
  for (long long i = 0; i < m; ++i) {
    const VertexId u = tok.vertex(nv, "edge endpoint");
    const VertexId v = tok.vertex(nv, "edge endpoint");
    edges.push_back({u, v, tok.real("weight")});
  }
  tok.keyword("terminals");
  const long long k = tok.integer("terminal count");
  if (k < 0) throw StructuralError("instance file: bad terminal count");
  std::vector<VertexId> terminals;
  for (long long i = 0; i < k; ++i) terminals.push_back(tok.vertex(nv, "terminal"));
  VertexId root = 0;
  if (kind == "directed") {
    tok.keyword("root");
    root = tok.vertex(nv, "root");
  }
  std::vector<int> bounds;
  if (!tok.done()) {
    tok.keyword("degrees");
    const long long c = tok.integer("degree count");
    if (c > 0) bounds.assign(nv, kUnbounded);
    for (long long i = 0; i < c; ++i) {
      const VertexId v = tok.vertex(nv, "degree vertex");
      const long long b = tok.integer("degree bound");
      if (b < 0) throw StructuralError("instance file: degree bound must be nonnegative");
      bounds[v] = static_cast<int>(b);
    }
  }
  if (!tok.done()) throw StructuralError("instance file has trailing content");

  if (kind == "undirected") {
    UndirectedGraph g{nv, std::move(edges), std::move(terminals), std::move(bounds)};
    g.check();
    return g;
  }
  WeightedDigraph g;
  g.num_vertices = nv;
  for (const auto& e : edges) g.arcs.push_back({e.u, e.v, e.weight});
  g.terminals = std::move(terminals);
  g.root = root;
  g.degree_bound = std::move(bounds);
  g.check();
  return g;
}

GraphInstance read_instance_file(const std::string& path) {
  auto in = open_input(path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const UndirectedGraph& g) {
  out << "undirected " << g.num_vertices << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) out << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
  write_terminals(out, g.terminals);
  write_degrees(out, g.degree_bound);
}

void write_instance(std::ostream& out, const WeightedDigraph& g) {
  out << "directed " << g.num_vertices << ' ' << g.arcs.size() << '\n';
  for (const auto& a : g.arcs) out << a.from << ' ' << a.to << ' ' << format_double(a.weight) << '\n';
  write_terminals(out, g.terminals);
  out << "root " << g.root << '\n';
  write_degrees(out, g.degree_bound);
}

}  // namespace srgraph
