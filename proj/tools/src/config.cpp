#include "maslovflow/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maslovflow/cli/expression.hpp"

namespace maslovflow::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

const json& require_key(const json& doc, const char* key) {
  if (!doc.contains(key)) config_error(std::string("missing key '") + key + "'");
  return doc.at(key);
}

Expression entry_expression(const json& cell, const std::string& where) {
  if (cell.is_string()) return parse_expression(cell.get<std::string>());
  if (cell.is_number()) return parse_expression(json(cell.get<double>()).dump());
  config_error(where + ": entries must be expression strings or numbers");
}

// Array of rows; every row has the same length.
ExpressionMatrix expression_matrix(const json& node, const std::string& where) {
  if (!node.is_array()) config_error(where + " must be an array of rows");
  const auto rows = static_cast<Index>(node.size());
  Index cols = -1;
  std::vector<Expression> entries;
  for (const json& row : node) {
    if (!row.is_array()) config_error(where + " must be an array of rows");
    if (cols < 0) cols = static_cast<Index>(row.size());
    if (static_cast<Index>(row.size()) != cols) config_error(where + " has rows of different lengths");
    for (const json& cell : row) entries.push_back(entry_expression(cell, where));
  }
  return ExpressionMatrix(rows, std::max<Index>(cols, 0), std::move(entries));
}

Complex sample_entry(const json& cell, const std::string& where) {
  if (cell.is_number()) return {cell.get<double>(), 0.0};
  if (cell.is_array() && cell.size() == 2 && cell[0].is_number() && cell[1].is_number()) {
    return {cell[0].get<double>(), cell[1].get<double>()};
  }
  config_error(where + ": sample entries must be numbers or [re, im]");
}

std::vector<double> grid(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) config_error(where + " must be a non-empty array");
  std::vector<double> out;
  for (const json& x : node) {
    if (!x.is_number()) config_error(where + " must contain numbers");
    out.push_back(x.get<double>());
  }
  if (!std::is_sorted(out.begin(), out.end()) || std::adjacent_find(out.begin(), out.end()) != out.end()) {
    config_error(where + " must be strictly increasing");
  }
  return out;
}

// Bilinear interpolation on a tensor grid, constant beyond the ends.
struct SampledCoefficient {
  std::vector<double> s, t;
  std::vector<CMatrix> values;  // values[a * t.size() + b]

  static std::pair<std::size_t, double> locate(const std::vector<double>& g, double x) {
    if (g.size() == 1 || x <= g.front()) return {0, 0.0};
    if (x >= g.back()) return {g.size() - 2, 1.0};
    const auto hi = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
    return {hi - 1, (x - g[hi - 1]) / (g[hi] - g[hi - 1])};
  }

  CMatrix operator()(double ss, double tt) const {
    const auto [a, wa] = locate(s, ss);
    const auto [b, wb] = locate(t, tt);
    const std::size_t nt = t.size();
    auto at = [&](std::size_t i, std::size_t j) -> const CMatrix& {
      return values[std::min(i, s.size() - 1) * nt + std::min(j, nt - 1)];
    };
    return (1 - wa) * (1 - wb) * at(a, b) + wa * (1 - wb) * at(a + 1, b) + (1 - wa) * wb * at(a, b + 1) +
           wa * wb * at(a + 1, b + 1);
  }
};

CMatrix sample_matrix(const json& node, Index rows, Index cols, const std::string& where) {
  if (!node.is_array() || static_cast<Index>(node.size()) != rows) {
    config_error(where + " must be a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
  CMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      config_error(where + " must be a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    for (Index j = 0; j < cols; ++j) out(i, j) = sample_entry(row[static_cast<std::size_t>(j)], where);
  }
  return out;
}

// (s, t) -> rows x cols matrix from an expression matrix or a samples object.
bvp::Coefficient coefficient(const json& doc, const char* key, Index rows, Index cols) {
  const std::string where = std::string("'") + key + "'";
  const json& node = require_key(doc, key);
  if (node.is_object()) {
    const json& smp = require_key(node, "samples");
    SampledCoefficient c;
    c.s = grid(require_key(smp, "s"), where + ".samples.s");
    c.t = grid(require_key(smp, "t"), where + ".samples.t");
    const json& values = require_key(smp, "values");
    if (!values.is_array() || values.size() != c.s.size()) config_error(where + ".samples.values must have one row per s");
    for (const json& row : values) {
      if (!row.is_array() || row.size() != c.t.size()) config_error(where + ".samples.values rows need one entry per t");
      for (const json& m : row) c.values.push_back(sample_matrix(m, rows, cols, where + ".samples.values"));
    }
    return c;
  }
  ExpressionMatrix m = expression_matrix(node, where);
  if (m.rows() != rows || m.cols() != cols) {
    config_error(where + " must be " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  return [m = std::move(m)](double s, double t) { return m.evaluate(s, t); };
}

template <typename T>
T read_number(const json& node, const char* key, T fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) config_error(std::string("'") + key + "' must be an integer");
  } else {
    if (!v.is_number()) config_error(std::string("'") + key + "' must be a number");
  }
  return v.get<T>();
}

void read_numerics(const json& doc, bvp::BvpOptions& opts) {
  if (!doc.contains("numerics")) return;
  const json& n = doc.at("numerics");
  if (!n.is_object()) config_error("'numerics' must be an object");
  opts.shooting.steps = read_number(n, "steps", opts.shooting.steps);
  opts.shooting.grid = read_number(n, "grid", opts.shooting.grid);
  opts.shooting.lambda_window = read_number(n, "lambda_window", opts.shooting.lambda_window);
  opts.flow.initial_segments = read_number(n, "initial_segments", opts.flow.initial_segments);
  opts.flow.max_depth = read_number(n, "max_depth", opts.flow.max_depth);
  opts.flow.delta_max = read_number(n, "delta_max", opts.flow.delta_max);
  if (opts.shooting.steps < 64) config_error("numerics.steps must be at least 64");
  if (opts.shooting.grid < 3) config_error("numerics.grid must be at least 3");
  if (!(opts.shooting.lambda_window > 0.0)) config_error("numerics.lambda_window must be positive");
  if (opts.flow.initial_segments < 1) config_error("numerics.initial_segments must be at least 1");
  if (opts.flow.max_depth < 0) config_error("numerics.max_depth must be non-negative");
}

void read_expected(const json& doc, harness::Expected& out) {
  if (!doc.contains("expected")) return;
  const json& e = doc.at("expected");
  if (!e.is_object()) config_error("'expected' must be an object");
  if (e.contains("sf")) out.sf = read_number<int>(e, "sf", 0);
  if (e.contains("mas")) out.mas = read_number<int>(e, "mas", 0);
  if (e.contains("provenance")) {
    if (!e.at("provenance").is_string()) config_error("expected.provenance must be a string");
    out.provenance = e.at("provenance").get<std::string>();
  }
  if ((out.sf || out.mas) && out.provenance.empty()) config_error("expected values need a provenance string");
}

bvp::BoundaryPath boundary_path(const json& doc, Index state_dim, Index m, bool second_order) {
  const json& b = require_key(doc, "boundary");
  if (!b.is_object()) config_error("'boundary' must be an object");
  if (b.contains("w_path") == b.contains("r_subspace")) {
    config_error("'boundary' needs exactly one of 'w_path' and 'r_subspace'");
  }
  if (b.contains("w_path")) {
    ExpressionMatrix frame = expression_matrix(b.at("w_path"), "'boundary.w_path'");
    if (frame.rows() != 2 * state_dim || frame.cols() != state_dim) {
      config_error("'boundary.w_path' must be a " + std::to_string(2 * state_dim) + "x" +
                   std::to_string(state_dim) + " frame");
    }
    return [frame = std::move(frame)](double s) { return symplectic::Subspace::span(frame.evaluate(s, 0.0)); };
  }
  if (!second_order) config_error("'r_subspace' applies to second_order families only");
  const json& r = b.at("r_subspace");
  symplectic::Subspace subspace = symplectic::Subspace::zero(2 * m);
  const bool empty = r.is_array() && std::all_of(r.begin(), r.end(), [](const json& row) {
    return row.is_array() && row.empty();
  });
  if (!empty) {
    ExpressionMatrix frame = expression_matrix(r, "'boundary.r_subspace'");
    if (frame.rows() != 2 * m) config_error("'boundary.r_subspace' must have " + std::to_string(2 * m) + " rows");
    subspace = symplectic::Subspace::span(frame.evaluate(0.0, 0.0));
  }
  const symplectic::Subspace w = bvp::w_of_r(subspace);
  return [w](double) { return w; };
}

}  // namespace

harness::Scenario parse_config(const std::string& json_text, const std::string& default_name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("config must be a JSON object");

  harness::Scenario sc;
  sc.name = default_name;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) config_error("'name' must be a string");
    sc.name = doc.at("name").get<std::string>();
  }
  if (doc.contains("description") && doc.at("description").is_string()) {
    sc.description = doc.at("description").get<std::string>();
  }
  const json& kind_node = require_key(doc, "kind");
  if (!kind_node.is_string()) config_error("'kind' must be a string");
  const std::string kind = kind_node.get<std::string>();
  read_numerics(doc, sc.options);
  read_expected(doc, sc.expected);

  if (kind == "pair_path") {
    sc.kind = harness::ScenarioKind::PairPathOnly;
    const ExpressionMatrix j = expression_matrix(require_key(doc, "J"), "'J'");
    const ExpressionMatrix lambda = expression_matrix(require_key(doc, "lambda"), "'lambda'");
    const ExpressionMatrix mu = expression_matrix(require_key(doc, "mu"), "'mu'");
    if (j.rows() != j.cols() || j.rows() == 0) config_error("'J' must be a non-empty square matrix");
    if (lambda.rows() != j.rows() || mu.rows() != j.rows()) config_error("'lambda' and 'mu' need one row per row of 'J'");
    sc.pair_path = maslov::PairPath{[j, lambda, mu](double s) {
                                      return maslov::PairSample{j.evaluate(s, 0.0),
                                                                symplectic::Subspace::span(lambda.evaluate(s, 0.0)),
                                                                symplectic::Subspace::span(mu.evaluate(s, 0.0))};
                                    },
                                    0.0, 1.0};
    return sc;
  }

  const int m = read_number<int>(doc, "m", 0);
  if (!doc.contains("m") || m < 1) config_error("'m' must be a positive integer");
  const double length = read_number<double>(doc, "T", 1.0);
  if (!(length > 0.0)) config_error("'T' must be positive");

  if (kind == "first_order") {
    sc.kind = harness::ScenarioKind::FirstOrder;
    bvp::FirstOrderFamily fam;
    fam.m = m;
    fam.T = length;
    fam.j = coefficient(doc, "j", m, m);
    fam.b = coefficient(doc, "b", m, m);
    if (doc.contains("jdot")) fam.jdot = coefficient(doc, "jdot", m, m);
    sc.family = fam;
    sc.boundary = boundary_path(doc, m, m, false);
  } else if (kind == "second_order") {
    sc.kind = harness::ScenarioKind::SecondOrder;
    bvp::SecondOrderFamily fam;
    fam.m = m;
    fam.T = length;
    fam.p = coefficient(doc, "p", m, m);
    fam.q = coefficient(doc, "q", m, m);
    fam.r = coefficient(doc, "r", m, m);
    sc.family = fam;
    sc.boundary = boundary_path(doc, 2 * m, m, true);
  } else {
    config_error("unknown kind '" + kind + "'");
  }
  return sc;
}

harness::Scenario load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.stem().string());
}

}  // namespace maslovflow::cli
