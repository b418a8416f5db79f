#include "cdeg/scenario.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace cdeg {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Read-only view of a document node that knows its path for diagnostics.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("scenario at " + (path_.empty() ? std::string("/") : path_) + ": " + msg);
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!allowed.count(k)) fail("unknown key '" + k + "'");
    }
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) fail(std::string("missing key '") + key + "'");
    return Node(j_.at(key), path_ + "/" + key);
  }

  Node item(std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number(bool allow_inf = false) const {
    if (j_.is_number()) {
      const double v = j_.get<double>();
      if (!std::isfinite(v)) fail("expected a finite number");
      return v;
    }
    if (allow_inf && j_.is_string()) {
      const auto s = j_.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
    }
    fail(allow_inf ? "expected a number or \"inf\"/\"-inf\"" : "expected a number");
  }

  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }

  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  std::vector<double> numbers(bool allow_inf = false) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(item(i).number(allow_inf));
    return out;
  }

  Vector vector(bool allow_inf = false) const {
    const auto v = numbers(allow_inf);
    if (v.empty()) fail("expected a non-empty array");
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  Matrix matrix() const {
    const std::size_t rows = size();
    if (rows == 0) fail("expected a non-empty array of rows");
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
      const Vector row = item(r).vector();
      if (r == 0) m.resize(static_cast<Eigen::Index>(rows), row.size());
      if (row.size() != m.cols()) item(r).fail("rows must have equal length");
      m.row(static_cast<Eigen::Index>(r)) = row;
    }
    return m;
  }

 private:
  const json& j_;
  std::string path_;
};

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_json(v[i]));
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r).transpose()));
  return a;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// ------------------------------------------------------------------ sections

json canon_operator(const Node& n) {
  n.only({"kind", "matrix", "m", "values", "dim", "growth"});
  const std::string kind = n.at("kind").str();
  json out{{"kind", kind}};
  if (kind == "matrix") {
    n.only({"kind", "matrix", "growth"});
    const Matrix a = n.at("matrix").matrix();
    if (a.rows() != a.cols()) n.at("matrix").fail("generator must be square");
    out["matrix"] = matrix_json(a);
    if (!n.has("growth")) n.fail("a matrix generator needs growth {M, omega}");
  } else if (kind == "dirichlet_laplacian_1d") {
    n.only({"kind", "m", "growth"});
    const int m = n.at("m").integer();
    if (m < 1) n.at("m").fail("grid size must be at least 1");
    out["m"] = m;
  } else if (kind == "diag") {
    n.only({"kind", "values", "growth"});
    out["values"] = vector_json(n.at("values").vector());
  } else if (kind == "zero") {
    n.only({"kind", "dim", "growth"});
    const int d = n.at("dim").integer();
    if (d < 1) n.at("dim").fail("dimension must be at least 1");
    out["dim"] = d;
  } else {
    n.at("kind").fail("unknown operator kind '" + kind + "' (matrix, dirichlet_laplacian_1d, diag, zero)");
  }
  if (n.has("growth")) {
    const Node g = n.at("growth");
    g.only({"M", "omega"});
    out["growth"] = {{"M", g.at("M").number()}, {"omega", g.at("omega").number()}};
  }
  return out;
}

LinearOperator build_operator(const json& c) {
  const std::string kind = c.at("kind");
  std::optional<LinearOperator> op;
  if (kind == "matrix") {
    return LinearOperator(Node(c.at("matrix"), "/operator/matrix").matrix(), c.at("growth").at("M"),
                          c.at("growth").at("omega"));
  }
  if (kind == "dirichlet_laplacian_1d") op = dirichlet_laplacian_1d(c.at("m"));
  if (kind == "diag") op = diag_operator(Node(c.at("values"), "/operator/values").vector());
  if (kind == "zero") op = zero_operator(c.at("dim"));
  if (c.contains("growth")) return LinearOperator(op->matrix(), c.at("growth").at("M"), c.at("growth").at("omega"));
  return *op;
}

json canon_set(const Node& n) {
  const std::string kind = n.at("kind").str();
  if (kind == "whole_space") {
    n.only({"kind", "dim"});
    const int d = n.at("dim").integer();
    if (d < 1) n.at("dim").fail("dimension must be at least 1");
    return {{"kind", kind}, {"dim", d}};
  }
  if (kind == "box") {
    n.only({"kind", "lo", "hi"});
    const Vector lo = n.at("lo").vector(true);
    const Vector hi = n.at("hi").vector(true);
    if (lo.size() != hi.size()) n.fail("lo and hi lengths differ");
    return {{"kind", kind}, {"lo", vector_json(lo)}, {"hi", vector_json(hi)}};
  }
  if (kind == "halfspaces") {
    n.only({"kind", "a", "b"});
    const Matrix a = n.at("a").matrix();
    const Vector b = n.at("b").vector();
    if (a.rows() != b.size()) n.fail("a has " + std::to_string(a.rows()) + " rows but b has " + std::to_string(b.size()));
    return {{"kind", kind}, {"a", matrix_json(a)}, {"b", vector_json(b)}};
  }
  if (kind == "ball") {
    n.only({"kind", "center", "radius"});
    return {{"kind", kind}, {"center", vector_json(n.at("center").vector())}, {"radius", n.at("radius").number()}};
  }
  if (kind == "product") {
    n.only({"kind", "factors"});
    const Node f = n.at("factors");
    json factors = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) factors.push_back(canon_set(f.item(i)));
    if (factors.empty()) f.fail("a product needs at least one factor");
    return {{"kind", kind}, {"factors", factors}};
  }
  n.at("kind").fail("unknown set kind '" + kind + "' (whole_space, box, halfspaces, ball, product)");
}

ConvexSet build_set(const json& c) {
  const std::string kind = c.at("kind");
  if (kind == "whole_space") return ConvexSet::whole_space(c.at("dim"));
  if (kind == "box") return ConvexSet::box(Node(c.at("lo"), "/set/lo").vector(true), Node(c.at("hi"), "/set/hi").vector(true));
  if (kind == "halfspaces") return ConvexSet::halfspaces(Node(c.at("a"), "/set/a").matrix(), Node(c.at("b"), "/set/b").vector());
  if (kind == "ball") return ConvexSet::ball(Node(c.at("center"), "/set/center").vector(), c.at("radius"));
  std::vector<ConvexSet> factors;
  for (const auto& f : c.at("factors")) factors.push_back(build_set(f));
  return ConvexSet::product(std::move(factors));
}

json canon_map(const Node& n) {
  const std::string preset = n.at("preset").str();
  if (preset == "zero") {
    n.only({"preset", "dim"});
    return {{"preset", preset}, {"dim", n.at("dim").integer()}};
  }
  if (preset == "linear") {
    n.only({"preset", "b", "c"});
    return {{"preset", preset}, {"b", matrix_json(n.at("b").matrix())}, {"c", vector_json(n.at("c").vector())}};
  }
  if (preset == "interval") {
    n.only({"preset", "dim", "lo", "hi"});
    return {{"preset", preset}, {"dim", n.at("dim").integer()}, {"lo", n.at("lo").number()}, {"hi", n.at("hi").number()}};
  }
  if (preset == "constant_set") {
    n.only({"preset", "points", "radius"});
    return {{"preset", preset}, {"points", matrix_json(n.at("points").matrix())},
            {"radius", n.has("radius") ? n.at("radius").number() : 0.0}};
  }
  if (preset == "logistic_interval") {
    n.only({"preset", "grid_dim", "rate"});
    return {{"preset", preset}, {"grid_dim", n.at("grid_dim").integer()}, {"rate", n.at("rate").number()}};
  }
  if (preset == "regularized_sign") {
    n.only({"preset", "center"});
    return {{"preset", preset}, {"center", n.has("center") ? n.at("center").number() : 0.0}};
  }
  if (preset == "polynomial") {
    n.only({"preset", "dim", "coefficients"});
    return {{"preset", preset}, {"dim", n.at("dim").integer()}, {"coefficients", n.at("coefficients").numbers()}};
  }
  n.at("preset").fail("unknown map preset '" + preset +
                      "' (zero, linear, interval, constant_set, logistic_interval, regularized_sign, polynomial)");
}

SetValuedMap build_map(const json& c) {
  const std::string preset = c.at("preset");
  if (preset == "zero") return presets::zero(c.at("dim").get<int>());
  if (preset == "linear") return presets::linear(Node(c.at("b"), "/map/b").matrix(), Node(c.at("c"), "/map/c").vector());
  if (preset == "interval") return presets::interval(c.at("dim").get<int>(), c.at("lo"), c.at("hi"));
  if (preset == "constant_set") {
    const Matrix p = Node(c.at("points"), "/map/points").matrix();
    std::vector<Vector> points;
    for (Eigen::Index r = 0; r < p.rows(); ++r) points.push_back(p.row(r).transpose());
    return presets::constant_set(points, c.at("radius"));
  }
  if (preset == "logistic_interval") return presets::logistic_interval(c.at("grid_dim"), c.at("rate"));
  if (preset == "regularized_sign") return presets::regularized_sign(c.at("center"));
  return presets::polynomial(c.at("dim").get<int>(), c.at("coefficients").get<std::vector<double>>());
}

json canon_region(const Node& n) {
  const std::string shape = n.at("shape").str();
  json out{{"shape", shape}, {"mesh_level", n.has("mesh_level") ? n.at("mesh_level").integer() : 0}};
  if (out["mesh_level"].get<int>() < 0) n.at("mesh_level").fail("mesh_level must be non-negative");
  if (shape == "ball") {
    n.only({"shape", "center", "radius", "mesh_level"});
    out["center"] = vector_json(n.at("center").vector());
    out["radius"] = n.at("radius").number();
  } else if (shape == "box") {
    n.only({"shape", "lo", "hi", "mesh_level"});
    out["lo"] = vector_json(n.at("lo").vector());
    out["hi"] = vector_json(n.at("hi").vector());
  } else {
    n.at("shape").fail("unknown region shape '" + shape + "' (ball, box)");
  }
  return out;
}

json canon_sweeps(const Node& n) {
  n.only({"t", "h", "alpha", "integration_h"});
  json out{{"t", n.at("t").numbers()}, {"h", n.at("h").numbers()}, {"alpha", n.at("alpha").numbers()},
           {"integration_h", n.has("integration_h") ? n.at("integration_h").number() : 1e-3}};
  Sweeps s{out["t"], out["h"], out["alpha"], out["integration_h"]};
  try {
    s.validate();
  } catch (const InvalidInput& e) {
    n.fail(e.what());
  }
  return out;
}

}  // namespace

json parse_scenario_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": malformed scenario: " << e.what();
    throw InvalidInput(os.str());
  }
}

json canonicalize(const json& doc) {
  const Node n(doc, "");
  n.only({"name", "description", "operator", "set", "map", "region", "sweeps", "seeds", "scheme", "initial_state",
          "t_end", "exclusion", "expected_degree", "degree"});
  json out;
  out["name"] = n.at("name").str();
  out["description"] = n.has("description") ? n.at("description").str() : "";
  out["operator"] = canon_operator(n.at("operator"));
  out["set"] = canon_set(n.at("set"));
  out["map"] = canon_map(n.at("map"));
  if (n.has("region")) out["region"] = canon_region(n.at("region"));
  out["sweeps"] = canon_sweeps(n.at("sweeps"));
  json seeds = json::array();
  if (n.has("seeds")) {
    const Node s = n.at("seeds");
    for (std::size_t i = 0; i < s.size(); ++i) seeds.push_back(s.item(i).unsigned_integer());
  } else {
    seeds.push_back(0);
  }
  if (seeds.empty()) n.at("seeds").fail("at least one seed is required");
  out["seeds"] = seeds;
  out["scheme"] = n.has("scheme") ? n.at("scheme").str() : "projected_resolvent";
  try {
    parse_scheme(out["scheme"]);
  } catch (const InvalidInput& e) {
    n.at("scheme").fail(e.what());
  }
  if (n.has("initial_state")) out["initial_state"] = vector_json(n.at("initial_state").vector());
  out["t_end"] = n.has("t_end") ? n.at("t_end").number() : 1.0;
  if (!(out["t_end"].get<double>() > 0.0)) n.at("t_end").fail("t_end must be positive");
  if (n.has("exclusion")) {
    const Node e = n.at("exclusion");
    e.only({"T", "z_samples", "t_samples"});
    const double tmax = out["sweeps"]["t"].front().get<double>();
    json ex;
    ex["T"] = e.has("T") ? e.at("T").number() : 2.0 * tmax;
    ex["z_samples"] = e.has("z_samples") ? e.at("z_samples").numbers() : std::vector<double>{0.0, 0.5, 1.0};
    ex["t_samples"] = e.has("t_samples") ? e.at("t_samples").numbers() : out["sweeps"]["t"].get<std::vector<double>>();
    for (double t : ex["t_samples"]) {
      if (!(t > 0.0) || t > ex["T"].get<double>()) e.fail("t_samples must lie in (0, T]");
    }
    for (double z : ex["z_samples"]) {
      if (z < 0.0 || z > 1.0) e.fail("z_samples must lie in [0, 1]");
    }
    out["exclusion"] = ex;
  }
  if (n.has("expected_degree")) {
    const Node e = n.at("expected_degree");
    e.only({"value", "note"});
    out["expected_degree"] = {{"value", e.at("value").integer()}, {"note", e.has("note") ? e.at("note").str() : ""}};
  }
  {
    const IndexOptions d;
    json deg{{"tol", d.degree.tol}, {"base_level", d.degree.base_level}, {"max_level", d.degree.max_level},
             {"margin_factor", d.margin_factor}};
    if (n.has("degree")) {
      const Node g = n.at("degree");
      g.only({"tol", "base_level", "max_level", "margin_factor"});
      if (g.has("tol")) deg["tol"] = g.at("tol").number();
      if (g.has("base_level")) deg["base_level"] = g.at("base_level").integer();
      if (g.has("max_level")) deg["max_level"] = g.at("max_level").integer();
      if (g.has("margin_factor")) deg["margin_factor"] = g.at("margin_factor").number();
      if (deg["base_level"].get<int>() < 0 || deg["max_level"].get<int>() <= deg["base_level"].get<int>()) {
        g.fail("need 0 <= base_level < max_level");
      }
      if (!(deg["margin_factor"].get<double>() > 0.0)) g.fail("margin_factor must be positive");
    }
    out["degree"] = deg;
  }
  return out;
}

Scenario build_scenario(const json& doc) {
  const json c = canonicalize(doc);
  const auto& sw = c.at("sweeps");
  Scenario s{c.at("name"),
             build_operator(c.at("operator")),
             build_set(c.at("set")),
             build_map(c.at("map")),
             std::nullopt,
             Sweeps{sw.at("t"), sw.at("h"), sw.at("alpha"), sw.at("integration_h")},
             c.at("seeds").get<std::vector<std::uint64_t>>(),
             parse_scheme(c.at("scheme")),
             std::nullopt,
             c.at("t_end"),
             std::nullopt,
             {},
             {}};
  const auto n = s.op.dim();
  if (s.k.dim() != n) throw InvalidInput("scenario at /set: dimension " + std::to_string(s.k.dim()) + " differs from the operator dimension " + std::to_string(n));
  if (s.f.dim() != n) throw InvalidInput("scenario at /map: dimension " + std::to_string(s.f.dim()) + " differs from the operator dimension " + std::to_string(n));
  if (c.contains("region")) {
    const auto& r = c.at("region");
    if (r.at("shape") == "ball") {
      const Vector center = Node(r.at("center"), "/region/center").vector();
      if (center.size() != n) throw InvalidInput("scenario at /region/center: wrong dimension");
      s.region = OpenRegion::ball(s.k, center, r.at("radius"), r.at("mesh_level"));
    } else {
      const Vector lo = Node(r.at("lo"), "/region/lo").vector();
      const Vector hi = Node(r.at("hi"), "/region/hi").vector();
      if (lo.size() != n || hi.size() != n) throw InvalidInput("scenario at /region: wrong dimension");
      s.region = OpenRegion::box(s.k, lo, hi, r.at("mesh_level"));
    }
  }
  if (c.contains("initial_state")) {
    s.initial_state = Node(c.at("initial_state"), "/initial_state").vector();
    if (s.initial_state->size() != n) throw InvalidInput("scenario at /initial_state: wrong dimension");
  }
  if (c.contains("expected_degree")) {
    s.expected_degree = c.at("expected_degree").at("value").get<int>();
    s.expected_note = c.at("expected_degree").at("note");
  }
  const auto& d = c.at("degree");
  s.index.degree.tol = d.at("tol");
  s.index.degree.base_level = d.at("base_level");
  s.index.degree.max_level = d.at("max_level");
  s.index.margin_factor = d.at("margin_factor");
  return s;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw InvalidInput("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const bool last = i + 1 == path.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(path[i]);
      } catch (const std::exception&) {
        throw InvalidInput("override '" + key + "': '" + path[i] + "' is not an array index");
      }
      if (idx >= node->size()) throw InvalidInput("override '" + key + "': index out of range");
      node = &(*node)[idx];
    } else if (node->is_object()) {
      if (!node->contains(path[i]) && !last) throw InvalidInput("override '" + key + "': no section '" + path[i] + "'");
      node = &(*node)[path[i]];
    } else {
      throw InvalidInput("override '" + key + "': '" + path[i] + "' is not inside a section");
    }
  }
  *node = value;
}

// ------------------------------------------------------------------- bundled

namespace {

json sweeps_2d() {
  return {{"t", {0.5, 0.2, 0.1, 0.05, 0.02}},
          {"h", {1e-1, 3e-2, 1e-2}},
          {"alpha", {1e-1, 3e-2, 1e-2}},
          {"integration_h", 1e-3}};
}

json unit_disc() { return {{"shape", "ball"}, {"center", {0.0, 0.0}}, {"radius", 1.0}}; }

json whole_plane() { return {{"kind", "whole_space"}, {"dim", 2}}; }

json planar(const std::string& name, const std::string& description, json op, int expected, const std::string& note) {
  return {{"name", name},
          {"description", description},
          {"operator", std::move(op)},
          {"set", whole_plane()},
          {"map", {{"preset", "zero"}, {"dim", 2}}},
          {"region", unit_disc()},
          {"sweeps", sweeps_2d()},
          {"seeds", {0, 17}},
          {"initial_state", {0.6, 0.3}},
          {"t_end", 2.0},
          {"exclusion", {{"z_samples", {0.0, 0.5, 1.0}}}},
          {"expected_degree", {{"value", expected}, {"note", note}}}};
}

std::map<std::string, json> make_bundled() {
  std::map<std::string, json> out;
  out["linear_sink_2d"] = planar("linear_sink_2d", "x' = -x on the unit disc",
                                 {{"kind", "matrix"}, {"matrix", {{-1.0, 0.0}, {0.0, -1.0}}}, {"growth", {{"M", 1.0}, {"omega", -1.0}}}},
                                 1, "I - P_t = (1 - e^{-t}) I is positive definite");
  out["saddle_2d"] = planar("saddle_2d", "x' = diag(1, -1) x on the unit disc",
                            {{"kind", "matrix"}, {"matrix", {{1.0, 0.0}, {0.0, -1.0}}}, {"growth", {{"M", 1.0}, {"omega", 1.0}}}},
                            -1, "det(I - P_t) = (1 - e^t)(1 - e^{-t}) < 0");
  out["rotation_sink_2d"] = planar(
      "rotation_sink_2d", "spiral sink A = [[-0.1, -1], [1, -0.1]] on the unit disc",
      {{"kind", "matrix"}, {"matrix", {{-0.1, -1.0}, {1.0, -0.1}}}, {"growth", {{"M", 1.0}, {"omega", -0.1}}}}, 1,
      "det(-A) = 1.01 > 0");
  {
    json c = planar("center_2d", "pure rotation x' = (-x2, x1); P_{2pi} = I",
                    {{"kind", "matrix"}, {"matrix", {{0.0, -1.0}, {1.0, 0.0}}}, {"growth", {{"M", 1.0}, {"omega", 0.0}}}},
                    1, "det(I - P_t) = 2 - 2 cos t > 0 for 0 < t < 2 pi");
    c["scheme"] = "projected_semigroup";
    const double two_pi = 2.0 * std::numbers::pi;
    c["exclusion"] = {{"T", 2.0 * two_pi}, {"z_samples", {0.0, 1.0}}, {"t_samples", {0.1, 0.2, 0.5, two_pi}}};
    out["center_2d"] = c;
  }
  out["orthant_contraction"] = {
      {"name", "orthant_contraction"},
      {"description", "K = R+^2, A = 0, f(x) = (1 - x1, 1 - x2), U = (0.5, 1.5)^2"},
      {"operator", {{"kind", "zero"}, {"dim", 2}}},
      {"set", {{"kind", "box"}, {"lo", {0.0, 0.0}}, {"hi", {"inf", "inf"}}}},
      {"map", {{"preset", "linear"}, {"b", {{-1.0, 0.0}, {0.0, -1.0}}}, {"c", {1.0, 1.0}}}},
      {"region", {{"shape", "box"}, {"lo", {0.5, 0.5}}, {"hi", {1.5, 1.5}}}},
      {"sweeps", sweeps_2d()},
      {"seeds", {0, 17}},
      {"initial_state", {0.0, 3.0}},
      {"t_end", 5.0},
      {"exclusion", {{"z_samples", {0.0, 0.5, 1.0}}}},
      {"expected_degree", {{"value", 1}, {"note", "contraction onto the interior fixed point (1, 1)"}}}};
  {
    const int m = 32;
    std::vector<double> x0;
    for (int i = 1; i <= m; ++i) x0.push_back(0.5 * std::sin(std::numbers::pi * i / (m + 1.0)));
    out["orthant_logistic"] = {
        {"name", "orthant_logistic"},
        {"description", "32-node Dirichlet heat equation with logistic interval reaction in [0, 1]^32"},
        {"operator", {{"kind", "dirichlet_laplacian_1d"}, {"m", m}}},
        {"set", {{"kind", "box"}, {"lo", std::vector<double>(m, 0.0)}, {"hi", std::vector<double>(m, 1.0)}}},
        {"map", {{"preset", "logistic_interval"}, {"grid_dim", m}, {"rate", 4.0}}},
        {"sweeps", {{"t", {1.0}}, {"h", {1e-2}}, {"alpha", {1e-6}}, {"integration_h", 1e-3}}},
        {"seeds", {0}},
        {"initial_state", x0},
        {"t_end", 1.0}};
  }
  out["interval_sink_1d"] = {
      {"name", "interval_sink_1d"},
      {"description", "x' in -x + [-0.5, 0.5] on (-1, 1)"},
      {"operator", {{"kind", "matrix"}, {"matrix", {{-1.0}}}, {"growth", {{"M", 1.0}, {"omega", -1.0}}}}},
      {"set", {{"kind", "whole_space"}, {"dim", 1}}},
      {"map", {{"preset", "interval"}, {"dim", 1}, {"lo", -0.5}, {"hi", 0.5}}},
      {"region", {{"shape", "ball"}, {"center", {0.0}}, {"radius", 1.0}}},
      {"sweeps", sweeps_2d()},
      {"seeds", {0, 17}},
      {"initial_state", {0.9}},
      {"t_end", 2.0},
      {"exclusion", {{"z_samples", {0.0, 0.5, 1.0}}}},
      {"expected_degree", {{"value", 1}, {"note", "every selection points inward at x = -1 and x = 1"}}}};
  out["cubic_three_zeros_1d"] = {
      {"name", "cubic_three_zeros_1d"},
      {"description", "G(x) = x (1 - x)(2 - x) on (-0.5, 2.5); zeros 0, 1, 2"},
      {"operator", {{"kind", "zero"}, {"dim", 1}}},
      {"set", {{"kind", "whole_space"}, {"dim", 1}}},
      {"map", {{"preset", "polynomial"}, {"dim", 1}, {"coefficients", {0.0, 2.0, -3.0, 1.0}}}},
      {"region", {{"shape", "ball"}, {"center", {1.0}}, {"radius", 1.5}}},
      // The cubic escapes to infinity from x = 2.5 before t = 0.5.
      {"sweeps", {{"t", {0.2, 0.1, 0.05, 0.02}}, {"h", {1e-1, 3e-2, 1e-2}}, {"alpha", {1e-1, 3e-2, 1e-2}},
                  {"integration_h", 1e-3}}},
      {"seeds", {0}},
      {"expected_degree", {{"value", -1}, {"note", "local indices -1, +1, -1 of the zeros of -G"}}}};
  out["adversarial_drift_1d"] = {
      {"name", "adversarial_drift_1d"},
      {"description", "K = R+, f(x) = -x - 0.02 points out of K at 0 by 0.02; sweeps below alpha = 0.02 cannot select"},
      {"operator", {{"kind", "zero"}, {"dim", 1}}},
      {"set", {{"kind", "box"}, {"lo", {0.0}}, {"hi", {"inf"}}}},
      {"map", {{"preset", "linear"}, {"b", {{-1.0}}}, {"c", {-0.02}}}},
      {"region", {{"shape", "ball"}, {"center", {0.0}}, {"radius", 1.0}}},
      {"sweeps", sweeps_2d()},
      {"seeds", {0}}};
  return out;
}

const std::map<std::string, json>& bundled() {
  static const auto all = make_bundled();
  return all;
}

}  // namespace

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : bundled()) out.push_back(k);
  return out;
}

json bundled_scenario(const std::string& name) {
  const auto it = bundled().find(name);
  if (it == bundled().end()) throw InvalidInput("no bundled scenario named '" + name + "'");
  return it->second;
}

}  // namespace cdeg
