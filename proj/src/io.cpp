#include "polyfreq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "polyfreq/errors.hpp"

namespace polyfreq {

nlohmann::json polygon_to_json(const Polygon& p) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : p.vertices()) v.push_back({x.x(), x.y()});
  return {{"vertices", v}, {"orientation", "ccw"}};
}

Polygon polygon_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw InputError("polygon JSON needs a \"vertices\" array");
  std::vector<Point> v;
  for (const auto& e : j["vertices"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw InputError("each vertex must be a pair of numbers");
    v.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  if (j.contains("orientation")) {
    const auto o = j["orientation"].get<std::string>();
    if (o != "ccw" && o != "cw") throw InputError("orientation must be \"ccw\" or \"cw\"");
  }
  return Polygon(std::move(v));
}

nlohmann::json manifold_to_json(const ManifoldPoint& m) { return {{"x", m.x}, {"r", m.r}, {"alpha", m.alpha}}; }

ManifoldPoint manifold_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("r") || !j.contains("alpha"))
    throw InputError("manifold point JSON needs \"x\", \"r\" and \"alpha\"");
  ManifoldPoint m;
  m.x = j["x"].get<std::vector<double>>();
  m.r = j["r"].get<std::vector<double>>();
  m.alpha = j["alpha"].get<double>();
  if (m.x.size() != m.r.size()) throw InputError("x and r must have the same length");
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

nlohmann::json read_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string CsvTable::str() const {
  std::ostringstream ss;
  ss.precision(17);
  for (const auto& c : comments) ss << "# " << c << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) ss << (i ? "," : "") << columns[i];
  ss << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) ss << ',';
      if (!std::isnan(r[i])) ss << r[i];
    }
    ss << '\n';
  }
  return ss.str();
}

CsvTable emit_plot_data(const FlowTrace& tr) {
  CsvTable t;
  t.comments.push_back(std::string("converged=") + (tr.converged ? "true" : "false") +
                       " iterations=" + std::to_string(tr.iterations_to_converge));
  t.comments.push_back("k: polygon index; t_k: offset of the step leaving P^k (empty after the last polygon)");
  t.columns = {"k", "t_k", "perimeter", "area", "max_side_dev"};
  for (std::size_t k = 0; k < tr.polygons.size(); ++k) {
    const double off = k < tr.offsets.size() ? tr.offsets[k] : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({static_cast<double>(k), off, tr.perimeters[k], tr.areas[k], tr.side_deviation[k]});
  }
  return t;
}

CsvTable emit_plot_data(const SeriesReconstruction& r) {
  CsvTable t;
  std::ostringstream head;
  head.precision(17);
  head << "lambda_limit=" << r.lambda_limit << " direct_lambda=" << r.direct_lambda << " rel_gap=" << r.rel_gap;
  t.comments.push_back(head.str());
  t.comments.push_back("partial_sum: lambda_limit + sum over terms <= k of alpha t + beta t^2 / 2; t = t_{k-1}");
  t.columns = {"k", "alpha_k", "beta_k", "partial_sum", "t", "rel_gap"};
  for (const auto& s : r.terms) t.rows.push_back({static_cast<double>(s.k), s.alpha, s.beta, s.partial_sum, s.t, s.rel_gap});
  return t;
}

CsvTable emit_plot_data(const std::vector<FamilyPoint>& family) {
  CsvTable t;
  t.comments.push_back("ratio = (lambda - 4 pi^2/sqrt 3) / (L^2 - 12 sqrt 3); in_bracket and sandwich are 0/1");
  t.columns = {"a", "ratio", "lambda", "bracket_lo", "bracket_hi", "in_bracket", "sandwich"};
  for (const auto& f : family)
    t.rows.push_back({f.a, f.ratio, f.lambda, f.bracket_lo, f.bracket_hi, double(f.in_bracket), double(f.sandwich)});
  return t;
}

CsvTable emit_plot_data(const SharpnessFit& fit) {
  CsvTable t;
  std::ostringstream c;
  c << "exponent=" << fit.exponent << " asym_slope=" << fit.asym_slope << " lambda_slope=" << fit.lambda_slope;
  t.comments.push_back(c.str());
  t.columns = {"t", "asymmetry", "delta_lambda"};
  for (std::size_t i = 0; i < fit.t.size(); ++i) t.rows.push_back({fit.t[i], fit.asymmetry[i], fit.delta_lambda[i]});
  return t;
}

}  // namespace polyfreq
