#include "polyfreq/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "polyfreq/bubble.hpp"
#include "polyfreq/errors.hpp"
#include "polyfreq/fem.hpp"
#include "polyfreq/io.hpp"
#include "polyfreq/manifold.hpp"
#include "polyfreq/parallel.hpp"
#include "polyfreq/shape_derivatives.hpp"
#include "polyfreq/spectra.hpp"
#include "polyfreq/stability.hpp"
#include "polyfreq/symmetrize.hpp"

namespace polyfreq {

namespace {

using nlohmann::json;

constexpr int kUsage = 64;

struct Globals {
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out = "-";
  std::string manifest;
  std::string from_manifest;
};

struct Context {
  Globals g;
  ExperimentManifest manifest;

  // Secondary outputs named by subcommand options (--trace, --csv).
  void emit_file(const std::string& path, const std::string& content) {
    write_file(path, content);
    manifest.output_hashes[path] = fnv1a_hex(content);
  }

  Polygon load_polygon(const std::string& path) {
    const std::string text = read_file(path);
    manifest.input_hashes[path] = fnv1a_hex(text);
    try {
      return polygon_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw InputError(path + ": " + e.what());
    }
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json eigen_json(const EigenSolution& s) {
  return {{"lambda1", s.lambda1},
          {"residual", s.residual},
          {"iterations", s.iterations},
          {"ndof", s.u.size()},
          {"nodes", s.mesh->nodes.size()},
          {"triangles", s.mesh->triangles.size()}};
}

json report_json(const DerivativeReport& r) {
  json j = {{"lambda", r.lambda}, {"dlambda_dt", r.dlambda_dt}, {"d2lambda_dt2", r.d2lambda_dt2}, {"t", r.t_eval}};
  if (r.has_fd) {
    j["fd_dlambda_dt"] = r.fd_dlambda;
    j["fd_d2lambda_dt2"] = r.fd_d2lambda;
    j["rel_err_1"] = r.rel_err_1;
    j["rel_err_2"] = r.rel_err_2;
  }
  return j;
}

// ---- subcommands --------------------------------------------------------

struct EigArgs {
  std::string polygon;
  int refine = 6;
  bool grade = false;
};

std::string run_eig(Context& ctx, const EigArgs& a) {
  const Polygon p = ctx.load_polygon(a.polygon);
  MeshOptions opt;
  opt.grade_vertices = a.grade;
  const EigenSolution s = solve_lambda1(p, a.refine, opt);
  json j = eigen_json(s);
  if (a.refine >= 2) {
    const double l0 = solve_lambda1(p, a.refine - 2, opt).lambda1;
    const double l1 = solve_lambda1(p, a.refine - 1, opt).lambda1;
    j["order_estimate"] = observed_order(l0, l1, s.lambda1);
  } else {
    j["order_estimate"] = nullptr;
  }
  j["area"] = area(p);
  j["perimeter"] = perimeter(p);
  j["refine"] = a.refine;
  return dump(j);
}

struct FlowArgs {
  std::string polygon;
  int max_iter = 1000;
  double tol = 1e-8;
  std::string schedule = "cyclic";
  std::string trace;
};

std::string run_flow_cmd(Context& ctx, const FlowArgs& a) {
  const Polygon p = ctx.load_polygon(a.polygon);
  const Schedule s = a.schedule == "largest" ? Schedule::LargestFirst : Schedule::Cyclic;
  const FlowTrace tr = run_flow(p, a.max_iter, a.tol, s);
  const CsvTable t = emit_plot_data(tr);
  if (a.trace.empty()) return t.str();
  ctx.emit_file(a.trace, t.str());
  const Polygon& last = tr.polygons.back();
  return dump({{"converged", tr.converged},
               {"iterations", tr.iterations_to_converge},
               {"perimeter_initial", tr.perimeters.front()},
               {"perimeter_final", tr.perimeters.back()},
               {"area", tr.areas.front()},
               {"max_side_dev", tr.side_deviation.back()},
               {"final", polygon_to_json(last)}});
}

struct DerivArgs {
  std::string polygon;
  int vertex = 0;
  double t = std::numeric_limits<double>::quiet_NaN();
  int refine = 6;
  bool fd_check = false;
  bool shear = false;
};

std::string run_deriv(Context& ctx, const DerivArgs& a) {
  const Polygon p = ctx.load_polygon(a.polygon);
  FdOptions opt;
  opt.level = a.refine;
  if (a.shear) return dump(report_json(rhombus_rectangle_report(p, opt, a.fd_check)));
  if (a.vertex < 0 || static_cast<std::size_t>(a.vertex) >= p.size()) throw DomainError("vertex index out of range");
  const SymmetrizationFrame f = make_frame(p, static_cast<std::size_t>(a.vertex));
  const double t = std::isnan(a.t) ? f.t_star : a.t;
  json j = report_json(derivative_report(p, f, t, opt, a.fd_check));
  j["xi"] = f.xi;
  j["b"] = f.b;
  j["t_star"] = f.t_star;
  return dump(j);
}

struct SeriesArgs {
  std::string polygon;
  int terms = 20;
  int refine = 5;
  int max_iter = 5000;
  std::string csv;
};

std::string run_series(Context& ctx, const SeriesArgs& a) {
  const Polygon p = ctx.load_polygon(a.polygon);
  SeriesOptions opt;
  opt.refine = a.refine;
  opt.jobs = ctx.g.jobs;
  opt.flow_max_iter = a.max_iter;
  const SeriesReconstruction r = reconstruct_series(p, a.terms, opt);
  if (!a.csv.empty()) ctx.emit_file(a.csv, emit_plot_data(r).str());
  return dump({{"lambda_limit", r.lambda_limit},
               {"direct_lambda", r.direct_lambda},
               {"lambda_rec", r.lambda_rec},
               {"rel_gap", r.rel_gap},
               {"terms", r.terms.size()},
               {"flow_steps", r.flow_steps},
               {"skipped_negligible", r.skipped_negligible},
               {"tail_t2", r.tail_t2}});
}

struct StabilityArgs {
  std::string family = "thin-isosceles";
  std::vector<double> values;
  double eps = 0.1;
  int refine = 5;
  int samples = 20;
  double radius = 0.05;
  std::string csv;
};

std::string run_stability(Context& ctx, const StabilityArgs& a) {
  CsvTable t;
  if (a.family == "thin-isosceles") {
    const std::vector<double> as = a.values.empty() ? std::vector<double>{5, 10, 20} : a.values;
    std::vector<FamilyPoint> pts(as.size());
    parallel_for(as.size(), ctx.g.jobs, [&](std::size_t i) { pts[i] = pi2_over_16_family({as[i]}, a.eps, a.refine)[0]; });
    t = emit_plot_data(pts);
  } else if (a.family == "sharpness") {
    const std::vector<double> ts = a.values.empty() ? std::vector<double>{0.02, 0.04, 0.08, 0.16} : a.values;
    const SharpnessFit fit = sharpness_exponent_fit(ts, a.refine);
    t = emit_plot_data(fit);
  } else if (a.family == "scan") {
    const SampleBatch batch = sample_near_regular(3, a.radius, 1.0, ctx.g.seed, a.samples);
    std::vector<StabilityExperiment> parts(batch.polygons.size());
    parallel_for(parts.size(), ctx.g.jobs,
                 [&](std::size_t i) { parts[i] = equivalence_ratio_scan({batch.polygons[i]}, a.refine, true); });
    t.comments.push_back("random triangles near the equilateral triangle of area 1; ratio = delta_lambda / delta_p");
    t.columns = {"index", "delta_lambda", "delta_p", "asymmetry", "ratio"};
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& s = parts[i].samples[0];
      t.rows.push_back({double(i), s.delta_lambda, s.delta_p, s.asymmetry, s.ratio});
    }
  } else {
    throw DomainError("unknown family " + a.family);
  }
  if (a.csv.empty()) return t.str();
  ctx.emit_file(a.csv, t.str());
  return "";
}

struct BubbleArgs {
  double psi = 1.0;
  double sigma = 1.0;
  double pressure = 0.0;
  int n = 6;
  int refine = 5;
  bool allow_negative = false;
};

std::string run_bubble(Context&, const BubbleArgs& a) {
  BubbleParams p = bubble_params(a.psi, a.sigma, a.pressure, a.n, a.refine);
  p.allow_negative_pressure = a.allow_negative;
  const Equilibrium eq = equilibrium_scale(p);
  return dump({{"a", eq.a},
               {"energy_at_a", eq.energy},
               {"residual", eq.residual},
               {"h_prime", eq.h_prime},
               {"newton_steps", eq.newton_steps},
               {"lambda_pn", p.lambda_pn},
               {"perimeter_pn", p.perim_pn}});
}

struct ManifoldArgs {
  bool check_kernels = false;
  int n_min = 4;
  int n_max = 32;
  int n = 0;
  std::string point;
};

std::string run_manifold(Context& ctx, const ManifoldArgs& a) {
  json out = json::object();
  if (a.check_kernels) {
    json rows = json::array();
    bool all = true;
    const int lo = a.n > 0 ? a.n : a.n_min, hi = a.n > 0 ? a.n : a.n_max;
    for (int n = lo; n <= hi; ++n) {
      const JacobianReport q = dq_at_regular(n);
      const JacobianReport s = dpsi_at_regular(n);
      const bool ok = q.nullity == 2 * n - 4 && s.nullity == n - 3;
      all = all && ok;
      rows.push_back({{"n", n},
                      {"nullity_dq", q.nullity},
                      {"nullity_dpsi", s.nullity},
                      {"expected_dq", 2 * n - 4},
                      {"expected_dpsi", n - 3},
                      {"singular_values_dq", q.singular_values},
                      {"singular_values_dpsi", s.singular_values},
                      {"ok", ok}});
    }
    out["kernels"] = rows;
    out["all_ok"] = all;
  }
  if (!a.point.empty()) {
    const Polygon p = ctx.load_polygon(a.point);
    const ManifoldPoint m = to_manifold(p);
    const ManifoldResiduals r = validate_manifold(m);
    out["point"] = manifold_to_json(m);
    out["residuals"] = {{"angle_sum", r.angle_sum},
                        {"area", r.area},
                        {"centroid_cos", r.centroid_cos},
                        {"centroid_sin", r.centroid_sin},
                        {"pass", r.pass}};
  }
  if (out.empty()) throw DomainError("manifold needs --check-kernels or --point");
  return dump(out);
}

struct SampleArgs {
  int n = 6;
  double radius = 0.05;
  double alpha = 1.0;
  int count = 10;
};

std::string run_sample(Context& ctx, const SampleArgs& a) {
  const SampleBatch b = sample_near_regular(a.n, a.radius, a.alpha, ctx.g.seed, a.count);
  if (b.convexity_not_guaranteed)
    std::cerr << "warning: radius exceeds the convexity radius " << b.mu_n << "; samples were filtered\n";
  std::string s;
  for (const auto& p : b.polygons) s += polygon_to_json(p).dump() + "\n";
  return s;
}

json manifest_json(const ExperimentManifest& m) {
  return {{"command", m.command},       {"argv", m.argv},
          {"seed", m.seed},             {"jobs", m.jobs},
          {"tool_version", m.tool_version}, {"input_hashes", m.input_hashes},
          {"output_hashes", m.output_hashes}};
}

int run(const std::vector<std::string>& args, ExperimentManifest* produced);

int replay(const std::string& path) {
  const json j = read_json_file(path);
  ExperimentManifest recorded;
  try {
    recorded.argv = j.at("argv").get<std::vector<std::string>>();
    recorded.output_hashes = j.at("output_hashes").get<std::map<std::string, std::string>>();
    recorded.input_hashes = j.at("input_hashes").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  for (const auto& [in, h] : recorded.input_hashes)
    if (fnv1a_hex(read_file(in)) != h) throw InputError("input " + in + " changed since the manifest was written");
  ExperimentManifest now;
  const int code = run(recorded.argv, &now);
  if (code != 0) return code;
  if (now.output_hashes != recorded.output_hashes) {
    std::cerr << "replay: output hashes differ from " << path << "\n";
    return 1;
  }
  std::cerr << "replay: outputs identical\n";
  return 0;
}

int run(const std::vector<std::string>& args, ExperimentManifest* produced) {
  CLI::App app{"Dirichlet eigenvalues of polygons under Steiner-type symmetrization"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Context ctx;
  Globals& g = ctx.g;
  app.add_option("--seed", g.seed, "random seed (POLYFREQ_SEED overrides)");
  app.add_option("--jobs", g.jobs, "worker threads for batch subcommands")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file, - for stdout");
  app.add_option("--manifest", g.manifest, "write an experiment manifest to this path");
  app.add_option("--from-manifest", g.from_manifest, "re-run a manifest and compare output hashes");

  EigArgs eig;
  auto* c_eig = app.add_subcommand("eig", "first Dirichlet eigenvalue");
  c_eig->add_option("--polygon", eig.polygon)->required();
  c_eig->add_option("--refine", eig.refine)->check(CLI::Range(0, 10));
  c_eig->add_flag("--grade-vertices", eig.grade, "grade the mesh toward the vertices");

  FlowArgs flow;
  auto* c_flow = app.add_subcommand("flow", "symmetrization flow trace as CSV");
  c_flow->add_option("--polygon", flow.polygon)->required();
  c_flow->add_option("--max-iter", flow.max_iter);
  c_flow->add_option("--tol", flow.tol);
  c_flow->add_option("--schedule", flow.schedule)->check(CLI::IsMember({"cyclic", "largest"}));
  c_flow->add_option("--trace", flow.trace, "write the per-step CSV here and print a JSON summary");

  DerivArgs deriv;
  auto* c_deriv = app.add_subcommand("deriv", "shape derivatives with finite-difference check");
  c_deriv->add_option("--polygon", deriv.polygon)->required();
  c_deriv->add_option("--vertex", deriv.vertex, "frame at vertices i, i+1, i+2");
  c_deriv->add_option("--t", deriv.t, "offset at which to evaluate (default: current)");
  c_deriv->add_option("--refine", deriv.refine)->check(CLI::Range(0, 10));
  c_deriv->add_flag("--fd-check", deriv.fd_check, "compare with central differences");
  c_deriv->add_flag("--shear", deriv.shear, "parallelogram shear instead of a vertex frame");

  SeriesArgs series;
  auto* c_series = app.add_subcommand("series", "series reconstruction of lambda along the flow");
  c_series->add_option("--polygon", series.polygon)->required();
  c_series->add_option("--terms", series.terms)->check(CLI::PositiveNumber);
  c_series->add_option("--refine", series.refine)->check(CLI::Range(0, 10));
  c_series->add_option("--csv", series.csv, "per-term CSV");
  c_series->add_option("--max-iter", series.max_iter, "flow iteration cap")->check(CLI::PositiveNumber);

  StabilityArgs stab;
  auto* c_stab = app.add_subcommand("stability", "triangle stability experiments");
  c_stab->add_option("--family", stab.family)->check(CLI::IsMember({"thin-isosceles", "sharpness", "scan"}));
  c_stab->add_option("--values,--a,--t", stab.values, "a values (thin-isosceles) or perturbation sizes (sharpness)")
      ->delimiter(',');
  c_stab->add_option("--eps", stab.eps);
  c_stab->add_option("--refine", stab.refine)->check(CLI::Range(0, 10));
  c_stab->add_option("--samples", stab.samples);
  c_stab->add_option("--radius", stab.radius);
  c_stab->add_option("--csv", stab.csv, "write the table here instead of stdout");

  BubbleArgs bub;
  auto* c_bub = app.add_subcommand("bubble", "equilibrium scale of the polygonal bubble");
  c_bub->add_option("--psi", bub.psi);
  c_bub->add_option("--sigma", bub.sigma);
  c_bub->add_option("--pressure", bub.pressure);
  c_bub->add_option("--n", bub.n)->check(CLI::Range(3, 1000));
  c_bub->add_option("--refine", bub.refine)->check(CLI::Range(0, 10));
  c_bub->add_flag("--allow-negative-pressure", bub.allow_negative);

  ManifoldArgs man;
  auto* c_man = app.add_subcommand("manifold", "kernel dimensions and barycentric coordinates");
  c_man->add_flag("--check-kernels", man.check_kernels);
  c_man->add_option("--n-min", man.n_min)->check(CLI::Range(3, 4096));
  c_man->add_option("--n-max", man.n_max)->check(CLI::Range(3, 4096));
  c_man->add_option("--n", man.n, "single n, overrides the range")->check(CLI::Range(3, 4096));
  c_man->add_option("--point", man.point, "polygon JSON to convert");

  SampleArgs smp;
  auto* c_smp = app.add_subcommand("sample", "random convex polygons near the regular one, JSON lines");
  c_smp->add_option("--n", smp.n)->check(CLI::Range(3, 4096));
  c_smp->add_option("--radius", smp.radius);
  c_smp->add_option("--alpha", smp.alpha);
  c_smp->add_option("--count", smp.count);

  std::vector<const char*> cargv{"polyfreq"};
  for (const auto& s : args) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (!g.from_manifest.empty()) return replay(g.from_manifest);
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kUsage;
  }
  if (const char* env = std::getenv("POLYFREQ_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("POLYFREQ_SEED is not an integer: ") + env);
    }
  }

  CLI::App* sub = app.get_subcommands().front();
  ctx.manifest.command = sub->get_name();
  ctx.manifest.seed = g.seed;
  ctx.manifest.jobs = g.jobs;
  // Replay arguments are the originals minus --manifest and its value.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--manifest=", 0) == 0) continue;
    ctx.manifest.argv.push_back(args[i]);
  }

  std::string output;
  const std::string name = sub->get_name();
  if (name == "eig") output = run_eig(ctx, eig);
  else if (name == "flow") output = run_flow_cmd(ctx, flow);
  else if (name == "deriv") output = run_deriv(ctx, deriv);
  else if (name == "series") output = run_series(ctx, series);
  else if (name == "stability") output = run_stability(ctx, stab);
  else if (name == "bubble") output = run_bubble(ctx, bub);
  else if (name == "manifold") output = run_manifold(ctx, man);
  else output = run_sample(ctx, smp);

  if (g.out == "-")
    std::cout << output << std::flush;
  else
    write_file(g.out, output);
  ctx.manifest.output_hashes[g.out] = fnv1a_hex(output);

  if (!g.manifest.empty()) write_file(g.manifest, dump(manifest_json(ctx.manifest)));
  if (produced) *produced = ctx.manifest;
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  try {
    return run(args, nullptr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == Error::Kind::Solver ? 2 : 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace polyfreq
