#include "specweights/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include "specweights/assemble.hpp"
#include "specweights/certify.hpp"
#include "specweights/cheeger.hpp"
#include "specweights/eigensolve.hpp"
#include "specweights/extremal.hpp"
#include "specweights/util.hpp"

namespace sw {

namespace {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Kind kind_from_string(const std::string& s) {
  if (s == "interval") return Kind::Interval;
  if (s == "circle") return Kind::Circle;
  if (s == "disc") return Kind::Disc;
  if (s == "flat_torus") return Kind::FlatTorus;
  if (s == "radial_ball") return Kind::RadialBall;
  if (s == "warped_product") return Kind::WarpedProduct;
  throw SchemaError("unknown domain kind: " + s);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string csv_header() { return "sweep_param,k,value,residual\n"; }

void append_rows(std::string& csv, double sweep, const Spectrum& s) {
  for (size_t k = 0; k < s.values.size(); ++k) {
    csv += fmt12(sweep) + "," + std::to_string(k) + "," + fmt12(s.values[k]) +
           "," + fmt12(s.residuals[k]) + "\n";
  }
}

void write_json(const RunConfig& cfg, const std::string& name,
                const nlohmann::json& j) {
  write_file_atomic(out_path(cfg, name), j.dump(2) + "\n");
}

DensityField parse_density(const Domain& d, const nlohmann::json& cfg,
                           const std::string& key) {
  if (!cfg.contains(key)) return constant_density(d, 1.0);
  const auto& j = cfg.at(key);
  if (j.is_number()) return constant_density(d, j.get<double>());
  if (j.contains("constant"))
    return constant_density(d, j.at("constant").get<double>());
  if (j.contains("family")) {
    FamilySpec fam = parse_family(j);
    DensityField f = make_density(d, fam);
    if (j.value("normalize", false)) f = normalize_mean(d, f);
    return f;
  }
  throw SchemaError(key + ": expected a number, {constant}, or {family}");
}

SolveOpts parse_solver(const nlohmann::json& cfg, uint64_t seed) {
  SolveOpts so;
  so.seed = seed;
  if (cfg.contains("solver")) {
    const auto& j = cfg.at("solver");
    so.tol = j.value("tol", so.tol);
    so.max_iters = j.value("max_iters", so.max_iters);
    so.dense_cutoff = j.value("dense_cutoff", so.dense_cutoff);
    so.cluster_tol = j.value("cluster_tol", so.cluster_tol);
  }
  return so;
}

int cmd_solve(const RunConfig& cfg) {
  const Domain d = build_domain(parse_domain(cfg.raw.at("domain")));
  const DensityField rho = parse_density(d, cfg.raw, "rho");
  const DensityField sigma = parse_density(d, cfg.raw, "sigma");
  const BC bc =
      cfg.raw.value("bc", std::string("neumann")) == "dirichlet"
          ? BC::Dirichlet
          : BC::Neumann;
  const int count = cfg.raw.value("count", 5);
  const AssembledForms f = assemble(d, rho, sigma, bc);
  const Spectrum s = solve_lowest(f, count, parse_solver(cfg.raw, cfg.seed));

  std::string csv = csv_header();
  append_rows(csv, 0.0, s);
  write_file_atomic(out_path(cfg, "solve.csv"), csv);
  nlohmann::json rep = {{"command", "solve"},
                        {"num_nodes", d.num_nodes()},
                        {"num_dofs", f.num_dofs()},
                        {"volume", d.volume},
                        {"values", s.values},
                        {"residuals", s.residuals},
                        {"clusters", s.clusters}};
  write_json(cfg, "solve.json", rep);
  if (cfg.plot) {
    std::vector<double> ks(s.values.size());
    for (size_t k = 0; k < ks.size(); ++k) ks[k] = (double)k;
    write_svg_plot(out_path(cfg, "solve.svg"), ks, s.values, "spectrum");
  }
  return 0;
}

int cmd_cheeger(const RunConfig& cfg) {
  const Domain d = build_domain(parse_domain(cfg.raw.at("domain")));
  const DensityField rho = parse_density(d, cfg.raw, "rho");
  const DensityField sigma = parse_density(d, cfg.raw, "sigma");
  const std::string ms = cfg.raw.value("method", std::string("scan_1d"));
  CheegerMethod method;
  if (ms == "scan_1d") method = CheegerMethod::Scan1D;
  else if (ms == "sweep") method = CheegerMethod::Sweep;
  else if (ms == "candidate_balls") method = CheegerMethod::CandidateBalls;
  else throw SchemaError("unknown cheeger method: " + ms);
  CheegerOpts opts;
  opts.max_components = cfg.raw.value("max_components", 2);
  if (cfg.raw.contains("balls")) {
    for (const auto& b : cfg.raw.at("balls")) {
      opts.ball_centers.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
      opts.ball_radii.push_back(b.at(2).get<double>());
    }
  }
  const CheegerEstimate est = cheeger_constant(d, rho, sigma, method, opts);
  nlohmann::json rep = {{"command", "cheeger"},
                        {"value", est.value},
                        {"method", ms},
                        {"certified", est.certified},
                        {"cut_weight", est.cut_weight},
                        {"rho_volume", est.rho_volume},
                        {"sigma_volume", est.sigma_volume},
                        {"intervals", est.intervals}};
  write_json(cfg, "cheeger.json", rep);
  std::string csv = "quantity,value\n";
  csv += "cheeger," + fmt12(est.value) + "\n";
  csv += "cut_weight," + fmt12(est.cut_weight) + "\n";
  csv += "rho_volume," + fmt12(est.rho_volume) + "\n";
  csv += "sigma_volume," + fmt12(est.sigma_volume) + "\n";
  write_file_atomic(out_path(cfg, "cheeger.csv"), csv);
  return 0;
}

int cmd_family(const RunConfig& cfg) {
  const DomainSpec base_spec = parse_domain(cfg.raw.at("domain"));
  const auto eps_list = cfg.raw.at("eps").get<std::vector<double>>();
  if (eps_list.empty()) throw SchemaError("eps: empty sweep");
  const int count = cfg.raw.value("count", 2);
  const nlohmann::json fam_json = cfg.raw.at("family");
  const SolveOpts so = parse_solver(cfg.raw, cfg.seed);
  const bool sigma_from_rho = cfg.raw.value("sigma_power", 0.0) != 0.0;
  const double p = cfg.raw.value("sigma_power", 0.0);

  auto run_one = [&](double eps) {
    DomainSpec spec = base_spec;
    FamilySpec fam = parse_family(fam_json);
    fam.eps = eps;
    // make family break radii explicit grid points
    if (spec.kind == Kind::RadialBall || spec.kind == Kind::Interval) {
      spec.breaks.push_back(eps);
      spec.breaks.push_back(2 * eps);
    }
    const Domain d = build_domain(spec);
    const DensityField fld = make_density(d, fam);
    DensityField rho = constant_density(d, 1.0);
    DensityField sigma = constant_density(d, 1.0);
    const bool is_sigma = fam.family == Family::ConductivityII ||
                          fam.family == Family::BuserSigma ||
                          fam.family == Family::CylinderSigma;
    if (is_sigma) sigma = fld;
    else rho = fld;
    if (sigma_from_rho && !is_sigma)
      sigma = nodal_density(d, rho.values.array().pow(p));
    const AssembledForms f = assemble(d, rho, sigma, BC::Neumann);
    return solve_lowest(f, count, so);
  };

  std::vector<Spectrum> results(eps_list.size());
  const int jobs = std::max(1, cfg.jobs);
  for (size_t i0 = 0; i0 < eps_list.size(); i0 += jobs) {
    std::vector<std::future<Spectrum>> batch;
    for (size_t i = i0; i < std::min(eps_list.size(), i0 + jobs); ++i)
      batch.push_back(std::async(std::launch::async, run_one, eps_list[i]));
    for (size_t i = i0; i < std::min(eps_list.size(), i0 + jobs); ++i)
      results[i] = batch[i - i0].get();
  }

  std::string csv = csv_header();
  std::vector<double> mu1s;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    append_rows(csv, eps_list[i], results[i]);
    mu1s.push_back(results[i].values[count >= 1 ? 1 : 0]);
  }
  write_file_atomic(out_path(cfg, "family.csv"), csv);
  nlohmann::json rep = {{"command", "family"},
                        {"eps", eps_list},
                        {"mu1", mu1s}};
  if (eps_list.size() >= 2) rep["loglog_slope"] = loglog_slope(eps_list, mu1s);
  write_json(cfg, "family.json", rep);
  if (cfg.plot)
    write_svg_plot(out_path(cfg, "family.svg"), eps_list, mu1s, "mu1 sweep");
  return 0;
}

int cmd_certify(const RunConfig& cfg) {
  const std::string kind = cfg.raw.at("certificate").get<std::string>();
  nlohmann::json sub = cfg.raw.value("parameters", nlohmann::json::object());
  if (!sub.contains("seed")) sub["seed"] = (double)cfg.seed;
  const CertificateReport rep = run_certificate(kind, sub);
  write_json(cfg, kind + ".json", rep.to_json());
  // deterministic CSV: scalar quantities in sorted name order
  std::map<std::string, double> scalars;
  for (auto it = rep.quantities.begin(); it != rep.quantities.end(); ++it) {
    if (it.value().is_number()) scalars[it.key()] = it.value().get<double>();
    else if (it.value().is_object())
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
        if (jt.value().is_number())
          scalars[it.key() + "." + jt.key()] = jt.value().get<double>();
  }
  std::string csv = "quantity,value\n";
  for (const auto& [name, v] : scalars) csv += name + "," + fmt12(v) + "\n";
  csv += "verdict," + std::string(rep.pass ? "1" : "0") + "\n";
  write_file_atomic(out_path(cfg, kind + ".csv"), csv);
  std::cout << kind << ": " << (rep.pass ? "pass" : "fail")
            << " (margin " << rep.margin << ")\n";
  return rep.pass ? 0 : 3;
}

int cmd_optimize(const RunConfig& cfg) {
  const Domain d = build_domain(parse_domain(cfg.raw.at("domain")));
  const std::string ts = cfg.raw.value("target", std::string("rho"));
  if (ts != "rho" && ts != "sigma") throw SchemaError("target must be rho|sigma");
  OptimizeOpts oo;
  oo.max_iters = cfg.raw.value("max_iters", oo.max_iters);
  oo.floor = cfg.raw.value("floor", oo.floor);
  oo.tol = cfg.raw.value("tol", oo.tol);
  oo.seed = cfg.seed;
  oo.solver = parse_solver(cfg.raw, cfg.seed);
  const OptimizationResult res =
      maximize_mu1(d, ts == "rho" ? Target::Rho : Target::Sigma, oo);

  std::string hist = "iter,value,step,cluster_size\n";
  for (size_t i = 0; i < res.history.size(); ++i)
    hist += std::to_string(i) + "," + fmt12(res.history[i].value) + "," +
            fmt12(res.history[i].step) + "," +
            std::to_string(res.history[i].cluster_size) + "\n";
  write_file_atomic(out_path(cfg, "optimize_history.csv"), hist);

  std::string field = "node,value\n";
  for (int i = 0; i < res.best_field.values.size(); ++i)
    field += std::to_string(i) + "," + fmt12(res.best_field.values[i]) + "\n";
  write_file_atomic(out_path(cfg, "optimize_field.csv"), field);

  nlohmann::json rep = {{"command", "optimize"},
                        {"target", ts},
                        {"best_value", res.best_value},
                        {"iterations", res.history.size()},
                        {"converged", res.converged}};
  write_json(cfg, "optimize.json", rep);
  if (cfg.plot) {
    std::vector<double> it(res.history.size()), val(res.history.size());
    for (size_t i = 0; i < it.size(); ++i) {
      it[i] = (double)i;
      val[i] = res.history[i].value;
    }
    write_svg_plot(out_path(cfg, "optimize.svg"), it, val, "ascent history");
  }
  return 0;
}

}  // namespace

DomainSpec parse_domain(const nlohmann::json& j) {
  DomainSpec spec;
  if (!j.contains("kind")) throw SchemaError("domain: missing kind");
  const std::string ks = j.at("kind").get<std::string>();
  if (ks == "off") {
    spec.kind = Kind::Disc;  // placeholder; load_off fixes the geometry
    spec.off_path = j.at("path").get<std::string>();
    return spec;
  }
  spec.kind = kind_from_string(ks);
  spec.n = j.value("n", spec.kind == Kind::Interval ? 1 : 2);
  spec.N = j.value("N", 100);
  spec.length = j.value("length", 1.0);
  spec.radius = j.value("radius", 1.0);
  spec.ell = j.value("ell", 0);
  spec.rings = j.value("rings", 0);
  spec.sectors = j.value("sectors", 0);
  spec.grade_t = j.value("grade_t", 0.0);
  if (j.contains("breaks"))
    spec.breaks = j.at("breaks").get<std::vector<double>>();
  if (j.contains("profile")) {
    const auto& p = j.at("profile");
    const std::string pt = p.at("type").get<std::string>();
    const double eps = p.value("eps", 0.1);
    if (pt == "dumbbell") {
      spec.profile = dumbbell_profile(eps);
      spec.length = dumbbell_length();
    } else if (pt == "capped_cylinder") {
      spec.profile = capped_cylinder_profile(eps);
      spec.length = capped_cylinder_length(eps);
    } else {
      throw SchemaError("unknown profile type: " + pt);
    }
  }
  return spec;
}

FamilySpec parse_family(const nlohmann::json& j) {
  FamilySpec fam;
  fam.family = family_from_string(j.at("family").get<std::string>());
  fam.eps = j.value("eps", fam.eps);
  fam.a = j.value("a", fam.a);
  fam.t = j.value("t", fam.t);
  fam.p = j.value("p", fam.p);
  fam.k = j.value("k", fam.k);
  fam.t0 = j.value("t0", fam.t0);
  fam.t1 = j.value("t1", fam.t1);
  if (j.contains("centers"))
    for (const auto& c : j.at("centers"))
      fam.centers.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  return fam;
}

int run(const RunConfig& config) {
  try {
    if (!config.raw.contains("spec_version") ||
        config.raw.at("spec_version").get<int>() != 1)
      throw SchemaError("config must declare spec_version 1");
    std::filesystem::create_directories(config.out_dir);
    if (config.command == "solve") return cmd_solve(config);
    if (config.command == "cheeger") return cmd_cheeger(config);
    if (config.command == "family") return cmd_family(config);
    if (config.command == "certify") return cmd_certify(config);
    if (config.command == "optimize") return cmd_optimize(config);
    throw SchemaError("unknown command: " + config.command);
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"spectral workbench for weighted eigenvalue problems"};
  std::string command, config_path, out_dir = ".";
  bool plot = false;
  int jobs = 1;
  app.add_option("command", command, "solve|cheeger|family|certify|optimize")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_flag("--plot", plot, "emit SVG plots");
  app.add_option("--jobs", jobs, "parallel sweep workers");
  app.add_option("--out", out_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  cfg.command = command;
  cfg.out_dir = out_dir;
  cfg.plot = plot;
  cfg.jobs = jobs;
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << "\n";
    return 2;
  }
  try {
    in >> cfg.raw;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  cfg.seed = (uint64_t)cfg.raw.value("seed", 12345.0);
  if (const char* env = std::getenv("SPECWEIGHTS_SEED"))
    cfg.seed = (uint64_t)std::strtoull(env, nullptr, 10);
  return run(cfg);
}

}  // namespace sw
