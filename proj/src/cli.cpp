#include "roofkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "roofkit/io.hpp"
#include "roofkit/oracle.hpp"
#include "roofkit/ranktwo.hpp"
#include "roofkit/symmetric.hpp"

namespace roofkit {

namespace {

using Json = nlohmann::ordered_json;

struct CommonOptions {
  std::uint64_t seed = 0;
  int restarts = 32;
  int iters = 2000;
  int m = 0;
  double tol = 1e-10;
  std::string out_path;
  std::string format;

  OptimizerConfig optimizer() const {
    OptimizerConfig c;
    c.seed = seed;
    c.restarts = restarts;
    c.max_iters = iters;
    c.m = m;
    c.tol = tol;
    return c;
  }

  Json to_json() const {
    Json j;
    j["seed"] = seed;
    j["restarts"] = restarts;
    j["iters"] = iters;
    j["m"] = m;
    j["tol"] = tol;
    return j;
  }
};

void add_common(CLI::App* app, CommonOptions& o, const std::string& default_format) {
  o.format = default_format;
  app->add_option("--seed", o.seed, "Base seed");
  app->add_option("--restarts", o.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  app->add_option("--iters", o.iters, "Maximum iterations per restart")->check(CLI::PositiveNumber);
  app->add_option("--m", o.m, "Ensemble length (0 = d^2)")->check(CLI::NonNegativeNumber);
  app->add_option("--tol", o.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  app->add_option("--out", o.out_path, "Write the result file here instead of stdout");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
}

std::string fmt12(double x) {
  if (std::abs(x) < 1e-300) x = 0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json state_json(const State& s) {
  Json v = Json::array();
  for (Eigen::Index i = 0; i < s.dim(); ++i) v.push_back(format_complex(s.vector()(i)));
  return v;
}

Json ensemble_json(const Ensemble& e) {
  Json arr = Json::array();
  for (std::size_t j = 0; j < e.size(); ++j) {
    Json item;
    item["weight"] = e.weights()[j];
    item["state"] = state_json(e.states()[j]);
    arr.push_back(item);
  }
  return arr;
}

std::string record_header(const RunRecord& r) {
  Json j = to_json(r);
  j.erase("outputs");
  return "# record: " + j.dump() + "\n";
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
  f << text;
}

Density load_density(const std::string& path, RunRecord& rec) {
  const Eigen::MatrixXcd m = read_matrix_file(path);
  rec.input_fingerprint = fingerprint(m);
  return Density(m);
}

int cmd_compute(const std::string& path, const CommonOptions& o, std::ostream& out) {
  RunRecord rec;
  rec.command = "compute";
  rec.version = library_version();
  rec.config = o.to_json();
  const Density rho = load_density(path, rec);

  const RoofAnalysis a = analyze_roof(rho, o.optimizer());
  const double st = tilde_entropy(rho);
  const double h = std::max(0.0, st - a.roof.value);
  rec.outputs["dimension"] = rho.dim();
  rec.outputs["rank"] = rank_of(rho);
  rec.outputs["tilde_S"] = st;
  rec.outputs["S"] = von_neumann_entropy(rho);
  rec.outputs["R"] = a.roof.value;
  rec.outputs["H"] = h;
  rec.outputs["converged"] = a.roof.converged;
  rec.outputs["ensemble"] = ensemble_json(a.roof.ensemble);
  rec.outputs["facet_size"] = a.facet.generators.size();

  std::ostringstream text;
  if (o.format == "json") {
    text << to_json(rec).dump(2) << "\n";
  } else if (o.format == "csv") {
    text << record_header(rec) << "j,weight,component,re,im\n";
    const auto& e = a.roof.ensemble;
    for (std::size_t j = 0; j < e.size(); ++j) {
      for (Eigen::Index i = 0; i < e.dim(); ++i) {
        const auto z = e.states()[j].vector()(i);
        text << j + 1 << ',' << fmt12(e.weights()[j]) << ',' << i + 1 << ',' << fmt12(z.real()) << ','
             << fmt12(z.imag()) << "\n";
      }
    }
  } else {
    text << "dimension   " << rho.dim() << "\n"
         << "rank        " << rank_of(rho) << "\n"
         << "tilde_S     " << fmt12(st) << "\n"
         << "S           " << fmt12(von_neumann_entropy(rho)) << "\n"
         << "R           " << fmt12(a.roof.value) << "\n"
         << "H           " << fmt12(h) << "\n"
         << "converged   " << (a.roof.converged ? "yes" : "no") << "\n"
         << "facet_size  " << a.facet.generators.size() << "\n"
         << "ensemble    " << a.roof.ensemble.size() << " states\n";
    const auto& e = a.roof.ensemble;
    for (std::size_t j = 0; j < e.size(); ++j) {
      text << "  p=" << fmt12(e.weights()[j]) << "  psi=[";
      for (Eigen::Index i = 0; i < e.dim(); ++i) text << (i ? " " : "") << format_complex(e.states()[j].vector()(i));
      text << "]\n";
    }
  }
  emit(text.str(), o.out_path, out);
  return kExitOk;
}

struct ScanOptions {
  std::string family = "symmetric";
  int d = 3;
  double z_lo = -0.16;
  double z_hi = 0.3;
  int steps = 47;
  double refine_tol = 1e-6;
};

int cmd_scan(const ScanOptions& s, const CommonOptions& o, std::ostream& out) {
  if (s.d < 2) throw Error(ErrorKind::OutOfRange, "dimension must be at least 2");
  const double zmin = symmetric_z_min(s.d);
  const double zmax = symmetric_z_max(s.d);
  if (!(s.z_lo >= zmin - 1e-15 && s.z_hi <= zmax + 1e-15 && s.z_lo <= s.z_hi)) {
    throw Error(ErrorKind::OutOfRange, "z range must lie in [" + fmt12(zmin) + ", " + fmt12(zmax) + "]");
  }
  RunRecord rec;
  rec.command = "scan";
  rec.version = library_version();
  rec.config = o.to_json();
  rec.config["family"] = s.family;
  rec.config["d"] = s.d;
  rec.config["z_lo"] = s.z_lo;
  rec.config["z_hi"] = s.z_hi;
  rec.config["steps"] = s.steps;
  rec.config["refine_tol"] = s.refine_tol;
  rec.input_fingerprint = fingerprint(rec.config.dump());

  const OptimizerConfig cfg = o.optimizer();
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "z,a,r,tildeS,R_triangle,R_hexagon,R_opt,H,minima\n";
  for (int k = 0; k < s.steps; ++k) {
    double z = s.steps == 1 ? s.z_lo : s.z_lo + (s.z_hi - s.z_lo) * k / (s.steps - 1);
    if (std::abs(z) < 1e-12) z = 0;
    const SymmetricState st = symmetric_state(s.d, z);
    const Density rho = st.density();
    const double ts = tilde_entropy(rho);
    std::optional<double> tri;
    if (z > zmin) tri = triangle_objective(st);
    std::optional<double> hex;
    std::optional<int> minima;
    if (s.d == 3) {
      minima = minima_census(z).count;
      if (*minima == 6 && z > zmin) hex = hexagon_ensemble(z).objective_a;
    }
    OptimizerConfig row_cfg = cfg;
    row_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(k));
    const double r_opt = convex_roof(rho, row_cfg).value;
    const double h = std::max(0.0, ts - r_opt);

    const auto opt = [](const auto& v) { return v ? fmt12(static_cast<double>(*v)) : std::string(); };
    csv << fmt12(z) << ',' << fmt12(st.a) << ',' << fmt12(st.r) << ',' << fmt12(ts) << ',' << opt(tri) << ','
        << opt(hex) << ',' << fmt12(r_opt) << ',' << fmt12(h) << ',' << (minima ? std::to_string(*minima) : "")
        << "\n";
    Json row;
    row["z"] = z;
    row["a"] = st.a;
    row["r"] = st.r;
    row["tildeS"] = ts;
    row["R_triangle"] = tri ? Json(*tri) : Json();
    row["R_hexagon"] = hex ? Json(*hex) : Json();
    row["R_opt"] = r_opt;
    row["H"] = h;
    row["minima"] = minima ? Json(*minima) : Json();
    rows.push_back(row);
  }

  std::optional<double> z_star;
  if (s.d == 3) {
    const double lo = std::max(s.z_lo, zmin + 1e-3);
    const double hi = std::min(s.z_hi, zmax - 1e-3);
    if (lo < hi) {
      try {
        z_star = bifurcation_scan(lo, hi, 64, s.refine_tol).z_star;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoSignChange) throw;
      }
    }
  }
  rec.outputs["rows"] = rows;
  rec.outputs["z_star"] = z_star ? Json(*z_star) : Json();

  std::ostringstream text;
  if (o.format == "json") {
    text << to_json(rec).dump(2) << "\n";
  } else {
    text << record_header(rec) << csv.str() << "# z_star=" << (z_star ? fmt12(*z_star) : std::string()) << "\n";
  }
  emit(text.str(), o.out_path, out);
  return kExitOk;
}

int cmd_rank2(const std::string& path, const std::string& swap, int budget, const CommonOptions& o,
              std::ostream& out, std::ostream& err) {
  RunRecord rec;
  rec.command = "rank2";
  rec.version = library_version();
  rec.config = o.to_json();
  rec.config["swap"] = swap;
  rec.config["budget"] = budget;
  const Density rho = load_density(path, rec);

  int i = 0;
  int j = 0;
  char comma = 0;
  std::istringstream ss(swap);
  if (!(ss >> i >> comma >> j) || comma != ',' || !ss.eof()) {
    throw Error(ErrorKind::ParseError, "--swap expects i,j (1-based), got '" + swap + "'");
  }
  const Transposition t(rho.dim(), i - 1, j - 1);

  Lemma6Config lc;
  lc.seed = o.seed;
  lc.budget = budget;
  Lemma6Check check;
  try {
    check = lemma6_check(rho, t, lc);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RankMismatch || e.kind() == ErrorKind::DegenerateTrace) {
      err << "not applicable: " << e.what() << "\n";
      return kExitNotApplicable;
    }
    throw;
  }
  if (!check.applicable()) {
    err << "not applicable: " << check.failed << "\n";
    return kExitNotApplicable;
  }
  const Rank2Solution sol = rank2_roof(rho, t);
  rec.outputs["x1"] = sol.x1;
  rec.outputs["x3"] = sol.x3;
  rec.outputs["y"] = sol.y;
  rec.outputs["R"] = sol.r_value;
  rec.outputs["H"] = sol.h_value;
  rec.outputs["oracle"] = check.oracle;
  rec.outputs["oracle_gap"] = std::abs(sol.r_value - check.oracle);
  rec.outputs["pair"] = Json::array({state_json(sol.optimal_pair.first), state_json(sol.optimal_pair.second)});

  std::ostringstream text;
  if (o.format == "json") {
    text << to_json(rec).dump(2) << "\n";
  } else {
    text << "swap        (" << t.first() + 1 << "," << t.second() + 1 << ")\n"
         << "x1          " << fmt12(sol.x1) << "\n"
         << "x3          " << fmt12(sol.x3) << "\n"
         << "y           " << fmt12(sol.y) << "\n"
         << "R           " << fmt12(sol.r_value) << "\n"
         << "H           " << fmt12(sol.h_value) << "\n"
         << "oracle      " << fmt12(check.oracle) << "\n"
         << "oracle_gap  " << fmt12(std::abs(sol.r_value - check.oracle)) << "\n";
    for (const State* s : {&sol.optimal_pair.first, &sol.optimal_pair.second}) {
      text << "pair        [";
      for (Eigen::Index k = 0; k < s->dim(); ++k) text << (k ? " " : "") << format_complex(s->vector()(k));
      text << "]\n";
    }
  }
  emit(text.str(), o.out_path, out);
  return kExitOk;
}

int cmd_verify(const std::string& suite, int instances, int budget, const CommonOptions& o, std::ostream& out) {
  std::vector<std::string> tags;
  if (suite == "all") tags = lemma_tags();
  else tags = {suite};

  VerifyConfig vc;
  vc.roof = o.optimizer();
  vc.roof.restarts = std::min(o.restarts, 12);
  vc.instances = instances;
  vc.oracle_budget = budget;

  RunRecord rec;
  rec.command = "verify";
  rec.version = library_version();
  rec.config = o.to_json();
  rec.config["suite"] = suite;
  rec.config["instances"] = instances;
  rec.config["budget"] = budget;
  rec.input_fingerprint = fingerprint(suite);

  Json checks = Json::array();
  std::ostringstream table;
  bool all = true;
  for (const auto& tag : tags) {
    const OracleReport r = verify_lemma(tag, vc, o.seed);
    for (const auto& c : r.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%-6s %-4s %-50s gap=%-12s tol=%-8s n=%d\n", tag.c_str(),
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), fmt12(c.gap).c_str(), fmt12(c.tolerance).c_str(),
                    c.samples);
      table << line;
      Json j;
      j["tag"] = tag;
      j["check"] = c.name;
      j["pass"] = c.pass;
      j["gap"] = c.gap;
      j["tolerance"] = c.tolerance;
      j["seed"] = o.seed;
      j["samples"] = c.samples;
      checks.push_back(j);
    }
    all = all && r.pass();
  }
  rec.outputs["checks"] = checks;
  rec.outputs["pass"] = all;

  if (o.format == "json") {
    emit(to_json(rec).dump(2) + "\n", o.out_path, out);
  } else {
    out << table.str() << (all ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    if (o.out_path.empty()) out << to_json(rec).dump() << "\n";
    else emit(to_json(rec).dump(2) + "\n", o.out_path, out);
  }
  return all ? kExitOk : kExitVerifyFailed;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::UnknownTag:
      return kExitUsage;
    case ErrorKind::RankMismatch:
    case ErrorKind::DegenerateTrace:
    case ErrorKind::DegenerateFrame:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotHexagonRegime:
    case ErrorKind::NoSignChange:
      return kExitNotApplicable;
    default:
      return kExitInvalidInput;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex roof and subalgebra entropy toolkit", "roofkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  CommonOptions compute_opts;
  std::string compute_file;
  CLI::App* compute = app.add_subcommand("compute", "R, H and an optimal ensemble for a density matrix file");
  compute->add_option("matrix", compute_file, "Matrix file")->required();
  add_common(compute, compute_opts, "text");

  CommonOptions scan_opts;
  ScanOptions scan_args;
  CLI::App* scan = app.add_subcommand("scan", "Sweep the permutation-symmetric family over z");
  scan->add_option("--family", scan_args.family)->check(CLI::IsMember({"symmetric"}));
  scan->add_option("--d", scan_args.d, "Dimension");
  scan->add_option("--z-lo", scan_args.z_lo, "Lower end of the z range");
  scan->add_option("--z-hi", scan_args.z_hi, "Upper end of the z range");
  scan->add_option("--steps", scan_args.steps, "Number of z values")->check(CLI::PositiveNumber);
  scan->add_option("--refine-tol", scan_args.refine_tol, "Bisection tolerance for z*")->check(CLI::PositiveNumber);
  add_common(scan, scan_opts, "csv");

  CommonOptions rank2_opts;
  std::string rank2_file;
  std::string swap;
  int rank2_budget = 1000;
  CLI::App* rank2 = app.add_subcommand("rank2", "Closed-form roof of a swap-invariant rank-two state");
  rank2->add_option("matrix", rank2_file, "Matrix file")->required();
  rank2->add_option("--swap", swap, "Swapped basis indices i,j (1-based)")->required();
  rank2->add_option("--budget", rank2_budget, "Oracle isometry samples")->check(CLI::PositiveNumber);
  add_common(rank2, rank2_opts, "text");

  CommonOptions verify_opts;
  std::string suite;
  int verify_instances = 0;
  int verify_budget = 1000;
  CLI::App* verify = app.add_subcommand("verify", "Run a lemma property suite against the oracles");
  verify->add_option("suite", suite, "L1, L4, L5, L6, A3, A5, TRP, RELS1 or all")->required();
  verify->add_option("--instances", verify_instances, "Instances per suite (0 = suite default)");
  verify->add_option("--budget", verify_budget, "Oracle isometry samples")->check(CLI::PositiveNumber);
  add_common(verify, verify_opts, "text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (*compute) {
      code = cmd_compute(compute_file, compute_opts, out);
    } else if (*scan) {
      code = cmd_scan(scan_args, scan_opts, out);
    } else if (*rank2) {
      code = cmd_rank2(rank2_file, swap, rank2_budget, rank2_opts, out, err);
    } else if (*verify) {
      const auto& tags = lemma_tags();
      if (suite != "all" && std::find(tags.begin(), tags.end(), suite) == tags.end()) {
        err << "unknown suite '" << suite << "'\n" << verify->help();
        return kExitUsage;
      }
      code = cmd_verify(suite, verify_instances, verify_budget, verify_opts, out);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "# wall_time_s=" << fmt12(secs) << "\n";
  return code;
}

}  // namespace roofkit
