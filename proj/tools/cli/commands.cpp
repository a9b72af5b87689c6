#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "bellfilter/bellfilter.hpp"
#include "json.hpp"

namespace bellfilter::cli {
namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.12g}", v); }

json euler_json(const EulerAngles& e) { return json::array({e.alpha, e.beta, e.gamma}); }

json matrix2_json(const Matrix2c& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 2; ++i) {
    re.push_back(json::array({m(i, 0).real(), m(i, 1).real()}));
    im.push_back(json::array({m(i, 0).imag(), m(i, 1).imag()}));
  }
  return json{{"re", re}, {"im", im}};
}

json window_json(const CapWindow& w) {
  return json{{"a", w.a}, {"b", w.b}, {"c", w.c}, {"d", w.d}};
}

json vector_json(const Eigen::Vector3d& v) { return json::array({v(0), v(1), v(2)}); }

std::string describe_filter(const FilterParams& fp) {
  return fmt::format("x={} y={} euler_A=({}, {}, {}) euler_B=({}, {}, {})", num(fp.x),
                     num(fp.y), num(fp.euler_a.alpha), num(fp.euler_a.beta),
                     num(fp.euler_a.gamma), num(fp.euler_b.alpha), num(fp.euler_b.beta),
                     num(fp.euler_b.gamma));
}

std::string describe_window(const CapWindow& w) {
  return fmt::format("a={} b={} c={} d={}", num(w.a), num(w.b), num(w.c), num(w.d));
}

void append_filter(std::vector<double>& extra, const FilterParams& fp) {
  extra.insert(extra.end(), {fp.x, fp.y, fp.euler_a.alpha, fp.euler_a.beta, fp.euler_a.gamma,
                             fp.euler_b.alpha, fp.euler_b.beta, fp.euler_b.gamma});
}

void append_window(std::vector<double>& extra, const CapWindow& w) {
  extra.insert(extra.end(), {w.a, w.b, w.c, w.d});
}

OptimizerOptions optimizer_from(int restarts, std::uint64_t seed) {
  OptimizerOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

VertesiSearchOptions search_from(int quad_n) {
  VertesiSearchOptions s;
  s.fine = {quad_n, quad_n};
  return s;
}

struct AnalyzeArgs {
  double werner = 0.0;
  std::vector<double> rho1;
  double rho2 = 0.0;
  std::string file;
  bool filtered = false;
  bool vertesi = false;
  int quad_n = 24;
  int restarts = 16;
  std::uint64_t seed = 0;
  bool json = false;
  std::vector<double> window;
  std::vector<double> strengths;
};

double bisect_bracket(const std::function<bool(double)>& violating, double lo, double hi,
                      bool lo_state, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (violating(mid) == lo_state)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

int cmd_analyze(const AnalyzeArgs& args, const CLI::App& app, std::ostream& out) {
  std::string source;
  std::optional<DensityMatrix> rho;
  if (app.count("--werner")) {
    rho = werner(args.werner);
    source = fmt::format("werner(p={})", num(args.werner));
  } else if (app.count("--rho1")) {
    rho = bellfilter::rho1(args.rho1[0], args.rho1[1]);
    source = fmt::format("rho1(p={}, r={})", num(args.rho1[0]), num(args.rho1[1]));
  } else if (app.count("--rho2")) {
    rho = bellfilter::rho2(args.rho2);
    source = fmt::format("rho2(p={})", num(args.rho2));
  } else {
    rho = load_state_file(args.file);
    source = "file " + args.file;
  }

  const OptimizerOptions opts = optimizer_from(args.restarts, args.seed);
  VertesiSearchOptions search = search_from(args.quad_n);
  if (!args.window.empty())
    search.fixed_window = CapWindow{args.window[0], args.window[1], args.window[2],
                                    args.window[3]};
  if (!args.strengths.empty())
    search.fixed_strengths = std::make_pair(args.strengths[0], args.strengths[1]);

  json report;
  report["source"] = source;
  report["state"] = json::parse(state_to_json(*rho));

  const ExtendedCorrelation tt = correlation_data(*rho);
  const ChshResult chsh = mvci(tt.T());
  const double ppt = ppt_min_eigenvalue(*rho);

  json jc{{"value", chsh.value},
          {"tau1", chsh.tau1},
          {"tau2", chsh.tau2},
          {"violating", chsh.violating},
          {"teleportation_fidelity_bound", teleportation_fidelity_bound(chsh.value)},
          {"holevo_bound", chsh.value >= kChshClassicalBound
                               ? json(holevo_bound(chsh.value))
                               : json(nullptr)}};
  std::optional<ChshSettings> settings;
  if (chsh.tau1 >= 1e-12) {
    settings = optimal_chsh_settings(tt.T());
    jc["settings"] = {{"a1", vector_json(settings->a1)},
                      {"a2", vector_json(settings->a2)},
                      {"b1", vector_json(settings->b1)},
                      {"b2", vector_json(settings->b2)}};
  }
  report["chsh"] = jc;
  report["ppt_min_eigenvalue"] = ppt;

  std::optional<FilterResult> filtered;
  if (args.filtered) {
    filtered = maximize_filtered_mvci(*rho, opts);
    const FilterParams& fp = filtered->params;
    report["chsh_filtered"] = {
        {"value", filtered->value},
        {"violating", filtered->violating()},
        {"x", fp.x},
        {"y", fp.y},
        {"euler_a", euler_json(fp.euler_a)},
        {"euler_b", euler_json(fp.euler_b)},
        {"filter_a", matrix2_json(filter_operator(fp.x, fp.euler_a))},
        {"filter_b", matrix2_json(filter_operator(fp.y, fp.euler_b))},
        {"restarts_used", filtered->restarts_used},
        {"converged", filtered->converged},
        {"teleportation_fidelity_bound", teleportation_fidelity_bound(
                                             std::min(filtered->value, 2.0 * std::sqrt(2.0)))},
        {"holevo_bound", filtered->value >= kChshClassicalBound
                             ? json(holevo_bound(std::min(filtered->value, 2.0 * std::sqrt(2.0))))
                             : json(nullptr)}};
  }

  std::optional<VertesiResult> vertesi_raw, vertesi_filtered;
  if (args.vertesi) {
    vertesi_raw = maximize_vertesi_bound(*rho, false, opts, search);
    report["vertesi"] = {{"bound", vertesi_raw->bound},
                         {"violating", vertesi_raw->violating},
                         {"window", window_json(vertesi_raw->window)}};
    if (args.filtered) {
      vertesi_filtered = maximize_vertesi_bound(*rho, true, opts, search);
      const FilterParams& fp = *vertesi_filtered->filter;
      report["vertesi_filtered"] = {{"bound", vertesi_filtered->bound},
                                    {"violating", vertesi_filtered->violating},
                                    {"window", window_json(vertesi_filtered->window)},
                                    {"x", fp.x},
                                    {"y", fp.y},
                                    {"euler_a", euler_json(fp.euler_a)},
                                    {"euler_b", euler_json(fp.euler_b)},
                                    {"norm", vertesi_filtered->norm}};
    }
  }

  if (args.json) {
    out << report.dump(2) << '\n';
    return kExitOk;
  }

  fmt::print(out, "state: {}\n", source);
  fmt::print(out, "CHSH maximal violation: {} (tau1={} tau2={}) violating={}\n",
             num(chsh.value), num(chsh.tau1), num(chsh.tau2), chsh.violating ? "yes" : "no");
  if (settings)
    fmt::print(out, "  settings a1=({}) a2=({}) b1=({}) b2=({})\n",
               fmt::format("{:.6f}, {:.6f}, {:.6f}", settings->a1(0), settings->a1(1), settings->a1(2)),
               fmt::format("{:.6f}, {:.6f}, {:.6f}", settings->a2(0), settings->a2(1), settings->a2(2)),
               fmt::format("{:.6f}, {:.6f}, {:.6f}", settings->b1(0), settings->b1(1), settings->b1(2)),
               fmt::format("{:.6f}, {:.6f}, {:.6f}", settings->b2(0), settings->b2(1), settings->b2(2)));
  fmt::print(out, "PPT minimal eigenvalue: {} ({})\n", num(ppt),
             ppt < 0.0 ? "entangled" : "PPT");
  fmt::print(out, "teleportation fidelity bound: {}\n",
             num(teleportation_fidelity_bound(chsh.value)));
  if (chsh.value >= kChshClassicalBound)
    fmt::print(out, "Holevo bound: {}\n", num(holevo_bound(chsh.value)));
  else
    fmt::print(out, "Holevo bound: n/a (CHSH value below 2)\n");

  if (filtered) {
    fmt::print(out, "filtered CHSH maximal violation: {} violating={}\n", num(filtered->value),
               filtered->violating() ? "yes" : "no");
    fmt::print(out, "  filter {}\n", describe_filter(filtered->params));
    fmt::print(out, "  restarts={} converged={}\n", filtered->restarts_used,
               filtered->converged ? "yes" : "no");
  }
  if (vertesi_raw)
    fmt::print(out, "Vertesi lower bound: {} violating={} window {}\n", num(vertesi_raw->bound),
               vertesi_raw->violating ? "yes" : "no", describe_window(vertesi_raw->window));
  if (vertesi_filtered) {
    fmt::print(out, "filtered Vertesi lower bound: {} violating={} window {}\n",
               num(vertesi_filtered->bound), vertesi_filtered->violating ? "yes" : "no",
               describe_window(vertesi_filtered->window));
    fmt::print(out, "  filter {}\n", describe_filter(*vertesi_filtered->filter));
  }
  return kExitOk;
}

struct LhvArgs {
  double q = 0.45;
  std::int64_t n = 1000000;
  int pairs = 20;
  std::uint64_t seed = 7;
  double sigmas = 4.0;
  bool json = false;
};

int cmd_lhv(const LhvArgs& args, std::ostream& out) {
  const LhvModel model(args.q);
  if (args.pairs < 1) throw Error(ErrorCode::InvalidInput, "--pairs must be >= 1");

  LhvRng rng(args.seed);
  std::vector<DirectionPair> pairs;
  for (int i = 0; i < args.pairs; ++i) {
    Eigen::Vector3d a = random_unit_vector(rng);
    Eigen::Vector3d b = random_unit_vector(rng);
    pairs.emplace_back(a, b);
  }
  const LhvReport report = lhv_report(model, pairs, args.n, args.seed);
  const bool pass = report.within(args.sigmas);

  if (args.json) {
    out << json{{"q", args.q},
                {"n", args.n},
                {"pairs", args.pairs},
                {"seed", args.seed},
                {"max_abs_deviation", report.max_abs_deviation},
                {"max_sigma", report.max_sigma},
                {"threshold_sigma", args.sigmas},
                {"pass", pass}}
               .dump(2)
        << '\n';
  } else {
    fmt::print(out, "LHV model q={} trials={} pairs={} seed={}\n", num(args.q), args.n,
               args.pairs, args.seed);
    fmt::print(out, "max |simulated - quantum| = {}\n", num(report.max_abs_deviation));
    fmt::print(out, "max deviation in standard errors = {}\n", num(report.max_sigma));
    fmt::print(out, "{} at {} sigma\n", pass ? "PASS" : "FAIL", num(args.sigmas));
  }
  return pass ? kExitOk : kExitStatFail;
}

}  // namespace

int exit_code_for(const Error& e) {
  return is_numerical(e.code()) ? kExitNumerical : kExitValidation;
}

Family parse_family(const std::string& name) {
  if (name == "werner") return Family::Werner;
  if (name == "rho1") return Family::Rho1;
  if (name == "rho2") return Family::Rho2;
  throw Error(ErrorCode::InvalidInput, "unknown state family '" + name + "'");
}

Computation parse_computation(const std::string& name) {
  if (name == "chsh") return Computation::Chsh;
  if (name == "chsh-filtered") return Computation::ChshFiltered;
  if (name == "vertesi") return Computation::Vertesi;
  if (name == "vertesi-filtered") return Computation::VertesiFiltered;
  throw Error(ErrorCode::InvalidInput, "unknown computation '" + name + "'");
}

std::string to_string(Computation c) {
  switch (c) {
    case Computation::Chsh: return "chsh";
    case Computation::ChshFiltered: return "chsh-filtered";
    case Computation::Vertesi: return "vertesi";
    case Computation::VertesiFiltered: return "vertesi-filtered";
  }
  return "?";
}

DensityMatrix make_family_state(Family family, double p, double r) {
  switch (family) {
    case Family::Werner: return werner(p);
    case Family::Rho1: return rho1(p, r);
    case Family::Rho2: return rho2(p);
  }
  throw Error(ErrorCode::InvalidInput, "unknown family");
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.steps < 2) throw Error(ErrorCode::InvalidInput, "sweep needs at least 2 steps");
  if (!(spec.start < spec.stop))
    throw Error(ErrorCode::InvalidInput, "sweep needs start < stop");
  if (!(spec.onset_tolerance > 0.0))
    throw Error(ErrorCode::InvalidInput, "onset tolerance must be positive");
  // Both ends must be physical; interior points are checked as they are built.
  make_family_state(spec.family, spec.start, spec.r);
  make_family_state(spec.family, spec.stop, spec.r);
}

std::vector<std::string> extra_columns(Computation c) {
  const std::vector<std::string> filter{"x",       "y",      "alpha_a", "beta_a",
                                        "gamma_a", "alpha_b", "beta_b", "gamma_b"};
  const std::vector<std::string> window{"a", "b", "c", "d"};
  switch (c) {
    case Computation::Chsh: return {"tau1", "tau2"};
    case Computation::ChshFiltered: {
      std::vector<std::string> cols{"unfiltered"};
      cols.insert(cols.end(), filter.begin(), filter.end());
      return cols;
    }
    case Computation::Vertesi: return window;
    case Computation::VertesiFiltered: {
      std::vector<std::string> cols = window;
      cols.insert(cols.end(), filter.begin(), filter.end());
      return cols;
    }
  }
  return {};
}

SweepRow evaluate_point(const SweepSpec& spec, double param) {
  const DensityMatrix rho = make_family_state(spec.family, param, spec.r);
  SweepRow row;
  row.param = param;
  switch (spec.computation) {
    case Computation::Chsh: {
      const ChshResult c = mvci(rho);
      row.value = c.value;
      row.violating = c.violating;
      row.extra = {c.tau1, c.tau2};
      break;
    }
    case Computation::ChshFiltered: {
      const FilterResult f = maximize_filtered_mvci(rho, spec.optimizer);
      row.value = f.value;
      row.violating = f.violating();
      row.extra = {f.unfiltered};
      append_filter(row.extra, f.params);
      break;
    }
    case Computation::Vertesi:
    case Computation::VertesiFiltered: {
      const bool filtered = spec.computation == Computation::VertesiFiltered;
      const VertesiResult v = maximize_vertesi_bound(rho, filtered, spec.optimizer, spec.search);
      row.value = v.bound;
      row.violating = v.violating;
      append_window(row.extra, v.window);
      if (filtered) append_filter(row.extra, *v.filter);
      break;
    }
  }
  return row;
}

double bisect_onset(const std::function<bool(double)>& violating, double lo, double hi,
                    double tol) {
  const bool lo_state = violating(lo);
  if (lo_state == violating(hi))
    throw Error(ErrorCode::InvalidInput, "bisection endpoints do not bracket an onset");
  return bisect_bracket(violating, lo, hi, lo_state, tol);
}

SweepOutput run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  SweepOutput out;
  for (int i = 0; i < spec.steps; ++i) {
    const double t = static_cast<double>(i) / (spec.steps - 1);
    const double p = i + 1 == spec.steps ? spec.stop : spec.start + t * (spec.stop - spec.start);
    out.rows.push_back(evaluate_point(spec, p));
  }
  if (!spec.onset) return out;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].violating != out.rows[i - 1].violating) {
      // row states are already known, so only interior points are evaluated
      out.onset = bisect_bracket([&](double p) { return evaluate_point(spec, p).violating; },
                                 out.rows[i - 1].param, out.rows[i].param,
                                 out.rows[i - 1].violating, spec.onset_tolerance);
      break;
    }
  }
  return out;
}

void write_sweep_csv(const SweepSpec& spec, const SweepOutput& out, std::ostream& os) {
  os << "param,value,violating";
  for (const auto& c : extra_columns(spec.computation)) os << ',' << c;
  os << '\n';
  for (const SweepRow& row : out.rows) {
    os << num(row.param) << ',' << num(row.value) << ',' << (row.violating ? 1 : 0);
    for (double e : row.extra) os << ',' << num(e);
    os << '\n';
  }
  if (spec.onset) os << "# onset=" << (out.onset ? num(*out.onset) : std::string("none")) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximal CHSH violation and Vertesi lower bounds under local filtering",
               "bellfilter"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Analyze one two-qubit state");
  auto* source = an->add_option_group("state source");
  source->add_option("--werner", analyze.werner, "Werner state with parameter p");
  source->add_option("--rho1", analyze.rho1, "rho1 family: p r")->expected(2);
  source->add_option("--rho2", analyze.rho2, "rho2 family: p");
  source->add_option("--file", analyze.file, "JSON state file {\"re\": ..., \"im\": ...}");
  source->require_option(1);
  an->add_flag("--filtered", analyze.filtered, "Optimize over local filters");
  an->add_flag("--vertesi", analyze.vertesi, "Compute the Vertesi lower bound");
  an->add_option("--quad-n", analyze.quad_n, "Quadrature nodes per axis")
      ->check(CLI::Range(4, 256));
  an->add_option("--restarts", analyze.restarts, "Optimizer restarts")
      ->check(CLI::Range(0, 100000));
  an->add_option("--seed", analyze.seed, "Optimizer seed");
  an->add_option("--window", analyze.window, "Fix the Vertesi window: a b c d")->expected(4);
  an->add_option("--strengths", analyze.strengths, "Fix filter strengths for Vertesi: x y")
      ->expected(2);
  an->add_flag("--json", analyze.json, "Machine-readable output");

  SweepSpec sweep;
  std::string family = "werner", computation = "chsh", out_path;
  int sweep_quad_n = 24;
  bool no_onset = false;
  auto* sw = app.add_subcommand("sweep", "Sweep a state-family parameter and write CSV");
  sw->add_option("--family", family, "werner | rho1 | rho2")->required();
  sw->add_option("--r", sweep.r, "rho1 marginal parameter r");
  sw->add_option("--start", sweep.start, "First parameter value")->required();
  sw->add_option("--stop", sweep.stop, "Last parameter value")->required();
  sw->add_option("--steps", sweep.steps, "Number of rows (>= 2)")->required();
  sw->add_option("--compute", computation,
                 "chsh | chsh-filtered | vertesi | vertesi-filtered")
      ->required();
  sw->add_option("--quad-n", sweep_quad_n, "Quadrature nodes per axis")
      ->check(CLI::Range(4, 256));
  sw->add_option("--restarts", sweep.optimizer.restarts, "Optimizer restarts")
      ->check(CLI::Range(0, 100000));
  sw->add_option("--seed", sweep.optimizer.seed, "Optimizer seed");
  sw->add_option("--onset-tol", sweep.onset_tolerance, "Bisection tolerance for the onset");
  sw->add_flag("--no-onset", no_onset, "Skip onset bisection");
  sw->add_option("--out", out_path, "Output CSV path (default: stdout)");

  LhvArgs lhv;
  auto* lh = app.add_subcommand("lhv", "Monte-Carlo check of the LHV model for rho2");
  lh->add_option("--q", lhv.q, "Mixing weight q = -p, 0 < q <= 1/2");
  lh->add_option("--n", lhv.n, "Trials per direction pair");
  lh->add_option("--pairs", lhv.pairs, "Random direction pairs");
  lh->add_option("--seed", lhv.seed, "Random seed");
  lh->add_option("--sigmas", lhv.sigmas, "Pass threshold in standard errors");
  lh->add_flag("--json", lhv.json, "Machine-readable output");

  app.add_subcommand("version", "Print the version");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*an) return cmd_analyze(analyze, *source, out);
    if (*sw) {
      sweep.family = parse_family(family);
      sweep.computation = parse_computation(computation);
      sweep.search = search_from(sweep_quad_n);
      sweep.onset = !no_onset;
      const SweepOutput result = run_sweep(sweep);
      if (out_path.empty()) {
        write_sweep_csv(sweep, result, out);
      } else {
        std::ofstream file(out_path);
        if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + out_path);
        write_sweep_csv(sweep, result, file);
      }
      return kExitOk;
    }
    if (*lh) return cmd_lhv(lhv, out);
    fmt::print(out, "bellfilter {}\n", kVersion);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace bellfilter::cli
