// shg_lab: experiment runner for the quadratic Schrodinger system on S^2.
// Each run writes <out>/<subcommand>.csv and <out>/<subcommand>.json.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shg/shg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace shg;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(std::int64_t x) { return std::to_string(x); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> r) { rows.push_back(std::move(r)); }

  void write(const fs::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

// All options; each subcommand registers the ones it reads.
struct Options {
  int band_limit = 16;
  std::vector<std::int64_t> sigma{1, 4};
  double alpha = 0.5;
  std::vector<double> eps1{1.0, 0.0};
  std::vector<double> eps2{1.0, 0.0};
  std::vector<int> signs{1, 1};
  double time = 0.5;
  double dt = 1e-3;
  std::vector<std::int64_t> dyadic_n{1, 2, 4, 8};
  std::vector<std::int64_t> dyadic_l{1, 2, 4, 8};
  std::vector<int> degrees{4, 8, 16};
  int trials = 4;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  bool require_square = false;
  int dim = 2;
  double amplitude = 1.0;
  double decay = 0.5;
  std::string solver = "splitstep";
  std::string substep = "galerkin";
  std::int64_t sample_every = 10;
  std::int64_t panels = 0;
  int max_iter = 50;
  double tol = 1e-12;
  std::string sign = "plus";
  int extra_time_nodes = 0;
  double r = 4.0;
  double B = 1.0;
  double gn_tol = 1e-6;
};

int env_workers() {
  const char* s = std::getenv("SHG_WORKERS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long w = std::strtol(s, &end, 10);
  if (*end != '\0' || w < 1 || w > 1024) throw ConfigError("SHG_WORKERS must be an integer in [1, 1024]");
  return static_cast<int>(w);
}

std::uint64_t need_seed(const Options& o) {
  if (!o.seed) throw ConfigError("--seed is required for this subcommand");
  return *o.seed;
}

SigmaRational sigma_of(const Options& o) { return SigmaRational(o.sigma.at(0), o.sigma.at(1)); }

EvolutionParams params_of(const Options& o) {
  EvolutionParams p;
  p.beta = o.sigma.at(0);
  p.theta = o.sigma.at(1);
  p.alpha = o.alpha;
  p.eps1 = cplx(o.eps1.at(0), o.eps1.at(1));
  p.eps2 = cplx(o.eps2.at(0), o.eps2.at(1));
  p.sign_v = o.signs.at(0);
  p.sign_u = o.signs.at(1);
  p.validate();
  return p;
}

// ---- option registration ----

void opt_band_limit(CLI::App* a, Options& o) { a->add_option("--band-limit", o.band_limit, "band limit K")->capture_default_str(); }
void opt_seed(CLI::App* a, Options& o) { a->add_option("--seed", o.seed, "RNG seed"); }
void opt_sigma(CLI::App* a, Options& o) {
  a->add_option("--sigma", o.sigma, "sigma as two integers: beta theta")->expected(2)->capture_default_str();
}
void opt_trials(CLI::App* a, Options& o) { a->add_option("--trials", o.trials, "trials per cell")->capture_default_str(); }
void opt_dyadic(CLI::App* a, Options& o) {
  a->add_option("--dyadic-n", o.dyadic_n, "dyadic N list")->delimiter(',')->capture_default_str();
  a->add_option("--dyadic-l", o.dyadic_l, "dyadic L list")->delimiter(',')->capture_default_str();
}

void opt_evolution(CLI::App* a, Options& o) {
  opt_band_limit(a, o);
  opt_sigma(a, o);
  opt_seed(a, o);
  a->add_option("--alpha", o.alpha)->capture_default_str();
  a->add_option("--eps1", o.eps1, "re im")->expected(2)->capture_default_str();
  a->add_option("--eps2", o.eps2, "re im")->expected(2)->capture_default_str();
  a->add_option("--signs", o.signs, "dispersion signs s_v s_u")->expected(2)->capture_default_str();
  a->add_option("--time", o.time, "final time T")->capture_default_str();
  a->add_option("--dt", o.dt, "split-step size")->capture_default_str();
  a->add_option("--amplitude", o.amplitude, "L2 norm of each initial component")->capture_default_str();
  a->add_option("--decay", o.decay, "initial spectrum ~ exp(-decay k)")->capture_default_str();
  a->add_option("--solver", o.solver)->check(CLI::IsMember({"splitstep", "picard"}))->capture_default_str();
  a->add_option("--substep", o.substep)->check(CLI::IsMember({"galerkin", "pointwise"}))->capture_default_str();
  a->add_option("--sample-every", o.sample_every, "record every n-th step / panel")->capture_default_str();
  a->add_option("--panels", o.panels, "Picard panels (0: recommended)")->capture_default_str();
  a->add_option("--max-iter", o.max_iter, "Picard sweeps")->capture_default_str();
  a->add_option("--tol", o.tol, "Picard tolerance")->capture_default_str();
}

json evolution_config(const Options& o) {
  return json{{"band_limit", o.band_limit}, {"sigma", o.sigma},   {"alpha", o.alpha},
              {"eps1", o.eps1},             {"eps2", o.eps2},     {"signs", o.signs},
              {"time", o.time},             {"dt", o.dt},         {"amplitude", o.amplitude},
              {"decay", o.decay},           {"solver", o.solver}, {"substep", o.substep},
              {"sample_every", o.sample_every}, {"panels", o.panels}, {"max_iter", o.max_iter},
              {"tol", o.tol}};
}

// ---- runs ----

struct Output {
  Table table;
  json config;
  json results;
  std::optional<std::uint64_t> seed;
};

Output run_selftest(const Options& o) {
  Output out;
  const std::uint64_t seed = o.seed.value_or(1);
  out.seed = seed;
  out.config = {{"band_limit", o.band_limit}, {"seed", seed}};
  const int kk = o.band_limit;
  detail::require(kk >= 1, "selftest: --band-limit must be >= 1");
  SphereGrid g(kk);
  const auto f = random_corpus(1, kk, seed)[0];
  const GridField gf = synthesize(f, g);

  out.table.header = {"check", "value", "tolerance", "pass"};
  bool all = true;
  auto check = [&](const std::string& name, double value, double tol) {
    const bool ok = std::isfinite(value) && value <= tol;
    all = all && ok;
    out.table.add({name, num(value), num(tol), ok ? "1" : "0"});
  };

  const auto back = analyze(gf, g);
  double rt = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) rt = std::max(rt, std::abs(back.coefficients()[i] - f.coefficients()[i]));
  check("round_trip_max_error", rt, 1e-10);
  check("parseval_relative_error", std::abs(grid_inner(gf, gf, g).real() - f.norm_squared()) / f.norm_squared(), 1e-10);

  const auto y00 = synthesize(SpectralField::unit(kk, 0, 0), g);
  double c0 = 0.0;
  for (auto x : y00.values()) c0 = std::max(c0, std::abs(x - 1.0 / std::sqrt(4.0 * std::numbers::pi)));
  check("constant_mode_value", c0, 1e-14);

  SpectralField sum(kk);
  double idem = 0.0;
  for (auto n : dyadic_cover(kk)) {
    const auto p = dyadic_project(f, n);
    sum += p;
    idem = std::max(idem, (dyadic_project(p, n) - p).norm());
  }
  check("dyadic_partition_error", (sum - f).norm(), 0.0);
  check("dyadic_idempotence_error", idem, 0.0);

  double orth = 0.0;
  for (int k = 0; k <= kk; ++k)
    orth = std::max(orth, std::abs(l2_inner(project_degree(f, k), project_degree(f, (k + 1) % (kk + 1)))));
  check("degree_orthogonality", orth, 0.0);

  const auto gc = synthesize(conjugate(f), g);
  double conj_err = 0.0;
  for (std::size_t i = 0; i < gc.size(); ++i) conj_err = std::max(conj_err, std::abs(gc.data()[i] - std::conj(gf.data()[i])));
  check("conjugation_error", conj_err, 1e-12);

  const auto pf = linear_propagate(f, GroupSpec{4.0, 2.0}, 0.37);
  check("propagation_norm_error", std::abs(pf.norm() - f.norm()), 1e-14);
  const auto twice = linear_propagate(linear_propagate(f, GroupSpec{4.0, 2.0}, 0.2), GroupSpec{4.0, 2.0}, 0.17);
  check("group_law_error", (twice - pf).norm(), 1e-12);

  out.results = {{"checks", out.table.rows.size()}, {"all_pass", all}};
  return out;
}

Trajectory evolve_trajectory(const Options& o, const EvolutionParams& p, const SphereGrid& g, std::uint64_t seed) {
  const auto v0 = smooth_random_field(o.band_limit, detail::stream_seed(seed, 1), o.amplitude, o.decay);
  const auto u0 = smooth_random_field(o.band_limit, detail::stream_seed(seed, 2), o.amplitude, o.decay);
  detail::require(o.sample_every >= 1, "--sample-every must be >= 1");
  if (o.solver == "picard") {
    PicardOptions po;
    po.panels = o.panels;
    po.max_iter = o.max_iter;
    po.tol = o.tol;
    po.sample_every = o.sample_every;
    return picard_iterate(v0, u0, p, o.time, po, g);
  }
  SplitStepOptions so;
  so.substep = o.substep == "pointwise" ? NonlinearSubstep::pointwise : NonlinearSubstep::galerkin;
  so.sample_every = o.sample_every;
  return splitstep_evolve(v0, u0, p, o.time, o.dt, g, SpectrumModel::sphere(2), so);
}

Output run_evolve(const Options& o) {
  Output out;
  const auto seed = need_seed(o);
  out.seed = seed;
  out.config = evolution_config(o);
  out.config["seed"] = seed;
  const auto p = params_of(o);
  detail::require(o.band_limit >= 0, "--band-limit must be >= 0");
  SphereGrid g(o.band_limit);
  const auto traj = evolve_trajectory(o, p, g, seed);
  const auto rep = conservation_report(traj, p, g);
  out.table.header = {"t", "mass", "energy", "h1_squared", "norm_v", "norm_u"};
  for (std::size_t i = 0; i < traj.size(); ++i)
    out.table.add({num(traj.times[i]), num(rep.mass[i]), num(rep.energy[i]), num(h1_norm_squared(traj.v[i], traj.u[i])),
                   num(traj.v[i].norm()), num(traj.u[i].norm())});
  out.results = {{"solver", traj.solver},
                 {"steps", traj.steps},
                 {"step_size", traj.step_size},
                 {"iterations", traj.iterations},
                 {"last_residual", traj.last_residual},
                 {"samples", traj.size()},
                 {"mass_drift", rep.mass_drift},
                 {"energy_drift", rep.energy_drift},
                 {"mass_conservative", rep.mass_conservative},
                 {"energy_conservative", rep.energy_conservative}};
  return out;
}

Output run_count(const Options& o) {
  Output out;
  out.config = {{"dyadic_n", o.dyadic_n}, {"dyadic_l", o.dyadic_l}, {"sigma", o.sigma},
                {"dim", o.dim},           {"require_square", o.require_square}};
  const auto s = sigma_of(o);
  if (o.require_square && !s.is_perfect_square_pair())
    throw ConfigError("sigma = " + s.str() + " is not a ratio of perfect squares (--require-square)");
  detail::require(o.dim >= 2, "--dim must be >= 2");
  const auto model = SpectrumModel::sphere(o.dim);
  out.table.header = {"N", "L", "m", "count"};
  json cells = json::array();
  for (auto n : o.dyadic_n)
    for (auto l : o.dyadic_l) {
      const auto r = counting_table(n, l, s, model);
      for (std::int64_t m = r.m_lo; m <= r.m_hi; ++m) out.table.add({num(n), num(l), num(m), num(r.at(m))});
      json c = {{"N", n}, {"L", l}, {"m_lo", r.m_lo}, {"m_hi", r.m_hi}, {"sup", r.sup}, {"argmax", r.argmax}, {"total", r.total}};
      if (s.is_perfect_square_pair()) {
        const auto chk = verify_transformed_equation(n, l, s, o.dim);
        c["integer_inequality_ok"] = chk.ok;
        c["pairs_checked"] = chk.checked;
      }
      cells.push_back(c);
    }
  out.results = {{"cells", cells}};
  return out;
}

json fit_json(const FitResult& f) {
  json pts = json::array();
  for (const auto& p : f.points) pts.push_back({{"min", p.min_nl}, {"log2_min", p.log2_min}, {"log2_ratio", p.log2_ratio}});
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"points", pts}};
}

Output run_strichartz(const Options& o) {
  Output out;
  const auto seed = need_seed(o);
  out.seed = seed;
  ScanConfig cfg;
  cfg.n_list = o.dyadic_n;
  cfg.l_list = o.dyadic_l;
  cfg.trials = o.trials;
  cfg.seed = seed;
  cfg.sigma = sigma_of(o);
  detail::require(o.sign == "plus" || o.sign == "minus", "--sign must be plus or minus");
  cfg.sign = o.sign == "plus" ? ConjSign::plus : ConjSign::minus;
  cfg.extra_time_nodes = o.extra_time_nodes;
  cfg.workers = env_workers();
  out.config = {{"dyadic_n", o.dyadic_n}, {"dyadic_l", o.dyadic_l}, {"sigma", o.sigma},   {"trials", o.trials},
                {"seed", seed},           {"sign", o.sign},         {"extra_time_nodes", o.extra_time_nodes},
                {"workers", cfg.workers}};
  const auto cells = strichartz_scan(cfg);
  out.table.header = {"N", "L", "trial", "time_nodes", "ratio"};
  for (const auto& c : cells) out.table.add({num(c.n_dyadic), num(c.l_dyadic), num(std::int64_t{c.trial}), num(std::int64_t{c.time_nodes}), num(c.ratio)});
  out.results = {{"cells", cells.size()}};
  if (cells.size() > 1) {
    try {
      out.results["fit"] = fit_json(scaling_fit(cells));
    } catch (const ConfigError& e) {
      out.results["fit"] = nullptr;
      out.results["fit_note"] = e.what();
    }
  }
  return out;
}

Output run_projector(const Options& o) {
  Output out;
  const auto seed = need_seed(o);
  out.seed = seed;
  out.config = {{"degrees", o.degrees}, {"trials", o.trials}, {"seed", seed}};
  out.table.header = {"k", "l", "ratio"};
  std::vector<ScanCell> cells;
  for (int k : o.degrees) {
    detail::require(k >= 1, "--degrees entries must be >= 1");
    SphereGrid g(k);
    const double r = projector_bilinear_ratio(k, k, o.trials, seed, g);
    out.table.add({num(std::int64_t{k}), num(std::int64_t{k}), num(r)});
    cells.push_back({k, k, 0, 0, r});
  }
  out.results = {{"cells", cells.size()}};
  if (cells.size() > 1) out.results["fit"] = fit_json(scaling_fit(cells));
  return out;
}

Output run_gn(const Options& o) {
  Output out;
  const auto seed = need_seed(o);
  out.seed = seed;
  out.config = {{"band_limit", o.band_limit}, {"trials", o.trials}, {"seed", seed}, {"r", o.r}, {"B", o.B}, {"tol", o.gn_tol}};
  theta_r(2, o.r);
  detail::require(o.band_limit >= 1, "--band-limit must be >= 1");
  SphereGrid g(o.band_limit);
  const auto corpus = random_corpus(o.trials, o.band_limit, seed);
  out.table.header = {"index", "ratio", "lhs", "grad_term", "mass_term"};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto x = gn_ratio(corpus[i], o.r, g);
    out.table.add({num(static_cast<std::int64_t>(i)), num(x.ratio), num(x.lhs), num(x.grad_term), num(x.mass_term)});
  }
  const auto env = gn_envelope(corpus, o.r, g);
  const auto cal = calibrate_gn(corpus, o.r, o.B, g, SpectrumModel::sphere(2), o.gn_tol);
  out.results = {{"theta", theta_r(2, o.r)},    {"max_ratio", env.max_ratio}, {"argmax", env.argmax},
                 {"A", cal.A},                   {"B", cal.B},                 {"bisection_iterations", cal.iterations},
                 {"samples", cal.samples}};
  return out;
}

Output run_bound(const Options& o) {
  Output out;
  const auto seed = need_seed(o);
  out.seed = seed;
  out.config = evolution_config(o);
  out.config["seed"] = seed;
  out.config["B"] = o.B;
  const auto p = params_of(o);
  detail::require(o.band_limit >= 0, "--band-limit must be >= 0");
  SphereGrid g(o.band_limit);
  const auto traj = evolve_trajectory(o, p, g, seed);
  const auto rep = apriori_confinement(traj, p, o.B, g);
  out.table.header = {"t", "h1_squared", "bound", "confined"};
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    out.table.add({num(rep.times[i]), num(rep.h1[i]), num(rep.bound), rep.h1[i] <= rep.bound ? "1" : "0"});
  out.results = {{"A", rep.A},   {"B", rep.B},           {"M0", rep.M0},          {"E0", rep.E0},
                 {"bound", rep.bound}, {"max_h1_squared", rep.max_h1}, {"confined", rep.confined}};
  return out;
}

void write_outputs(const std::string& name, const Options& o, const Output& r, double wall) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  r.table.write(dir / (name + ".csv"));
  json summary = {{"subcommand", name},
                  {"version", version_string},
                  {"seed", r.seed ? json(*r.seed) : json(nullptr)},
                  {"wall_time_s", wall},
                  {"config", r.config},
                  {"results", r.results},
                  {"table", (dir / (name + ".csv")).string()}};
  summary["config"]["out"] = o.out;
  std::ofstream os(dir / (name + ".json"), std::ios::binary);
  if (!os) throw ConfigError("cannot open " + (dir / (name + ".json")).string() + " for writing");
  os << summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shg_lab: spectral laboratory for the quadratic Schrodinger system on S^2"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);
  Options o;

  auto* selftest = app.add_subcommand("selftest", "transform and projector invariants");
  opt_band_limit(selftest, o);
  opt_seed(selftest, o);

  auto* evolve = app.add_subcommand("evolve", "evolve random smooth data; conservation report");
  opt_evolution(evolve, o);

  auto* count = app.add_subcommand("count", "resonance counting sweep");
  opt_dyadic(count, o);
  opt_sigma(count, o);
  count->add_option("--dim", o.dim, "sphere dimension")->capture_default_str();
  count->add_flag("--require-square", o.require_square, "reject sigma unless beta, theta are perfect squares");

  auto* strichartz = app.add_subcommand("strichartz", "bilinear evolution scan and scaling fit");
  opt_dyadic(strichartz, o);
  opt_sigma(strichartz, o);
  opt_trials(strichartz, o);
  opt_seed(strichartz, o);
  strichartz->add_option("--sign", o.sign, "plus or minus")->capture_default_str();
  strichartz->add_option("--extra-time-nodes", o.extra_time_nodes)->capture_default_str();

  auto* projector = app.add_subcommand("projector-bilinear", "random harmonic products, k = l");
  projector->add_option("--degrees", o.degrees, "degree list")->delimiter(',')->capture_default_str();
  opt_trials(projector, o);
  opt_seed(projector, o);

  auto* gn = app.add_subcommand("gn", "Gagliardo-Nirenberg envelope and calibration");
  opt_band_limit(gn, o);
  opt_trials(gn, o);
  opt_seed(gn, o);
  gn->add_option("--r", o.r, "Lebesgue exponent")->capture_default_str();
  gn->add_option("--B", o.B, "fixed lower-order constant")->capture_default_str();
  gn->add_option("--tol", o.gn_tol, "bisection tolerance")->capture_default_str();

  auto* bound = app.add_subcommand("bound", "a-priori H1 bound against a trajectory");
  opt_evolution(bound, o);
  bound->add_option("--B", o.B, "fixed lower-order constant")->capture_default_str();

  for (auto* s : {selftest, evolve, count, strichartz, projector, gn, bound})
    s->add_option("--out", o.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Output r;
    if (name == "selftest") r = run_selftest(o);
    else if (name == "evolve") r = run_evolve(o);
    else if (name == "count") r = run_count(o);
    else if (name == "strichartz") r = run_strichartz(o);
    else if (name == "projector-bilinear") r = run_projector(o);
    else if (name == "gn") r = run_gn(o);
    else r = run_bound(o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(name, o, r, wall);
    if (r.results.contains("all_pass") && !r.results["all_pass"].get<bool>()) {
      std::cerr << name << ": numerical failure: invariant check failed (see " << name << ".csv)\n";
      return exit_numerical;
    }
    std::printf("%s: ok (%.3f s)\n", name.c_str(), wall);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << name << ": configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericalFailure& e) {
    std::cerr << name << ": numerical failure: " << e.what() << " (t = " << num(e.time())
              << ", residual = " << num(e.residual()) << ")\n";
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << name << ": error: " << e.what() << '\n';
    return 1;
  }
}
