// Command-line front end: kernel evaluation, verification sweeps, spectral
// admissibility verdicts, noise/solution simulation and continuity tables.
// Every command writes CSV/JSON plus a manifest.json carrying a hash of the
// resolved configuration, so runs are reproducible and auditable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dhwave/errors.hpp"
#include "dhwave/fourier.hpp"
#include "dhwave/hash.hpp"
#include "dhwave/kernel.hpp"
#include "dhwave/noise.hpp"
#include "dhwave/solver.hpp"
#include "dhwave/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dhwave;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- config

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> kv;

  void set(const std::string& k, const std::string& v) { kv[k] = v; }
  void set(const std::string& k, double v) { kv[k] = fmt(v); }
  void set(const std::string& k, std::int64_t v) { kv[k] = std::to_string(v); }

  std::string canonical() const {
    std::string s = "command=" + command + "\nversion=" + kVersion + "\n";
    for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
    return s;
  }
  std::uint64_t hash() const { return fnv1a(canonical()); }
};

struct OutputSink {
  fs::path dir;
  RunConfig cfg;
  std::vector<std::string> files;

  explicit OutputSink(const std::string& out, RunConfig c)
      : dir(out), cfg(std::move(c)) {
    fs::create_directories(dir);
  }

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    files.push_back(name);
    std::ofstream f(dir / name, std::ios::binary);  // LF line endings
    f.precision(17);
    f << "# config_hash=" << cfg.hash() << " version=" << kVersion << "\n";
    f << header << "\n";
    return f;
  }

  void write_json(const std::string& name, json j) {
    files.push_back(name);
    j["config_hash"] = cfg.hash();
    j["version"] = kVersion;
    std::ofstream f(dir / name, std::ios::binary);
    f << j.dump(2) << "\n";
  }

  void finish() {
    json m;
    m["version"] = kVersion;
    m["command"] = cfg.command;
    m["config"] = cfg.kv;
    m["config_hash"] = cfg.hash();
    m["outputs"] = files;
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }
};

int verify_manifest(const std::string& out) {
  std::ifstream f(fs::path(out) / "manifest.json");
  if (!f) {
    std::cerr << "verify-manifest: no manifest in " << out << "\n";
    return 1;
  }
  json m = json::parse(f);
  RunConfig cfg;
  cfg.command = m.at("command").get<std::string>();
  for (auto& [k, v] : m.at("config").items())
    cfg.kv[k] = v.get<std::string>();
  std::uint64_t want = m.at("config_hash").get<std::uint64_t>();
  if (cfg.hash() != want) {
    std::cerr << "verify-manifest: config_hash mismatch\n";
    return 1;
  }
  for (const auto& name : m.at("outputs")) {
    fs::path p = fs::path(out) / name.get<std::string>();
    std::ifstream of(p);
    if (!of) {
      std::cerr << "verify-manifest: missing output " << p << "\n";
      return 1;
    }
    std::string first;
    std::getline(of, first);
    std::string tag = std::to_string(want);
    if (first.find(tag) == std::string::npos) {
      // JSON outputs carry the hash anywhere in the body
      std::stringstream rest;
      rest << first << of.rdbuf();
      if (rest.str().find(tag) == std::string::npos) {
        std::cerr << "verify-manifest: " << p << " lacks config_hash\n";
        return 1;
      }
    }
  }
  std::cout << "manifest ok (config_hash=" << want << ")\n";
  return 0;
}

// ---------------------------------------------------------------- options

struct MeasureOpts {
  std::string measure = "riesz";
  double beta = 0.5;
  double ell = 1.0;
  std::string table;

  void add(CLI::App* cmd) {
    cmd->add_option("--measure", measure, "spectral measure kind")
        ->check(CLI::IsMember({"riesz", "gaussian", "white", "table"}))
        ->envname("DHWAVE_MEASURE");
    cmd->add_option("--beta", beta, "power-law exponent (riesz)")
        ->envname("DHWAVE_BETA");
    cmd->add_option("--ell", ell, "gaussian length scale")
        ->envname("DHWAVE_ELL");
    cmd->add_option("--table", table,
                    "csv file of radius,density rows (table measure)")
        ->envname("DHWAVE_TABLE");
  }

  SpectralMeasureSpec build() const {
    if (measure == "riesz") return RieszPower{beta};
    if (measure == "gaussian") return GaussianDensity{ell};
    if (measure == "white") return WhiteNoise{};
    TabulatedRadial tab;
    std::ifstream f(table);
    if (!f) throw DomainError("cannot open table file: " + table);
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream is(line);
      double r, d;
      if (is >> r >> d) tab.samples.emplace_back(r, d);
    }
    validate(SpectralMeasureSpec{tab});
    return tab;
  }

  void record(RunConfig& cfg) const {
    cfg.set("measure", measure);
    if (measure == "riesz") cfg.set("beta", beta);
    if (measure == "gaussian") cfg.set("ell", ell);
    if (measure == "table") cfg.set("table", table);
  }
};

struct GridOpts {
  double dt = 0.0625;
  std::int64_t t_steps = 16;
  double x_extent = 2.2;
  std::int64_t n_modes = 32;

  void add(CLI::App* cmd) {
    cmd->add_option("--dt", dt, "time step")->envname("DHWAVE_DT");
    cmd->add_option("--t-steps", t_steps, "number of time steps")
        ->envname("DHWAVE_T_STEPS");
    cmd->add_option("--x-extent", x_extent, "half-width of the spatial box")
        ->envname("DHWAVE_X_EXTENT");
    cmd->add_option("--n-modes", n_modes, "frequency modes per axis")
        ->envname("DHWAVE_N_MODES");
  }

  GridSpec build(std::uint64_t seed) const {
    return GridSpec{dt, static_cast<int>(t_steps), x_extent,
                    static_cast<int>(n_modes), seed};
  }

  void record(RunConfig& cfg) const {
    cfg.set("dt", dt);
    cfg.set("t_steps", t_steps);
    cfg.set("x_extent", x_extent);
    cfg.set("n_modes", n_modes);
  }
};

// deterministic low-discrepancy-ish point sets for sweeps
double unit_draw(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------- commands

int cmd_gamma(double t, double x1, double x2, std::int64_t n,
              const std::string& out, RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto csv = sink.open_csv("gamma.csv", "y1,y2,gamma");
  double h_max = 0.0;
  for (int m = 0; m <= 512; ++m) {
    double y1 = x1 + 2.0 * t * m / 512.0;
    double hv = (2 * t + x1 - y1) * (y1 * y1 * y1 - x1 * x1 * x1) / 3.0;
    h_max = std::max(h_max, hv);
  }
  double s = std::sqrt(std::max(h_max, 0.0)) * 1.05;
  for (std::int64_t i = 0; i <= n; ++i) {
    double y1 = x1 + 2.0 * t * i / n;
    for (std::int64_t j = 0; j <= n; ++j) {
      double y2 = x2 - s + 2.0 * s * j / n;
      csv << y1 << "," << y2 << ","
          << gamma_eval({t, x1, y1, x2 - y2}) << "\n";
    }
  }
  sink.finish();
  return 0;
}

int cmd_weak_check(double tol, const std::string& out, RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto csv = sink.open_csv("weak_check.csv",
                           "y1,bump,expected,got,abs_err,pass");
  bool all_pass = true;
  double worst = 0.0;
  for (double y1 : {-1.0, 0.0, 0.5, 2.0}) {
    for (int i = 0; i < 10; ++i) {
      TestFunction phi{
          {0.05 + 0.01 * i, 0.25 + 0.02 * i},
          {y1 + 0.1 * (i % 3 - 1), 0.45 + 0.03 * i},
          {0.05 * (i % 2), 0.35 + 0.02 * i},
          0.5 + 0.2 * i};
      double expected = phi.value(0.0, y1, 0.0);
      double got = weak_apply(y1, phi, tol);
      double err = std::abs(got - expected);
      bool pass = err <= 5.0 * tol;
      all_pass = all_pass && pass;
      worst = std::max(worst, err);
      csv << y1 << "," << i << "," << expected << "," << got << "," << err
          << "," << (pass ? 1 : 0) << "\n";
    }
  }
  json j{{"worst_abs_err", worst}, {"tol", tol}, {"pass", all_pass}};
  sink.write_json("weak_check.json", j);
  sink.finish();
  std::cout << "weak-check worst_abs_err=" << worst
            << (all_pass ? " PASS" : " FAIL") << "\n";
  return all_pass ? 0 : 3;
}

int cmd_fourier_check(double tol, std::uint64_t seed, const std::string& out,
                      RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto csv = sink.open_csv("fourier_check.csv",
                           "tau,x1,x2,xi1,xi2,abs_diff,pass");
  std::mt19937_64 rng(seed);
  bool all_pass = true;
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double tau = 0.25 + 1.25 * unit_draw(rng);
          double x1 = -1.0 + 2.0 * unit_draw(rng);
          double x2 = -1.0 + 2.0 * unit_draw(rng);
          double r = std::pow(10.0, 1.6 * unit_draw(rng));
          double ang = 2 * 3.14159265358979 * unit_draw(rng);
          Frequency xi{r * std::cos(ang), r * std::sin(ang)};
          auto va = fourier_gamma(tau, x1, x2, xi, 1e-9);
          auto vb = fourier_gamma_direct(tau, x1, x2, xi, 1e-8);
          double diff = std::abs(va - vb);
          bool pass = diff <= tol;
          all_pass = all_pass && pass;
          worst = std::max(worst, diff);
          csv << tau << "," << x1 << "," << x2 << "," << xi.xi1 << ","
              << xi.xi2 << "," << diff << "," << (pass ? 1 : 0) << "\n";
          (void)a; (void)b; (void)c; (void)d;
        }
  json j{{"worst_abs_diff", worst}, {"tol", tol}, {"pass", all_pass}};
  sink.write_json("fourier_check.json", j);
  sink.finish();
  std::cout << "fourier-check worst_abs_diff=" << worst
            << (all_pass ? " PASS" : " FAIL") << "\n";
  return all_pass ? 0 : 3;
}

int cmd_bounds(std::uint64_t seed, const std::string& out, RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  const auto& c = BoundConstants::frozen();

  double slope_axis = decay_slope(1.0, 0.5, 1e2, 1e4, 9, true);
  double slope_matched = decay_slope(1.0, 0.5, 1e2, 1e4, 9, false);

  auto csv = sink.open_csv("dominance.csv",
                           "tau,x1,xi1,xi2,lhs,kappa_tilde,pass");
  std::mt19937_64 rng(seed);
  int pass_count = 0;
  const int n_pts = 200;
  for (int i = 0; i < n_pts; ++i) {
    double tau = 0.25 + 1.75 * unit_draw(rng);
    double x1 = -2.0 + 4.0 * unit_draw(rng);
    double r = std::pow(10.0, 4.0 * unit_draw(rng));
    double ang = 2 * 3.14159265358979 * unit_draw(rng);
    Frequency xi{r * std::cos(ang), r * std::sin(ang)};
    double m = std::abs(fourier_gamma(tau, x1, 0.0, xi, 1e-8));
    double xin = std::hypot(xi.xi1, xi.xi2);
    double lhs = (1 + std::cbrt(xin * xin)) * m * m;
    double kt = kappa_tilde(tau, x1, c);
    bool pass = lhs <= kt * (1 + 1e-9);
    pass_count += pass;
    csv << tau << "," << x1 << "," << xi.xi1 << "," << xi.xi2 << "," << lhs
        << "," << kt << "," << (pass ? 1 : 0) << "\n";
  }
  json j{{"slope_xi2_axis", slope_axis},
         {"slope_matched_curve", slope_matched},
         {"dominance_pass_fraction", double(pass_count) / n_pts}};
  sink.write_json("bounds.json", j);
  sink.finish();
  std::cout << "bounds slope_xi2_axis=" << slope_axis
            << " slope_matched=" << slope_matched
            << " dominance=" << pass_count << "/" << n_pts << "\n";
  return 0;
}

int cmd_admissibility(const MeasureOpts& mo, const std::string& out,
                      RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto mu = mo.build();
  auto to_json = [](const IntegralVerdict& v) {
    json j;
    j["divergent"] = v.divergent;
    j["method"] =
        v.method == IntegralMethod::ClosedForm ? "closed-form" : "quadrature";
    if (!v.divergent) {
      j["value"] = v.value;
      j["error_estimate"] = v.error_estimate;
    }
    return j;
  };
  json j;
  j["degenerate_condition"] = to_json(sc_integral(mu));
  j["wave_condition"] = to_json(dalang_integral(mu));
  sink.write_json("admissibility.json", j);
  sink.finish();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const MeasureOpts& mo, const GridOpts& go, double t,
                 double x1, double x2, std::int64_t samples,
                 std::uint64_t seed, std::int64_t threads,
                 const std::string& out, RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto mu = mo.build();
  if (sc_integral(mu).divergent)
    throw PreconditionFailed("simulate: measure fails the admissibility condition");
  GridSpec grid = go.build(seed);
  auto lat = FrequencyLattice::build(grid, mu);
  auto w = KernelWeights::build(grid, {t, x1, x2});
  auto proj = project_weights(w, lat, grid);

  std::vector<double> u(samples);
  std::int64_t nthreads = std::max<std::int64_t>(1, threads);
  std::vector<std::thread> pool;
  std::int64_t chunk = (samples + nthreads - 1) / nthreads;
  for (std::int64_t tix = 0; tix < nthreads; ++tix) {
    std::int64_t lo = tix * chunk, hi = std::min(samples, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      for (std::int64_t s = lo; s < hi; ++s)
        u[s] = solve_field(proj, lat, grid, static_cast<std::uint64_t>(s));
    });
  }
  for (auto& th : pool) th.join();

  auto csv = sink.open_csv("samples.csv", "t,x1,x2,sample,u");
  for (std::int64_t s = 0; s < samples; ++s)
    csv << t << "," << x1 << "," << x2 << "," << s << "," << u[s] << "\n";

  // order-fixed compensated reduction: thread count cannot change results
  double mean = 0.0, comp = 0.0;
  for (double v : u) {
    double y = v - comp;
    double s2 = mean + y;
    comp = (s2 - mean) - y;
    mean = s2;
  }
  mean /= samples;
  double var = 0.0;
  comp = 0.0;
  for (double v : u) {
    double d = (v - mean) * (v - mean);
    double y = d - comp;
    double s2 = var + y;
    comp = (s2 - var) - y;
    var = s2;
  }
  var /= (samples - 1);

  json j{{"t", t},
         {"x1", x1},
         {"x2", x2},
         {"n_samples", samples},
         {"mean", mean},
         {"variance", var},
         {"std_error", std::sqrt(var / samples)},
         {"lattice_variance", lattice_variance(proj, lat, grid)}};
  sink.write_json("summary.json", j);
  sink.finish();
  std::cout << "simulate mean=" << fmt(mean) << " variance=" << fmt(var)
            << "\n";
  return 0;
}

int cmd_continuity(const MeasureOpts& mo, double t, double x1, double x2,
                   double tol, const std::string& out, RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto mu = mo.build();
  auto csv = sink.open_csv("continuity.csv", "axis,delta,l2_increment");
  json table = json::array();
  for (auto [axis, name] :
       {std::pair{IncrementAxis::Time, "t"}, {IncrementAxis::X1, "x1"},
        {IncrementAxis::X2, "x2"}}) {
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
      double v = l2_increment(axis, t, x1, x2, delta, mu, tol);
      csv << name << "," << delta << "," << v << "\n";
      table.push_back({{"axis", name}, {"delta", delta}, {"value", v}});
    }
  }
  sink.write_json("continuity.json", json{{"rows", table}});
  sink.finish();
  return 0;
}

int cmd_covariance_check(const MeasureOpts& mo, const GridOpts& go,
                         std::int64_t samples, std::uint64_t seed,
                         const std::string& out, RunConfig cfg) {
  OutputSink sink(out, std::move(cfg));
  auto mu = mo.build();
  GridSpec grid = go.build(seed);
  TestFunction phi{{0.5, 0.4}, {0.2, 0.8}, {-0.1, 0.8}, 1.0};
  auto r = covariance_mc_check(phi, phi, grid, mu, static_cast<int>(samples));
  bool pass = std::abs(r.mc_value - r.spectral_value) <=
              3.0 * r.mc_stderr + 0.02 * std::abs(r.spectral_value);
  json j{{"mc_value", r.mc_value},
         {"mc_stderr", r.mc_stderr},
         {"lattice_value", r.lattice_value},
         {"spectral_value", r.spectral_value},
         {"pass", pass}};
  sink.write_json("covariance_check.json", j);
  sink.finish();
  std::cout << "covariance-check mc=" << r.mc_value
            << " spectral=" << r.spectral_value
            << (pass ? " PASS" : " FAIL") << "\n";
  return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenerate hyperbolic SPDE toolkit"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "flat key=value config file; flags win")
      ->envname("DHWAVE_CONFIG");

  std::string out = "out";
  std::int64_t threads = 1;
  std::uint64_t seed = 1;
  double tol = 1e-3;
  double t = 1.0, x1 = 0.0, x2 = 0.0;
  std::int64_t samples = 1000;
  std::string verify_dir;
  app.add_option("--verify-manifest", verify_dir,
                 "recompute and compare the manifest in DIR, then exit");

  MeasureOpts mo;
  GridOpts go;

  auto add_common = [&](CLI::App* cmd, bool with_threads = false) {
    cmd->fallthrough();  // global options may follow the subcommand name
    cmd->add_option("--out", out, "output directory")->envname("DHWAVE_OUT");
    cmd->add_option("--seed", seed, "rng seed")->envname("DHWAVE_SEED");
    cmd->add_option("--tol", tol, "tolerance")->envname("DHWAVE_TOL");
    if (with_threads)
      cmd->add_option("--threads", threads, "worker threads")
          ->check(CLI::PositiveNumber)
          ->envname("DHWAVE_THREADS");
  };
  auto add_point = [&](CLI::App* cmd) {
    cmd->add_option("--t", t, "time")->envname("DHWAVE_T");
    cmd->add_option("--x1", x1, "first spatial coordinate")->envname("DHWAVE_X1");
    cmd->add_option("--x2", x2, "second spatial coordinate")->envname("DHWAVE_X2");
  };

  auto* c_gamma = app.add_subcommand("gamma", "kernel values on a grid");
  add_common(c_gamma);
  add_point(c_gamma);
  std::int64_t grid_n = 100;
  c_gamma->add_option("--grid-n", grid_n, "points per axis");

  auto* c_weak = app.add_subcommand("weak-check", "weak-solution identity suite");
  add_common(c_weak);

  auto* c_fourier = app.add_subcommand("fourier-check",
                                       "transform vs direct-integral sweep");
  add_common(c_fourier);
  double ftol = 1e-6;
  c_fourier->add_option("--ftol", ftol, "comparison threshold");

  auto* c_bounds = app.add_subcommand("bounds",
                                      "decay-exponent fits and dominance sweep");
  add_common(c_bounds);

  auto* c_adm = app.add_subcommand("admissibility", "spectral measure verdicts");
  add_common(c_adm);
  mo.add(c_adm);

  auto* c_sim = app.add_subcommand("simulate", "field samples at a query point");
  add_common(c_sim, true);
  add_point(c_sim);
  mo.add(c_sim);
  go.add(c_sim);
  c_sim->add_option("--samples", samples, "realization count")
      ->envname("DHWAVE_SAMPLES");

  auto* c_cont = app.add_subcommand("continuity", "mean-square increment tables");
  add_common(c_cont);
  add_point(c_cont);
  mo.add(c_cont);

  auto* c_cov = app.add_subcommand("covariance-check",
                                   "noise covariance vs spectral form");
  add_common(c_cov);
  mo.add(c_cov);
  go.add(c_cov);
  c_cov->add_option("--samples", samples, "realization count")
      ->envname("DHWAVE_SAMPLES");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // any parse/validation failure is exit 1
  }

  try {
    if (!verify_dir.empty()) return verify_manifest(verify_dir);
    if (app.get_subcommands().empty()) {
      std::cerr << app.help() << "\n";
      return 1;
    }
    CLI::App* sub = app.get_subcommands().front();
    RunConfig cfg;
    cfg.command = sub->get_name();
    cfg.set("seed", static_cast<std::int64_t>(seed));
    cfg.set("tol", tol);

    if (sub == c_gamma) {
      cfg.set("t", t);
      cfg.set("x1", x1);
      cfg.set("x2", x2);
      cfg.set("grid_n", grid_n);
      return cmd_gamma(t, x1, x2, grid_n, out, cfg);
    }
    if (sub == c_weak) return cmd_weak_check(tol, out, cfg);
    if (sub == c_fourier) {
      cfg.set("ftol", ftol);
      return cmd_fourier_check(ftol, seed, out, cfg);
    }
    if (sub == c_bounds) return cmd_bounds(seed, out, cfg);
    if (sub == c_adm) {
      mo.record(cfg);
      return cmd_admissibility(mo, out, cfg);
    }
    if (sub == c_sim) {
      mo.record(cfg);
      go.record(cfg);
      cfg.set("t", t);
      cfg.set("x1", x1);
      cfg.set("x2", x2);
      // threads are deliberately absent from the hash: they cannot change
      // any result, only wall time
      cfg.set("samples", samples);
      return cmd_simulate(mo, go, t, x1, x2, samples, seed, threads, out, cfg);
    }
    if (sub == c_cont) {
      mo.record(cfg);
      cfg.set("t", t);
      cfg.set("x1", x1);
      cfg.set("x2", x2);
      return cmd_continuity(mo, t, x1, x2, tol, out, cfg);
    }
    if (sub == c_cov) {
      mo.record(cfg);
      go.record(cfg);
      cfg.set("samples", samples);
      return cmd_covariance_check(mo, go, samples, seed, out, cfg);
    }
    return 1;
  } catch (const QuadratureNoConvergence& e) {
    std::cerr << "numerical non-convergence: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
