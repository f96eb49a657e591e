// Command-line surface over the library: classification, discrete spectra,
// continuum densities, eigenfunction samples, Green's function probes, and
// the verification suites. Emits JSON (schema "supercrit/1") or RFC-4180 CSV.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure (the
// failing operation's error name goes to stderr).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "supercrit/verify.hpp"

using json = nlohmann::ordered_json;
using namespace supercrit;

namespace {

constexpr const char* kSchema = "supercrit/1";

int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SUPERCRIT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<long>(v, 256);
  }
  return hw;
}

// Ordered parallel map: out[i] = f(i), assembled single-threaded by index.
template <typename F>
void parallel_for(std::size_t n, const F& f) {
  int workers = std::min<std::size_t>(thread_budget(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string region_name(RegionClass r) {
  switch (r) {
    case RegionClass::Region1: return "subcritical-unique";
    case RegionClass::Region2: return "subcritical-family";
    case RegionClass::Critical: return "critical";
    case RegionClass::Overcritical: return "overcritical";
  }
  return "?";
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RFC-4180: quote a field iff it contains a comma, quote, or line break.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct JobConfig {
  double q = 0.0;
  int kappa = -1;
  double mass = 1.0;
  // extension selection: exactly one of xi / xi-inf / theta, else "unique"
  std::optional<double> xi;
  bool xi_inf = false;
  std::optional<double> theta;
  std::string format = "json";
  std::string output;  // empty -> stdout

  ChannelParams params() const { return {q, kappa, mass}; }

  ExtensionParam extension() const {
    if (xi) return ExtensionParam::xi(*xi);
    if (xi_inf) return ExtensionParam::xi_infinity();
    if (theta) return ExtensionParam::theta(*theta);
    return ExtensionParam::unique();
  }

  std::string extension_label() const {
    if (xi) return "xi=" + num17(*xi);
    if (xi_inf) return "xi=inf";
    if (theta) return "theta=" + num17(*theta);
    return "unique";
  }

  json echo() const {
    json c;
    c["q"] = q;
    c["kappa"] = kappa;
    c["mass"] = mass;
    c["extension"] = extension_label();
    return c;
  }
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_channel_flags(CLI::App* cmd, JobConfig& cfg, bool with_extension = true) {
  cmd->add_option("--q", cfg.q, "coupling strength (> 0)")->required();
  cmd->add_option("--kappa", cfg.kappa, "angular quantum number (nonzero integer)")
      ->required();
  cmd->add_option("--mass", cfg.mass, "mass scale (energies reported in these units)");
  if (with_extension) {
    auto* xi = cmd->add_option("--xi", "boundary parameter xi");
    auto* xinf = cmd->add_flag("--xi-inf", cfg.xi_inf, "the xi = infinity extension");
    auto* th = cmd->add_option("--theta", "boundary parameter theta (overcritical)");
    xi->excludes(xinf)->excludes(th);
    xinf->excludes(th);
    xi->each([&cfg](const std::string& s) { cfg.xi = std::stod(s); });
    th->each([&cfg](const std::string& s) { cfg.theta = std::stod(s); });
  }
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", cfg.output, "write to this path instead of stdout");
}

// Region/extension compatibility is a configuration matter, checked before
// any numerics run.
RegionClass validate(const JobConfig& cfg, bool with_extension = true) {
  if (!(cfg.q > 0.0)) throw ConfigError("--q must be positive");
  if (cfg.kappa == 0) throw ConfigError("--kappa must be a nonzero integer");
  if (!(cfg.mass > 0.0)) throw ConfigError("--mass must be positive");
  RegionClass region = classify(cfg.params());
  if (!with_extension) return region;
  try {
    require_compatible(region, cfg.extension());
  } catch (const NumericsError& e) {
    throw ConfigError(std::string(e.what()) + " (channel is " + region_name(region) +
                      ")");
  }
  return region;
}

void emit(const JobConfig& cfg, const std::string& command, const json& results,
          const json& diagnostics, const CsvTable& table) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) throw ConfigError("cannot open output path: " + cfg.output);
    os = &file;
  }
  if (cfg.format == "csv") {
    std::string line;
    for (std::size_t j = 0; j < table.header.size(); ++j)
      line += (j ? "," : "") + csv_field(table.header[j]);
    *os << line << "\r\n";
    for (const auto& row : table.rows) {
      line.clear();
      for (std::size_t j = 0; j < row.size(); ++j)
        line += (j ? "," : "") + csv_field(row[j]);
      *os << line << "\r\n";
    }
  } else {
    json doc;
    doc["schema"] = kSchema;
    doc["config"] = cfg.echo();
    doc["config"]["command"] = command;
    doc["results"] = results;
    doc["diagnostics"] = diagnostics;
    *os << doc.dump(2) << "\n";
  }
}

json base_diagnostics() {
  json d;
  d["threads"] = thread_budget();
  d["threshold_guard"] = 1e-8;
  return d;
}

// ---- subcommand bodies ----------------------------------------------------

int run_classify(const JobConfig& cfg) {
  RegionClass region = validate(cfg, /*with_extension=*/false);
  ChannelParams p = cfg.params();
  json r;
  r["region"] = region_name(region);
  r["q_unique"] = p.q_u();
  r["q_critical"] = p.q_c();
  cplx u = p.upsilon();
  r["upsilon"] = {u.real(), u.imag()};
  r["extension_parameters_at_q"] = count_extension_parameters(p.q);
  CsvTable t;
  t.header = {"region", "q_unique", "q_critical", "upsilon_re", "upsilon_im",
              "extension_parameters_at_q"};
  t.rows.push_back({region_name(region), num17(p.q_u()), num17(p.q_c()),
                    num17(u.real()), num17(u.imag()),
                    std::to_string(count_extension_parameters(p.q))});
  emit(cfg, "classify", r, base_diagnostics(), t);
  return 0;
}

int run_spectrum(const JobConfig& cfg, int n_max, double e_lo, double e_hi) {
  validate(cfg);
  ChannelParams p = cfg.params();
  double guard = 1e-8 * p.m;
  SpectrumWindow win{std::max(e_lo * p.m, -p.m * (1.0 - guard)),
                     std::min(e_hi * p.m, p.m * (1.0 - guard))};
  if (n_max > 0) win.max_levels = n_max;
  auto levels = find_discrete_spectrum(p, cfg.extension(), win);
  if (n_max > 0 && static_cast<int>(levels.size()) > n_max) levels.resize(n_max);

  json r = json::array();
  CsvTable t;
  t.header = {"n", "E", "Q2_jump"};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    json row;
    row["n"] = static_cast<int>(i);
    row["E"] = levels[i].energy;
    row["Q2_jump"] = levels[i].q2;
    r.push_back(row);
    t.rows.push_back({std::to_string(i), num17(levels[i].energy), num17(levels[i].q2)});
  }
  json d = base_diagnostics();
  d["window"] = {win.e_lo, win.e_hi};
  d["levels_found"] = levels.size();
  emit(cfg, "spectrum", r, d, t);
  return 0;
}

int run_density(const JobConfig& cfg, double e_min, double e_max, int points) {
  validate(cfg);
  ChannelParams p = cfg.params();
  if (points < 2) throw ConfigError("--points must be at least 2");
  double guard = 1e-8 * p.m;
  double lo = e_min * p.m, hi = e_max * p.m;
  if (std::abs(lo) < p.m + guard || std::abs(hi) < p.m + guard ||
      (lo < -p.m) != (hi < -p.m))
    throw ConfigError("density grid must stay on one side of the gap, |E| > m");
  if (!(lo < hi)) throw ConfigError("--e-min must be below --e-max");

  std::vector<double> energy(points), dens(points);
  ExtensionParam ext = cfg.extension();
  parallel_for(points, [&](std::size_t i) {
    energy[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    dens[i] = continuum_density(p, ext, energy[i]);
  });

  json r = json::array();
  CsvTable t;
  t.header = {"E", "Q2"};
  for (int i = 0; i < points; ++i) {
    r.push_back({energy[i], dens[i]});
    t.rows.push_back({num17(energy[i]), num17(dens[i])});
  }
  json d = base_diagnostics();
  d["points"] = points;
  emit(cfg, "density", r, d, t);
  return 0;
}

int run_eigenfunction(const JobConfig& cfg, double energy, double r_min, double r_max,
                      int points) {
  validate(cfg);
  ChannelParams p = cfg.params();
  if (points < 1) throw ConfigError("--points must be at least 1");
  if (!(r_min > 0.0) || !(r_max >= r_min))
    throw ConfigError("radial grid needs 0 < --r-min <= --r-max");
  // log-spaced radii: the doublets vary on the scale of log r near the origin
  std::vector<double> radii(points);
  for (int i = 0; i < points; ++i) {
    double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    radii[i] = r_min * std::pow(r_max / r_min, frac);
  }
  auto samples = eigenfunction(p, cfg.extension(), energy * p.m, radii);

  json r = json::array();
  CsvTable t;
  t.header = {"r", "f1_re", "f1_im", "f2_re", "f2_im"};
  for (int i = 0; i < points; ++i) {
    json row;
    row["r"] = radii[i];
    row["f1"] = {samples[i](0).real(), samples[i](0).imag()};
    row["f2"] = {samples[i](1).real(), samples[i](1).imag()};
    r.push_back(row);
    t.rows.push_back({num17(radii[i]), num17(samples[i](0).real()),
                      num17(samples[i](0).imag()), num17(samples[i](1).real()),
                      num17(samples[i](1).imag())});
  }
  json d = base_diagnostics();
  d["energy"] = energy * p.m;
  emit(cfg, "eigenfunction", r, d, t);
  return 0;
}

int run_greens(const JobConfig& cfg, double r, double rp, double w_re, double w_im) {
  validate(cfg);
  if (!(w_im > 0.0)) throw ConfigError("--w-im must be positive (resolvent set)");
  if (!(r > 0.0) || !(rp > 0.0)) throw ConfigError("--r and --rp must be positive");
  ChannelParams p = cfg.params();
  cplx W(w_re * p.m, w_im * p.m);
  Eigen::Matrix2cd g = greens_function(p, cfg.extension(), r, rp, W);

  json rj;
  rj["W"] = {W.real(), W.imag()};
  rj["r"] = r;
  rj["rp"] = rp;
  json rows = json::array();
  CsvTable t;
  t.header = {"i", "j", "G_re", "G_im"};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      rows.push_back({i, j, g(i, j).real(), g(i, j).imag()});
      t.rows.push_back({std::to_string(i), std::to_string(j), num17(g(i, j).real()),
                        num17(g(i, j).imag())});
    }
  rj["entries"] = rows;
  emit(cfg, "greens", rj, base_diagnostics(), t);
  return 0;
}

int run_count_extensions(const JobConfig& cfg) {
  if (!(cfg.q > 0.0)) throw ConfigError("--q must be positive");
  int n = count_extension_parameters(cfg.q);
  json r;
  r["extension_parameters"] = n;
  CsvTable t;
  t.header = {"q", "extension_parameters"};
  t.rows.push_back({num17(cfg.q), std::to_string(n)});
  emit(cfg, "count-extensions", r, base_diagnostics(), t);
  return 0;
}

int run_verify_orthonormality(const JobConfig& cfg, int n_levels) {
  validate(cfg);
  ChannelParams p = cfg.params();
  ExtensionParam ext = cfg.extension();
  double guard = 1e-8 * p.m;
  SpectrumWindow win{-p.m * (1.0 - guard), p.m * (1.0 - guard)};
  win.max_levels = n_levels;
  auto levels = find_discrete_spectrum(p, ext, win);
  if (static_cast<int>(levels.size()) > n_levels) levels.resize(n_levels);
  if (levels.empty()) throw ConfigError("no discrete levels in the gap for this extension");

  double max_norm_mismatch = 0.0, max_offdiag = 0.0;
  json per_level = json::array();
  CsvTable t;
  t.header = {"n", "E", "norm_slope", "norm_quadrature", "rel_mismatch"};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    NormResult nr = discrete_norm(p, ext, levels[i].energy);
    double rel = std::abs(nr.via_quadrature / nr.via_slope - 1.0);
    max_norm_mismatch = std::max(max_norm_mismatch, rel);
    json row;
    row["n"] = static_cast<int>(i);
    row["E"] = levels[i].energy;
    row["norm_slope"] = nr.via_slope;
    row["norm_quadrature"] = nr.via_quadrature;
    row["rel_mismatch"] = rel;
    per_level.push_back(row);
    t.rows.push_back({std::to_string(i), num17(levels[i].energy), num17(nr.via_slope),
                      num17(nr.via_quadrature), num17(rel)});
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      OverlapResult ov = overlap_wronskian(p, ext, levels[i].energy, levels[j].energy);
      max_offdiag = std::max(max_offdiag, std::abs(ov.value));
    }

  json r;
  r["levels"] = per_level;
  r["max_norm_rel_mismatch"] = max_norm_mismatch;
  r["max_offdiagonal_overlap"] = max_offdiag;
  json d = base_diagnostics();
  d["n_levels"] = levels.size();
  emit(cfg, "verify orthonormality", r, d, t);
  std::cerr << "max off-diagonal overlap: " << num17(max_offdiag) << "\n";
  return 0;
}

int run_verify_parseval(const JobConfig& cfg, const ParsevalOptions& opt) {
  validate(cfg);
  ParsevalResult pr = parseval_check(cfg.params(), cfg.extension(), opt);
  json r;
  r["lhs"] = pr.lhs;
  r["discrete_sum"] = pr.discrete_sum;
  r["continuum_sum"] = pr.continuum_sum;
  r["defect"] = pr.defect;
  r["n_levels"] = pr.n_levels;
  CsvTable t;
  t.header = {"lhs", "discrete_sum", "continuum_sum", "defect", "n_levels"};
  t.rows.push_back({num17(pr.lhs), num17(pr.discrete_sum), num17(pr.continuum_sum),
                    num17(pr.defect), std::to_string(pr.n_levels)});
  json d = base_diagnostics();
  d["e_max"] = opt.e_max;
  d["panels_per_side"] = opt.panels_per_side;
  emit(cfg, "verify parseval", r, d, t);
  return 0;
}

// Identity battery: C * Q^2 = 1 on the continuum (where the closed-form
// constants exist) and -Wr(u, v) = omega_ext on the resolvent set.
int run_verify_identities(const JobConfig& cfg) {
  RegionClass region = validate(cfg);
  ChannelParams p = cfg.params();
  ExtensionParam ext = cfg.extension();

  json r;
  CsvTable t;
  t.header = {"identity", "at", "residual"};
  double worst = 0.0;

  bool has_constants = region != RegionClass::Overcritical &&
                       ext.kind != ExtensionParam::Kind::Theta;
  if (has_constants) {
    json rows = json::array();
    for (double e : {1.25, 2.0, 4.0, -1.5, -3.0}) {
      double E = e * p.m;
      double c = continuum_weight(p, ext, E);
      double q2 = continuum_density(p, ext, E);
      double resid = std::abs(c * q2 - 1.0);
      worst = std::max(worst, resid);
      rows.push_back({E, resid});
      t.rows.push_back({"C*Q2=1", num17(E), num17(resid)});
    }
    r["weight_identity"] = rows;
  }
  {
    json rows = json::array();
    for (double re : {0.3, -0.4}) {
      cplx W(re * p.m, 0.8 * p.m);
      ResolventBasis rb = resolvent_pair(p, ext, 0.7, W);
      cplx wr = rb.u(0) * rb.v(1) - rb.u(1) * rb.v(0);
      cplx target = omega_ext(p, ext, W);
      double resid = std::abs(-wr - target) / std::max(1.0, std::abs(target));
      worst = std::max(worst, resid);
      rows.push_back({W.real(), W.imag(), resid});
      t.rows.push_back({"-Wr(u,v)=omega_ext", num17(W.real()), num17(resid)});
    }
    r["resolvent_identity"] = rows;
  }
  r["max_residual"] = worst;
  json d = base_diagnostics();
  d["weight_identity_available"] = has_constants;
  emit(cfg, "verify identities", r, d, t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral data of the radial Coulomb-Dirac operator"};
  app.require_subcommand(1);

  JobConfig cfg;

  auto* c_classify = app.add_subcommand("classify", "charge region of a channel");
  add_channel_flags(c_classify, cfg, /*with_extension=*/false);

  int n_max = 0;
  double e_lo = -1.0, e_hi = 1.0;
  auto* c_spec = app.add_subcommand("spectrum", "discrete levels in the gap");
  add_channel_flags(c_spec, cfg);
  c_spec->add_option("--n-max", n_max, "report at most this many levels (lowest first)");
  c_spec->add_option("--e-lo", e_lo, "window lower edge, units of m");
  c_spec->add_option("--e-hi", e_hi, "window upper edge, units of m");

  double e_min = 1.1, e_max = 4.0;
  int points = 50;
  auto* c_dens = app.add_subcommand("density", "continuum spectral density Q^2(E)");
  add_channel_flags(c_dens, cfg);
  c_dens->add_option("--e-min", e_min, "grid start, units of m (|E| > 1)");
  c_dens->add_option("--e-max", e_max, "grid end, units of m");
  c_dens->add_option("--points", points, "number of grid points");

  double ef_energy = 0.5, r_min = 1e-3, r_max = 20.0;
  int ef_points = 40;
  auto* c_eig = app.add_subcommand("eigenfunction", "normalized doublet samples");
  add_channel_flags(c_eig, cfg);
  c_eig->add_option("--energy", ef_energy, "spectrum point, units of m")->required();
  c_eig->add_option("--r-min", r_min, "first radius (log-spaced grid)");
  c_eig->add_option("--r-max", r_max, "last radius");
  c_eig->add_option("--points", ef_points, "number of radii");

  double g_r = 1.0, g_rp = 2.0, w_re = 0.0, w_im = 1.0;
  auto* c_grn = app.add_subcommand("greens", "Green's function at one (r, r', W)");
  add_channel_flags(c_grn, cfg);
  c_grn->add_option("--r", g_r, "first radius");
  c_grn->add_option("--rp", g_rp, "second radius");
  c_grn->add_option("--w-re", w_re, "Re W, units of m");
  c_grn->add_option("--w-im", w_im, "Im W, units of m (> 0)");

  auto* c_cnt = app.add_subcommand("count-extensions",
                                   "number of extension parameters at coupling q");
  c_cnt->add_option("--q", cfg.q, "coupling strength")->required();
  c_cnt->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_cnt->add_option("--output", cfg.output, "write to this path instead of stdout");

  auto* c_ver = app.add_subcommand("verify", "consistency check suites");
  c_ver->require_subcommand(1);
  int v_levels = 4;
  auto* c_orth = c_ver->add_subcommand("orthonormality",
                                       "norms two ways + pairwise overlaps");
  add_channel_flags(c_orth, cfg);
  c_orth->add_option("--n-levels", v_levels, "number of levels to test");
  ParsevalOptions popt;
  auto* c_par = c_ver->add_subcommand("parseval", "completeness of the expansion");
  add_channel_flags(c_par, cfg);
  c_par->add_option("--e-max", popt.e_max, "continuum window |E| <= e-max, units of m");
  c_par->add_option("--max-levels", popt.max_levels, "discrete levels to include");
  c_par->add_option("--panels", popt.panels_per_side, "quadrature panels per side");
  auto* c_idn = c_ver->add_subcommand("identities",
                                      "closed-form weight and resolvent identities");
  add_channel_flags(c_idn, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_classify) return run_classify(cfg);
    if (*c_spec) return run_spectrum(cfg, n_max, e_lo, e_hi);
    if (*c_dens) return run_density(cfg, e_min, e_max, points);
    if (*c_eig) return run_eigenfunction(cfg, ef_energy, r_min, r_max, ef_points);
    if (*c_grn) return run_greens(cfg, g_r, g_rp, w_re, w_im);
    if (*c_cnt) return run_count_extensions(cfg);
    if (*c_orth) return run_verify_orthonormality(cfg, v_levels);
    if (*c_par) return run_verify_parseval(cfg, popt);
    if (*c_idn) return run_verify_identities(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericsError& e) {
    std::cerr << e.name << "\n";
    return 3;
  }
  return 2;
}
