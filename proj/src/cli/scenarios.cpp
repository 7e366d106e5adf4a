#include "scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "kdoptics/cli/checks.hpp"
#include "kdoptics/cli/fig3.hpp"
#include "kdoptics/mzi.hpp"
#include "kdoptics/noisy_joint.hpp"
#include "kdoptics/polarization.hpp"
#include "kdoptics/space_angular.hpp"
#include "kdoptics/wigner.hpp"

namespace kdoptics::cli {

namespace {

using nlohmann::json;
using pol::Complex;
constexpr double kPi = std::numbers::pi;

// --- output helpers -------------------------------------------------------------

class CsvWriter {
 public:
  CsvWriter(RunContext& ctx, const std::string& name, const char* header) {
    const std::filesystem::path path = ctx.out_dir / name;
    f_ = std::fopen(path.string().c_str(), "w");
    if (!f_) throw std::runtime_error("cannot write '" + path.string() + "'");
    std::fprintf(f_, "%s\n", header);
    ctx.files.push_back(name);
  }
  ~CsvWriter() { std::fclose(f_); }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  // Values joined by commas, 17 significant digits.
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      std::fprintf(f_, first ? "%.16e" : ",%.16e", v);
      first = false;
    }
    std::fputc('\n', f_);
  }

 private:
  std::FILE* f_;
};

std::string line(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

json cjson(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::string label(int a, int b) { return std::string(a > 0 ? "+" : "-") + (b > 0 ? "+" : "-"); }

json table_json(const pol::KDTable& k) {
  json out = json::object();
  for (int a : kSigns)
    for (int b : kSigns) out[label(a, b)] = cjson(k(a, b));
  return out;
}

json real_table_json(const SignTable<double>& t) {
  json out = json::object();
  for (int a : kSigns)
    for (int b : kSigns) out[label(a, b)] = t(a, b);
  return out;
}

void write_kd_table(RunContext& ctx, const std::string& name, const pol::KDTable& k) {
  CsvWriter csv(ctx, name, "a,b,re,im");
  for (int a : kSigns)
    for (int b : kSigns) csv.row({double(a), double(b), k(a, b).real(), k(a, b).imag()});
}

void write_kd_map(RunContext& ctx, const std::string& name, const space::KDMap& m) {
  CsvWriter csv(ctx, name, "x,p,re,im,abs");
  for (std::size_t i = 0; i < m.xgrid.n; ++i)
    for (std::size_t l = 0; l < m.pgrid.m; ++l) {
      const Complex v = m(i, l);
      csv.row({m.xgrid.x(i), m.pgrid.p(l), v.real(), v.imag(), std::abs(v)});
    }
}

json map_summary(const space::KDMap& m) {
  const double peak = m.values.cwiseAbs().maxCoeff();
  return {{"total", cjson(m.total())},
          {"max_abs", peak},
          {"min_re", m.values.real().minCoeff()},
          {"max_abs_im", m.values.imag().cwiseAbs().maxCoeff()},
          {"nx", m.xgrid.n},
          {"np", m.pgrid.m},
          {"dx", m.xgrid.dx},
          {"dp", m.pgrid.dp}};
}

double rel_linf(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

void adopt_warnings(RunContext& ctx, const std::vector<std::string>& w) {
  ctx.warnings.insert(ctx.warnings.end(), w.begin(), w.end());
}

void check_budget(RunContext& ctx, double err, double budget, const std::string& what) {
  if (!(err <= budget)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3e exceeds budget %.1e", what.c_str(), err, budget);
    ctx.budget_failures.push_back(buf);
  }
}

// --- grids from config ----------------------------------------------------------

space::SpatialGrid read_spatial(Section& parent, const std::string& key, std::size_t n, double half_width,
                                double center, double k) {
  Section s = parent.child(key);
  const std::size_t nn = s.count("n", n);
  const double hw = s.number("half_width", half_width);
  const double c = s.number("center", center);
  parent.adopt(key, s);
  return space::SpatialGrid::spanning(nn, hw, c, k);
}

space::AngularGrid read_angular(Section& parent, const std::string& key, std::size_t m, double p_max) {
  Section s = parent.child(key);
  const std::size_t mm = s.count("m", m);
  const double pm = s.number("p_max", p_max);
  parent.adopt(key, s);
  return space::AngularGrid::spanning(mm, pm);
}

// --- scenarios ------------------------------------------------------------------

json run_pol(Section& cfg, RunContext& ctx) {
  const pol::StokesVector s = cfg.stokes("stokes", {0.0, 0.0, 0.4});
  const double intensity = cfg.number("intensity", 1.0);
  const pol::BasisAxis A = cfg.axis("axis_a", "x");
  const pol::BasisAxis B = cfg.axis("axis_b", "y");
  cfg.finish();

  const pol::PolarizationMatrix g = pol::gamma_from_stokes(s, intensity);
  const pol::KDTable k = pol::kd_closed_form(g, A, B);
  const pol::KDTable oracle = pol::kd_oracle(g, A, B);
  double diff = 0.0;
  for (int a : kSigns)
    for (int b : kSigns) diff = std::max(diff, std::abs(k(a, b) - oracle(a, b)));
  write_kd_table(ctx, "kd.csv", k);
  ctx.log.push_back(line("K(+,+) = %.12g %+.12gi", k(1, 1).real(), k(1, 1).imag()));

  json imag = json::object();
  for (int a : kSigns)
    for (int b : kSigns) imag[label(a, b)] = pol::kd_imaginary_part(g, A, B, a, b);
  return {{"kd", table_json(k)},
          {"margenau_hill", real_table_json(pol::margenau_hill(k))},
          {"imaginary_part", imag},
          {"oracle_max_abs_diff", diff},
          {"total", cjson(k.sum())},
          {"degree_of_polarization", pol::degree_of_polarization(g)},
          {"abs2_sum", pol::kd_abs2_sum(k)},
          {"abs2_sum_formula", pol::kd_abs2_sum_formula(g, A, B)}};
}

json run_mzi(Section& cfg, RunContext& ctx) {
  const pol::StokesVector s = cfg.stokes("stokes", {0.0, 0.0, 0.4});
  const pol::BasisAxis A = cfg.axis("axis_a", "x");
  const pol::BasisAxis B = cfg.axis("axis_b", "y");
  const int a = cfg.sign("a", 1);
  const int b = cfg.sign("b", 1);
  const std::size_t phases = cfg.count("phases", 16);
  const std::size_t samples = cfg.count("samples", 0);
  Section sp = cfg.child("splitter");
  const Complex r = sp.complex("r", Complex(0.0, std::sqrt(0.5)));
  const Complex t = sp.complex("t", Complex(std::sqrt(0.5), 0.0));
  cfg.adopt("splitter", sp);
  cfg.finish();

  const mzi::SplitterConfig split(r, t);
  const pol::PolarizationMatrix g = pol::gamma_from_stokes(s);
  const Complex want = pol::kd_closed_form(g, A, B)(a, b);
  const mzi::PhaseScan scan = mzi::simulate_scan(g, A, B, a, b, phases, split);
  {
    CsvWriter csv(ctx, "scan.csv", "phi,intensity");
    for (std::size_t j = 0; j < scan.size(); ++j) csv.row({scan.phases()[j], scan.intensities()[j]});
  }
  const Complex got = mzi::phase_scan_reconstruct(scan, split);
  const double mh = mzi::extract_mh(mzi::mzi_intensity(g, A, B, a, b, 0.0, split),
                                    mzi::mzi_intensity(g, A, B, a, b, kPi, split), split);
  ctx.log.push_back(line("reconstructed K = %.12g %+.12gi", got.real(), got.imag()));
  json out = {{"kd_closed_form", cjson(want)},
              {"kd_reconstructed", cjson(got)},
              {"reconstruction_error", std::abs(got - want)},
              {"margenau_hill_two_phase", mh}};
  if (samples > 0) {
    const mzi::FieldEnsemble e = mzi::sample_ensemble(g, samples, ctx.seed);
    const mzi::PhaseScan es = mzi::ensemble_scan(e, A, B, a, b, phases, split);
    {
      CsvWriter csv(ctx, "ensemble_scan.csv", "phi,intensity");
      for (std::size_t j = 0; j < es.size(); ++j) csv.row({es.phases()[j], es.intensities()[j]});
    }
    const mzi::EnsembleEstimate est = mzi::ensemble_reconstruct(e, A, B, a, b, phases, split);
    out["ensemble"] = {{"samples", samples},
                       {"kd", cjson(est.value)},
                       {"stderr_re", est.stderr_re},
                       {"stderr_im", est.stderr_im},
                       {"z_re", (est.value.real() - want.real()) / est.stderr_re},
                       {"z_im", (est.value.imag() - want.imag()) / est.stderr_im}};
  }
  return out;
}

json run_noisy(Section& cfg, RunContext& ctx) {
  const pol::StokesVector s = cfg.stokes("stokes", {0.0, 0.0, 0.4});
  const pol::StokesVector gam = cfg.stokes("gamma", {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)});
  cfg.finish();
  const noisy::NoiseParameters n(gam.x, gam.y, gam.z);
  const noisy::JointIntensityTable joint = noisy::noisy_intensity(s, n);
  {
    CsvWriter csv(ctx, "joint.csv", "x,y,intensity");
    for (int x : kSigns)
      for (int y : kSigns) csv.row({double(x), double(y), joint(x, y)});
  }
  const pol::KDTable k = noisy::reconstruct_kd(joint, n);
  write_kd_table(ctx, "kd.csv", k);
  ctx.log.push_back(line("reconstructed K(+,+) = %.12g %+.12gi", k(1, 1).real(), k(1, 1).imag()));
  return {{"joint_intensity", real_table_json(joint)},
          {"kd_reconstructed", table_json(k)},
          {"kd_closed_form", table_json(pol::kd_closed_form(pol::gamma_from_stokes(s), pol::x_axis(), pol::y_axis()))}};
}

json run_space(Section& cfg, RunContext& ctx) {
  const std::string beam = cfg.text("beam", "gauss-schell");
  const double k = cfg.number("k", 1.0);
  const double sigma = cfg.number("sigma", 1.0);
  const double mu = beam == "gauss-schell" ? cfg.number("mu", 1.0) : 0.0;
  const double center = beam == "gauss-schell" ? 0.0 : cfg.number("center", 0.0);
  const space::SpatialGrid xg = read_spatial(cfg, "grid", 256, 8.0 * sigma, center, k);
  // Default band: |K| below ~1e-12 of its peak (Gauss-Schell) or e^{-36} (coherent).
  const double band = beam == "gauss-schell" && mu > 0.0 && sigma > 0.0
                          ? std::sqrt(27.63 / space::GaussSchellKD({sigma, mu}, k).gamma_p()) / k
                          : 6.0 / (k * sigma);
  const space::AngularGrid pg = read_angular(cfg, "angular", 129, band);
  cfg.finish();

  const auto kernel = [&]() -> space::CoherenceKernel {
    if (beam == "gauss-schell") return space::gauss_schell_kernel({sigma, mu}, xg);
    if (beam == "coherent") return space::gaussian_beam_kernel(center, sigma, xg);
    if (beam == "incoherent") {
      std::vector<double> rho(xg.n);
      for (std::size_t j = 0; j < xg.n; ++j) {
        const double d = xg.x(j) - center;
        rho[j] = std::exp(-d * d / (2.0 * sigma * sigma)) / std::sqrt(2.0 * kPi * sigma * sigma);
      }
      return space::incoherent_kernel(rho, xg);
    }
    throw ConfigError("config field 'beam' must be \"gauss-schell\", \"coherent\" or \"incoherent\"");
  }();
  const space::KDMap m = space::kd_map(kernel, pg, ctx.threads);
  adopt_warnings(ctx, m.warnings);
  write_kd_map(ctx, "kd.csv", m);
  json out = map_summary(m);
  ctx.log.push_back(line("sum K dx dp = %.12g %+.3ei", m.total().real(), m.total().imag()));
  out["intensity_trace"] = kernel.trace();
  out["purity_integral"] = space::purity_integral(m);
  out["purity_trace_scaled"] = k / (2.0 * kPi) * kernel.purity_trace();
  out["boundary_ratio"] = kernel.boundary_ratio();
  return out;
}

json run_young(Section& cfg, RunContext& ctx) {
  const space::YoungParams y{cfg.number("x0", 1.0), cfg.number("i_plus", 0.2), cfg.number("i_minus", 0.8),
                             cfg.number("mu", 1.0)};
  const double k = cfg.number("k", 1.0);
  const double width = cfg.number("width", y.x0 / 50.0);
  Section gs = cfg.child("grid");
  const std::size_t n = gs.count("n", 768);
  const double dx = gs.number("dx", 0.005);
  cfg.adopt("grid", gs);
  const space::AngularGrid pg = read_angular(cfg, "angular", 101, kPi / (k * std::abs(y.x0)));
  cfg.finish();

  const space::SpatialGrid xg(n, dx, 0.0, k);
  const space::YoungKD closed = space::young_kd_closed(y, k);
  const space::YoungApertureKD est = space::young_narrow_aperture_kd(y, width, xg, pg);
  double err = 0.0, peak = 0.0, min_closed = 0.0, min_model = 0.0;
  {
    CsvWriter csv(ctx, "kd.csv", "side,p,re,im,re_closed,im_closed");
    for (int side : kSigns)
      for (std::size_t l = 0; l < pg.m; ++l) {
        const double p = pg.p(l);
        const Complex v = side > 0 ? est.plus[l] : est.minus[l];
        const Complex c = closed(side, p);
        csv.row({double(side), p, v.real(), v.imag(), c.real(), c.imag()});
        err = std::max(err, std::abs(v - c));
        peak = std::max(peak, std::abs(c));
        min_closed = std::min(min_closed, c.real());
        min_model = std::min(min_model, v.real());
      }
  }
  ctx.log.push_back(line("relative error vs closed form %.3e; min Re K %.6g", err / peak, min_closed));
  return {{"relative_error", err / peak},
          {"min_re_closed", min_closed},
          {"min_re_model", min_model},
          {"negative_real_part", min_closed < 0.0}};
}

json run_gauss_schell(Section& cfg, RunContext& ctx) {
  const space::GaussSchellParams gs{cfg.number("sigma", 1.0), cfg.number("mu", 1.0)};
  const double k = cfg.number("k", 1.0);
  gs.validate();
  const space::GaussSchellKD closed(gs, k);
  const space::SpatialGrid xg = read_spatial(cfg, "grid", 512, 8.0 * gs.sigma, 0.0, k);
  const space::AngularGrid pg = read_angular(cfg, "angular", 129, std::sqrt(27.63 / closed.gamma_p()) / k);
  const double budget = cfg.number("budget", 1e-6);
  cfg.finish();

  const space::CoherenceKernel g = space::gauss_schell_kernel(gs, xg);
  const space::KDMap m = space::kd_map(g, pg, ctx.threads);
  adopt_warnings(ctx, m.warnings);
  write_kd_map(ctx, "kd.csv", m);
  const double err = rel_linf(m.values, closed.sample(xg, pg).values);
  json out = map_summary(m);
  out["k0"] = closed.k0();
  out["gamma"] = closed.gamma();
  out["gamma_x"] = closed.gamma_x();
  out["gamma_p"] = closed.gamma_p();
  out["closed_at_origin"] = cjson(closed(0.0, 0.0));
  if (pg.m % 2 == 1) out["grid_at_origin"] = cjson(m(xg.index_of(0.0), pg.m / 2));
  out["relative_linf_vs_closed"] = err;
  out["purity_integral"] = space::purity_integral(m);
  out["purity_closed"] = k / (2.0 * kPi) * gs.mu / std::sqrt(gs.mu * gs.mu + 2.0 * gs.sigma * gs.sigma);
  ctx.log.push_back(line("relative Linf vs closed form: %.3e", err));
  check_budget(ctx, err, budget, "relative Linf error vs closed form");
  return out;
}

json run_wigner(Section& cfg, RunContext& ctx) {
  const space::GaussSchellParams gs{cfg.number("sigma", 1.0), cfg.number("mu", 1.0)};
  const double k = cfg.number("k", 1.0);
  const double tail = cfg.number("tail", 1e-10);
  const double budget = cfg.number("budget", 1e-3);
  cfg.finish();
  gs.validate();

  const wigner::GridPair gp = wigner::gauss_schell_certified_grids(gs, k, tail);
  const space::CoherenceKernel g = space::gauss_schell_kernel(gs, gp.x);
  const wigner::WignerMap w = wigner::wigner_from_kernel(g, gp.p, ctx.threads);
  const space::KDMap chain = wigner::kd_from_wigner_continuous(w, ctx.threads);
  const space::KDMap direct = space::kd_map(g, gp.p, ctx.threads);
  adopt_warnings(ctx, w.warnings);
  {
    CsvWriter csv(ctx, "wigner.csv", "x,p,w");
    for (std::size_t i = 0; i < gp.x.n; ++i)
      for (std::size_t l = 0; l < gp.p.m; ++l) csv.row({gp.x.x(i), gp.p.p(l), w.values(i, l)});
  }
  write_kd_map(ctx, "kd_chain.csv", chain);
  const double e_direct = rel_linf(chain.values, direct.values);
  const double e_closed = rel_linf(chain.values, space::gauss_schell_kd_closed(gs, k).sample(gp.x, gp.p).values);
  const Complex factor = (direct.values.conjugate().cwiseProduct(chain.values)).sum() / direct.values.cwiseAbs2().sum();
  json out = map_summary(chain);
  out["wigner_total"] = w.total();
  out["wigner_max_imag"] = w.max_imag;
  out["wigner_min"] = w.values.minCoeff();
  out["relative_linf_vs_kd_map"] = e_direct;
  out["relative_linf_vs_closed"] = e_closed;
  out["chain_factor"] = cjson(factor);
  ctx.log.push_back(line("chain relative Linf: %.3e vs kd_map, %.3e vs closed form", e_direct, e_closed));
  check_budget(ctx, std::max(e_direct, e_closed), budget, "Wigner chain relative Linf error");
  return out;
}

json run_wigner_pol(Section& cfg, RunContext& ctx) {
  const pol::StokesVector s = cfg.stokes("stokes", {0.0, 0.0, 0.4});
  cfg.finish();
  const wigner::DiscreteWignerTable w = wigner::discrete_wigner(s);
  {
    CsvWriter csv(ctx, "wigner.csv", "x,y,w");
    for (int x : kSigns)
      for (int y : kSigns) csv.row({double(x), double(y), w(x, y)});
  }
  const pol::KDTable k = wigner::kd_from_discrete_wigner(w);
  write_kd_table(ctx, "kd.csv", k);
  const pol::KDTable closed = pol::kd_closed_form(pol::gamma_from_stokes(s), pol::x_axis(), pol::y_axis());
  double diff = 0.0;
  for (int a : kSigns)
    for (int b : kSigns) diff = std::max(diff, std::abs(k(a, b) - closed(a, b)));
  ctx.log.push_back(line("max |chain - closed form| = %.3e", diff));
  return {{"wigner", real_table_json(w)}, {"kd", table_json(k)}, {"closed_form_max_abs_diff", diff}};
}

json run_fig3(Section& cfg, RunContext& ctx) {
  Fig3Config f;
  f.x0 = cfg.number("x0", f.x0);
  f.sigma = cfg.number("sigma", f.sigma);
  f.k = cfg.number("k", f.k);
  f.window_x = cfg.number("window_x", 4.0 * f.sigma);
  f.window_p = cfg.number("window_p", 4.0 / (f.k * f.sigma));
  f.nx = cfg.count("nx", f.nx);
  f.np = cfg.count("np", f.np);
  f.coherence_length = cfg.number("coherence_length", f.coherence_length);
  cfg.finish();
  const space::KDMap m = fig3_map(f, ctx.threads);
  adopt_warnings(ctx, m.warnings);
  write_kd_map(ctx, "kd.csv", m);
  json out = map_summary(m);
  const double peak = out["max_abs"].get<double>();
  out["negative_real_part"] = out["min_re"].get<double>() < 0.0;
  out["imaginary_ratio"] = out["max_abs_im"].get<double>() / peak;
  ctx.log.push_back(line("min Re K / max|K| = %.4g; max|Im K| / max|K| = %.4g", out["min_re"].get<double>() / peak,
                         out["imaginary_ratio"].get<double>()));
  return out;
}

json run_selfcheck(Section& cfg, RunContext& ctx) {
  cfg.finish();
  const std::vector<CheckResult> results = run_checks(ctx.threads);
  json list = json::array();
  std::size_t failed = 0;
  for (const CheckResult& r : results) {
    ctx.log.push_back(format_check(r));
    failed += r.passed ? 0 : 1;
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  ctx.log.push_back(std::to_string(results.size() - failed) + " passed, " + std::to_string(failed) + " failed");
  json out = {{"checks", list}, {"passed", results.size() - failed}, {"failed", failed}};
  if (failed > 0) ctx.budget_failures.push_back(std::to_string(failed) + " self-check(s) failed");
  return out;
}

}  // namespace

const std::map<std::string, Scenario>& scenarios() {
  static const std::map<std::string, Scenario> table = {
      {"pol", run_pol},
      {"mzi", run_mzi},
      {"noisy", run_noisy},
      {"space", run_space},
      {"young", run_young},
      {"gauss-schell", run_gauss_schell},
      {"wigner", run_wigner},
      {"wigner-pol", run_wigner_pol},
      {"fig3", run_fig3},
      {"selfcheck", run_selfcheck},
  };
  return table;
}

}  // namespace kdoptics::cli
