#include "kdoptics/cli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "kdoptics/cli/fig3.hpp"
#include "kdoptics/mzi.hpp"
#include "kdoptics/noisy_joint.hpp"
#include "kdoptics/polarization.hpp"
#include "kdoptics/sampling.hpp"
#include "kdoptics/space_angular.hpp"
#include "kdoptics/wigner.hpp"

namespace kdoptics::cli {

namespace {

using namespace kdoptics::pol;
using sampling::random_axis;
using sampling::random_orthogonal_axis;
using sampling::random_stokes;
using space::GaussSchellParams;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

double rel_linf(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

double table_diff(const KDTable& x, const KDTable& y) {
  double err = 0.0;
  for (int a : kSigns)
    for (int b : kSigns) err = std::max(err, std::abs(x(a, b) - y(a, b)));
  return err;
}

const GaussSchellParams kSettings[] = {{1.0, 1.0}, {1.0, 0.25}, {0.5, 2.0}};

Outcome marginals() {
  std::mt19937_64 rng(1001);
  double err = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const PolarizationMatrix g = gamma_from_stokes(random_stokes(rng));
    const BasisAxis A = random_axis(rng), B = random_axis(rng);
    for (const KDTable& k : {kd_closed_form(g, A, B), kd_oracle(g, A, B)}) {
      for (int s : kSigns) {
        const Jones a = basis_jones(A, s), b = basis_jones(B, s);
        err = std::max(err, std::abs(k(s, 1) + k(s, -1) - g.element(a, a)));
        err = std::max(err, std::abs(k(1, s) + k(-1, s) - g.element(b, b)));
      }
      err = std::max(err, std::abs(k.sum() - 1.0));
    }
  }
  return {err <= 1e-12, fmt("max marginal/normalization error %.3e", err)};
}

Outcome closed_vs_oracle() {
  std::mt19937_64 rng(1002);
  double err = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const PolarizationMatrix g = gamma_from_stokes(random_stokes(rng));
    const BasisAxis A = random_axis(rng), B = random_axis(rng);
    err = std::max(err, table_diff(kd_closed_form(g, A, B), kd_oracle(g, A, B)));
  }
  return {err <= 1e-12, fmt("max |closed - oracle| %.3e", err)};
}

Outcome purity_identity() {
  std::mt19937_64 rng(1003);
  double err = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const PolarizationMatrix g = gamma_from_stokes(random_stokes(rng));
    const BasisAxis A = random_axis(rng);
    const BasisAxis B = random_orthogonal_axis(A, rng);
    const double p = degree_of_polarization(g);
    err = std::max(err, std::abs(kd_abs2_sum(kd_closed_form(g, A, B)) - (1.0 + p * p) / 4.0));
  }
  return {err <= 1e-12, fmt("max |sum|K|^2 - (1+P^2)/4| %.3e", err)};
}

Outcome mzi_reconstruction() {
  using namespace kdoptics::mzi;
  std::mt19937_64 rng(1004);
  double exact_err = 0.0;
  const SplitterConfig splitters[] = {SplitterConfig::balanced(),
                                      SplitterConfig(Complex(0.3, 0.4), Complex(0.0, 0.6))};
  for (int n = 0; n < 100; ++n) {
    const PolarizationMatrix g = gamma_from_stokes(random_stokes(rng));
    const BasisAxis A = random_axis(rng), B = random_axis(rng);
    const int a = kSigns[n % 2], b = kSigns[(n / 2) % 2];
    const Complex want = kd_closed_form(g, A, B)(a, b);
    for (const SplitterConfig& s : splitters)
      for (std::size_t count : {3u, 4u, 64u})
        exact_err = std::max(exact_err, std::abs(phase_scan_reconstruct(simulate_scan(g, A, B, a, b, count, s), s) - want));
  }

  struct Case {
    StokesVector s;
    int a, b;
    std::uint64_t seed;
  };
  const Case cases[] = {{{0, 0, 0.4}, 1, 1, 4001}, {{0.6, 0, 0.8}, 1, -1, 4002}};
  double worst_z = 0.0;
  for (const Case& c : cases) {
    const PolarizationMatrix g = gamma_from_stokes(c.s);
    const Complex want = kd_closed_form(g, x_axis(), y_axis())(c.a, c.b);
    const FieldEnsemble e = sample_ensemble(g, 100000, c.seed);
    const EnsembleEstimate est = ensemble_reconstruct(e, x_axis(), y_axis(), c.a, c.b, 8, SplitterConfig::balanced());
    worst_z = std::max({worst_z, std::abs(est.value.real() - want.real()) / est.stderr_re,
                        std::abs(est.value.imag() - want.imag()) / est.stderr_im});
  }
  return {exact_err <= 1e-12 && worst_z <= 3.0,
          fmt("exact scans max error %.3e; ensemble worst deviation %.2f standard errors", exact_err, worst_z)};
}

Outcome noisy_round_trip() {
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const auto noise = [&] {
    const double gx = u(rng), gy = u(rng), gxy = u(rng);
    const double scale = u(rng) / std::sqrt(gx * gx + gy * gy + gxy * gxy);
    return noisy::NoiseParameters(gx * scale, gy * scale, gxy * scale);
  };
  double err = 0.0, spread = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const StokesVector s = random_stokes(rng);
    const noisy::NoiseParameters n1 = noise(), n2 = noise();
    const KDTable r1 = noisy::reconstruct_kd(noisy::noisy_intensity(s, n1), n1);
    const KDTable r2 = noisy::reconstruct_kd(noisy::noisy_intensity(s, n2), n2);
    for (int x : kSigns)
      for (int y : kSigns)
        err = std::max(err, std::abs(r1(x, y) - Complex(1.0 + x * s.x + y * s.y, x * y * s.z) / 4.0));
    spread = std::max(spread, table_diff(r1, r2));
  }
  return {err <= 1e-12 && spread <= 1e-12,
          fmt("max reconstruction error %.3e; noise dependence %.3e", err, spread)};
}

space::AngularGrid gauss_schell_band(const GaussSchellParams& gs, double k, std::size_t m) {
  return space::AngularGrid::spanning(m, std::sqrt(27.63 / space::GaussSchellKD(gs, k).gamma_p()) / k);
}

Outcome gauss_schell_closed(unsigned threads) {
  std::string detail = "relative Linf";
  bool ok = true;
  for (const GaussSchellParams& gs : kSettings) {
    const space::SpatialGrid xg = space::SpatialGrid::spanning(512, 8.0 * gs.sigma);
    const space::AngularGrid pg = gauss_schell_band(gs, 1.0, 129);
    const space::KDMap grid = space::kd_map(space::gauss_schell_kernel(gs, xg), pg, threads);
    const double err = rel_linf(grid.values, space::gauss_schell_kd_closed(gs, 1.0).sample(xg, pg).values);
    ok = ok && err <= 1e-6;
    detail += fmt(" (%g,%g): %.3e", gs.sigma, gs.mu, err);
  }
  return {ok, detail};
}

Outcome diagonal_reality(unsigned threads) {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_im = 0.0, worst_re = 0.0;
  for (double k : {1.0, 6.0, 40.0}) {
    const space::SpatialGrid g = space::SpatialGrid::spanning(128, 3.0, 0.4, k);
    std::vector<double> rho(g.n);
    for (double& r : rho) r = u(rng);
    const space::KDMap m = space::kd_map(space::incoherent_kernel(rho, g), space::AngularGrid::spanning(65, 12.0), threads);
    const double peak = m.values.cwiseAbs().maxCoeff();
    worst_im = std::max(worst_im, m.values.imag().cwiseAbs().maxCoeff() / peak);
    worst_re = std::max(worst_re, -m.values.real().minCoeff() / peak);
  }
  return {worst_im <= 1e-10 && worst_re <= 1e-10,
          fmt("max|Im K|/max|K| %.3e; -min Re K/max|K| %.3e", worst_im, worst_re)};
}

Outcome continuous_purity(unsigned threads) {
  std::string detail = "relative error";
  bool ok = true;
  for (const GaussSchellParams& gs : kSettings) {
    const wigner::GridPair gp = wigner::gauss_schell_certified_grids(gs, 1.0);
    const space::KDMap m = space::kd_map(space::gauss_schell_kernel(gs, gp.x), gp.p, threads);
    const double want = 1.0 / (2.0 * kPi) * gs.mu / std::sqrt(gs.mu * gs.mu + 2.0 * gs.sigma * gs.sigma);
    const double err = std::abs(space::purity_integral(m) - want) / want;
    ok = ok && err <= 1e-4;
    detail += fmt(" (%g,%g): %.3e", gs.sigma, gs.mu, err);
  }
  return {ok, detail};
}

Outcome young_two_slit() {
  const double k = 1.0;
  const space::YoungParams y{1.0, 0.2, 0.8, 1.0};
  const space::SpatialGrid xg(768, 0.005, 0.0, k);
  const space::AngularGrid pg = space::AngularGrid::spanning(101, kPi / (k * y.x0));
  const space::YoungKD closed = space::young_kd_closed(y, k);
  const space::YoungApertureKD est = space::young_narrow_aperture_kd(y, y.x0 / 50.0, xg, pg);
  double err = 0.0, peak = 0.0, min_closed = 0.0, min_model = 0.0;
  for (std::size_t l = 0; l < pg.m; ++l) {
    const double p = pg.p(l);
    err = std::max({err, std::abs(est.plus[l] - closed(1, p)), std::abs(est.minus[l] - closed(-1, p))});
    peak = std::max({peak, std::abs(closed(1, p)), std::abs(closed(-1, p))});
    min_closed = std::min({min_closed, closed(1, p).real(), closed(-1, p).real()});
    min_model = std::min({min_model, est.plus[l].real(), est.minus[l].real()});
  }
  err /= peak;
  return {err <= 1e-2 && min_closed < 0.0 && min_model < 0.0,
          fmt("relative error at w = x0/50 %.3e; min Re K closed %.4f, model %.4f", err, min_closed, min_model)};
}

Outcome wigner_chains(unsigned threads) {
  std::mt19937_64 rng(1010);
  double discrete = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const StokesVector s = random_stokes(rng);
    discrete = std::max(discrete, table_diff(wigner::kd_from_discrete_wigner(wigner::discrete_wigner(s)),
                                             kd_closed_form(gamma_from_stokes(s), x_axis(), y_axis())));
  }
  bool ok = discrete <= 1e-13;
  std::string detail = fmt("discrete %.3e; continuous", discrete);
  for (const GaussSchellParams& gs : kSettings) {
    const wigner::GridPair gp = wigner::gauss_schell_certified_grids(gs, 1.0);
    const space::CoherenceKernel g = space::gauss_schell_kernel(gs, gp.x);
    const space::KDMap chain = wigner::kd_from_wigner_continuous(wigner::wigner_from_kernel(g, gp.p, threads), threads);
    const space::KDMap direct = space::kd_map(g, gp.p, threads);
    const double e_direct = rel_linf(chain.values, direct.values);
    const double e_closed = rel_linf(chain.values, space::gauss_schell_kd_closed(gs, 1.0).sample(gp.x, gp.p).values);
    // Least-squares constant relating the chain to the direct map.
    const Complex factor = (direct.values.conjugate().cwiseProduct(chain.values)).sum() / direct.values.cwiseAbs2().sum();
    ok = ok && e_direct <= 1e-3 && e_closed <= 1e-3;
    detail += fmt(" (%g,%g): %.3e vs kd_map, %.3e vs closed form,", gs.sigma, gs.mu, e_direct, e_closed);
    detail += fmt(" factor %.9f%+.1e i", factor.real(), factor.imag());
  }
  return {ok, detail};
}

Outcome fig3(unsigned threads) {
  const space::KDMap m = fig3_map(Fig3Config{}, threads);
  const double peak = m.values.cwiseAbs().maxCoeff();
  const double min_re = m.values.real().minCoeff();
  const double max_im = m.values.imag().cwiseAbs().maxCoeff();
  return {min_re < 0.0 && max_im > 0.01 * peak && m.warnings.empty(),
          fmt("min Re K/max|K| %.4f; max|Im K|/max|K| %.4f", min_re / peak, max_im / peak)};
}

Outcome anomaly_geometry() {
  std::mt19937_64 rng(1012);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PolarizationMatrix balanced = gamma_from_stokes({0, 0, 0});
  double min_re = 0.0, max_im = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const KDTable k = kd_closed_form(balanced, random_axis(rng), random_axis(rng));
    for (const Complex& v : k.values.raw()) min_re = std::min(min_re, v.real());

    const double phi = 2.0 * ang(rng);
    const BasisAxis A = BasisAxis::from_angles(ang(rng), phi);
    const BasisAxis B = BasisAxis::from_angles(ang(rng), phi);
    const KDTable c = kd_closed_form(gamma_from_stokes({0, 0, u(rng)}), A, B);
    for (const Complex& v : c.values.raw()) max_im = std::max(max_im, std::abs(v.imag()));
  }
  return {min_re >= -1e-12 && max_im <= 1e-12,
          fmt("balanced min Re K %.3e; equal-azimuth max|Im K| %.3e", min_re, max_im)};
}

}  // namespace

std::vector<CheckResult> run_checks(unsigned threads) {
  struct Entry {
    int id;
    const char* name;
    double time_limit;  // seconds; 0 for none
    std::function<Outcome()> body;
  };
  const std::vector<Entry> entries = {
      {1, "marginals and normalization", 1.0, marginals},
      {2, "closed form matches matrix oracle", 1.0, closed_vs_oracle},
      {3, "purity identity for orthogonal axes", 0.0, purity_identity},
      {4, "mach-zehnder reconstruction", 30.0, mzi_reconstruction},
      {5, "noisy joint round trip", 0.0, noisy_round_trip},
      {6, "gauss-schell grid vs closed form", 60.0, [threads] { return gauss_schell_closed(threads); }},
      {7, "incoherent kernels are real and nonnegative", 0.0, [threads] { return diagonal_reality(threads); }},
      {8, "continuous purity", 0.0, [threads] { return continuous_purity(threads); }},
      {9, "young two-slit", 0.0, young_two_slit},
      {10, "wigner chains", 0.0, [threads] { return wigner_chains(threads); }},
      {11, "off-axis gaussian beam anomalies", 10.0, [threads] { return fig3(threads); }},
      {12, "anomaly geometry", 0.0, anomaly_geometry},
  };
  std::vector<CheckResult> out;
  for (const Entry& e : entries) {
    CheckResult r{e.id, e.name, false, {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = e.body();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.time_limit > 0.0 && r.seconds >= e.time_limit) {
      r.passed = false;
      r.detail += fmt("; exceeded %.0f s limit", e.time_limit);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_check(const CheckResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%s criterion %2d: %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace kdoptics::cli
