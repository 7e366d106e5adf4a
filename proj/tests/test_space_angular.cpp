#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kdoptics/mzi.hpp"
#include "kdoptics/space_angular.hpp"

using namespace kdoptics;
using namespace kdoptics::space;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_linf(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

// Band outside which the Gauss-Schell distribution is below 1e-12 of its peak.
AngularGrid gauss_schell_band(const GaussSchellParams& gs, double k, std::size_t m) {
  const GaussSchellKD kd(gs, k);
  return AngularGrid::spanning(m, std::sqrt(27.63 / kd.gamma_p()) / k);
}

}  // namespace

TEST_CASE("grids") {
  const SpatialGrid g(8, 0.5, 1.0, 2.0);
  CHECK(g.x(4) == 1.0);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 2.5);
  CHECK(g.index_of(2.0) == 6);
  CHECK_THROWS_AS(g.index_of(2.2), PreconditionError);
  CHECK_THROWS_AS(g.index_of(3.0), PreconditionError);
  CHECK_THROWS_AS(SpatialGrid(1, 0.1), PreconditionError);
  CHECK_THROWS_AS(SpatialGrid(4, 0.1, 0.0, 0.0), PreconditionError);
  const SpatialGrid s = SpatialGrid::spanning(512, 8.0);
  CHECK(s.front() == -8.0);
  CHECK(std::abs(s.dx - 1.0 / 32.0) < 1e-15);

  const AngularGrid p = AngularGrid::spanning(5, 2.0);
  CHECK(p.p(0) == -2.0);
  CHECK(p.p(2) == 0.0);
  CHECK(p.p_max() == 2.0);
}

TEST_CASE("plane wave overlap") {
  const double k = 3.0;
  const Complex v = plane_wave_overlap(0.7, -1.1, k);
  CHECK(std::abs(std::abs(v) - std::sqrt(k / (2.0 * kPi))) < 1e-15);
  CHECK(std::abs(std::arg(v) - std::remainder(k * 0.7 * -1.1, 2.0 * kPi)) < 1e-12);
  CHECK(plane_wave_overlap(0.0, 5.0, 1.0).imag() == 0.0);
}

TEST_CASE("coherence kernel validation") {
  const SpatialGrid g(3, 0.5);
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(3, 3);
  v(0, 1) = Complex(0.2, 0.1);
  CHECK_THROWS_AS(CoherenceKernel(g, v), PreconditionError);
  v(1, 0) = std::conj(v(0, 1));
  CHECK_NOTHROW(CoherenceKernel(g, v));
  v(0, 1) = v(1, 0) = 2.0;
  CHECK_THROWS_AS(CoherenceKernel(g, v), PreconditionError);
  CHECK_THROWS_AS(CoherenceKernel(g, Eigen::MatrixXcd::Identity(2, 2)), PreconditionError);

  const CoherenceKernel d(g, Eigen::MatrixXcd::Identity(3, 3) * 2.0);
  CHECK(std::abs(d.trace() - 3.0) < 1e-15);
  CHECK(std::abs(d.purity_trace() - 3.0) < 1e-15);
  CHECK(d.boundary_ratio() == 1.0);
}

TEST_CASE("incoherent kernels give real nonnegative distributions") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double k : {1.0, 6.0, 40.0}) {
    const SpatialGrid g = SpatialGrid::spanning(96, 3.0, 0.4, k);
    std::vector<double> rho(g.n);
    for (std::size_t j = 0; j < g.n; ++j) rho[j] = (j % 7 == 0) ? 0.0 : u(rng);
    const KDMap m = kd_map(incoherent_kernel(rho, g), AngularGrid::spanning(41, 10.0));
    const double peak = m.values.cwiseAbs().maxCoeff();
    CHECK(m.values.imag().cwiseAbs().maxCoeff() <= 1e-10 * peak);
    CHECK(m.values.real().minCoeff() >= -1e-10 * peak);
    for (std::size_t i = 0; i < g.n; ++i)
      CHECK(std::abs(m(i, 17) - k / (2.0 * kPi) * rho[i]) <= 1e-12 * peak);
  }
  CHECK_THROWS_AS(incoherent_kernel({1.0, -0.1}, SpatialGrid(2, 1.0)), PreconditionError);
}

TEST_CASE("gauss-schell kernel preconditions") {
  const GaussSchellParams gs{1.0, 0.5};
  CHECK_THROWS_AS(gauss_schell_kernel(gs, SpatialGrid::spanning(512, 4.0)), PreconditionError);
  CHECK_THROWS_AS(gauss_schell_kernel(gs, SpatialGrid::spanning(64, 8.0)), PreconditionError);
  CHECK_THROWS_AS(gauss_schell_kernel({0.0, 1.0}, SpatialGrid::spanning(64, 8.0)), PreconditionError);
  CHECK_THROWS_AS(GaussSchellKD({1.0, -1.0}, 1.0), PreconditionError);
}

TEST_CASE("gauss-schell closed-form constants") {
  const GaussSchellKD kd({1.0, 1.0}, 1.0);
  CHECK(std::abs(kd.gamma() - 0.5) < 1e-15);
  CHECK(std::abs(kd.gamma_x() - 0.375) < 1e-15);
  CHECK(std::abs(kd.gamma_p() - 0.5) < 1e-15);
  CHECK(std::abs(kd.k0() - 1.0 / (2.0 * kPi)) < 1e-15);
  // Normalization: the p integral leaves a Gaussian in x of rate gamma_x + gamma^2 / (4 gamma_p).
  for (auto [s, m] : {std::pair{1.0, 0.25}, std::pair{0.5, 2.0}, std::pair{2.0, 3.0}}) {
    const GaussSchellKD g({s, m}, 2.5);
    const double rate = g.gamma_x() + g.gamma() * g.gamma() / (4.0 * g.gamma_p());
    const double total = g.k0() * std::sqrt(kPi / g.gamma_p()) / g.k() * std::sqrt(kPi / rate);
    CHECK(std::abs(total - 1.0) < 1e-14);
  }
}

TEST_CASE("gauss-schell grid distribution matches the closed form") {
  for (auto [s, m] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.25}, std::pair{0.5, 2.0}}) {
    const GaussSchellParams gs{s, m};
    for (double k : {1.0, 4.0}) {
      const SpatialGrid xg = SpatialGrid::spanning(512, 8.0 * s, 0.0, k);
      const AngularGrid pg = gauss_schell_band(gs, k, 129);
      const KDMap grid = kd_map(gauss_schell_kernel(gs, xg), pg);
      const KDMap closed = gauss_schell_kd_closed(gs, k).sample(xg, pg);
      CAPTURE(s);
      CAPTURE(m);
      CAPTURE(k);
      CHECK(rel_linf(grid.values, closed.values) <= 1e-6);
      CHECK(grid.warnings.empty());
    }
  }
}

TEST_CASE("gauss-schell marginals and normalization") {
  const GaussSchellParams gs{0.8, 0.6};
  const double k = 2.0;
  const SpatialGrid xg = SpatialGrid::spanning(256, 8.0 * gs.sigma, 0.0, k);
  const AngularGrid pg = gauss_schell_band(gs, k, 201);
  const CoherenceKernel g = gauss_schell_kernel(gs, xg);
  const KDMap m = kd_map(g, pg);
  CHECK(std::abs(m.total() - 1.0) < 1e-9);
  CHECK(std::abs(g.trace() - 1.0) < 1e-12);
  for (std::size_t i = 0; i < xg.n; i += 17) {
    const Complex over_p = m.values.row(i).sum() * pg.dp;
    CHECK(std::abs(over_p - g(i, i)) < 1e-9);
  }
  for (std::size_t l = 0; l < pg.m; l += 13) {
    const Complex over_x = m.values.col(l).sum() * xg.dx;
    CHECK(std::abs(over_x - angular_diagonal(g, pg.p(l))) < 1e-12);
  }
}

TEST_CASE("continuous purity equals (k/2pi) tr G^2") {
  for (auto [s, m] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.25}, std::pair{0.5, 2.0}}) {
    const GaussSchellParams gs{s, m};
    const double k = 1.5;
    const SpatialGrid xg = SpatialGrid::spanning(512, 8.0 * s, 0.0, k);
    const CoherenceKernel g = gauss_schell_kernel(gs, xg);
    const KDMap map = kd_map(g, gauss_schell_band(gs, k, 257));
    const double want = k / (2.0 * kPi) * m / std::sqrt(m * m + 2.0 * s * s);
    CHECK(std::abs(g.purity_trace() * k / (2.0 * kPi) - want) <= 1e-10 * want);
    CHECK(std::abs(purity_integral(map) - want) <= 1e-4 * want);
  }
}

TEST_CASE("truncated kernels warn") {
  const SpatialGrid xg = SpatialGrid::spanning(128, 2.0);
  const KDMap m = kd_map(gaussian_beam_kernel(0.0, 1.0, xg), AngularGrid::spanning(9, 1.0));
  CHECK(m.warnings.size() == 1);
}

TEST_CASE("thread count does not change results") {
  const GaussSchellParams gs{1.0, 0.4};
  const SpatialGrid xg = SpatialGrid::spanning(160, 8.0);
  const CoherenceKernel g = gauss_schell_kernel(gs, xg);
  const AngularGrid pg = AngularGrid::spanning(33, 4.0);
  const KDMap a = kd_map(g, pg, 1);
  const KDMap b = kd_map(g, pg, 3);
  const KDMap c = kd_map(g, pg, 16);
  CHECK(a.values == b.values);
  CHECK(a.values == c.values);
}

TEST_CASE("coherent beams factorize into field and angular spectrum") {
  const double k = 2.0, sigma = 0.5, center = 0.3;
  const SpatialGrid xg = SpatialGrid::spanning(384, 12.0 * sigma, center, k);
  const CoherenceKernel g = gaussian_beam_kernel(center, sigma, xg);
  std::vector<Complex> field(xg.n);
  for (std::size_t j = 0; j < xg.n; ++j) field[j] = std::sqrt(g(j, j).real());
  const AngularGrid pg = AngularGrid::spanning(41, 6.0 / (k * sigma));
  const KDMap m = kd_map(g, pg);
  const double amp0 = std::sqrt(k / (2.0 * kPi)) * std::pow(2.0 * kPi * sigma * sigma, -0.25) *
                      std::sqrt(4.0 * kPi * sigma * sigma);
  for (std::size_t l = 0; l < pg.m; ++l) {
    const double p = pg.p(l);
    // E~(p) = sqrt(k/2pi) (2 pi s^2)^{-1/4} sqrt(4 pi s^2) e^{-k^2 p^2 s^2} e^{-ikp c}
    const Complex spectrum = std::polar(amp0 * std::exp(-k * k * p * p * sigma * sigma), -k * p * center);
    CHECK(std::abs(angular_amplitude(field, xg, p) - spectrum) < 1e-12);
    CHECK(std::abs(angular_diagonal(g, p) - std::norm(spectrum)) < 1e-12);
    for (std::size_t i = 0; i < xg.n; i += 31) {
      const Complex want = field[i] * std::conj(spectrum) * std::conj(plane_wave_overlap(xg.x(i), p, k));
      CHECK(std::abs(m(i, l) - want) < 1e-12);
    }
  }
}

TEST_CASE("off-axis narrow gaussian beam shows anomalous values") {
  const double k = 1.0, x0 = 1.0, sigma = 0.03;
  const SpatialGrid xg = SpatialGrid::spanning(256, 8.0 * sigma, x0, k);
  const KDMap m = kd_map(gaussian_beam_kernel(x0, sigma, xg), AngularGrid::spanning(129, 4.0 / (k * sigma)));
  const double peak = m.values.cwiseAbs().maxCoeff();
  CHECK(m.values.real().minCoeff() < 0.0);
  CHECK(m.values.imag().cwiseAbs().maxCoeff() > 0.01 * peak);
  CHECK(m.warnings.empty());
}

TEST_CASE("young closed form") {
  const double k = 2.0;
  const YoungParams y{0.7, 0.2, 0.8, 1.0};
  const YoungKD kd = young_kd_closed(y, k);
  const double c = k / (2.0 * kPi);
  CHECK(std::abs(kd(1, 0.0) - c * 0.6) < 1e-15);
  CHECK(std::abs(kd(-1, 0.0) - c * 1.2) < 1e-15);
  const double p_half = kPi / (2.0 * k * y.x0);  // 2 k p x0 = pi
  CHECK(std::abs(kd(1, p_half) - c * -0.2) < 1e-14);
  CHECK(kd(1, p_half).real() < 0.0);
  CHECK(std::abs(kd(1, 0.3) - std::conj(kd(-1, 0.3)) - c * (0.2 - 0.8)) < 1e-15);
  CHECK_THROWS_AS(kd(0, 0.1), PreconditionError);
  CHECK_THROWS_AS(YoungKD({0.7, 0.5, 0.5, 1.2}, 1.0), PreconditionError);
  CHECK_THROWS_AS(YoungKD({0.0, 0.5, 0.5, 0.3}, 1.0), PreconditionError);
  CHECK_THROWS_AS(YoungKD({0.7, -0.5, 0.5, 0.3}, 1.0), PreconditionError);
  // Incoherent apertures give real values.
  const YoungKD inc = young_kd_closed({0.7, 0.3, 0.7, 0.0}, k);
  for (double p : {0.0, 0.4, 2.2}) CHECK(inc(1, p).imag() == 0.0);
}

TEST_CASE("narrow gaussian apertures converge to the young closed form") {
  const double k = 1.0;
  const YoungParams y{1.0, 0.2, 0.8, 1.0};
  const SpatialGrid xg(768, 0.005, 0.0, k);
  // Two fringe periods in p.
  const AngularGrid pg = AngularGrid::spanning(101, kPi / (k * y.x0));
  const YoungKD closed = young_kd_closed(y, k);
  std::vector<double> errs;
  for (double w : {y.x0 / 25.0, y.x0 / 50.0}) {
    const YoungApertureKD est = young_narrow_aperture_kd(y, w, xg, pg);
    double err = 0.0, peak = 0.0;
    for (std::size_t l = 0; l < pg.m; ++l) {
      const double p = pg.p(l);
      err = std::max({err, std::abs(est.plus[l] - closed(1, p)), std::abs(est.minus[l] - closed(-1, p))});
      peak = std::max({peak, std::abs(closed(1, p)), std::abs(closed(-1, p))});
    }
    errs.push_back(err / peak);
  }
  CHECK(errs[1] <= 1e-2);
  CHECK(std::log2(errs[0] / errs[1]) >= 1.0);

  const YoungApertureKD est = young_narrow_aperture_kd(y, y.x0 / 50.0, xg, pg);
  double min_re = 0.0;
  for (const Complex& v : est.plus) min_re = std::min(min_re, v.real());
  CHECK(min_re < 0.0);
  CHECK_THROWS_AS(young_gaussian_kernel({1.0025, 0.5, 0.5, 1.0}, 0.02, xg), PreconditionError);
}

TEST_CASE("dual-arm young signal recovers the position-angular element") {
  const double k = 1.0;
  const YoungParams y{1.0, 0.3, 0.7, 0.6};
  const SpatialGrid xg(768, 0.005, 0.0, k);
  const CoherenceKernel g = young_gaussian_kernel(y, 0.04, xg);
  for (double p : {-0.9, 0.35, 1.7}) {
    const std::vector<double> phases = mzi::PhaseScan::uniform_phases(5);
    std::vector<double> values;
    for (double phi : phases) values.push_back(young_dual_arm_intensity(g, y.x0, p, phi));
    const mzi::PhaseScan scan(phases, values);
    const std::size_t i = xg.index_of(y.x0);
    const Complex xp = position_angular_element(g, i, p);
    CHECK(std::abs(mzi::phase_coefficient(scan, 1) - xp) < 1e-12);
    const Complex kd = mzi::phase_coefficient(scan, 1) * std::conj(plane_wave_overlap(y.x0, p, k));
    // Two-point band {-|p|, |p|}.
    const KDMap m = kd_map(g, AngularGrid(2, 2.0 * std::abs(p)));
    CHECK(std::abs(kd - m(i, p < 0 ? 0 : 1)) < 1e-12);
  }
}
