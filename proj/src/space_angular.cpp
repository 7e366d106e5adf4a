#include "kdoptics/space_angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "kdoptics/errors.hpp"

namespace kdoptics::space {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Runs body(i) for i in [0, n); contiguous row blocks per worker.
template <typename Body>
void parallel_rows(std::size_t n, unsigned threads, Body body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SpatialGrid::SpatialGrid(std::size_t n_, double dx_, double center_, double k_)
    : n(n_), dx(dx_), center(center_), k(k_) {
  require(n >= 2, "spatial grid needs at least 2 points");
  require(dx > 0.0, "spatial grid spacing must be positive");
  require(k > 0.0, "wavenumber must be positive");
}

SpatialGrid SpatialGrid::spanning(std::size_t n, double half_width, double center, double k) {
  require(half_width > 0.0, "spatial grid half-width must be positive");
  return {n, 2.0 * half_width / static_cast<double>(n), center, k};
}

std::size_t SpatialGrid::index_of(double xv) const {
  const double pos = (xv - center) / dx + static_cast<double>(n / 2);
  const double r = std::round(pos);
  require(std::abs(pos - r) <= 1e-6 && r >= 0.0 && r <= static_cast<double>(n - 1),
          "position is not a grid point");
  return static_cast<std::size_t>(r);
}

AngularGrid::AngularGrid(std::size_t m_, double dp_) : m(m_), dp(dp_) {
  require(m >= 2, "angular grid needs at least 2 points");
  require(dp > 0.0, "angular grid spacing must be positive");
}

AngularGrid AngularGrid::spanning(std::size_t m, double p_max) {
  require(m >= 2 && p_max > 0.0, "angular grid needs m >= 2 and p_max > 0");
  return {m, 2.0 * p_max / static_cast<double>(m - 1)};
}

CoherenceKernel::CoherenceKernel(SpatialGrid grid, Eigen::MatrixXcd values, Evaluator analytic)
    : grid_(grid), values_(std::move(values)), analytic_(std::move(analytic)) {
  require(values_.rows() == static_cast<Eigen::Index>(grid_.n) && values_.cols() == values_.rows(),
          "coherence kernel must be N x N on its grid");
  const double scale = std::max(1.0, max_abs(values_));
  const double herm_err = max_abs(values_ - values_.adjoint());
  require(herm_err <= 1e-10 * scale, "coherence kernel must be Hermitian");
  values_ = 0.5 * (values_ + values_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(values_ * grid_.dx, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  require(min_eig >= -1e-9 * std::max(1.0, trace()), "coherence kernel must be positive semidefinite");
}

double CoherenceKernel::trace() const { return values_.diagonal().real().sum() * grid_.dx; }

double CoherenceKernel::purity_trace() const {
  return values_.cwiseAbs2().sum() * grid_.dx * grid_.dx;
}

double CoherenceKernel::boundary_ratio() const {
  const Eigen::Index last = values_.rows() - 1;
  const double edge = std::max({values_.row(0).cwiseAbs().maxCoeff(),
                                values_.row(last).cwiseAbs().maxCoeff(),
                                values_.col(0).cwiseAbs().maxCoeff(),
                                values_.col(last).cwiseAbs().maxCoeff()});
  const double peak = max_abs(values_);
  return peak > 0.0 ? edge / peak : 0.0;
}

Complex KDMap::total() const { return values.sum() * xgrid.dx * pgrid.dp; }

Complex plane_wave_overlap(double x, double p, double k) {
  require(k > 0.0, "wavenumber must be positive");
  return std::polar(std::sqrt(k / (2.0 * kPi)), k * p * x);
}

KDMap kd_map(const CoherenceKernel& g, const AngularGrid& pgrid, unsigned threads) {
  const SpatialGrid& xg = g.grid();
  const std::size_t n = xg.n;
  const std::size_t m = pgrid.m;
  // phase(j, l) = e^{i k p_l x_j}
  Eigen::MatrixXcd phase(n, m);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t j = 0; j < n; ++j) phase(j, l) = std::polar(1.0, xg.k * pgrid.p(l) * xg.x(j));

  KDMap out{xg, pgrid, Eigen::MatrixXcd(n, m), {}};
  const double pref = xg.k / (2.0 * kPi) * xg.dx;
  const Eigen::MatrixXcd& gv = g.values();
  parallel_rows(n, threads, [&](std::size_t i) {
    // Column i holds G(x_j, x_i) = conj G(x_i, x_j) contiguously.
    const Complex* col = gv.col(static_cast<Eigen::Index>(i)).data();
    for (std::size_t l = 0; l < m; ++l) {
      const Complex* ph = phase.col(static_cast<Eigen::Index>(l)).data();
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) acc += std::conj(col[j]) * ph[j];
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          pref * std::conj(phase(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l))) * acc;
    }
  });

  const double ratio = g.boundary_ratio();
  if (ratio > kTruncationWarnRatio) {
    std::ostringstream msg;
    msg << "coherence kernel reaches " << ratio << " of its peak on the grid boundary; "
        << "the field may be truncated";
    out.warnings.push_back(msg.str());
  }
  return out;
}

Complex position_angular_element(const CoherenceKernel& g, std::size_t i, double p) {
  const SpatialGrid& xg = g.grid();
  require(i < xg.n, "grid index out of range");
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < xg.n; ++j)
    acc += g(i, j) * std::polar(1.0, xg.k * p * xg.x(j));
  return std::sqrt(xg.k / (2.0 * kPi)) * acc * xg.dx;
}

double angular_diagonal(const CoherenceKernel& g, double p) {
  const SpatialGrid& xg = g.grid();
  Eigen::VectorXcd wave(static_cast<Eigen::Index>(xg.n));
  for (std::size_t j = 0; j < xg.n; ++j)
    wave(static_cast<Eigen::Index>(j)) = std::polar(1.0, xg.k * p * xg.x(j));
  const Complex quad = wave.dot(g.values() * wave);
  return xg.k / (2.0 * kPi) * quad.real() * xg.dx * xg.dx;
}

Complex angular_amplitude(const std::vector<Complex>& field, const SpatialGrid& grid, double p) {
  require(field.size() == grid.n, "field must be sampled on the grid");
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < grid.n; ++j) acc += std::polar(1.0, -grid.k * p * grid.x(j)) * field[j];
  return std::sqrt(grid.k / (2.0 * kPi)) * acc * grid.dx;
}

double purity_integral(const KDMap& k) {
  return k.values.cwiseAbs2().sum() * k.xgrid.dx * k.pgrid.dp;
}

double young_dual_arm_intensity(const CoherenceKernel& g, double x, double p, double phi) {
  const std::size_t i = g.grid().index_of(x);
  const Complex xp = position_angular_element(g, i, p);
  const double direct = g(i, i).real() + angular_diagonal(g, p);
  return direct + 2.0 * (std::polar(1.0, phi) * xp).real();
}

// --- Gauss-Schell ---------------------------------------------------------------

void GaussSchellParams::validate() const {
  require(sigma > 0.0, "Gauss-Schell sigma must be positive");
  require(mu > 0.0, "Gauss-Schell mu must be positive");
}

Complex gauss_schell_value(const GaussSchellParams& gs, double x, double xp) {
  const double s2 = gs.sigma * gs.sigma;
  const double d = x - xp;
  return std::exp(-(x * x + xp * xp) / (4.0 * s2) - d * d / (4.0 * gs.mu * gs.mu)) /
         std::sqrt(2.0 * kPi * s2);
}

CoherenceKernel gauss_schell_kernel(const GaussSchellParams& gs, const SpatialGrid& grid) {
  gs.validate();
  const double slack = 1e-9 * gs.sigma;
  require(grid.front() <= -5.0 * gs.sigma + slack && grid.back() >= 5.0 * gs.sigma - grid.dx - slack,
          "Gauss-Schell grid must span at least +-5 sigma");
  require(grid.dx <= std::min(gs.sigma, gs.mu) / 4.0 * (1.0 + 1e-12),
          "Gauss-Schell grid under-resolves min(sigma, mu)/4");
  Eigen::MatrixXcd v(grid.n, grid.n);
  for (std::size_t j = 0; j < grid.n; ++j)
    for (std::size_t i = 0; i < grid.n; ++i) v(i, j) = gauss_schell_value(gs, grid.x(i), grid.x(j));
  return {grid, std::move(v), [gs](double a, double b) { return gauss_schell_value(gs, a, b); }};
}

GaussSchellKD::GaussSchellKD(const GaussSchellParams& gs, double k) : k_(k) {
  gs.validate();
  require(k > 0.0, "wavenumber must be positive");
  const double s2 = gs.sigma * gs.sigma;
  const double m2 = gs.mu * gs.mu;
  gamma_ = m2 / (m2 + s2);
  gamma_x_ = (m2 + 2.0 * s2) / (4.0 * s2 * (m2 + s2));
  gamma_p_ = m2 * s2 / (m2 + s2);
  // Unit-normalized amplitude; carries the factor mu so that int K dx dp = 1.
  k0_ = k * gs.mu / (std::numbers::sqrt2 * kPi * std::sqrt(m2 + s2));
}

Complex GaussSchellKD::operator()(double x, double p) const {
  const double mag = k0_ * std::exp(-gamma_x_ * x * x - gamma_p_ * k_ * k_ * p * p);
  return std::polar(mag, -gamma_ * k_ * p * x);
}

KDMap GaussSchellKD::sample(const SpatialGrid& xgrid, const AngularGrid& pgrid) const {
  KDMap out{xgrid, pgrid, Eigen::MatrixXcd(xgrid.n, pgrid.m), {}};
  for (std::size_t l = 0; l < pgrid.m; ++l)
    for (std::size_t i = 0; i < xgrid.n; ++i) out.values(i, l) = (*this)(xgrid.x(i), pgrid.p(l));
  return out;
}

GaussSchellKD gauss_schell_kd_closed(const GaussSchellParams& gs, double k) { return {gs, k}; }

CoherenceKernel gaussian_beam_kernel(double center, double sigma, const SpatialGrid& grid) {
  require(sigma > 0.0, "beam width must be positive");
  auto amp = [center, sigma](double x) {
    const double d = x - center;
    return std::exp(-d * d / (4.0 * sigma * sigma)) / std::pow(2.0 * kPi * sigma * sigma, 0.25);
  };
  std::vector<Complex> field(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) field[j] = amp(grid.x(j));
  Eigen::Map<const Eigen::VectorXcd> e(field.data(), static_cast<Eigen::Index>(grid.n));
  return {grid, e * e.adjoint(), [amp](double a, double b) { return Complex(amp(a) * amp(b)); }};
}

CoherenceKernel coherent_kernel(const std::vector<Complex>& field, const SpatialGrid& grid) {
  require(field.size() == grid.n, "field must be sampled on the grid");
  Eigen::Map<const Eigen::VectorXcd> e(field.data(), static_cast<Eigen::Index>(grid.n));
  return {grid, e * e.adjoint()};
}

CoherenceKernel incoherent_kernel(const std::vector<double>& rho, const SpatialGrid& grid) {
  require(rho.size() == grid.n, "intensity must be sampled on the grid");
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    require(rho[j] >= 0.0, "intensity must be nonnegative");
    v(j, j) = rho[j] / grid.dx;
  }
  return {grid, std::move(v)};
}

// --- Young ----------------------------------------------------------------------

void YoungParams::validate() const {
  require(x0 > 0.0, "aperture half-separation must be positive");
  require(i_plus >= 0.0 && i_minus >= 0.0, "aperture intensities must be nonnegative");
  require(std::abs(mu) <= 1.0, "degree of coherence must satisfy |mu| <= 1");
}

YoungKD::YoungKD(const YoungParams& y, double k) : y_(y), k_(k) {
  y.validate();
  require(k > 0.0, "wavenumber must be positive");
}

Complex YoungKD::operator()(int side, double p) const {
  require(side == 1 || side == -1, "aperture side must be +1 or -1");
  const double own = side == 1 ? y_.i_plus : y_.i_minus;
  const double cross = y_.mu * std::sqrt(y_.i_plus * y_.i_minus);
  return k_ / (2.0 * kPi) * (own + std::polar(cross, -2.0 * side * k_ * p * y_.x0));
}

YoungKD young_kd_closed(const YoungParams& y, double k) { return {y, k}; }

CoherenceKernel young_gaussian_kernel(const YoungParams& y, double width, const SpatialGrid& grid) {
  y.validate();
  require(width > 0.0, "aperture width must be positive");
  grid.index_of(y.x0);
  grid.index_of(-y.x0);
  const double cross = y.mu * std::sqrt(y.i_plus * y.i_minus);
  auto aperture = [width](double u) {
    return std::exp(-u * u / (2.0 * width * width)) / (std::sqrt(2.0 * kPi) * width);
  };
  Eigen::VectorXd plus(grid.n), minus(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    plus(j) = aperture(grid.x(j) - y.x0);
    minus(j) = aperture(grid.x(j) + y.x0);
  }
  Eigen::MatrixXd v = y.i_plus * plus * plus.transpose() + y.i_minus * minus * minus.transpose() +
                      cross * (plus * minus.transpose() + minus * plus.transpose());
  return {grid, v.cast<Complex>()};
}

YoungApertureKD young_narrow_aperture_kd(const YoungParams& y, double width,
                                         const SpatialGrid& grid, const AngularGrid& pgrid) {
  const CoherenceKernel g = young_gaussian_kernel(y, width, grid);
  const std::size_t ip = grid.index_of(y.x0);
  const std::size_t im = grid.index_of(-y.x0);
  const double peak = 1.0 / (std::sqrt(2.0 * kPi) * width);
  YoungApertureKD out;
  for (std::size_t l = 0; l < pgrid.m; ++l) {
    const double p = pgrid.p(l);
    out.plus.push_back(position_angular_element(g, ip, p) *
                       std::conj(plane_wave_overlap(grid.x(ip), p, grid.k)) / peak);
    out.minus.push_back(position_angular_element(g, im, p) *
                        std::conj(plane_wave_overlap(grid.x(im), p, grid.k)) / peak);
  }
  return out;
}

}  // namespace kdoptics::space
