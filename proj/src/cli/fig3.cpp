#include "kdoptics/cli/fig3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdoptics/errors.hpp"

namespace kdoptics::cli {

void Fig3Config::validate() const {
  require(sigma > 0.0, "beam width must be positive");
  require(k > 0.0, "wavenumber must be positive");
  require(window_x > 0.0 && window_p >= 0.0, "plot window must be positive");
  require(nx >= 3 && nx % 2 == 1, "fig3 needs an odd number of output rows (>= 3)");
  require(np >= 2, "fig3 needs at least 2 output columns");
}

space::KDMap fig3_map(const Fig3Config& cfg, unsigned threads) {
  using space::Complex;
  cfg.validate();
  const std::size_t half = cfg.nx / 2;
  const double out_dx = cfg.window_x / static_cast<double>(half);
  const double p_max = cfg.band();
  // Computation spacing resolves both the beam and the plane-wave phase at p_max.
  const double fine = std::min(cfg.sigma / 8.0, std::numbers::pi / (4.0 * cfg.k * p_max));
  const auto stride = static_cast<std::size_t>(std::ceil(out_dx / fine - 1e-9));
  const double dx = out_dx / static_cast<double>(stride);
  const double reach = std::max(8.0 * cfg.sigma, cfg.window_x);
  const std::size_t n = 2 * static_cast<std::size_t>(std::ceil(reach / dx)) + 2;
  const space::SpatialGrid grid(n, dx, cfg.x0, cfg.k);

  std::vector<Complex> field(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = grid.x(j) - cfg.x0;
    field[j] = std::exp(-d * d / (4.0 * cfg.sigma * cfg.sigma)) /
               std::pow(2.0 * std::numbers::pi * cfg.sigma * cfg.sigma, 0.25);
  }

  const auto kernel = [&]() -> space::CoherenceKernel {
    if (cfg.coherence_length < 0.0) return space::coherent_kernel(field, grid);
    if (cfg.coherence_length == 0.0) {
      std::vector<double> rho(n);
      for (std::size_t j = 0; j < n; ++j) rho[j] = std::norm(field[j]);
      return space::incoherent_kernel(rho, grid);
    }
    Eigen::MatrixXcd v(n, n);
    const double m2 = cfg.coherence_length * cfg.coherence_length;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double d = grid.x(i) - grid.x(j);
        v(i, j) = field[i] * std::conj(field[j]) * std::exp(-d * d / (4.0 * m2));
      }
    return {grid, std::move(v)};
  }();

  const space::AngularGrid pgrid = space::AngularGrid::spanning(cfg.np, p_max);
  const space::KDMap full = space::kd_map(kernel, pgrid, threads);

  const space::SpatialGrid out_grid(cfg.nx, out_dx, cfg.x0, cfg.k);
  space::KDMap out{out_grid, pgrid, Eigen::MatrixXcd(cfg.nx, cfg.np), full.warnings};
  const auto center = static_cast<Eigen::Index>(n / 2);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(cfg.nx); ++r) {
    const Eigen::Index offset = (r - static_cast<Eigen::Index>(half)) * static_cast<Eigen::Index>(stride);
    out.values.row(r) = full.values.row(center + offset);
  }
  return out;
}

}  // namespace kdoptics::cli
