#include "kdoptics/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "kdoptics/errors.hpp"

namespace kdoptics::wigner {

namespace {

using space::Complex;
constexpr double kPi = std::numbers::pi;

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

// G at (row + m/2 ... ) style index pairs: a = i - m/2, b = i + m/2 in index units.
Complex sample_pair(const CoherenceKernel& g, std::size_t i, long m) {
  const SpatialGrid& xg = g.grid();
  if (g.has_analytic()) {
    const double half = 0.5 * static_cast<double>(m) * xg.dx;
    return g.analytic()(xg.x(i) - half, xg.x(i) + half);
  }
  const long ii = static_cast<long>(i);
  if (m % 2 == 0) return g(static_cast<std::size_t>(ii - m / 2), static_cast<std::size_t>(ii + m / 2));
  // Both coordinates sit halfway between grid points: bilinear = mean of the cell.
  const long a0 = ii - (m + 1) / 2;
  const long b0 = ii + (m - 1) / 2;
  const auto at = [&](long r, long c) {
    return g(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  return 0.25 * (at(a0, b0) + at(a0 + 1, b0) + at(a0, b0 + 1) + at(a0 + 1, b0 + 1));
}

}  // namespace

WignerMap wigner_from_kernel(const CoherenceKernel& g, const AngularGrid& pgrid, unsigned threads) {
  const SpatialGrid& xg = g.grid();
  const std::size_t n = xg.n;
  const std::size_t mp = pgrid.m;
  const long max_shift = 2 * static_cast<long>(n - 1);
  // phase(l, m + max_shift) = e^{i k p_l m dx}
  Eigen::MatrixXcd phase(static_cast<Eigen::Index>(2 * max_shift + 1), static_cast<Eigen::Index>(mp));
  for (std::size_t l = 0; l < mp; ++l)
    for (long m = -max_shift; m <= max_shift; ++m)
      phase(m + max_shift, static_cast<Eigen::Index>(l)) =
          std::polar(1.0, xg.k * pgrid.p(l) * static_cast<double>(m) * xg.dx);

  WignerMap out{xg, pgrid, Eigen::MatrixXd(n, mp), 0.0, {}};
  std::vector<double> row_imag(n, 0.0);
  const double pref = xg.k / (2.0 * kPi) * xg.dx;
  parallel_rows(n, threads, [&](std::size_t i) {
    const long reach = 2 * static_cast<long>(std::min(i, n - 1 - i));
    std::vector<Complex> pairs(static_cast<std::size_t>(2 * reach + 1));
    for (long m = -reach; m <= reach; ++m) pairs[static_cast<std::size_t>(m + reach)] = sample_pair(g, i, m);
    for (std::size_t l = 0; l < mp; ++l) {
      const Complex* ph = phase.col(static_cast<Eigen::Index>(l)).data();
      Complex acc{0.0, 0.0};
      for (long m = -reach; m <= reach; ++m)
        acc += pairs[static_cast<std::size_t>(m + reach)] * ph[m + max_shift];
      acc *= pref;
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = acc.real();
      row_imag[i] = std::max(row_imag[i], std::abs(acc.imag()));
    }
  });
  out.max_imag = *std::max_element(row_imag.begin(), row_imag.end());

  const double ratio = g.boundary_ratio();
  if (ratio > space::kTruncationWarnRatio) {
    std::ostringstream msg;
    msg << "coherence kernel reaches " << ratio << " of its peak on the grid boundary; "
        << "the Wigner map may be truncated";
    out.warnings.push_back(msg.str());
  }
  return out;
}

OscillationLimits oscillation_limits(const SpatialGrid& xgrid, const AngularGrid& pgrid) {
  const double span_x = static_cast<double>(xgrid.n - 1) * xgrid.dx;
  const double span_p = static_cast<double>(pgrid.m - 1) * pgrid.dp;
  // Period of e^{-2ik(p-p')(x-x')} is pi/(k |x-x'|) in p and pi/(k |p-p'|) in x.
  return {kPi / (4.0 * xgrid.k * span_p), kPi / (4.0 * xgrid.k * span_x)};
}

GridPair gauss_schell_certified_grids(const space::GaussSchellParams& gs, double k, double tail) {
  require(tail > 0.0 && tail < 1.0, "tail fraction must lie in (0, 1)");
  const space::GaussSchellKD kd(gs, k);
  const double hx = 7.0 * gs.sigma;
  const double hp = std::sqrt(-std::log(tail) / kd.gamma_p()) / k;
  const double dx_max = std::min(kPi / (8.0 * k * hp), std::min(gs.sigma, gs.mu) / 4.0);
  std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * hx / dx_max));
  n += n % 2;
  const SpatialGrid xg = SpatialGrid::spanning(n, hx, 0.0, k);
  const double dp_max = kPi / (4.0 * k * static_cast<double>(n - 1) * xg.dx);
  const auto m = static_cast<std::size_t>(std::ceil(2.0 * hp / dp_max)) + 1;
  return {xg, AngularGrid::spanning(m, hp)};
}

KDMap kd_from_wigner_continuous(const WignerMap& w, unsigned threads) {
  const SpatialGrid& xg = w.xgrid;
  const AngularGrid& pg = w.pgrid;
  const OscillationLimits lim = oscillation_limits(xg, pg);
  require(xg.dx <= lim.max_dx * (1.0 + 1e-12),
          "x spacing under-samples the Wigner-to-KD kernel (need 4 points per period)");
  require(pg.dp <= lim.max_dp * (1.0 + 1e-12),
          "p spacing under-samples the Wigner-to-KD kernel (need 4 points per period)");

  const std::size_t n = xg.n;
  const std::size_t mp = pg.m;
  const long nd = static_cast<long>(n) - 1;
  // wave(d + nd, l) = e^{2ik p_l d dx}, d = i - j
  Eigen::MatrixXcd wave(static_cast<Eigen::Index>(2 * nd + 1), static_cast<Eigen::Index>(mp));
  for (std::size_t l = 0; l < mp; ++l)
    for (long d = -nd; d <= nd; ++d)
      wave(d + nd, static_cast<Eigen::Index>(l)) =
          std::polar(1.0, 2.0 * xg.k * pg.p(l) * static_cast<double>(d) * xg.dx);

  // Transposed copies so the sums over p run over contiguous memory.
  const Eigen::MatrixXcd wave_t = wave.transpose();
  const Eigen::MatrixXd w_t = w.values.transpose();

  // inner(j, i) = sum_l e^{2ik p_l (x_i - x_j)} W(x_j, p_l) dp
  Eigen::MatrixXcd inner(n, n);
  parallel_rows(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long d = static_cast<long>(i) - static_cast<long>(j);
      const Complex* ph = wave_t.col(d + nd).data();
      const double* wv = w_t.col(static_cast<Eigen::Index>(j)).data();
      Complex acc{0.0, 0.0};
      for (std::size_t l = 0; l < mp; ++l) acc += ph[l] * wv[l];
      inner(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = acc * pg.dp;
    }
  });

  KDMap out{xg, pg, Eigen::MatrixXcd(n, mp), w.warnings};
  const double pref = xg.k / kPi * xg.dx;
  parallel_rows(n, threads, [&](std::size_t i) {
    const Complex* col = inner.col(static_cast<Eigen::Index>(i)).data();
    for (std::size_t l = 0; l < mp; ++l) {
      // d = i - j runs downward as j increases.
      const Complex* ph = wave.col(static_cast<Eigen::Index>(l)).data() + nd + static_cast<long>(i);
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) acc += std::conj(*(ph - static_cast<long>(j))) * col[j];
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = pref * acc;
    }
  });
  return out;
}

DiscreteWignerTable discrete_wigner(const pol::StokesVector& s) {
  require(s.norm() <= 1.0 + 1e-9, "Stokes vector lies outside the Poincare sphere");
  DiscreteWignerTable out;
  for (int x : kSigns)
    for (int y : kSigns) out(x, y) = (1.0 + x * s.x + y * s.y + x * y * s.z) / 4.0;
  return out;
}

pol::Complex discrete_kernel(int x, int y, int xp, int yp) {
  sign_index(x);
  sign_index(y);
  sign_index(xp);
  sign_index(yp);
  return pol::Complex(1.0 + x * xp + y * yp, x * y * xp * yp) / 4.0;
}

pol::KDTable kd_from_discrete_wigner(const DiscreteWignerTable& w) {
  pol::KDTable out{{}, pol::x_axis().axis(), pol::y_axis().axis()};
  for (int x : kSigns) {
    for (int y : kSigns) {
      pol::Complex acc{0.0, 0.0};
      for (int xp : kSigns)
        for (int yp : kSigns) acc += discrete_kernel(x, y, xp, yp) * w(xp, yp);
      out.values(x, y) = acc;
    }
  }
  return out;
}

}  // namespace kdoptics::wigner
