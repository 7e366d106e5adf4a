#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Position / direction Kirkwood-Dirac distributions of scalar 1-D fields.
//
// All integrals over x use the uniform-weight (trapezoidal, with end points
// below truncation tolerance) rule on the attached grid:
//   int dx f(x)  ->  sum_j f(x_j) dx.
namespace kdoptics::space {

using Complex = std::complex<double>;

/// x_j = center + (j - N/2) dx, j = 0..N-1 (integer N/2). `k` is the wavenumber.
struct SpatialGrid {
  std::size_t n = 0;
  double dx = 0.0;
  double center = 0.0;
  double k = 1.0;

  SpatialGrid() = default;
  SpatialGrid(std::size_t n, double dx, double center = 0.0, double k = 1.0);
  /// N points covering [center - half_width, center + half_width).
  static SpatialGrid spanning(std::size_t n, double half_width, double center = 0.0,
                              double k = 1.0);

  double x(std::size_t j) const {
    return center + (static_cast<double>(j) - static_cast<double>(n / 2)) * dx;
  }
  double front() const { return x(0); }
  double back() const { return x(n - 1); }
  /// Index of the grid point at `x`; throws when `x` is not on the grid.
  std::size_t index_of(double x) const;
};

/// p_j = (j - (M-1)/2) dp, symmetric about p = 0. The caller picks the band so
/// that the field's angular spectrum is negligible outside it.
struct AngularGrid {
  std::size_t m = 0;
  double dp = 0.0;

  AngularGrid() = default;
  AngularGrid(std::size_t m, double dp);
  /// M points from -p_max to p_max inclusive.
  static AngularGrid spanning(std::size_t m, double p_max);

  double p(std::size_t j) const {
    return (static_cast<double>(j) - 0.5 * static_cast<double>(m - 1)) * dp;
  }
  double p_max() const { return p(m - 1); }
};

/// Discretized mutual coherence function G(x_i, x_j) (intensity per unit length).
class CoherenceKernel {
 public:
  using Evaluator = std::function<Complex(double, double)>;

  /// Validates hermiticity (1e-10 relative to max|G|) and positivity (smallest
  /// eigenvalue of G dx >= -1e-9 max(1, tr)). An optional closed-form
  /// evaluator lets consumers sample G off the grid exactly.
  CoherenceKernel(SpatialGrid grid, Eigen::MatrixXcd values, Evaluator analytic = {});

  const SpatialGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  Complex operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  bool has_analytic() const { return static_cast<bool>(analytic_); }
  const Evaluator& analytic() const { return analytic_; }

  /// sum_j G(x_j, x_j) dx
  double trace() const;
  /// tr G^2 = sum_ij |G(x_i, x_j)|^2 dx^2
  double purity_trace() const;
  /// Largest |G| on the outer rows/columns relative to max |G|.
  double boundary_ratio() const;

 private:
  SpatialGrid grid_;
  Eigen::MatrixXcd values_;
  Evaluator analytic_;
};

/// Complex N x M table K(x_i, p_j) plus its grids.
struct KDMap {
  SpatialGrid xgrid;
  AngularGrid pgrid;
  Eigen::MatrixXcd values;
  std::vector<std::string> warnings;

  Complex operator()(std::size_t i, std::size_t j) const { return values(i, j); }
  /// sum K dx dp
  Complex total() const;
};

/// Boundary value of G above this fraction of max|G| flags a truncated field.
inline constexpr double kTruncationWarnRatio = 1e-6;

/// <x|p> = sqrt(k/2pi) e^{ikpx}
Complex plane_wave_overlap(double x, double p, double k);

/// K(x,p) = (k/2pi) e^{-ikpx} sum_j G(x, x_j) e^{ikp x_j} dx. Rows are split
/// over `threads` workers with a fixed per-row summation order, so results do
/// not depend on the thread count.
KDMap kd_map(const CoherenceKernel& g, const AngularGrid& pgrid, unsigned threads = 1);

/// <x_i|G|p> = sum_j G(x_i, x_j) <x_j|p> dx
Complex position_angular_element(const CoherenceKernel& g, std::size_t i, double p);
/// <p|G|p> by double quadrature.
double angular_diagonal(const CoherenceKernel& g, double p);
/// E~(p) = <p|E> = sqrt(k/2pi) sum_j e^{-ikp x_j} E(x_j) dx
Complex angular_amplitude(const std::vector<Complex>& field, const SpatialGrid& grid, double p);

/// sum |K|^2 dx dp, equal to (k/2pi) tr G^2 on adequate grids.
double purity_integral(const KDMap& k);

/// Dual-arm Young signal with unit proportionality constant:
///   I(phi) = <x|G|x> + <p|G|p> + e^{i phi} <x|G|p> + e^{-i phi} <p|G|x>.
/// `x` must be a grid point.
double young_dual_arm_intensity(const CoherenceKernel& g, double x, double p, double phi);

// --- Gauss-Schell beams -------------------------------------------------------

struct GaussSchellParams {
  double sigma = 1.0;  ///< beam width
  double mu = 1.0;     ///< transverse coherence length

  void validate() const;
};

/// G(x,x') = (2 pi sigma^2)^{-1/2} exp[-(x^2+x'^2)/(4 sigma^2)] exp[-(x-x')^2/(4 mu^2)]
Complex gauss_schell_value(const GaussSchellParams& gs, double x, double xp);

/// Requires the grid to cover [-5 sigma, 5 sigma] with dx <= min(sigma, mu)/4.
CoherenceKernel gauss_schell_kernel(const GaussSchellParams& gs, const SpatialGrid& grid);

/// K(x,p) = K0 e^{-i gamma k p x} e^{-gamma_x x^2} e^{-gamma_p k^2 p^2}
class GaussSchellKD {
 public:
  GaussSchellKD(const GaussSchellParams& gs, double k);

  double gamma() const { return gamma_; }
  double gamma_x() const { return gamma_x_; }
  double gamma_p() const { return gamma_p_; }
  double k0() const { return k0_; }
  double k() const { return k_; }

  Complex operator()(double x, double p) const;
  KDMap sample(const SpatialGrid& xgrid, const AngularGrid& pgrid) const;

 private:
  double k_;
  double gamma_;
  double gamma_x_;
  double gamma_p_;
  double k0_;
};

GaussSchellKD gauss_schell_kd_closed(const GaussSchellParams& gs, double k);

/// Fully coherent Gaussian beam centered at `center` with intensity width
/// `sigma`: E(x) = (2 pi sigma^2)^{-1/4} exp[-(x-center)^2/(4 sigma^2)].
CoherenceKernel gaussian_beam_kernel(double center, double sigma, const SpatialGrid& grid);

/// Rank-one kernel E(x) E*(x').
CoherenceKernel coherent_kernel(const std::vector<Complex>& field, const SpatialGrid& grid);

/// Position-diagonal kernel rho(x_i) delta_ij / dx (no spatial coherence).
CoherenceKernel incoherent_kernel(const std::vector<double>& rho, const SpatialGrid& grid);

// --- Young two-aperture interferometer ----------------------------------------

struct YoungParams {
  double x0 = 1.0;       ///< aperture half-separation
  double i_plus = 0.5;   ///< intensity at +x0
  double i_minus = 0.5;  ///< intensity at -x0
  double mu = 1.0;       ///< real degree of coherence

  void validate() const;
};

/// K(+-x0, p) = (k/2pi) [I+- + mu sqrt(I+ I-) e^{-+2ikp x0}]
class YoungKD {
 public:
  YoungKD(const YoungParams& y, double k);

  /// `side` = +1 for the aperture at +x0, -1 for -x0.
  Complex operator()(int side, double p) const;

 private:
  YoungParams y_;
  double k_;
};

YoungKD young_kd_closed(const YoungParams& y, double k);

/// Apertures modelled as unit-area Gaussians of width `width` centered at +-x0,
/// G(x,x') = sum_{s,s'} c_{ss'} a(x - s x0) a(x' - s' x0) with c the 2x2 Young
/// coherence matrix. Both +-x0 must be grid points.
CoherenceKernel young_gaussian_kernel(const YoungParams& y, double width, const SpatialGrid& grid);

struct YoungApertureKD {
  std::vector<Complex> plus;   ///< K(+x0, p_j) / a(0)
  std::vector<Complex> minus;  ///< K(-x0, p_j) / a(0)
};

/// Finite-aperture estimate of the infinitesimal-aperture distribution: the
/// grid K at the aperture centers divided by the aperture peak a(0).
YoungApertureKD young_narrow_aperture_kd(const YoungParams& y, double width,
                                         const SpatialGrid& grid, const AngularGrid& pgrid);

}  // namespace kdoptics::space
