#pragma once

#include <cstdint>
#include <vector>

#include "kdoptics/polarization.hpp"

// Mach-Zehnder scheme: one arm projects onto |a>, the other onto |b>, and the
// output intensity is recorded as a function of the arm phase difference.
namespace kdoptics::mzi {

using pol::BasisAxis;
using pol::Complex;
using pol::Jones;
using pol::PolarizationMatrix;

/// Polarization-independent splitter amplitudes; only |rt|^2 enters the signal.
class SplitterConfig {
 public:
  SplitterConfig(Complex r, Complex t);

  Complex r() const { return r_; }
  Complex t() const { return t_; }
  /// |rt|^2
  double gain() const { return std::norm(r_ * t_); }

  /// 50:50 lossless splitter, |rt|^2 = 1/4.
  static SplitterConfig balanced();

 private:
  Complex r_;
  Complex t_;
};

/// Interferogram samples I(phi_j). Phases lie in [0, 2pi) and strictly increase.
class PhaseScan {
 public:
  PhaseScan(std::vector<double> phases, std::vector<double> intensities);

  /// phi_j = 2 pi j / n
  static std::vector<double> uniform_phases(std::size_t n);

  const std::vector<double>& phases() const { return phases_; }
  const std::vector<double>& intensities() const { return intensities_; }
  std::size_t size() const { return phases_.size(); }

 private:
  std::vector<double> phases_;
  std::vector<double> intensities_;
};

/// I(phi) = |rt|^2 [<a|G|a> + <b|G|b> + e^{i phi} <a|b><b|G|a> + e^{-i phi} <b|a><a|G|b>]
double mzi_intensity(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B, int a,
                     int b, double phi, const SplitterConfig& s);

/// Noise-free scan on the uniform grid of `n_phases` points.
PhaseScan simulate_scan(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B, int a,
                        int b, std::size_t n_phases, const SplitterConfig& s);

/// M(a,b) = [I(0) - I(pi)] / (4 |rt|^2)
double extract_mh(double intensity_0, double intensity_pi, const SplitterConfig& s);

/// c_m = (1/N) sum_j e^{-i m phi_j} I(phi_j), i.e. the coefficient of e^{i m phi}.
/// Exact for trigonometric polynomials of degree < N - |m|. Requires a uniform
/// grid (arbitrary start offset in [0, 2pi/N)) with N >= 3.
Complex phase_coefficient(const PhaseScan& scan, int harmonic);

/// K(a,b) = (1/(2 pi |rt|^2)) (2 pi/N) sum_j e^{i phi_j} I(phi_j)
Complex phase_scan_reconstruct(const PhaseScan& scan, const SplitterConfig& s);

/// Realizations of a random Jones field whose second moments approach `target`.
struct FieldEnsemble {
  std::uint64_t seed = 0;
  std::vector<Jones> samples;
  Eigen::Matrix2cd target;

  /// <E E^dagger> over the samples.
  Eigen::Matrix2cd empirical_covariance() const;
};

/// Circular complex Gaussian fields with covariance G, drawn by Cholesky
/// factorization. Deterministic for a given seed.
FieldEnsemble sample_ensemble(const PolarizationMatrix& g, std::size_t n, std::uint64_t seed);

/// Sample-averaged output intensity |rt|^2 <|(P_a + e^{i phi} P_b) E|^2>.
double ensemble_intensity(const FieldEnsemble& ensemble, const BasisAxis& A, const BasisAxis& B,
                          int a, int b, double phi, const SplitterConfig& s);

PhaseScan ensemble_scan(const FieldEnsemble& ensemble, const BasisAxis& A, const BasisAxis& B,
                        int a, int b, std::size_t n_phases, const SplitterConfig& s);

struct EnsembleEstimate {
  Complex value;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
};

/// Reconstruction from the ensemble scan, with standard errors taken from the
/// spread of the per-realization reconstructions.
EnsembleEstimate ensemble_reconstruct(const FieldEnsemble& ensemble, const BasisAxis& A,
                                      const BasisAxis& B, int a, int b, std::size_t n_phases,
                                      const SplitterConfig& s);

}  // namespace kdoptics::mzi
