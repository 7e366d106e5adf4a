#include "kdoptics/mzi.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace kdoptics::mzi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGridTol = 1e-9;

struct ArmPair {
  Jones ka;
  Jones kb;
};

ArmPair arms(const BasisAxis& A, const BasisAxis& B, int a, int b) {
  return {pol::basis_jones(A, a), pol::basis_jones(B, b)};
}

// |(P_a + e^{i phi} P_b) E|^2 for a single realization.
double realization_intensity(const ArmPair& arm, const Jones& e, Complex phasor) {
  const Jones out = arm.ka * arm.ka.dot(e) + phasor * (arm.kb * arm.kb.dot(e));
  return out.squaredNorm();
}

}  // namespace

SplitterConfig::SplitterConfig(Complex r, Complex t) : r_(r), t_(t) {
  require(std::norm(r) + std::norm(t) <= 1.0 + 1e-12, "splitter must not amplify: |r|^2+|t|^2 <= 1");
  require(std::abs(r * t) > 0.0, "splitter needs |rt| > 0");
}

SplitterConfig SplitterConfig::balanced() {
  const double amp = std::sqrt(0.5);
  return {Complex(0.0, amp), Complex(amp, 0.0)};
}

PhaseScan::PhaseScan(std::vector<double> phases, std::vector<double> intensities)
    : phases_(std::move(phases)), intensities_(std::move(intensities)) {
  require(phases_.size() == intensities_.size(), "phase scan: phases and intensities differ in length");
  for (std::size_t j = 0; j < phases_.size(); ++j) {
    require(phases_[j] >= 0.0 && phases_[j] < kTwoPi, "phase scan: phases must lie in [0, 2pi)");
    require(j == 0 || phases_[j] > phases_[j - 1], "phase scan: phases must strictly increase");
    require(intensities_[j] >= -1e-12, "phase scan: intensities must be nonnegative");
  }
}

std::vector<double> PhaseScan::uniform_phases(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
  return out;
}

double mzi_intensity(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B, int a,
                     int b, double phi, const SplitterConfig& s) {
  const ArmPair arm = arms(A, B, a, b);
  const Complex phasor = std::polar(1.0, phi);
  const Complex cross = phasor * arm.ka.dot(arm.kb) * g.element(arm.kb, arm.ka) +
                        std::conj(phasor) * arm.kb.dot(arm.ka) * g.element(arm.ka, arm.kb);
  const double direct = g.element(arm.ka, arm.ka).real() + g.element(arm.kb, arm.kb).real();
  return s.gain() * (direct + cross.real());
}

PhaseScan simulate_scan(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B, int a,
                        int b, std::size_t n_phases, const SplitterConfig& s) {
  std::vector<double> phases = PhaseScan::uniform_phases(n_phases);
  std::vector<double> values;
  values.reserve(n_phases);
  for (double phi : phases) values.push_back(mzi_intensity(g, A, B, a, b, phi, s));
  return {std::move(phases), std::move(values)};
}

double extract_mh(double intensity_0, double intensity_pi, const SplitterConfig& s) {
  return (intensity_0 - intensity_pi) / (4.0 * s.gain());
}

Complex phase_coefficient(const PhaseScan& scan, int harmonic) {
  const std::size_t n = scan.size();
  require(n >= 3, "phase scan needs at least 3 phases");
  const double step = kTwoPi / static_cast<double>(n);
  const auto& phi = scan.phases();
  require(phi[0] < step + kGridTol, "phase scan must start within the first grid step");
  for (std::size_t j = 1; j < n; ++j) {
    require(std::abs(phi[j] - phi[j - 1] - step) <= kGridTol, "phase scan must be uniformly spaced");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    acc += std::polar(scan.intensities()[j], -harmonic * phi[j]);
  }
  return acc / static_cast<double>(n);
}

Complex phase_scan_reconstruct(const PhaseScan& scan, const SplitterConfig& s) {
  return phase_coefficient(scan, -1) / s.gain();
}

Eigen::Matrix2cd FieldEnsemble::empirical_covariance() const {
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
  for (const auto& e : samples) acc += e * e.adjoint();
  return samples.empty() ? acc : Eigen::Matrix2cd(acc / static_cast<double>(samples.size()));
}

FieldEnsemble sample_ensemble(const PolarizationMatrix& g, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "ensemble needs at least one sample");
  const auto& m = g.matrix();
  // Lower-triangular L with L L^dagger = G; rank-deficient G keeps exact zeros.
  Eigen::Matrix2cd chol = Eigen::Matrix2cd::Zero();
  const double g00 = m(0, 0).real();
  if (g00 > 0.0) {
    chol(0, 0) = std::sqrt(g00);
    chol(1, 0) = m(1, 0) / chol(0, 0);
    chol(1, 1) = std::sqrt(std::max(0.0, m(1, 1).real() - std::norm(chol(1, 0))));
  } else {
    chol(1, 1) = std::sqrt(std::max(0.0, m(1, 1).real()));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  FieldEnsemble out{seed, {}, m};
  out.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r0 = normal(rng);
    const double i0 = normal(rng);
    const double r1 = normal(rng);
    const double i1 = normal(rng);
    const Jones z(Complex(r0, i0), Complex(r1, i1));
    out.samples.push_back(chol * z);
  }
  return out;
}

double ensemble_intensity(const FieldEnsemble& ensemble, const BasisAxis& A, const BasisAxis& B,
                          int a, int b, double phi, const SplitterConfig& s) {
  const ArmPair arm = arms(A, B, a, b);
  const Complex phasor = std::polar(1.0, phi);
  double acc = 0.0;
  for (const auto& e : ensemble.samples) acc += realization_intensity(arm, e, phasor);
  return s.gain() * acc / static_cast<double>(ensemble.samples.size());
}

PhaseScan ensemble_scan(const FieldEnsemble& ensemble, const BasisAxis& A, const BasisAxis& B,
                        int a, int b, std::size_t n_phases, const SplitterConfig& s) {
  std::vector<double> phases = PhaseScan::uniform_phases(n_phases);
  std::vector<double> values;
  values.reserve(n_phases);
  for (double phi : phases) values.push_back(ensemble_intensity(ensemble, A, B, a, b, phi, s));
  return {std::move(phases), std::move(values)};
}

EnsembleEstimate ensemble_reconstruct(const FieldEnsemble& ensemble, const BasisAxis& A,
                                      const BasisAxis& B, int a, int b, std::size_t n_phases,
                                      const SplitterConfig& s) {
  require(n_phases >= 3, "phase scan needs at least 3 phases");
  const ArmPair arm = arms(A, B, a, b);
  const std::vector<double> phases = PhaseScan::uniform_phases(n_phases);
  std::vector<Complex> phasors;
  for (double phi : phases) phasors.push_back(std::polar(1.0, phi));

  const double n = static_cast<double>(ensemble.samples.size());
  double sum_re = 0.0, sum_im = 0.0, sq_re = 0.0, sq_im = 0.0;
  for (const auto& e : ensemble.samples) {
    Complex est{0.0, 0.0};
    for (const auto& ph : phasors) est += ph * realization_intensity(arm, e, ph);
    est /= static_cast<double>(n_phases);
    sum_re += est.real();
    sum_im += est.imag();
    sq_re += est.real() * est.real();
    sq_im += est.imag() * est.imag();
  }
  const PhaseScan scan = ensemble_scan(ensemble, A, B, a, b, n_phases, s);
  EnsembleEstimate out;
  out.value = phase_scan_reconstruct(scan, s);
  const double denom = std::max(1.0, n - 1.0);
  const double var_re = std::max(0.0, (sq_re - sum_re * sum_re / n) / denom);
  const double var_im = std::max(0.0, (sq_im - sum_im * sum_im / n) / denom);
  out.stderr_re = std::sqrt(var_re / n);
  out.stderr_im = std::sqrt(var_im / n);
  return out;
}

}  // namespace kdoptics::mzi
