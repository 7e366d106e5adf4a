#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kdoptics/mzi.hpp"
#include "test_support.hpp"

using namespace kdoptics;
using namespace kdoptics::pol;
using namespace kdoptics::mzi;
using kdoptics::testing::random_axis;
using kdoptics::testing::random_stokes;

namespace {

constexpr double kTol = 1e-12;
constexpr double kPi = std::numbers::pi;

// Output intensity from the field transfer matrix rt (P_a + e^{i phi} P_b).
double transfer_oracle(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B, int a,
                       int b, double phi, const SplitterConfig& s) {
  const Eigen::Matrix2cd t = s.r() * s.t() * (projector(A, a) + std::polar(1.0, phi) * projector(B, b));
  return (t * g.matrix() * t.adjoint()).trace().real();
}

}  // namespace

TEST_CASE("splitter validation") {
  CHECK_THROWS_AS(SplitterConfig(Complex(0.9, 0), Complex(0.9, 0)), PreconditionError);
  CHECK_THROWS_AS(SplitterConfig(Complex(0, 0), Complex(1, 0)), PreconditionError);
  CHECK(std::abs(SplitterConfig::balanced().gain() - 0.25) < kTol);
}

TEST_CASE("phase scan validation") {
  CHECK_THROWS_AS(PhaseScan({0.0, 1.0}, {1.0}), PreconditionError);
  CHECK_THROWS_AS(PhaseScan({0.0, 7.0}, {1.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(PhaseScan({1.0, 0.5}, {1.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(PhaseScan({0.0, 1.0}, {1.0, -0.1}), PreconditionError);
  const auto s = SplitterConfig::balanced();
  CHECK_THROWS_AS(phase_scan_reconstruct(PhaseScan({0.0, kPi}, {1.0, 1.0}), s), PreconditionError);
  CHECK_THROWS_AS(phase_scan_reconstruct(PhaseScan({0.0, 1.0, 4.0}, {1.0, 1.0, 1.0}), s),
                  PreconditionError);
}

TEST_CASE("mzi intensity examples") {
  const auto s = SplitterConfig::balanced();
  SUBCASE("same projector in both arms interferes fully") {
    const BasisAxis A = x_axis();
    const Jones e = basis_jones(A, +1);
    const PolarizationMatrix g(e * e.adjoint());
    CHECK(std::abs(mzi_intensity(g, A, A, 1, 1, 0.0, s) - 1.0) < kTol);
  }
  SUBCASE("unpolarized light through orthogonal Stokes axes") {
    const auto g = gamma_from_stokes({0, 0, 0});
    for (double phi : {0.0, 0.5 * kPi, 1.3, kPi}) {
      const double want = 0.25 * (1.0 + 0.5 * std::cos(phi));
      CHECK(std::abs(mzi_intensity(g, x_axis(), y_axis(), 1, -1, phi, s) - want) < kTol);
      CHECK(std::abs(transfer_oracle(g, x_axis(), y_axis(), 1, -1, phi, s) - want) < kTol);
    }
  }
  SUBCASE("orthogonal projections do not interfere") {
    const auto g = gamma_from_stokes({0.3, -0.2, 0.5});
    const double i0 = mzi_intensity(g, z_axis(), z_axis(), 1, -1, 0.0, s);
    for (double phi : {0.4, 1.7, 3.0, 5.5})
      CHECK(std::abs(mzi_intensity(g, z_axis(), z_axis(), 1, -1, phi, s) - i0) < kTol);
  }
}

TEST_CASE("mzi intensity matches the transfer-matrix oracle and stays nonnegative") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  const SplitterConfig s(Complex(0.3, 0.4), Complex(0.0, 0.6));
  for (int n = 0; n < 500; ++n) {
    const auto g = gamma_from_stokes(random_stokes(rng));
    const BasisAxis A = random_axis(rng);
    const BasisAxis B = random_axis(rng);
    const int a = n % 2 ? 1 : -1;
    const int b = n % 3 ? -1 : 1;
    const double phi = u(rng);
    const double i = mzi_intensity(g, A, B, a, b, phi, s);
    CHECK(std::abs(i - transfer_oracle(g, A, B, a, b, phi, s)) < kTol);
    CHECK(i >= -kTol);
  }
}

TEST_CASE("margenau-hill extraction from two phases") {
  const auto s = SplitterConfig::balanced();
  CHECK(extract_mh(0.3, 0.3, s) == 0.0);
  {
    const auto g = gamma_from_stokes({0, 0, 0.4});
    const double m = extract_mh(mzi_intensity(g, x_axis(), y_axis(), 1, 1, 0.0, s),
                                mzi_intensity(g, x_axis(), y_axis(), 1, 1, kPi, s), s);
    CHECK(std::abs(m - 0.25) < kTol);
  }
  {
    const auto g = gamma_from_stokes({0.6, 0, 0.8});
    const double m = extract_mh(mzi_intensity(g, x_axis(), y_axis(), 1, -1, 0.0, s),
                                mzi_intensity(g, x_axis(), y_axis(), 1, -1, kPi, s), s);
    CHECK(std::abs(m - 0.4) < kTol);
  }
  std::mt19937_64 rng(32);
  for (int n = 0; n < 200; ++n) {
    const auto g = gamma_from_stokes(random_stokes(rng));
    const BasisAxis A = random_axis(rng);
    const BasisAxis B = random_axis(rng);
    const double m = extract_mh(mzi_intensity(g, A, B, 1, -1, 0.0, s),
                                mzi_intensity(g, A, B, 1, -1, kPi, s), s);
    CHECK(std::abs(m - kd_closed_form(g, A, B)(1, -1).real()) < kTol);
  }
}

TEST_CASE("phase scan reconstruction is exact for N >= 3") {
  const auto s = SplitterConfig::balanced();
  const auto g = gamma_from_stokes({0, 0, 0.4});
  const Complex k4 = phase_scan_reconstruct(simulate_scan(g, x_axis(), y_axis(), 1, 1, 4, s), s);
  CHECK(std::abs(k4 - Complex(0.25, 0.1)) < kTol);
  const Complex k3 = phase_scan_reconstruct(simulate_scan(g, x_axis(), y_axis(), 1, 1, 3, s), s);
  const Complex k64 = phase_scan_reconstruct(simulate_scan(g, x_axis(), y_axis(), 1, 1, 64, s), s);
  CHECK(std::abs(k3 - k64) < kTol);

  SUBCASE("grid offset does not matter") {
    std::vector<double> phases;
    std::vector<double> values;
    for (int j = 0; j < 5; ++j) {
      const double phi = 0.3 + 2.0 * kPi * j / 5.0;
      phases.push_back(phi);
      values.push_back(mzi_intensity(g, x_axis(), y_axis(), 1, 1, phi, s));
    }
    CHECK(std::abs(phase_scan_reconstruct(PhaseScan(phases, values), s) - Complex(0.25, 0.1)) < kTol);
  }

  SUBCASE("splitter gain cancels") {
    std::mt19937_64 rng(40);
    for (int n = 0; n < 100; ++n) {
      const auto gr = gamma_from_stokes(random_stokes(rng));
      const BasisAxis A = random_axis(rng);
      const BasisAxis B = random_axis(rng);
      const SplitterConfig weak(Complex(0.1, 0), Complex(0.2, 0));
      const double c = weak.gain() / s.gain();
      for (double phi : {0.0, 1.0, 2.5})
        CHECK(std::abs(mzi_intensity(gr, A, B, 1, 1, phi, weak) -
                       c * mzi_intensity(gr, A, B, 1, 1, phi, s)) < kTol);
      const Complex kw = phase_scan_reconstruct(simulate_scan(gr, A, B, 1, 1, 7, weak), weak);
      CHECK(std::abs(kw - kd_closed_form(gr, A, B)(1, 1)) < kTol);
    }
  }
}

TEST_CASE("harmonic extraction") {
  // I(phi) = 2 + (1 + 2i) e^{i phi} + (1 - 2i) e^{-i phi}
  std::vector<double> phases = PhaseScan::uniform_phases(6);
  std::vector<double> values;
  for (double phi : phases) values.push_back(2.0 + 2.0 * std::cos(phi) - 4.0 * std::sin(phi) + 6.0);
  const PhaseScan scan(phases, values);
  CHECK(std::abs(phase_coefficient(scan, 0) - 8.0) < kTol);
  CHECK(std::abs(phase_coefficient(scan, 1) - Complex(1.0, 2.0)) < kTol);
  CHECK(std::abs(phase_coefficient(scan, -1) - Complex(1.0, -2.0)) < kTol);
}

TEST_CASE("ensemble sampling") {
  SUBCASE("rank-one covariance keeps the second component at zero") {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, 0;
    const FieldEnsemble e = sample_ensemble(PolarizationMatrix(m), 1000, 3);
    for (const auto& v : e.samples) CHECK(v(1) == Complex(0.0, 0.0));
  }
  SUBCASE("unpolarized ensemble has tiny cross-correlation") {
    const FieldEnsemble e = sample_ensemble(gamma_from_stokes({0, 0, 0}), 1000000, 4);
    const Eigen::Matrix2cd c = e.empirical_covariance();
    CHECK(std::abs(c(0, 1)) < 0.005);
    CHECK(std::abs(c(0, 0) - 0.5) < 0.005);
  }
  SUBCASE("determinism") {
    const auto g = gamma_from_stokes({0.2, 0.3, -0.4});
    const FieldEnsemble a = sample_ensemble(g, 200, 99);
    const FieldEnsemble b = sample_ensemble(g, 200, 99);
    const FieldEnsemble c = sample_ensemble(g, 200, 100);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < 200; ++i) {
      same = same && a.samples[i] == b.samples[i];
      differs = differs || a.samples[i] != c.samples[i];
    }
    CHECK(same);
    CHECK(differs);
  }
  SUBCASE("empirical covariance converges at the Monte-Carlo rate") {
    const auto g = gamma_from_stokes({0.5, -0.3, 0.6});
    const FieldEnsemble e = sample_ensemble(g, 200000, 5);
    CHECK((e.empirical_covariance() - g.matrix()).cwiseAbs().maxCoeff() < 5.0 / std::sqrt(200000.0));
  }
  CHECK_THROWS_AS(sample_ensemble(gamma_from_stokes({0, 0, 0}), 0, 1), PreconditionError);
}

TEST_CASE("ensemble reconstruction lands within three standard errors") {
  const auto s = SplitterConfig::balanced();
  const auto g = gamma_from_stokes({0, 0, 0.4});
  const FieldEnsemble e = sample_ensemble(g, 100000, 2024);
  const EnsembleEstimate est = ensemble_reconstruct(e, x_axis(), y_axis(), 1, 1, 8, s);
  const Complex want(0.25, 0.1);
  CHECK(est.stderr_re > 0.0);
  CHECK(est.stderr_im > 0.0);
  CHECK(std::abs(est.value.real() - want.real()) <= 3.0 * est.stderr_re);
  CHECK(std::abs(est.value.imag() - want.imag()) <= 3.0 * est.stderr_im);
  // The reconstruction of the ensemble scan itself is N-independent.
  const EnsembleEstimate est3 = ensemble_reconstruct(e, x_axis(), y_axis(), 1, 1, 3, s);
  CHECK(std::abs(est3.value - est.value) < 1e-12);
}

TEST_CASE("ensemble error decays like 1/sqrt(n)") {
  const auto s = SplitterConfig::balanced();
  const auto g = gamma_from_stokes({0.3, 0.5, 0.4});
  const BasisAxis A = BasisAxis::normalized({1, 0, 1});
  const BasisAxis B = y_axis();
  const Complex want = kd_closed_form(g, A, B)(1, -1);
  // RMS error over independent seeds at each sample size.
  const auto rms_error = [&](std::size_t n) {
    double acc = 0.0;
    const int seeds = 24;
    for (int r = 0; r < seeds; ++r) {
      const FieldEnsemble e = sample_ensemble(g, n, 1000 + static_cast<std::uint64_t>(r) * 7919 + n);
      acc += std::norm(ensemble_reconstruct(e, A, B, 1, -1, 4, s).value - want);
    }
    return std::sqrt(acc / seeds);
  };
  const double e3 = rms_error(1000);
  const double e4 = rms_error(10000);
  const double e5 = rms_error(100000);
  // sqrt(10) ~ 3.16 per decade; the band allows the RMS spread of 24 seeds.
  CHECK(e3 / e4 >= 2.0);
  CHECK(e3 / e4 <= 4.5);
  CHECK(e4 / e5 >= 2.0);
  CHECK(e4 / e5 <= 4.5);
}
