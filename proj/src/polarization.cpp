#include "kdoptics/polarization.hpp"

#include <array>
#include <cmath>

namespace kdoptics::pol {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix2cd sigma_dot(const StokesVector& n) {
  Eigen::Matrix2cd m;
  m << n.z, Complex(n.x, n.y), Complex(n.x, -n.y), -n.z;
  return m;
}

}  // namespace

double StokesVector::norm() const { return std::sqrt(dot(*this)); }

StokesVector StokesVector::from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

BasisAxis::BasisAxis(const StokesVector& axis) : axis_(axis) {
  require(std::abs(axis.norm() - 1.0) <= kExactTol, "basis axis must be a unit Stokes vector");
}

BasisAxis BasisAxis::from_angles(double theta, double phi) {
  return BasisAxis(StokesVector::from_angles(theta, phi));
}

BasisAxis BasisAxis::normalized(const StokesVector& v) {
  const double n = v.norm();
  require(n > 0.0, "basis axis must be nonzero");
  return BasisAxis(v * (1.0 / n));
}

BasisAxis x_axis() { return BasisAxis({1.0, 0.0, 0.0}); }
BasisAxis y_axis() { return BasisAxis({0.0, 1.0, 0.0}); }
BasisAxis z_axis() { return BasisAxis({0.0, 0.0, 1.0}); }

PolarizationMatrix::PolarizationMatrix(const Eigen::Matrix2cd& m) {
  const double herm_err = std::max({std::abs(m(0, 1) - std::conj(m(1, 0))),
                                    std::abs(m(0, 0).imag()), std::abs(m(1, 1).imag())});
  require(herm_err <= kExactTol, "polarization matrix must be Hermitian");
  m_ = 0.5 * (m + m.adjoint());
  const double half_trace = 0.5 * m_.trace().real();
  const double half_diff = 0.5 * (m_(0, 0).real() - m_(1, 1).real());
  const double min_eig = half_trace - std::hypot(half_diff, std::abs(m_(0, 1)));
  require(min_eig >= -kExactTol, "polarization matrix must be positive semidefinite");
}

bool PolarizationMatrix::normalized() const { return std::abs(intensity() - 1.0) <= kExactTol; }

const Eigen::Matrix2cd& pauli(int j) {
  static const std::array<Eigen::Matrix2cd, 4> mats = [] {
    std::array<Eigen::Matrix2cd, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, kI, -kI, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  require(j >= 0 && j <= 3, "Pauli index out of range");
  return mats[static_cast<std::size_t>(j)];
}

PolarizationMatrix gamma_from_stokes(const StokesVector& s, double intensity) {
  require(intensity > 0.0, "intensity must be positive");
  const double len = s.norm();
  require(len <= intensity * (1.0 + 1e-9), "Stokes vector lies outside the Poincare sphere");
  // Vectors inside the rounding slack are pulled back onto the sphere.
  const StokesVector clamped = len > intensity ? s * (intensity / len) : s;
  Eigen::Matrix2cd m = 0.5 * (intensity * pauli(0) + sigma_dot(clamped));
  return PolarizationMatrix(m);
}

StokesVector stokes_from_gamma(const PolarizationMatrix& g) {
  const auto& m = g.matrix();
  return {(m * pauli(1)).trace().real(), (m * pauli(2)).trace().real(),
          (m * pauli(3)).trace().real()};
}

Jones basis_jones(const BasisAxis& axis, int a) {
  const double sgn = a == 1 ? 1.0 : -1.0;
  sign_index(a);
  const StokesVector& n = axis.axis();
  // Two null vectors of (n.sigma - a); at least one has norm >= 1.
  Jones u(Complex(n.x, n.y), sgn - n.z);
  Jones v(sgn + n.z, Complex(n.x, -n.y));
  Jones w = u.norm() > v.norm() ? u : v;
  w.normalize();
  const std::size_t lead = std::abs(w(0)) > kExactTol ? 0 : 1;
  const Complex phase = std::conj(w(lead)) / std::abs(w(lead));
  w *= phase;
  w(lead) = std::abs(w(lead));
  return w;
}

Jones jones_from_angles(double theta, double phi) {
  return basis_jones(BasisAxis::from_angles(theta, phi), +1);
}

Eigen::Matrix2cd projector(const BasisAxis& axis, int a) {
  const double sgn = a == 1 ? 1.0 : -1.0;
  sign_index(a);
  return 0.5 * (pauli(0) + sigma_dot(axis.axis() * sgn));
}

Eigen::Matrix2cd kd_operator(const BasisAxis& A, const BasisAxis& B, int a, int b) {
  return projector(B, b) * projector(A, a);
}

KDTable kd_closed_form(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B) {
  const StokesVector s = stokes_from_gamma(g);
  const StokesVector& sa = A.axis();
  const StokesVector& sb = B.axis();
  const double t = g.intensity();
  const double ab_dot = sa.dot(sb);
  const double triple = sa.cross(sb).dot(s);
  KDTable out{{}, sa, sb};
  for (int a : kSigns) {
    for (int b : kSigns) {
      const double re = t * (1.0 + a * b * ab_dot) + a * sa.dot(s) + b * sb.dot(s);
      out.values(a, b) = Complex(re, a * b * triple) / 4.0;
    }
  }
  return out;
}

KDTable kd_oracle(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B) {
  KDTable out{{}, A.axis(), B.axis()};
  for (int a : kSigns) {
    const Jones ka = basis_jones(A, a);
    for (int b : kSigns) {
      const Jones kb = basis_jones(B, b);
      out.values(a, b) = g.element(ka, kb) * kb.dot(ka);
    }
  }
  return out;
}

RealTable margenau_hill(const KDTable& k) {
  RealTable m;
  for (int a : kSigns)
    for (int b : kSigns) m(a, b) = k(a, b).real();
  return m;
}

double kd_imaginary_part(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B,
                         int a, int b) {
  sign_index(a);
  sign_index(b);
  return a * b * A.axis().cross(B.axis()).dot(stokes_from_gamma(g)) / 4.0;
}

double degree_of_polarization(const PolarizationMatrix& g) {
  const double t = g.intensity();
  require(t > 0.0, "degree of polarization needs nonzero intensity");
  const double purity = (g.matrix() * g.matrix()).trace().real() / (t * t);
  return std::sqrt(std::max(0.0, 2.0 * purity - 1.0));
}

double kd_abs2_sum(const KDTable& k) {
  double total = 0.0;
  for (const auto& v : k.values.raw()) total += std::norm(v);
  return total;
}

double kd_abs2_sum_formula(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B) {
  const StokesVector s = stokes_from_gamma(g);
  const StokesVector& sa = A.axis();
  const StokesVector& sb = B.axis();
  const double t = g.intensity();
  const double c = sa.dot(sb);
  const double u = sa.dot(s);
  const double v = sb.dot(s);
  const double w = sa.cross(sb).dot(s);
  return (t * t * (1.0 + c * c) + u * u + v * v + w * w) / 4.0;
}

}  // namespace kdoptics::pol
