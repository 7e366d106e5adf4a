#pragma once

#include <complex>

#include <Eigen/Dense>

#include "kdoptics/sign_table.hpp"

// Polarization-domain Kirkwood-Dirac machinery.
//
// Matrices act on Jones vectors (E_x, E_y). The Pauli basis is
//   sigma_x = [[0, 1], [1, 0]],  sigma_y = [[0, i], [-i, 0]],  sigma_z = diag(1, -1),
// so sigma_x sigma_y = -i sigma_z. With this handedness the closed form
//   K(a,b) = [1 + ab sA.sB + (a sA + b sB + i ab sA x sB).s] / 4
// is exactly <a|G|b><b|a>. The linear (x, y) basis is the sigma_z eigenbasis,
// hence G11 - G22 = s_z.
namespace kdoptics::pol {

using Complex = std::complex<double>;
using Jones = Eigen::Vector2cd;

inline constexpr double kExactTol = 1e-12;

struct StokesVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  double dot(const StokesVector& o) const { return x * o.x + y * o.y + z * o.z; }
  StokesVector cross(const StokesVector& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  StokesVector operator*(double c) const { return {c * x, c * y, c * z}; }
  StokesVector operator+(const StokesVector& o) const { return {x + o.x, y + o.y, z + o.z}; }

  /// Point on the Poincare sphere at polar angle theta and azimuth phi.
  static StokesVector from_angles(double theta, double phi);
};

/// Unit Stokes vector labelling a polarization basis {|+1>, |-1>}.
class BasisAxis {
 public:
  explicit BasisAxis(const StokesVector& axis);

  static BasisAxis from_angles(double theta, double phi);
  /// Rescales any nonzero vector onto the sphere.
  static BasisAxis normalized(const StokesVector& v);

  const StokesVector& axis() const { return axis_; }

 private:
  StokesVector axis_;
};

BasisAxis x_axis();
BasisAxis y_axis();
BasisAxis z_axis();

/// Hermitian positive-semidefinite 2x2 coherence matrix.
class PolarizationMatrix {
 public:
  /// Validates hermiticity and positivity (tolerance 1e-12) and stores the
  /// exactly-Hermitian part.
  explicit PolarizationMatrix(const Eigen::Matrix2cd& m);

  const Eigen::Matrix2cd& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  /// Total intensity tr(G).
  double intensity() const { return m_.trace().real(); }
  bool normalized() const;

  /// <bra|G|ket>
  Complex element(const Jones& bra, const Jones& ket) const { return bra.dot(m_ * ket); }

 private:
  Eigen::Matrix2cd m_;
};

/// sigma_0..sigma_3 with index 1,2,3 = x,y,z.
const Eigen::Matrix2cd& pauli(int j);

/// G = (I0 sigma_0 + s.sigma) / 2. `s` holds absolute Stokes parameters, so
/// |s| <= I0 is required (relative slack 1e-9).
PolarizationMatrix gamma_from_stokes(const StokesVector& s, double intensity = 1.0);
/// s_j = tr(G sigma_j); unnormalized when tr(G) != 1.
StokesVector stokes_from_gamma(const PolarizationMatrix& g);

/// Eigenvector of axis.sigma with eigenvalue `a`; the first nonzero component
/// is real and positive.
Jones basis_jones(const BasisAxis& axis, int a);
/// Pure state whose Stokes vector is (sin th cos ph, sin th sin ph, cos th):
/// (cos th/2, e^{-i ph} sin th/2) in this handedness.
Jones jones_from_angles(double theta, double phi);

/// |a><a| = (sigma_0 + a axis.sigma) / 2
Eigen::Matrix2cd projector(const BasisAxis& axis, int a);
/// K^(a,b) = |b><b|a><a|, so that K(a,b) = tr[G K^(a,b)].
Eigen::Matrix2cd kd_operator(const BasisAxis& A, const BasisAxis& B, int a, int b);

struct KDTable {
  SignTable<Complex> values;
  StokesVector axis_a;
  StokesVector axis_b;

  Complex operator()(int a, int b) const { return values(a, b); }
  Complex sum() const { return values.sum(); }
};

using RealTable = SignTable<double>;

KDTable kd_closed_form(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B);
/// Independent route: explicit inner products of basis_jones vectors.
KDTable kd_oracle(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B);

RealTable margenau_hill(const KDTable& k);

/// (ab/4) (sA x sB).s
double kd_imaginary_part(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B,
                         int a, int b);

/// P with P^2 = 2 tr(G^2)/tr(G)^2 - 1.
double degree_of_polarization(const PolarizationMatrix& g);

/// Sum of |K(a,b)|^2 over the table.
double kd_abs2_sum(const KDTable& k);
/// The five-term expression
///   [I0^2 (1 + (sA.sB)^2) + (sA.s)^2 + (sB.s)^2 + ((sA x sB).s)^2] / 4,
/// valid for any pair of axes.
double kd_abs2_sum_formula(const PolarizationMatrix& g, const BasisAxis& A, const BasisAxis& B);

}  // namespace kdoptics::pol
