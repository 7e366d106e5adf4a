#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kdoptics/polarization.hpp"
#include "kdoptics/space_angular.hpp"

namespace kdoptics::wigner {

using space::AngularGrid;
using space::CoherenceKernel;
using space::KDMap;
using space::SpatialGrid;

/// Real W(x_i, p_j) plus grids.
struct WignerMap {
  SpatialGrid xgrid;
  AngularGrid pgrid;
  Eigen::MatrixXd values;
  /// Largest |Im| of the quadrature before it was discarded.
  double max_imag = 0.0;
  std::vector<std::string> warnings;

  /// sum W dx dp
  double total() const { return values.sum() * xgrid.dx * pgrid.dp; }
};

/// W(x,p) = (k/2pi) int dy G(x - y/2, x + y/2) e^{ikpy}, with y stepped by dx
/// over the range where both arguments stay on the grid. Half-grid samples of
/// G come from the kernel's closed form when it has one, otherwise from
/// bilinear interpolation of the grid values.
WignerMap wigner_from_kernel(const CoherenceKernel& g, const AngularGrid& pgrid,
                             unsigned threads = 1);

/// Largest spacings for which the kernel e^{-2ik(p-p')(x-x')} keeps at least
/// four samples per period across the grid spans.
struct OscillationLimits {
  double max_dx = 0.0;
  double max_dp = 0.0;
};
OscillationLimits oscillation_limits(const SpatialGrid& xgrid, const AngularGrid& pgrid);

/// Grid pair for a Gauss-Schell beam on which the Wigner-to-KD chain is
/// resolved: x covers +-7 sigma, p covers the band where |K| exceeds `tail` of
/// its peak, and both spacings satisfy oscillation_limits.
struct GridPair {
  SpatialGrid x;
  AngularGrid p;
};
GridPair gauss_schell_certified_grids(const space::GaussSchellParams& gs, double k,
                                      double tail = 1e-10);

/// K(x,p) = (k/pi) sum_{x',p'} e^{-2ik(p-p')(x-x')} W(x',p') dx' dp' on the
/// grids of `w`. Rejects grids that violate oscillation_limits.
KDMap kd_from_wigner_continuous(const WignerMap& w, unsigned threads = 1);

// --- two-level polarization case (sigma_x / sigma_y bases) ---------------------

using DiscreteWignerTable = SignTable<double>;

/// W(x,y) = [1 + x s_x + y s_y + xy s_z] / 4
DiscreteWignerTable discrete_wigner(const pol::StokesVector& s);

/// chi(x,y;x',y') = [1 + xx' + yy' + i xy x'y'] / 4
pol::Complex discrete_kernel(int x, int y, int xp, int yp);

/// K(x,y) = sum_{x',y'} chi(x,y;x',y') W(x',y'), labelled with the X and Y axes.
pol::KDTable kd_from_discrete_wigner(const DiscreteWignerTable& w);

}  // namespace kdoptics::wigner
