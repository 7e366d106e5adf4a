#pragma once

#include "kdoptics/polarization.hpp"

// Noisy simultaneous observation of the complementary sigma_x / sigma_y
// polarization observables, and the linear kernel that undoes the noise.
namespace kdoptics::noisy {

using pol::KDTable;
using pol::StokesVector;

/// Noise visibilities of the joint measurement; gx^2 + gy^2 + gxy^2 <= 1 keeps
/// the joint intensity nonnegative.
class NoiseParameters {
 public:
  NoiseParameters(double gamma_x, double gamma_y, double gamma_xy);

  double gamma_x() const { return gx_; }
  double gamma_y() const { return gy_; }
  double gamma_xy() const { return gxy_; }

 private:
  double gx_;
  double gy_;
  double gxy_;
};

/// Joint intensity I(x, y), x, y in {+1, -1}; unit total.
using JointIntensityTable = SignTable<double>;

/// I(x,y) = [1 + x gx s_x + y gy s_y + xy gxy s_z] / 4
JointIntensityTable noisy_intensity(const StokesVector& s, const NoiseParameters& n);

/// chi~(x,y;x',y') = [1 + xx'/gx + yy'/gy + i xy x'y'/gxy] / 4
pol::Complex inversion_kernel(int x, int y, int xp, int yp, const NoiseParameters& n);

/// K(x,y) = sum_{x',y'} chi~(x,y;x',y') I(x',y'), labelled with the X and Y axes.
KDTable reconstruct_kd(const JointIntensityTable& joint, const NoiseParameters& n);

}  // namespace kdoptics::noisy
