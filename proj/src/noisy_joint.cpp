#include "kdoptics/noisy_joint.hpp"

#include <cmath>

namespace kdoptics::noisy {

namespace {
constexpr double kMinGamma = 1e-9;
}

NoiseParameters::NoiseParameters(double gamma_x, double gamma_y, double gamma_xy)
    : gx_(gamma_x), gy_(gamma_y), gxy_(gamma_xy) {
  require(gx_ > 0.0 && gy_ > 0.0 && gxy_ > 0.0, "noise parameters must be positive");
  require(gx_ * gx_ + gy_ * gy_ + gxy_ * gxy_ <= 1.0 + 1e-12,
          "noise parameters violate gx^2 + gy^2 + gxy^2 <= 1");
}

JointIntensityTable noisy_intensity(const StokesVector& s, const NoiseParameters& n) {
  require(s.norm() <= 1.0 + 1e-9, "Stokes vector lies outside the Poincare sphere");
  JointIntensityTable out;
  for (int x : kSigns) {
    for (int y : kSigns) {
      out(x, y) =
          (1.0 + x * n.gamma_x() * s.x + y * n.gamma_y() * s.y + x * y * n.gamma_xy() * s.z) / 4.0;
    }
  }
  return out;
}

pol::Complex inversion_kernel(int x, int y, int xp, int yp, const NoiseParameters& n) {
  sign_index(x);
  sign_index(y);
  sign_index(xp);
  sign_index(yp);
  const double re = 1.0 + x * xp / n.gamma_x() + y * yp / n.gamma_y();
  return pol::Complex(re, x * y * xp * yp / n.gamma_xy()) / 4.0;
}

KDTable reconstruct_kd(const JointIntensityTable& joint, const NoiseParameters& n) {
  require(n.gamma_x() > kMinGamma && n.gamma_y() > kMinGamma && n.gamma_xy() > kMinGamma,
          "noise parameters too small: inversion kernel diverges");
  KDTable out{{}, pol::x_axis().axis(), pol::y_axis().axis()};
  for (int x : kSigns) {
    for (int y : kSigns) {
      pol::Complex acc{0.0, 0.0};
      for (int xp : kSigns)
        for (int yp : kSigns) acc += inversion_kernel(x, y, xp, yp, n) * joint(xp, yp);
      out.values(x, y) = acc;
    }
  }
  return out;
}

}  // namespace kdoptics::noisy
