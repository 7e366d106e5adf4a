#pragma once

#include "kdoptics/space_angular.hpp"

namespace kdoptics::cli {

/// Gaussian beam centered at x0 shown over x0 +- window_x, |p| <= window_p.
struct Fig3Config {
  double x0 = 1.0;
  double sigma = 0.03;
  double k = 1.0;
  double window_x = 0.12;   ///< 4 sigma
  double window_p = 0.0;    ///< 0 selects 4 / (k sigma)
  std::size_t nx = 121;     ///< output rows, odd
  std::size_t np = 121;     ///< output columns
  /// < 0: fully coherent beam; 0: position-incoherent; > 0: Gaussian
  /// coherence factor exp[-(x - x')^2 / (4 mu^2)].
  double coherence_length = -1.0;

  double band() const { return window_p > 0.0 ? window_p : 4.0 / (k * sigma); }
  void validate() const;
};

/// KD map over the window. The kernel lives on a finer, wider grid covering
/// x0 +- max(8 sigma, window_x); only the window rows are returned.
space::KDMap fig3_map(const Fig3Config& cfg, unsigned threads = 1);

}  // namespace kdoptics::cli
