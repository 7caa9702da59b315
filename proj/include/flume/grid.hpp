#pragma once
/// @file grid.hpp
/// @brief Uniform periodic grid on the unit torus.

#include <stdexcept>

namespace flume {

/// Cell-centered uniform mesh of [0, 1) with periodic wrap.  Powers of two
/// keep the spectral diffusion on the cheap radix-2 path, but any n >= 4 is
/// valid.
struct Grid {
  int n_cells = 256;
  double dx = 1.0 / 256.0;

  explicit Grid(int n) : n_cells(n), dx(1.0 / n) {
    if (n < 4) throw std::domain_error("grid: need at least 4 cells");
  }

  double x(int i) const { return (i + 0.5) * dx; }
  int wrap(int i) const {
    int m = i % n_cells;
    return m < 0 ? m + n_cells : m;
  }
};

}  // namespace flume
