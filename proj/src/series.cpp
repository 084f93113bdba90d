#include "rabi/series.hpp"

#include <stdexcept>

namespace rabi {

std::vector<double> uniform_grid(double t_max, std::size_t n_points) {
  if (!(t_max >= 0.0)) throw std::domain_error("grid t_max must be non-negative");
  std::vector<double> grid(n_points);
  if (n_points == 1) return {0.0};
  for (std::size_t j = 0; j < n_points; ++j) {
    grid[j] = t_max * static_cast<double>(j) / static_cast<double>(n_points - 1);
  }
  return grid;
}

}  // namespace rabi
