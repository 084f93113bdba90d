#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace rabi {

/// A sampled probability curve and the predictor that produced it.
struct ProbabilitySeries {
  std::vector<double> t;
  std::vector<double> p;
  std::string source;
  std::map<std::string, double> params;

  std::size_t size() const noexcept { return t.size(); }
  bool empty() const noexcept { return t.empty(); }
};

/// n_points equally spaced times on [0, t_max]; n_points == 1 yields {0}.
std::vector<double> uniform_grid(double t_max, std::size_t n_points);

}  // namespace rabi
