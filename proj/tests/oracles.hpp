#pragma once

#include <complex>
#include <random>

#include <Eigen/Core>

namespace oracle {

using Complex = std::complex<double>;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20260214);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
