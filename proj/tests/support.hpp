#pragma once

#include <random>

#include "irsolve/core.hpp"

namespace irsolve::testing {

inline Vector vec(std::initializer_list<double> v) {
  return Eigen::Map<const Vector>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

// Uniform sample in the box.
inline Vector sample(const BoxPolytope& box, std::mt19937_64& rng) {
  Vector x(box.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uniform_real_distribution<double> u(box.lower()[i], box.upper()[i]);
    x[i] = u(rng);
  }
  return x;
}

inline Vector gaussian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

}  // namespace irsolve::testing
