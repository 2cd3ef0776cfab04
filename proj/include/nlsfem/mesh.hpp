#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nlsfem/errors.hpp"

namespace nlsfem {

/// Partition of the interval [a, b] into m elements. The family is assumed
/// quasi-uniform: h_max/h_min <= gamma is validated at construction.
struct Mesh1D {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> nodes;  // m+1 strictly increasing, nodes[0]=a, nodes[m]=b
  double gamma = 10.0;        // quasi-uniformity bound

  Mesh1D(double a_, double b_, std::vector<double> nodes_, double gamma_ = 10.0)
      : a(a_), b(b_), nodes(std::move(nodes_)), gamma(gamma_) {
    if (nodes.size() < 3) throw InvalidArgument("Mesh1D: need at least 2 elements");
    if (nodes.front() != a || nodes.back() != b) {
      throw InvalidArgument("Mesh1D: node list must span [a, b]");
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      if (!(nodes[i] > nodes[i - 1])) {
        throw InvalidArgument("Mesh1D: nodes must be strictly increasing");
      }
    }
    if (h_max() > gamma * h_min() * (1.0 + 1e-12)) {
      throw InvalidArgument("Mesh1D: quasi-uniformity bound gamma violated");
    }
  }

  int m() const { return static_cast<int>(nodes.size()) - 1; }
  double element_length(int e) const { return nodes[e + 1] - nodes[e]; }

  double h_max() const {
    double h = 0.0;
    for (int e = 0; e < m(); ++e) h = std::max(h, element_length(e));
    return h;
  }

  double h_min() const {
    double h = element_length(0);
    for (int e = 1; e < m(); ++e) h = std::min(h, element_length(e));
    return h;
  }
};

inline Mesh1D build_uniform_mesh(double a, double b, int m) {
  if (!(a < b)) throw InvalidArgument("build_uniform_mesh: need a < b");
  if (m < 2) throw InvalidArgument("build_uniform_mesh: need m >= 2");
  std::vector<double> nodes(m + 1);
  for (int i = 0; i <= m; ++i) nodes[i] = a + (b - a) * i / m;
  nodes[0] = a;
  nodes[m] = b;
  return Mesh1D(a, b, std::move(nodes));
}

namespace detail {

// Deterministic uniform double in [0, 1) from the raw engine words, so the
// sequence does not depend on the standard library's distribution internals.
template <typename Engine>
double uniform01(Engine& eng) {
  return std::ldexp(static_cast<double>(eng() >> 11), -53);
}

}  // namespace detail

/// Uniform mesh with interior nodes displaced by at most jitter*(b-a)/m,
/// deterministically from rng_seed. jitter < 0.5 keeps nodes increasing.
inline Mesh1D build_perturbed_mesh(double a, double b, int m, double jitter,
                                   std::uint64_t rng_seed) {
  if (!(a < b)) throw InvalidArgument("build_perturbed_mesh: need a < b");
  if (m < 2) throw InvalidArgument("build_perturbed_mesh: need m >= 2");
  if (!(jitter >= 0.0) || jitter >= 0.5) {
    throw InvalidArgument("build_perturbed_mesh: jitter must be in [0, 0.5)");
  }
  const double h = (b - a) / m;
  std::vector<double> nodes(m + 1);
  std::mt19937_64 eng(rng_seed);
  for (int i = 0; i <= m; ++i) {
    nodes[i] = a + h * i;
    if (i > 0 && i < m) {
      double u = 2.0 * detail::uniform01(eng) - 1.0;  // (-1, 1)
      nodes[i] += jitter * h * u;
    }
  }
  nodes[0] = a;
  nodes[m] = b;
  // worst-case ratio (1+2j)/(1-2j) can exceed the default gamma=10
  double bound = (1.0 + 2.0 * jitter) / (1.0 - 2.0 * jitter);
  return Mesh1D(a, b, std::move(nodes), std::max(10.0, bound * (1.0 + 1e-12)));
}

}  // namespace nlsfem
