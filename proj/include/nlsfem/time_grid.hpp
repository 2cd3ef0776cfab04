#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nlsfem/errors.hpp"
#include "nlsfem/mesh.hpp"

namespace nlsfem {

/// Non-uniform partition 0 = t_0 < t_1 < ... < t_N = T with steps
/// k_n = t_n - t_{n-1} and half-step midpoints t_{n-1/2}.
struct TimeGrid {
  std::vector<double> nodes;

  explicit TimeGrid(std::vector<double> nodes_) : nodes(std::move(nodes_)) {
    if (nodes.size() < 2) throw InvalidArgument("TimeGrid: need at least one step");
    if (nodes.front() != 0.0) throw InvalidArgument("TimeGrid: must start at t = 0");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      if (!(nodes[i] > nodes[i - 1])) {
        throw InvalidArgument("TimeGrid: nodes must be strictly increasing");
      }
    }
  }

  int steps() const { return static_cast<int>(nodes.size()) - 1; }
  double final_time() const { return nodes.back(); }
  double step(int n) const { return nodes[n] - nodes[n - 1]; }  // k_n, n >= 1
  double midpoint(int n) const { return nodes[n - 1] + 0.5 * step(n); }

  double k_max() const {
    double k = 0.0;
    for (int n = 1; n <= steps(); ++n) k = std::max(k, step(n));
    return k;
  }

  static TimeGrid uniform(double T, int N) {
    if (!(T > 0.0) || N < 1) throw InvalidArgument("TimeGrid::uniform: need T > 0, N >= 1");
    std::vector<double> nodes(N + 1);
    for (int n = 0; n <= N; ++n) nodes[n] = T * n / N;
    nodes[0] = 0.0;
    nodes[N] = T;
    return TimeGrid(std::move(nodes));
  }

  /// Uniform grid with interior nodes displaced by at most jitter*T/N,
  /// deterministically from seed. jitter < 0.5 keeps nodes increasing.
  static TimeGrid jittered(double T, int N, double jitter, std::uint64_t seed) {
    if (!(jitter >= 0.0) || jitter >= 0.5) {
      throw InvalidArgument("TimeGrid::jittered: jitter must be in [0, 0.5)");
    }
    std::vector<double> nodes(N + 1);
    const double k = T / N;
    std::mt19937_64 eng(seed);
    for (int n = 0; n <= N; ++n) {
      nodes[n] = T * n / N;
      if (n > 0 && n < N) {
        double u = 2.0 * detail::uniform01(eng) - 1.0;
        nodes[n] += jitter * k * u;
      }
    }
    nodes[0] = 0.0;
    nodes[N] = T;
    return TimeGrid(std::move(nodes));
  }
};

}  // namespace nlsfem
