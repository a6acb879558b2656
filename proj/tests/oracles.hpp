#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "btrm/integrals.hpp"
#include "btrm/partitions.hpp"

namespace oracle {

// Midpoint grid (step h) over x_0 .. x_{k-1}; the last variable x_k is
// integrated exactly as the length of an interval intersection.
inline double grid_volume(const btrm::PairPartition& pi, btrm::IntegrandKind kind, double band_ratio,
                          double h = 1e-3) {
  const int k = pi.k();
  const int n = pi.size();
  // coefficient of x_r in the j-th partial sum
  std::vector<std::vector<int>> coef(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(k) + 1, 0));
  std::vector<int> running(static_cast<std::size_t>(k) + 1, 0);
  for (int q = 1; q <= n; ++q) {
    const int r = pi.block_of(q);
    const auto& p = pi.pairs()[static_cast<std::size_t>(r)];
    const int s = kind == btrm::IntegrandKind::toeplitz ? (p.first == q ? 1 : -1) : (q % 2 == 1 ? 1 : -1);
    running[static_cast<std::size_t>(r) + 1] += s;
    coef[static_cast<std::size_t>(q - 1)] = running;
  }
  std::vector<int> steps(static_cast<std::size_t>(k), 0);
  steps[0] = static_cast<int>(1.0 / h + 0.5);
  for (int d = 1; d < k; ++d) steps[static_cast<std::size_t>(d)] = static_cast<int>(2.0 / h + 0.5);

  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  std::vector<double> x(static_cast<std::size_t>(k) + 1, 0.0);
  double total = 0.0;
  while (true) {
    x[0] = (idx[0] + 0.5) * h;
    for (int d = 1; d < k; ++d) x[static_cast<std::size_t>(d)] = -1.0 + (idx[static_cast<std::size_t>(d)] + 0.5) * h;
    double lo = -1.0, hi = 1.0;
    for (int j = 0; j < n && lo < hi; ++j) {
      double a = x[0];
      for (int d = 1; d < k; ++d) a += band_ratio * coef[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
      const double b = band_ratio * coef[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (b == 0.0) {
        if (a < 0.0 || a > 1.0) hi = lo;
        continue;
      }
      double l = (0.0 - a) / b, u = (1.0 - a) / b;
      if (l > u) std::swap(l, u);
      lo = std::max(lo, l);
      hi = std::min(hi, u);
    }
    double cell = hi > lo ? hi - lo : 0.0;
    for (int d = 0; d < k; ++d) cell *= h;
    total += cell;

    int d = 0;
    for (; d < k; ++d) {
      if (++idx[static_cast<std::size_t>(d)] < steps[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
    if (d == k) break;
  }
  return total;
}

// Tuples t in [m]^{2k} (t_{2k+1} = t_1) solving t_a = t_{b+1}, t_b = t_{a+1} for every pair.
inline std::uint64_t count_system_solutions(const btrm::PairPartition& pi, int m) {
  const int n = pi.size();
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  auto at = [&](int q) { return t[static_cast<std::size_t>((q - 1) % n)]; };
  std::uint64_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::uint64_t>(m);
  std::uint64_t count = 0;
  for (std::uint64_t it = 0; it < total; ++it) {
    bool ok = true;
    for (const auto& p : pi.pairs()) {
      ok = ok && at(p.first) == at(p.second + 1) && at(p.second) == at(p.first + 1);
    }
    count += ok;
    for (int d = 0; d < n; ++d) {
      if (++t[static_cast<std::size_t>(d)] < m) break;
      t[static_cast<std::size_t>(d)] = 0;
    }
  }
  return count;
}

inline std::uint64_t power(std::uint64_t base, int e) {
  std::uint64_t acc = 1;
  while (e-- > 0) acc *= base;
  return acc;
}

inline std::uint64_t factorial(int k) {
  std::uint64_t acc = 1;
  for (int j = 2; j <= k; ++j) acc *= static_cast<std::uint64_t>(j);
  return acc;
}

// C_k from the closed form binom(2k, k) / (k + 1), computed incrementally.
inline std::uint64_t catalan_closed_form(int k) {
  std::uint64_t c = 1;
  for (int j = 0; j < k; ++j) c = c * 2 * (2 * j + 1) / (j + 2);
  return c;
}

}  // namespace oracle
