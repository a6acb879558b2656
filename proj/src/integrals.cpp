#include "btrm/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "btrm/errors.hpp"
#include "btrm/parallel.hpp"
#include "btrm/rng.hpp"

namespace btrm {

void IntegralSpec::validate() const {
  if (!(band_ratio > 0.0 && band_ratio <= 1.0)) {
    throw RangeError("band ratio must lie in (0, 1], got " + std::to_string(band_ratio));
  }
  if (kind == IntegrandKind::hankel && !is_parity_alternating(pi)) {
    throw ContractError("Hankel integrand requires a pairing that matches odd with even positions, got " +
                        pi.to_string());
  }
  if (!variable_order.empty()) {
    std::vector<int> sorted = variable_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> identity(static_cast<std::size_t>(pi.k()));
    std::iota(identity.begin(), identity.end(), 0);
    if (sorted != identity) throw ContractError("variable_order must be a permutation of 0..k-1");
  }
}

IntegrandCoefficients integrand_coefficients(const IntegralSpec& spec) {
  const int n = spec.pi.size();
  IntegrandCoefficients c;
  c.sign.resize(static_cast<std::size_t>(n));
  c.variable.resize(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) {
    const int r = spec.pi.block_of(q);
    const auto& pair = spec.pi.pairs()[static_cast<std::size_t>(r)];
    int s = 0;
    if (spec.kind == IntegrandKind::toeplitz) {
      s = pair.first == q ? 1 : -1;
    } else {
      s = q % 2 == 1 ? 1 : -1;  // -(-1)^q
    }
    c.sign[static_cast<std::size_t>(q - 1)] = s;
    c.variable[static_cast<std::size_t>(q - 1)] =
        1 + (spec.variable_order.empty() ? r : spec.variable_order[static_cast<std::size_t>(r)]);
  }
  return c;
}

McIntegralEstimate evaluate(const IntegralSpec& spec, std::uint64_t points, std::uint64_t seed,
                            unsigned workers) {
  spec.validate();
  if (points < kMinIntegralPoints) {
    throw RangeError("Monte Carlo integration needs at least " + std::to_string(kMinIntegralPoints) +
                     " points, got " + std::to_string(points));
  }
  const int k = spec.pi.k();
  const int n = spec.pi.size();
  const auto coeff = integrand_coefficients(spec);
  const double c = spec.band_ratio;
  const CounterStream stream(seed);
  const std::uint64_t dims = static_cast<std::uint64_t>(k) + 1;

  workers = resolve_workers(workers);
  std::vector<std::uint64_t> hits(workers, 0);
  parallel_chunks(points, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<double> x(dims);
    std::uint64_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t base = i * dims;
      x[0] = stream.uniform(base);
      for (std::uint64_t d = 1; d < dims; ++d) x[d] = 2.0 * stream.uniform(base + d) - 1.0;
      double partial = 0.0;
      bool inside = true;
      for (int j = 0; j < n && inside; ++j) {
        partial += coeff.sign[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(coeff.variable[static_cast<std::size_t>(j)])];
        const double v = x[0] + c * partial;
        inside = v >= 0.0 && v <= 1.0;
      }
      local += inside ? 1 : 0;
    }
    hits[w] = local;
  });

  McIntegralEstimate out;
  out.points = points;
  out.seed = seed;
  out.hits = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  const double volume = std::ldexp(1.0, k);
  const double p = static_cast<double>(out.hits) / static_cast<double>(points);
  out.value = volume * p;
  out.std_error = volume * std::sqrt(p * (1.0 - p) / static_cast<double>(points));
  return out;
}

}  // namespace btrm
