#pragma once

// Monte Carlo estimates of the indicator-product volumes
//
//   V = \int_{[0,1] x [-1,1]^k} \prod_{j=1}^{2k} I_{[0,1]}(x_0 + c \sum_{q<=j} s_q x_{pi(q)}) dx
//
// where s_q = epsilon_pi(q) for Toeplitz-type models and s_q = -(-1)^q for
// Hankel, and c is the band ratio (1 for full matrices).

#include <cstdint>
#include <optional>
#include <vector>

#include "btrm/partitions.hpp"

namespace btrm {

enum class IntegrandKind { toeplitz, hankel };

struct IntegralSpec {
  PairPartition pi;
  IntegrandKind kind = IntegrandKind::toeplitz;
  double band_ratio = 1.0;
  /// Optional relabeling: pair r integrates against x_{1 + variable_order[r]}.
  /// Empty means identity. The volume does not depend on it.
  std::vector<int> variable_order{};

  /// Throws RangeError/ContractError when the spec is not integrable as stated.
  void validate() const;
};

struct McIntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t points = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
};

inline constexpr std::uint64_t kMinIntegralPoints = 1000;
inline constexpr std::uint64_t kDefaultIntegralPoints = 1'000'000;

/// Sample i uses the counter stream keyed by `seed`, draws (k+1)i ... (k+1)i+k.
/// The hit count is an integer sum, so the estimate is bit-identical for any `workers`.
McIntegralEstimate evaluate(const IntegralSpec& spec, std::uint64_t points, std::uint64_t seed,
                            unsigned workers = 1);

/// Signs s_q and variable indices (1-based into x) of the partial sums, length 2k.
struct IntegrandCoefficients {
  std::vector<int> sign;
  std::vector<int> variable;
};
IntegrandCoefficients integrand_coefficients(const IntegralSpec& spec);

}  // namespace btrm
