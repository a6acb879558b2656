#pragma once

// Limiting even moments of the block Toeplitz / Hankel models, assembled as
// sums over pair partitions of (exact weight) x (volume integral).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "btrm/integrals.hpp"
#include "btrm/partitions.hpp"

namespace btrm {

using Rational = boost::multiprecision::cpp_rational;

enum class ModelTag { toeplitz, hankel, band_proportional, band_slow, symmetric_block_toeplitz, semicircle };

std::string to_string(ModelTag tag);
/// Accepts "toeplitz", "hankel", "band-proportional", "band-slow", "symmetric-block", "semicircle"
/// (underscores also accepted). Throws RangeError otherwise.
ModelTag parse_model_tag(const std::string& name);

struct ModelKind {
  ModelTag tag = ModelTag::toeplitz;
  int block_order = 1;
  std::optional<double> band_ratio;  // band_proportional only

  void validate() const;
};

struct McOptions {
  std::uint64_t points = kDefaultIntegralPoints;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct MomentTerm {
  PairPartition pi;
  int f = 0;
  Rational weight;
  std::optional<McIntegralEstimate> integral;  // absent for exact (integral-free) models
};

struct TheoreticalMoment {
  int order = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::optional<Rational> exact;      // set when no Monte Carlo term enters
  bool leading_term_fallback = false;  // r(m, pi) replaced by m^{2k-f}
  std::vector<MomentTerm> terms;
};

inline constexpr int kMaxMomentOrder = 12;
inline constexpr std::uint64_t kMaxIndexTuples = 10'000'000;

/// sum over P2(2k) of m^{k-1-f} * V_toeplitz(pi, 1)
TheoreticalMoment toeplitz_moment(int order, int m, const McOptions& mc);
/// sum over P2(2k) of m^{k-1-f}, exact.
TheoreticalMoment band_slow_moment(int order, int m);
/// (2-b)^{-k} sum over P2(2k) of m^{k-1-f} * V_toeplitz(pi, b)
TheoreticalMoment band_proportional_moment(int order, int m, double b, const McOptions& mc);
/// sum over P2^1(2k) of r(m,pi)/m^{k+1} * V_hankel(pi)
TheoreticalMoment hankel_moment(int order, int m, const McOptions& mc);
/// sum over P2(2k) of r(m,pi)/m^{k+1} * V_toeplitz(pi, 1)  (symmetric blocks, A_{-s} = A_s)
TheoreticalMoment symmetric_block_moment(int order, int m, const McOptions& mc);

/// Dispatch on the model; handles odd orders and order 0.
TheoreticalMoment theoretical_moment(const ModelKind& model, int order, const McOptions& mc);

/// r(m, pi): tuples t in [m]^{2k} (t_{2k+1} = t_1) with {t_p, t_{p+1}} = {t_q, t_{q+1}}
/// for every pair {p, q}. Brute force; CapacityError when m^{2k} > 10^7.
std::uint64_t count_index_tuples(const PairPartition& pi, int m);

/// Catalan number by the convolution recurrence, k <= 15.
std::uint64_t catalan(int k);
double semicircle_moment(int order);

/// Seed of the integral for the partition at canonical position `index` of P2(2k).
std::uint64_t term_seed(std::uint64_t seed, int order, std::size_t index);

}  // namespace btrm
