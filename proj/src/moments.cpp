#include "btrm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "btrm/errors.hpp"
#include "btrm/rng.hpp"

namespace btrm {

std::string to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::toeplitz: return "toeplitz";
    case ModelTag::hankel: return "hankel";
    case ModelTag::band_proportional: return "band-proportional";
    case ModelTag::band_slow: return "band-slow";
    case ModelTag::symmetric_block_toeplitz: return "symmetric-block";
    case ModelTag::semicircle: return "semicircle";
  }
  return "unknown";
}

ModelTag parse_model_tag(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '_', '-');
  for (auto tag : {ModelTag::toeplitz, ModelTag::hankel, ModelTag::band_proportional, ModelTag::band_slow,
                   ModelTag::symmetric_block_toeplitz, ModelTag::semicircle}) {
    if (key == to_string(tag)) return tag;
  }
  if (key == "symmetric-block-toeplitz") return ModelTag::symmetric_block_toeplitz;
  throw RangeError("unknown model '" + name + "'");
}

void ModelKind::validate() const {
  if (block_order < 1) throw RangeError("block order m must be >= 1");
  if (tag == ModelTag::band_proportional) {
    if (!band_ratio) throw RangeError("band-proportional model requires a band ratio b");
    if (!(*band_ratio > 0.0 && *band_ratio <= 1.0)) {
      throw RangeError("band ratio b must lie in (0, 1], got " + std::to_string(*band_ratio));
    }
  } else if (band_ratio) {
    throw RangeError("band ratio is only meaningful for the band-proportional model");
  }
}

std::uint64_t term_seed(std::uint64_t seed, int order, std::size_t index) {
  return derive_key(seed, 0x6d6f6d656e74ULL, static_cast<std::uint64_t>(order), index);
}

namespace {

void check_even_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw RangeError("partition formulas take an even order >= 2, got " + std::to_string(order));
  }
  if (order > kMaxMomentOrder) {
    throw CapacityError("moment order is capped at " + std::to_string(kMaxMomentOrder) + " (got " +
                        std::to_string(order) + "): P2(2k) has (2k-1)!! members");
  }
}

Rational int_power(int base, int exponent) {
  Rational b(base);
  Rational acc(1);
  for (int e = std::abs(exponent); e > 0; --e) acc *= b;
  return exponent >= 0 ? acc : Rational(1) / acc;
}

std::uint64_t checked_power(int base, int exponent, std::uint64_t cap) {
  std::uint64_t acc = 1;
  for (int e = 0; e < exponent; ++e) {
    if (acc > cap / static_cast<std::uint64_t>(base)) return cap + 1;
    acc *= static_cast<std::uint64_t>(base);
  }
  return acc;
}

// Weighted sum of volume integrals; `weight_of` returns nullopt to drop a pairing.
template <typename WeightFn>
TheoreticalMoment integral_sum(int order, IntegrandKind kind, double band_ratio, const McOptions& mc,
                               WeightFn&& weight_of) {
  check_even_order(order);
  const int k = order / 2;
  const auto all = enumerate_pair_partitions(k);
  TheoreticalMoment out;
  out.order = order;
  double variance = 0.0;
  for (std::size_t idx = 0; idx < all.size(); ++idx) {
    const auto& pi = all[idx];
    const auto prof = profile(pi);
    std::optional<Rational> weight = weight_of(pi, prof, out);
    if (!weight) continue;
    IntegralSpec spec{pi, kind, band_ratio};
    auto est = evaluate(spec, mc.points, term_seed(mc.seed, order, idx), mc.workers);
    const double w = weight->convert_to<double>();
    out.value += w * est.value;
    variance += w * w * est.std_error * est.std_error;
    out.terms.push_back(MomentTerm{pi, prof.f, *weight, est});
  }
  out.std_error = std::sqrt(variance);
  return out;
}

// r(m, pi) / m^{k+1}, brute force when feasible.
std::optional<Rational> index_tuple_weight(const PairPartition& pi, const PartitionProfile& prof, int m,
                                           TheoreticalMoment& out) {
  const int k = pi.k();
  Rational r;
  if (checked_power(m, 2 * k, kMaxIndexTuples) <= kMaxIndexTuples) {
    r = Rational(count_index_tuples(pi, m));
  } else {
    r = int_power(m, 2 * k - prof.f);
    out.leading_term_fallback = true;
  }
  return r / int_power(m, k + 1);
}

}  // namespace

TheoreticalMoment toeplitz_moment(int order, int m, const McOptions& mc) {
  if (m < 1) throw RangeError("block order m must be >= 1");
  return integral_sum(order, IntegrandKind::toeplitz, 1.0, mc,
                      [m](const PairPartition& pi, const PartitionProfile& prof, TheoreticalMoment&) {
                        return std::optional<Rational>(int_power(m, pi.k() - 1 - prof.f));
                      });
}

TheoreticalMoment band_proportional_moment(int order, int m, double b, const McOptions& mc) {
  if (m < 1) throw RangeError("block order m must be >= 1");
  if (!(b > 0.0 && b <= 1.0)) throw RangeError("band ratio b must lie in (0, 1], got " + std::to_string(b));
  auto out = integral_sum(order, IntegrandKind::toeplitz, b, mc,
                          [m](const PairPartition& pi, const PartitionProfile& prof, TheoreticalMoment&) {
                            return std::optional<Rational>(int_power(m, pi.k() - 1 - prof.f));
                          });
  const double prefactor = std::pow(2.0 - b, -order / 2);
  out.value *= prefactor;
  out.std_error *= prefactor;
  return out;
}

TheoreticalMoment band_slow_moment(int order, int m) {
  check_even_order(order);
  if (m < 1) throw RangeError("block order m must be >= 1");
  const int k = order / 2;
  TheoreticalMoment out;
  out.order = order;
  Rational sum(0);
  for (const auto& pi : enumerate_pair_partitions(k)) {
    const auto prof = profile(pi);
    Rational w = int_power(m, k - 1 - prof.f);
    sum += w;
    out.terms.push_back(MomentTerm{pi, prof.f, w, std::nullopt});
  }
  out.exact = sum;
  out.value = sum.convert_to<double>();
  return out;
}

TheoreticalMoment hankel_moment(int order, int m, const McOptions& mc) {
  if (m < 1) throw RangeError("block order m must be >= 1");
  return integral_sum(order, IntegrandKind::hankel, 1.0, mc,
                      [m](const PairPartition& pi, const PartitionProfile& prof,
                          TheoreticalMoment& out) -> std::optional<Rational> {
                        if (!prof.parity_alternating) return std::nullopt;
                        return index_tuple_weight(pi, prof, m, out);
                      });
}

TheoreticalMoment symmetric_block_moment(int order, int m, const McOptions& mc) {
  if (m < 1) throw RangeError("block order m must be >= 1");
  return integral_sum(order, IntegrandKind::toeplitz, 1.0, mc,
                      [m](const PairPartition& pi, const PartitionProfile& prof, TheoreticalMoment& out) {
                        return index_tuple_weight(pi, prof, m, out);
                      });
}

TheoreticalMoment theoretical_moment(const ModelKind& model, int order, const McOptions& mc) {
  model.validate();
  if (order < 0) throw RangeError("moment order must be nonnegative");
  if (order == 0 || order % 2 == 1) {
    TheoreticalMoment out;
    out.order = order;
    out.exact = Rational(order == 0 ? 1 : 0);
    out.value = order == 0 ? 1.0 : 0.0;
    return out;
  }
  const int m = model.block_order;
  switch (model.tag) {
    case ModelTag::toeplitz: return toeplitz_moment(order, m, mc);
    case ModelTag::hankel: return hankel_moment(order, m, mc);
    case ModelTag::band_proportional: return band_proportional_moment(order, m, *model.band_ratio, mc);
    case ModelTag::band_slow: return band_slow_moment(order, m);
    case ModelTag::symmetric_block_toeplitz: return symmetric_block_moment(order, m, mc);
    case ModelTag::semicircle: {
      TheoreticalMoment out;
      out.order = order;
      out.exact = Rational(catalan(order / 2));
      out.value = static_cast<double>(catalan(order / 2));
      return out;
    }
  }
  throw RangeError("unhandled model");
}

std::uint64_t count_index_tuples(const PairPartition& pi, int m) {
  if (m < 1) throw RangeError("block order m must be >= 1");
  const int n = pi.size();
  const std::uint64_t total = checked_power(m, n, kMaxIndexTuples);
  if (total > kMaxIndexTuples) {
    throw CapacityError("brute-force r(m, pi) needs m^{2k} <= 10^7 index tuples (m = " + std::to_string(m) +
                        ", 2k = " + std::to_string(n) + ")");
  }
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  auto at = [&](int q) { return t[static_cast<std::size_t>((q - 1) % n)]; };  // 1-based, wraps 2k+1 -> 1
  std::uint64_t count = 0;
  for (std::uint64_t iter = 0; iter < total; ++iter) {
    bool ok = true;
    for (const Pair& p : pi.pairs()) {
      const int a0 = at(p.first), a1 = at(p.first + 1);
      const int b0 = at(p.second), b1 = at(p.second + 1);
      if (!((a0 == b0 && a1 == b1) || (a0 == b1 && a1 == b0))) {
        ok = false;
        break;
      }
    }
    count += ok ? 1 : 0;
    for (std::size_t d = 0; d < t.size(); ++d) {  // odometer
      if (++t[d] < m) break;
      t[d] = 0;
    }
  }
  return count;
}

std::uint64_t catalan(int k) {
  if (k < 0 || k > 15) throw RangeError("catalan(k) is provided for 0 <= k <= 15, got " + std::to_string(k));
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k) + 1, 0);
  c[0] = 1;
  for (int n = 1; n <= k; ++n) {
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(n)] += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(n - 1 - i)];
  }
  return c[static_cast<std::size_t>(k)];
}

double semicircle_moment(int order) {
  if (order < 0) throw RangeError("moment order must be nonnegative");
  return order % 2 == 1 ? 0.0 : static_cast<double>(catalan(order / 2));
}

}  // namespace btrm
