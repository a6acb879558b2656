#include "btrm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "btrm/rng.hpp"

namespace btrm {

std::vector<double> eigen_spectrum(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw ContractError("eigen_spectrum needs a square matrix");
  if (matrix != matrix.transpose()) throw ContractError("eigen_spectrum needs an exactly symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::string config_digest(const EnsembleConfig& config, int sample_index) {
  std::uint64_t h = 0x62747a6d;
  for (unsigned char c : config.canonical()) h = mix64(h ^ c);
  h = derive_key(h, static_cast<std::uint64_t>(sample_index));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SpectralSample spectral_sample(const EnsembleConfig& config, int sample_index) {
  const auto blocks = sample_blocks(config, sample_index);
  const Eigen::MatrixXd x = assemble(blocks, config) / normalization(config);
  return SpectralSample{eigen_spectrum(x), config_digest(config, sample_index)};
}

std::vector<double> spectral_moments(std::span<const double> eigenvalues, int max_order) {
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (eigenvalues.empty()) return out;
  for (double lambda : eigenvalues) {
    double p = 1.0;
    for (int k = 0; k <= max_order; ++k) {
      out[static_cast<std::size_t>(k)] += p;
      p *= lambda;
    }
  }
  for (double& v : out) v /= static_cast<double>(eigenvalues.size());
  out[0] = 1.0;
  return out;
}

std::vector<MomentEstimate> empirical_moments(std::span<const SpectralSample> samples, int max_order) {
  if (max_order < 0) throw RangeError("max_order must be nonnegative");
  std::vector<MomentEstimate> out(static_cast<std::size_t>(max_order) + 1);
  if (samples.empty()) throw RangeError("empirical_moments needs at least one sample");
  std::vector<std::vector<double>> per_sample;
  per_sample.reserve(samples.size());
  for (const auto& s : samples) per_sample.push_back(spectral_moments(s.eigenvalues, max_order));
  const double n = static_cast<double>(samples.size());
  for (int k = 0; k <= max_order; ++k) {
    double mean = 0.0;
    for (const auto& row : per_sample) mean += row[static_cast<std::size_t>(k)];
    mean /= n;
    double ss = 0.0;
    for (const auto& row : per_sample) ss += (row[static_cast<std::size_t>(k)] - mean) * (row[static_cast<std::size_t>(k)] - mean);
    out[static_cast<std::size_t>(k)].mean = k == 0 ? 1.0 : mean;
    out[static_cast<std::size_t>(k)].std_error = (samples.size() > 1 && k > 0) ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  return out;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

double ks_distance_to_semicircle(std::span<const double> sorted_eigenvalues) {
  const double n = static_cast<double>(sorted_eigenvalues.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_eigenvalues.size(); ++i) {
    const double w = semicircle_cdf(sorted_eigenvalues[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - w), std::abs(static_cast<double>(i) / n - w)});
  }
  return d;
}

std::vector<PowerSumCheck> check_power_sums(const Eigen::MatrixXd& matrix, std::span<const double> eigenvalues,
                                            int max_k) {
  const auto direct = power_traces<double>(matrix, max_k);
  std::vector<PowerSumCheck> out;
  for (int k = 1; k <= max_k; ++k) {
    PowerSumCheck c;
    c.order = k;
    for (double lambda : eigenvalues) {
      const double p = std::pow(lambda, k);
      c.eigen_sum += p;
      c.scale += std::abs(p);
    }
    c.direct = direct[static_cast<std::size_t>(k - 1)];
    c.relative_error = c.scale > 0.0 ? std::abs(c.eigen_sum - c.direct) / c.scale : std::abs(c.eigen_sum - c.direct);
    out.push_back(c);
  }
  return out;
}

namespace {

void check_summand_budget(int N, int k) {
  if (k < 1) throw RangeError("trace formula order k must be >= 1");
  const double summands = std::pow(2.0 * (N - 1) + 1.0, k);
  if (summands > static_cast<double>(kMaxTraceSummands)) {
    throw CapacityError("trace formula with N = " + std::to_string(N) + ", k = " + std::to_string(k) +
                        " has (2b_N+1)^k > 10^7 index tuples");
  }
}

// Walks index tuples j_1..j_k depth first, keeping the running block product
// A_{j_1} ... A_{j_l} on a stack. `step(q, pos, j)` gives the block-row position
// after the q-th factor; `closes(i, pos)` is the delta condition at depth k.
template <typename Scalar, typename Step, typename Closes>
Scalar walk_trace(const BasicBlockSequence<Scalar>& blocks, int k, Step step, Closes closes) {
  using Block = typename BasicBlockSequence<Scalar>::Block;
  const int N = blocks.N();
  const int m = blocks.m();
  const int b = blocks.max_offset();
  std::vector<bool> nonzero(static_cast<std::size_t>(2 * b + 1));
  for (int s = -b; s <= b; ++s) nonzero[static_cast<std::size_t>(s + b)] = !blocks.at(s).isZero();

  std::vector<Block> product(static_cast<std::size_t>(k) + 1, Block::Identity(m, m));
  Scalar total = 0;
  for (int i = 1; i <= N; ++i) {
    auto recurse = [&](auto&& self, int depth, int pos) -> void {
      if (depth == k) {
        if (closes(i, pos)) total += product[static_cast<std::size_t>(k)].trace();
        return;
      }
      for (int j = -b; j <= b; ++j) {
        if (!nonzero[static_cast<std::size_t>(j + b)]) continue;
        const int next = step(depth + 1, pos, j);
        if (next < 1 || next > N) continue;
        product[static_cast<std::size_t>(depth) + 1].noalias() = product[static_cast<std::size_t>(depth)] * blocks.at(j);
        self(self, depth + 1, next);
      }
    };
    recurse(recurse, 0, i);
  }
  return total;
}

}  // namespace

template <typename Scalar>
Scalar trace_formula_toeplitz(const BasicBlockSequence<Scalar>& blocks, int k) {
  check_summand_budget(blocks.N(), k);
  return walk_trace(
      blocks, k, [](int, int pos, int j) { return pos + j; }, [](int i, int pos) { return pos == i; });
}

template <typename Scalar>
Scalar trace_formula_hankel(const BasicBlockSequence<Scalar>& blocks, int k) {
  check_summand_budget(blocks.N(), k);
  const int N = blocks.N();
  // position i - sum_{q<=l} (-1)^q j_q
  auto step = [](int q, int pos, int j) { return q % 2 == 1 ? pos + j : pos - j; };
  if (k % 2 == 0) {
    return walk_trace(blocks, k, step, [](int i, int pos) { return pos == i; });
  }
  // sum (-1)^q j_q = i - pos must equal 2i - 1 - N
  return walk_trace(blocks, k, step, [N](int i, int pos) { return i - pos == 2 * i - 1 - N; });
}

template double trace_formula_toeplitz<double>(const BlockSequence&, int);
template std::int64_t trace_formula_toeplitz<std::int64_t>(const IntegerBlockSequence&, int);
template double trace_formula_hankel<double>(const BlockSequence&, int);
template std::int64_t trace_formula_hankel<std::int64_t>(const IntegerBlockSequence&, int);

Histogram histogram(std::span<const SpectralSample> samples, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw RangeError("histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& s : samples) {
    for (double x : s.eigenvalues) {
      long long bin = static_cast<long long>(std::floor((x - lo) / (hi - lo) * bins));
      if (x < lo) ++h.below;
      if (x > hi) ++h.above;
      bin = std::clamp<long long>(bin, 0, bins - 1);
      ++h.counts[static_cast<std::size_t>(bin)];
      ++h.total;
    }
  }
  return h;
}

}  // namespace btrm
