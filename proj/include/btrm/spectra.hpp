#pragma once

// Spectra of sampled matrices, empirical moments, distance to the semicircle
// law, and direct evaluation of the block trace formulae.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "btrm/ensemble.hpp"
#include "btrm/errors.hpp"

namespace btrm {

struct SpectralSample {
  std::vector<double> eigenvalues;  // ascending, length m*N
  std::string config_digest;
};

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Ascending eigenvalues of an exactly symmetric matrix (Householder
/// tridiagonalization + implicit symmetric QR). ContractError if M != M^T.
std::vector<double> eigen_spectrum(const Eigen::MatrixXd& matrix);

/// Samples, assembles, normalizes and diagonalizes realization `sample_index`.
SpectralSample spectral_sample(const EnsembleConfig& config, int sample_index);

/// Digest tying a sample to (config, sample_index): 16 hex digits.
std::string config_digest(const EnsembleConfig& config, int sample_index);

/// (1/n) sum_i lambda_i^k for k = 0..max_order.
std::vector<double> spectral_moments(std::span<const double> eigenvalues, int max_order);

/// Per-order mean over samples and standard error of that mean (0 for a single sample).
std::vector<MomentEstimate> empirical_moments(std::span<const SpectralSample> samples, int max_order);

/// Semicircle CDF on [-2, 2], clamped outside.
double semicircle_cdf(double x);

/// sup_x |F_n(x) - W(x)| for the empirical CDF of `sorted_eigenvalues`.
double ks_distance_to_semicircle(std::span<const double> sorted_eigenvalues);
inline double ks_distance_to_semicircle(const SpectralSample& sample) {
  return ks_distance_to_semicircle(sample.eigenvalues);
}

/// tr(M^k) for k = 1..max_k by repeated multiplication.
template <typename Scalar>
std::vector<Scalar> power_traces(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& matrix, int max_k) {
  std::vector<Scalar> out;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> power = matrix;
  for (int k = 1; k <= max_k; ++k) {
    if (k > 1) power = (power * matrix).eval();
    out.push_back(power.trace());
  }
  return out;
}

struct PowerSumCheck {
  int order = 0;
  double eigen_sum = 0.0;   // sum lambda^k
  double direct = 0.0;      // tr(X^k)
  double scale = 0.0;       // sum |lambda|^k
  double relative_error = 0.0;
};

/// Compares sum lambda_i^k with tr(X^k) for k = 1..max_k; relative to sum |lambda_i|^k.
std::vector<PowerSumCheck> check_power_sums(const Eigen::MatrixXd& matrix, std::span<const double> eigenvalues,
                                            int max_k);

inline constexpr std::uint64_t kMaxTraceSummands = 10'000'000;

/// Right-hand side of the block Toeplitz trace identity
///   tr(T^k) = sum_i sum_{j_1..j_k} tr(A_{j_1} ... A_{j_k}) prod_l I_[1,N](i + j_1 + ... + j_l) delta(0, sum j).
template <typename Scalar>
Scalar trace_formula_toeplitz(const BasicBlockSequence<Scalar>& blocks, int k);

/// Block Hankel trace identity; even k closes with delta(0, sum (-1)^q j_q),
/// odd k with delta(2i-1-N, sum (-1)^q j_q).
template <typename Scalar>
Scalar trace_formula_hankel(const BasicBlockSequence<Scalar>& blocks, int k);

extern template double trace_formula_toeplitz<double>(const BlockSequence&, int);
extern template std::int64_t trace_formula_toeplitz<std::int64_t>(const IntegerBlockSequence&, int);
extern template double trace_formula_hankel<double>(const BlockSequence&, int);
extern template std::int64_t trace_formula_hankel<std::int64_t>(const IntegerBlockSequence&, int);

struct Histogram {
  double lo = -3.0;
  double hi = 3.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t below = 0;  // clipped into the first bin
  std::uint64_t above = 0;  // clipped into the last bin

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double density(std::size_t bin) const {
    return total == 0 ? 0.0 : static_cast<double>(counts[bin]) / (static_cast<double>(total) * bin_width());
  }
};

Histogram histogram(std::span<const SpectralSample> samples, int bins = 101, double lo = -3.0, double hi = 3.0);

}  // namespace btrm
