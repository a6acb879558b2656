#pragma once

// Random block Toeplitz / Hankel (band) ensembles.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "btrm/errors.hpp"

namespace btrm {

enum class EnsembleKind {
  block_toeplitz,
  block_hankel,
  band_toeplitz_proportional,
  band_toeplitz_slow,
  symmetric_block_toeplitz,
};

enum class EntryLaw { rademacher, gaussian };

std::string to_string(EnsembleKind kind);
std::string to_string(EntryLaw law);
EntryLaw parse_entry_law(const std::string& name);

bool is_band(EnsembleKind kind);
bool is_hankel(EnsembleKind kind);

inline constexpr int kMaxMatrixDimension = 4000;

struct EnsembleConfig {
  EnsembleKind kind = EnsembleKind::block_toeplitz;
  int N = 1;
  int m = 1;
  std::optional<int> bandwidth;     // b_N, band kinds
  std::optional<double> band_ratio;  // b, proportional kind
  EntryLaw entry_law = EntryLaw::rademacher;
  std::uint64_t seed = 0;
  int num_samples = 1;

  /// Throws RangeError (CapacityError for the m*N budget).
  void validate() const;
  /// b_N: N-1 for full kinds; the explicit bandwidth, or max(1, round(b N)) clamped to N-1.
  int effective_bandwidth() const;
  /// b used in the proportional normalization: band_ratio if given, else b_N / N.
  double effective_band_ratio() const;
  int dimension() const { return m * N; }
  /// Canonical one-line rendering of every field; used for digests and manifests.
  std::string canonical() const;
};

/// A_s for s in [-(N-1), N-1], each m x m.
template <typename Scalar>
class BasicBlockSequence {
 public:
  using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicBlockSequence(int N, int m) : N_(N), m_(m), blocks_(static_cast<std::size_t>(2 * N - 1), Block::Zero(m, m)) {}

  int N() const noexcept { return N_; }
  int m() const noexcept { return m_; }
  int max_offset() const noexcept { return N_ - 1; }

  const Block& at(int s) const { return blocks_.at(index(s)); }
  Block& at(int s) { return blocks_.at(index(s)); }

  template <typename Other>
  BasicBlockSequence<Other> cast() const {
    BasicBlockSequence<Other> out(N_, m_);
    for (int s = -max_offset(); s <= max_offset(); ++s) out.at(s) = at(s).template cast<Other>();
    return out;
  }

 private:
  std::size_t index(int s) const {
    if (s < -max_offset() || s > max_offset()) throw RangeError("block offset " + std::to_string(s) + " out of range");
    return static_cast<std::size_t>(s + max_offset());
  }

  int N_;
  int m_;
  std::vector<Block> blocks_;
};

using BlockSequence = BasicBlockSequence<double>;
using IntegerBlockSequence = BasicBlockSequence<std::int64_t>;

/// Exact integer copy; throws ContractError when an entry is not an integer.
IntegerBlockSequence to_integer(const BlockSequence& blocks);

/// Address of one independent entry a_{pq}(s) (0-based p, q).
struct EntryAddress {
  int s;
  int p;
  int q;
  friend bool operator==(const EntryAddress&, const EntryAddress&) = default;
};

/// Replaces the sub-stream of one free entry; used to probe independence.
struct SubstreamOverride {
  EntryAddress address;
  std::uint64_t salt;
};

/// Draws the free entries of one realization and fills the determined ones by
/// the kind's symmetry. Entry (s, p, q) reads only its own sub-stream
/// derive_key(seed, sample_index, s, p, q).
BlockSequence sample_blocks(const EnsembleConfig& config, int sample_index,
                            std::optional<SubstreamOverride> override_entry = std::nullopt);

/// Free entry addresses for `config` in generation order.
std::vector<EntryAddress> free_entries(const EnsembleConfig& config);

/// Dense mN x mN matrix: block (i, j) is A_{i-j} (Toeplitz kinds) or A_{N+1-i-j} (Hankel), 1-based i, j.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble(const BasicBlockSequence<Scalar>& blocks,
                                                               bool hankel) {
  const int N = blocks.N();
  const int m = blocks.m();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(m * N, m * N);
  for (int i = 1; i <= N; ++i) {
    for (int j = 1; j <= N; ++j) {
      const int s = hankel ? N + 1 - i - j : i - j;
      out.block((i - 1) * m, (j - 1) * m, m, m) = blocks.at(s);
    }
  }
  return out;
}

inline Eigen::MatrixXd assemble(const BlockSequence& blocks, const EnsembleConfig& config) {
  return assemble(blocks, is_hankel(config.kind));
}

/// Divisor turning T_N into X_N.
double normalization(const EnsembleConfig& config);

}  // namespace btrm
