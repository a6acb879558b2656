#pragma once

// Pair partitions of [2k] and the statistics the moment formulas consume.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace btrm {

/// One block {first, second} of a pair partition, 1-based, first < second.
struct Pair {
  int first;
  int second;

  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// A pairing of {1, ..., 2k}. Pairs are kept sorted by their smaller element.
class PairPartition {
 public:
  /// Validates and canonicalizes; throws ContractError if `pairs` is not a pairing of [2k].
  explicit PairPartition(std::vector<Pair> pairs);

  int k() const noexcept { return static_cast<int>(pairs_.size()); }
  int size() const noexcept { return 2 * k(); }
  std::span<const Pair> pairs() const noexcept { return pairs_; }

  /// 0-based index of the pair containing position q (1-based).
  int block_of(int q) const { return block_[static_cast<std::size_t>(q - 1)]; }
  /// The other element of q's pair.
  int partner(int q) const;

  /// "{(1,3),(2,4)}"
  std::string to_string() const;

  friend bool operator==(const PairPartition& a, const PairPartition& b) { return a.pairs_ == b.pairs_; }
  friend auto operator<=>(const PairPartition& a, const PairPartition& b) { return a.pairs_ <=> b.pairs_; }

 private:
  std::vector<Pair> pairs_;
  std::vector<int> block_;
};

struct PartitionProfile {
  int f = 0;                 // independent equations of the index system
  int g = 0;                 // circles (equivalence classes), g = 2k - f
  bool noncrossing = false;
  std::vector<int> epsilon;  // +1 at the smaller element of each pair, -1 at the larger
  bool parity_alternating = false;
};

inline constexpr int kMaxEnumerationPairs = 7;

/// (2k-1)!!
std::uint64_t double_factorial_odd(int k);

/// All pairings of [2k] in lexicographic order of their canonical pair lists.
/// Throws CapacityError unless 1 <= k <= 7.
std::vector<PairPartition> enumerate_pair_partitions(int k);

/// Circles via the union-find closure of t_a ~ t_{b+1}, t_b ~ t_{a+1} (indices mod 2k).
PartitionProfile profile(const PairPartition& pi);

/// Orbit count of phi(a) = b+1, phi(b) = a+1 on [2k]; equals g(pi).
int orbit_count(const PairPartition& pi);

bool is_noncrossing(const PairPartition& pi);
bool is_parity_alternating(const PairPartition& pi);

/// Number of noncrossing pairings of [2k] counted by enumeration.
std::uint64_t count_noncrossing(int k);

}  // namespace btrm
