#include "btrm/partitions.hpp"

#include <algorithm>
#include <sstream>

#include <boost/pending/disjoint_sets.hpp>

#include "btrm/errors.hpp"

namespace btrm {

PairPartition::PairPartition(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  const int n = 2 * static_cast<int>(pairs_.size());
  if (pairs_.empty()) throw ContractError("pair partition must have at least one pair");
  for (auto& p : pairs_) {
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  std::sort(pairs_.begin(), pairs_.end());
  block_.assign(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < k(); ++r) {
    for (int q : {pairs_[r].first, pairs_[r].second}) {
      if (q < 1 || q > n) {
        throw ContractError("pair index " + std::to_string(q) + " outside [1, " + std::to_string(n) + "]");
      }
      if (block_[static_cast<std::size_t>(q - 1)] != -1) {
        throw ContractError("index " + std::to_string(q) + " appears twice in pair partition");
      }
      block_[static_cast<std::size_t>(q - 1)] = r;
    }
  }
}

int PairPartition::partner(int q) const {
  const Pair& p = pairs_[static_cast<std::size_t>(block_of(q))];
  return p.first == q ? p.second : p.first;
}

std::string PairPartition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t r = 0; r < pairs_.size(); ++r) {
    if (r) os << ',';
    os << '(' << pairs_[r].first << ',' << pairs_[r].second << ')';
  }
  os << '}';
  return os.str();
}

std::uint64_t double_factorial_odd(int k) {
  std::uint64_t acc = 1;
  for (int j = 2 * k - 1; j > 1; j -= 2) acc *= static_cast<std::uint64_t>(j);
  return acc;
}

namespace {

void enumerate_rec(std::vector<bool>& used, std::vector<Pair>& current, std::vector<PairPartition>& out) {
  const auto first_free = std::find(used.begin(), used.end(), false);
  if (first_free == used.end()) {
    out.emplace_back(current);
    return;
  }
  const int a = static_cast<int>(first_free - used.begin());
  used[static_cast<std::size_t>(a)] = true;
  for (int b = a + 1; b < static_cast<int>(used.size()); ++b) {
    if (used[static_cast<std::size_t>(b)]) continue;
    used[static_cast<std::size_t>(b)] = true;
    current.push_back({a + 1, b + 1});
    enumerate_rec(used, current, out);
    current.pop_back();
    used[static_cast<std::size_t>(b)] = false;
  }
  used[static_cast<std::size_t>(a)] = false;
}

void check_enumerable(int k) {
  if (k < 1 || k > kMaxEnumerationPairs) {
    throw CapacityError("pair partitions of [2k] are enumerable for 1 <= k <= " +
                        std::to_string(kMaxEnumerationPairs) + " ((2k-1)!! <= " +
                        std::to_string(double_factorial_odd(kMaxEnumerationPairs)) + "), got k = " +
                        std::to_string(k));
  }
}

}  // namespace

std::vector<PairPartition> enumerate_pair_partitions(int k) {
  check_enumerable(k);
  std::vector<PairPartition> out;
  out.reserve(double_factorial_odd(k));
  std::vector<bool> used(static_cast<std::size_t>(2 * k), false);
  std::vector<Pair> current;
  enumerate_rec(used, current, out);
  return out;
}

bool is_noncrossing(const PairPartition& pi) {
  std::vector<int> open;
  for (int q = 1; q <= pi.size(); ++q) {
    const int r = pi.block_of(q);
    if (pi.pairs()[static_cast<std::size_t>(r)].first == q) {
      open.push_back(r);
    } else {
      if (open.back() != r) return false;
      open.pop_back();
    }
  }
  return true;
}

bool is_parity_alternating(const PairPartition& pi) {
  return std::all_of(pi.pairs().begin(), pi.pairs().end(),
                     [](const Pair& p) { return (p.first + p.second) % 2 == 1; });
}

PartitionProfile profile(const PairPartition& pi) {
  const int n = pi.size();
  // 0-based position of t_{q+1} with t_{2k+1} = t_1
  auto next = [n](int q) { return q % n; };

  boost::disjoint_sets_with_storage<> classes(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) classes.make_set(q);
  for (const Pair& p : pi.pairs()) {
    classes.union_set(p.first - 1, next(p.second));
    classes.union_set(p.second - 1, next(p.first));
  }
  std::vector<int> elements(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) elements[static_cast<std::size_t>(q)] = q;

  PartitionProfile out;
  out.g = static_cast<int>(classes.count_sets(elements.begin(), elements.end()));
  out.f = n - out.g;
  out.noncrossing = is_noncrossing(pi);
  out.parity_alternating = is_parity_alternating(pi);
  out.epsilon.resize(static_cast<std::size_t>(n));
  for (const Pair& p : pi.pairs()) {
    out.epsilon[static_cast<std::size_t>(p.first - 1)] = 1;
    out.epsilon[static_cast<std::size_t>(p.second - 1)] = -1;
  }
  return out;
}

int orbit_count(const PairPartition& pi) {
  const int n = pi.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int orbits = 0;
  for (int start = 1; start <= n; ++start) {
    if (seen[static_cast<std::size_t>(start - 1)]) continue;
    ++orbits;
    for (int q = start; !seen[static_cast<std::size_t>(q - 1)];) {
      seen[static_cast<std::size_t>(q - 1)] = true;
      q = pi.partner(q) % n + 1;
    }
  }
  return orbits;
}

std::uint64_t count_noncrossing(int k) {
  const auto all = enumerate_pair_partitions(k);
  return static_cast<std::uint64_t>(std::count_if(all.begin(), all.end(), is_noncrossing));
}

}  // namespace btrm
