#include "btrm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "btrm/rng.hpp"

namespace btrm {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::block_toeplitz: return "toeplitz";
    case EnsembleKind::block_hankel: return "hankel";
    case EnsembleKind::band_toeplitz_proportional: return "band-proportional";
    case EnsembleKind::band_toeplitz_slow: return "band-slow";
    case EnsembleKind::symmetric_block_toeplitz: return "symmetric-block";
  }
  return "unknown";
}

std::string to_string(EntryLaw law) { return law == EntryLaw::rademacher ? "rademacher" : "gaussian"; }

EntryLaw parse_entry_law(const std::string& name) {
  if (name == "rademacher") return EntryLaw::rademacher;
  if (name == "gaussian") return EntryLaw::gaussian;
  throw RangeError("unknown entry law '" + name + "'");
}

bool is_band(EnsembleKind kind) {
  return kind == EnsembleKind::band_toeplitz_proportional || kind == EnsembleKind::band_toeplitz_slow;
}

bool is_hankel(EnsembleKind kind) { return kind == EnsembleKind::block_hankel; }

void EnsembleConfig::validate() const {
  if (N < 1) throw RangeError("N must be >= 1");
  if (m < 1) throw RangeError("m must be >= 1");
  if (num_samples < 1) throw RangeError("num_samples must be >= 1");
  if (static_cast<long long>(m) * N > kMaxMatrixDimension) {
    throw CapacityError("m*N = " + std::to_string(static_cast<long long>(m) * N) +
                        " exceeds the dense eigensolver budget of " + std::to_string(kMaxMatrixDimension));
  }
  if (band_ratio && !(*band_ratio > 0.0 && *band_ratio <= 1.0)) {
    throw RangeError("band ratio b must lie in (0, 1], got " + std::to_string(*band_ratio));
  }
  if (!is_band(kind)) {
    if (bandwidth && *bandwidth != N - 1) throw RangeError("bandwidth applies to band kinds only");
    if (band_ratio) throw RangeError("band ratio applies to the band-proportional kind only");
    return;
  }
  if (N < 2) throw RangeError("band kinds need N >= 2 so that 1 <= b_N <= N-1");
  if (kind == EnsembleKind::band_toeplitz_slow) {
    if (!bandwidth) throw RangeError("band-slow kind requires an explicit bandwidth b_N");
    if (band_ratio) throw RangeError("band ratio applies to the band-proportional kind only");
  } else if (!bandwidth && !band_ratio) {
    throw RangeError("band-proportional kind requires a band ratio b or a bandwidth b_N");
  }
  const int bw = effective_bandwidth();
  if (bw < 1 || bw > N - 1) {
    throw RangeError("bandwidth b_N = " + std::to_string(bw) + " must satisfy 1 <= b_N <= N-1 = " +
                     std::to_string(N - 1));
  }
}

int EnsembleConfig::effective_bandwidth() const {
  if (!is_band(kind)) return N - 1;
  if (bandwidth) return *bandwidth;
  const int rounded = static_cast<int>(std::lround(*band_ratio * N));
  return std::clamp(rounded, 1, std::max(1, N - 1));
}

double EnsembleConfig::effective_band_ratio() const {
  if (band_ratio) return *band_ratio;
  return static_cast<double>(effective_bandwidth()) / N;
}

std::string EnsembleConfig::canonical() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind) << ";N=" << N << ";m=" << m << ";bandwidth=" << effective_bandwidth();
  if (kind == EnsembleKind::band_toeplitz_proportional) {
    os.precision(17);
    os << ";b=" << effective_band_ratio();
  }
  os << ";law=" << to_string(entry_law) << ";seed=" << seed << ";samples=" << num_samples;
  return os.str();
}

IntegerBlockSequence to_integer(const BlockSequence& blocks) {
  for (int s = -blocks.max_offset(); s <= blocks.max_offset(); ++s) {
    const auto& b = blocks.at(s);
    if ((b.array() != b.array().round()).any()) {
      throw ContractError("block sequence has non-integer entries; exact integer evaluation needs Rademacher entries");
    }
  }
  return blocks.cast<std::int64_t>();
}

std::vector<EntryAddress> free_entries(const EnsembleConfig& config) {
  const int m = config.m;
  const int reach = is_band(config.kind) ? config.effective_bandwidth() : config.N - 1;
  std::vector<EntryAddress> out;
  const bool symmetric_blocks =
      config.kind == EnsembleKind::block_hankel || config.kind == EnsembleKind::symmetric_block_toeplitz;
  if (config.kind == EnsembleKind::block_hankel) {
    // every A_s is an independent symmetric block
    for (int s = -reach; s <= reach; ++s)
      for (int p = 0; p < m; ++p)
        for (int q = p; q < m; ++q) out.push_back({s, p, q});
    return out;
  }
  for (int s = 0; s <= reach; ++s) {
    for (int p = 0; p < m; ++p) {
      for (int q = (s == 0 || symmetric_blocks) ? p : 0; q < m; ++q) out.push_back({s, p, q});
    }
  }
  return out;
}

namespace {

double draw_entry(EntryLaw law, std::uint64_t key) {
  const CounterStream stream(key);
  if (law == EntryLaw::rademacher) return (stream.bits(0) >> 63) ? 1.0 : -1.0;
  return stream.normal(0);
}

}  // namespace

BlockSequence sample_blocks(const EnsembleConfig& config, int sample_index,
                            std::optional<SubstreamOverride> override_entry) {
  config.validate();
  if (sample_index < 0 || sample_index >= config.num_samples) {
    throw RangeError("sample index " + std::to_string(sample_index) + " outside [0, " +
                     std::to_string(config.num_samples) + ")");
  }
  BlockSequence blocks(config.N, config.m);
  const std::uint64_t sample_key = derive_key(config.seed, static_cast<std::uint64_t>(sample_index));
  for (const EntryAddress& e : free_entries(config)) {
    std::uint64_t key = derive_key(sample_key, static_cast<std::uint64_t>(static_cast<std::int64_t>(e.s)),
                                   static_cast<std::uint64_t>(e.p), static_cast<std::uint64_t>(e.q));
    if (override_entry && override_entry->address == e) key = derive_key(key, override_entry->salt);
    const double v = draw_entry(config.entry_law, key);

    switch (config.kind) {
      case EnsembleKind::block_hankel:
        blocks.at(e.s)(e.p, e.q) = v;
        blocks.at(e.s)(e.q, e.p) = v;
        break;
      case EnsembleKind::symmetric_block_toeplitz:
        for (int s : {e.s, -e.s}) {
          blocks.at(s)(e.p, e.q) = v;
          blocks.at(s)(e.q, e.p) = v;
        }
        break;
      default:  // A_{-s} = A_s^T
        blocks.at(e.s)(e.p, e.q) = v;
        blocks.at(-e.s)(e.q, e.p) = v;
        break;
    }
  }
  return blocks;
}

double normalization(const EnsembleConfig& config) {
  const double m = config.m;
  switch (config.kind) {
    case EnsembleKind::band_toeplitz_proportional: {
      const double b = config.effective_band_ratio();
      return std::sqrt(m * (2.0 - b) * b * config.N);
    }
    case EnsembleKind::band_toeplitz_slow:
      return std::sqrt(2.0 * m * config.effective_bandwidth());
    default:
      return std::sqrt(m * config.N);
  }
}

}  // namespace btrm
