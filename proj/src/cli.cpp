#include "btrm/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "btrm/ensemble.hpp"
#include "btrm/errors.hpp"
#include "btrm/moments.hpp"
#include "btrm/parallel.hpp"
#include "btrm/partitions.hpp"
#include "btrm/spectra.hpp"

#ifndef BTRM_VERSION
#define BTRM_VERSION "dev"
#endif

namespace btrm::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags that do not change any output value; kept out of manifests.
struct RunnerFlags {
  unsigned threads = 0;
  std::string out;
  std::string timestamp;
};

Json manifest(const std::string& command, const Json& config, std::uint64_t seed, const RunnerFlags& runner) {
  Json m;
  m["command"] = command;
  m["config"] = config;
  m["tool_version"] = BTRM_VERSION;
  m["seed"] = seed;
  m["timestamp"] = runner.timestamp.empty() ? utc_now() : runner.timestamp;
  return m;
}

Json pairs_json(const PairPartition& pi) {
  Json arr = Json::array();
  for (const Pair& p : pi.pairs()) arr.push_back({p.first, p.second});
  return arr;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

void emit_json(const Json& report, const RunnerFlags& runner, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (runner.out.empty()) {
    out << text;
  } else {
    write_text(runner.out, text);
  }
}

void add_runner_flags(CLI::App* cmd, RunnerFlags& runner, bool out_is_prefix) {
  cmd->add_option("--threads", runner.threads, "Worker threads (0 = all cores); never changes results");
  cmd->add_option("--out", runner.out, out_is_prefix ? "Output prefix" : "Write the report to this file");
  cmd->add_option("--timestamp", runner.timestamp, "Manifest timestamp (default: current UTC time)");
}

// ---------------------------------------------------------------- partitions

struct PartitionsArgs {
  int k = 2;
  std::string filter = "all";
  bool json = false;
};

int cmd_partitions(const PartitionsArgs& a, std::ostream& out) {
  if (a.filter != "all" && a.filter != "noncrossing" && a.filter != "parity_alternating") {
    throw UsageError("--class must be one of all, noncrossing, parity_alternating");
  }
  const auto all = enumerate_pair_partitions(a.k);
  std::uint64_t noncrossing = 0, alternating = 0, factorial = 1;
  for (int j = 2; j <= a.k; ++j) factorial *= static_cast<std::uint64_t>(j);

  Json rows = Json::array();
  std::ostringstream table;
  table << "# pairs\tf\tg\tnoncrossing\tparity_alternating\n";
  std::uint64_t shown = 0;
  for (const auto& pi : all) {
    const auto prof = profile(pi);
    noncrossing += prof.noncrossing;
    alternating += prof.parity_alternating;
    const bool keep = a.filter == "all" || (a.filter == "noncrossing" && prof.noncrossing) ||
                      (a.filter == "parity_alternating" && prof.parity_alternating);
    if (!keep) continue;
    ++shown;
    table << pi.to_string() << '\t' << prof.f << '\t' << prof.g << '\t' << (prof.noncrossing ? "yes" : "no") << '\t'
          << (prof.parity_alternating ? "yes" : "no") << '\n';
    rows.push_back(Json{{"pairs", pairs_json(pi)},
                        {"f", prof.f},
                        {"g", prof.g},
                        {"noncrossing", prof.noncrossing},
                        {"parity_alternating", prof.parity_alternating}});
  }
  if (a.json) {
    Json report;
    report["schema"] = kReportSchema;
    report["report"] = "partitions";
    report["k"] = a.k;
    report["class"] = a.filter;
    report["rows"] = rows;
    report["counts"] = Json{{"total", all.size()},
                            {"double_factorial", double_factorial_odd(a.k)},
                            {"noncrossing", noncrossing},
                            {"catalan", catalan(a.k)},
                            {"parity_alternating", alternating},
                            {"factorial", factorial},
                            {"shown", shown}};
    out << report.dump(2) << "\n";
    return kExitOk;
  }
  out << table.str();
  out << "# shown " << shown << "; total " << all.size() << " ((2k-1)!! = " << double_factorial_odd(a.k)
      << "); noncrossing " << noncrossing << " (C_k = " << catalan(a.k) << "); parity_alternating " << alternating
      << " (k! = " << factorial << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- moment

struct MomentArgs {
  std::string model;
  int order = 2;
  int m = 1;
  std::optional<double> b;
  std::optional<std::uint64_t> mc_points;
  std::uint64_t seed = 0;
};

std::uint64_t default_mc_points(int order) { return order >= 10 ? 100'000 : kDefaultIntegralPoints; }

Json theoretical_json(const TheoreticalMoment& t) {
  Json j;
  j["value"] = t.value;
  j["std_error"] = t.std_error;
  if (t.exact) j["exact"] = rational_string(*t.exact);
  j["leading_term_fallback"] = t.leading_term_fallback;
  return j;
}

int cmd_moment(const MomentArgs& a, const RunnerFlags& runner, std::ostream& out) {
  ModelKind model{parse_model_tag(a.model), a.m, std::nullopt};
  if (model.tag == ModelTag::band_proportional) model.band_ratio = a.b;
  else if (a.b) throw UsageError("--b is only valid with --model band-proportional");
  model.validate();

  McOptions mc;
  mc.points = a.mc_points.value_or(default_mc_points(a.order));
  mc.seed = a.seed;
  mc.workers = resolve_workers(runner.threads);
  const auto t = theoretical_moment(model, a.order, mc);

  Json config;
  config["model"] = to_string(model.tag);
  config["order"] = a.order;
  config["m"] = a.m;
  if (model.band_ratio) config["b"] = *model.band_ratio;
  config["mc-points"] = mc.points;
  config["seed"] = a.seed;

  Json report;
  report["schema"] = kReportSchema;
  report["report"] = "moment";
  report["manifest"] = manifest("moment", config, a.seed, runner);
  report["model"] = to_string(model.tag);
  report["order"] = a.order;
  report["m"] = a.m;
  if (model.band_ratio) report["b"] = *model.band_ratio;
  report["value"] = t.value;
  report["std_error"] = t.std_error;
  if (t.exact) report["exact"] = rational_string(*t.exact);
  report["leading_term_fallback"] = t.leading_term_fallback;
  Json terms = Json::array();
  for (const auto& term : t.terms) {
    Json row;
    row["pairs"] = pairs_json(term.pi);
    row["f"] = term.f;
    row["weight"] = rational_string(term.weight);
    if (term.integral) {
      row["integral"] = term.integral->value;
      row["integral_sigma"] = term.integral->std_error;
    } else {
      row["integral"] = nullptr;
      row["integral_sigma"] = nullptr;
    }
    terms.push_back(row);
  }
  report["terms"] = terms;
  report["semicircle_reference"] = semicircle_moment(a.order);
  emit_json(report, runner, out);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model;
  int N = 0;
  int m = 1;
  std::optional<int> bandwidth;
  std::optional<double> b;
  int samples = 40;
  std::uint64_t seed = 0;
  int max_order = 6;
  std::optional<std::uint64_t> mc_points;
  std::string entry_law = "rademacher";
  int bins = 101;
};

EnsembleKind ensemble_kind(ModelTag tag) {
  switch (tag) {
    case ModelTag::toeplitz: return EnsembleKind::block_toeplitz;
    case ModelTag::hankel: return EnsembleKind::block_hankel;
    case ModelTag::band_proportional: return EnsembleKind::band_toeplitz_proportional;
    case ModelTag::band_slow: return EnsembleKind::band_toeplitz_slow;
    case ModelTag::symmetric_block_toeplitz: return EnsembleKind::symmetric_block_toeplitz;
    case ModelTag::semicircle: break;
  }
  throw UsageError("model 'semicircle' has no finite-N ensemble to simulate");
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_simulate(const SimulateArgs& a, const RunnerFlags& runner, std::ostream& out) {
  if (runner.out.empty()) throw UsageError("simulate needs --out <prefix>");
  if (a.max_order < 0 || a.max_order > kMaxMomentOrder) {
    throw UsageError("--max-order must lie in [0, " + std::to_string(kMaxMomentOrder) + "]");
  }
  const ModelTag tag = parse_model_tag(a.model);
  EnsembleConfig config;
  config.kind = ensemble_kind(tag);
  config.N = a.N;
  config.m = a.m;
  config.bandwidth = a.bandwidth;
  config.band_ratio = a.b;
  config.entry_law = parse_entry_law(a.entry_law);
  config.seed = a.seed;
  config.num_samples = a.samples;
  if (tag != ModelTag::band_proportional && a.b) throw UsageError("--b is only valid with --model band-proportional");
  if (!is_band(config.kind) && a.bandwidth) throw UsageError("--bandwidth is only valid with band models");
  config.validate();

  const unsigned workers = resolve_workers(runner.threads);
  std::vector<SpectralSample> samples(static_cast<std::size_t>(a.samples));
  std::vector<double> worst_power_error(static_cast<std::size_t>(a.samples), 0.0);
  parallel_chunks(samples.size(), workers, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const int idx = static_cast<int>(i);
      const Eigen::MatrixXd x = assemble(sample_blocks(config, idx), config) / normalization(config);
      samples[i] = SpectralSample{eigen_spectrum(x), config_digest(config, idx)};
      for (const auto& c : check_power_sums(x, samples[i].eigenvalues, 6)) {
        worst_power_error[i] = std::max(worst_power_error[i], c.relative_error);
      }
    }
  });

  const auto empirical = empirical_moments(samples, a.max_order);

  ModelKind model{tag, a.m, std::nullopt};
  if (tag == ModelTag::band_proportional) model.band_ratio = config.effective_band_ratio();
  McOptions mc;
  mc.seed = a.seed;
  mc.workers = workers;

  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(a.samples) * static_cast<std::size_t>(config.dimension()));
  for (const auto& s : samples) pooled.insert(pooled.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  std::sort(pooled.begin(), pooled.end());
  const double ks = ks_distance_to_semicircle(pooled);
  const auto hist = histogram(samples, a.bins);

  Json cfg;
  cfg["model"] = to_string(tag);
  cfg["N"] = a.N;
  cfg["m"] = a.m;
  if (is_band(config.kind)) cfg["bandwidth"] = config.effective_bandwidth();
  if (tag == ModelTag::band_proportional) cfg["b"] = config.effective_band_ratio();
  cfg["samples"] = a.samples;
  cfg["seed"] = a.seed;
  cfg["max-order"] = a.max_order;
  if (a.mc_points) cfg["mc-points"] = *a.mc_points;
  cfg["entry-law"] = to_string(config.entry_law);
  cfg["bins"] = a.bins;

  Json moments = Json::array();
  for (int order = 0; order <= a.max_order; ++order) {
    mc.points = a.mc_points.value_or(default_mc_points(order));
    const auto t = theoretical_moment(model, order, mc);
    Json row;
    row["order"] = order;
    row["empirical"] = Json{{"mean", empirical[static_cast<std::size_t>(order)].mean},
                            {"std_error", empirical[static_cast<std::size_t>(order)].std_error}};
    row["theoretical"] = theoretical_json(t);
    row["semicircle"] = semicircle_moment(order);
    moments.push_back(row);
  }

  Json report;
  report["schema"] = kReportSchema;
  report["report"] = "simulate";
  report["manifest"] = manifest("simulate", cfg, a.seed, runner);
  report["ensemble"] = config.canonical();
  report["normalization"] = normalization(config);
  report["dimension"] = config.dimension();
  report["moments"] = moments;
  report["ks_to_semicircle"] = ks;
  report["power_sum_max_relative_error"] = *std::max_element(worst_power_error.begin(), worst_power_error.end());
  Json digests = Json::array();
  for (const auto& s : samples) digests.push_back(s.config_digest);
  report["sample_digests"] = digests;
  report["histogram"] = Json{{"file", runner.out + ".hist.csv"},
                             {"bins", a.bins},
                             {"lo", hist.lo},
                             {"hi", hist.hi},
                             {"total", hist.total},
                             {"clipped_below", hist.below},
                             {"clipped_above", hist.above}};
  write_text(runner.out + ".report.json", report.dump(2) + "\n");

  std::string csv = "bin_left,bin_right,density\r\n";
  for (std::size_t bin = 0; bin < hist.counts.size(); ++bin) {
    const double left = hist.lo + hist.bin_width() * static_cast<double>(bin);
    const double right = hist.lo + hist.bin_width() * static_cast<double>(bin + 1);
    csv += csv_number(left) + "," + csv_number(right) + "," + csv_number(hist.density(bin)) + "\r\n";
  }
  write_text(runner.out + ".hist.csv", csv);
  out << runner.out << ".report.json\n" << runner.out << ".hist.csv\n";
  return kExitOk;
}

// ---------------------------------------------------------------- verify-trace

struct VerifyArgs {
  std::string model;
  int N = 0;
  int m = 1;
  int k = 1;
  int seeds = 10;
  std::uint64_t seed = 0;
  std::string entry_law = "rademacher";
};

int cmd_verify_trace(const VerifyArgs& a, const RunnerFlags& runner, std::ostream& out) {
  const ModelTag tag = parse_model_tag(a.model);
  if (tag != ModelTag::toeplitz && tag != ModelTag::hankel) {
    throw UsageError("verify-trace supports --model toeplitz or hankel");
  }
  if (a.seeds < 1) throw UsageError("--seeds must be >= 1");
  const bool hankel = tag == ModelTag::hankel;
  EnsembleConfig config;
  config.kind = hankel ? EnsembleKind::block_hankel : EnsembleKind::block_toeplitz;
  config.N = a.N;
  config.m = a.m;
  config.entry_law = parse_entry_law(a.entry_law);
  config.num_samples = 1;
  config.validate();
  if (a.k < 1) throw UsageError("--k must be >= 1");
  if (std::pow(2.0 * (a.N - 1) + 1.0, a.k) > static_cast<double>(kMaxTraceSummands)) {
    throw CapacityError("(2N-1)^k exceeds the trace-formula summand cap of 10^7");
  }

  Json cases = Json::array();
  bool all_pass = true;
  for (int i = 0; i < a.seeds; ++i) {
    config.seed = a.seed + static_cast<std::uint64_t>(i);
    const auto blocks = sample_blocks(config, 0);
    Json row;
    row["seed"] = config.seed;
    bool pass = false;
    if (config.entry_law == EntryLaw::rademacher) {
      const auto ib = to_integer(blocks);
      const std::int64_t formula = hankel ? trace_formula_hankel(ib, a.k) : trace_formula_toeplitz(ib, a.k);
      const std::int64_t direct = power_traces<std::int64_t>(assemble(ib, hankel), a.k).back();
      pass = formula == direct;
      row["formula"] = formula;
      row["direct"] = direct;
    } else {
      const double formula = hankel ? trace_formula_hankel(blocks, a.k) : trace_formula_toeplitz(blocks, a.k);
      const Eigen::MatrixXd full = assemble(blocks, hankel);
      const double direct = power_traces<double>(full, a.k).back();
      const double scale = std::pow(full.cwiseAbs().sum(), a.k);
      pass = std::abs(formula - direct) <= 1e-8 * std::max(1.0, scale);
      row["formula"] = formula;
      row["direct"] = direct;
    }
    row["pass"] = pass;
    all_pass = all_pass && pass;
    cases.push_back(row);
  }

  Json cfg;
  cfg["model"] = to_string(tag);
  cfg["N"] = a.N;
  cfg["m"] = a.m;
  cfg["k"] = a.k;
  cfg["seeds"] = a.seeds;
  cfg["seed"] = a.seed;
  cfg["entry-law"] = to_string(config.entry_law);

  Json report;
  report["schema"] = kReportSchema;
  report["report"] = "verify-trace";
  report["manifest"] = manifest("verify-trace", cfg, a.seed, runner);
  report["model"] = to_string(tag);
  report["exact"] = config.entry_law == EntryLaw::rademacher;
  report["cases"] = cases;
  report["pass"] = all_pass;
  emit_json(report, runner, out);
  return all_pass ? kExitOk : kExitVerificationFailed;
}

// ---------------------------------------------------------------- replay

std::vector<std::string> replay_args(const std::string& path, const RunnerFlags& runner) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read manifest source '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("manifest source is not JSON: ") + e.what());
  }
  const Json& m = doc.contains("manifest") ? doc["manifest"] : doc;
  if (!m.contains("command") || !m.contains("config")) throw UsageError("no manifest found in '" + path + "'");
  std::vector<std::string> args{m["command"].get<std::string>()};
  for (const auto& [key, value] : m["config"].items()) {
    args.push_back("--" + key);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  args.push_back("--timestamp");
  args.push_back(m.value("timestamp", std::string{}));
  if (runner.threads != 0) {
    args.push_back("--threads");
    args.push_back(std::to_string(runner.threads));
  }
  if (!runner.out.empty()) {
    args.push_back("--out");
    args.push_back(runner.out);
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block Toeplitz/Hankel random matrices: limiting moments, ensembles and spectra", "btrm"};
  app.require_subcommand(1);

  PartitionsArgs pa;
  auto* partitions = app.add_subcommand("partitions", "List pair partitions of [2k] with f, g and class flags");
  partitions->add_option("--k", pa.k, "Number of pairs (1..7)")->required();
  partitions->add_option("--class", pa.filter, "all | noncrossing | parity_alternating");
  partitions->add_flag("--json", pa.json, "Emit a JSON report instead of a table");

  MomentArgs ma;
  RunnerFlags moment_runner;
  auto* moment = app.add_subcommand("moment", "Theoretical limit moment of a model");
  moment->add_option("--model", ma.model, "toeplitz | hankel | band-proportional | band-slow | symmetric-block | semicircle")
      ->required();
  moment->add_option("--order,--k", ma.order, "Moment order")->required();
  moment->add_option("--m", ma.m, "Block order");
  moment->add_option("--b", ma.b, "Band ratio in (0,1] (band-proportional)");
  moment->add_option("--mc-points", ma.mc_points, "Monte Carlo points per partition integral");
  moment->add_option("--seed", ma.seed, "Seed")->required();
  add_runner_flags(moment, moment_runner, false);

  SimulateArgs sa;
  RunnerFlags simulate_runner;
  auto* simulate = app.add_subcommand("simulate", "Sample an ensemble and compare empirical with limit moments");
  simulate->add_option("--model", sa.model, "toeplitz | hankel | band-proportional | band-slow | symmetric-block")
      ->required();
  simulate->add_option("--N", sa.N, "Number of block rows")->required();
  simulate->add_option("--m", sa.m, "Block order");
  simulate->add_option("--bandwidth", sa.bandwidth, "Bandwidth b_N (band models)");
  simulate->add_option("--b", sa.b, "Band ratio b (band-proportional)");
  simulate->add_option("--samples", sa.samples, "Number of independent realizations");
  simulate->add_option("--seed", sa.seed, "Seed")->required();
  simulate->add_option("--max-order", sa.max_order, "Highest moment order reported");
  simulate->add_option("--mc-points", sa.mc_points, "Monte Carlo points per partition integral");
  simulate->add_option("--entry-law", sa.entry_law, "rademacher | gaussian");
  simulate->add_option("--bins", sa.bins, "Histogram bins on [-3, 3]");
  add_runner_flags(simulate, simulate_runner, true);

  VerifyArgs va;
  RunnerFlags verify_runner;
  auto* verify = app.add_subcommand("verify-trace", "Check the block trace formula against tr(T^k) exactly");
  verify->add_option("--model", va.model, "toeplitz | hankel")->required();
  verify->add_option("--N", va.N, "Number of block rows")->required();
  verify->add_option("--m", va.m, "Block order");
  verify->add_option("--k,--order", va.k, "Power k")->required();
  verify->add_option("--seeds", va.seeds, "Number of consecutive seeds");
  verify->add_option("--seed", va.seed, "First seed")->required();
  verify->add_option("--entry-law", va.entry_law, "rademacher | gaussian");
  add_runner_flags(verify, verify_runner, false);

  std::string replay_source;
  RunnerFlags replay_runner;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a report's manifest");
  replay->add_option("report", replay_source, "Report JSON containing a manifest")->required();
  replay->add_option("--threads", replay_runner.threads, "Worker threads");
  replay->add_option("--out", replay_runner.out, "Output file or prefix");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "btrm: " << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front(); sub) {
      err << sub->help();
    }
    return kExitUsage;
  }

  try {
    if (*partitions) return cmd_partitions(pa, out);
    if (*moment) return cmd_moment(ma, moment_runner, out);
    if (*simulate) return cmd_simulate(sa, simulate_runner, out);
    if (*verify) return cmd_verify_trace(va, verify_runner, out);
    if (*replay) return run(replay_args(replay_source, replay_runner), out, err);
  } catch (const CapacityError& e) {
    err << "btrm: resource cap: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const RangeError& e) {
    err << "btrm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "btrm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "btrm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "btrm: error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

}  // namespace btrm::cli
