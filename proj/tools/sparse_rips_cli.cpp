// sparse-rips: build sparse Rips filtrations, compute their persistence, and
// check the approximation guarantees on small inputs.
//
// Exit codes: 0 success, 1 data or computation error, 2 usage error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparse_rips/io.hpp"
#include "sparse_rips/sparse_rips.hpp"
#include "sparse_rips/verify.hpp"

namespace sr = sparse_rips;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct InputConfig {
  std::string path;
  std::string metric = "euclidean";
  std::string format = "csv";
  bool header = false;
};

void add_input_options(CLI::App* cmd, InputConfig& in, bool required) {
  auto* opt = cmd->add_option("--input", in.path, "point file (csv or whitespace) or distance matrix");
  if (required) opt->required();
  cmd->add_option("--metric", in.metric, "euclidean, manhattan, chebyshev or matrix")->capture_default_str();
  cmd->add_option("--format", in.format, "csv or whitespace")->capture_default_str();
  cmd->add_flag("--header", in.header, "skip the first line of the point file");
}

sr::LoadedInput load(const InputConfig& in) {
  const auto kind = sr::parse_metric_kind(in.metric);
  sr::LoadedInput loaded = [&] {
    if (kind == sr::MetricKind::explicit_matrix) return sr::load_matrix(in.path);
    sr::LoadOptions opts;
    if (in.format == "csv")
      opts.format = sr::PointFormat::csv;
    else if (in.format == "whitespace")
      opts.format = sr::PointFormat::whitespace;
    else
      throw sr::InvalidArgument("unknown format '" + in.format + "' (expected csv or whitespace)");
    opts.header = in.header;
    opts.metric = kind;
    return sr::load_points(in.path, opts);
  }();
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  return loaded;
}

void check_k(int k) {
  if (k < 1) throw sr::InvalidArgument("dimension cap k must be at least 1");
}

/// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body) {
  const std::filesystem::path target(path);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw sr::Error("cannot write '" + tmp.string() + "'");
    body(out);
    out.flush();
    if (!out) throw sr::Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw sr::Error("cannot move output into '" + path + "': " + ec.message());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_counts(const sr::SparseFiltration& f) {
  const auto counts = f.counts_by_dimension();
  for (std::size_t d = 0; d < counts.size(); ++d) std::cout << "  dim " << d << ": " << counts[d] << '\n';
  std::cout << "  total: " << f.size() << '\n';
}

// build ---------------------------------------------------------------------

struct BuildConfig {
  InputConfig input;
  double epsilon = 0.0;
  int k = 2;
  std::size_t seed = 0;
  std::string out;
  std::string schedule_out;
};

int run_build(const BuildConfig& cfg) {
  sr::check_epsilon(cfg.epsilon);
  check_k(cfg.k);
  const auto loaded = load(cfg.input);
  if (cfg.seed >= loaded.metric.size())
    throw sr::InvalidArgument("seed " + std::to_string(cfg.seed) + " out of range for " +
                              std::to_string(loaded.metric.size()) + " points");
  const auto start = std::chrono::steady_clock::now();
  const auto build = sr::build_sparse_detailed(loaded.metric, cfg.epsilon, cfg.k, cfg.seed);
  const double elapsed = seconds_since(start);

  write_atomically(cfg.out, [&](std::ostream& os) { sr::write_filtration(os, build.filtration); });
  if (!cfg.schedule_out.empty())
    write_atomically(cfg.schedule_out,
                     [&](std::ostream& os) { sr::write_schedule_csv(os, build.permutation, build.schedule); });

  std::cout << "points: " << loaded.metric.size() << '\n' << "simplices by dimension:\n";
  print_counts(build.filtration);
  std::cout << "max |E(p)|: " << build.max_forward_degree() << '\n' << "wall time (s): " << elapsed << '\n';
  return 0;
}

// persist -------------------------------------------------------------------

struct PersistConfig {
  std::string filtration;
  InputConfig input;
  bool full = false;
  bool relaxed = false;
  double epsilon = 0.0;
  double alpha_max = 0.0;
  int k = 2;
  std::size_t seed = 0;
  std::string out;
  bool csv = false;
  bool keep_zero = false;
};

sr::SparseFiltration filtration_for(const PersistConfig& cfg) {
  if (!cfg.filtration.empty()) {
    std::ifstream in(cfg.filtration);
    if (!in) throw sr::ParseError("cannot open '" + cfg.filtration + "'");
    return sr::read_filtration(in);
  }
  check_k(cfg.k);
  if (cfg.full) {
    if (!(cfg.alpha_max > 0.0)) throw sr::InvalidArgument("--full requires a positive --alpha-max");
    return sr::full_rips(load(cfg.input).metric, cfg.alpha_max, cfg.k);
  }
  sr::check_epsilon(cfg.epsilon);
  const auto loaded = load(cfg.input);
  if (cfg.relaxed) {
    const double alpha_max = cfg.alpha_max > 0.0 ? cfg.alpha_max : sr::kInfinity;
    const auto gp = sr::greedy_permutation(loaded.metric, cfg.seed);
    sr::check_distinct(gp);
    const sr::WeightContext ctx(loaded.metric, sr::deletion_times(gp, cfg.epsilon));
    return sr::relaxed_rips(loaded.metric, ctx, alpha_max, cfg.k);
  }
  return sr::build_sparse(loaded.metric, cfg.epsilon, cfg.k, cfg.seed);
}

int run_persist(const PersistConfig& cfg) {
  if (cfg.filtration.empty() == cfg.input.path.empty())
    throw sr::InvalidArgument("give exactly one of --filtration or --input");
  if (cfg.full && cfg.relaxed) throw sr::InvalidArgument("--full and --relaxed are exclusive");
  if (!cfg.filtration.empty() && (cfg.full || cfg.relaxed))
    throw sr::InvalidArgument("--full and --relaxed apply to --input only");

  const auto f = filtration_for(cfg);
  sr::PersistenceOptions opts;
  opts.keep_zero_persistence = cfg.keep_zero;
  const auto dgm = sr::compute_persistence(f, opts);
  write_atomically(cfg.out, [&](std::ostream& os) {
    if (cfg.csv)
      sr::write_diagram_csv(os, dgm);
    else
      sr::write_diagram_json(os, dgm);
  });
  for (int d = 0; d < dgm.k; ++d)
    std::cout << "H" << d << ": " << dgm.dimension(d).size() << " pairs (" << dgm.essential_count(d)
              << " essential)\n";
  return 0;
}

// verify --------------------------------------------------------------------

struct VerifyConfig {
  InputConfig input;
  sr::VerifyOptions opts;
};

int run_verify(VerifyConfig cfg) {
  sr::check_epsilon(cfg.opts.epsilon);
  check_k(cfg.opts.k);
  const auto loaded = load(cfg.input);
  const auto report = sr::verify_instance(loaded.metric, cfg.opts);
  for (const auto& c : report.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  if (!report.passed()) {
    std::cerr << "verification failed\n";
    return kExitData;
  }
  return 0;
}

// stats ---------------------------------------------------------------------

struct StatsConfig {
  std::string generator;
  std::vector<std::size_t> sizes;
  double epsilon = 0.0;
  int k = 2;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool no_timing = false;
};

int run_stats(const StatsConfig& cfg) {
  if (!sr::is_known_generator(cfg.generator))
    throw sr::InvalidArgument("unknown generator '" + cfg.generator +
                              "' (expected uniform2d, uniform3d, circle or clusters)");
  sr::check_epsilon(cfg.epsilon);
  check_k(cfg.k);
  if (cfg.trials == 0) throw sr::InvalidArgument("--trials must be positive");
  for (std::size_t n : cfg.sizes)
    if (n == 0) throw sr::InvalidArgument("--n values must be positive");

  std::ostringstream table;
  table << "n,epsilon,k,simplex_count,max_degree,seconds\n";
  for (std::size_t n : cfg.sizes) {
    double count = 0.0, degree = 0.0, seconds = 0.0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      sr::Random rng(cfg.seed * 1000003u + n * 7919u + trial);
      const auto m = sr::MetricInput::from_points(sr::generate(cfg.generator, n, rng));
      const auto start = std::chrono::steady_clock::now();
      const auto build = sr::build_sparse_detailed(m, cfg.epsilon, cfg.k);
      seconds += seconds_since(start);
      count += static_cast<double>(build.filtration.size());
      degree += static_cast<double>(build.max_forward_degree());
    }
    const auto t = static_cast<double>(cfg.trials);
    table << n << ',';
    sr::detail::write_real(table, cfg.epsilon);
    table << ',' << cfg.k << ',';
    sr::detail::write_real(table, count / t);
    table << ',';
    sr::detail::write_real(table, degree / t);
    table << ',';
    sr::detail::write_real(table, cfg.no_timing ? 0.0 : seconds / t);
    table << '\n';
  }
  write_atomically(cfg.out, [&](std::ostream& os) { os << table.str(); });
  std::cout << table.str();
  return 0;
}

// compare -------------------------------------------------------------------

struct CompareConfig {
  std::string a;
  std::string b;
  double factor = 1.0;
  std::string out;
};

sr::PersistenceDiagram read_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sr::ParseError("cannot open '" + path + "'");
  return sr::read_diagram_json(in);
}

int run_compare(const CompareConfig& cfg) {
  const auto result = sr::multiplicative_match(read_diagram(cfg.a), read_diagram(cfg.b), cfg.factor);
  const auto text = sr::match_to_json(result).dump(2) + "\n";
  if (cfg.out.empty())
    std::cout << text;
  else
    write_atomically(cfg.out, [&](std::ostream& os) { os << text; });
  std::cout << (result.ok ? "match within factor " : "no match within factor ") << cfg.factor << '\n';
  return result.ok ? 0 : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse Vietoris-Rips filtrations and their persistence"};
  app.require_subcommand(1);

  BuildConfig build;
  auto* build_cmd = app.add_subcommand("build", "build the sparse filtration of a point set");
  add_input_options(build_cmd, build.input, true);
  build_cmd->add_option("--epsilon", build.epsilon, "sparsity parameter in (0, 1/3]")->required();
  build_cmd->add_option("--k", build.k, "maximum simplex dimension")->capture_default_str();
  build_cmd->add_option("--seed", build.seed, "index of the first point of the greedy order")->capture_default_str();
  build_cmd->add_option("--out", build.out, "filtration output file")->required();
  build_cmd->add_option("--schedule-out", build.schedule_out, "optional CSV of insertion radii and deletion times");

  PersistConfig persist;
  auto* persist_cmd = app.add_subcommand("persist", "compute a persistence diagram");
  persist_cmd->add_option("--filtration", persist.filtration, "filtration file written by build");
  add_input_options(persist_cmd, persist.input, false);
  persist_cmd->add_flag("--full", persist.full, "full Rips filtration truncated at --alpha-max");
  persist_cmd->add_flag("--relaxed", persist.relaxed, "relaxed Rips filtration");
  persist_cmd->add_option("--epsilon", persist.epsilon, "sparsity parameter for sparse or relaxed builds");
  persist_cmd->add_option("--alpha-max", persist.alpha_max, "truncation scale");
  persist_cmd->add_option("--k", persist.k, "maximum simplex dimension")->capture_default_str();
  persist_cmd->add_option("--seed", persist.seed, "index of the first point of the greedy order");
  persist_cmd->add_option("--out", persist.out, "diagram output file")->required();
  persist_cmd->add_flag("--csv", persist.csv, "write dim,birth,death CSV instead of JSON");
  persist_cmd->add_flag("--keep-zero", persist.keep_zero, "keep pairs with zero persistence");

  VerifyConfig verify;
  auto* verify_cmd = app.add_subcommand("verify", "check the approximation guarantees on one input");
  add_input_options(verify_cmd, verify.input, true);
  verify_cmd->add_option("--epsilon", verify.opts.epsilon, "sparsity parameter in (0, 1/3]")->required();
  verify_cmd->add_option("--k", verify.opts.k, "maximum simplex dimension")->capture_default_str();
  verify_cmd->add_option("--samples", verify.opts.samples, "scales sampled per check")->capture_default_str();
  verify_cmd->add_option("--seed", verify.opts.seed, "index of the first point of the greedy order");
  verify_cmd->add_option("--sampling-seed", verify.opts.sampling_seed, "seed for the sampled scales");
  verify_cmd->add_flag("--force", verify.opts.force, "run the Rips oracles above 64 points");
  verify_cmd->add_option("--scale-deletion-times", verify.opts.schedule_scale,
                         "multiply every deletion time (values below 1 break the schedule on purpose)");

  StatsConfig stats;
  std::string sizes;
  auto* stats_cmd = app.add_subcommand("stats", "tabulate filtration size against n");
  stats_cmd->add_option("--generator", stats.generator, "uniform2d, uniform3d, circle or clusters")->required();
  stats_cmd->add_option("--n", sizes, "comma-separated point counts")->required();
  stats_cmd->add_option("--epsilon", stats.epsilon, "sparsity parameter in (0, 1/3]")->required();
  stats_cmd->add_option("--k", stats.k, "maximum simplex dimension")->capture_default_str();
  stats_cmd->add_option("--trials", stats.trials, "trials per n")->capture_default_str();
  stats_cmd->add_option("--seed", stats.seed, "generator seed")->capture_default_str();
  stats_cmd->add_option("--out", stats.out, "CSV output file")->required();
  stats_cmd->add_flag("--no-timing", stats.no_timing, "write 0 in the seconds column for reproducible files");

  CompareConfig compare;
  auto* compare_cmd = app.add_subcommand("compare", "match two JSON diagrams within a multiplicative factor");
  compare_cmd->add_option("--a", compare.a, "first diagram")->required();
  compare_cmd->add_option("--b", compare.b, "second diagram")->required();
  compare_cmd->add_option("--factor", compare.factor, "approximation factor c >= 1")->required();
  compare_cmd->add_option("--out", compare.out, "match report file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*build_cmd) return run_build(build);
    if (*persist_cmd) return run_persist(persist);
    if (*verify_cmd) return run_verify(verify);
    if (*stats_cmd) {
      std::stringstream ss(sizes);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(item, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos == 0 || pos != item.size()) throw sr::InvalidArgument("bad --n entry '" + item + "'");
        stats.sizes.push_back(static_cast<std::size_t>(v));
      }
      if (stats.sizes.empty()) throw sr::InvalidArgument("--n needs at least one value");
      return run_stats(stats);
    }
    if (*compare_cmd) return run_compare(compare);
  } catch (const sr::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
