#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "escapelab/audit.hpp"
#include "escapelab/classify.hpp"
#include "escapelab/construction.hpp"
#include "escapelab/errors.hpp"
#include "escapelab/geometry.hpp"
#include "escapelab/itinerary.hpp"
#include "escapelab/report.hpp"

namespace escapelab {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDefaultSeed = 42;

// Usage errors detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) throw UsageError("not a number: '" + s + "'");
  return x;
}

std::vector<double> parse_list(const std::string& s, std::size_t expected, const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) values.push_back(parse_double(item));
  if (values.size() != expected) throw UsageError(what + " expects " + std::to_string(expected) + " comma-separated values");
  return values;
}

std::complex<double> parse_complex(const std::string& s) {
  const auto v = parse_list(s, 2, "complex argument '" + s + "'");
  return {v[0], v[1]};
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ESCAPELAB_SEED")) {
    std::uint64_t seed = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec == std::errc() && ptr == s.data() + s.size()) return seed;
  }
  return kDefaultSeed;
}

std::string join(const std::vector<std::string>& args) {
  std::string line = "escapelab";
  for (const auto& a : args) line += " " + a;
  return line;
}

Itinerary sequence(const std::string& name, std::size_t n) {
  if (name == "linear") return seq_linear(n);
  if (name == "square") return seq_square(n);
  throw UsageError("unknown sequence '" + name + "'");
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string fmt(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- itinerary -------------------------------------------------------------

struct ItineraryArgs {
  std::string lambda = "1,0";
  std::string z;
  double base = 0.0;
  std::size_t steps = 0;
  std::string format = "json";
  std::string output;
};

int cmd_itinerary(const ItineraryArgs& a, RunManifest manifest, std::ostream& out) {
  const ExpMap map(parse_complex(a.lambda));
  const AnnularPartition partition(a.base);
  const ItineraryReport report = compute_itinerary(map, partition, parse_complex(a.z), a.steps);
  manifest.lambda = map.lambda();
  Json j = {{"manifest", as_json(manifest)}, {"base", a.base}, {"z", as_json(parse_complex(a.z))},
            {"steps", a.steps}, {"report", as_json(report)}};
  emit(a.output, a.format == "text" ? as_text(j) : dump(j), out);
  return kExitPass;
}

// ---- construct -------------------------------------------------------------

struct ConstructArgs {
  std::string lambda = "1,0";
  std::string seq = "linear";
  std::string itinerary_file;
  long depth = 0;
  long precision = 256;
  double R = 20.0;
  double tau0 = 2.0;
  double s0 = 0.1;
  bool force = false;
  std::string output;
};

int cmd_construct(const ConstructArgs& a, RunManifest manifest, std::ostream& out, std::ostream& err) {
  if (a.depth < 1) throw UsageError("depth must be at least 1");
  const ExpMap map(parse_complex(a.lambda));
  ConstructionConfig config;
  config.R = a.R;
  config.tau0 = a.tau0;
  config.s0 = a.s0;
  config.precision_bits = a.precision;
  config.force = a.force;
  const auto depth = static_cast<std::size_t>(a.depth);
  if (!a.itinerary_file.empty()) {
    std::ifstream in(a.itinerary_file);
    if (!in) throw UsageError("cannot read '" + a.itinerary_file + "'");
    config.t = read_itinerary(in);
    if (config.t.size() < depth + 1) throw UsageError("itinerary file shorter than depth + 1");
  } else {
    config.t = sequence(a.seq, depth + 1);
  }
  config.validate(map);

  const ItineraryReport predicates = check_predicates(config.t);
  for (std::size_t n : predicates.admissible_failures) {
    err << "warning: itinerary not admissible at index " << n << " (e^" << config.t[n] << " <= " << config.t[n + 1]
        << ")\n";
  }

  manifest.lambda = map.lambda();
  manifest.precision_bits = a.precision;
  try {
    const BranchChain chain = construct_chain(map, config, depth, manifest.seed);
    Json j = as_json(chain);
    j["manifest"] = as_json(manifest);
    j["residence"] = chain.residence;
    emit(a.output, dump(j), out);
  } catch (const RowNotContained& e) {
    err << "error: " << e.what() << " (depth " << e.step() << ")\n";
    return kExitConstruction;
  } catch (const BranchEscapesRegion& e) {
    err << "error: " << e.what() << " (depth " << e.step() << ")\n";
    return kExitConstruction;
  }
  return kExitPass;
}

// ---- classify-grid ---------------------------------------------------------

struct GridArgs {
  std::string lambda = "1,0";
  std::string window = "-1,1,-1,1";
  std::size_t width = 100;
  std::size_t height = 100;
  std::size_t horizon = 50;
  double budget = 1e8;
  unsigned jobs = 0;
  std::vector<double> radii;
  std::string csv;
  std::string pgm;
};

int cmd_classify_grid(const GridArgs& a, RunManifest manifest, std::ostream& out) {
  const auto start = Clock::now();
  const auto w = parse_list(a.window, 4, "window");
  const double x0 = w[0], x1 = w[1], y0 = w[2], y1 = w[3];
  if (!(x0 < x1) || !(y0 < y1)) throw UsageError("window must satisfy x0 < x1 and y0 < y1");
  if (a.width == 0 || a.height == 0) throw UsageError("resolution must be positive");
  if (static_cast<double>(a.width) * static_cast<double>(a.height) > a.budget) {
    throw UsageError("grid of " + std::to_string(a.width * a.height) + " cells exceeds the cell budget");
  }
  if (a.horizon < 1) throw UsageError("horizon must be at least 1");

  const ExpMap map(parse_complex(a.lambda));
  manifest.lambda = map.lambda();
  ClassifyParams params;
  params.radii = a.radii;

  const std::size_t cells = a.width * a.height;
  auto point = [&](std::size_t idx) {
    const std::size_t row = idx / a.width;
    const std::size_t col = idx % a.width;
    const double re = x0 + (static_cast<double>(col) + 0.5) * (x1 - x0) / static_cast<double>(a.width);
    const double im = y1 - (static_cast<double>(row) + 0.5) * (y1 - y0) / static_cast<double>(a.height);
    return std::complex<double>(re, im);
  };

  std::vector<EscapeCertificate> certs(cells);
  std::atomic<std::size_t> next{0};
  const unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) certs[i] = classify(map, point(i), a.horizon, params);
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < std::min<std::size_t>(jobs, cells); ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << as_comment_lines(manifest);
  csv << "# grid: " << a.width << "x" << a.height << " window " << fmt(x0) << "," << fmt(x1) << "," << fmt(y0) << ","
      << fmt(y1) << " horizon " << a.horizon << "\n";
  csv << "re,im,category,N,R\n";
  for (std::size_t i = 0; i < cells; ++i) {
    const auto z = point(i);
    csv << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << to_string(certs[i].category) << ',' << certs[i].N << ','
        << fmt(certs[i].R) << '\n';
  }
  emit(a.csv, csv.str(), out);

  if (!a.pgm.empty()) {
    manifest.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream pgm;
    pgm << "P5\n";
    pgm << as_comment_lines(manifest);
    pgm << "# gray levels:";
    for (Category c : {Category::BoundedUnknown, Category::Moderate, Category::FlatModerate, Category::Slow,
                       Category::FlatSlow, Category::UniformSlow, Category::Fast}) {
      pgm << ' ' << to_string(c) << '=' << static_cast<int>(category_gray(c));
    }
    // The only line that differs between identical runs.
    pgm << "\n# created: " << static_cast<long long>(std::time(nullptr))
        << " wall_time_seconds: " << fmt(manifest.wall_time_seconds) << "\n";
    pgm << a.width << ' ' << a.height << "\n255\n";
    for (const auto& c : certs) pgm.put(static_cast<char>(category_gray(c.category)));
    emit(a.pgm, pgm.str(), out);
  }
  return kExitPass;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::string lambda = "1,0";
  std::size_t trials = 200;
  std::uint64_t mc_samples = 0;
  std::string seq = "linear";
  std::optional<std::size_t> depth;
  double R = 20.0;
  double tau0 = 2.0;
  double tolerance = 0.05;
  std::size_t chains = 5;
  std::string family = "ghdef";
  unsigned p = 1;
  double epsilon = 0.5;
  std::size_t n_first = 1;
  std::size_t n_last = 10000;
  std::string output;
};

Json verify_density_suite(const VerifyArgs& a, std::uint64_t seed) {
  Json j = as_json(density_sweep(a.trials, seed, a.mc_samples));
  j["name"] = "density";
  return j;
}

Json verify_distortion_suite(const VerifyArgs& a, std::uint64_t seed) {
  const ExpMap map(parse_complex(a.lambda));
  const long precision = 256;
  const PreciseHalfAnnulus ring{BigFloat(std::numbers::e, precision), BigFloat(std::numbers::e * std::numbers::e, precision)};
  const double single = pullback_distortion(map, ring, {mpz_class(0)}, precision);
  const double single_error = std::abs(single - std::numbers::e) / std::numbers::e;
  const bool single_ok = single_error <= 1e-9;

  const std::size_t max_depth = a.depth.value_or(5);
  ConstructionConfig config;
  config.R = a.R;
  config.tau0 = a.tau0;
  config.precision_bits = precision;
  config.t = sequence(a.seq, max_depth + 1);
  Json chains = Json::array();
  bool chains_ok = true;
  std::size_t regenerated = 0;
  std::uint64_t s = seed;
  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    for (std::size_t c = 0; c < a.chains; ++c) {
      for (int attempt = 0;; ++attempt, ++s, ++regenerated) {
        try {
          const BranchChain chain = construct_chain(map, config, depth, s);
          const DistortionAudit audit = distortion_chain_audit(map, chain, config);
          Json entry = as_json(audit);
          entry["seed"] = s;
          chains_ok = chains_ok && audit.within_bound;
          chains.push_back(entry);
          ++s;
          break;
        } catch (const HypothesisViolated&) {
          if (attempt >= 50) throw;
        }
      }
    }
  }
  return {{"name", "distortion"},
          {"single_step", {{"distortion", single}, {"expected", std::numbers::e}, {"relative_error", single_error},
                           {"pass", single_ok}}},
          {"chains", chains},
          {"regenerated_chains", regenerated},
          {"pass", single_ok && chains_ok}};
}

Json verify_mcmullen_suite(const VerifyArgs& a) {
  const std::size_t n = a.depth.value_or(a.seq == "square" ? 1000 : 10000);
  ConstructionConfig config;
  config.R = a.R;
  config.tau0 = a.tau0;
  config.t = sequence(a.seq, n + 1);
  const McMullenResult result = proof_mcmullen(config.R, config.t, config.tau0, n);
  const McMullenResult doubled = proof_mcmullen(config.R, config.t, 2.0 * config.tau0, n);
  const bool close = std::abs(result.value - 1.0) <= a.tolerance;
  const double shift = std::abs(doubled.value - result.value);
  Json j = construction_audit(config, result);
  j["name"] = "mcmullen";
  j["sequence"] = a.seq;
  j["verdicts"]["within_tolerance"] = close;
  j["verdicts"]["tolerance"] = a.tolerance;
  j["verdicts"]["doubled_tau0_value"] = doubled.value;
  j["verdicts"]["doubled_tau0_shift"] = shift;
  j["pass"] = close;
  return j;
}

Json verify_upperbound_suite(const VerifyArgs& a) {
  GrowthFamily family;
  if (a.family == "ghdef") {
    family = GrowthFamily::power_log(a.p);
  } else if (a.family == "ghdashdef") {
    family = GrowthFamily::exp_power_log(a.p);
  } else {
    throw UsageError("unknown family '" + a.family + "' (expected ghdef or ghdashdef)");
  }
  UpperBoundAudit audit = upper_bound_audit(family, a.epsilon, a.n_first, a.n_last);
  const UpperBoundRow last = audit.rows.back();
  // Keep the report readable: at most 200 evenly spaced rows plus the last one.
  const std::size_t stride = std::max<std::size_t>(1, audit.rows.size() / 200);
  std::vector<UpperBoundRow> kept;
  for (std::size_t i = 0; i < audit.rows.size(); i += stride) kept.push_back(audit.rows[i]);
  if (kept.back().n != last.n) kept.push_back(last);
  audit.rows = kept;
  Json j = as_json(audit);
  j["name"] = "upperbound";
  j["final_log_q"] = last.log_q;
  j["final_condition_ratio"] = last.condition_ratio;
  return j;
}

int cmd_verify(const VerifyArgs& a, RunManifest manifest, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> suites{"density", "distortion", "mcmullen", "upperbound"};
  std::vector<std::string> run;
  if (a.suite == "all") {
    run = suites;
  } else {
    run = {a.suite};
  }
  manifest.lambda = parse_complex(a.lambda);
  Json checks = Json::array();
  bool pass = true;
  for (const std::string& suite : run) {
    Json j;
    if (suite == "density") j = verify_density_suite(a, manifest.seed);
    if (suite == "distortion") j = verify_distortion_suite(a, manifest.seed);
    if (suite == "mcmullen") j = verify_mcmullen_suite(a);
    if (suite == "upperbound") j = verify_upperbound_suite(a);
    const bool ok = j.at("pass").get<bool>();
    if (!ok) err << "verify " << suite << ": FAIL\n";
    pass = pass && ok;
    checks.push_back(std::move(j));
  }
  emit(a.output, dump({{"manifest", as_json(manifest)}, {"suite", a.suite}, {"checks", checks}, {"pass", pass}}), out);
  return pass ? kExitPass : kExitVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Escape-rate and itinerary computations for z -> lambda e^z", "escapelab"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = default_seed();
  app.add_option("--seed", seed, "Random seed (default: ESCAPELAB_SEED or 42)");

  ItineraryArgs it;
  auto* itinerary = app.add_subcommand("itinerary", "Annular itinerary of one orbit");
  itinerary->add_option("--lambda", it.lambda, "Parameter as re,im");
  itinerary->add_option("--base", it.base, "Partition base R > 1")->required();
  itinerary->add_option("--z", it.z, "Starting point as re,im")->required();
  itinerary->add_option("--steps", it.steps, "Number of iterations")->required();
  itinerary->add_option("--format", it.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  itinerary->add_option("-o,--output", it.output, "Output file (default: stdout)");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Point with a prescribed itinerary by inverse branches");
  construct->add_option("--lambda", ca.lambda, "Parameter as re,im");
  construct->add_option("--seq", ca.seq, "linear or square")->check(CLI::IsMember({"linear", "square"}));
  construct->add_option("--itinerary", ca.itinerary_file, "File with one index per line (overrides --seq)");
  construct->add_option("--depth", ca.depth, "Number of inverse-branch steps")->required();
  construct->add_option("--precision", ca.precision, "Working precision in bits");
  construct->add_option("--R", ca.R, "Partition base");
  construct->add_option("--tau0", ca.tau0, "Distortion constant");
  construct->add_option("--s0", ca.s0, "Diameter constant");
  construct->add_flag("--force", ca.force, "Allow R below the admissibility threshold");
  construct->add_option("-o,--output", ca.output, "Output file (default: stdout)");

  GridArgs ga;
  auto* grid = app.add_subcommand("classify-grid", "Escape category of every cell of a rectangular grid");
  grid->add_option("--lambda", ga.lambda, "Parameter as re,im");
  grid->add_option("--window", ga.window, "x0,x1,y0,y1");
  grid->add_option("--width", ga.width, "Cells per row");
  grid->add_option("--height", ga.height, "Rows");
  grid->add_option("--horizon", ga.horizon, "Iterations per cell");
  grid->add_option("--budget", ga.budget, "Largest allowed cell count");
  grid->add_option("--jobs", ga.jobs, "Worker threads (default: hardware concurrency)");
  grid->add_option("--radii", ga.radii, "Candidate bases R (default: e^{j/4}, j = 1..80)")->delimiter(',');
  grid->add_option("--csv", ga.csv, "CSV output (default: stdout)");
  grid->add_option("--pgm", ga.pgm, "PGM image output");

  VerifyArgs va;
  std::size_t depth_arg = 0;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", va.suite, "density, distortion, mcmullen, upperbound or all")
      ->required()
      ->check(CLI::IsMember({"density", "distortion", "mcmullen", "upperbound", "all"}));
  verify->add_option("--lambda", va.lambda, "Parameter as re,im (distortion)");
  verify->add_option("--trials", va.trials, "Random tuples (density)");
  verify->add_option("--mc-samples", va.mc_samples, "Monte Carlo samples per tuple (density)");
  verify->add_option("--seq", va.seq, "linear or square")->check(CLI::IsMember({"linear", "square"}));
  auto* depth_opt = verify->add_option("--depth", depth_arg, "Depth n (mcmullen) or largest chain depth (distortion)");
  verify->add_option("--R", va.R, "Partition base");
  verify->add_option("--tau0", va.tau0, "Distortion constant");
  verify->add_option("--tolerance", va.tolerance, "Allowed distance of the bound from 1 (mcmullen)");
  verify->add_option("--chains", va.chains, "Chains per depth (distortion)");
  verify->add_option("--family", va.family, "ghdef or ghdashdef (upperbound)");
  verify->add_option("--p", va.p, "Family index p (upperbound)");
  verify->add_option("--epsilon", va.epsilon, "Exponent epsilon (upperbound)");
  verify->add_option("--n-first", va.n_first, "First index (upperbound)");
  verify->add_option("--n-last", va.n_last, "Last index (upperbound)");
  verify->add_option("-o,--output", va.output, "Output file (default: stdout)");

  std::vector<std::string> storage{"escapelab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  RunManifest manifest;
  manifest.command_line = join(args);
  manifest.seed = seed;
  const bool in_construct = construct->parsed();
  try {
    if (itinerary->parsed()) return cmd_itinerary(it, manifest, out);
    if (construct->parsed()) return cmd_construct(ca, manifest, out, err);
    if (grid->parsed()) return cmd_classify_grid(ga, manifest, out);
    if (verify->parsed()) {
      if (*depth_opt) va.depth = depth_arg;
      return cmd_verify(va, manifest, out, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return in_construct ? kExitConstruction : kExitVerifyFailed;
  }
  return kExitUsage;
}

}  // namespace escapelab
