#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "fei/error.hpp"
#include "fei/experiments.hpp"
#include "fei/families.hpp"
#include "fei/measures.hpp"
#include "fei/spectrum.hpp"

namespace fei::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Config {
  std::string output;
  std::optional<unsigned> arity_cap;
  std::string format = "json";

  unsigned n = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 1000;
  std::optional<double> epsilon;
  std::optional<double> delta;
  double c = 2.0;
  std::string family;
  std::string function;
  unsigned threads = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool allow_large = false;
  bool timing = false;
  bool spectrum = false;
};

// Restores the process-wide arity cap after an override.
class CapOverride {
public:
  explicit CapOverride(std::optional<unsigned> cap) : previous_(arity_cap()) {
    if (cap) set_arity_cap(*cap);
  }
  ~CapOverride() { set_arity_cap(previous_); }
  CapOverride(const CapOverride&) = delete;
  CapOverride& operator=(const CapOverride&) = delete;

private:
  unsigned previous_;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string document(const Json& j) { return j.dump(2) + "\n"; }

TruthTable parse_function(const std::string& text) {
  if (text.rfind("n=", 0) == 0) return TruthTable::from_hex(text);
  const FamilySpec spec = FamilySpec::parse(text);
  if (spec.kind != FamilyKind::named)
    throw ParseError("--fn expects a named function or an n=<arity>:<hex> literal");
  return named_function(spec);
}

std::string run_analyze(const Config& cfg) {
  const TruthTable tt = parse_function(cfg.function);
  if (cfg.spectrum) return spectrum_of(tt).to_csv();
  return document(to_json(fei_report(tt, cfg.c)));
}

std::string run_montecarlo(const Config& cfg) {
  if (!cfg.seed) throw UsageError("montecarlo requires --seed");
  const auto rec = monte_carlo(cfg.n, cfg.trials, *cfg.seed, cfg.epsilon.value_or(1.0),
                               RunOptions{cfg.threads});
  return document(to_json(rec, cfg.timing));
}

std::string run_exhaustive(const Config& cfg) {
  const auto rec = exhaustive_stats(cfg.n, cfg.epsilon.value_or(1.0),
                                    RunOptions{cfg.threads}, cfg.allow_large);
  return document(to_json(rec, cfg.timing));
}

std::string run_moments(const Config& cfg) {
  return document(to_json(fourth_moment_table(cfg.n, cfg.allow_large)));
}

std::string run_scan(const Config& cfg) {
  const FamilySpec spec = FamilySpec::parse(cfg.family);
  const auto rec = family_scan(spec, cfg.c, RunOptions{cfg.threads}, cfg.budget);
  if (cfg.format == "csv") return rec.histogram->to_csv();
  return document(to_json(rec, cfg.timing));
}

std::string run_bound(const Config& cfg) {
  if (!cfg.epsilon && !cfg.delta) throw UsageError("bound requires --epsilon or --delta");
  const double epsilon = cfg.epsilon ? *cfg.epsilon : *cfg.delta / 2.0;
  const double delta = cfg.delta ? *cfg.delta : 2.0 * *cfg.epsilon;
  Json j;
  j["experiment"] = "bound";
  j["version"] = kVersion;
  j["n"] = cfg.n;
  j["epsilon"] = epsilon;
  j["delta"] = delta;
  j["chebyshev_bound"] = chebyshev_bound(cfg.n, epsilon);
  j["fraction_bound"] = fraction_bound(cfg.n, delta);
  return document(j);
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--output,-o", cfg.output, "Write the document to this file");
  sub->add_option("--arity-cap", cfg.arity_cap, "Override the arity cap")
      ->check(CLI::Range(1u, 30u));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Fourier entropy and influence of boolean functions", "fei"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kVersion));

  auto* analyze = app.add_subcommand("analyze", "FEI report for one function");
  analyze->add_option("--fn", cfg.function,
                      "named:<name>,n=<n>[,...] or hex literal n=<arity>:<hex>")
      ->required();
  analyze->add_option("--c", cfg.c, "Constant C under test")->check(CLI::PositiveNumber);
  analyze->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));
  analyze->add_flag("--spectrum", cfg.spectrum, "Print the spectrum as mask,coefficient CSV");

  auto* montecarlo = app.add_subcommand("montecarlo", "Seeded random-function sampling");
  montecarlo->add_option("--n", cfg.n, "Arity")->required();
  montecarlo->add_option("--trials", cfg.trials, "Number of sampled functions")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--seed", cfg.seed, "64-bit seed (required)");
  montecarlo->add_option("--epsilon", cfg.epsilon, "Violation test uses C = 2 + 2 epsilon")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  montecarlo->add_flag("--timing", cfg.timing, "Include runtime_ms in the record");
  montecarlo->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  auto* exhaustive = app.add_subcommand("exhaustive", "Exact statistics over all functions");
  exhaustive->add_option("--n", cfg.n, "Arity (<= 4)")->required();
  exhaustive->add_option("--epsilon", cfg.epsilon)->check(CLI::PositiveNumber);
  exhaustive->add_option("--threads", cfg.threads);
  exhaustive->add_flag("--allow-large", cfg.allow_large, "Permit n = 5 (slow)");
  exhaustive->add_flag("--timing", cfg.timing);
  exhaustive->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  auto* moments = app.add_subcommand("moments", "Enumerated fourth moments of coefficients");
  moments->add_option("--n", cfg.n, "Arity (<= 4)")->required();
  moments->add_flag("--allow-large", cfg.allow_large, "Permit n = 5 (slow)");
  moments->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  auto* scan = app.add_subcommand("scan", "FEI ratios across a function family");
  scan->add_option("--family", cfg.family, "e.g. symmetric:n=8, cyclic:p=5")->required();
  scan->add_option("--c", cfg.c)->check(CLI::PositiveNumber);
  scan->add_option("--format", cfg.format, "json record or csv histogram")
      ->check(CLI::IsMember({"json", "csv"}));
  scan->add_option("--threads", cfg.threads);
  scan->add_option("--budget", cfg.budget, "Enumeration budget for cyclic families");
  scan->add_flag("--timing", cfg.timing);

  auto* bound = app.add_subcommand("bound", "Chebyshev and family-fraction bounds");
  bound->add_option("--n", cfg.n, "Arity")->required()->check(CLI::PositiveNumber);
  bound->add_option("--epsilon", cfg.epsilon)->check(CLI::PositiveNumber);
  bound->add_option("--delta", cfg.delta)->check(CLI::PositiveNumber);
  bound->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));

  for (auto* sub : {analyze, montecarlo, exhaustive, moments, scan, bound})
    add_common(sub, cfg);

  std::vector<const char*> argv{"fei"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    // --help / --version
    std::ostringstream o, ignored;
    app.exit(e, o, ignored);
    out << o.str();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    CapOverride cap(cfg.arity_cap);
    std::string text;
    if (analyze->parsed()) text = run_analyze(cfg);
    else if (montecarlo->parsed()) text = run_montecarlo(cfg);
    else if (exhaustive->parsed()) text = run_exhaustive(cfg);
    else if (moments->parsed()) text = run_moments(cfg);
    else if (scan->parsed()) text = run_scan(cfg);
    else text = run_bound(cfg);

    if (cfg.output.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file || !(file << text)) {
        err << Json{{"error", "io"}, {"message", "cannot write " + cfg.output}}.dump() << "\n";
        return kComputationError;
      }
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const fei::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const fei::Error& e) {
    err << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return kComputationError;
  }
}

}  // namespace fei::cli
