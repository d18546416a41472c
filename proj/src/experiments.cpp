#include "fei/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "fei/error.hpp"
#include "fei/measures.hpp"
#include "reduce.hpp"

namespace fei {

namespace {

using detail::Moments;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Evaluation {
  double entropy;
  double influence;
};

Evaluation evaluate(const TruthTable& tt) {
  const Spectrum spec = spectrum_of(tt);
  return {entropy(spec), influence_total(spec)};
}

bool violates(const Evaluation& e, double c) {
  return e.entropy > c * e.influence + kComparisonSlack;
}

std::optional<double> ratio_of(const Evaluation& e) {
  if (e.influence <= kZeroInfluence) return std::nullopt;
  return e.entropy / e.influence;
}

struct Partial {
  Moments influence;
  Moments entropy;
  std::uint64_t violations = 0;
  std::optional<double> max_ratio;
  std::uint64_t argmax = 0;
  std::vector<std::uint64_t> histogram;

  void observe(std::uint64_t index, const Evaluation& e, double c) {
    influence.push(e.influence);
    entropy.push(e.entropy);
    if (violates(e, c)) ++violations;
    if (const auto r = ratio_of(e)) {
      if (!max_ratio || *r > *max_ratio) {
        max_ratio = r;
        argmax = index;
      }
    }
  }

  void bin(const Evaluation& e, std::size_t bins) {
    if (histogram.empty()) histogram.assign(bins, 0);
    const auto r = ratio_of(e);
    if (!r) return;
    const double slot = std::floor(*r * 10.0);
    const std::size_t i =
        slot < 0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(slot), bins - 1);
    ++histogram[i];
  }

  // `right` always covers later indices, so ties keep the left argmax.
  void merge(const Partial& right) {
    influence.merge(right.influence);
    entropy.merge(right.entropy);
    violations += right.violations;
    if (right.max_ratio && (!max_ratio || *right.max_ratio > *max_ratio)) {
      max_ratio = right.max_ratio;
      argmax = right.argmax;
    }
    if (histogram.empty()) {
      histogram = right.histogram;
    } else {
      for (std::size_t i = 0; i < right.histogram.size(); ++i)
        histogram[i] += right.histogram[i];
    }
  }
};

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainError("epsilon must be a positive finite number");
}

double theory_mean(unsigned n) { return n / 2.0; }
double theory_var(unsigned n) { return n / std::ldexp(1.0, static_cast<int>(n) + 1); }
double theory_mean_sq(unsigned n) { return theory_var(n) + n * n / 4.0; }

nlohmann::ordered_json nullable(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

void attach_theorem_bounds(ExperimentRecord& rec, unsigned n, double epsilon) {
  rec.bounds["mean_influence"] = theory_mean(n);
  rec.bounds["var_influence"] = theory_var(n);
  rec.bounds["chebyshev_bound"] = chebyshev_bound(n, epsilon);
  rec.bounds["fraction_bound"] = fraction_bound(n, 2.0 * epsilon);
}

std::uint64_t exhaustive_population(unsigned n) {
  return std::uint64_t{1} << (std::uint64_t{1} << n);
}

void check_exhaustive_arity(unsigned n, bool allow_large, const char* what) {
  if (n == 0) throw DomainError("arity must be at least 1");
  if (n > 5)
    throw CapacityError(std::string(what) + " cannot enumerate 2^{2^" +
                        std::to_string(n) + "} functions");
  if (n > kExhaustiveArityLimit && !allow_large)
    throw CapacityError(std::string(what) + " is limited to n <= " +
                        std::to_string(kExhaustiveArityLimit) +
                        "; use monte_carlo for larger n");
}

}  // namespace

std::string Histogram::to_csv() const {
  std::string out = "bin_low,bin_high,count\n";
  char buf[96];
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.1f,%.1f,%llu\n", bin_low(i), bin_high(i),
                  static_cast<unsigned long long>(counts[i]));
    out += buf;
  }
  return out;
}

nlohmann::ordered_json to_json(const ExperimentRecord& rec, bool include_runtime) {
  nlohmann::ordered_json j;
  j["experiment"] = rec.experiment;
  j["version"] = kVersion;
  j["n"] = rec.n;
  if (rec.family) j["family"] = *rec.family;
  if (rec.seed) j["seed"] = *rec.seed;
  if (rec.trials) j["trials"] = *rec.trials;
  if (rec.epsilon) j["epsilon"] = *rec.epsilon;
  if (rec.delta) j["delta"] = *rec.delta;
  if (rec.c) j["c"] = *rec.c;
  j["stats"] = rec.stats;
  j["bounds"] = rec.bounds;
  if (rec.histogram) {
    auto bins = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rec.histogram->counts.size(); ++i) {
      nlohmann::ordered_json b;
      b["bin_low"] = rec.histogram->bin_low(i);
      b["bin_high"] = rec.histogram->bin_high(i);
      b["count"] = rec.histogram->counts[i];
      bins.push_back(std::move(b));
    }
    j["histogram"] = std::move(bins);
  }
  if (include_runtime) j["runtime_ms"] = rec.runtime_ms;
  return j;
}

// ---------------------------------------------------------------------------

double chebyshev_bound(unsigned n, double epsilon) {
  if (n == 0) throw DomainError("arity must be at least 1");
  check_epsilon(epsilon);
  const double lead = 1.0 + 1.0 / epsilon;
  return 4.0 * lead * lead / (std::ldexp(1.0, static_cast<int>(n) + 1) * n);
}

double fraction_bound(unsigned n, double delta) {
  if (n == 0) throw DomainError("arity must be at least 1");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw DomainError("delta must be a positive finite number");
  const double lead = 1.0 + 2.0 / delta;
  return 1.0 - 4.0 * lead * lead / (std::ldexp(1.0, static_cast<int>(n) + 1) * n);
}

// ---------------------------------------------------------------------------

ExperimentRecord exhaustive_stats(unsigned n, double epsilon, RunOptions opts,
                                  bool allow_large) {
  check_exhaustive_arity(n, allow_large, "exhaustive_stats");
  check_epsilon(epsilon);
  const auto start = Clock::now();
  const double c = 2.0 + 2.0 * epsilon;
  const std::uint64_t population = exhaustive_population(n);

  const Partial total = detail::blocked_reduce<Partial>(
      population, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        Partial p;
        for (std::uint64_t idx = begin; idx < end; ++idx)
          p.observe(idx, evaluate(TruthTable::from_bits(n, idx)), c);
        return p;
      });

  ExperimentRecord rec;
  rec.experiment = "exhaustive";
  rec.n = n;
  rec.epsilon = epsilon;
  // Influences are multiples of 2^{-2n}, so the power sums are exact here.
  const double count = static_cast<double>(population);
  const double mean = total.influence.sum / count;
  const double second = total.influence.sum_sq / count;
  rec.stats["population"] = population;
  rec.stats["mean_influence"] = mean;
  rec.stats["var_influence"] = second - mean * mean;
  rec.stats["mean_influence_sq"] = second;
  rec.stats["mean_entropy"] = total.entropy.mean;
  rec.stats["max_ratio"] = nullable(total.max_ratio);
  rec.stats["argmax_id"] = total.max_ratio ? nlohmann::ordered_json(total.argmax)
                                           : nlohmann::ordered_json(nullptr);
  rec.stats["violation_count"] = total.violations;
  rec.stats["violation_fraction"] =
      static_cast<double>(total.violations) / static_cast<double>(population);
  attach_theorem_bounds(rec, n, epsilon);
  rec.bounds["mean_influence_sq"] = theory_mean_sq(n);
  rec.runtime_ms = elapsed_ms(start);
  return rec;
}

// ---------------------------------------------------------------------------

double fourth_moment_formula(unsigned n, bool same_mask) {
  const double points = std::ldexp(1.0, static_cast<int>(n));
  const double scale = std::ldexp(1.0, -4 * static_cast<int>(n));
  return same_mask ? (3.0 * points * points - 2.0 * points) * scale
                   : (points * points - 2.0 * points) * scale;
}

FourthMomentTable fourth_moment_table(unsigned n, bool allow_large) {
  check_exhaustive_arity(n, allow_large, "fourth_moment_table");
  const std::size_t masks = std::size_t{1} << n;
  const std::uint64_t population = exhaustive_population(n);

  // Squared coefficients are multiples of 2^{-2n}; the running sums stay
  // exact in double precision for n <= 4.
  std::vector<double> sums(masks * masks, 0.0);
  std::vector<double> squares(masks);
  for (std::uint64_t idx = 0; idx < population; ++idx) {
    const Spectrum spec = spectrum_of(TruthTable::from_bits(n, idx));
    for (std::size_t s = 0; s < masks; ++s) squares[s] = spec[static_cast<Mask>(s)] * spec[static_cast<Mask>(s)];
    for (std::size_t a = 0; a < masks; ++a) {
      const double wa = squares[a];
      if (wa == 0.0) continue;
      double* row = &sums[a * masks];
      for (std::size_t b = 0; b < masks; ++b) row[b] += wa * squares[b];
    }
  }

  FourthMomentTable table;
  table.n = n;
  table.rows.reserve(masks * masks);
  for (std::size_t a = 0; a < masks; ++a) {
    for (std::size_t b = 0; b < masks; ++b) {
      FourthMomentRow row;
      row.s1 = static_cast<Mask>(a);
      row.s2 = static_cast<Mask>(b);
      row.enumerated = sums[a * masks + b] / static_cast<double>(population);
      row.formula = fourth_moment_formula(n, a == b);
      row.abs_diff = std::abs(row.enumerated - row.formula);
      table.max_abs_diff = std::max(table.max_abs_diff, row.abs_diff);
      table.rows.push_back(row);
    }
  }
  return table;
}

nlohmann::ordered_json to_json(const FourthMomentTable& table) {
  nlohmann::ordered_json j;
  j["experiment"] = "moments";
  j["version"] = kVersion;
  j["n"] = table.n;
  j["max_abs_diff"] = table.max_abs_diff;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json o;
    o["s1"] = r.s1;
    o["s2"] = r.s2;
    o["enumerated"] = r.enumerated;
    o["formula"] = r.formula;
    o["abs_diff"] = r.abs_diff;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------

ExperimentRecord monte_carlo(unsigned n, std::uint64_t trials, std::uint64_t seed,
                             double epsilon, RunOptions opts) {
  check_arity(n);
  check_epsilon(epsilon);
  if (trials == 0) throw DomainError("monte_carlo needs at least one trial");
  const auto start = Clock::now();
  const double c = 2.0 + 2.0 * epsilon;

  const Partial total = detail::blocked_reduce<Partial>(
      trials, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        Partial p;
        for (std::uint64_t t = begin; t < end; ++t)
          p.observe(t, evaluate(random_function(n, seed, t)), c);
        return p;
      });

  ExperimentRecord rec;
  rec.experiment = "montecarlo";
  rec.n = n;
  rec.seed = seed;
  rec.trials = trials;
  rec.epsilon = epsilon;
  rec.stats["population"] = trials;
  rec.stats["mean_influence"] = total.influence.mean;
  rec.stats["var_influence"] =
      trials > 1 ? nlohmann::ordered_json(total.influence.sample_variance())
                 : nlohmann::ordered_json(nullptr);
  rec.stats["mean_entropy"] = total.entropy.mean;
  rec.stats["violation_count"] = total.violations;
  rec.stats["violation_fraction"] =
      static_cast<double>(total.violations) / static_cast<double>(trials);
  attach_theorem_bounds(rec, n, epsilon);
  rec.runtime_ms = elapsed_ms(start);
  return rec;
}

// ---------------------------------------------------------------------------

ExperimentRecord family_scan(const FamilySpec& family, double c, RunOptions opts,
                             std::uint64_t budget) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("constant C must be a positive finite number");
  const auto start = Clock::now();
  const FamilySource source(family, budget);
  const std::size_t bins = static_cast<std::size_t>(source.arity()) * 10;

  Partial total = detail::blocked_reduce<Partial>(
      source.size(), opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        Partial p;
        p.histogram.assign(bins, 0);
        for (std::uint64_t i = begin; i < end; ++i) {
          const Evaluation e = evaluate(source.at(i));
          p.observe(i, e, c);
          p.bin(e, bins);
        }
        return p;
      });
  if (total.histogram.empty()) total.histogram.assign(bins, 0);

  ExperimentRecord rec;
  rec.experiment = "scan";
  rec.n = source.arity();
  rec.family = family.to_string();
  rec.seed = family.seed;
  rec.c = c;
  const std::uint64_t population = source.size();
  rec.stats["population"] = population;
  rec.stats["max_ratio"] = nullable(total.max_ratio);
  rec.stats["argmax_id"] = total.max_ratio ? nlohmann::ordered_json(total.argmax)
                                           : nlohmann::ordered_json(nullptr);
  rec.stats["violation_count"] = total.violations;
  rec.stats["violation_fraction"] =
      population ? static_cast<double>(total.violations) /
                       static_cast<double>(population)
                 : 0.0;
  rec.histogram = Histogram{0.1, std::move(total.histogram)};
  rec.runtime_ms = elapsed_ms(start);
  return rec;
}

}  // namespace fei
