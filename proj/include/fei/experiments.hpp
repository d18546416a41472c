#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fei/families.hpp"
#include "fei/spectrum.hpp"

namespace fei {

inline constexpr char kVersion[] = "0.1.0";

/// Largest arity exhaustive enumeration accepts without an explicit override.
inline constexpr unsigned kExhaustiveArityLimit = 4;

/// Fixed-width histogram of FEI ratios over [0, n]; ratios at or above n land
/// in the last bin.
struct Histogram {
  double bin_width = 0.1;
  std::vector<std::uint64_t> counts;

  double bin_low(std::size_t i) const { return static_cast<double>(i) / 10.0; }
  double bin_high(std::size_t i) const { return static_cast<double>(i + 1) / 10.0; }
  /// "bin_low,bin_high,count" rows with a header line.
  std::string to_csv() const;
};

/*!
 * Outcome of one experiment run. `stats` and `bounds` are flat JSON objects
 * holding only the fields the experiment computes:
 *
 *   stats:  population, mean_influence, var_influence, mean_influence_sq,
 *           mean_entropy, max_ratio, argmax_id, violation_count,
 *           violation_fraction
 *   bounds: mean_influence (n/2), var_influence (n/2^{n+1}),
 *           mean_influence_sq (n/2^{n+1} + n^2/4), chebyshev_bound,
 *           fraction_bound
 *
 * mean_entropy is empirical only; no closed form is attached to it.
 */
struct ExperimentRecord {
  std::string experiment;
  unsigned n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> c;
  std::optional<std::string> family;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  nlohmann::ordered_json bounds = nlohmann::ordered_json::object();
  std::optional<Histogram> histogram;
  double runtime_ms = 0.0;

  double stat(const std::string& key) const { return stats.at(key).get<double>(); }
  std::uint64_t count(const std::string& key) const {
    return stats.at(key).get<std::uint64_t>();
  }
};

/// runtime_ms is left out unless requested so repeated runs serialise to
/// identical bytes.
nlohmann::ordered_json to_json(const ExperimentRecord& record,
                               bool include_runtime = false);

struct RunOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Exact statistics over all 2^{2^n} functions of arity n. Violations are
/// counted for C = 2 + 2 epsilon. Throws CapacityError for n > 4 unless
/// `allow_large` is set.
ExperimentRecord exhaustive_stats(unsigned n, double epsilon,
                                  RunOptions opts = {}, bool allow_large = false);

struct FourthMomentRow {
  Mask s1 = 0;
  Mask s2 = 0;
  double enumerated = 0.0;
  double formula = 0.0;
  double abs_diff = 0.0;
};

struct FourthMomentTable {
  unsigned n = 0;
  std::vector<FourthMomentRow> rows;  // row-major over (s1, s2)
  double max_abs_diff = 0.0;
};

/// Closed form of E[f^(S1)^2 f^(S2)^2] for a uniformly random function.
double fourth_moment_formula(unsigned n, bool same_mask);

/// E[f^(S1)^2 f^(S2)^2] for every mask pair by enumerating all functions.
FourthMomentTable fourth_moment_table(unsigned n, bool allow_large = false);

nlohmann::ordered_json to_json(const FourthMomentTable& table);

/// Seeded sampling of `trials` random functions. Sample variance divides by
/// trials - 1. Identical for any thread count.
ExperimentRecord monte_carlo(unsigned n, std::uint64_t trials, std::uint64_t seed,
                             double epsilon, RunOptions opts = {});

/// 4 (1 + 1/epsilon)^2 / (2^{n+1} n); not capped at 1.
double chebyshev_bound(unsigned n, double epsilon);

/// 1 - 4 (1 + 2/delta)^2 / (2^{n+1} n); may be negative for small n.
double fraction_bound(unsigned n, double delta);

/// FEI reports over a whole family: extremal ratio with its first index,
/// violation count for `c`, and the ratio histogram.
ExperimentRecord family_scan(const FamilySpec& family, double c,
                             RunOptions opts = {},
                             std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace fei
