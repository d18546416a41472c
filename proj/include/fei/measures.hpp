#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "fei/spectrum.hpp"

namespace fei {

/// Everything the entropy-influence inequality needs for one function.
struct FeiReport {
  unsigned n = 0;
  double entropy = 0.0;
  double influence_total = 0.0;
  std::vector<double> influence_per_coord;
  /// entropy / influence_total; empty for constant functions.
  std::optional<double> ratio;
  double constant_c = 0.0;
  /// entropy <= constant_c * influence_total, with 1e-9 slack.
  bool satisfies = true;
};

/// Slack used by every "H <= C * Inf" comparison.
inline constexpr double kComparisonSlack = 1e-9;
/// Total influence at or below this counts as zero (constant function).
inline constexpr double kZeroInfluence = 1e-12;

/// Throws InvalidSpectrumError unless |sum f^(S)^2 - 1| <= 1e-6.
void check_parseval(const Spectrum& spec);

/// Base-2 Shannon entropy of {f^(S)^2}, with 0 log(1/0) = 0.
double entropy(const Spectrum& spec);

/// sum_S f^(S)^2 |S|
double influence_total(const Spectrum& spec);

/// Squared Fourier mass on masks containing coordinate i.
double influence_coord(const Spectrum& spec, unsigned i);

/// All n coordinate influences in one pass.
std::vector<double> influence_vector(const Spectrum& spec);

/// Fraction of points whose value changes when coordinate i is flipped.
double influence_combinatorial(const TruthTable& tt, unsigned i);

FeiReport fei_report(const TruthTable& tt, double c);
FeiReport fei_report(const Spectrum& spec, double c);

/// Flat object: n, entropy, influence_total, influence_per_coord, ratio
/// (null when absent), constant_c, satisfies.
nlohmann::ordered_json to_json(const FeiReport& report);

}  // namespace fei
