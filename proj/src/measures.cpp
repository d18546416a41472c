#include "fei/measures.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "fei/error.hpp"

namespace fei {

namespace {

void check_coordinate(unsigned n, unsigned i) {
  if (i >= n)
    throw DomainError("coordinate " + std::to_string(i) +
                      " out of range for n=" + std::to_string(n));
}

}  // namespace

void check_parseval(const Spectrum& spec) {
  const double norm = spec.squared_norm();
  if (!(std::abs(norm - 1.0) <= 1e-6))
    throw InvalidSpectrumError("squared coefficients sum to " +
                               std::to_string(norm) + ", expected 1");
}

double entropy(const Spectrum& spec) {
  check_parseval(spec);
  double h = 0.0;
  for (double c : spec.coeffs()) {
    const double w = c * c;
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

double influence_total(const Spectrum& spec) {
  check_parseval(spec);
  const auto coeffs = spec.coeffs();
  double total = 0.0;
  for (std::size_t s = 0; s < coeffs.size(); ++s)
    total += coeffs[s] * coeffs[s] * std::popcount(static_cast<Mask>(s));
  return total;
}

double influence_coord(const Spectrum& spec, unsigned i) {
  check_coordinate(spec.arity(), i);
  check_parseval(spec);
  const auto coeffs = spec.coeffs();
  double total = 0.0;
  for (std::size_t s = 0; s < coeffs.size(); ++s)
    if ((s >> i) & 1u) total += coeffs[s] * coeffs[s];
  return total;
}

std::vector<double> influence_vector(const Spectrum& spec) {
  check_parseval(spec);
  const auto coeffs = spec.coeffs();
  std::vector<double> inf(spec.arity(), 0.0);
  for (std::size_t s = 1; s < coeffs.size(); ++s) {
    const double w = coeffs[s] * coeffs[s];
    if (w == 0.0) continue;
    for (auto bits = static_cast<Mask>(s); bits; bits &= bits - 1)
      inf[static_cast<unsigned>(std::countr_zero(bits))] += w;
  }
  return inf;
}

double influence_combinatorial(const TruthTable& tt, unsigned i) {
  check_coordinate(tt.arity(), i);
  const std::uint64_t flip = std::uint64_t{1} << i;
  std::uint64_t pivotal = 0;
  for (std::uint64_t k = 0; k < tt.size(); ++k)
    if (tt.is_negative(k) != tt.is_negative(k ^ flip)) ++pivotal;
  return static_cast<double>(pivotal) / static_cast<double>(tt.size());
}

FeiReport fei_report(const Spectrum& spec, double c) {
  if (!(c > 0.0)) throw DomainError("constant C must be positive");
  FeiReport r;
  r.n = spec.arity();
  r.constant_c = c;
  r.entropy = entropy(spec);
  r.influence_per_coord = influence_vector(spec);
  r.influence_total = influence_total(spec);
  if (r.influence_total > kZeroInfluence) {
    r.ratio = r.entropy / r.influence_total;
    r.satisfies = r.entropy <= c * r.influence_total + kComparisonSlack;
  } else {
    r.satisfies = true;
  }
  return r;
}

FeiReport fei_report(const TruthTable& tt, double c) {
  return fei_report(spectrum_of(tt), c);
}

nlohmann::ordered_json to_json(const FeiReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["entropy"] = report.entropy;
  j["influence_total"] = report.influence_total;
  j["influence_per_coord"] = report.influence_per_coord;
  j["ratio"] = report.ratio ? nlohmann::ordered_json(*report.ratio)
                            : nlohmann::ordered_json(nullptr);
  j["constant_c"] = report.constant_c;
  j["satisfies"] = report.satisfies;
  return j;
}

}  // namespace fei
