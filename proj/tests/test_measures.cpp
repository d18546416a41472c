#include <doctest.h>

#include <cmath>
#include <random>

#include "fei/error.hpp"
#include "fei/families.hpp"
#include "fei/measures.hpp"
#include "oracles.hpp"

using namespace fei;

namespace {

// Coefficients (1/2, 1/2, 1/2, -1/2): -1 only where both inputs are -1.
TruthTable or_type() { return truth_table_of(Spectrum(2, {0.5, 0.5, 0.5, -0.5})); }

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy(spectrum_of(parity_function(3, 7))) == 0.0);
  SUBCASE("OR-type function: four atoms of mass 1/4") {
    const std::vector<double> coeffs{0.5, 0.5, 0.5, -0.5};
    CHECK(oracle::entropy(coeffs) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(entropy(Spectrum(2, coeffs)) == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("MAJ_3") {
    const auto tt = majority_function(3);
    CHECK(oracle::entropy(oracle::spectrum(tt)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(entropy(spectrum_of(tt)) == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("Parseval violation") {
    CHECK_THROWS_AS(entropy(Spectrum(1, {0.5, 0.5})), InvalidSpectrumError);
    CHECK_THROWS_AS(influence_total(Spectrum(1, {1.0, 1.0})), InvalidSpectrumError);
  }
}

TEST_CASE("influence") {
  CHECK(influence_total(spectrum_of(parity_function(3, 7))) == 3.0);
  CHECK(influence_total(spectrum_of(constant_function(5, -1))) == 0.0);
  CHECK(influence_total(spectrum_of(majority_function(3))) == doctest::Approx(1.5));

  const auto dict = spectrum_of(dictator_function(2, 0));
  CHECK(influence_coord(dict, 0) == 1.0);
  CHECK(influence_coord(dict, 1) == 0.0);
  for (unsigned i = 0; i < 3; ++i) {
    CHECK(influence_coord(spectrum_of(majority_function(3)), i) == doctest::Approx(0.5));
    CHECK(influence_coord(spectrum_of(parity_function(3, 7)), i) == 1.0);
  }
  CHECK_THROWS_AS(influence_coord(dict, 2), DomainError);
}

TEST_CASE("influence_combinatorial") {
  CHECK(influence_combinatorial(dictator_function(1, 0), 0) == 1.0);
  CHECK(influence_combinatorial(TruthTable(4), 2) == 0.0);
  for (unsigned i = 0; i < 3; ++i) {
    CHECK(influence_combinatorial(majority_function(3), i) == 0.5);
    CHECK(oracle::pivotal_fraction(majority_function(3), i) == 0.5);
  }
  CHECK_THROWS_AS(influence_combinatorial(TruthTable(3), 3), DomainError);
}

TEST_CASE("spectral and combinatorial influence agree") {
  SUBCASE("every function with n <= 3") {
    for (unsigned n = 1; n <= 3; ++n) {
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (1u << n)); ++bits) {
        const auto tt = TruthTable::from_bits(n, bits);
        const auto spec = spectrum_of(tt);
        for (unsigned i = 0; i < n; ++i)
          CHECK(std::abs(influence_coord(spec, i) - influence_combinatorial(tt, i)) <= 1e-9);
      }
    }
  }
  SUBCASE("1000 seeded functions at n=10") {
    for (std::uint64_t t = 0; t < 1000; ++t) {
      const auto tt = random_function(10, 5, t);
      const auto spec = spectrum_of(tt);
      const auto vec = influence_vector(spec);
      for (unsigned i = 0; i < 10; ++i) {
        REQUIRE(std::abs(influence_coord(spec, i) - influence_combinatorial(tt, i)) <= 1e-9);
        REQUIRE(std::abs(vec[i] - oracle::pivotal_fraction(tt, i)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("fei_report") {
  SUBCASE("MAJ_3 at C=2") {
    const auto r = fei_report(majority_function(3), 2.0);
    CHECK(r.n == 3);
    CHECK(r.entropy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.influence_total == doctest::Approx(1.5).epsilon(1e-12));
    REQUIRE(r.ratio);
    CHECK(*r.ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(r.satisfies);
    CHECK(r.influence_per_coord.size() == 3);
  }
  SUBCASE("parity passes any C") {
    const auto r = fei_report(parity_function(4, 15), 0.1);
    CHECK(r.entropy == 0.0);
    CHECK(r.satisfies);
  }
  SUBCASE("OR-type sits exactly on the boundary at C=2") {
    const auto r = fei_report(or_type(), 2.0);
    CHECK(*r.ratio == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.satisfies);
    CHECK_FALSE(fei_report(or_type(), 1.9).satisfies);
  }
  SUBCASE("constant functions: ratio absent, vacuously satisfied") {
    for (int sign : {1, -1}) {
      const auto r = fei_report(constant_function(3, sign), 0.5);
      CHECK_FALSE(r.ratio);
      CHECK(r.satisfies);
      CHECK(to_json(r)["ratio"].is_null());
    }
  }
  SUBCASE("C must be positive") {
    CHECK_THROWS_AS(fei_report(TruthTable(2), 0.0), DomainError);
  }
}

TEST_CASE("report invariants on random functions") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 11);
    const auto tt = random_function(n, rng(), static_cast<std::uint64_t>(trial));
    const double c1 = 0.05 + static_cast<double>(rng() % 1000) / 100.0;
    const auto r = fei_report(tt, c1);
    CHECK(r.entropy >= 0.0);
    CHECK(r.entropy <= n + 1e-9);
    CHECK(r.influence_total >= 0.0);
    CHECK(r.influence_total <= n + 1e-9);
    double sum = 0.0;
    for (double v : r.influence_per_coord) sum += v;
    CHECK(std::abs(sum - r.influence_total) <= 1e-9);
    CHECK(r.ratio.has_value() == !tt.is_constant());
    if (r.satisfies) CHECK(fei_report(tt, c1 * 1.5).satisfies);
  }
}

TEST_CASE("report JSON has exactly the documented fields") {
  const auto j = to_json(fei_report(majority_function(3), 2.0));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"n", "entropy", "influence_total",
                                         "influence_per_coord", "ratio",
                                         "constant_c", "satisfies"});
}
