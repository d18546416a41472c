#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "fei/error.hpp"
#include "fei/families.hpp"
#include "fei/measures.hpp"
#include "oracles.hpp"

using namespace fei;

namespace {

std::uint64_t permute_point(std::uint64_t k, const std::vector<unsigned>& perm) {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < perm.size(); ++i)
    if ((k >> i) & 1u) out |= std::uint64_t{1} << perm[i];
  return out;
}

std::uint64_t rotate(std::uint64_t k, unsigned p) {
  return ((k << 1) | (k >> (p - 1))) & ((std::uint64_t{1} << p) - 1);
}

bool rotation_invariant(const TruthTable& tt) {
  const unsigned p = tt.arity();
  for (std::uint64_t k = 0; k < tt.size(); ++k)
    if (tt.is_negative(k) != tt.is_negative(rotate(k, p))) return false;
  return true;
}

}  // namespace

TEST_CASE("SplitMix64 matches the reference sequence") {
  // Published first outputs of splitmix64 seeded with 0.
  SplitMix64 gen(0);
  CHECK(gen() == 0xe220a8397b1dcdafull);
  CHECK(gen() == 0x6e789e6aa1b965f4ull);
  CHECK(gen() == 0x06c45d188009454full);

  std::uint64_t ref = 12345;
  SplitMix64 mine(12345);
  for (int i = 0; i < 100; ++i) CHECK(mine() == oracle::splitmix64(ref));
}

TEST_CASE("random_function") {
  SUBCASE("first 16 bits for seed 0, trial 0") {
    std::uint64_t state = 0;
    std::uint64_t key = oracle::splitmix64(state);
    const std::uint64_t word = oracle::splitmix64(key);
    CHECK((word & 0xffff) == 0x7e6f);
    const auto tt = random_function(4, 0, 0);
    CHECK(tt.words()[0] == 0x7e6f);
    CHECK(tt.to_hex() == "n=4:f6e7");
  }
  SUBCASE("deterministic per (n, seed, trial)") {
    for (unsigned n : {1u, 5u, 6u, 11u}) {
      CHECK(random_function(n, 42, 7) == random_function(n, 42, 7));
      CHECK_FALSE(random_function(n + 6, 42, 7) == random_function(n + 6, 42, 8));
    }
  }
  SUBCASE("larger tables consume consecutive stream words") {
    std::uint64_t state = 9 ^ (3 * 0x9e3779b97f4a7c15ull);
    std::uint64_t key = oracle::splitmix64(state);
    const auto tt = random_function(8, 9, 3);
    for (int w = 0; w < 4; ++w) CHECK(tt.words()[static_cast<std::size_t>(w)] == oracle::splitmix64(key));
  }
  SUBCASE("each point is -1 with probability 1/2") {
    constexpr std::uint64_t trials = 100000;
    std::vector<std::uint64_t> ones(256, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
      const auto tt = random_function(8, 1, t);
      for (std::uint64_t k = 0; k < 256; ++k) ones[k] += tt.value(k) == 1;
    }
    for (auto c : ones) {
      const double p = static_cast<double>(c) / trials;
      CHECK(p >= 0.49);
      CHECK(p <= 0.51);
    }
  }
}

TEST_CASE("symmetric family") {
  CHECK(symmetric_enumerate(3).size() == 16);
  SUBCASE("n=1 is every 1-variable function") {
    const auto fam = symmetric_enumerate(1);
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < fam.size(); ++i) seen.insert(fam.at(i).words()[0]);
    CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3});
  }
  SUBCASE("no duplicates, exact count") {
    for (unsigned n = 1; n <= 8; ++n) {
      const auto fam = symmetric_enumerate(n);
      std::set<std::string> seen;
      for (std::uint64_t i = 0; i < fam.size(); ++i) seen.insert(fam.at(i).to_hex());
      CHECK(seen.size() == (std::uint64_t{2} << n));
    }
  }
  SUBCASE("invariant under random coordinate permutations") {
    std::mt19937_64 rng(5);
    const auto fam = symmetric_enumerate(6);
    for (std::uint64_t i = 0; i < fam.size(); i += 7) {
      const auto tt = fam.at(i);
      std::vector<unsigned> perm(6);
      std::iota(perm.begin(), perm.end(), 0u);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::uint64_t k = 0; k < tt.size(); ++k)
        CHECK(tt.is_negative(k) == tt.is_negative(permute_point(k, perm)));
    }
  }
  SUBCASE("contains MAJ_3") {
    // -1 on weights 2 and 3.
    CHECK(symmetric_enumerate(3).at(0b1100) == majority_function(3));
  }
  CHECK_THROWS_AS(symmetric_enumerate(21), CapacityError);
}

TEST_CASE("cyclic-invariant family") {
  SUBCASE("counts follow 2^((2^p - 2)/p + 2)") {
    CHECK(cyclic_invariant_count(3).orbit_count == 4);
    CHECK(*cyclic_invariant_count(3).family_size == 16);
    CHECK(cyclic_invariant_count(5).orbit_count == 8);
    CHECK(*cyclic_invariant_count(5).family_size == 256);
    CHECK(*cyclic_invariant_count(7).family_size == (1u << 20));
    const auto big = cyclic_invariant_count(13);
    CHECK(big.orbit_count == (8192 - 2) / 13 + 2);
    CHECK_FALSE(big.family_size);
  }
  SUBCASE("orbit structure") {
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u}) {
      const CyclicFamily fam(p);
      std::size_t singles = 0;
      std::uint64_t covered = 0;
      for (const auto& o : fam.orbits()) {
        covered += o.size();
        if (o.size() == 1) ++singles;
        else CHECK(o.size() == p);
      }
      CHECK(singles == 2);
      CHECK(covered == (std::uint64_t{1} << p));
      CHECK(fam.orbits().front() == std::vector<std::uint32_t>{0});
      CHECK(fam.orbits().back() == std::vector<std::uint32_t>{(1u << p) - 1});
    }
  }
  SUBCASE("enumeration: distinct and invariant") {
    for (unsigned p : {3u, 5u}) {
      const auto fam = cyclic_invariant_enumerate(p);
      std::set<std::string> seen;
      for (std::uint64_t i = 0; i < *fam.size(); ++i) {
        const auto tt = fam.at(i);
        CHECK(rotation_invariant(tt));
        seen.insert(tt.to_hex());
      }
      CHECK(seen.size() == *fam.size());
    }
  }
  SUBCASE("sampling stays in the family") {
    const CyclicFamily fam(11);
    for (std::uint64_t t = 0; t < 20; ++t) {
      CHECK(rotation_invariant(fam.sample(3, t)));
      CHECK(fam.sample(3, t) == fam.sample(3, t));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(cyclic_invariant_count(4), DomainError);
    CHECK_THROWS_AS(cyclic_invariant_count(1), DomainError);
    CHECK_THROWS_AS(cyclic_invariant_enumerate(11), CapacityError);
    CHECK_THROWS_AS(cyclic_invariant_enumerate(7, 1000), CapacityError);
  }
}

TEST_CASE("named functions") {
  SUBCASE("majority(3) spectrum") {
    const auto tt = majority_function(3);
    for (Mask s = 0; s < 8; ++s) {
      const double expected = (s == 1 || s == 2 || s == 4) ? 0.5 : (s == 7 ? -0.5 : 0.0);
      CHECK(oracle::coefficient(tt, s) == expected);
    }
  }
  SUBCASE("parity over {1,2} is x1 * x2") {
    const auto tt = parity_function(3, 0b011);
    for (std::uint64_t k = 0; k < 8; ++k)
      CHECK(tt.value(k) == oracle::coordinate(k, 0) * oracle::coordinate(k, 1));
  }
  SUBCASE("dictator(0) influence vector") {
    const auto inf = influence_vector(spectrum_of(dictator_function(4, 0)));
    CHECK(inf == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  }
  SUBCASE("TRUE is -1") {
    CHECK(and_function(2).value(3) == -1);
    CHECK(and_function(2).count_negative() == 1);
    CHECK(or_function(2).value(0) == 1);
    CHECK(or_function(2).count_negative() == 3);
    const auto tribes = tribes_function(2, 2);
    CHECK(tribes.arity() == 4);
    CHECK(tribes.value(0b0011) == -1);
    CHECK(tribes.value(0b1100) == -1);
    CHECK(tribes.value(0b0101) == 1);
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(majority_function(4), DomainError);
    CHECK_THROWS_AS(dictator_function(3, 3), DomainError);
    CHECK_THROWS_AS(constant_function(3, 0), DomainError);
    CHECK_THROWS_AS(named_function(FamilySpec::parse("named:tribes,w=2,s=3,n=5")), DomainError);
    CHECK_THROWS_AS(named_function(FamilySpec::parse("named:frobnicate,n=3")), DomainError);
  }
}

TEST_CASE("FamilySpec parsing") {
  const auto r = FamilySpec::parse("random:n=10,seed=42");
  CHECK(r.kind == FamilyKind::random);
  CHECK(r.arity == 10);
  CHECK(*r.seed == 42);
  CHECK(FamilySpec::parse("symmetric:n=8").kind == FamilyKind::symmetric);
  const auto c = FamilySpec::parse("cyclic:p=5");
  CHECK(c.kind == FamilyKind::cyclic_invariant);
  CHECK(c.arity == 5);
  const auto m = FamilySpec::parse("named:majority,n=9");
  CHECK(m.name == "majority");
  CHECK(named_function(m) == majority_function(9));
  CHECK(named_function(FamilySpec::parse("named:tribes,w=2,s=3")) == tribes_function(2, 3));
  CHECK(named_function(FamilySpec::parse("named:parity,n=4,mask=6")) == parity_function(4, 6));
  CHECK(named_function(FamilySpec::parse("named:constant,n=3,sign=-1")) == constant_function(3, -1));

  for (const char* text : {"random:n=10,seed=42,trials=1000", "symmetric:n=8", "cyclic:p=5",
                           "cyclic:p=11,seed=3,samples=50", "named:majority,n=9"})
    CHECK(FamilySpec::parse(text).to_string() == text);

  for (const char* bad : {"random:n=10", "bogus:n=3", "symmetric", "symmetric:n=x",
                          "named:n=3", "cyclic:p=5,seed=1", "symmetric:n=3,mask=1"})
    CHECK_THROWS_AS(FamilySpec::parse(bad), ParseError);
}

TEST_CASE("FamilySource addresses members in family order") {
  const FamilySource sym(FamilySpec::parse("symmetric:n=4"));
  CHECK(sym.size() == 32);
  CHECK(sym.at(5) == symmetric_enumerate(4).at(5));
  const FamilySource rnd(FamilySpec::parse("random:n=6,seed=8,trials=10"));
  CHECK(rnd.size() == 10);
  CHECK(rnd.at(4) == random_function(6, 8, 4));
  const FamilySource one(FamilySpec::parse("named:or,n=3"));
  CHECK(one.size() == 1);
  CHECK_THROWS_AS(FamilySource(FamilySpec::parse("cyclic:p=11")), CapacityError);
}
