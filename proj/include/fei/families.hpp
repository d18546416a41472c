#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fei/spectrum.hpp"

namespace fei {

/*!
 * SplitMix64 (Steele, Lea and Flood). The state advances by the golden-ratio
 * increment 0x9e3779b97f4a7c15 and each output is finalised with the
 * multipliers 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb.
 */
class SplitMix64 {
public:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  constexpr std::uint64_t operator()() noexcept {
    std::uint64_t z = (state_ += kGoldenGamma);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

/// Stream key for one trial: the first SplitMix64 output from the state
/// seed ^ (trial * golden gamma). Trials are independent of each other, so
/// any schedule produces the same functions.
constexpr std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) noexcept {
  return SplitMix64(seed ^ (trial * SplitMix64::kGoldenGamma))();
}

/// Uniform random function: packed word w of the table is output w of the
/// SplitMix64 stream keyed by trial_key(seed, trial), truncated to 2^n bits.
TruthTable random_function(unsigned n, std::uint64_t seed, std::uint64_t trial);

/// Default number of functions an enumerating family may contain.
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 20;

/// Largest arity for the symmetric family (2^{n+1} members).
inline constexpr unsigned kMaxSymmetricArity = 20;

/// Symmetric functions of n variables, one +/-1 value per Hamming weight.
/// Member `index` takes value -1 on weight w iff bit w of index is set.
class SymmetricFamily {
public:
  explicit SymmetricFamily(unsigned n);

  unsigned arity() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return std::uint64_t{2} << n_; }
  TruthTable at(std::uint64_t index) const;

private:
  unsigned n_;
};

SymmetricFamily symmetric_enumerate(unsigned n);

/// Functions of p variables (p prime) invariant under cyclic rotation of the
/// coordinates. Orbits of point indices are listed by smallest member, so
/// orbit 0 is {0} and the last orbit is {2^p - 1}; member `index` takes value
/// -1 on orbit j iff bit j of index is set.
class CyclicFamily {
public:
  explicit CyclicFamily(unsigned p);

  unsigned arity() const noexcept { return p_; }
  const std::vector<std::vector<std::uint32_t>>& orbits() const noexcept {
    return orbits_;
  }
  /// Family size is exactly 2^orbit_count().
  std::uint64_t orbit_count() const noexcept { return orbits_.size(); }
  /// Exact size, or empty when it does not fit in 64 bits.
  std::optional<std::uint64_t> size() const noexcept;

  TruthTable at(std::uint64_t index) const;
  /// Uniform member: one SplitMix64 bit per orbit keyed by (seed, trial).
  TruthTable sample(std::uint64_t seed, std::uint64_t trial) const;

private:
  TruthTable from_orbit_bits(const std::vector<bool>& negative) const;

  unsigned p_;
  std::vector<std::vector<std::uint32_t>> orbits_;
};

struct CyclicCount {
  unsigned p = 0;
  std::uint64_t orbit_count = 0;
  std::uint64_t singleton_orbits = 0;
  /// 2^orbit_count when it fits in 64 bits.
  std::optional<std::uint64_t> family_size;
};

bool is_prime(unsigned p) noexcept;

/// Orbit structure and family size without materialising any member.
CyclicCount cyclic_invariant_count(unsigned p);

/// The family, after checking its size is within `budget`.
CyclicFamily cyclic_invariant_enumerate(
    unsigned p, std::uint64_t budget = kDefaultEnumerationBudget);

// Named constructions. Logical TRUE is encoded as -1 throughout.
TruthTable parity_function(unsigned n, Mask s);
TruthTable majority_function(unsigned n);
TruthTable tribes_function(unsigned width, unsigned count);
TruthTable dictator_function(unsigned n, unsigned i);
TruthTable constant_function(unsigned n, int sign);
TruthTable and_function(unsigned n);
TruthTable or_function(unsigned n);

enum class FamilyKind { random, symmetric, cyclic_invariant, named };

/*!
 * Parsed family descriptor. Textual form is "<kind>:<params>", e.g.
 *   random:n=10,seed=42[,trials=1000]
 *   symmetric:n=8
 *   cyclic:p=5                    (enumerate)
 *   cyclic:p=11,seed=3,samples=500  (sample)
 *   named:majority,n=9
 *   named:parity,n=4[,mask=6]  named:dictator,n=3,i=0
 *   named:constant,n=3,sign=-1  named:tribes,w=2,s=3  named:and,n=3
 */
struct FamilySpec {
  FamilyKind kind = FamilyKind::named;
  unsigned arity = 0;
  std::string name;
  std::map<std::string, std::int64_t> params;
  std::optional<std::uint64_t> seed;
  /// Number of draws for random and sampled cyclic families.
  std::optional<std::uint64_t> samples;

  static FamilySpec parse(std::string_view text);
  std::string to_string() const;
};

TruthTable named_function(const FamilySpec& spec);

/// Index-addressable view over any family: enumerated members, seeded draws
/// or a single named function. Member order is the family's stable order.
class FamilySource {
public:
  explicit FamilySource(FamilySpec spec,
                        std::uint64_t budget = kDefaultEnumerationBudget);

  unsigned arity() const noexcept { return arity_; }
  std::uint64_t size() const noexcept { return size_; }
  TruthTable at(std::uint64_t index) const;
  const FamilySpec& spec() const noexcept { return spec_; }

private:
  FamilySpec spec_;
  unsigned arity_ = 0;
  std::uint64_t size_ = 0;
  std::optional<SymmetricFamily> symmetric_;
  std::optional<CyclicFamily> cyclic_;
  std::optional<TruthTable> single_;
};

}  // namespace fei
