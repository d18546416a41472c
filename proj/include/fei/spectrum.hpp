#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fei {

inline constexpr unsigned kDefaultArityCap = 24;

/// Largest arity accepted by constructors and transforms. Initialised from
/// the FEI_ARITY_CAP environment variable when set, otherwise 24.
unsigned arity_cap();
void set_arity_cap(unsigned cap);

/// Throws CapacityError when n exceeds arity_cap(), DomainError when n == 0.
void check_arity(unsigned n);

/// Subset of coordinates {0..n-1} encoded as a bitmask.
using Mask = std::uint32_t;

/*!
 * A boolean function f : {-1,1}^n -> {-1,1} stored as 2^n packed sign bits.
 *
 * Point index k encodes an input x through its bits: bit i of k is set iff
 * x_i = -1, so index 0 is the all-(+1) point. Bit k of the table is set iff
 * f(point k) = -1.
 */
class TruthTable {
public:
  /// The constant +1 function of arity n.
  explicit TruthTable(unsigned n);

  /// Builds a table from a packed word vector; bits past 2^n must be clear.
  TruthTable(unsigned n, std::vector<std::uint64_t> words);

  /// Tables with fewer than 64 points, given as the low 2^n bits of `bits`.
  static TruthTable from_bits(unsigned n, std::uint64_t bits);

  /// Evaluates `pred(k)` for every point index; true marks f(k) = -1.
  template <class Pred>
  static TruthTable from_predicate(unsigned n, Pred&& pred) {
    TruthTable tt(n);
    for (std::uint64_t k = 0; k < tt.size(); ++k) {
      if (pred(k)) tt.set_negative(k, true);
    }
    return tt;
  }

  unsigned arity() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << n_; }

  bool is_negative(std::uint64_t k) const noexcept {
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }
  /// f(point k) as +1 or -1.
  int value(std::uint64_t k) const noexcept { return is_negative(k) ? -1 : 1; }

  void set_negative(std::uint64_t k, bool negative) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    if (negative)
      words_[k >> 6] |= bit;
    else
      words_[k >> 6] &= ~bit;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::uint64_t count_negative() const noexcept;
  bool is_constant() const noexcept;

  /// "n=<arity>:<hex>", hex digits little-endian by point index: digit j
  /// covers points 4j..4j+3 with point 4j in its least significant bit.
  std::string to_hex() const;
  static TruthTable from_hex(std::string_view text);

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
  unsigned n_;
  std::vector<std::uint64_t> words_;
};

/// Fourier coefficients indexed by subset mask.
class Spectrum {
public:
  Spectrum(unsigned n, std::vector<double> coeffs);

  unsigned arity() const noexcept { return n_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  double operator[](Mask s) const noexcept { return coeffs_[s]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// Sum of squared coefficients.
  double squared_norm() const noexcept;

  /// One "mask,coefficient" row per subset, preceded by a header line.
  std::string to_csv() const;

private:
  unsigned n_;
  std::vector<double> coeffs_;
};

/// In-place unnormalised radix-2 Walsh-Hadamard butterfly. The length must
/// be a power of two.
void walsh_hadamard(std::span<double> values) noexcept;

/// chi_S evaluated at point index k, i.e. (-1)^popcount(S & k).
inline int character(Mask s, std::uint64_t k) noexcept {
  return (__builtin_popcountll(static_cast<std::uint64_t>(s) & k) & 1) ? -1 : 1;
}

/// All 2^n coefficients via the fast transform, O(n 2^n).
Spectrum spectrum_of(const TruthTable& tt);

/// A single coefficient by direct summation over the 2^n points.
double coefficient_naive(const TruthTable& tt, Mask s);

/// Inverse transform followed by sign extraction. Throws NotBooleanError if
/// any reconstructed value is farther than 1e-6 from +/-1.
TruthTable truth_table_of(const Spectrum& spec);

}  // namespace fei
