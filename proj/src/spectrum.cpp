#include "fei/spectrum.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "fei/error.hpp"

namespace fei {

namespace {

// Masks are 32-bit and the transform allocates 2^n doubles.
constexpr unsigned kHardArityLimit = 30;

unsigned initial_cap() {
  if (const char* env = std::getenv("FEI_ARITY_CAP"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1 && v <= kHardArityLimit)
      return static_cast<unsigned>(v);
  }
  return kDefaultArityCap;
}

std::atomic<unsigned>& cap_storage() {
  static std::atomic<unsigned> cap{initial_cap()};
  return cap;
}

std::size_t word_count(unsigned n) {
  return n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
}

std::uint64_t tail_mask(unsigned n) {
  return n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (1u << n)) - 1);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

unsigned arity_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_arity_cap(unsigned cap) {
  if (cap < 1 || cap > kHardArityLimit)
    throw DomainError("arity cap must be in [1, " +
                      std::to_string(kHardArityLimit) + "], got " +
                      std::to_string(cap));
  cap_storage().store(cap, std::memory_order_relaxed);
}

void check_arity(unsigned n) {
  if (n == 0) throw DomainError("arity must be at least 1");
  if (n > arity_cap())
    throw CapacityError("arity " + std::to_string(n) + " exceeds the cap " +
                        std::to_string(arity_cap()) +
                        " (raise it with FEI_ARITY_CAP)");
}

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable(unsigned n) : n_(n) {
  check_arity(n);
  words_.assign(word_count(n), 0);
}

TruthTable::TruthTable(unsigned n, std::vector<std::uint64_t> words)
    : n_(n), words_(std::move(words)) {
  check_arity(n);
  if (words_.size() != word_count(n))
    throw DomainError("packed table for n=" + std::to_string(n) + " needs " +
                      std::to_string(word_count(n)) + " words, got " +
                      std::to_string(words_.size()));
  if (words_.back() & ~tail_mask(n))
    throw DomainError("bits set beyond 2^n points");
}

TruthTable TruthTable::from_bits(unsigned n, std::uint64_t bits) {
  if (n > 6) throw DomainError("from_bits supports n <= 6");
  return TruthTable(n, std::vector<std::uint64_t>{bits & tail_mask(n)});
}

std::uint64_t TruthTable::count_negative() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool TruthTable::is_constant() const noexcept {
  const std::uint64_t neg = count_negative();
  return neg == 0 || neg == size();
}

std::string TruthTable::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::uint64_t digits = n_ >= 2 ? (size() >> 2) : 1;
  std::string out = "n=" + std::to_string(n_) + ":";
  out.reserve(out.size() + digits);
  for (std::uint64_t j = 0; j < digits; ++j) {
    const std::uint64_t bit = j * 4;
    out.push_back(kDigits[(words_[bit >> 6] >> (bit & 63)) & 0xf]);
  }
  return out;
}

TruthTable TruthTable::from_hex(std::string_view text) {
  if (text.substr(0, 2) != "n=")
    throw ParseError("truth table literal must start with \"n=\"");
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 2)
    throw ParseError("truth table literal must look like n=<arity>:<hex>");
  unsigned n = 0;
  for (char c : text.substr(2, colon - 2)) {
    if (c < '0' || c > '9' || n > 1000)
      throw ParseError("bad arity in truth table literal");
    n = n * 10 + static_cast<unsigned>(c - '0');
  }
  check_arity(n);
  const std::string_view hex = text.substr(colon + 1);
  const std::uint64_t digits =
      n >= 2 ? ((std::uint64_t{1} << n) >> 2) : 1;
  if (hex.size() != digits)
    throw ParseError("n=" + std::to_string(n) + " needs " +
                     std::to_string(digits) + " hex digits, got " +
                     std::to_string(hex.size()));
  std::vector<std::uint64_t> words(word_count(n), 0);
  for (std::uint64_t j = 0; j < digits; ++j) {
    const int v = hex_value(hex[j]);
    if (v < 0) throw ParseError("invalid hex digit in truth table literal");
    const std::uint64_t bit = j * 4;
    words[bit >> 6] |= static_cast<std::uint64_t>(v) << (bit & 63);
  }
  if (words.back() & ~tail_mask(n))
    throw ParseError("hex digit sets bits beyond 2^n points");
  return TruthTable(n, std::move(words));
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(unsigned n, std::vector<double> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
  check_arity(n);
  if (coeffs_.size() != (std::size_t{1} << n))
    throw DomainError("spectrum of arity " + std::to_string(n) + " needs " +
                      std::to_string(std::size_t{1} << n) +
                      " coefficients, got " + std::to_string(coeffs_.size()));
}

double Spectrum::squared_norm() const noexcept {
  double total = 0.0;
  for (double c : coeffs_) total += c * c;
  return total;
}

std::string Spectrum::to_csv() const {
  std::string out = "mask,coefficient\n";
  char buf[64];
  for (std::size_t s = 0; s < coeffs_.size(); ++s) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", s, coeffs_[s]);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transforms

void walsh_hadamard(std::span<double> values) noexcept {
  const std::size_t len = values.size();
  for (std::size_t half = 1; half < len; half <<= 1) {
    for (std::size_t block = 0; block < len; block += half << 1) {
      for (std::size_t j = block; j < block + half; ++j) {
        const double a = values[j];
        const double b = values[j + half];
        values[j] = a + b;
        values[j + half] = a - b;
      }
    }
  }
}

Spectrum spectrum_of(const TruthTable& tt) {
  const unsigned n = tt.arity();
  check_arity(n);
  std::vector<double> values(tt.size());
  for (std::uint64_t k = 0; k < tt.size(); ++k)
    values[k] = static_cast<double>(tt.value(k));
  walsh_hadamard(values);
  // Intermediate sums are exact integers; scale once.
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  for (double& v : values) v *= scale;
  return Spectrum(n, std::move(values));
}

double coefficient_naive(const TruthTable& tt, Mask s) {
  if (static_cast<std::uint64_t>(s) >= tt.size())
    throw DomainError("mask " + std::to_string(s) + " out of range for n=" +
                      std::to_string(tt.arity()));
  long long total = 0;
  for (std::uint64_t k = 0; k < tt.size(); ++k)
    total += tt.value(k) * character(s, k);
  return std::ldexp(static_cast<double>(total), -static_cast<int>(tt.arity()));
}

TruthTable truth_table_of(const Spectrum& spec) {
  constexpr double kTolerance = 1e-6;
  std::vector<double> values(spec.coeffs().begin(), spec.coeffs().end());
  walsh_hadamard(values);
  TruthTable tt(spec.arity());
  for (std::uint64_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (std::abs(v - 1.0) <= kTolerance) continue;
    if (std::abs(v + 1.0) <= kTolerance) {
      tt.set_negative(k, true);
      continue;
    }
    throw NotBooleanError("reconstructed value " + std::to_string(v) +
                          " at point " + std::to_string(k) +
                          " is not within 1e-6 of +/-1");
  }
  return tt;
}

}  // namespace fei
