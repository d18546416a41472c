#include "fei/families.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <string>

#include "fei/error.hpp"

namespace fei {

namespace {

std::uint32_t rotate_left(std::uint32_t k, unsigned p) {
  const std::uint32_t all = (std::uint32_t{1} << p) - 1;
  return ((k << 1) | (k >> (p - 1))) & all;
}

std::int64_t parse_int(std::string_view key, std::string_view value) {
  std::int64_t out = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty())
    throw ParseError("family parameter " + std::string(key) +
                     " expects an integer, got \"" + std::string(value) + "\"");
  return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty())
    throw ParseError("family parameter " + std::string(key) +
                     " expects a non-negative integer, got \"" +
                     std::string(value) + "\"");
  return out;
}

unsigned small_uint(std::string_view key, std::int64_t v) {
  if (v < 0 || v > 64)
    throw DomainError("family parameter " + std::string(key) +
                      " out of range: " + std::to_string(v));
  return static_cast<unsigned>(v);
}

const char* kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::random: return "random";
    case FamilyKind::symmetric: return "symmetric";
    case FamilyKind::cyclic_invariant: return "cyclic";
    case FamilyKind::named: return "named";
  }
  return "?";
}

}  // namespace

// ---------------------------------------------------------------------------
// Random functions

TruthTable random_function(unsigned n, std::uint64_t seed, std::uint64_t trial) {
  check_arity(n);
  SplitMix64 stream(trial_key(seed, trial));
  const std::size_t words = n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
  std::vector<std::uint64_t> packed(words);
  for (auto& w : packed) w = stream();
  if (n < 6) packed[0] &= (std::uint64_t{1} << (1u << n)) - 1;
  return TruthTable(n, std::move(packed));
}

// ---------------------------------------------------------------------------
// Symmetric family

SymmetricFamily::SymmetricFamily(unsigned n) : n_(n) {
  check_arity(n);
  if (n > kMaxSymmetricArity)
    throw CapacityError("symmetric family supports n <= " +
                        std::to_string(kMaxSymmetricArity));
}

TruthTable SymmetricFamily::at(std::uint64_t index) const {
  if (index >= size())
    throw DomainError("symmetric member " + std::to_string(index) +
                      " out of range");
  return TruthTable::from_predicate(n_, [index](std::uint64_t k) {
    return ((index >> std::popcount(k)) & 1u) != 0;
  });
}

SymmetricFamily symmetric_enumerate(unsigned n) { return SymmetricFamily(n); }

// ---------------------------------------------------------------------------
// Cyclic-invariant family

bool is_prime(unsigned p) noexcept {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

CyclicFamily::CyclicFamily(unsigned p) : p_(p) {
  if (!is_prime(p))
    throw DomainError("cyclic-invariant family requires prime p, got " +
                      std::to_string(p));
  check_arity(p);
  const std::uint32_t points = std::uint32_t{1} << p;
  std::vector<bool> seen(points, false);
  for (std::uint32_t k = 0; k < points; ++k) {
    if (seen[k]) continue;
    std::vector<std::uint32_t> orbit;
    for (std::uint32_t r = k; !seen[r]; r = rotate_left(r, p)) {
      seen[r] = true;
      orbit.push_back(r);
    }
    std::sort(orbit.begin(), orbit.end());
    orbits_.push_back(std::move(orbit));
  }
}

std::optional<std::uint64_t> CyclicFamily::size() const noexcept {
  if (orbits_.size() >= 64) return std::nullopt;
  return std::uint64_t{1} << orbits_.size();
}

TruthTable CyclicFamily::from_orbit_bits(const std::vector<bool>& negative) const {
  TruthTable tt(p_);
  for (std::size_t j = 0; j < orbits_.size(); ++j) {
    if (!negative[j]) continue;
    for (auto k : orbits_[j]) tt.set_negative(k, true);
  }
  return tt;
}

TruthTable CyclicFamily::at(std::uint64_t index) const {
  const auto total = size();
  if (!total || index >= *total)
    throw DomainError("cyclic member " + std::to_string(index) +
                      " out of range");
  std::vector<bool> negative(orbits_.size());
  for (std::size_t j = 0; j < orbits_.size(); ++j)
    negative[j] = (index >> j) & 1u;
  return from_orbit_bits(negative);
}

TruthTable CyclicFamily::sample(std::uint64_t seed, std::uint64_t trial) const {
  SplitMix64 stream(trial_key(seed, trial));
  std::vector<bool> negative(orbits_.size());
  std::uint64_t word = 0;
  for (std::size_t j = 0; j < orbits_.size(); ++j) {
    if (j % 64 == 0) word = stream();
    negative[j] = (word >> (j % 64)) & 1u;
  }
  return from_orbit_bits(negative);
}

CyclicCount cyclic_invariant_count(unsigned p) {
  const CyclicFamily family(p);
  CyclicCount out;
  out.p = p;
  out.orbit_count = family.orbit_count();
  out.singleton_orbits = static_cast<std::uint64_t>(
      std::count_if(family.orbits().begin(), family.orbits().end(),
                    [](const auto& o) { return o.size() == 1; }));
  out.family_size = family.size();
  return out;
}

CyclicFamily cyclic_invariant_enumerate(unsigned p, std::uint64_t budget) {
  CyclicFamily family(p);
  const auto total = family.size();
  if (!total || *total > budget)
    throw CapacityError(
        "cyclic family for p=" + std::to_string(p) + " has 2^" +
        std::to_string(family.orbit_count()) +
        " members, above the enumeration budget " + std::to_string(budget) +
        "; use count or sample mode");
  return family;
}

// ---------------------------------------------------------------------------
// Named functions

TruthTable parity_function(unsigned n, Mask s) {
  check_arity(n);
  if (static_cast<std::uint64_t>(s) >= (std::uint64_t{1} << n))
    throw DomainError("parity mask out of range for n=" + std::to_string(n));
  return TruthTable::from_predicate(
      n, [s](std::uint64_t k) { return character(s, k) < 0; });
}

TruthTable majority_function(unsigned n) {
  if (n % 2 == 0) throw DomainError("majority requires odd arity");
  return TruthTable::from_predicate(n, [n](std::uint64_t k) {
    return static_cast<unsigned>(std::popcount(k)) > n / 2;
  });
}

TruthTable tribes_function(unsigned width, unsigned count) {
  if (width == 0 || count == 0)
    throw DomainError("tribes requires positive width and count");
  const unsigned n = width * count;
  check_arity(n);
  const std::uint64_t tribe = (std::uint64_t{1} << width) - 1;
  return TruthTable::from_predicate(n, [=](std::uint64_t k) {
    for (unsigned t = 0; t < count; ++t) {
      const std::uint64_t m = tribe << (t * width);
      if ((k & m) == m) return true;
    }
    return false;
  });
}

TruthTable dictator_function(unsigned n, unsigned i) {
  check_arity(n);
  if (i >= n) throw DomainError("dictator coordinate out of range");
  return TruthTable::from_predicate(
      n, [i](std::uint64_t k) { return ((k >> i) & 1u) != 0; });
}

TruthTable constant_function(unsigned n, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("constant sign must be +1 or -1");
  return TruthTable::from_predicate(n, [sign](std::uint64_t) { return sign < 0; });
}

TruthTable and_function(unsigned n) {
  check_arity(n);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  return TruthTable::from_predicate(n, [all](std::uint64_t k) { return k == all; });
}

TruthTable or_function(unsigned n) {
  return TruthTable::from_predicate(n, [](std::uint64_t k) { return k != 0; });
}

// ---------------------------------------------------------------------------
// FamilySpec

FamilySpec FamilySpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("family must look like <kind>:<params>, got \"" +
                     std::string(text) + "\"");
  FamilySpec spec;
  const std::string_view kind = text.substr(0, colon);
  if (kind == "random")
    spec.kind = FamilyKind::random;
  else if (kind == "symmetric")
    spec.kind = FamilyKind::symmetric;
  else if (kind == "cyclic" || kind == "cyclic_invariant")
    spec.kind = FamilyKind::cyclic_invariant;
  else if (kind == "named")
    spec.kind = FamilyKind::named;
  else
    throw ParseError("unknown family kind \"" + std::string(kind) + "\"");

  std::optional<unsigned> arity;
  std::string_view rest = text.substr(colon + 1);
  bool first = true;
  while (!rest.empty() || first) {
    const auto comma = rest.find(',');
    const std::string_view token = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{}
                                           : rest.substr(comma + 1);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      if (first && spec.kind == FamilyKind::named && !token.empty()) {
        spec.name = std::string(token);
        first = false;
        continue;
      }
      throw ParseError("expected key=value in family string, got \"" +
                       std::string(token) + "\"");
    }
    first = false;
    const std::string_view key = token.substr(0, eq);
    const std::string_view value = token.substr(eq + 1);
    if (key == "n" || key == "p") {
      arity = small_uint(key, parse_int(key, value));
    } else if (key == "seed") {
      spec.seed = parse_uint(key, value);
    } else if (key == "trials" || key == "samples") {
      spec.samples = parse_uint(key, value);
    } else if (spec.kind == FamilyKind::named &&
               (key == "mask" || key == "i" || key == "sign" || key == "w" ||
                key == "s")) {
      spec.params[std::string(key)] = parse_int(key, value);
    } else {
      throw ParseError("unknown family parameter \"" + std::string(key) + "\"");
    }
  }

  switch (spec.kind) {
    case FamilyKind::random:
      if (!arity || !spec.seed)
        throw ParseError("random family needs n and seed");
      if (!spec.samples) spec.samples = 1000;
      break;
    case FamilyKind::symmetric:
      if (!arity) throw ParseError("symmetric family needs n");
      break;
    case FamilyKind::cyclic_invariant:
      if (!arity) throw ParseError("cyclic family needs p");
      if (spec.samples.has_value() != spec.seed.has_value())
        throw ParseError("cyclic sampling needs both seed and samples");
      break;
    case FamilyKind::named:
      if (spec.name.empty()) throw ParseError("named family needs a name");
      if (spec.name == "tribes") {
        const auto w = spec.params.find("w");
        const auto s = spec.params.find("s");
        if (w == spec.params.end() || s == spec.params.end())
          throw ParseError("tribes needs w and s");
        const unsigned n = small_uint("w", w->second) * small_uint("s", s->second);
        if (arity && *arity != n) throw DomainError("tribes requires w*s = n");
        arity = n;
      }
      if (!arity) throw ParseError("named family needs n");
      break;
  }
  spec.arity = *arity;
  return spec;
}

std::string FamilySpec::to_string() const {
  std::string out = kind_name(kind);
  out += ':';
  if (kind == FamilyKind::named) out += name + ',';
  out += (kind == FamilyKind::cyclic_invariant ? "p=" : "n=") +
         std::to_string(arity);
  for (const auto& [k, v] : params) out += "," + k + "=" + std::to_string(v);
  if (seed) out += ",seed=" + std::to_string(*seed);
  if (samples)
    out += (kind == FamilyKind::random ? ",trials=" : ",samples=") +
           std::to_string(*samples);
  return out;
}

TruthTable named_function(const FamilySpec& spec) {
  if (spec.kind != FamilyKind::named)
    throw DomainError("named_function needs a named family spec");
  const auto param = [&](const char* key) -> std::optional<std::int64_t> {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) return std::nullopt;
    return it->second;
  };
  const unsigned n = spec.arity;
  const std::string& name = spec.name;
  if (name == "parity") {
    check_arity(n);
    const std::int64_t full = (std::int64_t{1} << n) - 1;
    const std::int64_t mask = param("mask").value_or(full);
    if (mask < 0 || mask > full) throw DomainError("parity mask out of range");
    return parity_function(n, static_cast<Mask>(mask));
  }
  if (name == "majority") return majority_function(n);
  if (name == "tribes")
    return tribes_function(small_uint("w", *param("w")),
                           small_uint("s", *param("s")));
  if (name == "dictator") {
    const std::int64_t i = param("i").value_or(0);
    if (i < 0) throw DomainError("dictator coordinate out of range");
    return dictator_function(n, static_cast<unsigned>(std::min<std::int64_t>(i, 64)));
  }
  if (name == "constant") {
    const std::int64_t sign = param("sign").value_or(1);
    if (sign != 1 && sign != -1)
      throw DomainError("constant sign must be +1 or -1");
    return constant_function(n, static_cast<int>(sign));
  }
  if (name == "and") return and_function(n);
  if (name == "or") return or_function(n);
  throw DomainError("unknown named function \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// FamilySource

FamilySource::FamilySource(FamilySpec spec, std::uint64_t budget)
    : spec_(std::move(spec)), arity_(spec_.arity) {
  switch (spec_.kind) {
    case FamilyKind::random:
      check_arity(arity_);
      if (!spec_.seed) throw DomainError("random family needs a seed");
      size_ = spec_.samples.value_or(1000);
      break;
    case FamilyKind::symmetric:
      symmetric_.emplace(arity_);
      size_ = symmetric_->size();
      break;
    case FamilyKind::cyclic_invariant:
      if (spec_.samples) {
        if (!spec_.seed) throw DomainError("cyclic sampling needs a seed");
        cyclic_.emplace(arity_);
        size_ = *spec_.samples;
      } else {
        cyclic_.emplace(cyclic_invariant_enumerate(arity_, budget));
        size_ = *cyclic_->size();
      }
      break;
    case FamilyKind::named:
      single_.emplace(named_function(spec_));
      size_ = 1;
      break;
  }
}

TruthTable FamilySource::at(std::uint64_t index) const {
  if (index >= size_)
    throw DomainError("family member " + std::to_string(index) + " out of range");
  switch (spec_.kind) {
    case FamilyKind::random:
      return random_function(arity_, *spec_.seed, index);
    case FamilyKind::symmetric:
      return symmetric_->at(index);
    case FamilyKind::cyclic_invariant:
      return spec_.samples ? cyclic_->sample(*spec_.seed, index)
                           : cyclic_->at(index);
    case FamilyKind::named:
      break;
  }
  return *single_;
}

}  // namespace fei
