#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symanzik {

// All arithmetic in this library is exact. Rat is GMP's canonical
// arbitrary-precision rational; no floating point appears anywhere.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "7", "-3", "3/4", "-12/5". These are the only numeric formats the
/// file formats accept; floats are rejected by construction.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw std::invalid_argument("zero denominator in rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

/// splitmix64. Deterministic across platforms, unlike the std <random>
/// distributions; every seeded run in the library goes through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi], inclusive.
  long irange(long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("Rng::irange: lo > hi");
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Strictly positive rational with numerator <= max_num, denominator <= max_den.
  Rat positive_rational(long max_num = 64, long max_den = 16) {
    long den = irange(1, max_den);
    long num = irange(1, max_num);
    return make_rat(num, den);
  }

  /// Rational in [-bound, bound] with denominator <= max_den.
  Rat bounded_rational(const Rat& bound, long max_den = 16) {
    if (sgn(bound) < 0) throw std::invalid_argument("negative bound");
    long den = irange(1, max_den);
    Rat scaled = bound * den;
    // floor(|bound|*den) limits the numerator so |num/den| <= bound exactly.
    Int hi_z;
    mpz_fdiv_q(hi_z.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    long hi = hi_z.get_si();
    long num = irange(-hi, hi);
    return make_rat(num, den);
  }

  /// Derived generator with an independent-looking stream.
  Rng fork() { return Rng(next() ^ 0x5851f42d4c957f2dull); }

 private:
  std::uint64_t state_;
};

}  // namespace symanzik
