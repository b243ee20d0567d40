#pragma once

// Test-side generators, a minimal property runner and independent oracles.
// Nothing here calls the code under test to compute an expected value.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "exact_arith.hpp"
#include "poly.hpp"

namespace svtest {

using namespace semival;

inline std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("SEMIVAL_TEST_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed = seed_from_env()) : rng(seed) {}

  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  bool coin() { return range(0, 1) == 1; }

  Int big(unsigned bits) {
    Int out = 0;
    for (unsigned b = 0; b < bits; b += 16) out = (out << 16) + static_cast<long>(rng() & 0xffff);
    return coin() ? Int(-out) : out;
  }

  Dyadic dyadic(long num_bound = 1000, unsigned max_exp = 12) {
    return Dyadic(Int(range(-num_bound, num_bound)), static_cast<std::uint64_t>(range(0, max_exp)));
  }

  QuadReal quad(long num_bound = 1000, unsigned max_exp = 12) {
    return {dyadic(num_bound, max_exp), range(0, 3) == 0 ? Dyadic(0L) : dyadic(num_bound, max_exp)};
  }

  LexVec lexvec(std::size_t rank, long bound = 6) {
    std::vector<QuadReal> c;
    for (std::size_t i = 0; i < rank; ++i) c.push_back(QuadReal(dyadic(bound, 2)));
    return LexVec(c);
  }

  Rat coeff() {
    long num = 0;
    while (num == 0) num = range(-9, 9);
    Rat r(num, static_cast<unsigned long>(range(1, 3)));
    r.canonicalize();
    return r;
  }

  // Random nonzero polynomial in the given variables; deg of lead <= max_lead.
  MPoly poly(const std::vector<Var>& vars, Var lead, std::uint64_t max_lead, std::uint64_t max_other,
             std::size_t max_terms, long zlo = -5, long zhi = 5) {
    MPoly f;
    while (f.is_zero()) {
      const auto n = static_cast<std::size_t>(range(1, static_cast<long>(max_terms)));
      for (std::size_t k = 0; k < n && f.term_count() < max_terms; ++k) {
        Monomial m;
        for (Var v : vars) m[v] = static_cast<std::uint64_t>(range(0, static_cast<long>(v == lead ? max_lead : max_other)));
        f += MPoly::term(coeff(), m, range(zlo, zhi));
      }
      // Adding terms may cancel; trim to the cap.
      while (f.term_count() > max_terms) f -= MPoly::term(f.terms().begin()->second, f.terms().begin()->first.mono,
                                                          f.terms().begin()->first.zexp);
    }
    return f;
  }
};

// Polynomials one term smaller, for shrinking counterexamples.
inline std::vector<MPoly> shrink_poly(const MPoly& f) {
  std::vector<MPoly> out;
  if (f.term_count() <= 1) return out;
  for (const auto& [k, c] : f.terms()) out.push_back(f - MPoly::term(c, k.mono, k.zexp));
  return out;
}

// Runs prop on `trials` generated values; on failure shrinks greedily and
// returns a description of the smallest counterexample found.
template <class T>
std::optional<std::string> for_all(std::size_t trials, const std::function<T()>& gen,
                                   const std::function<bool(const T&)>& prop,
                                   const std::function<std::vector<T>(const T&)>& shrink,
                                   const std::function<std::string(const T&)>& show) {
  for (std::size_t t = 0; t < trials; ++t) {
    T value = gen();
    if (prop(value)) continue;
    for (bool progress = true; progress;) {
      progress = false;
      for (const T& smaller : shrink(value)) {
        if (!prop(smaller)) {
          value = smaller;
          progress = true;
          break;
        }
      }
    }
    std::ostringstream msg;
    msg << "trial " << t << " seed " << seed_from_env() << ": " << show(value);
    return msg.str();
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- oracles

// Sign of p + q*sqrt2 by high precision floating evaluation. Exact when the
// value is zero (p = q = 0), otherwise far from any rounding trouble for
// the bounded inputs the tests use.
inline int oracle_sign(const QuadReal& v) {
  if (v.is_zero()) return 0;
  const mp_bitcnt_t bits = 2048;
  mpf_class p(v.rat_part().to_rat(), bits), q(v.surd_part().to_rat(), bits), r(2, bits);
  r = sqrt(r);
  mpf_class s(p + q * r, bits);
  return sgn(s);
}

inline int oracle_cmp(const QuadReal& a, const QuadReal& b) { return oracle_sign(a - b); }

// Dyadic text without the library: m / 2^k reduced by hand.
inline Rat oracle_rat(const Dyadic& d) {
  Rat r(d.mantissa(), 1);
  for (std::uint64_t k = 0; k < d.exponent(); ++k) r /= 2;
  return r;
}

// (1/3)(2^(i+2) - 1/2^i) as a rational.
inline Rat oracle_eta(std::size_t i) {
  Rat two_i(1);
  for (std::size_t k = 0; k < i; ++k) two_i *= 2;
  return (Rat(4) * two_i - Rat(1) / two_i) / 3;
}

// Sum of n^r for 1 <= n < y by direct looping.
inline Int oracle_powersum(long y, unsigned r) {
  Int s = 0;
  for (long n = 1; n < y; ++n) {
    Int p = 1;
    for (unsigned k = 0; k < r; ++k) p *= n;
    s += p;
  }
  return s;
}

// Number of monomials in d variables of total degree < y, by enumeration.
inline long oracle_monomials_below(unsigned d, long y) {
  std::vector<long> e(d, 0);
  long count = 0;
  std::function<void(unsigned, long)> rec = [&](unsigned k, long left) {
    if (k == d) {
      ++count;
      return;
    }
    for (long a = 0; a <= left; ++a) rec(k + 1, left - a);
  };
  if (y <= 0) return 0;
  rec(0, y - 1);
  return count;
}

// Members of the staircase S in the unit block [n, n+1[, by scanning a grid
// one binary digit finer than needed and testing each point against the
// definition: q >= 1 belongs to S iff q * 2^((m+1) r) is an integer, where
// 2^m <= floor(q) < 2^(m+1).
inline std::vector<Rat> oracle_stair_block(unsigned r, long n) {
  unsigned m = 0;
  while ((2L << m) <= n) ++m;
  const unsigned need = (m + 1) * r;
  const long fine = 1L << (need + 1);
  Rat scale(1);
  for (unsigned k = 0; k < need; ++k) scale *= 2;
  std::vector<Rat> out;
  for (long k = 0; k < fine; ++k) {
    Rat q(n * fine + k, static_cast<unsigned long>(fine));
    q.canonicalize();
    Rat t = q * scale;
    t.canonicalize();
    if (t.get_den() == 1) out.push_back(q);
  }
  return out;
}

// Brute force minimum of sum a_k g_k over exponent vectors with
// sum a_k first(g_k) == lambda.
inline std::optional<LexVec> oracle_tilde(const std::vector<LexVec>& gens, const QuadReal& lambda) {
  std::optional<LexVec> best;
  std::function<void(std::size_t, LexVec)> rec = [&](std::size_t k, LexVec acc) {
    if (acc[0] > lambda) return;
    if (k == gens.size()) {
      if (acc[0] == lambda && (!best || acc < *best)) best = acc;
      return;
    }
    if (gens[k][0].sign() <= 0) {  // zero first coordinate only raises the second
      rec(k + 1, acc);
      return;
    }
    for (LexVec cur = acc; cur[0] <= lambda; cur += gens[k]) rec(k + 1, cur);
  };
  rec(0, LexVec::zero(gens.empty() ? 2 : gens[0].size()));
  return best;
}

}  // namespace svtest

// Readable gtest output for the library types.
namespace semival {
inline void PrintTo(const Dyadic& d, std::ostream* os) { *os << d.str(); }
inline void PrintTo(const QuadReal& q, std::ostream* os) { *os << q.str(); }
inline void PrintTo(const LexVec& v, std::ostream* os) { *os << v.str(); }
inline void PrintTo(const MPoly& p, std::ostream* os) { *os << p.str(); }
}  // namespace semival
