#pragma once

// Sparse polynomials in x, y, u, v whose coefficients are Laurent
// polynomials in z over Q.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "exact_arith.hpp"

namespace semival {

enum class Var { z, x, y, u, v };

char var_name(Var v);

class LaurentZ {
 public:
  LaurentZ() = default;
  explicit LaurentZ(const Rat& c, std::int64_t zexp = 0);

  static LaurentZ monomial(const Rat& c, std::int64_t zexp) { return LaurentZ(c, zexp); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<std::int64_t, Rat>& terms() const { return terms_; }

  // Minimal exponent with a nonzero coefficient.
  std::int64_t ord() const;
  // c * z^k with c != 0.
  bool is_unit() const { return terms_.size() == 1; }

  LaurentZ& operator+=(const LaurentZ& o);
  LaurentZ& operator-=(const LaurentZ& o);
  friend LaurentZ operator+(LaurentZ a, const LaurentZ& b) { return a += b; }
  friend LaurentZ operator-(LaurentZ a, const LaurentZ& b) { return a -= b; }
  friend LaurentZ operator*(const LaurentZ& a, const LaurentZ& b);
  LaurentZ operator-() const;

  friend bool operator==(const LaurentZ&, const LaurentZ&) = default;

  std::string str() const;

 private:
  void add_term(std::int64_t e, const Rat& c);

  std::map<std::int64_t, Rat> terms_;
};

std::int64_t ord_z(const LaurentZ& c);

// Exponents of x, y, u, v.
struct Monomial {
  std::array<std::uint64_t, 4> exps{};

  static std::size_t slot(Var v);
  std::uint64_t operator[](Var v) const { return exps[slot(v)]; }
  std::uint64_t& operator[](Var v) { return exps[slot(v)]; }
  std::uint64_t total_degree() const;
  bool is_one() const { return exps == std::array<std::uint64_t, 4>{}; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded lexicographic order on (x, y, u, v).
std::strong_ordering grlex(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex(a, b) < 0; }
};

class MPoly {
 public:
  struct Key {
    Monomial mono;
    std::int64_t zexp = 0;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const;
  };
  using TermMap = std::map<Key, Rat, KeyLess>;

  MPoly() = default;
  static MPoly constant(const Rat& c);
  static MPoly variable(Var v);
  static MPoly term(const Rat& c, const Monomial& m, std::int64_t zexp = 0);
  static MPoly from_coefficient(const LaurentZ& c, const Monomial& m);

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  std::uint64_t degree(Var v) const;
  bool involves(Var v) const;

  // Grouped view: monomial in (x,y,u,v) -> Laurent coefficient in z.
  std::map<Monomial, LaurentZ, MonomialLess> coefficients() const;

  // Sum of the terms of degree d in v, with v removed.
  MPoly coefficient_in(Var v, std::uint64_t d) const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly operator-() const;

  MPoly scaled(const Rat& c) const;
  // Multiplies by c * z^k * m.
  MPoly times_term(const Rat& c, const Monomial& m, std::int64_t zexp) const;
  MPoly pow(std::uint64_t n) const;

  friend bool operator==(const MPoly&, const MPoly&) = default;

  // Canonical text: terms in decreasing graded-lex order, explicit signs.
  std::string str() const;

 private:
  void add_term(const Key& k, const Rat& c);

  TermMap terms_;
};

struct DivResult {
  MPoly quotient;
  MPoly remainder;
};

// f = q*g + r with deg_var(r) < deg_var(g). The leading coefficient of g in
// var must be a unit c*z^k; anything else is rejected.
DivResult div_in_var(const MPoly& f, const MPoly& g, Var var);

// Grammar: sums and products of rational literals, the variables x y z u v,
// parentheses and integer powers; negative powers only on z.
MPoly parse_poly(std::string_view text);

}  // namespace semival
