#pragma once

// Exact scalars and lexicographically ordered value vectors.
//
// Every value the library manipulates is one of:
//   Int      arbitrary precision integer
//   Rat      rational in lowest terms
//   Dyadic   m / 2^k, canonical (m odd whenever k > 0)
//   QuadReal p + q*sqrt2 with dyadic p, q
// and a LexVec is a tuple of QuadReals compared lexicographically, first
// coordinate most significant. No floating point is used anywhere.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semival {

using Int = mpz_class;
using Rat = mpq_class;

std::string to_string(const Int& v);
std::string to_string(const Rat& v);
Int parse_int(std::string_view text);
Rat parse_rat(std::string_view text);  // "a", "a/b", "a/2^k"

Int pow2(std::uint64_t k);
Int ipow(const Int& base, std::uint64_t exp);

class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : mant_(v) {}  // NOLINT(google-explicit-constructor)
  Dyadic(const Int& v) : mant_(v) {}  // NOLINT(google-explicit-constructor)
  Dyadic(Int mantissa, std::uint64_t exponent);

  static std::optional<Dyadic> from_rat(const Rat& r);

  const Int& mantissa() const { return mant_; }
  std::uint64_t exponent() const { return exp_; }

  bool is_zero() const { return sgn(mant_) == 0; }
  bool is_integer() const { return exp_ == 0; }
  int sign() const { return sgn(mant_); }

  Rat to_rat() const;
  Int floor() const;
  Int ceil() const;

  // The value multiplied by 2^k, which must be an integer.
  Int scaled(std::uint64_t k) const;

  Dyadic operator-() const { return Dyadic(-mant_, exp_); }
  Dyadic& operator+=(const Dyadic& o);
  Dyadic& operator-=(const Dyadic& o);
  Dyadic& operator*=(const Dyadic& o);
  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  Dyadic halved() const { return is_zero() ? *this : Dyadic(mant_, exp_ + 1); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.mant_ == b.mant_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  std::string str() const;
  static Dyadic parse(std::string_view text);

 private:
  void normalize();

  Int mant_{0};
  std::uint64_t exp_ = 0;
};

class QuadReal {
 public:
  QuadReal() = default;
  QuadReal(long v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  QuadReal(const Int& v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  QuadReal(Dyadic v) : rat_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  QuadReal(Dyadic rat_part, Dyadic surd_part)
      : rat_(std::move(rat_part)), surd_(std::move(surd_part)) {}

  static QuadReal sqrt2() { return {Dyadic(0L), Dyadic(1L)}; }

  const Dyadic& rat_part() const { return rat_; }
  const Dyadic& surd_part() const { return surd_; }

  bool is_zero() const { return rat_.is_zero() && surd_.is_zero(); }
  bool is_dyadic() const { return surd_.is_zero(); }
  bool is_integer() const { return surd_.is_zero() && rat_.is_integer(); }
  int sign() const;

  Int floor() const;
  Int ceil() const;

  QuadReal operator-() const { return {-rat_, -surd_}; }
  QuadReal& operator+=(const QuadReal& o);
  QuadReal& operator-=(const QuadReal& o);
  QuadReal& operator*=(const QuadReal& o);
  friend QuadReal operator+(QuadReal a, const QuadReal& b) { return a += b; }
  friend QuadReal operator-(QuadReal a, const QuadReal& b) { return a -= b; }
  friend QuadReal operator*(QuadReal a, const QuadReal& b) { return a *= b; }

  friend bool operator==(const QuadReal& a, const QuadReal& b) {
    return a.rat_ == b.rat_ && a.surd_ == b.surd_;
  }
  friend std::strong_ordering operator<=>(const QuadReal& a, const QuadReal& b);

  std::string str() const;
  static QuadReal parse(std::string_view text);

 private:
  Dyadic rat_;
  Dyadic surd_;
};

// Exact comparison of two elements of Z[1/2] + Z[1/2]*sqrt2.
std::strong_ordering quad_cmp(const QuadReal& a, const QuadReal& b);

// Parses "p + q*sqrt2" with rational (not necessarily dyadic) parts.
struct RatQuad {
  Rat rat_part;
  Rat surd_part;
  std::optional<QuadReal> to_quad() const;
};
RatQuad parse_rat_quad(std::string_view text);

enum class CoordKind { integer, dyadic, quad };

class LexVec;

// Lexicographic product group; convex subgroups are the suffix subgroups.
class GroupSpec {
 public:
  explicit GroupSpec(std::vector<CoordKind> kinds);

  std::size_t rank() const { return kinds_.size(); }
  const std::vector<CoordKind>& kinds() const { return kinds_; }

  bool conforms(const LexVec& v) const;
  void check(const LexVec& v) const;  // throws usage error

  // Gamma / Phi_i keeps the first rank - i coordinates.
  GroupSpec quotient(std::size_t i) const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  std::vector<CoordKind> kinds_;
};

class LexVec {
 public:
  LexVec() = default;
  explicit LexVec(std::vector<QuadReal> coords) : coords_(std::move(coords)) {}
  LexVec(std::initializer_list<QuadReal> coords) : coords_(coords) {}

  static LexVec zero(std::size_t rank) { return LexVec(std::vector<QuadReal>(rank)); }

  std::size_t size() const { return coords_.size(); }
  const QuadReal& operator[](std::size_t i) const { return coords_[i]; }
  QuadReal& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<QuadReal>& coords() const { return coords_; }

  bool is_zero() const;

  LexVec& operator+=(const LexVec& o);
  LexVec& operator-=(const LexVec& o);
  friend LexVec operator+(LexVec a, const LexVec& b) { return a += b; }
  friend LexVec operator-(LexVec a, const LexVec& b) { return a -= b; }
  LexVec scaled(const QuadReal& k) const;

  friend bool operator==(const LexVec& a, const LexVec& b) = default;
  friend std::strong_ordering operator<=>(const LexVec& a, const LexVec& b);

  std::string str() const;
  static LexVec parse(std::string_view text);

 private:
  std::vector<QuadReal> coords_;
};

std::strong_ordering lex_cmp(const LexVec& a, const LexVec& b);

// Image of v in Gamma / Phi_i: drops the last i coordinates.
LexVec project(const LexVec& v, std::size_t i);

// lo <= v < hi.
bool in_interval(const LexVec& v, const LexVec& lo, const LexVec& hi);

}  // namespace semival
