#include "exact_arith.hpp"

#include <algorithm>
#include <cctype>

#include "error.hpp"

namespace semival {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

int sign_of(std::strong_ordering o) {
  if (o < 0) return -1;
  if (o > 0) return 1;
  return 0;
}

std::strong_ordering ordering_of(int s) {
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::string to_string(const Int& v) { return v.get_str(10); }

std::string to_string(const Rat& v) {
  if (v.get_den() == 1) return v.get_num().get_str(10);
  return v.get_num().get_str(10) + "/" + v.get_den().get_str(10);
}

Int parse_int(std::string_view text) {
  text = trim(text);
  std::string_view digits = text;
  bool neg = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    neg = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) fail(ErrorKind::parse, "invalid integer '" + std::string(text) + "'");
  Int v(std::string(digits), 10);
  return neg ? Int(-v) : v;
}

Rat parse_rat(std::string_view text) {
  std::string s = strip_spaces(text);
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_int(s));
  Int num = parse_int(std::string_view(s).substr(0, slash));
  std::string_view den_text = std::string_view(s).substr(slash + 1);
  Int den;
  if (den_text.size() > 2 && den_text.substr(0, 2) == "2^") {
    Int k = parse_int(den_text.substr(2));
    if (sgn(k) < 0 || !k.fits_ulong_p())
      fail(ErrorKind::parse, "invalid power of two in '" + s + "'");
    den = pow2(k.get_ui());
  } else {
    if (!all_digits(den_text)) fail(ErrorKind::parse, "invalid denominator in '" + s + "'");
    den = Int(std::string(den_text), 10);
  }
  if (sgn(den) == 0) fail(ErrorKind::parse, "zero denominator in '" + s + "'");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Int pow2(std::uint64_t k) {
  Int v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, k);
  return v;
}

Int ipow(const Int& base, std::uint64_t exp) {
  Int v;
  mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), exp);
  return v;
}

// ---------------------------------------------------------------- Dyadic

Dyadic::Dyadic(Int mantissa, std::uint64_t exponent)
    : mant_(std::move(mantissa)), exp_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (sgn(mant_) == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  std::uint64_t tz = mpz_scan1(mant_.get_mpz_t(), 0);
  std::uint64_t shift = std::min(tz, exp_);
  if (shift > 0) {
    mpz_tdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), shift);
    exp_ -= shift;
  }
}

std::optional<Dyadic> Dyadic::from_rat(const Rat& r) {
  const Int& den = r.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  std::uint64_t k = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
  return Dyadic(r.get_num(), k);
}

Rat Dyadic::to_rat() const {
  Rat r(mant_, pow2(exp_));
  r.canonicalize();
  return r;
}

Int Dyadic::floor() const {
  Int q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), exp_);
  return q;
}

Int Dyadic::ceil() const {
  Int q;
  mpz_cdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), exp_);
  return q;
}

Int Dyadic::scaled(std::uint64_t k) const {
  if (k < exp_) fail(ErrorKind::internal, "dyadic scaling by 2^" + std::to_string(k) + " is not integral");
  Int v;
  mpz_mul_2exp(v.get_mpz_t(), mant_.get_mpz_t(), k - exp_);
  return v;
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
  if (exp_ == o.exp_) {
    mant_ += o.mant_;
  } else if (exp_ > o.exp_) {
    Int t;
    mpz_mul_2exp(t.get_mpz_t(), o.mant_.get_mpz_t(), exp_ - o.exp_);
    mant_ += t;
  } else {
    mpz_mul_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), o.exp_ - exp_);
    mant_ += o.mant_;
    exp_ = o.exp_;
  }
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& o) { return *this += -o; }

Dyadic& Dyadic::operator*=(const Dyadic& o) {
  mant_ *= o.mant_;
  exp_ += o.exp_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  int c;
  if (a.exp_ == b.exp_) {
    c = cmp(a.mant_, b.mant_);
  } else if (a.exp_ > b.exp_) {
    Int t;
    mpz_mul_2exp(t.get_mpz_t(), b.mant_.get_mpz_t(), a.exp_ - b.exp_);
    c = cmp(a.mant_, t);
  } else {
    Int t;
    mpz_mul_2exp(t.get_mpz_t(), a.mant_.get_mpz_t(), b.exp_ - a.exp_);
    c = cmp(t, b.mant_);
  }
  return ordering_of(c);
}

std::string Dyadic::str() const {
  if (exp_ == 0) return mant_.get_str(10);
  return mant_.get_str(10) + "/" + pow2(exp_).get_str(10);
}

Dyadic Dyadic::parse(std::string_view text) {
  auto d = from_rat(parse_rat(text));
  if (!d) fail(ErrorKind::parse, "'" + std::string(trim(text)) + "' is not a dyadic rational");
  return *d;
}

// -------------------------------------------------------------- QuadReal

int QuadReal::sign() const {
  int sp = rat_.sign();
  int sq = surd_.sign();
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // Mixed signs: compare p^2 with 2 q^2.
  Dyadic p2 = rat_ * rat_;
  Dyadic q2 = surd_ * surd_ * Dyadic(2L);
  int s = sign_of(p2 <=> q2);
  return sp > 0 ? s : -s;
}

Int QuadReal::floor() const {
  // floor(q*sqrt2) from the integer square root of 2 m^2, q = m / 2^k.
  const Int& m = surd_.mantissa();
  Int s;
  Int twice_sq = 2 * m * m;
  mpz_sqrt(s.get_mpz_t(), twice_sq.get_mpz_t());
  if (sgn(m) < 0) s = -s - 1;
  Int surd_floor;
  mpz_fdiv_q_2exp(surd_floor.get_mpz_t(), s.get_mpz_t(), surd_.exponent());
  Int est = rat_.floor() + surd_floor;
  // est <= floor(x) <= est + 1.
  if (QuadReal(Dyadic(Int(est + 1))) <= *this) return est + 1;
  return est;
}

Int QuadReal::ceil() const { return -(-*this).floor(); }

QuadReal& QuadReal::operator+=(const QuadReal& o) {
  rat_ += o.rat_;
  surd_ += o.surd_;
  return *this;
}

QuadReal& QuadReal::operator-=(const QuadReal& o) {
  rat_ -= o.rat_;
  surd_ -= o.surd_;
  return *this;
}

QuadReal& QuadReal::operator*=(const QuadReal& o) {
  if (is_dyadic() && o.is_dyadic()) {
    rat_ *= o.rat_;
    return *this;
  }
  Dyadic r = rat_ * o.rat_ + Dyadic(2L) * surd_ * o.surd_;
  Dyadic s = rat_ * o.surd_ + surd_ * o.rat_;
  rat_ = std::move(r);
  surd_ = std::move(s);
  return *this;
}

std::strong_ordering quad_cmp(const QuadReal& a, const QuadReal& b) {
  if (a.is_dyadic() && b.is_dyadic()) return a.rat_part() <=> b.rat_part();
  return ordering_of((a - b).sign());
}

std::strong_ordering operator<=>(const QuadReal& a, const QuadReal& b) { return quad_cmp(a, b); }

std::string QuadReal::str() const {
  if (surd_.is_zero()) return rat_.str();
  if (rat_.is_zero()) return surd_.str() + "*sqrt2";
  if (surd_.sign() > 0) return rat_.str() + " + " + surd_.str() + "*sqrt2";
  return rat_.str() + " - " + (-surd_).str() + "*sqrt2";
}

RatQuad parse_rat_quad(std::string_view text) {
  std::string s = strip_spaces(text);
  if (s.empty()) fail(ErrorKind::parse, "empty number");
  constexpr std::string_view kSurd = "sqrt2";
  auto at = s.find(kSurd);
  if (at == std::string::npos) return {parse_rat(s), Rat(0)};
  if (at + kSurd.size() != s.size())
    fail(ErrorKind::parse, "'sqrt2' must close the number in '" + s + "'");
  std::string prefix = s.substr(0, at);

  // Split "p" from "[+-]q*" at the first sign that follows a digit.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    if ((prefix[i] == '+' || prefix[i] == '-') &&
        std::isdigit(static_cast<unsigned char>(prefix[i - 1]))) {
      split = i;
      break;
    }
  }
  Rat rat_part(0);
  std::string coeff = prefix;
  if (split != std::string::npos) {
    rat_part = parse_rat(prefix.substr(0, split));
    coeff = prefix.substr(split);
  }
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  int outer = 1;
  if (split != std::string::npos) {
    outer = coeff.front() == '-' ? -1 : 1;
    coeff.erase(0, 1);
  }
  Rat surd_part(1);
  if (coeff == "-") {
    surd_part = -1;
  } else if (!coeff.empty() && coeff != "+") {
    surd_part = parse_rat(coeff);
  }
  if (outer < 0) surd_part = -surd_part;
  return {rat_part, surd_part};
}

std::optional<QuadReal> RatQuad::to_quad() const {
  auto p = Dyadic::from_rat(rat_part);
  auto q = Dyadic::from_rat(surd_part);
  if (!p || !q) return std::nullopt;
  return QuadReal(*p, *q);
}

QuadReal QuadReal::parse(std::string_view text) {
  auto q = parse_rat_quad(text).to_quad();
  if (!q) fail(ErrorKind::parse, "'" + std::string(trim(text)) + "' has a non-dyadic part");
  return *q;
}

// ------------------------------------------------------ GroupSpec, LexVec

GroupSpec::GroupSpec(std::vector<CoordKind> kinds) : kinds_(std::move(kinds)) {
  if (kinds_.empty()) fail(ErrorKind::usage, "group rank must be positive");
}

bool GroupSpec::conforms(const LexVec& v) const {
  if (v.size() != kinds_.size()) return false;
  for (std::size_t i = 0; i < kinds_.size(); ++i) {
    switch (kinds_[i]) {
      case CoordKind::integer:
        if (!v[i].is_integer()) return false;
        break;
      case CoordKind::dyadic:
        if (!v[i].is_dyadic()) return false;
        break;
      case CoordKind::quad:
        break;
    }
  }
  return true;
}

void GroupSpec::check(const LexVec& v) const {
  if (!conforms(v)) fail(ErrorKind::usage, "value " + v.str() + " does not belong to the group");
}

GroupSpec GroupSpec::quotient(std::size_t i) const {
  if (i >= kinds_.size())
    fail(ErrorKind::usage, "quotient level " + std::to_string(i) + " out of range");
  return GroupSpec(std::vector<CoordKind>(kinds_.begin(), kinds_.end() - static_cast<long>(i)));
}

bool LexVec::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const QuadReal& c) { return c.is_zero(); });
}

static void require_same_rank(const LexVec& a, const LexVec& b) {
  if (a.size() != b.size())
    fail(ErrorKind::usage, "rank mismatch: " + a.str() + " vs " + b.str());
}

LexVec& LexVec::operator+=(const LexVec& o) {
  require_same_rank(*this, o);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

LexVec& LexVec::operator-=(const LexVec& o) {
  require_same_rank(*this, o);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

LexVec LexVec::scaled(const QuadReal& k) const {
  LexVec out = *this;
  for (auto& c : out.coords_) c *= k;
  return out;
}

std::strong_ordering lex_cmp(const LexVec& a, const LexVec& b) {
  require_same_rank(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto c = quad_cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const LexVec& a, const LexVec& b) { return lex_cmp(a, b); }

std::string LexVec::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ", ";
    out += coords_[i].str();
  }
  return out + ")";
}

LexVec LexVec::parse(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    fail(ErrorKind::parse, "value vector must be parenthesised: '" + std::string(text) + "'");
  text = text.substr(1, text.size() - 2);
  std::vector<QuadReal> coords;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      coords.push_back(QuadReal::parse(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return LexVec(std::move(coords));
}

LexVec project(const LexVec& v, std::size_t i) {
  if (i >= v.size())
    fail(ErrorKind::usage, "projection level " + std::to_string(i) + " out of range for rank " +
                               std::to_string(v.size()));
  return LexVec(std::vector<QuadReal>(v.coords().begin(), v.coords().end() - static_cast<long>(i)));
}

bool in_interval(const LexVec& v, const LexVec& lo, const LexVec& hi) {
  return lex_cmp(lo, v) <= 0 && lex_cmp(v, hi) < 0;
}

}  // namespace semival
