#include "poly.hpp"

#include <cctype>
#include <limits>
#include <vector>

#include "error.hpp"

namespace semival {

namespace {

std::uint64_t add_exp(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    fail(ErrorKind::domain, "exponent overflow");
  return a + b;
}

std::int64_t add_zexp(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorKind::domain, "z-exponent overflow");
  return out;
}

constexpr std::array<Var, 4> kPolyVars = {Var::x, Var::y, Var::u, Var::v};

}  // namespace

char var_name(Var v) {
  switch (v) {
    case Var::z: return 'z';
    case Var::x: return 'x';
    case Var::y: return 'y';
    case Var::u: return 'u';
    case Var::v: return 'v';
  }
  return '?';
}

// -------------------------------------------------------------- LaurentZ

LaurentZ::LaurentZ(const Rat& c, std::int64_t zexp) {
  if (sgn(c) == 0) return;
  Rat cc(c);
  cc.canonicalize();
  terms_.emplace(zexp, cc);
}

void LaurentZ::add_term(std::int64_t e, const Rat& c) {
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

std::int64_t LaurentZ::ord() const {
  if (terms_.empty()) fail(ErrorKind::domain, "ord of zero undefined");
  return terms_.begin()->first;
}

std::int64_t ord_z(const LaurentZ& c) { return c.ord(); }

LaurentZ& LaurentZ::operator+=(const LaurentZ& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentZ& LaurentZ::operator-=(const LaurentZ& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentZ LaurentZ::operator-() const {
  LaurentZ out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

LaurentZ operator*(const LaurentZ& a, const LaurentZ& b) {
  LaurentZ out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(add_zexp(ea, eb), ca * cb);
  return out;
}

std::string LaurentZ::str() const {
  MPoly p;
  for (const auto& [e, c] : terms_) p += MPoly::term(c, Monomial{}, e);
  return p.str();
}

// -------------------------------------------------------------- Monomial

std::size_t Monomial::slot(Var v) {
  switch (v) {
    case Var::x: return 0;
    case Var::y: return 1;
    case Var::u: return 2;
    case Var::v: return 3;
    case Var::z: break;
  }
  fail(ErrorKind::internal, "z is not a monomial variable");
}

std::uint64_t Monomial::total_degree() const {
  std::uint64_t d = 0;
  for (auto e : exps) d = add_exp(d, e);
  return d;
}

std::strong_ordering grlex(const Monomial& a, const Monomial& b) {
  if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
  return a.exps <=> b.exps;
}

// ----------------------------------------------------------------- MPoly

bool MPoly::KeyLess::operator()(const Key& a, const Key& b) const {
  auto c = grlex(a.mono, b.mono);
  if (c != 0) return c < 0;
  return a.zexp < b.zexp;
}

MPoly MPoly::constant(const Rat& c) { return term(c, Monomial{}, 0); }

MPoly MPoly::variable(Var v) {
  if (v == Var::z) return term(Rat(1), Monomial{}, 1);
  Monomial m;
  m[v] = 1;
  return term(Rat(1), m, 0);
}

MPoly MPoly::term(const Rat& c, const Monomial& m, std::int64_t zexp) {
  MPoly p;
  if (sgn(c) == 0) return p;
  Rat cc(c);
  cc.canonicalize();  // callers may hand in unreduced fractions
  p.terms_.emplace(Key{m, zexp}, cc);
  return p;
}

MPoly MPoly::from_coefficient(const LaurentZ& c, const Monomial& m) {
  MPoly p;
  for (const auto& [e, r] : c.terms()) p.terms_.emplace(Key{m, e}, r);
  return p;
}

void MPoly::add_term(const Key& k, const Rat& c) {
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

std::uint64_t MPoly::degree(Var v) const {
  std::uint64_t d = 0;
  if (v == Var::z) fail(ErrorKind::usage, "degree in z is not defined for Laurent coefficients");
  for (const auto& [k, c] : terms_) d = std::max(d, k.mono[v]);
  return d;
}

bool MPoly::involves(Var v) const {
  for (const auto& [k, c] : terms_) {
    if (v == Var::z ? k.zexp != 0 : k.mono[v] != 0) return true;
  }
  return false;
}

std::map<Monomial, LaurentZ, MonomialLess> MPoly::coefficients() const {
  std::map<Monomial, LaurentZ, MonomialLess> out;
  for (const auto& [k, c] : terms_) out[k.mono] += LaurentZ(c, k.zexp);
  return out;
}

MPoly MPoly::coefficient_in(Var v, std::uint64_t d) const {
  MPoly out;
  for (const auto& [k, c] : terms_) {
    if (k.mono[v] != d) continue;
    Key nk = k;
    nk.mono[v] = 0;
    out.terms_.emplace(nk, c);
  }
  return out;
}

MPoly& MPoly::operator+=(const MPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      MPoly::Key k;
      for (std::size_t i = 0; i < 4; ++i) k.mono.exps[i] = add_exp(ka.mono.exps[i], kb.mono.exps[i]);
      k.zexp = add_zexp(ka.zexp, kb.zexp);
      out.add_term(k, ca * cb);
    }
  }
  return out;
}

MPoly MPoly::scaled(const Rat& c) const {
  if (sgn(c) == 0) return {};
  MPoly out = *this;
  for (auto& [k, v] : out.terms_) v *= c;
  return out;
}

MPoly MPoly::times_term(const Rat& c, const Monomial& m, std::int64_t zexp) const {
  MPoly out;
  if (sgn(c) == 0) return out;
  for (const auto& [k, v] : terms_) {
    Key nk;
    for (std::size_t i = 0; i < 4; ++i) nk.mono.exps[i] = add_exp(k.mono.exps[i], m.exps[i]);
    nk.zexp = add_zexp(k.zexp, zexp);
    out.terms_.emplace_hint(out.terms_.end(), nk, v * c);
  }
  return out;
}

MPoly MPoly::pow(std::uint64_t n) const {
  MPoly result = constant(Rat(1));
  MPoly base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n) base = base * base;
  }
  return result;
}

namespace {

std::string monomial_text(std::int64_t zexp, const Monomial& m) {
  std::string out;
  auto factor = [&out](char name, std::string exp) {
    if (!out.empty()) out += '*';
    out += name;
    if (exp != "1") out += "^" + exp;
  };
  if (zexp != 0) factor('z', std::to_string(zexp));
  for (Var v : kPolyVars)
    if (m[v] != 0) factor(var_name(v), std::to_string(m[v]));
  return out;
}

}  // namespace

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [k, c] = *it;
    bool neg = sgn(c) < 0;
    Rat mag = neg ? Rat(-c) : c;
    std::string mono = monomial_text(k.zexp, k.mono);
    std::string body;
    if (mono.empty()) {
      body = to_string(mag);
    } else if (mag == 1) {
      body = mono;
    } else {
      body = to_string(mag) + "*" + mono;
    }
    if (first) {
      out = neg ? "-" + body : body;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

// -------------------------------------------------------------- division

DivResult div_in_var(const MPoly& f, const MPoly& g, Var var) {
  if (var == Var::z) fail(ErrorKind::usage, "cannot divide in the Laurent variable z");
  if (g.is_zero()) fail(ErrorKind::domain, "division by the zero polynomial");
  const std::uint64_t dg = g.degree(var);
  MPoly lead = g.coefficient_in(var, dg);
  if (lead.term_count() != 1 || !lead.terms().begin()->first.mono.is_one())
    fail(ErrorKind::domain, "division unsupported: leading coefficient " + lead.str() +
                                " in " + var_name(var) + " is not a unit");
  const Rat lead_inv = 1 / lead.terms().begin()->second;
  const std::int64_t lead_z = lead.terms().begin()->first.zexp;

  DivResult out;
  MPoly r = f;
  while (!r.is_zero()) {
    const std::uint64_t d = r.degree(var);
    if (d < dg) break;
    MPoly step;
    for (const auto& [k, c] : r.terms()) {
      if (k.mono[var] != d) continue;
      Monomial m = k.mono;
      m[var] = d - dg;
      step += MPoly::term(c * lead_inv, m, add_zexp(k.zexp, -lead_z));
    }
    out.quotient += step;
    r -= step * g;
  }
  out.remainder = std::move(r);
  return out;
}

// ---------------------------------------------------------------- parser

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  MPoly run() {
    skip_ws();
    if (pos_ == text_.size()) error("empty polynomial");
    MPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      error(std::string("unexpected '") + text_[pos_] + "'" +
            (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '('
                 ? " (implicit multiplication is not allowed)"
                 : ""));
    }
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::parse, "syntax error at position " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    MPoly acc = product();
    for (;;) {
      if (accept('+')) {
        acc += product();
      } else if (accept('-')) {
        acc -= product();
      } else {
        return acc;
      }
    }
  }

  MPoly product() {
    MPoly acc = unary();
    while (accept('*')) acc = acc * unary();
    return acc;
  }

  MPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  MPoly power() {
    skip_ws();
    bool is_z = false;
    MPoly base = atom(is_z);
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t exp_pos = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    std::uint64_t e = digits_u64();
    if (neg && e != 0) {
      if (!is_z) {
        pos_ = exp_pos;
        error("negative exponent is only allowed on z");
      }
      if (e > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        error("exponent too large");
      return MPoly::term(Rat(1), Monomial{}, -static_cast<std::int64_t>(e));
    }
    if (is_z) {
      if (e > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        error("exponent too large");
      return MPoly::term(Rat(1), Monomial{}, static_cast<std::int64_t>(e));
    }
    return base.pow(e);
  }

  std::uint64_t digits_u64() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer");
    Int v(std::string(text_.substr(start, pos_ - start)), 10);
    if (!v.fits_ulong_p()) {
      pos_ = start;
      error("exponent too large");
    }
    return v.get_ui();
  }

  MPoly atom(bool& is_z) {
    skip_ws();
    if (pos_ == text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly inner = expr();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      Int num(std::string(text_.substr(start, pos_ - start)), 10);
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        const std::size_t dstart = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (dstart == pos_) error("expected a denominator");
        Int den(std::string(text_.substr(dstart, pos_ - dstart)), 10);
        if (sgn(den) == 0) {
          pos_ = dstart;
          error("zero denominator");
        }
        Rat r(num, den);
        r.canonicalize();
        return MPoly::constant(r);
      }
      return MPoly::constant(Rat(num));
    }
    switch (c) {
      case 'x': ++pos_; return MPoly::variable(Var::x);
      case 'y': ++pos_; return MPoly::variable(Var::y);
      case 'u': ++pos_; return MPoly::variable(Var::u);
      case 'v': ++pos_; return MPoly::variable(Var::v);
      case 'z': ++pos_; is_z = true; return MPoly::variable(Var::z);
      default: break;
    }
    error(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(std::string_view text) { return PolyParser(text).run(); }

}  // namespace semival
