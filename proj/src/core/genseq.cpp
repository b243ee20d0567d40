#include "genseq.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "error.hpp"

namespace semival {

// ------------------------------------------------------------------ eta

Dyadic eta(std::size_t i) {
  static std::mutex mu;
  static std::vector<Dyadic> table{Dyadic(1L)};
  std::lock_guard lock(mu);
  while (table.size() <= i) {
    const std::size_t k = table.size() - 1;
    table.push_back(Dyadic(2L) * table.back() + Dyadic(Int(1), k + 1));
  }
  return table[i];
}

Dyadic eta_closed_form(std::size_t i) {
  Rat r(pow2(2 * i + 2) - 1, 3 * pow2(i));
  r.canonicalize();
  auto d = Dyadic::from_rat(r);
  if (!d) fail(ErrorKind::internal, "closed form of eta is not dyadic");
  return *d;
}

// ------------------------------------------------------------- SeqFamily

SeqFamily::SeqFamily(FamilyKind kind, std::vector<Int> weights, Var base, Var lead)
    : kind_(kind), base_(base), lead_(lead), weights_(std::move(weights)),
      cache_(std::make_shared<PolyCache>()) {
  if (base_ == lead_ || base_ == Var::z || lead_ == Var::z)
    fail(ErrorKind::usage, "a family needs two distinct polynomial variables");
  seconds_.reserve(weights_.size() + 1);
  seconds_.emplace_back(0L);
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const Int& w = weights_[k];
    if (kind_ == FamilyKind::P && sgn(w) < 0)
      fail(ErrorKind::usage, "sigma(" + std::to_string(k + 1) + ") must be nonnegative");
    if (kind_ == FamilyKind::Q && sgn(w) <= 0)
      fail(ErrorKind::usage, "tau(" + std::to_string(k + 1) + ") must be positive");
    Dyadic step = kind_ == FamilyKind::P ? seconds_.back() - Dyadic(w) : seconds_.back() + Dyadic(w);
    seconds_.push_back(step.halved());
  }
}

const Int& SeqFamily::weight(std::size_t i) const {
  if (!has_weight(i))
    fail(ErrorKind::domain, std::string("missing weight ") + weight_name() + "(" + std::to_string(i) + ")");
  return weights_[i - 1];
}

const Dyadic& SeqFamily::second(std::size_t i) const {
  if (!has_second(i))
    fail(ErrorKind::domain, std::string("value of ") + symbol() + "_" + std::to_string(i) +
                                " needs the missing weight " + weight_name() + "(" + std::to_string(i) + ")");
  return seconds_[i];
}

SeqFamily SeqFamily::with_second_offset(std::size_t i, const Dyadic& delta) const {
  SeqFamily copy = *this;
  if (!copy.has_second(i)) (void)second(i);
  copy.seconds_[i] += delta;
  return copy;
}

const MPoly& SeqFamily::poly(std::size_t i) const {
  std::lock_guard lock(cache_->mu);
  auto& polys = cache_->polys;
  if (polys.empty()) {
    polys.push_back(MPoly::variable(base_));
    polys.push_back(MPoly::variable(lead_));
  }
  while (polys.size() <= i) {
    const std::size_t k = polys.size() - 1;
    const Int& w = weight(k);
    if (!w.fits_slong_p()) fail(ErrorKind::cap, std::string(weight_name()) + " too large for symbolic use");
    if (k + 1 >= 64) fail(ErrorKind::cap, "family index too large for symbolic use");
    Monomial base_power;
    base_power[base_] = std::uint64_t{1} << (k + 1);
    const MPoly& cur = polys[k];
    const MPoly& prev = polys[k - 1];
    MPoly square = cur * cur;
    MPoly next;
    if (kind_ == FamilyKind::P) {
      next = square.times_term(Rat(1), Monomial{}, w.get_si()) - prev.times_term(Rat(1), base_power, 0);
    } else {
      next = square - prev.times_term(Rat(1), base_power, w.get_si());
    }
    polys.push_back(std::move(next));
  }
  return polys[i];
}

const MPoly& build_seq(const SeqFamily& fam, std::size_t i) { return fam.poly(i); }

Dyadic gamma(const SeqFamily& fam, std::size_t i) {
  if (fam.kind() != FamilyKind::P) fail(ErrorKind::usage, "gamma is defined for P families");
  return fam.second(i);
}

Dyadic delta(const SeqFamily& fam, std::size_t i) {
  if (fam.kind() != FamilyKind::Q) fail(ErrorKind::usage, "delta is defined for Q families");
  return fam.second(i);
}

Int weight_probe(std::size_t i) { return Int(static_cast<unsigned long>(i)) * pow2(i + 3); }

// ----------------------------------------------------------- ValuationDef

std::string form_name(Form f) {
  switch (f) {
    case Form::P3: return "P3";
    case Form::Q3: return "Q3";
    case Form::Combined5: return "Combined5";
  }
  return "?";
}

Form parse_form(std::string_view text) {
  if (text == "P3") return Form::P3;
  if (text == "Q3") return Form::Q3;
  if (text == "Combined5") return Form::Combined5;
  fail(ErrorKind::usage, "unknown valuation form '" + std::string(text) + "'");
}

namespace {

GroupSpec group_for(Form f) {
  if (f == Form::Combined5) return GroupSpec({CoordKind::quad, CoordKind::dyadic});
  return GroupSpec({CoordKind::dyadic, CoordKind::dyadic});
}

}  // namespace

ValuationDef::ValuationDef(Form form, std::shared_ptr<const SeqFamily> inner,
                           std::shared_ptr<const SeqFamily> outer)
    : form_(form), inner_(std::move(inner)), outer_(std::move(outer)), group_(group_for(form)) {
  if (!inner_) fail(ErrorKind::usage, "valuation needs a family");
  if (inner_->base_var() != Var::x || inner_->lead_var() != Var::y)
    fail(ErrorKind::usage, "the inner family must live in x, y");
  switch (form_) {
    case Form::P3:
      if (inner_->kind() != FamilyKind::P || outer_) fail(ErrorKind::usage, "P3 takes exactly one P family");
      break;
    case Form::Q3:
      if (inner_->kind() != FamilyKind::Q || outer_) fail(ErrorKind::usage, "Q3 takes exactly one Q family");
      break;
    case Form::Combined5:
      if (inner_->kind() != FamilyKind::P || !outer_ || outer_->kind() != FamilyKind::Q ||
          outer_->base_var() != Var::u || outer_->lead_var() != Var::v)
        fail(ErrorKind::usage, "Combined5 takes a P family in x, y and a Q family in u, v");
      break;
  }
}

ValuationDef ValuationDef::p3(std::vector<Int> sigma) {
  return ValuationDef(Form::P3, std::make_shared<SeqFamily>(FamilyKind::P, std::move(sigma)));
}

ValuationDef ValuationDef::q3(std::vector<Int> tau) {
  return ValuationDef(Form::Q3, std::make_shared<SeqFamily>(FamilyKind::Q, std::move(tau)));
}

ValuationDef ValuationDef::combined5(std::vector<Int> sigma, std::vector<Int> tau) {
  return ValuationDef(Form::Combined5, std::make_shared<SeqFamily>(FamilyKind::P, std::move(sigma)),
                      std::make_shared<SeqFamily>(FamilyKind::Q, std::move(tau), Var::u, Var::v));
}

const SeqFamily& ValuationDef::family(bool outer) const {
  if (outer) {
    if (!outer_) fail(ErrorKind::usage, "valuation has no outer family");
    return *outer_;
  }
  return *inner_;
}

ValuationDef ValuationDef::with_family(bool outer, SeqFamily fam) const {
  ValuationDef copy = *this;
  auto ptr = std::make_shared<const SeqFamily>(std::move(fam));
  if (outer) {
    copy.outer_ = ptr;
  } else {
    copy.inner_ = ptr;
  }
  return ValuationDef(copy.form_, copy.inner_, copy.outer_);
}

std::vector<Var> ValuationDef::variables() const {
  if (form_ == Form::Combined5) return {Var::x, Var::y, Var::u, Var::v};
  return {Var::x, Var::y};
}

LexVec ValuationDef::value_of_z() const { return LexVec{QuadReal(0L), QuadReal(1L)}; }

QuadReal ValuationDef::first_value(bool outer, std::size_t i) const {
  (void)family(outer);
  const Dyadic e = eta(i);
  if (outer) return QuadReal(Dyadic(0L), e);
  return QuadReal(e);
}

LexVec ValuationDef::family_value(bool outer, std::size_t i) const {
  return LexVec{first_value(outer, i), QuadReal(family(outer).second(i))};
}

// ------------------------------------------------------------- expansion

bool Expansion::is_canonical() const {
  auto ok = [](const std::vector<std::uint64_t>& e) {
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] > 1) return false;
    return true;
  };
  return std::all_of(terms.begin(), terms.end(),
                     [&](const ExpansionTerm& t) { return ok(t.alpha) && ok(t.beta); });
}

namespace {

void trim(std::vector<std::uint64_t>& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

bool term_less(const ExpansionTerm& a, const ExpansionTerm& b) {
  if (a.beta != b.beta) return a.beta < b.beta;
  return a.alpha < b.alpha;
}

std::size_t levels_for(std::uint64_t degree) {
  std::size_t l = 0;
  while (l < 63 && (std::uint64_t{1} << l) <= degree) ++l;
  return l;
}

template <typename Emit>
void expand_family(const SeqFamily& fam, const MPoly& f, std::size_t l,
                   std::vector<std::uint64_t>& exps, Emit&& emit) {
  if (f.is_zero()) return;
  if (l == 0) {
    std::map<std::uint64_t, MPoly> by_base;
    for (const auto& [k, c] : f.terms()) {
      MPoly::Key nk = k;
      const std::uint64_t e = nk.mono[fam.base_var()];
      nk.mono[fam.base_var()] = 0;
      by_base[e] += MPoly::term(c, nk.mono, nk.zexp);
    }
    for (auto& [e, coeff] : by_base) {
      exps[0] = e;
      emit(coeff, exps);
    }
    exps[0] = 0;
    return;
  }
  DivResult qr = div_in_var(f, fam.poly(l), fam.lead_var());
  if (qr.remainder.degree(fam.lead_var()) >= (std::uint64_t{1} << (l - 1)) ||
      qr.quotient.degree(fam.lead_var()) >= (std::uint64_t{1} << (l - 1)))
    fail(ErrorKind::internal, "expansion degree bound violated");
  exps[l] = 0;
  expand_family(fam, qr.remainder, l - 1, exps, emit);
  exps[l] = 1;
  expand_family(fam, qr.quotient, l - 1, exps, emit);
  exps[l] = 0;
}

LaurentZ as_laurent(const MPoly& p) {
  LaurentZ out;
  for (const auto& [k, c] : p.terms()) {
    if (!k.mono.is_one()) fail(ErrorKind::internal, "expansion coefficient still involves a variable");
    out += LaurentZ(c, k.zexp);
  }
  return out;
}

void check_variables(const ValuationDef& v, const MPoly& f) {
  if (v.form() != Form::Combined5 && (f.involves(Var::u) || f.involves(Var::v)))
    fail(ErrorKind::usage, "the " + form_name(v.form()) + " valuation takes polynomials in x, y, z only");
}

}  // namespace

Expansion expand(const ValuationDef& v, const MPoly& f) {
  if (f.is_zero()) fail(ErrorKind::domain, "cannot expand the zero polynomial");
  check_variables(v, f);
  Expansion out;
  const SeqFamily& inner = v.inner();
  auto expand_inner = [&](const MPoly& g, const std::vector<std::uint64_t>& beta) {
    std::size_t l = levels_for(g.degree(inner.lead_var()));
    std::vector<std::uint64_t> exps(l + 1, 0);
    expand_family(inner, g, l, exps, [&](const MPoly& coeff, const std::vector<std::uint64_t>& alpha) {
      ExpansionTerm t{as_laurent(coeff), alpha, beta};
      trim(t.alpha);
      trim(t.beta);
      out.terms.push_back(std::move(t));
    });
  };
  if (v.form() == Form::Combined5) {
    const SeqFamily& outer = *v.outer();
    std::size_t l = levels_for(f.degree(outer.lead_var()));
    std::vector<std::uint64_t> exps(l + 1, 0);
    expand_family(outer, f, l, exps, [&](const MPoly& coeff, const std::vector<std::uint64_t>& beta) {
      expand_inner(coeff, beta);
    });
  } else {
    expand_inner(f, {});
  }
  std::sort(out.terms.begin(), out.terms.end(), term_less);
  return out;
}

MPoly reconstruct(const ValuationDef& v, const Expansion& e) {
  MPoly out;
  auto family_product = [](const SeqFamily& fam, const std::vector<std::uint64_t>& exps) {
    MPoly p = MPoly::constant(Rat(1));
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      p = p * fam.poly(i).pow(exps[i]);
    }
    return p;
  };
  for (const auto& t : e.terms) {
    MPoly term = MPoly::from_coefficient(t.coeff, Monomial{}) * family_product(v.inner(), t.alpha);
    if (!t.beta.empty()) term = term * family_product(v.family(true), t.beta);
    out += term;
  }
  return out;
}

std::string term_label(const ValuationDef& v, const ExpansionTerm& t) {
  std::vector<std::string> parts;
  if (!(t.coeff.is_unit() && t.coeff.terms().begin()->first == 0 && t.coeff.terms().begin()->second == 1)) {
    std::string c = t.coeff.str();
    parts.push_back(t.coeff.is_unit() ? c : "(" + c + ")");
  }
  auto add_family = [&](const SeqFamily& fam, const std::vector<std::uint64_t>& exps) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      std::string name = i == 0 ? std::string(1, var_name(fam.base_var()))
                                : std::string(1, fam.symbol()) + "_" + std::to_string(i);
      parts.push_back(exps[i] == 1 ? name : name + "^" + std::to_string(exps[i]));
    }
  };
  add_family(v.inner(), t.alpha);
  if (!t.beta.empty()) add_family(v.family(true), t.beta);
  if (parts.empty()) return "1";
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "*") + p;
  return out;
}

namespace {

QuadReal term_first(const ValuationDef& v, const ExpansionTerm& t) {
  QuadReal acc;
  for (std::size_t i = 0; i < t.alpha.size(); ++i)
    if (t.alpha[i]) acc += v.first_value(false, i) * QuadReal(Int(static_cast<unsigned long>(t.alpha[i])));
  for (std::size_t i = 0; i < t.beta.size(); ++i)
    if (t.beta[i]) acc += v.first_value(true, i) * QuadReal(Int(static_cast<unsigned long>(t.beta[i])));
  return acc;
}

}  // namespace

LexVec term_value(const ValuationDef& v, const ExpansionTerm& t) {
  LexVec acc{QuadReal(0L), QuadReal(Int(static_cast<long>(ord_z(t.coeff))))};
  auto add = [&](bool outer, const std::vector<std::uint64_t>& exps) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      acc += v.family_value(outer, i).scaled(QuadReal(Int(static_cast<unsigned long>(exps[i]))));
    }
  };
  add(false, t.alpha);
  if (!t.beta.empty()) add(true, t.beta);
  return acc;
}

LexVec expansion_min(const ValuationDef& v, const Expansion& e) {
  if (e.terms.empty()) fail(ErrorKind::domain, "empty expansion has no value");
  LexVec best = term_value(v, e.terms.front());
  for (std::size_t k = 1; k < e.terms.size(); ++k) {
    LexVec cand = term_value(v, e.terms[k]);
    if (cand < best) best = std::move(cand);
  }
  return best;
}

Valuation valuate(const ValuationDef& v, const MPoly& f) {
  if (f.is_zero()) fail(ErrorKind::domain, "the zero polynomial has no value");
  Valuation out;
  out.expansion = expand(v, f);
  const auto& terms = out.expansion.terms;
  // Distinct canonical exponent vectors have distinct first coordinates, so
  // the minimum is decided there and attained exactly once.
  std::vector<QuadReal> firsts;
  firsts.reserve(terms.size());
  for (const auto& t : terms) firsts.push_back(term_first(v, t));
  std::size_t best = 0;
  for (std::size_t k = 1; k < terms.size(); ++k)
    if (firsts[k] < firsts[best]) best = k;
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (k != best && firsts[k] == firsts[best])
      fail(ErrorKind::internal, "minimum of the expansion is attained twice");
  out.witness = best;
  out.value = term_value(v, terms[best]);
  return out;
}

// ---------------------------------------------------- product normal form

Expansion normalize_product(const ValuationDef& v, const Expansion& input, std::vector<LexVec>* trace) {
  using Key = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;  // (beta, alpha)
  std::map<Key, LaurentZ> work;
  auto add = [&work](Key key, const LaurentZ& c) {
    trim(key.first);
    trim(key.second);
    auto& slot = work[key];
    slot += c;
    if (slot.is_zero()) work.erase(key);
  };
  for (const auto& t : input.terms) add({t.beta, t.alpha}, t.coeff);

  auto snapshot = [&]() {
    Expansion e;
    for (const auto& [k, c] : work) e.terms.push_back({c, k.second, k.first});
    return e;
  };
  auto tail_weight = [](const std::vector<std::uint64_t>& e, bool& reducible) {
    std::uint64_t n = 0;
    for (std::size_t i = 1; i < e.size(); ++i) {
      n += e[i];
      if (e[i] >= 2) reducible = true;
    }
    return n;
  };

  for (;;) {
    // Descend on the largest total exponent among reducible terms.
    auto pick = work.end();
    std::uint64_t pick_n = 0;
    for (auto it = work.begin(); it != work.end(); ++it) {
      bool reducible = false;
      std::uint64_t n = tail_weight(it->first.first, reducible) + tail_weight(it->first.second, reducible);
      if (reducible && (pick == work.end() || n > pick_n)) {
        pick = it;
        pick_n = n;
      }
    }
    if (pick == work.end()) break;

    Key key = pick->first;
    LaurentZ coeff = pick->second;
    work.erase(pick);

    bool outer = false;
    std::size_t idx = 0;
    for (std::size_t i = 1; i < key.second.size() && idx == 0; ++i)
      if (key.second[i] >= 2) idx = i;
    if (idx == 0) {
      outer = true;
      for (std::size_t i = 1; i < key.first.size() && idx == 0; ++i)
        if (key.first[i] >= 2) idx = i;
    }
    const SeqFamily& fam = v.family(outer);
    const Int& w = fam.weight(idx);
    if (!w.fits_slong_p()) fail(ErrorKind::cap, "weight too large for symbolic rewriting");
    std::vector<std::uint64_t>& exps = outer ? key.first : key.second;
    exps[idx] -= 2;
    if (exps.size() < idx + 2) exps.resize(idx + 2, 0);

    std::vector<std::uint64_t> up = exps;
    up[idx + 1] += 1;
    std::vector<std::uint64_t> down = exps;
    down[0] += std::uint64_t{1} << (idx + 1);
    down[idx - 1] += 1;

    LaurentZ up_coeff = coeff;
    LaurentZ down_coeff = coeff;
    if (fam.kind() == FamilyKind::P) {
      const LaurentZ shift(Rat(1), -w.get_si());
      up_coeff = coeff * shift;
      down_coeff = coeff * shift;
    } else {
      down_coeff = coeff * LaurentZ(Rat(1), w.get_si());
    }
    Key up_key = key;
    Key down_key = key;
    (outer ? up_key.first : up_key.second) = std::move(up);
    (outer ? down_key.first : down_key.second) = std::move(down);
    add(std::move(up_key), up_coeff);
    add(std::move(down_key), down_coeff);

    if (trace) trace->push_back(expansion_min(v, snapshot()));
  }
  Expansion out = snapshot();
  std::sort(out.terms.begin(), out.terms.end(), term_less);
  return out;
}

// ---------------------------------------------------------- key identity

KeyIdentity check_key_identity(const ValuationDef& v, bool outer, std::size_t i, bool symbolic) {
  if (i < 1) fail(ErrorKind::usage, "key identities start at index 1");
  const SeqFamily& fam = v.family(outer);
  KeyIdentity out;
  out.index = i;
  out.outer = outer;
  const LexVec vz = v.value_of_z();
  const QuadReal w(fam.weight(i));
  const QuadReal power(pow2(i + 1));
  const LexVec cur = v.family_value(outer, i);
  const LexVec base = v.family_value(outer, 0);
  const LexVec prev = v.family_value(outer, i - 1);
  if (fam.kind() == FamilyKind::P) {
    out.square_side = vz.scaled(w) + cur.scaled(QuadReal(2L));
    out.tail_side = base.scaled(power) + prev;
  } else {
    out.square_side = cur.scaled(QuadReal(2L));
    out.tail_side = vz.scaled(w) + base.scaled(power) + prev;
  }
  out.next_value = v.family_value(outer, i + 1);
  out.arithmetic = out.square_side == out.tail_side && out.tail_side < out.next_value;

  if (symbolic) {
    const MPoly& p = fam.poly(i);
    Monomial base_power;
    base_power[fam.base_var()] = std::uint64_t{1} << (i + 1);
    MPoly square = p * p;
    MPoly tail = fam.poly(i - 1).times_term(Rat(1), base_power, 0);
    if (fam.kind() == FamilyKind::P) {
      square = square.times_term(Rat(1), Monomial{}, w.rat_part().mantissa().get_si());
    } else {
      tail = tail.times_term(Rat(1), Monomial{}, w.rat_part().mantissa().get_si());
    }
    const LexVec sq = valuate(v, square).value;
    const LexVec tl = valuate(v, tail).value;
    const LexVec nx = valuate(v, fam.poly(i + 1)).value;
    out.symbolic = sq == tl && tl < nx && sq == out.square_side && nx == out.next_value;
  }
  return out;
}

// -------------------------------------------------------- weight choices

namespace {

std::vector<Int> choose_weights(const IntFunction& fn, std::size_t i_max, bool decreasing) {
  std::vector<Int> out;
  Int prev = 0;  // gamma_{i-1} or delta_{i-1}, integral by construction
  Int prev_bound;
  for (std::size_t i = 1; i <= i_max; ++i) {
    const Int bound = fn(weight_probe(i));
    if (i > 1 && (decreasing ? !(bound < prev_bound) : !(bound > prev_bound)))
      fail(ErrorKind::usage, fn.descriptor() + " is not " + (decreasing ? "decreasing" : "increasing") +
                                 " on the probed arguments");
    prev_bound = bound;
    // decreasing: (prev - s)/2 < bound  <=>  s > prev - 2 bound
    // increasing: (prev + s)/2 > bound  <=>  s > 2 bound - prev
    Int w = decreasing ? Int(prev - 2 * bound + 1) : Int(2 * bound - prev + 1);
    if (w < 1) w = 1;
    Int diff = w - prev;
    if (mpz_odd_p(diff.get_mpz_t())) w += 1;
    prev = decreasing ? Int((prev - w) / 2) : Int((prev + w) / 2);
    out.push_back(w);
  }
  return out;
}

}  // namespace

std::vector<Int> choose_sigma(const IntFunction& f, std::size_t i_max) {
  return choose_weights(f, i_max, true);
}

std::vector<Int> choose_tau(const IntFunction& g, std::size_t i_max) {
  return choose_weights(g, i_max, false);
}

}  // namespace semival
