#pragma once

// Generating sequences and the rank-2 valuations they define.
//
// P family (weights sigma):  P_0 = x, P_1 = y,
//   P_{i+1} = z^sigma(i) P_i^2 - P_0^(2^(i+1)) P_{i-1},   nu(P_i) = (eta_i, gamma_i)
// Q family (weights tau):    Q_0, Q_1 = (x, y) or (u, v),
//   Q_{i+1} = Q_i^2 - z^tau(i) Q_0^(2^(i+1)) Q_{i-1},     nu(Q_i) = (eta_i, delta_i)
// with eta_0 = 1, eta_{i+1} = 2 eta_i + 1/2^(i+1),
//      gamma_i = (gamma_{i-1} - sigma(i)) / 2,  delta_i = (delta_{i-1} + tau(i)) / 2.
// In the five variable form the Q values are scaled by sqrt2 in the first
// coordinate, so nu(u) = (sqrt2, 0).

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "exact_arith.hpp"
#include "intfun.hpp"
#include "poly.hpp"

namespace semival {

enum class FamilyKind { P, Q };

Dyadic eta(std::size_t i);
// (1/3)(2^(i+2) - 1/2^i), evaluated independently of the recursion.
Dyadic eta_closed_form(std::size_t i);

class SeqFamily {
 public:
  // weights[k] holds the weight of index k + 1.
  SeqFamily(FamilyKind kind, std::vector<Int> weights, Var base = Var::x, Var lead = Var::y);

  FamilyKind kind() const { return kind_; }
  Var base_var() const { return base_; }
  Var lead_var() const { return lead_; }
  char symbol() const { return kind_ == FamilyKind::P ? 'P' : 'Q'; }
  const char* weight_name() const { return kind_ == FamilyKind::P ? "sigma" : "tau"; }

  const std::vector<Int>& weights() const { return weights_; }
  bool has_weight(std::size_t i) const { return i >= 1 && i <= weights_.size(); }
  const Int& weight(std::size_t i) const;

  // P_i (or Q_i); needs the weights of indices 1 .. i-1.
  const MPoly& poly(std::size_t i) const;

  // gamma_i (P) or delta_i (Q); needs the weights of indices 1 .. i.
  bool has_second(std::size_t i) const { return i < seconds_.size(); }
  const Dyadic& second(std::size_t i) const;

  // Copy whose i-th second coordinate is shifted by delta; only used to
  // build negative controls.
  SeqFamily with_second_offset(std::size_t i, const Dyadic& delta) const;

 private:
  struct PolyCache {
    std::mutex mu;
    std::deque<MPoly> polys;
  };

  FamilyKind kind_;
  Var base_;
  Var lead_;
  std::vector<Int> weights_;
  std::vector<Dyadic> seconds_;
  std::shared_ptr<PolyCache> cache_;
};

Dyadic gamma(const SeqFamily& fam, std::size_t i);
Dyadic delta(const SeqFamily& fam, std::size_t i);

enum class Form { P3, Q3, Combined5 };

std::string form_name(Form f);
Form parse_form(std::string_view text);

class ValuationDef {
 public:
  static ValuationDef p3(std::vector<Int> sigma);
  static ValuationDef q3(std::vector<Int> tau);
  static ValuationDef combined5(std::vector<Int> sigma, std::vector<Int> tau);

  ValuationDef(Form form, std::shared_ptr<const SeqFamily> inner,
               std::shared_ptr<const SeqFamily> outer = nullptr);

  Form form() const { return form_; }
  const GroupSpec& group() const { return group_; }

  // Family in (x, y): P for P3 and Combined5, Q for Q3.
  const SeqFamily& inner() const { return *inner_; }
  // Q family in (u, v); only present for Combined5.
  const SeqFamily* outer() const { return outer_.get(); }
  const SeqFamily& family(bool outer) const;

  std::vector<Var> variables() const;

  LexVec value_of_z() const;
  // First coordinate of nu(P_i) / nu(Q_i); i = 0 is the base variable.
  QuadReal first_value(bool outer, std::size_t i) const;
  // nu(P_i) / nu(Q_i).
  LexVec family_value(bool outer, std::size_t i) const;

  ValuationDef with_family(bool outer, SeqFamily fam) const;

 private:
  Form form_;
  std::shared_ptr<const SeqFamily> inner_;
  std::shared_ptr<const SeqFamily> outer_;
  GroupSpec group_;
};

// One term a(z) * prod base^alpha_0 F_1^alpha_1 ... of an expansion. Exponent
// vectors carry no trailing zeros. beta is used by the five variable form.
struct ExpansionTerm {
  LaurentZ coeff;
  std::vector<std::uint64_t> alpha;
  std::vector<std::uint64_t> beta;

  friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

struct Expansion {
  std::vector<ExpansionTerm> terms;

  friend bool operator==(const Expansion&, const Expansion&) = default;
  // True when every exponent at index >= 1 is 0 or 1.
  bool is_canonical() const;
};

std::string term_label(const ValuationDef& v, const ExpansionTerm& t);

const MPoly& build_seq(const SeqFamily& fam, std::size_t i);

Expansion expand(const ValuationDef& v, const MPoly& f);
MPoly reconstruct(const ValuationDef& v, const Expansion& e);

// (0, ord_z a) + sum alpha_i nu(P_i) + sum beta_i nu(Q_i), any exponents.
LexVec term_value(const ValuationDef& v, const ExpansionTerm& t);
// Minimum of term_value over the terms (the Lambda of a product expansion).
LexVec expansion_min(const ValuationDef& v, const Expansion& e);

struct Valuation {
  LexVec value;
  std::size_t witness = 0;  // index into expansion.terms
  Expansion expansion;
};

Valuation valuate(const ValuationDef& v, const MPoly& f);

// Rewrites squares of family members until every exponent at index >= 1 is
// 0 or 1, collecting like terms. When trace is given, the minimum value of
// the expansion after every substitution is appended to it.
Expansion normalize_product(const ValuationDef& v, const Expansion& input,
                            std::vector<LexVec>* trace = nullptr);

struct KeyIdentity {
  std::size_t index = 0;
  bool outer = false;
  LexVec square_side;  // nu(z^sigma P_i^2)   or nu(Q_i^2)
  LexVec tail_side;    // nu(P_0^2^(i+1) P_{i-1}) or nu(z^tau Q_0^2^(i+1) Q_{i-1})
  LexVec next_value;   // nu(P_{i+1})
  bool arithmetic = false;
  std::optional<bool> symbolic;
  bool holds() const { return arithmetic && symbolic.value_or(true); }
};

// Checks the key identity at index i >= 1 from the value data, and, when
// symbolic is set, by valuating the actual polynomials.
KeyIdentity check_key_identity(const ValuationDef& v, bool outer, std::size_t i, bool symbolic);

// Smallest positive weights, index by index, with gamma_i integral and
// gamma_i < f(i 2^(i+3)) (respectively delta_i > g(i 2^(i+3))).
std::vector<Int> choose_sigma(const IntFunction& f, std::size_t i_max);
std::vector<Int> choose_tau(const IntFunction& g, std::size_t i_max);

// The argument i 2^(i+3) at which the weight conditions probe f and g.
Int weight_probe(std::size_t i);

}  // namespace semival
