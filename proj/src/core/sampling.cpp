#include "sampling.hpp"

#include "error.hpp"

namespace semival {

MPoly random_poly(std::mt19937_64& rng, const PolyShape& shape) {
  std::uniform_int_distribution<std::size_t> n_terms(1, shape.max_terms);
  std::uniform_int_distribution<std::uint64_t> lead_deg(0, shape.max_lead_degree);
  std::uniform_int_distribution<std::uint64_t> other_deg(0, shape.max_other_degree);
  std::uniform_int_distribution<std::int64_t> zexp(shape.z_min, shape.z_max);
  std::uniform_int_distribution<long> num(-shape.coeff_bound, shape.coeff_bound);
  std::uniform_int_distribution<long> den(1, 3);
  for (;;) {
    MPoly out;
    const std::size_t terms = n_terms(rng);
    for (std::size_t t = 0; t < terms; ++t) {
      Monomial m;
      for (Var v : shape.vars) m[v] = v == shape.lead ? lead_deg(rng) : other_deg(rng);
      long a = 0;
      while (a == 0) a = num(rng);
      Rat c(a, den(rng));
      c.canonicalize();
      out += MPoly::term(c, m, zexp(rng));
    }
    if (!out.is_zero()) return out;
  }
}

PolyShape shape_for(const ValuationDef& v, std::uint64_t max_lead_degree) {
  PolyShape s;
  s.vars = v.variables();
  s.max_lead_degree = max_lead_degree;
  if (v.form() == Form::Combined5) {
    s.max_other_degree = 3;
    s.max_terms = 8;
  }
  return s;
}

namespace {

void record(SelftestCheck& c, bool ok, const std::string& detail) {
  ++c.trials;
  if (ok) {
    ++c.passed;
  } else if (c.first_failure.empty()) {
    c.first_failure = detail;
  }
}

}  // namespace

std::vector<SelftestCheck> selftest(const ValuationDef& v, const SelftestOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::vector<SelftestCheck> out;

  SelftestCheck eta_check;
  eta_check.name = "eta_closed_form";
  for (std::size_t i = 0; i <= 64; ++i) record(eta_check, eta(i) == eta_closed_form(i), "i = " + std::to_string(i));
  out.push_back(eta_check);

  // Round trip and unique minimiser on random inputs.
  SelftestCheck round;
  round.name = "expansion_roundtrip";
  const PolyShape shape = shape_for(v, v.form() == Form::Combined5 ? 3 : 15);
  for (std::size_t k = 0; k < opt.roundtrip; ++k) {
    MPoly f = random_poly(rng, shape);
    Expansion e = expand(v, f);
    bool ok = reconstruct(v, e) == f && expand(v, reconstruct(v, e)) == e && e.is_canonical();
    record(round, ok, f.str());
  }
  out.push_back(round);

  SelftestCheck hom;
  hom.name = "valuation_homomorphism";
  PolyShape small = shape_for(v, v.form() == Form::Combined5 ? 1 : 7);
  small.max_terms = 6;
  small.max_other_degree = 3;
  for (std::size_t k = 0; k < opt.homomorphism; ++k) {
    MPoly f = random_poly(rng, small);
    MPoly g = random_poly(rng, small);
    const LexVec vf = valuate(v, f).value;
    const LexVec vg = valuate(v, g).value;
    bool ok = valuate(v, f * g).value == vf + vg;
    MPoly s = f + g;
    if (!s.is_zero()) {
      const LexVec vs = valuate(v, s).value;
      const LexVec lo = std::min(vf, vg);
      ok = ok && vs >= lo && (vf == vg || vs == lo);
    }
    record(hom, ok, f.str() + " ; " + g.str());
  }
  out.push_back(hom);

  for (int fam = 0; fam < (v.outer() ? 2 : 1); ++fam) {
    const bool outer = fam == 1;
    const SeqFamily& sf = v.family(outer);
    SelftestCheck arith;
    arith.name = std::string("key_identity_arithmetic_") + sf.symbol();
    SelftestCheck sym;
    sym.name = std::string("key_identity_symbolic_") + sf.symbol();
    for (std::size_t i = 1; i <= opt.arithmetic_max && sf.has_second(i + 1); ++i) {
      const bool symbolic = i <= opt.symbolic_max && sf.has_weight(i);
      KeyIdentity k = check_key_identity(v, outer, i, symbolic);
      record(arith, k.arithmetic, "i = " + std::to_string(i));
      if (k.symbolic) record(sym, *k.symbolic, "i = " + std::to_string(i));
    }
    out.push_back(arith);
    out.push_back(sym);
  }
  return out;
}

}  // namespace semival
