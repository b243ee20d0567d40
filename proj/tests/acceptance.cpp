// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "genseq.hpp"
#include "semigroup_lab.hpp"
#include "support.hpp"

using namespace semival;
using svtest::Gen;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::vector<Int> long_sigma() {
  std::vector<Int> w;
  for (long k = 0; k < 66; ++k) w.emplace_back(2 + 3 * k);
  return w;
}

const std::vector<Int> kSigma{2, 5, 7, 9, 11, 13, 15};

Outcome roundtrip() {
  Outcome o;
  const ValuationDef v = ValuationDef::p3(kSigma);
  Gen g(1);
  for (int t = 0; t < 1000 && o.ok; ++t) {
    const MPoly f = g.poly({Var::x, Var::y}, Var::y, 15, 6, 20, -5, 5);
    const Expansion e = expand(v, f);
    const MPoly back = reconstruct(v, e);
    o.require(back == f, "reconstruct differs for " + f.str());
    o.require(e.is_canonical(), "non-canonical expansion of " + f.str());
    o.require(expand(v, back) == e, "re-expansion differs for " + f.str());
  }
  o.detail = o.ok ? "1000 polynomials" : o.detail;
  return o;
}

Outcome homomorphism() {
  Outcome o;
  const ValuationDef v = ValuationDef::p3(kSigma);
  Gen g(2);
  std::size_t strict = 0;
  for (int t = 0; t < 500 && o.ok; ++t) {
    const MPoly f = g.poly({Var::x, Var::y}, Var::y, 7, 5, 8), h = g.poly({Var::x, Var::y}, Var::y, 7, 5, 8);
    const Valuation vf = valuate(v, f), vh = valuate(v, h);
    o.require(valuate(v, f * h).value == vf.value + vh.value, "product: " + f.str() + " ; " + h.str());
    const MPoly s = f + h;
    if (!s.is_zero()) {
      const LexVec vs = valuate(v, s).value, lo = std::min(vf.value, vh.value);
      o.require(vs >= lo, "sum below min: " + f.str() + " ; " + h.str());
      if (vf.value != vh.value) {
        ++strict;
        o.require(vs == lo, "sum not equal to min: " + f.str() + " ; " + h.str());
      }
    }
    for (const Valuation* val : {&vf, &vh}) {
      std::size_t at_min = 0;
      for (const auto& term : val->expansion.terms) at_min += term_value(v, term) == val->value;
      o.require(at_min == 1, "minimum attained " + std::to_string(at_min) + " times");
    }
  }
  if (o.ok) o.detail = "500 pairs, " + std::to_string(strict) + " with distinct values";
  return o;
}

Outcome key_identities() {
  Outcome o;
  const std::vector<Int> w = long_sigma();
  const ValuationDef p = ValuationDef::p3(w), q = ValuationDef::q3(w);
  for (std::size_t i = 1; i <= 64; ++i) {
    o.require(check_key_identity(p, false, i, false).arithmetic, "P arithmetic at " + std::to_string(i));
    o.require(check_key_identity(q, false, i, false).arithmetic, "Q arithmetic at " + std::to_string(i));
  }
  for (std::size_t i = 1; i <= 6; ++i) {
    o.require(check_key_identity(p, false, i, true).holds(), "P symbolic at " + std::to_string(i));
    o.require(check_key_identity(q, false, i, true).holds(), "Q symbolic at " + std::to_string(i));
  }
  for (std::size_t i = 0; i <= 64; ++i) {
    o.require(eta(i) == eta_closed_form(i), "eta closed form at " + std::to_string(i));
    o.require(eta(i).to_rat() == svtest::oracle_eta(i), "eta oracle at " + std::to_string(i));
  }
  if (o.ok) o.detail = "symbolic i <= 6, arithmetic i <= 64, both families";
  return o;
}

Outcome staircase_counts() {
  Outcome o;
  for (unsigned r = 1; r <= 2; ++r)
    for (long n = 1; n <= 64; ++n)
      o.require(stair_count(r, n) == static_cast<long>(svtest::oracle_stair_block(r, n).size()),
                "block count r=" + std::to_string(r) + " n=" + std::to_string(n));
  for (unsigned r = 1; r <= 3; ++r)
    for (long n = 1; n <= 4096; ++n) {
      const Int c = stair_count(r, n), nr = ipow(Int(n), r);
      o.require(nr < c && c <= (Int(1) << r) * nr, "block sandwich r=" + std::to_string(r) + " n=" + std::to_string(n));
    }
  for (unsigned r = 1; r <= 3; ++r) {
    Int running = 0;
    for (long y = 1; y <= 512; ++y) {
      const Int cum = stair_cumulative(r, y), f = svtest::oracle_powersum(y, r);
      o.require(cum == running, "cumulative count y=" + std::to_string(y));
      // At y = 1 both sides are the empty count.
      o.require(y == 1 ? (f == 0 && cum == 0) : f < cum, "cumulative lower y=" + std::to_string(y));
      o.require(cum <= (Int(1) << r) * f, "cumulative upper y=" + std::to_string(y));
      running += stair_count(r, y);
    }
  }
  if (o.ok) o.detail = "blocks r <= 2, n <= 64; sandwich r <= 3, n <= 4096; cumulative y <= 512 (y = 1 is 0 = 0)";
  return o;
}

Outcome contradiction() {
  Outcome o;
  const auto t = contradiction_table(1, 64, doubling_list(4096), 1000000);
  o.require(t.first_crossing.has_value(), "no crossing up to y2 = 4096");
  for (const auto& row : t.rows) o.require(row.lower <= row.count, "lower bound above count at y2=" + to_string(row.y2));
  std::vector<Int> ys;
  for (long y = 2; y <= 64; y *= 2) ys.emplace_back(y);
  const auto small = contradiction_table(1, 64, ys, 1000000);
  Rat prev(-1);
  for (const auto& row : small.rows) {
    Rat ratio(row.count, Int(64 * 64) * row.y2);
    ratio.canonicalize();
    o.require(ratio > prev, "ratio not increasing at y2=" + to_string(row.y2));
    prev = ratio;
  }
  if (o.ok) o.detail = "first crossing at y2 = " + to_string(t.rows[*t.first_crossing].y2);
  return o;
}

Outcome wild() {
  Outcome o;
  const auto f = IntFunction::neg_pow(2);
  const auto g = IntFunction::pow(2);
  const Int N = 4096;
  const std::uint64_t states = 4'000'000;
  std::size_t rows = 0;
  struct P {
    const char* a;
    long c;
  };
  for (WildKind kind : {WildKind::decreasing, WildKind::increasing, WildKind::both})
    for (P pr : {P{"1", 1}, P{"3/2", 2}, P{"5/4", 3}}) {
      WildParams params;
      params.a = QuadReal::parse(pr.a);
      params.c = pr.c;
      std::optional<IntFunction> ff, gg;
      if (kind != WildKind::increasing) ff = f;
      if (kind != WildKind::decreasing) gg = g;
      const ValuationDef v = wild_valuation(kind, ff, gg, wild_index_bound(kind, params, N));
      const auto cert = wild_certificate(kind, v, params, ff, gg, N, 4, states);
      const std::string tag = wild_kind_name(kind) + " a=" + pr.a + " c=" + std::to_string(pr.c);
      o.require(cert.valid, tag + " invalid at n=" + (cert.first_bad ? to_string(*cert.first_bad) : "?"));
      o.require(!cert.rows.empty(), tag + " has no rows");
      for (const auto& row : cert.rows)
        for (const auto& [name, status] : row.checks) o.require(status == "pass", tag + " " + name + " " + status);
      rows += cert.rows.size();
    }
  // Negative control: shift one weight so gamma_3 misses its target.
  WildParams params;
  const std::size_t top = wild_index_bound(WildKind::decreasing, params, N);
  std::vector<Int> w = wild_valuation(WildKind::decreasing, f, std::nullopt, top).inner().weights();
  w[2] -= 2;
  const auto bad = wild_certificate(WildKind::decreasing, ValuationDef::p3(w), params, f, std::nullopt, N, 4, states);
  o.require(!bad.valid && bad.first_bad.has_value(), "perturbed weights still certified");
  if (o.ok) o.detail = "9 certificates, " + std::to_string(rows) + " rows; control fails at n=" + to_string(*bad.first_bad);
  return o;
}

Outcome tilde_oracle() {
  Outcome o;
  // Five weights: values known through P_5 only.
  const ValuationDef v = ValuationDef::p3({2, 5, 7, 9, 11});
  const QuadReal top(Dyadic(eta(5).ceil() + 1));
  const GenSemigroup g = GenSemigroup::from_valuation(v, top);
  const TildeSolver solver(g, top);
  Gen r(7);
  std::size_t hits = 0;
  for (int t = 0; t < 200; ++t) {
    const Int scaled = r.range(0, top.floor().get_si() * 64 - 1);
    const QuadReal lambda(Dyadic(scaled, 6));
    const auto oracle = svtest::oracle_tilde(g.generators(), lambda);
    const auto got = solver.query(lambda);
    o.require(got.has_value() == oracle.has_value(), "membership differs at " + lambda.str());
    if (got && oracle) {
      ++hits;
      o.require(got->tilde == *oracle, "tilde differs at " + lambda.str());
      o.require(project(got->tilde, 1) == LexVec({lambda}), "projection at " + lambda.str());
    }
  }
  if (o.ok) o.detail = "200 lambdas, " + std::to_string(hits) + " in the projected semigroup, " +
                       std::to_string(g.size()) + " generators";
  return o;
}

Outcome box_bounds() {
  Outcome o;
  const ValuationDef v = ValuationDef::p3({2, 5});
  std::size_t largest = 0;
  for (long y1 = 1; y1 <= 32; ++y1)
    for (long y2 = 1; y2 <= 32; ++y2) {
      const auto rep = box_bound_check(v, y1, y2);
      o.require(rep.dims == std::vector<std::uint64_t>{1, 2}, "dims");
      o.require(rep.bound == theorem1_bound({1, 2}, {1, 1, 1}, {y1, y2}, Rat(1)), "bound");
      o.require(rep.pass, "count " + std::to_string(rep.count) + " above bound at (" + std::to_string(y1) + ", " +
                              std::to_string(y2) + ")");
      largest = std::max(largest, rep.count);
    }
  if (o.ok) o.detail = "1024 boxes, largest count " + std::to_string(largest);
  return o;
}

Outcome hilbert_samuel() {
  Outcome o;
  for (unsigned d = 1; d <= 4; ++d)
    for (long y = 0; y <= 12; ++y)
      o.require(hs_length(d, y) == svtest::oracle_monomials_below(d, y),
                "d=" + std::to_string(d) + " y=" + std::to_string(y));
  if (o.ok) o.detail = "d <= 4, y <= 12";
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "expansion round trip", 20, roundtrip},
      {2, "valuation homomorphism", 30, homomorphism},
      {3, "key identities and eta", 10, key_identities},
      {4, "staircase counts", 10, staircase_counts},
      {5, "staircase contradiction", 10, contradiction},
      {6, "wild certificates", 30, wild},
      {7, "tilde oracle equivalence", 20, tilde_oracle},
      {8, "box bound consistency", 30, box_bounds},
      {9, "Hilbert-Samuel length", 2, hilbert_samuel},
  };
  const auto start = clock::now();
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (out.ok && secs > c.budget) {
      out.ok = false;
      out.detail += " (over the time budget)";
    }
    failed += !out.ok;
    std::printf("%s criterion %d: %s [%.2fs / %.0fs] %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.budget,
                out.detail.c_str());
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(clock::now() - start).count();
  const bool ok10 = total <= 120;
  failed += !ok10;
  std::printf("%s criterion 10: full acceptance run [%.2fs / 120s] offline, single process\n", ok10 ? "PASS" : "FAIL",
              total);
  return failed == 0 ? 0 : 1;
}
