#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "error.hpp"
#include "semigroup_lab.hpp"
#include "support.hpp"

using namespace semival;
using svtest::Gen;

namespace {

LexVec lv(const char* s) { return LexVec::parse(s); }
Dyadic dy(const char* s) { return Dyadic::parse(s); }

std::vector<Int> ints(std::initializer_list<long> xs) {
  std::vector<Int> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

GroupSpec rank2() { return GroupSpec({CoordKind::dyadic, CoordKind::dyadic}); }

std::vector<std::string> strs(const std::vector<Dyadic>& v) {
  std::vector<std::string> out;
  for (const auto& d : v) out.push_back(d.str());
  return out;
}

// Count of S below c by walking unit blocks with the grid oracle.
Int oracle_scaled(long c, unsigned r) {
  Int total = 0;
  for (long n = 1; n < c; ++n) total += static_cast<long>(svtest::oracle_stair_block(r, n).size());
  return total;
}

}  // namespace

TEST(Staircase, SpecCounts) {
  EXPECT_EQ(stair_count(1, 1), 2);
  EXPECT_EQ(stair_count(1, 5), 8);
  EXPECT_EQ(stair_count(3, 4), 512);
  EXPECT_TRUE(stair_sandwich(3, 4));
  EXPECT_THROW(stair_count(1, 0), Error);
  const StairIndex idx = stair_decompose(5);
  EXPECT_EQ(idx.m, 2u);
  EXPECT_EQ(idx.j, 1);
}

TEST(Staircase, SpecMembers) {
  EXPECT_EQ(strs(stair_members(1, dy("1"), dy("2"))), (std::vector<std::string>{"1", "3/2"}));
  EXPECT_EQ(strs(stair_members(1, dy("2"), dy("3"))), (std::vector<std::string>{"2", "9/4", "5/2", "11/4"}));
  EXPECT_TRUE(stair_members(1, dy("0"), dy("1")).empty());
  EXPECT_THROW(stair_members(3, dy("0"), dy("4096"), 1000), Error);
}

TEST(Staircase, CountMatchesEnumeration) {
  for (unsigned r = 1; r <= 2; ++r)
    for (long n = 1; n <= 64; ++n) {
      const auto oracle = svtest::oracle_stair_block(r, n);
      const auto members = stair_members(r, Dyadic(n), Dyadic(n + 1));
      ASSERT_EQ(stair_count(r, n), static_cast<long>(oracle.size())) << r << " " << n;
      ASSERT_EQ(members.size(), oracle.size());
      for (std::size_t k = 0; k < members.size(); ++k) ASSERT_EQ(members[k].to_rat(), oracle[k]);
      ASSERT_TRUE(std::is_sorted(members.begin(), members.end()));
    }
}

TEST(Staircase, SandwichPerBlock) {
  for (unsigned r = 1; r <= 3; ++r)
    for (long n = 1; n <= 4096; ++n) {
      const Int c = stair_count(r, n), nr = ipow(Int(n), r);
      ASSERT_LT(nr, c);
      ASSERT_LE(c, (Int(1) << r) * nr);
    }
}

TEST(Staircase, Powersum) {
  EXPECT_EQ(powersum(4, 1), 6);
  EXPECT_EQ(powersum(1, 3), 0);
  EXPECT_EQ(powersum(5, 2), 30);
  for (unsigned r = 0; r <= 6; ++r)
    for (long y = 1; y <= 200; y += 7) ASSERT_EQ(powersum(y, r), svtest::oracle_powersum(y, r)) << y << " " << r;
}

TEST(Staircase, CumulativeSandwich) {
  for (unsigned r = 1; r <= 3; ++r) {
    Int running = 0;
    for (long y = 1; y <= 512; ++y) {
      const Int cum = stair_cumulative(r, y);
      ASSERT_EQ(cum, running) << y;
      const Int f = powersum(y, r);
      if (y == 1) {
        ASSERT_EQ(cum, 0);  // both sides vanish
      } else {
        ASSERT_LT(f, cum);
      }
      ASSERT_LE(cum, (Int(1) << r) * f);
      running += stair_count(r, y);
    }
  }
}

TEST(Staircase, ScaledCounts) {
  EXPECT_EQ(scaled_count(1, 1, 4), 10);
  EXPECT_EQ(scaled_count(2, 1, 2), 10);
  for (long c = 1; c <= 5; ++c) EXPECT_EQ(scaled_count(c, 1, 1), oracle_scaled(c, 1));
  EXPECT_EQ(scaled_count(7, 2, 0), 0);
  for (long c = 1; c <= 4; ++c)
    for (long y = 1; y <= 8; ++y) {
      const Int s = scaled_count(c, 1, y);
      ASSERT_EQ(s, oracle_scaled(c * y, 1));
      if (c * y >= 2) {
        ASSERT_LT(powersum(c * y, 1), s);
      }
      ASSERT_LE(s, 2 * powersum(c * y, 1));
    }
}

TEST(Staircase, TBoxCount) {
  EXPECT_EQ(t_box_count(1, 4, 1), 10);
  EXPECT_EQ(t_box_count(1, 4, 2), 20);
  // y1 = 1: slice m contributes #(S cap [0, c(m)[); c = 1, 1, 2, ..., 9.
  Int expect = 0;
  for (long m = 0; m < 10; ++m) expect += oracle_scaled(m == 0 ? 1 : m, 1);
  EXPECT_EQ(t_box_count(1, 1, 10), expect);
  EXPECT_EQ(expect, 196);
  Int prev = 0;
  for (long y2 = 1; y2 <= 40; ++y2) {
    const Int cur = t_box_count(1, 8, y2);
    ASSERT_GE(cur, prev);
    prev = cur;
  }
}

TEST(Staircase, Closure) {
  Gen g;
  for (unsigned r = 1; r <= 2; ++r) {
    const auto members = stair_members(r, dy("1"), dy("24"));
    for (int t = 0; t < 2000; ++t) {
      const auto& a = members[static_cast<std::size_t>(g.range(0, static_cast<long>(members.size()) - 1))];
      const auto& b = members[static_cast<std::size_t>(g.range(0, static_cast<long>(members.size()) - 1))];
      ASSERT_TRUE(stair_is_member(r, a + b)) << a.str() << " + " << b.str();
    }
  }
  EXPECT_FALSE(stair_is_member(1, dy("1/2")));
  EXPECT_FALSE(stair_is_member(1, dy("5/4")));
  EXPECT_TRUE(stair_is_member(1, dy("9/4")));
}

TEST(Contradiction, Table) {
  const auto t = contradiction_table(1, 64, doubling_list(4096), 1000000);
  ASSERT_TRUE(t.first_crossing.has_value());
  for (const auto& row : t.rows) {
    EXPECT_LE(row.lower, row.count);
    EXPECT_EQ(row.claimed, Int(1000000) * 64 * 64 * row.y2);
    EXPECT_EQ(row.count, t_box_count(1, 64, row.y2));
  }
  const auto single = contradiction_table(1, 64, doubling_list(1), 1000000);
  EXPECT_FALSE(single.first_crossing.has_value());
  EXPECT_EQ(doubling_list(10), ints({1, 2, 4, 8, 10}));
}

TEST(GenSemigroup, ValidationAndOrder) {
  GenSemigroup g(rank2(), {lv("(1, 0)"), lv("(0, 1)"), lv("(1, 0)")});
  EXPECT_EQ(g.size(), 2u);
  EXPECT_LT(g.generators()[0], g.generators()[1]);
  EXPECT_THROW(GenSemigroup(rank2(), {lv("(0, -1)")}), Error);
  EXPECT_THROW(GenSemigroup(rank2(), {lv("(1)")}), Error);
}

TEST(GenSemigroup, FromValuation) {
  const ValuationDef v = ValuationDef::p3(ints({2, 5}));
  const GenSemigroup g = GenSemigroup::from_valuation(v, QuadReal(100L));
  std::set<std::string> labels(g.labels().begin(), g.labels().end());
  EXPECT_TRUE(labels.count("z") && labels.count("x") && labels.count("y") && labels.count("P_2"));
  EXPECT_FALSE(labels.count("P_3"));  // gamma_3 needs sigma(3)
}

TEST(GenEnumerate, SpecExamples) {
  GenSemigroup g(rank2(), {lv("(0, 1)"), lv("(1, 0)")});
  Box box{2, 2, lv("(0, 1)"), QuadReal(1L)};
  EXPECT_EQ(gen_enumerate(g, box), (std::vector<LexVec>{lv("(0, 1)"), lv("(1, 0)"), lv("(1, 1)")}));
  GenSemigroup empty(rank2(), {});
  EXPECT_TRUE(gen_enumerate(empty, box).empty());
}

// Brute force over exponent vectors, windows anchored at the oracle tilde.
TEST(GenEnumerate, MatchesBruteForce) {
  const ValuationDef v = ValuationDef::p3(ints({2, 5, 7}));
  for (long y1 = 1; y1 <= 5; ++y1)
    for (long y2 = 1; y2 <= 6; ++y2) {
      const Box box = make_box(v, y1, y2);
      const QuadReal top = box.t2 * QuadReal(y2);
      const GenSemigroup g = GenSemigroup::from_valuation(v, top);
      const auto& gens = g.generators();
      std::set<LexVec> seen;
      std::function<void(std::size_t, LexVec)> rec = [&](std::size_t k, LexVec acc) {
        if (!(acc[0] < top)) return;
        if (k == gens.size()) {
          if (!acc.is_zero()) seen.insert(acc);
          return;
        }
        // Second coordinates are bounded below by the tilde; cap zero-first steps by width.
        const std::size_t limit = gens[k][0].is_zero() ? static_cast<std::size_t>(y1 * 4 + 40) : 64;
        LexVec cur = acc;
        for (std::size_t a = 0; a <= limit && cur[0] < top; ++a, cur += gens[k]) rec(k + 1, cur);
      };
      rec(0, LexVec::zero(2));
      std::vector<LexVec> expect;
      for (const auto& s : seen) {
        const auto t = svtest::oracle_tilde(gens, s[0]);
        ASSERT_TRUE(t.has_value());
        if (s[1] < (*t)[1] + box.t1[1] * QuadReal(y1)) expect.push_back(s);
      }
      const auto got = gen_enumerate(g, box);
      ASSERT_EQ(got, expect) << y1 << " " << y2;
      ASSERT_TRUE(std::is_sorted(got.begin(), got.end()));
    }
}

TEST(Tilde, SpecExamples) {
  const ValuationDef v = ValuationDef::p3(ints({2, 5}));
  const GenSemigroup g = GenSemigroup::from_valuation(v, QuadReal(20L));
  const auto t = tilde(g, QuadReal(dy("21/4")));
  ASSERT_TRUE(t);
  EXPECT_EQ(t->tilde, lv("(21/4, -3)"));
  EXPECT_EQ(witness_label(g, t->witness), "P_2");
  EXPECT_EQ(tilde(g, QuadReal(0L))->tilde, lv("(0, 0)"));
  const auto one = tilde(g, QuadReal(1L));
  EXPECT_EQ(one->tilde, lv("(1, 0)"));
  EXPECT_EQ(witness_label(g, one->witness), "x");
  EXPECT_FALSE(tilde(g, QuadReal(dy("1/2"))).has_value());
}

TEST(Tilde, MatchesBruteForce) {
  std::vector<Int> sigma = ints({2, 5, 7, 9, 11});
  const ValuationDef v = ValuationDef::p3(sigma);
  const QuadReal top(dy("24"));
  const GenSemigroup g = GenSemigroup::from_valuation(v, top);
  const TildeSolver solver(g, top);
  Gen r;
  for (int t = 0; t < 200; ++t) {
    const QuadReal lambda(Dyadic(Int(r.range(0, 24 * 64 - 1)), 6));
    const auto oracle = svtest::oracle_tilde(g.generators(), lambda);
    const auto got = solver.query(lambda);
    ASSERT_EQ(got.has_value(), oracle.has_value()) << lambda.str();
    if (!got) continue;
    ASSERT_EQ(got->tilde, *oracle) << lambda.str();
    ASSERT_EQ(project(got->tilde, 1), LexVec({lambda}));
    LexVec sum = LexVec::zero(2);
    for (std::size_t k = 0; k < got->witness.size(); ++k) sum += g.generators()[k].scaled(QuadReal(Int(got->witness[k])));
    ASSERT_EQ(sum, got->tilde);
  }
}

TEST(Tilde, SurdGenerators) {
  const ValuationDef v = ValuationDef::combined5(ints({2, 5, 7}), ints({2, 5, 7}));
  const QuadReal top(12L);
  const GenSemigroup g = GenSemigroup::from_valuation(v, top);
  const TildeSolver solver(g, top);
  for (long a = 0; a <= 6; ++a)
    for (long b = 0; b <= 4; ++b) {
      const QuadReal lambda{Dyadic(Int(a), 1), Dyadic(Int(b), 1)};
      if (!(lambda < top)) continue;
      const auto oracle = svtest::oracle_tilde(g.generators(), lambda);
      const auto got = solver.query(lambda);
      ASSERT_EQ(got.has_value(), oracle.has_value()) << lambda.str();
      if (got) {
        ASSERT_EQ(got->tilde, *oracle) << lambda.str();
      }
    }
}

TEST(Tilde, StateCap) {
  const ValuationDef v = ValuationDef::p3(ints({2, 5}));
  const GenSemigroup g = GenSemigroup::from_valuation(v, QuadReal(300L));
  try {
    (void)tilde(g, QuadReal(200L), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cap);
  }
}

TEST(Successor, SpecExamples) {
  GenSemigroup g(rank2(), {lv("(0, 1)"), lv("(1, 0)")});
  EXPECT_EQ(successor(g, lv("(0, 1)"), lv("(5, 0)")), lv("(0, 2)"));
  EXPECT_EQ(successor(g, lv("(0, 0)"), lv("(5, 0)")), lv("(0, 1)"));
  EXPECT_FALSE(successor(g, lv("(0, 1)"), lv("(0, 2)")).has_value());
  GenSemigroup only_x(rank2(), {lv("(1, 0)"), lv("(5/2, -1)")});
  EXPECT_EQ(successor(only_x, lv("(1, 0)"), lv("(10, 0)")), lv("(2, 0)"));
  EXPECT_EQ(successor(only_x, lv("(2, 0)"), lv("(10, 0)")), lv("(5/2, -1)"));
}

TEST(Bounds, Theorem1AndHilbertSamuel) {
  EXPECT_EQ(theorem1_bound({1, 2}, ints({1, 1, 1}), ints({3, 5}), Rat(1)), Rat(3 * 25));
  EXPECT_EQ(theorem1_bound({0, 0}, ints({2, 3}), ints({7, 9}), Rat(0)), Rat(6));
  EXPECT_THROW(theorem1_bound({1, 2}, ints({1}), ints({3, 5}), Rat(1)), Error);
  EXPECT_EQ(hs_length(3, 2), 4);
  EXPECT_EQ(hs_length(3, 3), 10);
  for (long y = 0; y <= 12; ++y) {
    EXPECT_EQ(hs_length(1, y), y);
    for (unsigned d = 1; d <= 4; ++d) ASSERT_EQ(hs_length(d, y), svtest::oracle_monomials_below(d, y)) << d << " " << y;
  }
}

TEST(Bounds, BoxCheck) {
  const ValuationDef v = ValuationDef::p3(ints({2, 5}));
  const auto rep = box_bound_check(v, 4, 4);
  EXPECT_EQ(rep.bound, Rat(64));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.dims, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(box_bound_check(v, 1, 1).count, 0u);
  EXPECT_EQ(box_bound_check(v, 3, 0).count, 0u);
  const Box b = make_box(v, 1, 1);
  EXPECT_EQ(b.t1, lv("(0, 1)"));
  EXPECT_EQ(b.t2, QuadReal(1L));
}

TEST(Wild, SpecPipeline) {
  const auto f = IntFunction::parse("neg_linear");
  WildParams p;
  const ValuationDef v = wild_valuation(WildKind::decreasing, f, std::nullopt, wild_index_bound(WildKind::decreasing, p, 64));
  const auto cert = wild_certificate(WildKind::decreasing, v, p, f, std::nullopt, 64);
  EXPECT_EQ(cert.e, 1);
  EXPECT_EQ(cert.n0, 8);
  EXPECT_TRUE(cert.valid);
  const auto row = std::find_if(cert.rows.begin(), cert.rows.end(), [](const WildRow& r) { return r.n == 16; });
  ASSERT_NE(row, cert.rows.end());
  EXPECT_EQ(row->i, 2u);
  EXPECT_EQ(row->lambda, QuadReal(dy("21/4")));
  EXPECT_LT(Rat(row->lhs.to_rat()), Rat(-64));

  const auto g = IntFunction::parse("linear");
  const ValuationDef vq = wild_valuation(WildKind::increasing, std::nullopt, g, wild_index_bound(WildKind::increasing, p, 64));
  const auto inc = wild_certificate(WildKind::increasing, vq, p, std::nullopt, g, 64);
  EXPECT_TRUE(inc.valid);
  EXPECT_GT(delta(vq.inner(), 2).to_rat(), Rat(64));
}

TEST(Wild, PerturbedWeightsFail) {
  const auto f = IntFunction::parse("neg_pow(2)");
  WildParams p;
  p.a = QuadReal(dy("3/2"));
  p.c = 2;
  const std::size_t top = wild_index_bound(WildKind::decreasing, p, 1024);
  const ValuationDef good = wild_valuation(WildKind::decreasing, f, std::nullopt, top);
  EXPECT_TRUE(wild_certificate(WildKind::decreasing, good, p, f, std::nullopt, 1024).valid);
  std::vector<Int> w = good.inner().weights();
  w[2] -= 2;  // gamma_3 rises by one: integral, but above the target
  const auto cert = wild_certificate(WildKind::decreasing, ValuationDef::p3(w), p, f, std::nullopt, 1024);
  EXPECT_FALSE(cert.valid);
  ASSERT_TRUE(cert.first_bad.has_value());
}

TEST(Wild, Errors) {
  const auto f = IntFunction::parse("neg_linear");
  WildParams p;
  EXPECT_THROW(wild_certificate(WildKind::increasing, ValuationDef::p3(ints({34})), p, f, std::nullopt, 64), Error);
  EXPECT_THROW(wild_certificate(WildKind::decreasing, ValuationDef::p3(ints({34})), p, f, std::nullopt, 4), Error);
  EXPECT_THROW(parse_wild_kind("sideways"), Error);
}

TEST(IntFunction, Vocabulary) {
  EXPECT_EQ(IntFunction::parse("neg_pow(2)")(7), -49);
  EXPECT_EQ(IntFunction::parse("pow(3)")(2), 8);
  EXPECT_EQ(IntFunction::parse("exp(3)")(4), 81);
  EXPECT_EQ(IntFunction::parse("neg_linear")(5), -5);
  EXPECT_THROW(IntFunction::parse("sin"), Error);
  const auto t = IntFunction::from_table({{Int(1), Int(-3)}, {Int(2), Int(-9)}});
  EXPECT_EQ(t(2), -9);
  EXPECT_THROW(t(3), Error);
}
