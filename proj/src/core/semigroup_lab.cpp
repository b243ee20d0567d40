#include "semigroup_lab.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <set>

#include "error.hpp"
#include "parallel.hpp"

namespace semival {

std::uint64_t default_max_states() {
  if (const char* env = std::getenv("SEMIVAL_MAX_STATES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultMaxStates;
}

namespace {

std::uint64_t bitlen(const Int& n) { return sgn(n) == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2); }

std::uint64_t to_u64(const Int& n, const char* what) {
  if (sgn(n) < 0 || !n.fits_ulong_p()) fail(ErrorKind::cap, std::string(what) + " is too large");
  return n.get_ui();
}

void cap_check(std::uint64_t used, std::uint64_t cap, const char* what) {
  if (used > cap)
    fail(ErrorKind::cap, std::string(what) + " exceeds the state cap of " + std::to_string(cap) +
                             " (raise it with --max-states or SEMIVAL_MAX_STATES)");
}

Int factorial(std::uint64_t n) {
  Int out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Int binomial(const Int& n, std::uint64_t k) {
  Int out;
  mpz_bin_ui(out.get_mpz_t(), n.get_mpz_t(), k);
  return out;
}

}  // namespace

// ------------------------------------------------------------ staircase

StairIndex stair_decompose(const Int& n) {
  if (sgn(n) <= 0) fail(ErrorKind::usage, "staircase index must be positive, got " + to_string(n));
  StairIndex out;
  out.m = bitlen(n) - 1;
  out.j = n - pow2(out.m);
  return out;
}

Int stair_count(std::uint64_t r, const Int& n) {
  if (r == 0) fail(ErrorKind::usage, "r must be positive");
  return pow2((stair_decompose(n).m + 1) * r);
}

bool stair_sandwich(std::uint64_t r, const Int& n) {
  const Int count = stair_count(r, n);
  const Int nr = ipow(n, r);
  return nr < count && count <= pow2(r) * nr;
}

bool stair_is_member(std::uint64_t r, const Dyadic& q) {
  if (r == 0) fail(ErrorKind::usage, "r must be positive");
  if (q < Dyadic(1L)) return false;
  const StairIndex idx = stair_decompose(q.floor());
  return q.exponent() <= (idx.m + 1) * r;
}

std::vector<Dyadic> stair_members(std::uint64_t r, const Dyadic& lo, const Dyadic& hi, std::uint64_t cap) {
  if (r == 0) fail(ErrorKind::usage, "r must be positive");
  if (lo.sign() < 0 || !(lo < hi)) fail(ErrorKind::usage, "stair_members needs 0 <= lo < hi");
  std::vector<Dyadic> out;
  Int first = lo.floor();
  if (first < 1) first = 1;
  const Int last = hi.ceil();  // blocks n < last
  // Size the window before materialising it.
  Int total = 0;
  for (Int n = first; n < last; ++n) {
    total += stair_count(r, n);
    if (total > Int(static_cast<unsigned long>(cap)))
      fail(ErrorKind::cap, "stair_members window holds more than " + std::to_string(cap) + " elements");
  }
  for (Int n = first; n < last; ++n) {
    const std::uint64_t k = (stair_decompose(n).m + 1) * r;
    const Int denom = pow2(k);
    // alpha in [ceil((lo - n) 2^k), ceil((hi - n) 2^k)) cap [0, 2^k)
    Rat from = (lo.to_rat() - Rat(n)) * Rat(denom);
    Rat to = (hi.to_rat() - Rat(n)) * Rat(denom);
    Int a_lo, a_hi;
    mpz_cdiv_q(a_lo.get_mpz_t(), from.get_num_mpz_t(), from.get_den_mpz_t());
    mpz_cdiv_q(a_hi.get_mpz_t(), to.get_num_mpz_t(), to.get_den_mpz_t());
    if (a_lo < 0) a_lo = 0;
    if (a_hi > denom) a_hi = denom;
    for (Int a = a_lo; a < a_hi; ++a) out.push_back(Dyadic(n) + Dyadic(a, k));
  }
  return out;
}

Int stair_cumulative(std::uint64_t r, const Int& y) {
  if (r == 0) fail(ErrorKind::usage, "r must be positive");
  if (y <= 1) return 0;
  const Int top = y - 1;  // largest n counted
  const std::uint64_t last_m = bitlen(top) - 1;
  Int total = 0;
  for (std::uint64_t m = 0; m < last_m; ++m) total += pow2(m) * pow2((m + 1) * r);
  total += (top - pow2(last_m) + 1) * pow2((last_m + 1) * r);
  return total;
}

namespace {

// B_0 .. B_r with B_1 = -1/2.
std::vector<Rat> bernoulli(std::uint64_t r) {
  static std::mutex mu;
  static std::vector<Rat> table{Rat(1)};
  std::lock_guard lock(mu);
  while (table.size() <= r) {
    const std::uint64_t m = table.size();
    Rat acc = 0;
    for (std::uint64_t k = 0; k < m; ++k) acc += Rat(binomial(Int(static_cast<unsigned long>(m + 1)), k)) * table[k];
    Rat b = -acc / Rat(static_cast<unsigned long>(m + 1));
    b.canonicalize();
    table.push_back(b);
  }
  return {table.begin(), table.begin() + static_cast<std::ptrdiff_t>(r + 1)};
}

}  // namespace

Int powersum(const Int& y, std::uint64_t r) {
  if (y <= 1) return 0;
  // Faulhaber: sum_{n=0}^{y-1} n^r = 1/(r+1) sum_k C(r+1,k) B_k y^(r+1-k)
  const auto b = bernoulli(r);
  const Int r1(static_cast<unsigned long>(r + 1));
  Rat acc = 0;
  for (std::uint64_t k = 0; k <= r; ++k) acc += Rat(binomial(r1, k)) * b[k] * Rat(ipow(y, r + 1 - k));
  acc /= Rat(r1);
  acc.canonicalize();
  if (acc.get_den() != 1) fail(ErrorKind::internal, "power sum is not an integer");
  Int out = acc.get_num();
  if (r == 0) out -= 1;  // the n = 0 term
  return out;
}

Int scaled_count(const Int& c, std::uint64_t r, const Int& y) {
  if (c < 1) fail(ErrorKind::usage, "scale c must be at least 1");
  if (sgn(y) < 0) fail(ErrorKind::usage, "y must be nonnegative");
  return stair_cumulative(r, c * y);
}

Int t_scale(const Int& i) { return sgn(i) == 0 ? Int(1) : i; }

Int t_box_count(std::uint64_t r, const Int& y1, const Int& y2) {
  if (y1 < 1 || y2 < 1) fail(ErrorKind::usage, "t_box_count needs y1, y2 >= 1");
  const std::uint64_t slices = to_u64(y2, "y2");
  cap_check(slices, std::uint64_t{1} << 26, "t_box_count slice count");
  Int total = 0;
  for (std::uint64_t m = 0; m < slices; ++m)
    total += scaled_count(t_scale(Int(static_cast<unsigned long>(m))), r, y1);
  return total;
}

ContradictionTable contradiction_table(std::uint64_t r, const Int& y1, const std::vector<Int>& y2_list,
                                       const Int& d) {
  if (r == 0) fail(ErrorKind::usage, "r must be positive");
  if (y1 < 1) fail(ErrorKind::usage, "y1 must be at least 1");
  if (y2_list.empty()) fail(ErrorKind::usage, "empty y2 list");
  for (std::size_t k = 0; k < y2_list.size(); ++k) {
    if (y2_list[k] < 1) fail(ErrorKind::usage, "y2 values must be at least 1");
    if (k && !(y2_list[k - 1] < y2_list[k])) fail(ErrorKind::usage, "y2 values must increase");
  }
  const std::uint64_t last = to_u64(y2_list.back(), "y2");
  cap_check(last, std::uint64_t{1} << 26, "contradiction table y2");

  ContradictionTable table;
  table.r = r;
  table.y1 = y1;
  table.d = d;
  const Int per_y2 = d * ipow(y1, r + 1);
  Int lower = 0;
  Int count = 0;
  std::size_t next = 0;
  // Slice m adds f(c(m) y1) to the lower bound and #(S cap [0, c(m) y1[) to the count.
  for (std::uint64_t m = 0; m < last && next < y2_list.size(); ++m) {
    const Int cm = t_scale(Int(static_cast<unsigned long>(m)));
    lower += powersum(cm * y1, r);
    count += scaled_count(cm, r, y1);
    if (Int(static_cast<unsigned long>(m + 1)) == y2_list[next]) {
      ContradictionRow row{y2_list[next], lower, count, per_y2 * y2_list[next], false};
      row.exceeds = row.lower > row.claimed;
      if (row.exceeds && !table.first_crossing) table.first_crossing = table.rows.size();
      table.rows.push_back(std::move(row));
      ++next;
    }
  }
  return table;
}

std::vector<Int> doubling_list(const Int& y2_max) {
  if (y2_max < 1) fail(ErrorKind::usage, "y2_max must be at least 1");
  std::vector<Int> out;
  for (Int v = 1; v < y2_max; v *= 2) out.push_back(v);
  out.push_back(y2_max);
  return out;
}

// ------------------------------------------------- generated semigroups

GenSemigroup::GenSemigroup(GroupSpec group, std::vector<LexVec> gens, std::vector<std::string> labels)
    : group_(std::move(group)) {
  if (!labels.empty() && labels.size() != gens.size())
    fail(ErrorKind::usage, "generator labels do not match the generators");
  std::vector<std::pair<LexVec, std::string>> items;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    group_.check(gens[k]);
    if (!(gens[k] > LexVec::zero(group_.rank())))
      fail(ErrorKind::usage, "generator " + gens[k].str() + " is not positive");
    if (gens[k][0] < QuadReal(0L))
      fail(ErrorKind::usage, "generator " + gens[k].str() + " has a negative first coordinate");
    items.emplace_back(gens[k], labels.empty() ? "g" + std::to_string(k) : labels[k]);
  }
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [g, l] : items) {
    if (!gens_.empty() && gens_.back() == g) continue;
    gens_.push_back(g);
    labels_.push_back(l);
  }
}

GenSemigroup GenSemigroup::from_valuation(const ValuationDef& v, const QuadReal& first_bound) {
  std::vector<LexVec> gens{v.value_of_z()};
  std::vector<std::string> labels{"z"};
  auto add_family = [&](bool outer) {
    const SeqFamily& fam = v.family(outer);
    for (std::size_t i = 0; fam.has_second(i) && i < 62; ++i) {
      if (!(v.first_value(outer, i) < first_bound)) break;
      gens.push_back(v.family_value(outer, i));
      if (i <= 1) {
        labels.emplace_back(1, var_name(i == 0 ? fam.base_var() : fam.lead_var()));
      } else {
        labels.push_back(std::string(1, fam.symbol()) + "_" + std::to_string(i));
      }
    }
  };
  add_family(false);
  if (v.outer()) add_family(true);
  return GenSemigroup(v.group(), std::move(gens), std::move(labels));
}

Box make_box(const ValuationDef& v, const Int& y1, const Int& y2) {
  std::vector<LexVec> values{valuate(v, MPoly::variable(Var::z)).value};
  for (Var var : v.variables()) values.push_back(valuate(v, MPoly::variable(var)).value);
  Box box{y1, y2, *std::min_element(values.begin(), values.end()), QuadReal()};
  std::optional<QuadReal> t2;
  for (const auto& val : values)
    if (val[0] > QuadReal(0L) && (!t2 || val[0] < *t2)) t2 = val[0];
  if (!t2) fail(ErrorKind::internal, "no variable has a positive first coordinate");
  box.t2 = *t2;
  return box;
}

namespace {

void require_rank2(const GenSemigroup& g) {
  if (g.group().rank() != 2) fail(ErrorKind::usage, "this operation needs a rank 2 semigroup");
}

struct Split {
  std::vector<std::size_t> positive;  // first coordinate > 0, ascending
  std::vector<std::size_t> zero;      // first coordinate == 0
};

Split split_generators(const GenSemigroup& g) {
  Split s;
  for (std::size_t k = 0; k < g.size(); ++k) (g.generators()[k][0].is_zero() ? s.zero : s.positive).push_back(k);
  return s;
}

// Every combination of positive-first generators with first sum <= limit
// (strictly below when strict), as first -> list of second sums.
std::map<QuadReal, std::vector<QuadReal>> first_sums(const GenSemigroup& g, const std::vector<std::size_t>& pos,
                                                     const QuadReal& limit, bool strict, std::uint64_t cap) {
  std::map<QuadReal, std::vector<QuadReal>> out;
  std::uint64_t states = 0;
  auto within = [&](const QuadReal& f) { return strict ? f < limit : f <= limit; };
  auto dfs = [&](auto&& self, std::size_t from, const QuadReal& first, const QuadReal& second) -> void {
    cap_check(++states, cap, "semigroup search");
    out[first].push_back(second);
    for (std::size_t k = from; k < pos.size(); ++k) {
      const LexVec& gen = g.generators()[pos[k]];
      QuadReal nf = first + gen[0];
      if (!within(nf)) break;
      self(self, k, nf, second + gen[1]);
    }
  };
  if (within(QuadReal(0L))) dfs(dfs, 0, QuadReal(0L), QuadReal(0L));
  for (auto& [f, seconds] : out) {
    std::sort(seconds.begin(), seconds.end());
    seconds.erase(std::unique(seconds.begin(), seconds.end()), seconds.end());
  }
  return out;
}

// Sums of zero-first generators with second coordinate <= limit (or < limit).
std::vector<QuadReal> zero_sums(const GenSemigroup& g, const std::vector<std::size_t>& zero,
                                const QuadReal& limit, bool strict, std::uint64_t cap) {
  std::vector<QuadReal> out;
  std::uint64_t states = 0;
  auto within = [&](const QuadReal& s) { return strict ? s < limit : s <= limit; };
  auto dfs = [&](auto&& self, std::size_t from, const QuadReal& s) -> void {
    cap_check(++states, cap, "semigroup search");
    out.push_back(s);
    for (std::size_t k = from; k < zero.size(); ++k) {
      QuadReal ns = s + g.generators()[zero[k]][1];
      if (!within(ns)) break;
      self(self, k, ns);
    }
  };
  if (within(QuadReal(0L))) dfs(dfs, 0, QuadReal(0L));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<LexVec> gen_enumerate(const GenSemigroup& g, const Box& box, std::uint64_t max_states) {
  require_rank2(g);
  if (box.t1.size() != 2 || !box.t1[0].is_zero() || !(box.t1[1] > QuadReal(0L)))
    fail(ErrorKind::usage, "box t1 must have the form (0, s) with s > 0");
  if (!(box.t2 > QuadReal(0L))) fail(ErrorKind::usage, "box t2 must be positive");
  if (sgn(box.y1) < 0 || sgn(box.y2) < 0) fail(ErrorKind::usage, "box sizes must be nonnegative");
  if (sgn(box.y1) == 0 || sgn(box.y2) == 0 || g.size() == 0) return {};

  const Split split = split_generators(g);
  const QuadReal first_limit = box.t2 * QuadReal(box.y2);
  const QuadReal width = box.t1[1] * QuadReal(box.y1);
  const auto bases = first_sums(g, split.positive, first_limit, true, max_states);
  const auto zs = zero_sums(g, split.zero, width, true, max_states);

  std::vector<LexVec> out;
  for (const auto& [lambda, seconds] : bases) {
    const QuadReal top = seconds.front() + width;  // seconds.front() is tilde
    std::set<QuadReal> found;
    for (const auto& b : seconds)
      for (const auto& z : zs) {
        QuadReal s = b + z;
        if (!(s < top)) break;
        if (lambda.is_zero() && s.is_zero()) continue;
        found.insert(s);
      }
    cap_check(out.size() + found.size(), max_states, "enumeration output");
    for (const auto& s : found) out.push_back(LexVec{lambda, s});
  }
  return out;
}

// ------------------------------------------------------------------ tilde

std::string witness_label(const GenSemigroup& g, const std::vector<std::uint64_t>& witness) {
  std::string out;
  for (std::size_t k = 0; k < witness.size() && k < g.size(); ++k) {
    if (witness[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += g.labels()[k];
    if (witness[k] > 1) out += "^" + std::to_string(witness[k]);
  }
  return out.empty() ? "1" : out;
}

namespace {

// Unbounded exact-fill knapsack over one integer axis, minimising cost.
template <typename Cost>
struct AxisTable {
  std::vector<Cost> cost;
  std::vector<std::int32_t> choice;  // generator slot used last, -1 unreachable
};

struct Axis {
  std::uint64_t shift = 0;      // values scaled by 2^shift
  Int gcd;                      // of the scaled weights
  std::vector<std::size_t> gen; // generator indices on this axis
  std::vector<std::uint64_t> weight;
  std::vector<Int> cost;
  std::uint64_t size = 0;       // table covers 0 .. size - 1
  bool wide = false;
  AxisTable<std::int64_t> narrow_table;
  AxisTable<Int> wide_table;

  template <typename Cost>
  void fill(AxisTable<Cost>& t, const std::vector<Cost>& c) {
    t.cost.assign(size, Cost{});
    t.choice.assign(size, -1);
    t.choice[0] = std::numeric_limits<std::int32_t>::max();  // empty sum
    for (std::uint64_t x = 1; x < size; ++x) {
      bool have = false;
      Cost best{};
      std::int32_t pick = -1;
      for (std::size_t k = 0; k < weight.size(); ++k) {
        if (weight[k] > x || t.choice[x - weight[k]] < 0) continue;
        Cost cand = t.cost[x - weight[k]] + c[k];
        if (!have || cand < best) {
          best = cand;
          pick = static_cast<std::int32_t>(k);
          have = true;
        }
      }
      if (have) {
        t.cost[x] = best;
        t.choice[x] = pick;
      }
    }
  }

  // Returns the scaled cost and adds the multiplicities into witness.
  template <typename Cost>
  std::optional<Int> walk(const AxisTable<Cost>& t, std::uint64_t x, std::vector<std::uint64_t>& witness) const {
    if (t.choice[x] < 0) return std::nullopt;
    Int total = 0;
    while (x > 0) {
      const auto k = static_cast<std::size_t>(t.choice[x]);
      witness[gen[k]] += 1;
      total += cost[k];
      x -= weight[k];
    }
    return total;
  }

  void build(std::uint64_t max_states) {
    cap_check(size, max_states, "tilde knapsack");
    Int max_cost = 0;
    std::uint64_t min_weight = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t k = 0; k < weight.size(); ++k) {
      Int a = abs(cost[k]);
      if (a > max_cost) max_cost = a;
      min_weight = std::min(min_weight, weight[k]);
    }
    Int worst = max_cost * Int(static_cast<unsigned long>(size / std::max<std::uint64_t>(min_weight, 1) + 1));
    wide = bitlen(worst) > 62;
    if (wide) {
      fill(wide_table, cost);
    } else {
      std::vector<std::int64_t> c;
      for (const auto& v : cost) c.push_back(v.get_si());
      fill(narrow_table, c);
    }
  }

  std::optional<Int> solve(const Dyadic& value, std::vector<std::uint64_t>& witness) const {
    if (value.sign() < 0 || value.exponent() > shift) return std::nullopt;
    Int scaled = value.scaled(shift);
    if (sgn(scaled) == 0) return Int(0);
    if (sgn(gcd) == 0) return std::nullopt;
    if (!mpz_divisible_p(scaled.get_mpz_t(), gcd.get_mpz_t())) return std::nullopt;
    scaled /= gcd;
    if (!scaled.fits_ulong_p() || scaled.get_ui() >= size)
      fail(ErrorKind::usage, "tilde query above the prepared range");
    return wide ? walk(wide_table, scaled.get_ui(), witness) : walk(narrow_table, scaled.get_ui(), witness);
  }
};

}  // namespace

struct TildeSolver::Impl {
  const GenSemigroup* g = nullptr;
  GenSemigroup copy{GroupSpec({CoordKind::integer}), {}};
  std::uint64_t max_states = 0;
  std::uint64_t cost_shift = 0;  // second coordinates scaled by 2^cost_shift
  bool mixed = false;
  Axis rat;
  Axis surd;
  std::vector<std::size_t> positive;
};

TildeSolver::TildeSolver(const GenSemigroup& g, const QuadReal& max_lambda, std::uint64_t max_states)
    : impl_(std::make_unique<Impl>()) {
  require_rank2(g);
  Impl& im = *impl_;
  im.copy = g;
  im.g = &im.copy;
  im.max_states = max_states;
  im.positive = split_generators(g).positive;
  for (std::size_t k : im.positive) {
    const LexVec& gen = g.generators()[k];
    if (!gen[1].is_dyadic()) fail(ErrorKind::usage, "tilde needs dyadic second coordinates");
    im.cost_shift = std::max(im.cost_shift, gen[1].rat_part().exponent());
    const bool has_rat = !gen[0].rat_part().is_zero();
    const bool has_surd = !gen[0].surd_part().is_zero();
    if (has_rat && has_surd) im.mixed = true;
  }
  if (im.mixed) return;  // queries fall back to a bounded search

  auto setup = [&](Axis& axis, bool surd, const Dyadic& top) {
    auto part = [surd](const QuadReal& q) -> const Dyadic& { return surd ? q.surd_part() : q.rat_part(); };
    for (std::size_t k : im.positive) {
      const Dyadic& w = part(g.generators()[k][0]);
      if (w.is_zero() || w > top) continue;
      axis.gen.push_back(k);
      axis.shift = std::max(axis.shift, w.exponent());
    }
    axis.shift = std::max(axis.shift, top.sign() > 0 ? top.exponent() : 0);
    axis.gcd = 0;
    std::vector<Int> scaled;
    for (std::size_t k : axis.gen) {
      scaled.push_back(part(g.generators()[k][0]).scaled(axis.shift));
      mpz_gcd(axis.gcd.get_mpz_t(), axis.gcd.get_mpz_t(), scaled.back().get_mpz_t());
    }
    Int top_scaled = top.sign() > 0 ? Dyadic(top.floor() + 1).scaled(axis.shift) : Int(0);
    if (sgn(axis.gcd) == 0) {
      axis.size = 1;
    } else {
      top_scaled /= axis.gcd;
      cap_check(bitlen(top_scaled) > 63 ? std::numeric_limits<std::uint64_t>::max() : top_scaled.get_ui(),
                im.max_states, "tilde knapsack");
      axis.size = top_scaled.get_ui() + 1;
    }
    for (std::size_t k = 0; k < axis.gen.size(); ++k) {
      axis.weight.push_back(Int(scaled[k] / axis.gcd).get_ui());
      axis.cost.push_back(g.generators()[axis.gen[k]][1].rat_part().scaled(im.cost_shift));
    }
    axis.build(im.max_states);
  };
  // Generators sit on one axis each, so lambda = r + s*sqrt2 with r, s >= 0
  // and r <= lambda, s <= lambda / sqrt2.
  const QuadReal cap = max_lambda.sign() > 0 ? max_lambda : QuadReal(0L);
  const QuadReal over_root2 = cap * QuadReal(Dyadic(0L), Dyadic(Int(1), 1));
  setup(im.rat, false, Dyadic(cap.ceil()));
  setup(im.surd, true, Dyadic(over_root2.ceil()));
}

TildeSolver::~TildeSolver() = default;
TildeSolver::TildeSolver(TildeSolver&&) noexcept = default;
TildeSolver& TildeSolver::operator=(TildeSolver&&) noexcept = default;

std::optional<TildeEntry> TildeSolver::query(const QuadReal& lambda) const {
  const Impl& im = *impl_;
  const GenSemigroup& g = *im.g;
  TildeEntry out;
  out.lambda = lambda;
  out.witness.assign(g.size(), 0);
  if (lambda < QuadReal(0L)) return std::nullopt;

  if (im.mixed) {
    // Exhaustive search over exact representations of lambda.
    std::uint64_t states = 0;
    std::optional<QuadReal> best;
    std::vector<std::uint64_t> current(g.size(), 0);
    auto dfs = [&](auto&& self, std::size_t from, const QuadReal& rest, const QuadReal& second) -> void {
      cap_check(++states, im.max_states, "tilde search");
      if (rest.is_zero()) {
        if (!best || second < *best) {
          best = second;
          out.witness = current;
        }
        return;
      }
      for (std::size_t k = from; k < im.positive.size(); ++k) {
        const LexVec& gen = g.generators()[im.positive[k]];
        if (gen[0] > rest) break;
        ++current[im.positive[k]];
        self(self, k, rest - gen[0], second + gen[1]);
        --current[im.positive[k]];
      }
    };
    dfs(dfs, 0, lambda, QuadReal(0L));
    if (!best) return std::nullopt;
    out.tilde = LexVec{lambda, *best};
    return out;
  }

  auto r = im.rat.solve(lambda.rat_part(), out.witness);
  if (!r) return std::nullopt;
  auto s = im.surd.solve(lambda.surd_part(), out.witness);
  if (!s) return std::nullopt;
  out.tilde = LexVec{lambda, QuadReal(Dyadic(Int(*r + *s), im.cost_shift))};
  return out;
}

std::optional<TildeEntry> tilde(const GenSemigroup& g, const QuadReal& lambda, std::uint64_t max_states) {
  if (lambda < QuadReal(0L)) return std::nullopt;
  return TildeSolver(g, lambda, max_states).query(lambda);
}

std::optional<LexVec> successor(const GenSemigroup& g, const LexVec& phi, const LexVec& bound,
                                std::uint64_t max_states) {
  require_rank2(g);
  g.group().check(phi);
  g.group().check(bound);
  if (phi[0] < QuadReal(0L)) fail(ErrorKind::usage, "successor needs a nonnegative first coordinate");
  if (!(phi < bound)) return std::nullopt;

  const Split split = split_generators(g);
  const auto sums = first_sums(g, split.positive, bound[0], false, max_states);
  QuadReal max_zero;
  for (std::size_t k : split.zero) max_zero = std::max(max_zero, g.generators()[k][1]);

  // Same first coordinate: least base + zero-sum above phi.
  if (auto it = sums.find(phi[0]); it != sums.end()) {
    std::optional<QuadReal> best;
    for (const auto& b : it->second) {
      QuadReal thr = phi[1] - b;
      QuadReal limit = (thr > QuadReal(0L) ? thr : QuadReal(0L)) + max_zero;
      for (const auto& z : zero_sums(g, split.zero, limit, false, max_states)) {
        QuadReal s = b + z;
        if (!(s > phi[1])) continue;
        if (phi[0].is_zero() && s.is_zero()) continue;
        if (!best || s < *best) best = s;
        break;
      }
    }
    if (best) {
      LexVec cand{phi[0], *best};
      return cand < bound ? std::optional<LexVec>(cand) : std::nullopt;
    }
  }
  auto next = sums.upper_bound(phi[0]);
  if (next == sums.end()) return std::nullopt;
  LexVec cand{next->first, next->second.front()};
  return cand < bound ? std::optional<LexVec>(cand) : std::nullopt;
}

// ------------------------------------------------------------- bounds

Rat theorem1_bound(const std::vector<std::uint64_t>& dims, const std::vector<Int>& mults,
                   const std::vector<Int>& ys, const Rat& eps) {
  if (ys.size() != dims.size() || (mults.size() != dims.size() && mults.size() != dims.size() + 1))
    fail(ErrorKind::usage, "bound needs as many y values as dimensions and one multiplicity per level");
  Rat out = Rat(1) + eps;
  for (const auto& m : mults) {
    if (m < 1) fail(ErrorKind::usage, "multiplicities must be at least 1");
    out *= Rat(m);
  }
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (sgn(ys[k]) < 0) fail(ErrorKind::usage, "y values must be nonnegative");
    out *= Rat(ipow(ys[k], dims[k]));
    out /= Rat(factorial(dims[k]));
  }
  out.canonicalize();
  return out;
}

Int hs_length(std::uint64_t d, const Int& y) {
  if (d < 1) fail(ErrorKind::usage, "dimension must be at least 1");
  if (sgn(y) < 0) fail(ErrorKind::usage, "y must be nonnegative");
  return binomial(y + Int(static_cast<unsigned long>(d)) - 1, d);
}

BoxBoundReport box_bound_check(const ValuationDef& v, const Int& y1, const Int& y2, std::uint64_t max_states) {
  BoxBoundReport rep;
  rep.y1 = y1;
  rep.y2 = y2;
  // dim R/p_2 = 1 (the z direction); dim R_{p_2} = number of other variables.
  rep.dims = {1, v.variables().size()};
  const Box box = make_box(v, y1, y2);
  const GenSemigroup g = GenSemigroup::from_valuation(v, box.t2 * QuadReal(y2));
  rep.count = gen_enumerate(g, box, max_states).size();
  rep.bound = theorem1_bound(rep.dims, {Int(1), Int(1), Int(1)}, {y1, y2}, Rat(1));
  rep.pass = Rat(static_cast<unsigned long>(rep.count)) <= rep.bound;
  return rep;
}

// --------------------------------------------------------- certificates

std::string wild_kind_name(WildKind k) {
  switch (k) {
    case WildKind::decreasing: return "decreasing";
    case WildKind::increasing: return "increasing";
    case WildKind::both: return "both";
  }
  return "?";
}

WildKind parse_wild_kind(std::string_view text) {
  if (text == "decreasing") return WildKind::decreasing;
  if (text == "increasing") return WildKind::increasing;
  if (text == "both") return WildKind::both;
  fail(ErrorKind::usage, "unknown certificate kind '" + std::string(text) + "'");
}

namespace {

struct ScaleSetup {
  QuadReal a1;
  QuadReal a2;
  Int e;
};

ScaleSetup scale_setup(WildKind kind, const WildParams& p) {
  if (!(p.a > QuadReal(0L))) fail(ErrorKind::usage, "a must be positive");
  if (p.c < 1) fail(ErrorKind::usage, "c must be a positive integer");
  ScaleSetup s{p.a, p.a2.value_or(p.a * QuadReal::sqrt2()), p.a.ceil()};
  if (kind != WildKind::both) {
    if (!p.a.is_dyadic()) fail(ErrorKind::usage, "a must be dyadic for the three variable forms");
    return s;
  }
  if (!(s.a2 > QuadReal(0L))) fail(ErrorKind::usage, "a2 must be positive");
  // a1 = al + be sqrt2, a2 = ga + de sqrt2 with al de - be ga != 0
  const Dyadic det = s.a1.rat_part() * s.a2.surd_part() - s.a1.surd_part() * s.a2.rat_part();
  if (det.is_zero()) fail(ErrorKind::usage, "a and a2 must be linearly independent over the rationals");
  s.e = std::max(s.a1.ceil(), s.a2.ceil());
  return s;
}

std::size_t row_index(const Int& n, const Int& e) {
  // e 2^(i+2) <= n < e 2^(i+3)
  const Int q = n / e;
  return static_cast<std::size_t>(bitlen(q) - 3);
}

struct ChainSpec {
  std::string name;
  bool decreasing = true;
  bool outer = false;
  QuadReal a;
};

struct IndexData {
  bool weights_defined = false;
  QuadReal lambda;
  Dyadic second;
  Dyadic scaled_second;
  Int probe_value;  // f or g at i 2^(i+3)
  std::string witness;
  std::string tilde_status = "skipped";
  std::optional<LexVec> tilde;
};

const char* pass_fail(bool b) { return b ? "pass" : "fail"; }

}  // namespace

std::size_t wild_index_bound(WildKind kind, const WildParams& params, const Int& N) {
  const ScaleSetup s = scale_setup(kind, params);
  const Int q = N / s.e;
  if (bitlen(q) < 3) return 1;
  return std::max<std::size_t>(1, row_index(N, s.e));
}

ValuationDef wild_valuation(WildKind kind, const std::optional<IntFunction>& f, const std::optional<IntFunction>& g,
                            std::size_t i_max) {
  auto need = [](const std::optional<IntFunction>& fn, const char* name) -> const IntFunction& {
    if (!fn) fail(ErrorKind::usage, std::string("this certificate kind needs --") + name);
    return *fn;
  };
  switch (kind) {
    case WildKind::decreasing: return ValuationDef::p3(choose_sigma(need(f, "f"), i_max));
    case WildKind::increasing: return ValuationDef::q3(choose_tau(need(g, "g"), i_max));
    case WildKind::both:
      return ValuationDef::combined5(choose_sigma(need(f, "f"), i_max), choose_tau(need(g, "g"), i_max));
  }
  fail(ErrorKind::internal, "unreachable kind");
}

WildCertificate wild_certificate(WildKind kind, const ValuationDef& v, const WildParams& params,
                                 const std::optional<IntFunction>& f, const std::optional<IntFunction>& g,
                                 const Int& N, unsigned threads, std::uint64_t max_states) {
  const Form expected = kind == WildKind::decreasing ? Form::P3 : kind == WildKind::increasing ? Form::Q3 : Form::Combined5;
  if (v.form() != expected)
    fail(ErrorKind::usage, wild_kind_name(kind) + " certificates need a " + form_name(expected) + " valuation");
  if (kind != WildKind::increasing && !f) fail(ErrorKind::usage, "this certificate kind needs --f");
  if (kind != WildKind::decreasing && !g) fail(ErrorKind::usage, "this certificate kind needs --g");

  const ScaleSetup s = scale_setup(kind, params);
  WildCertificate cert;
  cert.kind = kind;
  cert.params = params;
  cert.a2 = s.a2;
  cert.e = s.e;
  cert.n0 = s.e * pow2(to_u64(s.e, "e") + 2);
  cert.N = N;
  if (N < cert.n0) fail(ErrorKind::usage, "N must be at least n0 = " + to_string(cert.n0));
  const std::uint64_t row_count = to_u64(N - cert.n0 + 1, "row count") ;
  cap_check(row_count, std::uint64_t{1} << 24, "certificate rows");
  cert.notes = {
      "omega(z) = (0, c) and omega(x) = (a, 0); a nonzero second coordinate for omega(x) is incompatible "
      "with integral second coordinates of omega(P_i), so it is not searched over",
      "tilde values are taken in the sub-semigroup generated by the scaled values of the variables and the "
      "family members; a tilde check is marked skipped when its knapsack exceeds the state cap",
  };
  if (kind == WildKind::both) cert.notes.push_back("a2 scales the values of u and Q_i");

  std::vector<ChainSpec> chains;
  if (kind == WildKind::decreasing) chains.push_back({"decreasing", true, false, s.a1});
  if (kind == WildKind::increasing) chains.push_back({"increasing", false, false, s.a1});
  if (kind == WildKind::both) {
    chains.push_back({"decreasing", true, false, s.a1});
    chains.push_back({"increasing", false, true, s.a2});
  }

  const std::size_t i_lo = row_index(cert.n0, s.e);
  const std::size_t i_hi = row_index(N, s.e);

  // Scaled generators: omega(z) = (0, c), omega(base) = (a, 0), omega(F_j) = (a eta_j, c second_j).
  const QuadReal c_val(params.c);
  auto build_gens = [&](const QuadReal& lambda) {
    std::vector<LexVec> gens{LexVec{QuadReal(0L), c_val}};
    std::vector<std::string> labels{"z"};
    for (int fam = 0; fam < (v.outer() ? 2 : 1); ++fam) {
      const bool outer = fam == 1;
      const SeqFamily& sf = v.family(outer);
      const QuadReal a = outer ? s.a2 : s.a1;
      for (std::size_t j = 0; j < 62 && sf.has_second(j); ++j) {
        QuadReal first = a * QuadReal(eta(j));
        if (first > lambda) break;
        gens.push_back(LexVec{first, c_val * QuadReal(sf.second(j))});
        labels.push_back(j == 0   ? std::string(1, var_name(sf.base_var()))
                         : j == 1 ? std::string(1, var_name(sf.lead_var()))
                                  : std::string(1, sf.symbol()) + "_" + std::to_string(j));
      }
    }
    return GenSemigroup(v.group(), std::move(gens), std::move(labels));
  };

  // Per (chain, index) data, computed once.
  const std::size_t span = i_hi - i_lo + 1;
  std::vector<IndexData> data(chains.size() * span);
  parallel_for(data.size(), threads, [&](std::size_t slot) {
    const ChainSpec& ch = chains[slot / span];
    const std::size_t i = i_lo + slot % span;
    IndexData& d = data[slot];
    const SeqFamily& fam = v.family(ch.outer);
    d.lambda = ch.a * QuadReal(eta(i));
    d.witness = std::string(1, fam.symbol()) + "_" + std::to_string(i);
    const IntFunction& fn = ch.decreasing ? *f : *g;
    d.probe_value = fn(weight_probe(i));
    if (!fam.has_second(i)) return;
    d.weights_defined = true;
    d.second = fam.second(i);
    d.scaled_second = Dyadic(params.c) * d.second;
    try {
      const GenSemigroup sg = build_gens(d.lambda);
      auto t = tilde(sg, d.lambda, max_states);
      if (!t) {
        d.tilde_status = "fail";
        return;
      }
      d.tilde = t->tilde;
      const QuadReal pi2 = t->tilde[1];
      const QuadReal target(d.scaled_second);
      const bool ok = ch.decreasing ? pi2 <= target : pi2 == target;
      d.tilde_status = pass_fail(ok && t->tilde[0] == d.lambda);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::cap) throw;
      d.tilde_status = "skipped";
    }
  });

  // Rows.
  cert.rows.resize(row_count * chains.size());
  parallel_for(row_count, threads, [&](std::size_t k) {
    const Int n = cert.n0 + Int(static_cast<unsigned long>(k));
    const std::size_t i = row_index(n, s.e);
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const ChainSpec& ch = chains[c];
      const IndexData& d = data[c * span + (i - i_lo)];
      const IntFunction& fn = ch.decreasing ? *f : *g;
      WildRow& row = cert.rows[k * chains.size() + c];
      row.n = n;
      row.i = i;
      row.chain = ch.name;
      row.lambda = d.lambda;
      row.witness = d.witness;
      row.rhs = fn(n);
      row.tilde = d.tilde;
      const Int ceil_a = ch.a.ceil();
      const Int p = pow2(i + 2);
      row.checks.emplace_back("i_at_least_e", pass_fail(Int(static_cast<unsigned long>(i)) >= s.e));
      row.checks.emplace_back("lambda_below_n",
                              pass_fail(d.lambda < QuadReal(ceil_a * p) && ceil_a <= s.e && s.e * p <= n));
      row.checks.emplace_back("weights_defined", pass_fail(d.weights_defined));
      if (d.weights_defined) {
        row.lhs = d.scaled_second;
        const Int at_e = fn(s.e * pow2(i + 3));
        const Dyadic probe(d.probe_value), rhs(row.rhs), e_val(at_e);
        row.checks.emplace_back("second_integral", pass_fail(d.second.is_integer()));
        if (ch.decreasing) {
          row.checks.emplace_back("weight_condition", pass_fail(d.second < probe));
          row.checks.emplace_back("scaling", pass_fail(d.scaled_second <= d.second));
          row.checks.emplace_back("monotone", pass_fail(probe <= e_val && e_val < rhs));
          row.checks.emplace_back("conclusion", pass_fail(d.scaled_second < rhs));
        } else {
          row.checks.emplace_back("weight_condition", pass_fail(d.second > probe));
          row.checks.emplace_back("scaling", pass_fail(d.scaled_second >= d.second));
          row.checks.emplace_back("monotone", pass_fail(probe >= e_val && e_val > rhs));
          row.checks.emplace_back("conclusion", pass_fail(d.scaled_second > rhs));
        }
        row.checks.emplace_back("tilde", d.tilde_status);
      }
      row.ok = std::none_of(row.checks.begin(), row.checks.end(),
                            [](const auto& c2) { return c2.second == "fail"; });
    }
  });

  cert.valid = !cert.rows.empty();
  for (const auto& row : cert.rows)
    if (!row.ok) {
      cert.valid = false;
      if (!cert.first_bad) cert.first_bad = row.n;
    }
  return cert;
}

}  // namespace semival
