#pragma once

// Staircase semigroups and their counts, finitely generated value
// semigroups (enumeration, tilde, successor), growth bounds, and the wild
// tilde certificates.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact_arith.hpp"
#include "genseq.hpp"
#include "intfun.hpp"

namespace semival {

inline constexpr std::uint64_t kDefaultMaxStates = 1'000'000;

// SEMIVAL_MAX_STATES overrides the default when set to a positive integer.
std::uint64_t default_max_states();

// ------------------------------------------------------------ staircase

// n = 2^m + j with 0 <= j < 2^m.
struct StairIndex {
  std::uint64_t m = 0;
  Int j;
};
StairIndex stair_decompose(const Int& n);

// #(S cap [n, n+1[) = 2^((m+1) r).
Int stair_count(std::uint64_t r, const Int& n);
// n^r < count <= 2^r n^r.
bool stair_sandwich(std::uint64_t r, const Int& n);

bool stair_is_member(std::uint64_t r, const Dyadic& q);
std::vector<Dyadic> stair_members(std::uint64_t r, const Dyadic& lo, const Dyadic& hi,
                                  std::uint64_t cap = kDefaultMaxStates);

// #(S cap [0, y[) from the block counts, in O(log y) blocks.
Int stair_cumulative(std::uint64_t r, const Int& y);

// sum_{n=1}^{y-1} n^r.
Int powersum(const Int& y, std::uint64_t r);

// #((1/c) S cap [0, y[) = #(S cap [0, c y[).
Int scaled_count(const Int& c, std::uint64_t r, const Int& y);

// c(0) = 1, c(i) = i.
Int t_scale(const Int& i);
// sum_{m < y2} #((1/c(m)) S cap [0, y1[).
Int t_box_count(std::uint64_t r, const Int& y1, const Int& y2);

struct ContradictionRow {
  Int y2;
  Int lower;    // f(y1) + sum_{0 < i < y2} f(i y1)
  Int count;    // t_box_count
  Int claimed;  // d y1^(r+1) y2
  bool exceeds = false;  // lower > claimed
};

struct ContradictionTable {
  std::uint64_t r = 1;
  Int y1;
  Int d;
  std::vector<ContradictionRow> rows;
  std::optional<std::size_t> first_crossing;
};

ContradictionTable contradiction_table(std::uint64_t r, const Int& y1, const std::vector<Int>& y2_list,
                                       const Int& d);

// 1, 2, 4, ... below y2_max, then y2_max.
std::vector<Int> doubling_list(const Int& y2_max);

// ------------------------------------------------- generated semigroups

class GenSemigroup {
 public:
  GenSemigroup(GroupSpec group, std::vector<LexVec> gens, std::vector<std::string> labels = {});

  // nu(z), nu(x), nu(P_i) (and nu(u), nu(Q_i)) for every index whose value
  // is known and whose first coordinate is below first_bound.
  static GenSemigroup from_valuation(const ValuationDef& v, const QuadReal& first_bound);

  const GroupSpec& group() const { return group_; }
  const std::vector<LexVec>& generators() const { return gens_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return gens_.size(); }

 private:
  GroupSpec group_;
  std::vector<LexVec> gens_;
  std::vector<std::string> labels_;
};

// Rank 2 pseudo-box: first coordinate in [0, t2 y2[, and for that first
// coordinate lambda the element lies in [tilde(lambda), tilde(lambda) + t1 y1[.
struct Box {
  Int y1;
  Int y2;
  LexVec t1;
  QuadReal t2;
};

// t1, t2 computed from the values of the variables and z.
Box make_box(const ValuationDef& v, const Int& y1, const Int& y2);

std::vector<LexVec> gen_enumerate(const GenSemigroup& g, const Box& box,
                                  std::uint64_t max_states = default_max_states());

struct TildeEntry {
  QuadReal lambda;
  LexVec tilde;
  std::vector<std::uint64_t> witness;  // multiplicity per generator
};

std::string witness_label(const GenSemigroup& g, const std::vector<std::uint64_t>& witness);

// Exact min-cost knapsack over the generators with positive first coordinate.
// Tables are built once up to the largest lambda and then reused.
class TildeSolver {
 public:
  TildeSolver(const GenSemigroup& g, const QuadReal& max_lambda,
              std::uint64_t max_states = default_max_states());
  ~TildeSolver();
  TildeSolver(TildeSolver&&) noexcept;
  TildeSolver& operator=(TildeSolver&&) noexcept;

  // nullopt when lambda is not in the projected semigroup.
  std::optional<TildeEntry> query(const QuadReal& lambda) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::optional<TildeEntry> tilde(const GenSemigroup& g, const QuadReal& lambda,
                                std::uint64_t max_states = default_max_states());

// Least element of the semigroup strictly above phi and below bound.
std::optional<LexVec> successor(const GenSemigroup& g, const LexVec& phi, const LexVec& bound,
                                std::uint64_t max_states = default_max_states());

// ------------------------------------------------------------- bounds

// (1 + eps) prod mults / prod dims_i! * prod y_i^dims_i. mults has one entry
// more than dims (or the same number).
Rat theorem1_bound(const std::vector<std::uint64_t>& dims, const std::vector<Int>& mults,
                   const std::vector<Int>& ys, const Rat& eps);

// Length of R / m^y for a regular local ring of dimension d.
Int hs_length(std::uint64_t d, const Int& y);

struct BoxBoundReport {
  Int y1;
  Int y2;
  std::vector<std::uint64_t> dims;
  std::size_t count = 0;
  Rat bound;
  bool pass = false;
};

BoxBoundReport box_bound_check(const ValuationDef& v, const Int& y1, const Int& y2,
                               std::uint64_t max_states = default_max_states());

// --------------------------------------------------------- certificates

enum class WildKind { decreasing, increasing, both };
std::string wild_kind_name(WildKind k);
WildKind parse_wild_kind(std::string_view text);

struct WildParams {
  QuadReal a{1L};
  std::optional<QuadReal> a2;  // second scale for the five variable form
  Int c{1};
};

struct WildRow {
  Int n;
  std::size_t i = 0;
  std::string chain;  // "decreasing" or "increasing"
  QuadReal lambda;
  std::string witness;
  Dyadic lhs;  // c gamma_i or c delta_i
  Int rhs;  // f(n) or g(n)
  std::optional<LexVec> tilde;
  std::vector<std::pair<std::string, std::string>> checks;  // name -> pass/fail/skipped
  bool ok = false;
};

struct WildCertificate {
  WildKind kind = WildKind::decreasing;
  WildParams params;
  QuadReal a2;
  Int e;
  Int n0;
  Int N;
  std::vector<std::string> notes;
  std::vector<WildRow> rows;
  bool valid = false;
  std::optional<Int> first_bad;
};

// Largest family index needed for n <= N.
std::size_t wild_index_bound(WildKind kind, const WildParams& params, const Int& N);

// The valuation of the certificate with weights from choose_sigma/choose_tau.
ValuationDef wild_valuation(WildKind kind, const std::optional<IntFunction>& f,
                            const std::optional<IntFunction>& g, std::size_t i_max);

WildCertificate wild_certificate(WildKind kind, const ValuationDef& v, const WildParams& params,
                                 const std::optional<IntFunction>& f, const std::optional<IntFunction>& g,
                                 const Int& N, unsigned threads = 1,
                                 std::uint64_t max_states = default_max_states());

}  // namespace semival
