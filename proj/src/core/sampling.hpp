#pragma once

// Seeded random polynomials for property demos and the selftest.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "genseq.hpp"
#include "poly.hpp"

namespace semival {

struct PolyShape {
  std::vector<Var> vars{Var::x, Var::y};
  Var lead = Var::y;
  std::uint64_t max_lead_degree = 15;  // inclusive
  std::uint64_t max_other_degree = 6;
  std::size_t max_terms = 20;
  std::int64_t z_min = -5;
  std::int64_t z_max = 5;
  long coeff_bound = 9;  // numerators in [-b, b] \ {0}, denominators in 1..3
};

// Nonzero, with between 1 and max_terms terms.
MPoly random_poly(std::mt19937_64& rng, const PolyShape& shape);

PolyShape shape_for(const ValuationDef& v, std::uint64_t max_lead_degree);

struct SelftestCheck {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t passed = 0;
  std::string first_failure;
  bool ok() const { return trials == passed; }
};

struct SelftestOptions {
  std::uint64_t seed = 1;
  std::size_t roundtrip = 200;
  std::size_t homomorphism = 100;
  std::size_t symbolic_max = 5;
  std::size_t arithmetic_max = 64;
};

std::vector<SelftestCheck> selftest(const ValuationDef& v, const SelftestOptions& opt);

}  // namespace semival
