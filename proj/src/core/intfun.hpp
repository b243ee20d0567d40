#pragma once

// Integer functions N -> Z used to drive the weight choices: a closed
// vocabulary of descriptors plus explicit tables.
//
//   neg_linear      n -> -n
//   linear          n -> n
//   neg_pow(k)      n -> -n^k
//   pow(k)          n -> n^k
//   neg_exp(b)      n -> -b^n
//   exp(b)          n -> b^n
//   table:PATH      whitespace separated "n value" lines, '#' comments

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "exact_arith.hpp"

namespace semival {

class IntFunction {
 public:
  enum class Shape { neg_pow, pow, neg_exp, exp, table };

  static IntFunction parse(std::string_view descriptor);
  static IntFunction from_table(std::map<Int, Int> values, std::string label = "table");
  static IntFunction neg_pow(std::uint32_t k);
  static IntFunction pow(std::uint32_t k);

  Int operator()(const Int& n) const;

  Shape shape() const { return shape_; }
  const std::string& descriptor() const { return descriptor_; }

 private:
  IntFunction(Shape shape, Int param, std::string descriptor)
      : shape_(shape), param_(std::move(param)), descriptor_(std::move(descriptor)) {}

  Shape shape_;
  Int param_;
  std::map<Int, Int> table_;
  std::string descriptor_;
};

}  // namespace semival
