#include "intfun.hpp"

#include <fstream>
#include <sstream>

#include "error.hpp"

namespace semival {

namespace {

// Largest exponent accepted by the exponential shapes.
constexpr unsigned long kMaxExpArgument = 1UL << 22;

std::uint32_t parse_param(std::string_view descriptor, std::string_view prefix) {
  std::string_view inner = descriptor.substr(prefix.size());
  if (inner.empty() || inner.back() != ')')
    fail(ErrorKind::usage, "malformed function descriptor '" + std::string(descriptor) + "'");
  inner.remove_suffix(1);
  Int k = parse_int(inner);
  if (sgn(k) <= 0 || !k.fits_uint_p())
    fail(ErrorKind::usage, "descriptor parameter must be a positive integer in '" +
                               std::string(descriptor) + "'");
  return static_cast<std::uint32_t>(k.get_ui());
}

std::map<Int, Int> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::usage, "cannot open function table '" + path + "'");
  std::map<Int, Int> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string n, v;
    if (!(fields >> n)) continue;
    if (!(fields >> v)) fail(ErrorKind::parse, "function table line without a value: '" + line + "'");
    out[parse_int(n)] = parse_int(v);
  }
  if (out.empty()) fail(ErrorKind::usage, "function table '" + path + "' is empty");
  return out;
}

}  // namespace

IntFunction IntFunction::neg_pow(std::uint32_t k) {
  return IntFunction(Shape::neg_pow, Int(k), k == 1 ? "neg_linear" : "neg_pow(" + std::to_string(k) + ")");
}

IntFunction IntFunction::pow(std::uint32_t k) {
  return IntFunction(Shape::pow, Int(k), k == 1 ? "linear" : "pow(" + std::to_string(k) + ")");
}

IntFunction IntFunction::from_table(std::map<Int, Int> values, std::string label) {
  IntFunction f(Shape::table, Int(0), std::move(label));
  f.table_ = std::move(values);
  return f;
}

IntFunction IntFunction::parse(std::string_view d) {
  if (d == "neg_linear") return neg_pow(1);
  if (d == "linear") return pow(1);
  if (d.starts_with("neg_pow(")) return neg_pow(parse_param(d, "neg_pow("));
  if (d.starts_with("pow(")) return pow(parse_param(d, "pow("));
  if (d.starts_with("neg_exp(")) {
    auto b = parse_param(d, "neg_exp(");
    if (b < 2) fail(ErrorKind::usage, "neg_exp base must be at least 2");
    return IntFunction(Shape::neg_exp, Int(b), std::string(d));
  }
  if (d.starts_with("exp(")) {
    auto b = parse_param(d, "exp(");
    if (b < 2) fail(ErrorKind::usage, "exp base must be at least 2");
    return IntFunction(Shape::exp, Int(b), std::string(d));
  }
  if (d.starts_with("table:")) {
    std::string path(d.substr(6));
    return from_table(read_table(path), std::string(d));
  }
  fail(ErrorKind::usage, "unknown function descriptor '" + std::string(d) + "'");
}

Int IntFunction::operator()(const Int& n) const {
  switch (shape_) {
    case Shape::neg_pow:
    case Shape::pow: {
      Int v = ipow(n, param_.get_ui());
      return shape_ == Shape::pow ? v : Int(-v);
    }
    case Shape::neg_exp:
    case Shape::exp: {
      if (sgn(n) < 0 || !n.fits_ulong_p() || n.get_ui() > kMaxExpArgument)
        fail(ErrorKind::cap, descriptor_ + " is not evaluated beyond n = " + std::to_string(kMaxExpArgument));
      Int v = ipow(param_, n.get_ui());
      return shape_ == Shape::exp ? v : Int(-v);
    }
    case Shape::table: {
      auto it = table_.find(n);
      if (it == table_.end())
        fail(ErrorKind::domain, descriptor_ + " has no value at n = " + to_string(n));
      return it->second;
    }
  }
  fail(ErrorKind::internal, "unreachable function shape");
}

}  // namespace semival
