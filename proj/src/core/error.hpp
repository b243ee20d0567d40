#pragma once

#include <stdexcept>
#include <string>

namespace semival {

enum class ErrorKind {
  usage,     // malformed request, mismatched shapes
  parse,     // text could not be parsed
  domain,    // mathematically undefined request (zero polynomial, missing weight)
  cap,       // a resource cap was exceeded
  internal,  // an invariant the algorithms rely on was violated
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace semival
