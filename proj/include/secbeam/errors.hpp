#pragma once

#include <stdexcept>
#include <string>

namespace secbeam {

/// Configuration parsing failure; the message names the offending key.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative numeric routine failed to converge or broke an internal invariant.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace secbeam
