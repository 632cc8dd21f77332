#pragma once

#include <stdexcept>
#include <string>

namespace weilinv {

/// Malformed input text (genus symbols, Gram matrices, command lines).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation could not be carried out or failed an internal consistency check.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace weilinv
