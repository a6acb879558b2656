#pragma once

#include <stdexcept>
#include <string>

namespace btrm {

/// An argument lies outside the domain an operation supports.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A resource cap (enumeration size, brute-force budget, matrix size) would be exceeded.
class CapacityError : public RangeError {
 public:
  using RangeError::RangeError;
};

/// A documented precondition on structured input does not hold
/// (non-symmetric matrix, Hankel spec on a pairing outside P2^1, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace btrm
