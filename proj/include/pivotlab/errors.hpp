#pragma once

#include <stdexcept>
#include <string>

namespace pivotlab {

// Caller violated an operation's precondition (bad parameters, wrong vertex
// pair, pivot not below the current position, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A geometric configuration that should be non-degenerate is not: singular
// systems, hyperplane ties for non-members, missing pivot facets.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant broke (cycle tripwire, step budget exhausted).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Exact mode refused because the state space exceeds the configured cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pivotlab
