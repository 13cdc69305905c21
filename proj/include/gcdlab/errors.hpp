#pragma once

#include <stdexcept>
#include <string>

namespace gcdlab {

// Precondition violated by the caller (empty sequence, non-prime modulus, ...).
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameters violate a hypothesis or a construction inequality.
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or invariant-violating input file.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A brute-force or desk-scale size cap would be exceeded.
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Construction could not be realized (e.g. too few primes in a window).
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested quantity is not defined for these parameters (e.g. k < 3).
struct not_applicable : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace gcdlab
