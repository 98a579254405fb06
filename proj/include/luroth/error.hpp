// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace luroth {

// Input outside the mathematical domain of an operation (x not in (0,1],
// digit < 2, q = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed textual input: rationals, digit sequences, psi specs, tables.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A series was requested at an exponent where it diverges.
class DivergentParameter : public DomainError {
 public:
  using DomainError::DomainError;
};

// An enumeration or stream would exceed its configured size cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace luroth
