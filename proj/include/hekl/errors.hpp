// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hekl {

// Invalid argument or incompatible parameter set (sizes, moduli, levels).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation invoked on an object in the wrong state (level, size, domain).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Mathematical domain violation, e.g. inverting a non-unit.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A finite search ran out of candidates.
class ExhaustionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Misuse of a pooled resource (foreign or double release).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hekl
