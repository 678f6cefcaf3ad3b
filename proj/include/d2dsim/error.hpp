// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace d2dsim {

/// Bad user input: malformed files, out-of-range parameters. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The model is structurally unable to proceed with the given data
/// (e.g. a flow with no return rate makes the closed-form steady state
/// undefined). CLI exit code 2.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at run time (non-finite state, tau underflow). Exit code 2.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace d2dsim
