// Error types shared across the library. Validation errors carry the
// offending configuration key in the message; compute errors signal a
// well-formed input that has no defined result (e.g. no detectable signal).
#pragma once

#include <stdexcept>
#include <string>

namespace dit {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dit
