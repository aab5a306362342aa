#pragma once

#include <stdexcept>
#include <string>

namespace crcoop {

// Bad arguments to a library call (zero vectors, non-positive distances, ...).
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A configuration the scheme cannot express (e.g. zero-forcing with N = 1).
struct unsupported_config_error : std::invalid_argument {
    explicit unsupported_config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Caller violated a feasibility precondition.
struct feasibility_error : std::runtime_error {
    explicit feasibility_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Channel geometry leaves the problem without a well-defined solution.
struct degenerate_geometry_error : std::runtime_error {
    explicit degenerate_geometry_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal invariant failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

// Experiment configuration file problems (missing file, bad key, bad value).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace crcoop
