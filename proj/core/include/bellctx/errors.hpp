#pragma once

#include <stdexcept>
#include <string>

namespace bellctx {

// Malformed user input: unreadable files, bad schemas, scenario violations.
// The CLI maps this to exit code 1.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Desk-scale guard tripped: the scenario's joint outcome space is too large
// for enumeration-based operations.
struct cap_exceeded : input_error {
    using input_error::input_error;
};

// A computation produced a non-finite value or failed to converge.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Statistical selection came back empty (conditioning window too narrow for
// the ensemble at hand). The CLI maps this to exit code 4.
struct empty_selection : std::runtime_error {
    empty_selection(const std::string& what, double suggested_delta)
        : std::runtime_error(what), suggested_delta(suggested_delta) {}
    double suggested_delta;
};

}  // namespace bellctx
