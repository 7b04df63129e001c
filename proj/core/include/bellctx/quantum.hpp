#pragma once

#include <array>
#include <complex>

#include "bellctx/scenario.hpp"

namespace bellctx::quantum {

inline constexpr double kStateNormTol = 1e-12;

// Pure two-qubit state, amplitudes in basis order |00>, |01>, |10>, |11>.
struct TwoQubitState {
    std::array<std::complex<double>, 4> amplitudes;

    double norm_sq() const;
    // Throws input_error when |norm^2 - 1| > kStateNormTol.
    void require_normalized() const;
};

TwoQubitState singlet();     // (|01> - |10>)/sqrt(2)
TwoQubitState product00();   // |00>

// A spin measurement direction in the x-z great circle of the Bloch sphere,
// for one of the two parties.
struct SpinSetting {
    double angle = 0.0;  // radians
    int party = 1;       // 1 or 2

    void validate() const;  // throws input_error on non-finite angle / bad party
};

struct ChshSettings {
    SpinSetting a, a_prime, b, b_prime;

    static ChshSettings from_angles(double a, double a_prime, double b, double b_prime);
};

// Brute-force Born rule over the four CHSH contexts: projects onto the +-1
// eigenvectors of the in-plane spin observables at the given angles. The
// result lives on chsh_scenario(), validates, and is no-signalling to 1e-12.
EmpiricalModel born_model(const TwoQubitState& state, const ChshSettings& settings);

// E(a, b) = sum_{o1,o2} o1 o2 p(o1, o2) from the Born rule. For the singlet
// this equals -cos(a - b).
double correlator(const TwoQubitState& state, double a, double b);

}  // namespace bellctx::quantum
