#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "bellctx/assignments.hpp"
#include "bellctx/scenario.hpp"

namespace bellctx {

// Tolerance for verdicts on approximate (floating-point) tables. Exact
// tables get exact verdicts.
inline constexpr double kFeasibilityTol = 1e-9;

// One signed CHSH functional: sum_i signs[i] * E_i over the four correlators
// in context order (A,B), (A,B'), (A',B), (A',B').
struct SignedChsh {
    std::array<int, 4> signs{};
    double value = 0.0;
};

// Weights over global assignments whose context restrictions reproduce the
// model's tables.
struct FeasibleCertificate {
    std::vector<std::pair<GlobalAssignment, Rational>> weights;
};

// A separating dual witness: y >= 0, indexed like the LP rows (context order,
// flat tuple order within each context), with y.A >= 1 over assignments and
// y.e == noncontextual_fraction < 1. For CHSH-shaped scenarios the violated
// CHSH variant is named too when one exceeds the classical bound.
struct InfeasibleCertificate {
    std::vector<Rational> dual;
    std::optional<SignedChsh> violated_chsh;
};

using Certificate = std::variant<FeasibleCertificate, InfeasibleCertificate>;

struct ContextualityReport {
    bool feasible = false;
    Rational noncontextual_fraction;
    Rational contextual_fraction;
    // Present only for four-observable dichotomic CHSH scenarios.
    std::optional<std::vector<SignedChsh>> chsh_values;
    Certificate certificate;
};

// Solves  max sum_g c_g  s.t.  c_g >= 0 and, per context C and tuple o,
// sum over assignments consistent with (C,o) of c_g <= e_C(o).
// noncontextual_fraction is the optimum; feasible means it reaches 1 (exactly
// for exact backing, within kFeasibilityTol for approximate backing).
ContextualityReport noncontextual_fraction(const EmpiricalModel& model);

// True iff the equality-constrained system  sum_g c_g delta_g = e, c_g >= 0
// is feasible. Decided by an independent phase-1 solve, not by reusing the
// noncontextual_fraction optimum.
bool has_global_joint(const EmpiricalModel& model);

// Recognized CHSH shape: observable indices of the two per-party setting
// pairs and the scenario context index of each of (A,B), (A,B'), (A',B),
// (A',B').
struct ChshStructure {
    std::array<std::size_t, 2> alice{};
    std::array<std::size_t, 2> bob{};
    std::array<std::size_t, 4> context_of{};
};

// Matches scenarios with exactly four dichotomic +-1-valued observables and
// the four pair contexts of a two-party CHSH experiment.
std::optional<ChshStructure> detect_chsh(const MeasurementScenario& scenario);

// The 8 odd-parity sign patterns (one or three minus signs), in ascending
// bitmask order of the minus positions.
const std::array<std::array<int, 4>, 8>& chsh_sign_variants();

double chsh_value(const EmpiricalModel& model, const std::array<int, 4>& signs);
Rational chsh_value_exact(const EmpiricalModel& model, const std::array<int, 4>& signs);
std::vector<SignedChsh> chsh_values(const EmpiricalModel& model);
double chsh_max(const EmpiricalModel& model);
Rational chsh_max_exact(const EmpiricalModel& model);

}  // namespace bellctx
