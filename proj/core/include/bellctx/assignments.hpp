#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bellctx/scenario.hpp"

namespace bellctx {

// One definite outcome for every observable of a scenario, independent of
// context. The per-observable outcome is stored as an index into that
// observable's alphabet, in scenario observable order.
struct GlobalAssignment {
    std::vector<std::uint32_t> outcome_index;

    std::map<std::string, std::string> values(const MeasurementScenario& scenario) const;
    // Outcome labels joined by "|" in scenario observable order.
    std::string tuple_key(const MeasurementScenario& scenario) const;
};

// Total number of global assignments; throws cap_exceeded past the
// enumeration cap and input_error on an empty scenario.
std::uint64_t assignment_count(const MeasurementScenario& scenario);

// Every total assignment exactly once, lexicographic in (observable order,
// outcome order): the first assignment maps every observable to its
// first-listed outcome.
std::vector<GlobalAssignment> enumerate_assignments(const MeasurementScenario& scenario);

// Streaming form of the same enumeration; the span passed to the callback is
// reused between calls.
void for_each_assignment(const MeasurementScenario& scenario,
                         const std::function<void(const std::vector<std::uint32_t>&)>& fn);

// The deterministic empirical model induced by an assignment: every context
// table is a point mass on the assignment's restriction to that context.
EmpiricalModel assignment_model(const GlobalAssignment& assignment,
                                const MeasurementScenario& scenario);

}  // namespace bellctx
