#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellctx/rational.hpp"

namespace bellctx {

inline constexpr double kDefaultNormTol = 1e-9;

// Enumeration-based operations refuse scenarios whose joint outcome space
// (product of outcome alphabet sizes over all observables) exceeds this.
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

// A measurable quantity with a finite outcome alphabet. Dichotomic
// observables conventionally use labels "+1"/"-1" with numeric values +1/-1.
struct Observable {
    std::string id;
    std::vector<std::string> outcomes;
    // Optional numeric value per outcome (parallel to `outcomes`); required
    // for correlator-based functionals.
    std::optional<std::vector<double>> values;

    std::optional<std::size_t> outcome_index(const std::string& label) const;
};

// A set of jointly measurable observables, measured together in one run.
struct Context {
    std::vector<std::string> members;
};

struct MeasurementScenario {
    std::vector<Observable> observables;
    std::vector<Context> contexts;

    std::optional<std::size_t> observable_index(const std::string& id) const;
    const Observable& observable(const std::string& id) const;  // throws input_error
    std::optional<std::size_t> context_index(const Context& context) const;
};

// Number of joint outcome tuples of one context (product of member alphabet
// sizes). Tuples are indexed lexicographically in member order, last member
// varying fastest.
std::uint64_t context_table_size(const MeasurementScenario& scenario, const Context& context);
std::vector<std::uint32_t> unflatten_tuple(const MeasurementScenario& scenario,
                                           const Context& context, std::uint64_t flat);
std::uint64_t flatten_tuple(const MeasurementScenario& scenario, const Context& context,
                            const std::vector<std::uint32_t>& outcome_indices);

// Product of all outcome alphabet sizes; throws cap_exceeded past the cap.
std::uint64_t joint_outcome_count(const MeasurementScenario& scenario);

// One context's probability table, dense over the product alphabet in flat
// tuple order. `present` distinguishes an explicit 0 from a missing entry.
struct ContextTable {
    std::vector<Rational> probs;
    std::vector<bool> present;
};

// The family of per-context outcome distributions produced by an experiment.
struct EmpiricalModel {
    MeasurementScenario scenario;
    std::vector<ContextTable> tables;  // parallel to scenario.contexts
    Backing backing = Backing::Exact;
};

// A distribution over outcome tuples of some observable subset.
struct Distribution {
    std::vector<std::string> observables;            // subset ids, order preserved
    std::vector<std::vector<std::string>> support;   // ordered outcome tuples
    std::vector<Rational> probs;
    Backing backing = Backing::Exact;
};

struct Violation {
    enum class Kind {
        ScenarioStructure,   // bad observable/context wiring
        MissingEntry,        // tuple absent from a context table
        NegativeProbability,
        Normalization,       // table does not sum to 1
    };
    Kind kind;
    std::string where;    // context key or observable id
    std::string message;
};

std::string to_string(Violation::Kind kind);

// Diagnoses every defect of the model; empty result == well-formed. Exact
// backing gets exact checks (norm_tol ignored), approximate backing is
// checked within norm_tol.
std::vector<Violation> validate_model(const EmpiricalModel& model,
                                      double norm_tol = kDefaultNormTol);

// Throws input_error listing all violations when the model is not well-formed.
void require_valid(const EmpiricalModel& model, double norm_tol = kDefaultNormTol);

// Distribution of `subset` within `context`, summing over the complement.
// Subset order is preserved. Throws input_error on unknown context or stray
// subset members.
Distribution marginalize(const EmpiricalModel& model, const Context& context,
                         const std::vector<std::string>& subset);

struct SignallingViolation {
    std::vector<std::string> shared;   // the observable subset compared
    std::size_t context_a = 0;
    std::size_t context_b = 0;
    double total_variation = 0.0;
};

// Compares the marginals of every observable subset shared by two contexts;
// reports pairs whose total-variation distance exceeds tol. Empty result ==
// no-signalling.
std::vector<SignallingViolation> check_no_signalling(const EmpiricalModel& model,
                                                     double tol = kDefaultNormTol);

// Joined-by-"|" keys used in the JSON model format.
std::string context_key(const Context& context);
std::string tuple_key(const MeasurementScenario& scenario, const Context& context,
                      std::uint64_t flat);

// The standard four-context scenario over dichotomic +-1 observables
// A, A', B, B' with contexts (A,B), (A,B'), (A',B), (A',B').
MeasurementScenario chsh_scenario();

}  // namespace bellctx
