#include "bellctx/assignments.hpp"

#include "bellctx/errors.hpp"

namespace bellctx {

std::map<std::string, std::string> GlobalAssignment::values(
    const MeasurementScenario& scenario) const {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < scenario.observables.size(); ++i) {
        const auto& obs = scenario.observables[i];
        out[obs.id] = obs.outcomes[outcome_index[i]];
    }
    return out;
}

std::string GlobalAssignment::tuple_key(const MeasurementScenario& scenario) const {
    std::string key;
    for (std::size_t i = 0; i < scenario.observables.size(); ++i) {
        if (i) key += '|';
        key += scenario.observables[i].outcomes[outcome_index[i]];
    }
    return key;
}

std::uint64_t assignment_count(const MeasurementScenario& scenario) {
    if (scenario.observables.empty()) {
        throw input_error("scenario has no observables; nothing to assign");
    }
    return joint_outcome_count(scenario);  // throws cap_exceeded past the cap
}

void for_each_assignment(const MeasurementScenario& scenario,
                         const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    assignment_count(scenario);
    const std::size_t k = scenario.observables.size();
    std::vector<std::uint32_t> idx(k, 0);
    while (true) {
        fn(idx);
        // lexicographic successor: last observable varies fastest
        std::size_t pos = k;
        while (pos-- > 0) {
            if (++idx[pos] < scenario.observables[pos].outcomes.size()) break;
            idx[pos] = 0;
            if (pos == 0) return;
        }
    }
}

std::vector<GlobalAssignment> enumerate_assignments(const MeasurementScenario& scenario) {
    std::vector<GlobalAssignment> out;
    out.reserve(assignment_count(scenario));
    for_each_assignment(scenario, [&](const std::vector<std::uint32_t>& idx) {
        out.push_back(GlobalAssignment{idx});
    });
    return out;
}

EmpiricalModel assignment_model(const GlobalAssignment& assignment,
                                const MeasurementScenario& scenario) {
    if (assignment.outcome_index.size() != scenario.observables.size()) {
        throw input_error("assignment is not total on the scenario");
    }
    for (std::size_t i = 0; i < scenario.observables.size(); ++i) {
        if (assignment.outcome_index[i] >= scenario.observables[i].outcomes.size()) {
            throw input_error("assignment picks a nonexistent outcome for '" +
                              scenario.observables[i].id + "'");
        }
    }

    EmpiricalModel model;
    model.scenario = scenario;
    model.backing = Backing::Exact;
    model.tables.reserve(scenario.contexts.size());
    for (const auto& ctx : scenario.contexts) {
        const auto size = context_table_size(scenario, ctx);
        ContextTable table;
        table.probs.assign(size, Rational(0));
        table.present.assign(size, true);
        std::vector<std::uint32_t> restricted(ctx.members.size());
        for (std::size_t k = 0; k < ctx.members.size(); ++k) {
            restricted[k] = assignment.outcome_index[*scenario.observable_index(ctx.members[k])];
        }
        table.probs[flatten_tuple(scenario, ctx, restricted)] = 1;
        model.tables.push_back(std::move(table));
    }
    return model;
}

}  // namespace bellctx
