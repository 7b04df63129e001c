#include "bellctx/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bellctx/errors.hpp"

namespace bellctx {

Rational parse_rational(const std::string& text) {
    const auto bad = [&] { return input_error("not a rational literal: '" + text + "'"); };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos) throw bad();
        BigInt p(num), q(den);
        if (q <= 0) throw input_error("rational denominator must be positive: '" + text + "'");
        return Rational(p, q);
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw bad();
    }
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream out;
    out << numerator(r);
    if (denominator(r) != 1) out << '/' << denominator(r);
    return out.str();
}

std::optional<std::size_t> Observable::outcome_index(const std::string& label) const {
    const auto it = std::find(outcomes.begin(), outcomes.end(), label);
    if (it == outcomes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - outcomes.begin());
}

std::optional<std::size_t> MeasurementScenario::observable_index(const std::string& id) const {
    for (std::size_t i = 0; i < observables.size(); ++i) {
        if (observables[i].id == id) return i;
    }
    return std::nullopt;
}

const Observable& MeasurementScenario::observable(const std::string& id) const {
    const auto idx = observable_index(id);
    if (!idx) throw input_error("unknown observable id: '" + id + "'");
    return observables[*idx];
}

std::optional<std::size_t> MeasurementScenario::context_index(const Context& context) const {
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (contexts[i].members == context.members) return i;
    }
    return std::nullopt;
}

std::uint64_t context_table_size(const MeasurementScenario& scenario, const Context& context) {
    std::uint64_t size = 1;
    for (const auto& id : context.members) {
        size *= scenario.observable(id).outcomes.size();
    }
    return size;
}

std::vector<std::uint32_t> unflatten_tuple(const MeasurementScenario& scenario,
                                           const Context& context, std::uint64_t flat) {
    std::vector<std::uint32_t> idx(context.members.size(), 0);
    for (std::size_t k = context.members.size(); k-- > 0;) {
        const auto radix = scenario.observable(context.members[k]).outcomes.size();
        idx[k] = static_cast<std::uint32_t>(flat % radix);
        flat /= radix;
    }
    return idx;
}

std::uint64_t flatten_tuple(const MeasurementScenario& scenario, const Context& context,
                            const std::vector<std::uint32_t>& outcome_indices) {
    std::uint64_t flat = 0;
    for (std::size_t k = 0; k < context.members.size(); ++k) {
        const auto radix = scenario.observable(context.members[k]).outcomes.size();
        flat = flat * radix + outcome_indices[k];
    }
    return flat;
}

std::uint64_t joint_outcome_count(const MeasurementScenario& scenario) {
    std::uint64_t count = 1;
    for (const auto& obs : scenario.observables) {
        const std::uint64_t radix = obs.outcomes.size();
        if (radix == 0) return 0;
        if (count > kEnumerationCap / radix + 1) {
            throw cap_exceeded("scenario joint outcome space exceeds the enumeration cap");
        }
        count *= radix;
    }
    if (count > kEnumerationCap) {
        throw cap_exceeded("scenario joint outcome space exceeds the enumeration cap");
    }
    return count;
}

std::string context_key(const Context& context) {
    std::string key;
    for (std::size_t i = 0; i < context.members.size(); ++i) {
        if (i) key += '|';
        key += context.members[i];
    }
    return key;
}

std::string tuple_key(const MeasurementScenario& scenario, const Context& context,
                      std::uint64_t flat) {
    const auto idx = unflatten_tuple(scenario, context, flat);
    std::string key;
    for (std::size_t k = 0; k < context.members.size(); ++k) {
        if (k) key += '|';
        key += scenario.observable(context.members[k]).outcomes[idx[k]];
    }
    return key;
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::ScenarioStructure: return "scenario-structure";
        case Violation::Kind::MissingEntry: return "missing-entry";
        case Violation::Kind::NegativeProbability: return "negative-probability";
        case Violation::Kind::Normalization: return "normalization";
    }
    return "unknown";
}

namespace {

void validate_scenario_structure(const MeasurementScenario& scenario,
                                 std::vector<Violation>& out) {
    const auto add = [&](const std::string& where, const std::string& message) {
        out.push_back({Violation::Kind::ScenarioStructure, where, message});
    };

    std::set<std::string> seen_ids;
    for (const auto& obs : scenario.observables) {
        if (!seen_ids.insert(obs.id).second) add(obs.id, "duplicate observable id");
        if (obs.outcomes.size() < 2) add(obs.id, "observable needs at least 2 outcomes");
        std::set<std::string> labels(obs.outcomes.begin(), obs.outcomes.end());
        if (labels.size() != obs.outcomes.size()) add(obs.id, "duplicate outcome labels");
        if (obs.values && obs.values->size() != obs.outcomes.size()) {
            add(obs.id, "numeric values must cover every outcome");
        }
    }

    std::set<std::set<std::string>> context_sets;
    std::set<std::string> covered;
    for (const auto& ctx : scenario.contexts) {
        const std::string key = context_key(ctx);
        if (ctx.members.empty()) add(key, "context has no members");
        std::set<std::string> members(ctx.members.begin(), ctx.members.end());
        if (members.size() != ctx.members.size()) add(key, "context repeats an observable");
        for (const auto& id : ctx.members) {
            if (!scenario.observable_index(id)) {
                add(key, "context references unknown observable '" + id + "'");
            } else {
                covered.insert(id);
            }
        }
        if (!context_sets.insert(members).second) {
            add(key, "contexts must be pairwise distinct as sets");
        }
    }
    for (const auto& obs : scenario.observables) {
        if (!covered.count(obs.id)) add(obs.id, "observable appears in no context");
    }
}

}  // namespace

std::vector<Violation> validate_model(const EmpiricalModel& model, double norm_tol) {
    std::vector<Violation> out;
    validate_scenario_structure(model.scenario, out);
    if (!out.empty()) return out;  // table shapes are meaningless on a broken scenario

    if (model.tables.size() != model.scenario.contexts.size()) {
        out.push_back({Violation::Kind::ScenarioStructure, "tables",
                       "model must carry exactly one table per context"});
        return out;
    }

    const bool exact = model.backing == Backing::Exact;
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const auto& ctx = model.scenario.contexts[c];
        const auto& table = model.tables[c];
        const std::string key = context_key(ctx);
        const auto expected = context_table_size(model.scenario, ctx);
        if (table.probs.size() != expected || table.present.size() != expected) {
            out.push_back({Violation::Kind::ScenarioStructure, key,
                           "table has the wrong number of entries"});
            continue;
        }
        Rational sum = 0;
        bool complete = true;
        for (std::uint64_t f = 0; f < expected; ++f) {
            if (!table.present[f]) {
                out.push_back({Violation::Kind::MissingEntry, key,
                               "missing entry for tuple '" +
                                   tuple_key(model.scenario, ctx, f) + "'"});
                complete = false;
                continue;
            }
            if (table.probs[f] < 0) {
                const bool negligible = !exact && to_double(-table.probs[f]) <= norm_tol;
                if (!negligible) {
                    out.push_back({Violation::Kind::NegativeProbability, key,
                                   "negative probability at tuple '" +
                                       tuple_key(model.scenario, ctx, f) + "'"});
                }
            }
            sum += table.probs[f];
        }
        if (!complete) continue;  // a partial table cannot be held to the sum rule
        const bool normalized = exact ? (sum == 1)
                                      : std::abs(to_double(sum) - 1.0) <= norm_tol;
        if (!normalized) {
            std::ostringstream msg;
            msg << "table sums to " << to_double(sum) << " instead of 1";
            out.push_back({Violation::Kind::Normalization, key, msg.str()});
        }
    }
    return out;
}

void require_valid(const EmpiricalModel& model, double norm_tol) {
    const auto violations = validate_model(model, norm_tol);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "model is not well-formed:";
    for (const auto& v : violations) {
        msg << "\n  [" << to_string(v.kind) << "] " << v.where << ": " << v.message;
    }
    throw input_error(msg.str());
}

Distribution marginalize(const EmpiricalModel& model, const Context& context,
                         const std::vector<std::string>& subset) {
    const auto ctx_idx = model.scenario.context_index(context);
    if (!ctx_idx) throw input_error("unknown context: '" + context_key(context) + "'");
    const auto& ctx = model.scenario.contexts[*ctx_idx];
    const auto& table = model.tables[*ctx_idx];

    std::vector<std::size_t> member_pos;
    member_pos.reserve(subset.size());
    for (const auto& id : subset) {
        const auto it = std::find(ctx.members.begin(), ctx.members.end(), id);
        if (it == ctx.members.end()) {
            throw input_error("observable '" + id + "' is not a member of context '" +
                              context_key(context) + "'");
        }
        member_pos.push_back(static_cast<std::size_t>(it - ctx.members.begin()));
    }

    // Accumulate over the complement by walking the full table once.
    Context sub;
    sub.members = subset;
    const auto sub_size = context_table_size(model.scenario, sub);
    std::vector<Rational> probs(sub_size, Rational(0));
    const auto full_size = context_table_size(model.scenario, ctx);
    for (std::uint64_t f = 0; f < full_size; ++f) {
        const auto idx = unflatten_tuple(model.scenario, ctx, f);
        std::vector<std::uint32_t> sub_idx(subset.size());
        for (std::size_t k = 0; k < subset.size(); ++k) sub_idx[k] = idx[member_pos[k]];
        probs[flatten_tuple(model.scenario, sub, sub_idx)] += table.probs[f];
    }

    Distribution dist;
    dist.observables = subset;
    dist.backing = model.backing;
    dist.probs = std::move(probs);
    dist.support.reserve(sub_size);
    for (std::uint64_t f = 0; f < sub_size; ++f) {
        const auto idx = unflatten_tuple(model.scenario, sub, f);
        std::vector<std::string> labels(subset.size());
        for (std::size_t k = 0; k < subset.size(); ++k) {
            labels[k] = model.scenario.observable(subset[k]).outcomes[idx[k]];
        }
        dist.support.push_back(std::move(labels));
    }
    return dist;
}

std::vector<SignallingViolation> check_no_signalling(const EmpiricalModel& model, double tol) {
    require_valid(model);
    std::vector<SignallingViolation> out;
    const auto& contexts = model.scenario.contexts;
    for (std::size_t a = 0; a < contexts.size(); ++a) {
        for (std::size_t b = a + 1; b < contexts.size(); ++b) {
            // Shared subset in context-a member order; marginal agreement on
            // the full intersection implies agreement on all sub-subsets.
            std::vector<std::string> shared;
            for (const auto& id : contexts[a].members) {
                if (std::find(contexts[b].members.begin(), contexts[b].members.end(), id) !=
                    contexts[b].members.end()) {
                    shared.push_back(id);
                }
            }
            if (shared.empty()) continue;
            const auto da = marginalize(model, contexts[a], shared);
            const auto db = marginalize(model, contexts[b], shared);
            Rational tv = 0;
            for (std::size_t i = 0; i < da.probs.size(); ++i) {
                tv += abs(da.probs[i] - db.probs[i]);
            }
            tv /= 2;
            if (to_double(tv) > tol) {
                out.push_back({shared, a, b, to_double(tv)});
            }
        }
    }
    return out;
}

MeasurementScenario chsh_scenario() {
    MeasurementScenario s;
    const std::vector<std::string> dichotomic{"+1", "-1"};
    const std::vector<double> values{1.0, -1.0};
    for (const auto* id : {"A", "A'", "B", "B'"}) {
        s.observables.push_back({id, dichotomic, values});
    }
    s.contexts = {
        {{"A", "B"}}, {{"A", "B'"}}, {{"A'", "B"}}, {{"A'", "B'"}},
    };
    return s;
}

}  // namespace bellctx
