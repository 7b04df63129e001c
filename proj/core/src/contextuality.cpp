#include "bellctx/contextuality.hpp"

#include <algorithm>
#include <cmath>

#include "bellctx/errors.hpp"
#include "bellctx/simplex.hpp"

namespace bellctx {

namespace {

// Past this tableau size exact rational pivoting stops being desk-friendly;
// larger (still cap-respecting) inputs take the double path at 1e-9.
constexpr std::uint64_t kExactCells = 1'000'000;

struct LpLayout {
    std::vector<std::size_t> row_offset;  // per context, into the stacked rows
    std::size_t rows = 0;
    std::uint64_t columns = 0;  // number of global assignments
};

LpLayout layout_for(const EmpiricalModel& model) {
    LpLayout layout;
    layout.columns = assignment_count(model.scenario);
    for (const auto& ctx : model.scenario.contexts) {
        layout.row_offset.push_back(layout.rows);
        layout.rows += context_table_size(model.scenario, ctx);
    }
    if (layout.rows == 0) throw input_error("scenario has no contexts; LP is degenerate");
    return layout;
}

// Row index hit by an assignment in each context (the assignment's
// restriction, flattened).
std::vector<std::size_t> rows_hit(const MeasurementScenario& scenario, const LpLayout& layout,
                                  const std::vector<std::uint32_t>& assignment) {
    std::vector<std::size_t> rows(scenario.contexts.size());
    for (std::size_t c = 0; c < scenario.contexts.size(); ++c) {
        const auto& ctx = scenario.contexts[c];
        std::uint64_t flat = 0;
        for (const auto& id : ctx.members) {
            const auto obs_idx = *scenario.observable_index(id);
            flat = flat * scenario.observables[obs_idx].outcomes.size() + assignment[obs_idx];
        }
        rows[c] = layout.row_offset[c] + flat;
    }
    return rows;
}

template <class T>
std::vector<std::vector<T>> incidence_matrix(const EmpiricalModel& model,
                                             const LpLayout& layout) {
    std::vector<std::vector<T>> A(layout.rows,
                                  std::vector<T>(static_cast<std::size_t>(layout.columns), T(0)));
    std::size_t column = 0;
    for_each_assignment(model.scenario, [&](const std::vector<std::uint32_t>& g) {
        for (const auto row : rows_hit(model.scenario, layout, g)) A[row][column] = T(1);
        ++column;
    });
    return A;
}

template <class T>
std::vector<T> stacked_tables(const EmpiricalModel& model);

template <>
std::vector<Rational> stacked_tables<Rational>(const EmpiricalModel& model) {
    std::vector<Rational> e;
    for (const auto& table : model.tables) {
        for (const auto& p : table.probs) e.push_back(p < 0 ? Rational(0) : p);
    }
    return e;
}

template <>
std::vector<double> stacked_tables<double>(const EmpiricalModel& model) {
    std::vector<double> e;
    for (const auto& table : model.tables) {
        for (const auto& p : table.probs) e.push_back(std::max(0.0, to_double(p)));
    }
    return e;
}

GlobalAssignment nth_assignment(const MeasurementScenario& scenario, std::uint64_t n) {
    GlobalAssignment g;
    g.outcome_index.assign(scenario.observables.size(), 0);
    for (std::size_t i = scenario.observables.size(); i-- > 0;) {
        const auto radix = scenario.observables[i].outcomes.size();
        g.outcome_index[i] = static_cast<std::uint32_t>(n % radix);
        n /= radix;
    }
    return g;
}

}  // namespace

std::optional<ChshStructure> detect_chsh(const MeasurementScenario& scenario) {
    if (scenario.observables.size() != 4 || scenario.contexts.size() != 4) return std::nullopt;
    for (const auto& obs : scenario.observables) {
        if (obs.outcomes.size() != 2 || !obs.values) return std::nullopt;
        const double lo = std::min((*obs.values)[0], (*obs.values)[1]);
        const double hi = std::max((*obs.values)[0], (*obs.values)[1]);
        if (lo != -1.0 || hi != 1.0) return std::nullopt;
    }

    // Co-measurement graph over the 4 observables must be the 4-cycle of a
    // two-party experiment.
    std::array<std::array<bool, 4>, 4> adjacent{};
    for (const auto& ctx : scenario.contexts) {
        if (ctx.members.size() != 2) return std::nullopt;
        const auto i = scenario.observable_index(ctx.members[0]);
        const auto j = scenario.observable_index(ctx.members[1]);
        if (!i || !j || *i == *j) return std::nullopt;
        if (adjacent[*i][*j]) return std::nullopt;  // duplicate context
        adjacent[*i][*j] = adjacent[*j][*i] = true;
    }
    std::array<int, 4> degree{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (adjacent[i][j]) ++degree[i];
        }
    }
    if (std::any_of(degree.begin(), degree.end(), [](int d) { return d != 2; })) {
        return std::nullopt;
    }

    ChshStructure s;
    s.alice[0] = 0;
    std::vector<std::size_t> partners, others;
    for (std::size_t j = 1; j < 4; ++j) {
        (adjacent[0][j] ? partners : others).push_back(j);
    }
    if (partners.size() != 2 || others.size() != 1) return std::nullopt;
    s.bob = {partners[0], partners[1]};
    s.alice[1] = others[0];
    if (!adjacent[s.alice[1]][s.bob[0]] || !adjacent[s.alice[1]][s.bob[1]]) return std::nullopt;

    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const auto& a_id = scenario.observables[s.alice[i]].id;
            const auto& b_id = scenario.observables[s.bob[j]].id;
            bool found = false;
            for (std::size_t c = 0; c < 4; ++c) {
                const auto& m = scenario.contexts[c].members;
                if ((m[0] == a_id && m[1] == b_id) || (m[0] == b_id && m[1] == a_id)) {
                    s.context_of[i * 2 + j] = c;
                    found = true;
                    break;
                }
            }
            if (!found) return std::nullopt;
        }
    }
    return s;
}

const std::array<std::array<int, 4>, 8>& chsh_sign_variants() {
    static const std::array<std::array<int, 4>, 8> variants = [] {
        std::array<std::array<int, 4>, 8> out{};
        std::size_t next = 0;
        for (unsigned mask = 0; mask < 16; ++mask) {
            if (__builtin_popcount(mask) % 2 == 0) continue;
            for (int i = 0; i < 4; ++i) out[next][i] = (mask >> i) & 1u ? -1 : 1;
            ++next;
        }
        return out;
    }();
    return variants;
}

namespace {

ChshStructure require_chsh(const EmpiricalModel& model) {
    auto structure = detect_chsh(model.scenario);
    if (!structure) {
        throw input_error(
            "wrong scenario shape: CHSH functionals need the 4-context scenario over "
            "dichotomic +-1-valued observables");
    }
    return *structure;
}

Rational correlator_exact(const EmpiricalModel& model, std::size_t context_index) {
    const auto& ctx = model.scenario.contexts[context_index];
    const auto& table = model.tables[context_index];
    const auto size = context_table_size(model.scenario, ctx);
    Rational e = 0;
    for (std::uint64_t f = 0; f < size; ++f) {
        const auto idx = unflatten_tuple(model.scenario, ctx, f);
        Rational prod = table.probs[f];
        for (std::size_t k = 0; k < ctx.members.size(); ++k) {
            const auto& obs = model.scenario.observable(ctx.members[k]);
            prod *= Rational((*obs.values)[idx[k]]);
        }
        e += prod;
    }
    return e;
}

}  // namespace

Rational chsh_value_exact(const EmpiricalModel& model, const std::array<int, 4>& signs) {
    const auto s = require_chsh(model);
    Rational total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        total += Rational(signs[i]) * correlator_exact(model, s.context_of[i]);
    }
    return total;
}

double chsh_value(const EmpiricalModel& model, const std::array<int, 4>& signs) {
    return to_double(chsh_value_exact(model, signs));
}

std::vector<SignedChsh> chsh_values(const EmpiricalModel& model) {
    std::vector<SignedChsh> out;
    out.reserve(8);
    for (const auto& signs : chsh_sign_variants()) {
        out.push_back({signs, chsh_value(model, signs)});
    }
    return out;
}

Rational chsh_max_exact(const EmpiricalModel& model) {
    Rational best;
    bool first = true;
    for (const auto& signs : chsh_sign_variants()) {
        Rational v = chsh_value_exact(model, signs);
        if (first || v > best) {
            best = v;
            first = false;
        }
    }
    return best;
}

double chsh_max(const EmpiricalModel& model) { return to_double(chsh_max_exact(model)); }

namespace {

std::optional<SignedChsh> find_violated_chsh(const EmpiricalModel& model) {
    if (!detect_chsh(model.scenario)) return std::nullopt;
    std::optional<SignedChsh> worst;
    Rational worst_exact;
    for (const auto& signs : chsh_sign_variants()) {
        const Rational v = chsh_value_exact(model, signs);
        const bool violated = model.backing == Backing::Exact
                                  ? v > 2
                                  : to_double(v) > 2.0 + kFeasibilityTol;
        if (violated && (!worst || v > worst_exact)) {
            worst = SignedChsh{signs, to_double(v)};
            worst_exact = v;
        }
    }
    return worst;
}

ContextualityReport finish_report(const EmpiricalModel& model, Rational optimum,
                                  std::vector<std::pair<GlobalAssignment, Rational>> weights,
                                  std::vector<Rational> dual) {
    ContextualityReport report;
    if (optimum < 0) optimum = 0;
    if (optimum > 1) optimum = 1;  // roundoff guard on the double path
    report.noncontextual_fraction = optimum;
    report.contextual_fraction = 1 - optimum;
    report.feasible = model.backing == Backing::Exact
                          ? optimum == 1
                          : to_double(optimum) >= 1.0 - kFeasibilityTol;
    if (detect_chsh(model.scenario)) report.chsh_values = chsh_values(model);
    if (report.feasible) {
        report.certificate = FeasibleCertificate{std::move(weights)};
    } else {
        report.certificate = InfeasibleCertificate{std::move(dual), find_violated_chsh(model)};
    }
    return report;
}

}  // namespace

ContextualityReport noncontextual_fraction(const EmpiricalModel& model) {
    require_valid(model);
    const auto layout = layout_for(model);

    const bool exact_path = layout.columns * layout.rows <= kExactCells;
    if (exact_path) {
        const auto A = incidence_matrix<Rational>(model, layout);
        const auto e = stacked_tables<Rational>(model);
        const std::vector<Rational> ones(static_cast<std::size_t>(layout.columns), Rational(1));
        const auto sol = lp::maximize_leq<Rational>(A, e, ones, Rational(0));
        if (sol.status != lp::Status::Optimal) {
            throw numerical_error("noncontextual-fraction LP did not reach an optimum");
        }
        std::vector<std::pair<GlobalAssignment, Rational>> weights;
        for (std::size_t j = 0; j < sol.x.size(); ++j) {
            if (sol.x[j] != 0) weights.emplace_back(nth_assignment(model.scenario, j), sol.x[j]);
        }
        return finish_report(model, sol.objective, std::move(weights), sol.dual);
    }

    const auto A = incidence_matrix<double>(model, layout);
    const auto e = stacked_tables<double>(model);
    const std::vector<double> ones(static_cast<std::size_t>(layout.columns), 1.0);
    const auto sol = lp::maximize_leq<double>(A, e, ones, kFeasibilityTol);
    if (sol.status != lp::Status::Optimal) {
        throw numerical_error("noncontextual-fraction LP did not reach an optimum");
    }
    std::vector<std::pair<GlobalAssignment, Rational>> weights;
    for (std::size_t j = 0; j < sol.x.size(); ++j) {
        if (sol.x[j] > kFeasibilityTol) {
            weights.emplace_back(nth_assignment(model.scenario, j), Rational(sol.x[j]));
        }
    }
    std::vector<Rational> dual;
    dual.reserve(sol.dual.size());
    for (const double y : sol.dual) dual.emplace_back(y);
    return finish_report(model, Rational(sol.objective), std::move(weights), std::move(dual));
}

bool has_global_joint(const EmpiricalModel& model) {
    require_valid(model);
    const auto layout = layout_for(model);

    // Exact equality constraints only make sense for exact tables: a table
    // read off floating-point data sums to 1 only within roundoff, which the
    // rational path would (correctly but uselessly) call infeasible.
    const bool exact_path = model.backing == Backing::Exact &&
                            layout.columns * layout.rows <= kExactCells;
    if (exact_path) {
        const auto A = incidence_matrix<Rational>(model, layout);
        const auto e = stacked_tables<Rational>(model);
        return lp::equality_feasible<Rational>(A, e, Rational(0)).feasible;
    }
    const auto A = incidence_matrix<double>(model, layout);
    const auto e = stacked_tables<double>(model);
    return lp::equality_feasible<double>(A, e, kFeasibilityTol).feasible;
}

}  // namespace bellctx
