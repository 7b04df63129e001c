#pragma once

// Canonical CHSH boxes and the seeded no-signalling model generator used by
// the property and acceptance suites.

#include <array>
#include <cstdint>
#include <vector>

#include "bellctx/assignments.hpp"
#include "bellctx/rng.hpp"
#include "bellctx/scenario.hpp"

namespace testsupport {

using bellctx::Backing;
using bellctx::ContextTable;
using bellctx::EmpiricalModel;
using bellctx::Rational;

// Correlated table: 1/2 each on (+1,+1) and (-1,-1); anticorrelated: 1/2
// each on (+1,-1) and (-1,+1). Flat order (+1,+1),(+1,-1),(-1,+1),(-1,-1).
inline ContextTable pair_table(bool anticorrelated) {
    ContextTable t;
    const Rational half(1, 2);
    if (anticorrelated) {
        t.probs = {0, half, half, 0};
    } else {
        t.probs = {half, 0, 0, half};
    }
    t.present.assign(4, true);
    return t;
}

// PR-box family: anticorrelation on an odd subset of the four contexts.
// Mask bit i anticorrelates context i in the order (A,B),(A,B'),(A',B),(A',B').
inline EmpiricalModel pr_box_variant(unsigned anticorrelation_mask) {
    EmpiricalModel model;
    model.scenario = bellctx::chsh_scenario();
    model.backing = Backing::Exact;
    for (unsigned c = 0; c < 4; ++c) {
        model.tables.push_back(pair_table((anticorrelation_mask >> c) & 1u));
    }
    return model;
}

// The PR box proper: three correlated contexts, (A',B') anticorrelated.
inline EmpiricalModel pr_box() { return pr_box_variant(0b1000); }

inline EmpiricalModel uniform_box() {
    EmpiricalModel model;
    model.scenario = bellctx::chsh_scenario();
    model.backing = Backing::Exact;
    const Rational quarter(1, 4);
    for (int c = 0; c < 4; ++c) {
        ContextTable t;
        t.probs.assign(4, quarter);
        t.present.assign(4, true);
        model.tables.push_back(t);
    }
    return model;
}

// Entrywise mixture lambda * a + (1 - lambda) * b over a shared scenario.
inline EmpiricalModel mix(const EmpiricalModel& a, const EmpiricalModel& b,
                          const Rational& lambda) {
    EmpiricalModel out = a;
    for (std::size_t c = 0; c < out.tables.size(); ++c) {
        for (std::size_t f = 0; f < out.tables[c].probs.size(); ++f) {
            out.tables[c].probs[f] =
                lambda * a.tables[c].probs[f] + (1 - lambda) * b.tables[c].probs[f];
        }
    }
    if (b.backing == Backing::Approx) out.backing = Backing::Approx;
    return out;
}

// Seeded generator over the no-signalling polytope: a random rational-weight
// mixture of the 16 deterministic boxes, mixed with a random PR-box variant
// by a random rational weight. Spans both the feasible and infeasible
// regions while keeping every probability an exact small rational.
class NoSignallingGenerator {
public:
    explicit NoSignallingGenerator(std::uint64_t seed) : gen_(seed) {
        const auto scenario = bellctx::chsh_scenario();
        for (const auto& g : bellctx::enumerate_assignments(scenario)) {
            deterministic_.push_back(bellctx::assignment_model(g, scenario));
        }
        for (unsigned mask = 0; mask < 16; ++mask) {
            if (__builtin_popcount(mask) % 2 == 1) pr_variants_.push_back(pr_box_variant(mask));
        }
    }

    EmpiricalModel operator()() {
        // random point of the deterministic polytope
        std::array<std::uint64_t, 16> weights{};
        std::uint64_t total = 0;
        while (total == 0) {
            for (auto& w : weights) {
                w = gen_() % 8;
                total += w;
            }
        }
        EmpiricalModel box = uniform_box();  // reused as an accumulator shape
        for (auto& table : box.tables) {
            for (auto& p : table.probs) p = 0;
        }
        for (std::size_t g = 0; g < 16; ++g) {
            if (weights[g] == 0) continue;
            const Rational w(weights[g], total);
            for (std::size_t c = 0; c < 4; ++c) {
                for (std::size_t f = 0; f < 4; ++f) {
                    box.tables[c].probs[f] += w * deterministic_[g].tables[c].probs[f];
                }
            }
        }

        const auto& pr = pr_variants_[gen_() % pr_variants_.size()];
        const Rational mu(gen_() % 65, 64);  // mixing weight toward the PR vertex
        return mix(pr, box, mu);
    }

private:
    bellctx::rng::Xoshiro256pp gen_;
    std::vector<EmpiricalModel> deterministic_;
    std::vector<EmpiricalModel> pr_variants_;
};

}  // namespace testsupport
