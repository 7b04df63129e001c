#include "bellctx/quantum.hpp"

#include <cmath>

#include "bellctx/errors.hpp"

namespace bellctx::quantum {

namespace {

// +-1 eigenvectors of the in-plane spin observable n.sigma with
// n = (sin t, 0, cos t), in the z basis. Both are real.
struct Eigenvectors {
    std::array<double, 2> plus;
    std::array<double, 2> minus;
};

Eigenvectors spin_eigenvectors(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return {{c, s}, {-s, c}};
}

// p(o1, o2) for outcome signs o1, o2 in {+1, -1}: squared overlap of the
// product eigenvector with the state.
std::array<std::array<double, 2>, 2> outcome_probabilities(const TwoQubitState& state,
                                                           double angle1, double angle2) {
    const auto e1 = spin_eigenvectors(angle1);
    const auto e2 = spin_eigenvectors(angle2);
    std::array<std::array<double, 2>, 2> p{};
    for (int o1 = 0; o1 < 2; ++o1) {
        const auto& v = o1 == 0 ? e1.plus : e1.minus;
        for (int o2 = 0; o2 < 2; ++o2) {
            const auto& w = o2 == 0 ? e2.plus : e2.minus;
            std::complex<double> overlap = 0.0;
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k) {
                    overlap += v[j] * w[k] * state.amplitudes[j * 2 + k];
                }
            }
            p[o1][o2] = std::norm(overlap);
        }
    }
    return p;
}

}  // namespace

double TwoQubitState::norm_sq() const {
    double total = 0.0;
    for (const auto& a : amplitudes) total += std::norm(a);
    return total;
}

void TwoQubitState::require_normalized() const {
    if (std::abs(norm_sq() - 1.0) > kStateNormTol) {
        throw input_error("two-qubit state is not normalized");
    }
}

TwoQubitState singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{0.0, r, -r, 0.0}};
}

TwoQubitState product00() { return {{1.0, 0.0, 0.0, 0.0}}; }

void SpinSetting::validate() const {
    if (!std::isfinite(angle)) throw input_error("spin setting angle must be finite");
    if (party != 1 && party != 2) throw input_error("spin setting party must be 1 or 2");
}

ChshSettings ChshSettings::from_angles(double a, double a_prime, double b, double b_prime) {
    ChshSettings s{{a, 1}, {a_prime, 1}, {b, 2}, {b_prime, 2}};
    s.a.validate();
    s.a_prime.validate();
    s.b.validate();
    s.b_prime.validate();
    return s;
}

EmpiricalModel born_model(const TwoQubitState& state, const ChshSettings& settings) {
    state.require_normalized();
    for (const auto& setting : {settings.a, settings.a_prime, settings.b, settings.b_prime}) {
        setting.validate();
    }

    EmpiricalModel model;
    model.scenario = chsh_scenario();
    model.backing = Backing::Approx;

    const std::array<double, 2> alice{settings.a.angle, settings.a_prime.angle};
    const std::array<double, 2> bob{settings.b.angle, settings.b_prime.angle};
    // Context order of chsh_scenario(): (A,B), (A,B'), (A',B), (A',B').
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const auto p = outcome_probabilities(state, alice[i], bob[j]);
            ContextTable table;
            table.probs = {Rational(p[0][0]), Rational(p[0][1]), Rational(p[1][0]),
                           Rational(p[1][1])};
            table.present.assign(4, true);
            model.tables.push_back(std::move(table));
        }
    }
    return model;
}

double correlator(const TwoQubitState& state, double a, double b) {
    state.require_normalized();
    const auto p = outcome_probabilities(state, a, b);
    return p[0][0] - p[0][1] - p[1][0] + p[1][1];
}

}  // namespace bellctx::quantum
