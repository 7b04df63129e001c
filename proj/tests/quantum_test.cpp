#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellctx/contextuality.hpp"
#include "bellctx/errors.hpp"
#include "bellctx/quantum.hpp"
#include "bellctx/rng.hpp"

using namespace bellctx;
using quantum::born_model;
using quantum::ChshSettings;
using quantum::correlator;
using quantum::product00;
using quantum::singlet;
using quantum::TwoQubitState;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

TwoQubitState random_state(rng::Xoshiro256pp& gen) {
    std::array<std::complex<double>, 4> amp;
    double norm_sq = 0.0;
    for (auto& a : amp) {
        const auto [re, im] = rng::standard_normal_pair(gen);
        a = {re, im};
        norm_sq += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& a : amp) a *= scale;
    return {amp};
}

}  // namespace

TEST_CASE("unnormalized states are rejected") {
    TwoQubitState bad{{1.0, 1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(born_model(bad, ChshSettings::from_angles(0, 1, 2, 3)), input_error);
    CHECK_THROWS_AS(correlator(bad, 0.0, 1.0), input_error);
}

TEST_CASE("settings must be finite") {
    CHECK_THROWS_AS(ChshSettings::from_angles(0, 1, 2, std::nan("")), input_error);
}

TEST_CASE("singlet at equal angles is perfectly anticorrelated") {
    for (const double angle : {0.0, 0.3, kPi / 3, 2.0}) {
        const auto model = born_model(singlet(), ChshSettings::from_angles(angle, 1.0, angle, 2.5));
        // context (A,B) has both settings at `angle`
        const auto& table = model.tables[0];
        CHECK(to_double(table.probs[0]) == doctest::Approx(0.0).epsilon(1e-12));  // (+1,+1)
        CHECK(to_double(table.probs[1]) == doctest::Approx(0.5));                 // (+1,-1)
        CHECK(to_double(table.probs[2]) == doctest::Approx(0.5));                 // (-1,+1)
        CHECK(to_double(table.probs[3]) == doctest::Approx(0.0).epsilon(1e-12));  // (-1,-1)
        CHECK(correlator(singlet(), angle, angle) == doctest::Approx(-1.0));
    }
}

TEST_CASE("singlet correlator matches the closed form -cos(a-b)") {
    // the projector arithmetic is the implementation; the trigonometric
    // closed form is the independent oracle
    rng::Xoshiro256pp gen(11);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = 4.0 * kPi * (rng::uniform01(gen) - 0.5);
        const double b = 4.0 * kPi * (rng::uniform01(gen) - 0.5);
        CHECK(std::abs(correlator(singlet(), a, b) + std::cos(a - b)) < 1e-12);
    }
    CHECK(correlator(singlet(), 0.0, kPi / 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(correlator(singlet(), kPi / 4, 0.0) == doctest::Approx(-std::sqrt(2.0) / 2.0));
}

TEST_CASE("singlet correlator is rotation invariant") {
    rng::Xoshiro256pp gen(13);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = 2.0 * kPi * rng::uniform01(gen);
        const double b = 2.0 * kPi * rng::uniform01(gen);
        const double theta = 2.0 * kPi * rng::uniform01(gen);
        CHECK(std::abs(correlator(singlet(), a, b) -
                       correlator(singlet(), a + theta, b + theta)) < 1e-12);
    }
}

TEST_CASE("born models validate and are no-signalling to 1e-12") {
    rng::Xoshiro256pp gen(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto state = random_state(gen);
        const auto settings = ChshSettings::from_angles(
            2.0 * kPi * rng::uniform01(gen), 2.0 * kPi * rng::uniform01(gen),
            2.0 * kPi * rng::uniform01(gen), 2.0 * kPi * rng::uniform01(gen));
        const auto model = born_model(state, settings);
        CHECK(validate_model(model).empty());
        CHECK(check_no_signalling(model, 1e-12).empty());
    }
}

TEST_CASE("Tsirelson settings reach 2 sqrt 2") {
    const auto model = born_model(
        singlet(), ChshSettings::from_angles(0.0, kPi / 2, kPi / 4, 3 * kPi / 4));
    CHECK(std::abs(chsh_max(model) - 2.0 * std::sqrt(2.0)) < 1e-9);
    CHECK(!has_global_joint(model));
    const auto report = noncontextual_fraction(model);
    CHECK(!report.feasible);
}

TEST_CASE("quantum models never exceed the Tsirelson bound") {
    rng::Xoshiro256pp gen(23);
    const double bound = 2.0 * std::sqrt(2.0) + 1e-9;
    for (int trial = 0; trial < 500; ++trial) {
        const auto state = random_state(gen);
        const auto settings = ChshSettings::from_angles(
            4.0 * kPi * (rng::uniform01(gen) - 0.5), 4.0 * kPi * (rng::uniform01(gen) - 0.5),
            4.0 * kPi * (rng::uniform01(gen) - 0.5), 4.0 * kPi * (rng::uniform01(gen) - 0.5));
        CHECK(chsh_max(born_model(state, settings)) <= bound);
    }
}

TEST_CASE("product state statistics admit a global joint distribution") {
    const auto model = born_model(
        product00(), ChshSettings::from_angles(0.2, 1.4, 0.9, 2.2));
    CHECK(has_global_joint(model));
    const auto report = noncontextual_fraction(model);
    CHECK(report.feasible);
    CHECK(to_double(report.contextual_fraction) < 1e-9);
}
