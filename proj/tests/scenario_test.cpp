#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "bellctx/errors.hpp"
#include "bellctx/scenario.hpp"
#include "support/model_builders.hpp"

using namespace bellctx;
using testsupport::pr_box;
using testsupport::uniform_box;

namespace {

bool has_kind(const std::vector<Violation>& violations, Violation::Kind kind,
              const std::string& where) {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
        return v.kind == kind && v.where == where;
    });
}

}  // namespace

TEST_CASE("rational literals parse and print") {
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("0") == 0);
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(rational_to_string(Rational(1, 2)) == "1/2");
    CHECK(rational_to_string(Rational(5)) == "5");
    CHECK_THROWS_AS(parse_rational("1/0"), input_error);
    CHECK_THROWS_AS(parse_rational("1/-2"), input_error);
    CHECK_THROWS_AS(parse_rational("a/b"), input_error);
    CHECK_THROWS_AS(parse_rational(""), input_error);
}

TEST_CASE("PR box is well-formed") {
    CHECK(validate_model(pr_box()).empty());
}

TEST_CASE("normalization violation names the offending context") {
    auto model = pr_box();
    model.tables[0].probs[0] = Rational(2, 5);  // (A,B) row now sums to 9/10
    const auto violations = validate_model(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == Violation::Kind::Normalization);
    CHECK(violations[0].where == "A|B");
}

TEST_CASE("negative probability is reported") {
    auto model = pr_box();
    model.tables[1].probs[1] = Rational(-1, 10);
    const auto violations = validate_model(model);
    CHECK(has_kind(violations, Violation::Kind::NegativeProbability, "A|B'"));
}

TEST_CASE("missing entries are reported per tuple") {
    auto model = pr_box();
    model.tables[2].present[3] = false;
    const auto violations = validate_model(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == Violation::Kind::MissingEntry);
    CHECK(violations[0].where == "A'|B");
}

TEST_CASE("scenario structure problems are diagnosed") {
    MeasurementScenario s = chsh_scenario();
    SUBCASE("duplicate contexts as sets") {
        s.contexts.push_back({{"B", "A"}});  // same set as (A,B)
        EmpiricalModel m{s, {}, Backing::Exact};
        const auto violations = validate_model(m);
        CHECK(has_kind(violations, Violation::Kind::ScenarioStructure, "B|A"));
    }
    SUBCASE("observable in no context") {
        s.observables.push_back({"C", {"+1", "-1"}, std::nullopt});
        EmpiricalModel m{s, {}, Backing::Exact};
        CHECK(has_kind(validate_model(m), Violation::Kind::ScenarioStructure, "C"));
    }
    SUBCASE("context referencing unknown id") {
        s.contexts[0].members[1] = "Z";
        EmpiricalModel m{s, {}, Backing::Exact};
        CHECK(!validate_model(m).empty());
    }
    SUBCASE("single-outcome observable rejected") {
        s.observables[0].outcomes = {"+1"};
        s.observables[0].values = std::nullopt;
        EmpiricalModel m{s, {}, Backing::Exact};
        CHECK(has_kind(validate_model(m), Violation::Kind::ScenarioStructure, "A"));
    }
}

TEST_CASE("approximate backing uses the tolerance, exact backing does not") {
    auto model = pr_box();
    // nudge one entry by 1e-12: fails exactly, passes at the default norm_tol
    model.tables[0].probs[0] = Rational(1, 2) + Rational(1, 1000000000000LL);
    CHECK(!validate_model(model).empty());
    model.backing = Backing::Approx;
    CHECK(validate_model(model).empty());
}

TEST_CASE("marginal of the PR box on one observable is uniform") {
    const auto model = pr_box();
    const auto dist = marginalize(model, {{"A", "B"}}, {"A"});
    REQUIRE(dist.probs.size() == 2);
    // sum the two PR-box entries per A-outcome by hand: 1/2 + 0 each
    CHECK(dist.probs[0] == Rational(1, 2));
    CHECK(dist.probs[1] == Rational(1, 2));
    CHECK(dist.support[0] == std::vector<std::string>{"+1"});
    CHECK(dist.support[1] == std::vector<std::string>{"-1"});
}

TEST_CASE("marginalizing to the full member list returns the table itself") {
    const auto model = pr_box();
    const auto dist = marginalize(model, {{"A'", "B'"}}, {"A'", "B'"});
    REQUIRE(dist.probs.size() == 4);
    for (std::size_t f = 0; f < 4; ++f) CHECK(dist.probs[f] == model.tables[3].probs[f]);
}

TEST_CASE("marginal of a deterministic model is a point mass") {
    const auto scenario = chsh_scenario();
    const GlobalAssignment g{{0, 0, 0, 0}};  // everything +1
    const auto model = assignment_model(g, scenario);
    const auto dist = marginalize(model, {{"A", "B"}}, {"A"});
    CHECK(dist.probs[0] == 1);
    CHECK(dist.probs[1] == 0);
}

TEST_CASE("marginalize rejects bad inputs") {
    const auto model = pr_box();
    CHECK_THROWS_AS(marginalize(model, {{"A", "Z"}}, {"A"}), input_error);
    CHECK_THROWS_AS(marginalize(model, {{"A", "B"}}, {"B'"}), input_error);
}

TEST_CASE("marginalization is associative") {
    // summing the S1 = {A,B} marginal over A equals marginalizing straight
    // to S2 = {B}
    const auto model = pr_box();
    const auto via_s1 = marginalize(model, {{"A", "B"}}, {"A", "B"});
    const auto direct = marginalize(model, {{"A", "B"}}, {"B"});
    for (std::size_t b = 0; b < direct.probs.size(); ++b) {
        Rational summed = 0;
        for (std::size_t f = 0; f < via_s1.probs.size(); ++f) {
            if (via_s1.support[f][1] == direct.support[b][0]) summed += via_s1.probs[f];
        }
        CHECK(summed == direct.probs[b]);
    }

    // subset order is preserved even when it permutes the member order
    const auto swapped = marginalize(model, {{"A", "B"}}, {"B", "A"});
    CHECK(swapped.observables == std::vector<std::string>{"B", "A"});
    Rational b_plus = 0;
    for (std::size_t f = 0; f < swapped.probs.size(); ++f) {
        if (swapped.support[f][0] == "+1") b_plus += swapped.probs[f];
    }
    CHECK(direct.probs[0] == b_plus);
}

TEST_CASE("every marginal of a valid model is normalized") {
    const auto model = pr_box();
    for (const auto& ctx : model.scenario.contexts) {
        for (const auto& id : ctx.members) {
            const auto dist = marginalize(model, ctx, {id});
            Rational sum = 0;
            for (const auto& p : dist.probs) sum += p;
            CHECK(sum == 1);
        }
    }
}

TEST_CASE("PR box and uniform box are no-signalling") {
    CHECK(check_no_signalling(pr_box()).empty());
    CHECK(check_no_signalling(uniform_box()).empty());
}

TEST_CASE("assignment models are no-signalling") {
    const auto scenario = chsh_scenario();
    for (const auto& g : enumerate_assignments(scenario)) {
        CHECK(check_no_signalling(assignment_model(g, scenario)).empty());
    }
}

TEST_CASE("a lopsided marginal is flagged and names the observable") {
    auto model = uniform_box();
    // context (A,B): p(A=+1) = 0.6; context (A,B'): p(A=+1) stays 0.5
    model.tables[0].probs = {Rational(3, 10), Rational(3, 10), Rational(1, 5), Rational(1, 5)};
    const auto violations = check_no_signalling(model, 1e-9);
    REQUIRE(!violations.empty());
    bool found_a = false;
    for (const auto& v : violations) {
        if (v.shared == std::vector<std::string>{"A"}) found_a = true;
    }
    CHECK(found_a);
}

TEST_CASE("joint outcome count honors the enumeration cap") {
    MeasurementScenario s;
    std::vector<std::string> outcomes(100);
    for (int i = 0; i < 100; ++i) outcomes[i] = "o" + std::to_string(i);
    for (int i = 0; i < 4; ++i) {
        s.observables.push_back({"X" + std::to_string(i), outcomes, std::nullopt});
    }
    // 100^4 = 1e8 > cap
    CHECK_THROWS_AS(joint_outcome_count(s), cap_exceeded);
}

TEST_CASE("tuple flattening round-trips in lexicographic order") {
    const auto s = chsh_scenario();
    const Context ctx{{"A", "B"}};
    CHECK(tuple_key(s, ctx, 0) == "+1|+1");
    CHECK(tuple_key(s, ctx, 1) == "+1|-1");
    CHECK(tuple_key(s, ctx, 2) == "-1|+1");
    CHECK(tuple_key(s, ctx, 3) == "-1|-1");
    for (std::uint64_t f = 0; f < 4; ++f) {
        CHECK(flatten_tuple(s, ctx, unflatten_tuple(s, ctx, f)) == f);
    }
}
