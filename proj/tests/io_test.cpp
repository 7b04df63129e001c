#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bellctx/contextuality.hpp"
#include "bellctx/errors.hpp"
#include "bellctx/manifest.hpp"
#include "bellctx/model_json.hpp"
#include "support/model_builders.hpp"

using namespace bellctx;
using nlohmann::json;
using testsupport::pr_box;

namespace {

const std::filesystem::path kFixtures = BELLCTX_FIXTURES_DIR;

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("pr_box fixture parses to the programmatic PR box") {
    const auto parsed = io::load_model_file(kFixtures / "pr_box.json");
    CHECK(parsed.backing == Backing::Exact);
    CHECK(validate_model(parsed).empty());
    const auto built = pr_box();
    REQUIRE(parsed.tables.size() == built.tables.size());
    for (std::size_t c = 0; c < built.tables.size(); ++c) {
        for (std::size_t f = 0; f < 4; ++f) {
            CHECK(parsed.tables[c].probs[f] == built.tables[c].probs[f]);
        }
    }
}

TEST_CASE("bad_norm fixture parses but fails validation on context (A,B)") {
    const auto model = io::load_model_file(kFixtures / "bad_norm.json");
    CHECK(model.backing == Backing::Approx);
    const auto violations = validate_model(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == Violation::Kind::Normalization);
    CHECK(violations[0].where == "A|B");
}

TEST_CASE("model JSON round-trips exactly for exact backing") {
    const auto original = pr_box();
    const auto text = io::model_to_json(original);
    const auto reparsed = io::parse_model_json(text);
    CHECK(reparsed.backing == Backing::Exact);
    REQUIRE(validate_model(reparsed).empty());
    for (std::size_t c = 0; c < original.tables.size(); ++c) {
        for (std::size_t f = 0; f < 4; ++f) {
            CHECK(reparsed.tables[c].probs[f] == original.tables[c].probs[f]);
        }
    }
}

TEST_CASE("approximate models round-trip through shortest-repr doubles") {
    auto model = pr_box();
    model.backing = Backing::Approx;
    model.tables[0].probs = {Rational(0.1), Rational(0.2), Rational(0.3), Rational(0.4)};
    const auto reparsed = io::parse_model_json(io::model_to_json(model));
    CHECK(reparsed.backing == Backing::Approx);
    for (std::size_t f = 0; f < 4; ++f) {
        CHECK(to_double(reparsed.tables[0].probs[f]) ==
              to_double(model.tables[0].probs[f]));
    }
}

TEST_CASE("parser diagnostics") {
    SUBCASE("syntax errors carry line/column") {
        try {
            io::parse_model_json("{\n  \"format_version\": \"1.0\",\n  oops\n}");
            FAIL("expected input_error");
        } catch (const input_error& err) {
            CHECK(std::string(err.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("missing format_version is rejected") {
        CHECK_THROWS_AS(io::parse_model_json("{\"observables\": []}"), input_error);
    }
    SUBCASE("unknown major version is rejected") {
        std::string text = slurp(kFixtures / "pr_box.json");
        const auto pos = text.find("\"1.0\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 5, "\"2.0\"");
        CHECK_THROWS_AS(io::parse_model_json(text), input_error);
    }
    SUBCASE("unknown tuple key names the table") {
        std::string text = slurp(kFixtures / "pr_box.json");
        const auto pos = text.find("\"+1|+1\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 7, "\"+2|+1\"");
        try {
            io::parse_model_json(text);
            FAIL("expected input_error");
        } catch (const input_error& err) {
            CHECK(std::string(err.what()).find("A|B") != std::string::npos);
        }
    }
    SUBCASE("a table keyed on no context is rejected") {
        std::string text = slurp(kFixtures / "pr_box.json");
        const auto pos = text.find("\"A'|B'\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 7, "\"A'|Z'\"");
        CHECK_THROWS_AS(io::parse_model_json(text), input_error);
    }
    SUBCASE("missing tables become missing-entry diagnostics, not parse errors") {
        json doc = json::parse(slurp(kFixtures / "pr_box.json"));
        doc["tables"].erase("A'|B'");
        const auto model = io::parse_model_json(doc.dump());
        const auto violations = validate_model(model);
        CHECK(violations.size() == 4);  // all four tuples of (A',B') missing
        for (const auto& v : violations) CHECK(v.kind == Violation::Kind::MissingEntry);
    }
}

TEST_CASE("report JSON carries the type's fields") {
    const auto model = pr_box();
    const auto report = noncontextual_fraction(model);
    const auto doc = json::parse(io::report_to_json(report, model.scenario));
    CHECK(doc.at("feasible") == false);
    CHECK(doc.at("noncontextual_fraction") == 0.0);
    CHECK(doc.at("contextual_fraction") == 1.0);
    REQUIRE(doc.contains("chsh_values"));
    CHECK(doc.at("chsh_values").size() == 8);
    CHECK(doc.at("certificate").at("type") == "dual_witness");
    CHECK(doc.at("certificate").contains("violated_chsh"));

    const auto uniform = testsupport::uniform_box();
    const auto feasible_report = noncontextual_fraction(uniform);
    const auto fdoc = json::parse(io::report_to_json(feasible_report, uniform.scenario));
    CHECK(fdoc.at("feasible") == true);
    CHECK(fdoc.at("certificate").at("type") == "global_distribution");
    Rational total = 0;
    for (const auto& [key, weight] : fdoc.at("certificate").at("weights").items()) {
        total += parse_rational(weight.get<std::string>());
    }
    CHECK(total == 1);
}

TEST_CASE("sha256 matches the standard test vectors") {
    CHECK(io::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // one-million 'a' bytes, the classic long-input vector
    const std::string million(1000000, 'a');
    CHECK(io::sha256_hex(million) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("manifests round-trip and verify digests") {
    const auto dir = std::filesystem::temp_directory_path() / "bellctx_manifest_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "data.csv", std::ios::binary);
        out << "t,value\n0,1\n";
    }

    io::RunManifest manifest;
    manifest.command = "simulate";
    manifest.argv = {"bellctx", "simulate", "--seed", "42"};
    manifest.seed = 42;
    manifest.params.emplace_back("sigma", 1.0);
    manifest.params.emplace_back("steps", std::int64_t{2000});
    manifest.params.emplace_back("mode", std::string("forward"));
    manifest.add_output(dir, "data.csv");
    io::write_manifest(dir, manifest);

    const auto parsed = io::parse_manifest_json(slurp(dir / "manifest.json"));
    CHECK(parsed.command == "simulate");
    CHECK(parsed.seed == 42);
    CHECK(parsed.outputs.size() == 1);
    CHECK(io::verify_manifest(dir, parsed).empty());

    // tamper with the file: verification must name it
    {
        std::ofstream out(dir / "data.csv", std::ios::binary | std::ios::app);
        out << "1,2\n";
    }
    const auto mismatched = io::verify_manifest(dir, parsed);
    REQUIRE(mismatched.size() == 1);
    CHECK(mismatched[0] == "data.csv");

    std::filesystem::remove_all(dir);
}
