#include "bellctx/model_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bellctx/errors.hpp"

namespace bellctx::io {

using nlohmann::json;

std::string format_version() {
    return std::to_string(kFormatMajor) + "." + std::to_string(kFormatMinor);
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw input_error("model JSON: " + where + ": " + what);
}

void check_format_version(const json& doc) {
    if (!doc.contains("format_version")) fail("format_version", "field is required");
    const auto& v = doc.at("format_version");
    if (!v.is_string()) fail("format_version", "must be a string like \"1.0\"");
    const std::string text = v.get<std::string>();
    const auto dot = text.find('.');
    int major = -1;
    try {
        major = std::stoi(dot == std::string::npos ? text : text.substr(0, dot));
    } catch (const std::exception&) {
        fail("format_version", "cannot parse '" + text + "'");
    }
    if (major != kFormatMajor) {
        fail("format_version", "unknown major version '" + text + "' (this build reads " +
                                   format_version() + ")");
    }
}

MeasurementScenario parse_scenario(const json& doc) {
    MeasurementScenario scenario;
    if (!doc.contains("observables") || !doc.at("observables").is_array()) {
        fail("observables", "required array is missing");
    }
    std::size_t index = 0;
    for (const auto& entry : doc.at("observables")) {
        const std::string where = "observables[" + std::to_string(index++) + "]";
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("outcomes")) {
            fail(where, "each observable needs 'id' and 'outcomes'");
        }
        Observable obs;
        if (!entry.at("id").is_string()) fail(where + ".id", "must be a string");
        obs.id = entry.at("id").get<std::string>();
        if (!entry.at("outcomes").is_array() || entry.at("outcomes").empty()) {
            fail(where + ".outcomes", "must be a non-empty array of labels");
        }
        for (const auto& label : entry.at("outcomes")) {
            if (!label.is_string()) fail(where + ".outcomes", "labels must be strings");
            obs.outcomes.push_back(label.get<std::string>());
        }
        if (entry.contains("values")) {
            if (!entry.at("values").is_array()) fail(where + ".values", "must be an array");
            std::vector<double> values;
            for (const auto& v : entry.at("values")) {
                if (!v.is_number()) fail(where + ".values", "values must be numbers");
                values.push_back(v.get<double>());
            }
            obs.values = std::move(values);
        }
        scenario.observables.push_back(std::move(obs));
    }

    if (!doc.contains("contexts") || !doc.at("contexts").is_array()) {
        fail("contexts", "required array is missing");
    }
    index = 0;
    for (const auto& entry : doc.at("contexts")) {
        const std::string where = "contexts[" + std::to_string(index++) + "]";
        if (!entry.is_array() || entry.empty()) fail(where, "must be a non-empty array of ids");
        Context ctx;
        for (const auto& id : entry) {
            if (!id.is_string()) fail(where, "member ids must be strings");
            ctx.members.push_back(id.get<std::string>());
        }
        scenario.contexts.push_back(std::move(ctx));
    }
    return scenario;
}

}  // namespace

EmpiricalModel parse_model_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        // byte offset -> line/column for the diagnostic
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << "model JSON: syntax error at line " << line << ", column " << column << ": "
            << err.what();
        throw input_error(msg.str());
    }
    if (!doc.is_object()) fail("document", "top level must be an object");
    check_format_version(doc);

    EmpiricalModel model;
    model.scenario = parse_scenario(doc);

    if (!doc.contains("tables") || !doc.at("tables").is_object()) {
        fail("tables", "required object is missing");
    }
    const auto& tables = doc.at("tables");

    // Any numeric probability anywhere makes the whole model approximate;
    // all-"p/q" tables are exact.
    bool all_rational_strings = true;

    model.tables.resize(model.scenario.contexts.size());
    std::vector<std::string> known_keys;
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const auto& ctx = model.scenario.contexts[c];
        const std::string key = context_key(ctx);
        known_keys.push_back(key);
        const auto size = context_table_size(model.scenario, ctx);
        auto& table = model.tables[c];
        table.probs.assign(size, Rational(0));
        table.present.assign(size, false);
        if (!tables.contains(key)) continue;  // validate_model reports the gaps
        const auto& entries = tables.at(key);
        if (!entries.is_object()) fail("tables." + key, "must map outcome tuples to probabilities");

        // map tuple key -> flat index
        for (const auto& [tuple, value] : entries.items()) {
            std::int64_t flat = -1;
            for (std::uint64_t f = 0; f < size; ++f) {
                if (tuple_key(model.scenario, ctx, f) == tuple) {
                    flat = static_cast<std::int64_t>(f);
                    break;
                }
            }
            if (flat < 0) fail("tables." + key, "unknown outcome tuple '" + tuple + "'");
            if (value.is_string()) {
                try {
                    table.probs[flat] = parse_rational(value.get<std::string>());
                } catch (const input_error& err) {
                    fail("tables." + key + "." + tuple, err.what());
                }
            } else if (value.is_number()) {
                table.probs[flat] = Rational(value.get<double>());
                all_rational_strings = false;
            } else {
                fail("tables." + key + "." + tuple, "probability must be a number or 'p/q'");
            }
            table.present[flat] = true;
        }
    }
    for (const auto& [key, unused] : tables.items()) {
        (void)unused;
        if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
            fail("tables", "key '" + key + "' matches no context");
        }
    }

    model.backing = all_rational_strings ? Backing::Exact : Backing::Approx;
    return model;
}

EmpiricalModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open model file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_model_json(buffer.str());
    } catch (const input_error& err) {
        throw input_error(path.string() + ": " + err.what());
    }
}

std::string model_to_json(const EmpiricalModel& model, int indent) {
    json doc;
    doc["format_version"] = format_version();
    doc["observables"] = json::array();
    for (const auto& obs : model.scenario.observables) {
        json entry;
        entry["id"] = obs.id;
        entry["outcomes"] = obs.outcomes;
        if (obs.values) entry["values"] = *obs.values;
        doc["observables"].push_back(std::move(entry));
    }
    doc["contexts"] = json::array();
    for (const auto& ctx : model.scenario.contexts) doc["contexts"].push_back(ctx.members);

    json tables = json::object();
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const auto& ctx = model.scenario.contexts[c];
        const auto size = context_table_size(model.scenario, ctx);
        json table = json::object();
        for (std::uint64_t f = 0; f < size; ++f) {
            if (c < model.tables.size() && f < model.tables[c].present.size() &&
                model.tables[c].present[f]) {
                const auto& p = model.tables[c].probs[f];
                if (model.backing == Backing::Exact) {
                    table[tuple_key(model.scenario, ctx, f)] = rational_to_string(p);
                } else {
                    table[tuple_key(model.scenario, ctx, f)] = to_double(p);
                }
            }
        }
        tables[context_key(ctx)] = std::move(table);
    }
    doc["tables"] = std::move(tables);
    return doc.dump(indent);
}

std::string report_to_json(const ContextualityReport& report,
                           const MeasurementScenario& scenario, int indent) {
    json doc;
    doc["format_version"] = format_version();
    doc["feasible"] = report.feasible;
    doc["noncontextual_fraction"] = to_double(report.noncontextual_fraction);
    doc["contextual_fraction"] = to_double(report.contextual_fraction);
    if (report.chsh_values) {
        json values = json::array();
        for (const auto& sc : *report.chsh_values) {
            values.push_back({{"signs", sc.signs}, {"value", sc.value}});
        }
        doc["chsh_values"] = std::move(values);
    }

    json certificate;
    if (const auto* feasible = std::get_if<FeasibleCertificate>(&report.certificate)) {
        certificate["type"] = "global_distribution";
        json weights = json::object();
        for (const auto& [assignment, weight] : feasible->weights) {
            // exact weights print as "p/q"; float-path weights as numbers
            if (denominator(weight) <= BigInt(1'000'000'000'000LL)) {
                weights[assignment.tuple_key(scenario)] = rational_to_string(weight);
            } else {
                weights[assignment.tuple_key(scenario)] = to_double(weight);
            }
        }
        certificate["weights"] = std::move(weights);
    } else if (const auto* witness = std::get_if<InfeasibleCertificate>(&report.certificate)) {
        certificate["type"] = "dual_witness";
        json dual = json::object();
        std::size_t row = 0;
        for (const auto& ctx : scenario.contexts) {
            json per_context = json::object();
            const auto size = context_table_size(scenario, ctx);
            for (std::uint64_t f = 0; f < size && row < witness->dual.size(); ++f, ++row) {
                per_context[tuple_key(scenario, ctx, f)] = to_double(witness->dual[row]);
            }
            dual[context_key(ctx)] = std::move(per_context);
        }
        certificate["dual"] = std::move(dual);
        if (witness->violated_chsh) {
            certificate["violated_chsh"] = {{"signs", witness->violated_chsh->signs},
                                            {"value", witness->violated_chsh->value}};
        }
    }
    doc["certificate"] = std::move(certificate);
    return doc.dump(indent);
}

}  // namespace bellctx::io
