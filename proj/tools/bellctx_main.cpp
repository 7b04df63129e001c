// bellctx command-line tool: feasibility checks for empirical models, a
// two-qubit Born-rule model generator, and the entangled-Gaussian diffusion
// experiments.
//
// Exit codes: 0 success/feasible, 3 contextual verdict, 4 statistical or
// empty-sample failure, 1 input error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bellctx/assignments.hpp"
#include "bellctx/contextuality.hpp"
#include "bellctx/errors.hpp"
#include "bellctx/manifest.hpp"
#include "bellctx/model_json.hpp"
#include "bellctx/nelson.hpp"
#include "bellctx/quantum.hpp"
#include "bellctx/scenario.hpp"
#include "bellctx/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bellctx;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitContextual = 3;
constexpr int kExitStatistical = 4;

EmpiricalModel read_model(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return io::parse_model_json(buffer.str());
    }
    return io::load_model_file(path);
}

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& what) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
                ++used;
            }
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw input_error(what + ": cannot parse number '" + item + "'");
        }
    }
    if (out.size() != expected) {
        throw input_error(what + ": expected " + std::to_string(expected) + " numbers, got " +
                          std::to_string(out.size()));
    }
    return out;
}

std::array<int, 4> parse_signs(const std::string& text) {
    std::array<int, 4> signs{};
    std::stringstream stream(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(stream, item, ',')) {
        if (k >= 4) throw input_error("--signs takes exactly 4 entries");
        if (item == "+" || item == "+1" || item == "1") {
            signs[k] = 1;
        } else if (item == "-" || item == "-1") {
            signs[k] = -1;
        } else {
            throw input_error("--signs entries must be +1 or -1, got '" + item + "'");
        }
        ++k;
    }
    if (k != 4) throw input_error("--signs takes exactly 4 entries");
    return signs;
}

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("BELLCTX_OUTDIR"); env && *env) return env;
    return ".";
}

std::string format_double(double value) {
    std::ostringstream out;
    out << std::setprecision(17) << value;
    return out.str();
}

int verdict_exit(const ContextualityReport& report) {
    return report.feasible ? kExitOk : kExitContextual;
}

// --- check / fraction / chsh ------------------------------------------------

int cmd_check(const std::string& model_path) {
    const auto model = read_model(model_path);
    const auto report = noncontextual_fraction(model);
    std::cout << io::report_to_json(report, model.scenario) << "\n";
    return verdict_exit(report);
}

int cmd_fraction(const std::string& model_path) {
    const auto model = read_model(model_path);
    const auto report = noncontextual_fraction(model);
    json doc;
    doc["format_version"] = io::format_version();
    doc["feasible"] = report.feasible;
    doc["noncontextual_fraction"] = to_double(report.noncontextual_fraction);
    doc["contextual_fraction"] = to_double(report.contextual_fraction);
    if (model.backing == Backing::Exact) {
        doc["noncontextual_fraction_exact"] = rational_to_string(report.noncontextual_fraction);
        doc["contextual_fraction_exact"] = rational_to_string(report.contextual_fraction);
    }
    std::cout << doc.dump(2) << "\n";
    return verdict_exit(report);
}

int cmd_chsh(const std::string& model_path, const std::string& signs_text) {
    const auto model = read_model(model_path);
    json doc;
    doc["format_version"] = io::format_version();
    if (!signs_text.empty()) {
        const auto signs = parse_signs(signs_text);
        doc["signs"] = signs;
        doc["value"] = chsh_value(model, signs);
    } else {
        json values = json::array();
        for (const auto& sc : chsh_values(model)) {
            values.push_back({{"signs", sc.signs}, {"value", sc.value}});
        }
        doc["chsh_values"] = std::move(values);
    }
    const auto max_exact = chsh_max_exact(model);
    doc["chsh_max"] = to_double(max_exact);
    std::cout << doc.dump(2) << "\n";
    const bool classical = model.backing == Backing::Exact
                               ? max_exact <= 2
                               : to_double(max_exact) <= 2.0 + kFeasibilityTol;
    return classical ? kExitOk : kExitContextual;
}

// --- quantum -----------------------------------------------------------------

int cmd_quantum(const std::string& state_name, const std::string& amplitudes_text,
                const std::string& angles_text) {
    quantum::TwoQubitState state{};
    if (state_name == "singlet") {
        state = quantum::singlet();
    } else if (state_name == "product00") {
        state = quantum::product00();
    } else if (state_name == "custom") {
        if (amplitudes_text.empty()) {
            throw input_error("--state custom needs --amplitudes re,im,re,im,re,im,re,im");
        }
        const auto parts = parse_number_list(amplitudes_text, 8, "--amplitudes");
        for (int k = 0; k < 4; ++k) state.amplitudes[k] = {parts[2 * k], parts[2 * k + 1]};
    } else {
        throw input_error("unknown --state '" + state_name +
                          "' (choose singlet, product00, custom)");
    }
    const auto angles = parse_number_list(angles_text, 4, "--angles");
    const auto model = quantum::born_model(
        state, quantum::ChshSettings::from_angles(angles[0], angles[1], angles[2], angles[3]));
    std::cout << io::model_to_json(model) << "\n";
    return kExitOk;
}

// --- simulate ----------------------------------------------------------------

struct MomentRow {
    double t, mean_x1, mean_x2, var_u, var_s, cov;
};

MomentRow moment_row(const nelson::Ensemble& ensemble) {
    const auto n = static_cast<double>(ensemble.points.size());
    double mean1 = 0.0, mean2 = 0.0;
    for (const auto& q : ensemble.points) {
        mean1 += q.x1;
        mean2 += q.x2;
    }
    mean1 /= n;
    mean2 /= n;
    double var_u = std::nan(""), var_s = std::nan(""), cov = std::nan("");
    if (ensemble.points.size() >= 2) {
        double su = 0.0, ss = 0.0, sc = 0.0;
        const double mean_u = mean1 - mean2;
        const double mean_s = mean1 + mean2;
        for (const auto& q : ensemble.points) {
            const double du = (q.x1 - q.x2) - mean_u;
            const double ds = (q.x1 + q.x2) - mean_s;
            su += du * du;
            ss += ds * ds;
            sc += (q.x1 - mean1) * (q.x2 - mean2);
        }
        var_u = su / (n - 1.0);
        var_s = ss / (n - 1.0);
        cov = sc / (n - 1.0);
    }
    return {ensemble.time, mean1, mean2, var_u, var_s, cov};
}

void append_moment_row(std::ostream& out, const MomentRow& row) {
    out << format_double(row.t) << ',' << format_double(row.mean_x1) << ','
        << format_double(row.mean_x2) << ',' << format_double(row.var_u) << ','
        << format_double(row.var_s) << ',' << format_double(row.cov) << '\n';
}

void write_ensemble_csv(const fs::path& path, const nelson::Ensemble& ensemble) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path.string());
    out << "x1,x2\n";
    for (const auto& q : ensemble.points) {
        out << format_double(q.x1) << ',' << format_double(q.x2) << '\n';
    }
}

struct SimulateParams {
    double sigma = 1.0;
    double big_sigma = 2.0;
    double nu = 0.5;
    std::uint64_t n = 100000;
    double dt = 1e-3;
    std::uint64_t steps = 2000;
    std::uint64_t seed = 0;
    std::uint64_t snapshot_every = 10;
    std::string out_dir;
};

int cmd_simulate(const SimulateParams& p, const std::vector<std::string>& argv) {
    const nelson::GaussianTwoParticleState state(p.sigma, p.big_sigma, p.nu);
    const auto field = nelson::velocity_field(state);
    const rng::StreamFactory noise(p.seed);

    const fs::path dir = resolve_out_dir(p.out_dir);
    fs::create_directories(dir);

    std::ofstream moments(dir / "moments.csv", std::ios::binary);
    if (!moments) throw input_error("cannot write " + (dir / "moments.csv").string());
    moments << "t,mean_x1,mean_x2,var_u,var_s,cov_x1x2\n";

    auto ensemble = nelson::sample_initial(state, p.n, p.seed);
    append_moment_row(moments, moment_row(ensemble));
    for (std::uint64_t step = 1; step <= p.steps; ++step) {
        ensemble = nelson::em_step(ensemble, field, p.dt, state.nu, noise);
        if (step % p.snapshot_every == 0 || step == p.steps) {
            append_moment_row(moments, moment_row(ensemble));
        }
    }
    moments.close();
    write_ensemble_csv(dir / "ensemble_final.csv", ensemble);

    io::RunManifest manifest;
    manifest.command = "simulate";
    manifest.argv = argv;
    manifest.seed = p.seed;
    manifest.params = {
        {"sigma", p.sigma},
        {"Sigma", p.big_sigma},
        {"nu", p.nu},
        {"n", static_cast<std::int64_t>(p.n)},
        {"dt", p.dt},
        {"steps", static_cast<std::int64_t>(p.steps)},
        {"snapshot_every", static_cast<std::int64_t>(p.snapshot_every)},
    };
    manifest.add_output(dir, "moments.csv");
    manifest.add_output(dir, "ensemble_final.csv");
    io::write_manifest(dir, manifest);

    json summary;
    summary["out_dir"] = dir.string();
    summary["files"] = {"moments.csv", "ensemble_final.csv", "manifest.json"};
    summary["final_time"] = ensemble.time;
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

// --- condition ---------------------------------------------------------------

struct ConditionParams {
    double sigma = 1.0;
    double big_sigma = 2.0;
    double nu = 0.5;
    std::uint64_t n = 1000000;
    std::uint64_t seed = 0;
    double y = 1.0;
    double delta = 0.05;
    std::uint64_t bins = 61;
    std::string out_dir;
};

int cmd_condition(const ConditionParams& p, const std::vector<std::string>& argv) {
    const nelson::GaussianTwoParticleState state(p.sigma, p.big_sigma, p.nu);
    const auto law = nelson::condition_analytic(state, p.y);

    const auto ensemble = nelson::sample_initial(state, p.n, p.seed);
    const auto selected = nelson::condition_ensemble(ensemble, p.y, p.delta);

    std::vector<double> x2;
    x2.reserve(selected.points.size());
    for (const auto& q : selected.points) x2.push_back(q.x2);

    const double spread = 5.0 * std::sqrt(law.variance);
    const auto hist = stats::histogram(
        x2, stats::linear_edges(law.mean - spread, law.mean + spread, p.bins));

    const fs::path dir = resolve_out_dir(p.out_dir);
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "conditional_hist.csv", std::ios::binary);
        if (!out) throw input_error("cannot write " + (dir / "conditional_hist.csv").string());
        out << "bin_lo,bin_hi,count\n";
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            out << format_double(hist.edges[i]) << ',' << format_double(hist.edges[i + 1])
                << ',' << hist.counts[i] << '\n';
        }
    }

    json law_doc;
    law_doc["format_version"] = io::format_version();
    law_doc["y"] = law.y;
    law_doc["delta"] = p.delta;
    law_doc["mean"] = law.mean;
    law_doc["variance"] = law.variance;
    law_doc["n_selected"] = selected.points.size();
    if (x2.size() >= 2) {
        const auto report = stats::moments(x2);
        law_doc["sample_mean"] = report.mean;
        law_doc["sample_variance"] = report.variance;
        law_doc["se_mean"] = report.se_mean;
        law_doc["se_variance"] = report.se_variance;
    }
    {
        std::ofstream out(dir / "conditional_law.json", std::ios::binary);
        if (!out) throw input_error("cannot write " + (dir / "conditional_law.json").string());
        out << law_doc.dump(2) << "\n";
    }

    io::RunManifest manifest;
    manifest.command = "condition";
    manifest.argv = argv;
    manifest.seed = p.seed;
    manifest.params = {
        {"sigma", p.sigma},        {"Sigma", p.big_sigma},
        {"nu", p.nu},              {"n", static_cast<std::int64_t>(p.n)},
        {"y", p.y},                {"delta", p.delta},
        {"bins", static_cast<std::int64_t>(p.bins)},
    };
    manifest.add_output(dir, "conditional_hist.csv");
    manifest.add_output(dir, "conditional_law.json");
    io::write_manifest(dir, manifest);

    std::cout << law_doc.dump(2) << "\n";
    return kExitOk;
}

// --- report ------------------------------------------------------------------

ContextTable pair_table(bool anticorrelated) {
    ContextTable t;
    const Rational half(1, 2);
    t.probs = anticorrelated ? std::vector<Rational>{0, half, half, 0}
                             : std::vector<Rational>{half, 0, 0, half};
    t.present.assign(4, true);
    return t;
}

EmpiricalModel pr_box_model() {
    EmpiricalModel model;
    model.scenario = chsh_scenario();
    model.backing = Backing::Exact;
    for (int c = 0; c < 4; ++c) model.tables.push_back(pair_table(c == 3));
    return model;
}

int cmd_report(std::uint64_t seed, const std::string& out_dir,
               const std::vector<std::string>& argv) {
    json checks = json::array();
    bool all_pass = true;
    const auto add_check = [&](const std::string& name, bool pass, json details) {
        details["name"] = name;
        details["pass"] = pass;
        checks.push_back(std::move(details));
        all_pass = all_pass && pass;
    };

    // 1. PR box is maximally contextual.
    {
        const auto report = noncontextual_fraction(pr_box_model());
        add_check("pr_box_contextual",
                  !report.feasible && report.contextual_fraction == 1 &&
                      chsh_max(pr_box_model()) == 4.0,
                  {{"contextual_fraction", to_double(report.contextual_fraction)},
                   {"chsh_max", chsh_max(pr_box_model())}});
    }

    // 2. Every deterministic assignment is classical.
    {
        const auto scenario = chsh_scenario();
        bool pass = true;
        for (const auto& g : enumerate_assignments(scenario)) {
            const auto model = assignment_model(g, scenario);
            const auto report = noncontextual_fraction(model);
            pass = pass && report.feasible && report.contextual_fraction == 0 &&
                   chsh_max_exact(model) == 2;
        }
        add_check("deterministic_models_classical", pass, {{"assignments", 16}});
    }

    // 3. Singlet at the maximizing settings.
    {
        constexpr double kPi = 3.141592653589793238462643383279502884;
        const auto model = quantum::born_model(
            quantum::singlet(),
            quantum::ChshSettings::from_angles(0.0, kPi / 2, kPi / 4, 3 * kPi / 4));
        const auto report = noncontextual_fraction(model);
        const double max = chsh_max(model);
        const double tsirelson = 2.0 * std::sqrt(2.0);
        add_check("singlet_tsirelson",
                  std::abs(max - tsirelson) < 1e-9 && !report.feasible,
                  {{"chsh_max", max},
                   {"contextual_fraction", to_double(report.contextual_fraction)}});
    }

    // 4. Stationarity of the entangled-Gaussian diffusion.
    const nelson::GaussianTwoParticleState state(1.0, 2.0, 0.5);
    {
        const auto field = nelson::velocity_field(state);
        const rng::StreamFactory noise(seed);
        auto ens = nelson::sample_initial(state, 20000, seed);
        for (int step = 0; step < 500; ++step) {
            ens = nelson::em_step(ens, field, 1e-3, state.nu, noise);
        }
        std::vector<double> rel, com;
        for (const auto& q : ens.points) {
            rel.push_back(q.x1 - q.x2);
            com.push_back(q.x1 + q.x2);
        }
        const auto rel_report = stats::moments(rel);
        const auto com_report = stats::moments(com);
        const bool pass = stats::within_3se(rel_report, 1.0, stats::Stat::Variance) &&
                          stats::within_3se(com_report, 4.0, stats::Stat::Variance);
        add_check("gaussian_stationarity", pass,
                  {{"var_u", rel_report.variance}, {"var_s", com_report.variance}});
    }

    // 5. Conditioning matches the closed-form conditional law.
    {
        const auto ens = nelson::sample_initial(state, 400000, seed + 1);
        const auto selected = nelson::condition_ensemble(ens, 1.0, 0.05);
        std::vector<double> x2;
        for (const auto& q : selected.points) x2.push_back(q.x2);
        const auto report = stats::moments(x2);
        const bool pass = stats::within_3se(report, 0.6, stats::Stat::Mean) &&
                          stats::within_3se(report, 0.8, stats::Stat::Variance);
        add_check("conditioning_law", pass,
                  {{"sample_mean", report.mean},
                   {"sample_variance", report.variance},
                   {"n_selected", x2.size()}});
    }

    // 6. Measure-and-pool leaves the x2 marginal unchanged.
    {
        const auto untouched = nelson::sample_initial(state, 100000, seed + 2);
        const auto measured = nelson::sample_initial(state, 100000, seed + 3);
        std::vector<double> pooled, marginal;
        for (const auto& q : untouched.points) marginal.push_back(q.x2);
        const double delta = 0.05;
        for (int k = -120; k <= 120; ++k) {
            try {
                const auto sub = nelson::condition_ensemble(measured, 2 * delta * k, delta);
                for (const auto& q : sub.points) pooled.push_back(q.x2);
            } catch (const empty_selection&) {
            }
        }
        const auto ks = stats::two_sample_ks(marginal, pooled, 0.01);
        const auto marginal_report = stats::moments(marginal);
        const bool pass = !ks.reject &&
                          stats::within_3se(marginal_report, 1.25, stats::Stat::Variance);
        add_check("no_signalling_marginal", pass,
                  {{"ks_statistic", ks.statistic},
                   {"ks_critical", ks.critical_value},
                   {"marginal_variance", marginal_report.variance}});
    }

    json doc;
    doc["format_version"] = io::format_version();
    doc["seed"] = seed;
    doc["checks"] = checks;
    doc["all_pass"] = all_pass;

    const fs::path dir = resolve_out_dir(out_dir);
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "report.json", std::ios::binary);
        if (!out) throw input_error("cannot write " + (dir / "report.json").string());
        out << doc.dump(2) << "\n";
    }
    io::RunManifest manifest;
    manifest.command = "report";
    manifest.argv = argv;
    manifest.seed = seed;
    manifest.add_output(dir, "report.json");
    io::write_manifest(dir, manifest);

    std::cout << doc.dump(2) << "\n";
    return all_pass ? kExitOk : kExitStatistical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Feasibility of global joint distributions for measurement scenarios, "
        "plus an entangled-Gaussian diffusion simulator"};
    app.require_subcommand(1);
    const std::vector<std::string> argv_copy(argv, argv + argc);

    std::string model_path;
    auto* check = app.add_subcommand("check", "Full contextuality report for a model file");
    check->add_option("model", model_path, "model JSON path, or - for stdin")->required();

    auto* fraction =
        app.add_subcommand("fraction", "Noncontextual/contextual fraction of a model");
    fraction->add_option("model", model_path, "model JSON path, or - for stdin")->required();

    std::string signs_text;
    auto* chsh = app.add_subcommand("chsh", "CHSH functionals of a model");
    chsh->add_option("model", model_path, "model JSON path, or - for stdin")->required();
    chsh->add_option("--signs", signs_text, "comma list of four +1/-1 signs");

    std::string state_name = "singlet";
    std::string amplitudes_text;
    std::string angles_text;
    auto* quantum_cmd =
        app.add_subcommand("quantum", "Emit the Born-rule model of a two-qubit state");
    quantum_cmd->add_option("--state", state_name, "singlet | product00 | custom");
    quantum_cmd->add_option("--amplitudes", amplitudes_text,
                            "8 comma numbers (re,im per basis amplitude) for --state custom");
    quantum_cmd->add_option("--angles", angles_text, "a,a',b,b' in radians")->required();

    SimulateParams sim;
    auto* simulate = app.add_subcommand("simulate", "Forward diffusion of the Gaussian state");
    simulate->add_option("--sigma", sim.sigma, "relative-coordinate width");
    simulate->add_option("--Sigma", sim.big_sigma, "center-of-mass width");
    simulate->add_option("--nu", sim.nu, "diffusion coefficient");
    simulate->add_option("--n", sim.n, "ensemble size")->check(CLI::PositiveNumber);
    simulate->add_option("--dt", sim.dt, "time step");
    simulate->add_option("--steps", sim.steps, "number of steps");
    simulate->add_option("--seed", sim.seed, "RNG seed (required: no wall-clock default)")
        ->required();
    simulate->add_option("--snapshot-every", sim.snapshot_every, "moment row cadence")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out_dir, "output directory (or BELLCTX_OUTDIR)");

    ConditionParams cond;
    auto* condition =
        app.add_subcommand("condition", "Window-condition an exact ensemble on x1 = y");
    condition->add_option("--sigma", cond.sigma, "relative-coordinate width");
    condition->add_option("--Sigma", cond.big_sigma, "center-of-mass width");
    condition->add_option("--nu", cond.nu, "diffusion coefficient");
    condition->add_option("--n", cond.n, "ensemble size")->check(CLI::PositiveNumber);
    condition->add_option("--seed", cond.seed, "RNG seed (required)")->required();
    condition->add_option("--y", cond.y, "measured value of x1");
    condition->add_option("--delta", cond.delta, "conditioning window half-width");
    condition->add_option("--bins", cond.bins, "histogram bins")->check(CLI::PositiveNumber);
    condition->add_option("--out", cond.out_dir, "output directory (or BELLCTX_OUTDIR)");

    std::uint64_t report_seed = 0;
    std::string report_out;
    auto* report = app.add_subcommand("report", "Run every headline check and summarize");
    report->add_option("--seed", report_seed, "RNG seed (required)")->required();
    report->add_option("--out", report_out, "output directory (or BELLCTX_OUTDIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (app.got_subcommand(check)) return cmd_check(model_path);
        if (app.got_subcommand(fraction)) return cmd_fraction(model_path);
        if (app.got_subcommand(chsh)) return cmd_chsh(model_path, signs_text);
        if (app.got_subcommand(quantum_cmd)) {
            return cmd_quantum(state_name, amplitudes_text, angles_text);
        }
        if (app.got_subcommand(simulate)) return cmd_simulate(sim, argv_copy);
        if (app.got_subcommand(condition)) return cmd_condition(cond, argv_copy);
        if (app.got_subcommand(report)) return cmd_report(report_seed, report_out, argv_copy);
    } catch (const empty_selection& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitStatistical;
    } catch (const input_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
