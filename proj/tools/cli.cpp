#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cabello/cabello_engine.hpp"
#include "cabello/lhv.hpp"
#include "cabello/optimizer.hpp"

namespace cabello::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kOracleTol = 1e-12;
constexpr double kNoGoTol = 1e-12;

struct RunConfig {
    std::optional<double> beta;
    std::optional<double> cos_beta;
    double gamma = 0.0;
    bool degrees = false;

    std::optional<double> theta_f, theta_d, theta_g, theta_e;
    double phi_f = 0.0, phi_d = 0.0, phi_g = 0.0, phi_e = 0.0;
    std::string mode = "explicit";
    std::string branch = "-1";

    std::size_t grid = 0;  // set per subcommand
    std::size_t opt_grid = 400;
    std::string axis = "cos-beta";
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    bool rows = false;
    std::optional<double> tol;

    std::string format = "json";
    std::string out;
};

double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

Branch parse_branch(const std::string& s) { return s == "-1" ? Branch::Minus : Branch::Plus; }

SchmidtState make_state(const RunConfig& cfg) {
    if (cfg.beta && cfg.cos_beta) throw DomainError("give exactly one of --beta and --cos-beta");
    const double gamma = to_radians(cfg.gamma, cfg.degrees);
    if (cfg.beta) return SchmidtState(to_radians(*cfg.beta, cfg.degrees), gamma);
    if (cfg.cos_beta) return SchmidtState::from_cos_beta(*cfg.cos_beta, gamma);
    throw DomainError("one of --beta or --cos-beta is required");
}

bool has_state(const RunConfig& cfg) { return cfg.beta || cfg.cos_beta; }

double require_angle(const std::optional<double>& v, const char* flag, const RunConfig& cfg) {
    if (!v) throw DomainError(std::string("missing ") + flag);
    return to_radians(*v, cfg.degrees);
}

Settings make_settings(const SchmidtState& state, const RunConfig& cfg) {
    const bool deg = cfg.degrees;
    if (cfg.mode == "solve") {
        return solve_constraints(state, require_angle(cfg.theta_d, "--theta-d", cfg),
                                 require_angle(cfg.theta_e, "--theta-e", cfg),
                                 parse_branch(cfg.branch), to_radians(cfg.phi_d, deg))
            .settings;
    }
    if (cfg.mode == "witness") {
        const double te = require_angle(cfg.theta_e, "--theta-e", cfg);
        if (cfg.theta_f) return witness_settings(state, te, to_radians(*cfg.theta_f, deg));
        return witness_settings(state, te);
    }
    return {Direction(require_angle(cfg.theta_f, "--theta-f", cfg), to_radians(cfg.phi_f, deg)),
            Direction(require_angle(cfg.theta_d, "--theta-d", cfg), to_radians(cfg.phi_d, deg)),
            Direction(require_angle(cfg.theta_g, "--theta-g", cfg), to_radians(cfg.phi_g, deg)),
            Direction(require_angle(cfg.theta_e, "--theta-e", cfg), to_radians(cfg.phi_e, deg))};
}

Json direction_json(const Direction& d) { return Json{{"theta", d.theta}, {"phi", d.phi}}; }

Json settings_json(const Settings& s) {
    return Json{{"f", direction_json(s.f)},
                {"d", direction_json(s.d)},
                {"g", direction_json(s.g)},
                {"e", direction_json(s.e)}};
}

Json state_json(const SchmidtState& st) {
    return Json{{"beta", st.beta()}, {"cos_beta", st.cos_beta()}, {"gamma", st.gamma()}};
}

Json verdict_json(const Verdict& v) {
    Json failed = Json::array();
    for (Clause c : v.failed) failed.push_back(to_string(c));
    return Json{{"holds", v.holds}, {"failed", failed}, {"reason", v.reason()}};
}

Json record_json(const OptimumRecord& r) {
    Json j{{"beta", r.beta},
           {"cos_beta", std::cos(r.beta)},
           {"branch", static_cast<int>(r.branch)},
           {"theta_d_star", r.theta_d_star},
           {"theta_e_star", r.theta_e_star},
           {"gap_star", r.gap_star},
           {"q1_star", r.q1_star},
           {"q4_star", r.q4_star},
           {"hardy_star", r.hardy_star},
           {"stationarity_residual", r.stationarity_residual},
           {"symmetric_optimum", r.symmetric_optimum},
           {"nogo", r.nogo}};
    if (r.nogo) j["note"] = "maximally entangled state: no observables satisfy the Cabello conditions";
    return j;
}

std::string csv_line(std::initializer_list<std::string> cells) {
    std::string line;
    for (const auto& c : cells) {
        if (!line.empty()) line += ',';
        line += c;
    }
    return line + '\n';
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + '"';
}

// Flattens a JSON object into field,value rows.
void flatten(const Json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "." + std::to_string(i), out);
    } else if (j.is_number_float()) {
        out += csv_line({prefix, format_double(j.get<double>())});
    } else if (j.is_string()) {
        out += csv_line({prefix, csv_escape(j.get<std::string>())});
    } else {
        out += csv_line({prefix, j.dump()});
    }
}

std::string render(const Json& doc, const RunConfig& cfg) {
    if (cfg.format == "json") return doc.dump(2) + '\n';
    std::string out = "field,value\n";
    flatten(doc, "", out);
    return out;
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw DomainError("cannot open output file " + cfg.out);
    file << text;
    if (!file) throw DomainError("failed writing output file " + cfg.out);
}

int cmd_probs(const RunConfig& cfg, std::ostream& out) {
    const SchmidtState state = make_state(cfg);
    const Settings settings = make_settings(state, cfg);
    const CabelloProbs p = cabello_probs(state, settings);
    const CabelloProbs o = cabello_probs_oracle(state, settings);
    const ConditionTolerances tol = cfg.tol ? ConditionTolerances::uniform(*cfg.tol)
                                            : ConditionTolerances{};
    const Verdict verdict = check_conditions(p, tol);

    const std::array<double, 4> deltas{std::abs(p.q1 - o.q1), std::abs(p.q2 - o.q2),
                                       std::abs(p.q3 - o.q3), std::abs(p.q4 - o.q4)};
    const double max_delta = *std::max_element(deltas.begin(), deltas.end());

    Json doc{{"command", "probs"},
             {"state", state_json(state)},
             {"mode", cfg.mode},
             {"settings", settings_json(settings)},
             {"q1", p.q1},
             {"q2", p.q2},
             {"q3", p.q3},
             {"q4", p.q4},
             {"gap", p.gap()},
             {"violation", p.q4 - p.q1 - p.q2 - p.q3},
             {"oracle_delta",
              {{"q1", deltas[0]}, {"q2", deltas[1]}, {"q3", deltas[2]}, {"q4", deltas[3]},
               {"max", max_delta}}},
             {"verdict", verdict_json(verdict)}};
    emit(render(doc, cfg), cfg, out);
    return max_delta <= kOracleTol ? kOk : kNumerical;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    const SchmidtState state = make_state(cfg);
    OptimizeOptions opts;
    opts.grid_size = cfg.grid ? cfg.grid : opts.grid_size;
    opts.refine_tol = cfg.tol.value_or(opts.refine_tol);
    opts.branch = parse_branch(cfg.branch);
    const OptimumRecord r = maximize_gap(state.beta(), opts);

    Json doc{{"command", "optimize"}};
    doc.update(record_json(r));
    emit(render(doc, cfg), cfg, out);
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const std::size_t n = cfg.grid ? cfg.grid : 99;
    if (n < 2) throw DomainError("sweep grid needs at least 2 points");
    std::vector<double> betas;
    if (cfg.axis == "cos-beta") {
        betas = cos_beta_grid(n);
    } else {
        for (std::size_t i = 1; i <= n; ++i)
            betas.push_back(static_cast<double>(i) * (kPi / 2.0) / static_cast<double>(n + 1));
    }

    SweepOptions opts;
    opts.optimize.grid_size = cfg.opt_grid;
    opts.optimize.refine_tol = cfg.tol.value_or(opts.optimize.refine_tol);
    opts.optimize.branch = parse_branch(cfg.branch);
    const std::vector<SweepEntry> entries = sweep(betas, opts);

    static const std::vector<std::string> columns{
        "index", "beta", "cos_beta", "cabello_gap", "hardy_value", "theta_d_star",
        "theta_e_star", "stationarity_residual", "error"};

    bool failed = false;
    std::size_t argmax = entries.size();
    std::size_t hardy_argmax = entries.size();
    for (const auto& e : entries) {
        if (!e.ok()) {
            failed = true;
            continue;
        }
        if (argmax == entries.size() || e.record->gap_star > entries[argmax].record->gap_star)
            argmax = e.index;
        if (hardy_argmax == entries.size() ||
            e.record->hardy_star > entries[hardy_argmax].record->hardy_star)
            hardy_argmax = e.index;
    }

    std::string text;
    if (cfg.format == "csv") {
        for (std::size_t c = 0; c < columns.size(); ++c) text += (c ? "," : "") + columns[c];
        text += '\n';
        for (const auto& e : entries) {
            const std::string idx = std::to_string(e.index);
            const std::string beta = format_double(e.beta);
            const std::string cb = format_double(std::cos(e.beta));
            if (e.ok()) {
                const OptimumRecord& r = *e.record;
                text += csv_line({idx, beta, cb, format_double(r.gap_star),
                                  format_double(r.hardy_star), format_double(r.theta_d_star),
                                  format_double(r.theta_e_star),
                                  format_double(r.stationarity_residual), ""});
            } else {
                text += csv_line({idx, beta, cb, "", "", "", "", "", csv_escape(e.error)});
            }
        }
    } else {
        Json rows = Json::array();
        for (const auto& e : entries) {
            Json row{{"index", e.index}, {"beta", e.beta}, {"cos_beta", std::cos(e.beta)}};
            if (e.ok()) {
                const OptimumRecord& r = *e.record;
                row["cabello_gap"] = r.gap_star;
                row["hardy_value"] = r.hardy_star;
                row["theta_d_star"] = r.theta_d_star;
                row["theta_e_star"] = r.theta_e_star;
                row["stationarity_residual"] = r.stationarity_residual;
                row["error"] = nullptr;
            } else {
                row["error"] = e.error;
            }
            rows.push_back(std::move(row));
        }
        Json doc{{"command", "sweep"},
                 {"axis", cfg.axis},
                 {"branch", std::stoi(cfg.branch)},
                 {"columns", columns},
                 {"rows", rows}};
        if (argmax < entries.size()) {
            doc["cabello_argmax"] = {{"index", argmax},
                                     {"cos_beta", std::cos(entries[argmax].beta)},
                                     {"gap", entries[argmax].record->gap_star}};
            doc["hardy_argmax"] = {{"index", hardy_argmax},
                                   {"cos_beta", std::cos(entries[hardy_argmax].beta)},
                                   {"value", entries[hardy_argmax].record->hardy_star}};
        }
        text = doc.dump(2) + '\n';
    }
    emit(text, cfg, out);
    return failed ? kNumerical : kOk;
}

Json trial_json(std::size_t i, const NoGoTrial& t) {
    return Json{{"trial", i},
                {"gamma", t.gamma},
                {"theta_d", t.theta_d},
                {"theta_e", t.theta_e},
                {"phi_d", t.phases.phi_d},
                {"phi_e", t.phases.phi_e},
                {"q1", t.report.q1},
                {"q4", t.report.q4},
                {"gap", t.report.gap}};
}

int cmd_nogo(const RunConfig& cfg, std::ostream& out) {
    const std::uint64_t trials = cfg.trials ? cfg.trials : 10000;
    const bool csv = cfg.format == "csv";
    const NoGoSweep sw = nogo_sweep(trials, cfg.seed, cfg.rows || csv);

    std::string text;
    if (csv) {
        text = "trial,gamma,theta_d,theta_e,phi_d,phi_e,q1,q4,gap\n";
        for (std::size_t i = 0; i < sw.rows.size(); ++i) {
            const NoGoTrial& t = sw.rows[i];
            text += csv_line({std::to_string(i), format_double(t.gamma), format_double(t.theta_d),
                              format_double(t.theta_e), format_double(t.phases.phi_d),
                              format_double(t.phases.phi_e), format_double(t.report.q1),
                              format_double(t.report.q4), format_double(t.report.gap)});
        }
    } else {
        Json doc{{"command", "nogo"},
                 {"beta", kPi / 4.0},
                 {"trials", sw.trials},
                 {"seed", sw.seed},
                 {"max_abs_gap", sw.max_abs_gap},
                 {"max_abs_q2", sw.max_abs_q2},
                 {"max_abs_q3", sw.max_abs_q3},
                 {"max_form_delta", sw.max_form_delta},
                 {"tolerance", kNoGoTol},
                 {"holds", sw.max_abs_gap <= kNoGoTol},
                 {"worst", trial_json(0, sw.worst)}};
        doc["worst"].erase("trial");
        if (cfg.rows) {
            Json rows = Json::array();
            for (std::size_t i = 0; i < sw.rows.size(); ++i) rows.push_back(trial_json(i, sw.rows[i]));
            doc["rows"] = rows;
        }
        text = doc.dump(2) + '\n';
    }
    emit(text, cfg, out);
    return sw.max_abs_gap <= kNoGoTol ? kOk : kNumerical;
}

int cmd_lhv(const RunConfig& cfg, std::ostream& out) {
    const LocalBoundReport report = local_bound_check();

    Json doc{{"command", "lhv"}, {"all_hold", report.all_hold}};
    Json table = Json::array();
    for (const auto& row : report.rows) {
        const auto& s = row.strategy;
        table.push_back({{"F", value(s.f)},
                         {"D", value(s.d)},
                         {"G", value(s.g)},
                         {"E", value(s.e)},
                         {"lhs", row.lhs},
                         {"rhs", row.rhs},
                         {"holds", row.holds}});
    }
    doc["strategies"] = table;

    if (has_state(cfg)) {
        const SchmidtState state = make_state(cfg);
        const Settings settings = make_settings(state, cfg);
        const CabelloProbs p = cabello_probs(state, settings);
        doc["quantum"] = {{"state", state_json(state)},
                          {"settings", settings_json(settings)},
                          {"q1", p.q1},
                          {"q2", p.q2},
                          {"q3", p.q3},
                          {"q4", p.q4},
                          {"gap", p.gap()},
                          {"violation", quantum_violation(state, settings)}};
        if (cfg.trials) {
            const SampleStats stats = sample_probs(state, settings, cfg.trials, cfg.seed);
            const auto f = stats.frequencies();
            doc["monte_carlo"] = {{"trials_per_pair", stats.trials_per_pair},
                                  {"seed", stats.seed},
                                  {"counts", stats.counts},
                                  {"frequencies", f},
                                  {"gap", stats.gap()},
                                  {"violation", f[3] - f[0] - f[1] - f[2]}};
        }
    } else if (cfg.trials) {
        throw DomainError("--trials needs a state and settings");
    }

    std::string text;
    if (cfg.format == "csv") {
        text = "F,D,G,E,lhs,rhs,holds\n";
        for (const auto& row : report.rows) {
            const auto& s = row.strategy;
            text += csv_line({to_string(s.f), to_string(s.d), to_string(s.g), to_string(s.e),
                              std::to_string(row.lhs), std::to_string(row.rhs),
                              row.holds ? "true" : "false"});
        }
    } else {
        text = doc.dump(2) + '\n';
    }
    emit(text, cfg, out);
    return report.all_hold ? kOk : kNumerical;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", cfg.out, "Write output to this file instead of stdout");
}

void add_state(CLI::App* cmd, RunConfig& cfg) {
    auto* beta = cmd->add_option("--beta", cfg.beta, "Schmidt angle beta");
    auto* cos_beta = cmd->add_option("--cos-beta", cfg.cos_beta, "cos(beta) instead of beta");
    beta->excludes(cos_beta);
    cmd->add_option("--gamma", cfg.gamma, "Relative Schmidt phase gamma");
    cmd->add_flag("--degrees", cfg.degrees, "Angles (except cos beta) are in degrees");
}

void add_branch(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--branch", cfg.branch, "Sign of cos(phi_D + phi_E - gamma)")
        ->check(CLI::IsMember({"+1", "-1", "1"}));
}

void add_settings(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--theta-f", cfg.theta_f);
    cmd->add_option("--theta-d", cfg.theta_d);
    cmd->add_option("--theta-g", cfg.theta_g);
    cmd->add_option("--theta-e", cfg.theta_e);
    cmd->add_option("--phi-f", cfg.phi_f);
    cmd->add_option("--phi-d", cfg.phi_d, "Azimuth of D (the gauge phase in solve mode)");
    cmd->add_option("--phi-g", cfg.phi_g);
    cmd->add_option("--phi-e", cfg.phi_e);
    cmd->add_option("--mode", cfg.mode,
                    "explicit: all four directions; solve: theta-d/theta-e through the "
                    "zero constraints; witness: theta-e (and optionally theta-f)")
        ->check(CLI::IsMember({"explicit", "solve", "witness"}));
    add_branch(cmd, cfg);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Cabello nonlocality for two-qubit pure states", "cabello"};
    app.require_subcommand(1);

    auto* probs = app.add_subcommand("probs", "Joint probabilities q1..q4 and the condition verdict");
    add_common(probs, cfg);
    add_state(probs, cfg);
    add_settings(probs, cfg);
    probs->add_option("--tol", cfg.tol, "Single tolerance for every condition clause")
        ->check(CLI::PositiveNumber);

    auto* optimize = app.add_subcommand("optimize", "Maximize q4 - q1 for one state");
    add_common(optimize, cfg);
    add_state(optimize, cfg);
    add_branch(optimize, cfg);
    optimize->add_option("--grid", cfg.grid, "Coarse grid points per polar angle")
        ->check(CLI::Range(2, 100000));
    optimize->add_option("--tol", cfg.tol, "Refinement tolerance in angle")
        ->check(CLI::PositiveNumber);

    auto* sweep_cmd = app.add_subcommand("sweep", "Cabello and Hardy maxima over a state grid");
    add_common(sweep_cmd, cfg);
    add_branch(sweep_cmd, cfg);
    sweep_cmd->add_option("--grid", cfg.grid, "Number of grid points (default 99)")
        ->check(CLI::Range(2, 1000000));
    sweep_cmd->add_option("--axis", cfg.axis, "Uniform grid in cos-beta or beta")
        ->check(CLI::IsMember({"cos-beta", "beta"}));
    sweep_cmd->add_option("--opt-grid", cfg.opt_grid, "Optimizer grid points per polar angle")
        ->check(CLI::Range(2, 100000));
    sweep_cmd->add_option("--tol", cfg.tol, "Refinement tolerance in angle")
        ->check(CLI::PositiveNumber);

    auto* nogo = app.add_subcommand("nogo", "Random admissible settings on the maximally entangled state");
    add_common(nogo, cfg);
    nogo->add_option("--trials", cfg.trials, "Number of random settings (default 10000)")
        ->check(CLI::PositiveNumber);
    nogo->add_option("--seed", cfg.seed);
    nogo->add_flag("--rows", cfg.rows, "Include every trial in JSON output");

    auto* lhv = app.add_subcommand("lhv", "Deterministic-strategy bound and optional quantum comparison");
    add_common(lhv, cfg);
    add_state(lhv, cfg);
    add_settings(lhv, cfg);
    lhv->add_option("--trials", cfg.trials, "Monte Carlo trials per observable pair")
        ->check(CLI::PositiveNumber);
    lhv->add_option("--seed", cfg.seed);

    std::vector<std::string> argv_store{"cabello"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (probs->parsed()) return cmd_probs(cfg, out);
        if (optimize->parsed()) return cmd_optimize(cfg, out);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, out);
        if (nogo->parsed()) return cmd_nogo(cfg, out);
        if (lhv->parsed()) return cmd_lhv(cfg, out);
    } catch (const NoGoError& e) {
        err << "no-go: " << e.what() << '\n';
        return kNoGo;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace cabello::cli
