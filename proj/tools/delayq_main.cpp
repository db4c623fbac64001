#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "delayq/expansion.hpp"
#include "delayq/moment_engine.hpp"
#include "delayq/report.hpp"
#include "delayq/simulator.hpp"
#include "delayq/transient.hpp"
#include "delayq/workload.hpp"

namespace {

using namespace delayq;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

MultiIndex parse_index(const std::string& text, int k) {
    std::vector<int> entries;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) entries.push_back(std::stoi(part));
    MultiIndex n{entries};
    if (n.k() != k)
        throw ConfigError("index '" + text + "' has " + std::to_string(n.k()) +
                          " entries but the model has k=" + std::to_string(k));
    return n;
}

/// Non-zero indices in the componentwise box [0, upto]^k, lexicographic.
std::vector<MultiIndex> box_indices(int k, int upto) {
    std::vector<MultiIndex> out;
    for (const auto& n : indices_with_order_leq(k, k * upto)) {
        bool in_box = true;
        for (int i = 0; i < k; ++i) in_box = in_box && n[i] <= upto;
        if (in_box) out.push_back(n);
    }
    return out;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_text_file(out_path, content);
}

int cmd_chi(const std::string& model_path, const std::string& n_text, int all_upto,
            const std::string& out_path, const std::string& format) {
    ModelSpec model = ModelSpec::load(model_path);
    MomentTable table(model);
    if (!n_text.empty()) {
        MultiIndex n = parse_index(n_text, model.k);
        nlohmann::json j{{"n", n.entries()}, {"chi", table.chi(n)}};
        emit(out_path, json_to_string(j) + "\n");
        return kExitOk;
    }
    if (all_upto < 1) throw ConfigError("chi: pass --n or --all-upto");
    auto indices = box_indices(model.k, all_upto);
    if (format == "csv") {
        CsvTable csv;
        for (int i = 1; i <= model.k; ++i) csv.header.push_back("n" + std::to_string(i));
        csv.header.push_back("chi");
        for (const auto& n : indices) {
            std::vector<std::string> row;
            for (int i = 0; i < model.k; ++i) row.push_back(std::to_string(n[i]));
            row.push_back(format_float(table.chi(n)));
            csv.rows.push_back(std::move(row));
        }
        emit(out_path, csv.str());
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& n : indices)
            rows.push_back({{"n", n.entries()}, {"chi", table.chi(n)}});
        emit(out_path, json_to_string(rows) + "\n");
    }
    return kExitOk;
}

int cmd_transient(const std::string& model_path, const std::string& n_text, double h,
                  double t_max, const std::string& out_path) {
    ModelSpec model = ModelSpec::load(model_path);
    double def_h, def_tmax;
    default_grid_params(model, def_h, def_tmax);
    if (h <= 0.0) h = def_h;
    if (t_max <= 0.0) t_max = def_tmax;

    MultiIndex n = parse_index(n_text, model.k);
    TransientSolver solver(model, h, t_max);
    const GridFunction& m = solver.m_tilde(n);
    const GridFunction& hb = solver.transient_bound(n);
    double r = bound_R(n, model);

    CsvTable csv;
    csv.header = {"t", "M_tilde", "h_lower_or_upper", "R_bound"};
    for (std::size_t i = 0; i < m.size(); ++i)
        csv.rows.push_back({format_float(m.t(i)), format_float(m.v[i]), format_float(hb.v[i]),
                            format_float(r)});
    emit(out_path, csv.str());
    std::cerr << "bound direction: " << to_string(solver.bound_direction()) << "\n";
    return kExitOk;
}

int cmd_bounds(const std::string& model_path, int upto, const std::string& out_path,
               const std::string& format) {
    ModelSpec model = ModelSpec::load(model_path);
    BoundTable table(model, upto);
    if (format == "csv") {
        CsvTable csv;
        for (int i = 1; i <= model.k; ++i) csv.header.push_back("n" + std::to_string(i));
        csv.header.push_back("R");
        for (const auto& [n, r] : table.all()) {
            std::vector<std::string> row;
            for (int i = 0; i < model.k; ++i) row.push_back(std::to_string(n[i]));
            row.push_back(format_float(r));
            csv.rows.push_back(std::move(row));
        }
        emit(out_path, csv.str());
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [n, r] : table.all())
            rows.push_back({{"n", n.entries()}, {"R", r}});
        emit(out_path, json_to_string(rows) + "\n");
    }
    return kExitOk;
}

int cmd_expansion(const std::string& model_path, int type, bool paper_literal,
                  const std::string& out_path) {
    ModelSpec model = ModelSpec::load(model_path);
    RootSet roots = find_roots(model.interarrival);
    ExpansionResult r = expansion_coeffs(type, model, roots, paper_literal);

    nlohmann::json terms = nlohmann::json::array();
    for (const auto& term : r.b_terms)
        terms.push_back({{"z_re", term.z.real()},
                         {"z_im", term.z.imag()},
                         {"B_re", term.coeff.real()},
                         {"B_im", term.coeff.imag()}});
    nlohmann::json j{{"chi", r.chi},
                     {"mu", r.mu},
                     {"a_star", r.a_star},
                     {"terms", terms},
                     {"truncation_order", r.truncation_order},
                     {"truncated", r.truncated},
                     {"error_rate", r.error_rate},
                     {"paper_literal_sign", r.paper_literal_sign}};
    emit(out_path, json_to_string(j) + "\n");
    return kExitOk;
}

int cmd_workload(const std::string& model_path, const std::string& out_path) {
    ModelSpec model = ModelSpec::load(model_path);
    WorkloadLimits limits = workload_limits(model);
    nlohmann::json j{{"mean_limit", limits.mean_limit}, {"cov_limit", limits.cov_limit}};
    emit(out_path, json_to_string(j) + "\n");
    return kExitOk;
}

nlohmann::json estimate_to_json(const SimEstimate& e) {
    return {{"statistic", e.statistic},
            {"estimate", e.estimate},
            {"std_error", e.std_error},
            {"replications", e.replications},
            {"seed", e.seed}};
}

int cmd_simulate(const std::string& model_path, double t, std::uint64_t reps,
                 std::uint64_t seed, const std::string& stats, const std::string& out_path) {
    ModelSpec model = ModelSpec::load(model_path);
    Simulator sim(model);

    nlohmann::json out = nlohmann::json::array();
    std::stringstream ss(stats);
    std::string stat;
    while (std::getline(ss, stat, ';')) {
        if (stat.empty()) continue;
        if (stat == "workload") {
            auto w = sim.estimate_workload(t, reps, seed);
            out.push_back(estimate_to_json(w.mean));
            out.push_back(estimate_to_json(w.covariance));
        } else if (stat.rfind("n=", 0) == 0) {
            MultiIndex n = parse_index(stat.substr(2), model.k);
            out.push_back(estimate_to_json(sim.estimate_joint_moment(n, t, reps, seed)));
        } else {
            throw ConfigError("simulate: unknown statistic '" + stat + "'");
        }
    }
    emit(out_path, json_to_string(out) + "\n");
    return kExitOk;
}

int cmd_validate(const std::string& model_path, int upto, double t, std::uint64_t reps,
                 std::uint64_t seed, double h, double t_max, const std::string& corrupt) {
    ModelSpec model = ModelSpec::load(model_path);
    double def_h, def_tmax;
    default_grid_params(model, def_h, def_tmax);
    if (h <= 0.0) h = def_h;
    if (t_max <= 0.0) t_max = def_tmax;

    MomentTable table(model);
    TransientSolver solver(model, h, t_max);
    Simulator sim(model);

    auto indices = indices_with_order_leq(model.k, upto);
    std::vector<SimEstimate> estimates = sim.estimate_joint_moments(indices, t, reps, seed);

    constexpr double kVolterraRelTol = 1e-3;
    constexpr double kSigma = 3.0;

    bool all_pass = true;
    std::cout << "index analytic volterra simulated verdict\n";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto& n = indices[i];
        double chi = table.chi(n);
        if (!corrupt.empty() && n == parse_index(corrupt, model.k)) chi *= 1.1;
        double volterra = solver.m_tilde(n).back();
        const SimEstimate& mc = estimates[i];

        bool ok_volterra = nearly_equal(chi, volterra, kVolterraRelTol);
        bool ok_mc = std::abs(mc.estimate - chi) <= kSigma * mc.std_error;
        bool ok = ok_volterra && ok_mc;
        all_pass = all_pass && ok;

        std::cout << n.str() << " " << format_float(chi) << " " << format_float(volterra)
                  << " " << format_float(mc.estimate) << " "
                  << (ok ? "PASS" : (ok_volterra ? "FAIL(simulator)" : "FAIL(volterra)"))
                  << "\n";
    }
    return all_pass ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delayq: moments, bounds, expansions and simulation of delayed "
                 "renewal-reward processes / infinite-server queues"};
    app.set_help_flag("--help", "print help");  // frees -h / --h for the grid step
    app.require_subcommand(1);

    std::string model_path, out_path, format = "json", n_text, stats = "n=1", corrupt;
    int all_upto = 0, upto = 3, type = 1;
    double h = 0.0, t_max = 0.0, t = 30.0;
    std::uint64_t reps = 100000, seed = 42;
    bool paper_literal = false;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_path, "model JSON file")->required();
    };

    CLI::App* chi = app.add_subcommand("chi", "limiting joint moments (exponential delays)");
    add_model(chi);
    chi->add_option("--n", n_text, "multi-index, e.g. 2,1");
    chi->add_option("--all-upto", all_upto, "emit a table of all chi_n with n_i <= H");
    chi->add_option("--out", out_path, "output file (stdout if omitted)");
    chi->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    CLI::App* tr = app.add_subcommand("transient", "grid solution of the renewal equation");
    add_model(tr);
    tr->add_option("--n", n_text, "multi-index")->required();
    tr->add_option("--h", h, "grid step (default 1e-3 E[tau])");
    tr->add_option("--tmax", t_max, "horizon (default 40 max E[L])");
    tr->add_option("--out", out_path, "output CSV file (stdout if omitted)");

    CLI::App* bo = app.add_subcommand("bounds", "uniform moment bounds R_n");
    add_model(bo);
    bo->add_option("--upto", upto, "max total order");
    bo->add_option("--out", out_path, "output file");
    bo->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    CLI::App* ex = app.add_subcommand("expansion", "asymptotic expansion of the first moment");
    add_model(ex);
    ex->add_option("--type", type, "input type (1-based)");
    ex->add_flag("--paper-literal-sign", paper_literal,
                 "uncorrected sign variant of the e^{-mu t} coefficient");
    ex->add_option("--out", out_path, "output JSON file");

    CLI::App* wl = app.add_subcommand("workload", "limiting workload statistics");
    add_model(wl);
    wl->add_option("--out", out_path, "output JSON file");

    CLI::App* si = app.add_subcommand("simulate", "Monte-Carlo estimates");
    add_model(si);
    si->add_option("--t", t, "horizon");
    si->add_option("--reps", reps, "replications");
    si->add_option("--seed", seed, "master seed");
    si->add_option("--stats", stats, "semicolon list, e.g. n=1,1;workload");
    si->add_option("--out", out_path, "output JSON file");

    CLI::App* va = app.add_subcommand("validate", "three-way agreement check");
    add_model(va);
    va->add_option("--upto", upto, "max total moment order");
    va->add_option("--t", t, "simulation horizon");
    va->add_option("--reps", reps, "replications");
    va->add_option("--seed", seed, "master seed");
    va->add_option("--h", h, "grid step");
    va->add_option("--tmax", t_max, "grid horizon");
    va->add_option("--corrupt-chi", corrupt,
                   "test hook: perturb the analytic value at this index")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
        if (chi->parsed()) return cmd_chi(model_path, n_text, all_upto, out_path, format);
        if (tr->parsed()) return cmd_transient(model_path, n_text, h, t_max, out_path);
        if (bo->parsed()) return cmd_bounds(model_path, upto, out_path, format);
        if (ex->parsed()) return cmd_expansion(model_path, type, paper_literal, out_path);
        if (wl->parsed()) return cmd_workload(model_path, out_path);
        if (si->parsed()) return cmd_simulate(model_path, t, reps, seed, stats, out_path);
        if (va->parsed())
            return cmd_validate(model_path, upto, t, reps, seed, h, t_max, corrupt);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    } catch (const delayq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
