// Command-line front end for the d-dimensional communication-game toolkit:
// strategy evaluation, see-saw optimization (prepare-and-measure and
// entanglement-assisted), classical bounds, bundled-reference verification,
// and reference-table reporting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qccp/classical.hpp"
#include "qccp/dataio.hpp"
#include "qccp/errors.hpp"
#include "qccp/game.hpp"
#include "qccp/optimize.hpp"
#include "qccp/strategies.hpp"

namespace {

using qccp::Constraint;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

struct CommonOpts {
    std::string format = "human";
    std::string out;
};

void emit(const std::string& text, const CommonOpts& common) {
    std::cout << text;
    if (!common.out.empty()) {
        std::ofstream f(common.out, std::ios::binary);
        if (!f) throw qccp::Error("cannot open output file: " + common.out);
        f << text;
    }
}

std::string human_rows(const std::vector<qccp::ReportRow>& rows) {
    std::ostringstream out;
    out << "  d  method                 value      reference  delta\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%3d  %-21s  %9.6f", r.d,
                      r.method.c_str(), r.value);
        out << buf;
        if (r.reference) {
            std::snprintf(buf, sizeof(buf), "  %9.4f", *r.reference);
            out << buf;
        } else {
            out << "          -";
        }
        if (r.delta) {
            std::snprintf(buf, sizeof(buf), "  %+9.6f", *r.delta);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

void emit_rows(const std::vector<qccp::ReportRow>& rows,
               const CommonOpts& common) {
    if (common.format == "json")
        emit(qccp::rows_to_json(rows), common);
    else if (common.format == "csv")
        emit(qccp::rows_to_csv(rows), common);
    else
        emit(human_rows(rows), common);
}

Constraint parse_constraint(const std::string& name) {
    if (name == "none") return Constraint::UNCONSTRAINED;
    if (name == "trace-one") return Constraint::TRACE_ONE;
    if (name == "projective") return Constraint::RANK_ONE_PROJECTIVE;
    throw qccp::DomainError("unknown constraint: " + name);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw qccp::ParseError("cannot read strategy file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_evaluate(const std::string& path, bool repair,
                 const CommonOpts& common) {
    const qccp::ParsedStrategy parsed =
        qccp::parse_strategy(read_file(path), repair);
    std::vector<qccp::ReportRow> rows;
    qccp::ReportRow row;
    if (std::holds_alternative<qccp::PmStrategy>(parsed.strategy)) {
        const auto& s = std::get<qccp::PmStrategy>(parsed.strategy);
        const qccp::GameSpec game = qccp::build_game(s.d);
        row.d = s.d;
        row.method = "evaluate-qs";
        row.value = qccp::evaluate_qs(game, s);
    } else {
        const auto& s = std::get<qccp::BellStrategy>(parsed.strategy);
        const qccp::GameSpec game = qccp::build_game(s.d);
        row.d = s.d;
        row.method = "evaluate-bell";
        row.value = qccp::evaluate_bell(game, qccp::behavior_from_bell(s));
    }
    rows.push_back(row);
    emit_rows(rows, common);
    if (common.format == "human") {
        std::cout << "completeness defects before canonicalization: "
                  << parsed.canon.completeness_defect_before[0] << ", "
                  << parsed.canon.completeness_defect_before[1]
                  << (parsed.canon.repaired ? " (repaired)" : "") << '\n';
        for (const auto& note : parsed.canon.notes)
            std::cout << "note: " << note << '\n';
    }
    return kExitOk;
}

int run_optimize(bool bell, int dim, const qccp::SeesawConfig& config,
                 unsigned threads, bool include_traces,
                 const CommonOpts& common) {
    const qccp::GameSpec game = qccp::build_game(dim);
    const qccp::OptimizationReport report =
        bell ? qccp::seesaw_bell(game, config, threads)
             : qccp::seesaw_qs(game, config, threads);
    if (common.format == "json") {
        emit(qccp::report_to_json(report, include_traces), common);
        return kExitOk;
    }
    const auto& ref = qccp::reference_table().row(dim);
    const std::optional<double> reference =
        bell ? ref.bell_max
             : (config.constraint == Constraint::TRACE_ONE ? ref.qs_trace_one
                                                           : ref.qs_lower);
    qccp::ReportRow row;
    row.d = dim;
    row.method = bell ? "optimize-bell" : "optimize-qs";
    row.value = report.best_value;
    row.reference = reference;
    if (reference) row.delta = report.best_value - *reference;
    row.restarts = report.restarts;
    row.seed = report.seed;
    row.wall_ms = report.wall_ms;
    emit_rows({row}, common);
    if (common.format == "human")
        std::cout << "best restart: " << report.best_restart
                  << "  (reproduce with --seed " << report.seed << ")\n";
    return kExitOk;
}

int run_classical(int dim, bool exact, int restarts, std::uint64_t seed,
                  const CommonOpts& common) {
    const qccp::GameSpec game = qccp::build_game(dim);
    const qccp::ClassicalBound bound =
        exact ? qccp::exact_classical_bound(game)
              : qccp::heuristic_classical_bound(game, restarts, seed);
    if (common.format == "json") {
        nlohmann::ordered_json j;
        j["d"] = dim;
        j["method"] = exact ? "classical-exact" : "classical-heuristic";
        j["value"] = bound.value;
        j["witness"]["encoding"] = bound.witness.encoding;
        j["witness"]["decoding"] = bound.witness.decoding;
        if (!exact) {
            j["restarts"] = restarts;
            j["seed"] = seed;
        }
        emit(j.dump(2) + "\n", common);
        return kExitOk;
    }
    if (common.format == "csv") {
        qccp::ReportRow row;
        row.d = dim;
        row.method = exact ? "classical-exact" : "classical-heuristic";
        row.value = bound.value;
        row.restarts = exact ? 0 : restarts;
        row.seed = exact ? 0 : seed;
        emit_rows({row}, common);
        return kExitOk;
    }
    std::ostringstream out;
    out << "classical " << (exact ? "exact" : "heuristic")
        << " bound for d=" << dim << ": " << bound.value << "\n";
    out << "encoding m(x0, x), rows x0, columns x in {0,1}:\n";
    for (int x0 = 0; x0 < dim; ++x0)
        out << "  " << bound.witness.encoding[static_cast<std::size_t>(x0) * 2]
            << ' '
            << bound.witness.encoding[static_cast<std::size_t>(x0) * 2 + 1]
            << '\n';
    out << "decoding g(m, y), rows m, columns y in {0,1}:\n";
    for (int m = 0; m < dim; ++m)
        out << "  " << bound.witness.decoding[static_cast<std::size_t>(m) * 2]
            << ' '
            << bound.witness.decoding[static_cast<std::size_t>(m) * 2 + 1]
            << '\n';
    emit(out.str(), common);
    return kExitOk;
}

int run_verify_appendix(const std::string& dim_arg, double tolerance,
                        const CommonOpts& common) {
    std::vector<int> dims;
    if (dim_arg == "all") {
        dims = {6, 7, 8, 9, 10};
    } else {
        try {
            dims.push_back(std::stoi(dim_arg));
        } catch (const std::exception&) {
            throw qccp::DomainError("--dim must be an integer or \"all\"");
        }
    }
    std::vector<qccp::ReportRow> rows;
    bool all_pass = true;
    for (int d : dims) {
        const qccp::PmStrategy s = qccp::load_appendix(d);
        const qccp::GameSpec game = qccp::build_game(d);
        qccp::ReportRow row;
        row.d = d;
        row.method = "verify-appendix";
        row.value = qccp::evaluate_qs(game, s);
        row.reference = qccp::reference_table().row(d).qs_lower;
        row.delta = row.value - *row.reference;
        all_pass = all_pass && std::abs(*row.delta) <= tolerance;
        rows.push_back(row);
    }
    emit_rows(rows, common);
    if (common.format == "human")
        for (const auto& row : rows)
            std::cout << "d=" << row.d << ": "
                      << (std::abs(*row.delta) <= tolerance ? "PASS" : "FAIL")
                      << " (|delta| = " << std::abs(*row.delta)
                      << " vs tolerance " << tolerance << ")\n";
    return all_pass ? kExitOk : kExitValidation;
}

int run_table(std::uint64_t seed, const CommonOpts& common) {
    std::vector<qccp::ReportRow> rows;
    for (const auto& ref : qccp::reference_table().rows) {
        auto constant = [&](const char* method,
                            const std::optional<double>& v) {
            if (!v) return;
            qccp::ReportRow row;
            row.d = ref.d;
            row.method = method;
            row.value = *v;
            row.reference = v;
            row.delta = 0.0;
            rows.push_back(row);
        };
        constant("reference-qs-lower", ref.qs_lower);
        constant("reference-qs-lower-prior", ref.qs_lower_prior);
        constant("reference-bell", ref.bell_max);
        constant("reference-ml", ref.ml_max);
        constant("reference-trace-one", ref.qs_trace_one);

        const qccp::GameSpec game = qccp::build_game(ref.d);
        {
            qccp::ReportRow row;
            row.d = ref.d;
            row.method = "classical-heuristic";
            row.value = qccp::heuristic_classical_bound(game, 50, seed).value;
            row.restarts = 50;
            row.seed = seed;
            rows.push_back(row);
        }
        if (ref.d >= 6 && ref.d <= 10) {
            qccp::ReportRow row;
            row.d = ref.d;
            row.method = "appendix-qs";
            row.value = qccp::evaluate_qs(game, qccp::load_appendix(ref.d));
            row.reference = ref.qs_lower;
            row.delta = row.value - *row.reference;
            rows.push_back(row);
        }
    }
    emit_rows(rows, common);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Toolkit for d-dimensional quantum communication games: evaluate "
        "strategies, run see-saw optimizations, compute classical bounds, and "
        "check the bundled reference data."};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"human", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", common.out, "Also write the report to this file");

    // evaluate
    auto* cmd_eval = app.add_subcommand(
        "evaluate", "Evaluate a strategy file against its game");
    std::string strategy_path;
    bool repair = false;
    cmd_eval->add_option("--strategy", strategy_path, "Strategy file (JSON)")
        ->required();
    cmd_eval->add_flag("--repair", repair,
                       "Renormalize imperfect measurement data (logged)");

    // optimize-qs / optimize-bell
    int dim = 2;
    qccp::SeesawConfig config;
    unsigned threads = 1;
    bool include_traces = false;
    std::string constraint_name = "none";
    auto add_opt_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dim", dim, "Game dimension d")->required();
        cmd->add_option("--restarts", config.restarts, "Restart count")
            ->capture_default_str();
        cmd->add_option("--iters", config.max_iters,
                        "See-saw iterations per restart")
            ->capture_default_str();
        cmd->add_option("--seed", config.seed, "Random seed")
            ->capture_default_str();
        cmd->add_option("--constraint", constraint_name,
                        "Measurement constraint")
            ->check(CLI::IsMember({"none", "trace-one", "projective"}))
            ->capture_default_str();
        cmd->add_option("--threads", threads,
                        "Worker threads (output is thread-count independent)")
            ->capture_default_str();
        cmd->add_option("--patience", config.patience,
                        "Stop a restart after this many cycles without "
                        "improvement (0 = never)")
            ->capture_default_str();
        cmd->add_flag("--traces", include_traces,
                      "Include per-restart traces in JSON output");
    };
    auto* cmd_qs = app.add_subcommand(
        "optimize-qs", "See-saw over prepare-and-measure strategies");
    add_opt_flags(cmd_qs);
    bool no_warm_start = false;
    cmd_qs->add_flag("--no-warm-start", no_warm_start,
                     "Disable the classical warm-start restart");
    auto* cmd_bell = app.add_subcommand(
        "optimize-bell", "See-saw over entanglement-assisted strategies");
    add_opt_flags(cmd_bell);

    // classical
    auto* cmd_classical =
        app.add_subcommand("classical", "Classical bound (exact or heuristic)");
    bool exact = false;
    int cl_restarts = 50;
    std::uint64_t cl_seed = 0;
    cmd_classical->add_option("--dim", dim, "Game dimension d")->required();
    cmd_classical->add_flag("--exact", exact,
                            "Exact enumeration (d <= 5) instead of heuristic");
    cmd_classical->add_option("--restarts", cl_restarts, "Heuristic restarts")
        ->capture_default_str();
    cmd_classical->add_option("--seed", cl_seed, "Heuristic seed")
        ->capture_default_str();

    // verify-appendix
    auto* cmd_verify = app.add_subcommand(
        "verify-appendix",
        "Evaluate the bundled reference strategies against the reference "
        "values");
    std::string dim_arg = "all";
    double tolerance = 0.03;
    cmd_verify->add_option("--dim", dim_arg, "Dimension (6..10) or \"all\"")
        ->capture_default_str();
    cmd_verify->add_option("--tolerance", tolerance, "Acceptance tolerance")
        ->capture_default_str();

    // table
    auto* cmd_table = app.add_subcommand(
        "table",
        "Reference constants alongside cheap computed values (classical "
        "heuristic, bundled-strategy evaluations)");
    std::uint64_t table_seed = 0;
    cmd_table->add_option("--seed", table_seed, "Classical heuristic seed")
        ->capture_default_str();

    // --format/--out live on the parent app; let each subcommand pass them up
    // so they can be written after the subcommand name as well.
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_eval) return run_evaluate(strategy_path, repair, common);
        if (*cmd_qs || *cmd_bell) {
            config.constraint = parse_constraint(constraint_name);
            if (no_warm_start) config.classical_warm_start = false;
            return run_optimize(static_cast<bool>(*cmd_bell), dim, config,
                                threads, include_traces, common);
        }
        if (*cmd_classical)
            return run_classical(dim, exact, cl_restarts, cl_seed, common);
        if (*cmd_verify)
            return run_verify_appendix(dim_arg, tolerance, common);
        if (*cmd_table) return run_table(table_seed, common);
        std::cerr << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const qccp::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const qccp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
