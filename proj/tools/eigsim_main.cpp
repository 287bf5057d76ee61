// eigsim: desk-scale eigenvalue-estimation experiments.
//
// Subcommands mirror the pipelines: `spectrum real|complex|normal` for the
// estimation runs, `analyze leakage|bounds|euler` for the diagnostic
// analyzers, `sample plan` for measurement budgeting, and `matrix gen|export`
// for Matrix Market I/O.  Reports print to stdout (or --out) as JSON with
// stable key order, or RFC-4180 CSV with --emit csv.  Errors leave a
// structured JSON object on stderr and a nonzero exit status.

#include "eigsim/eigen_system.hpp"
#include "eigsim/experiment.hpp"
#include "eigsim/matrix_market.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using eigsim::ExperimentConfig;
using eigsim::Index;

struct CliState {
    ExperimentConfig config;
    std::string matrix_path;
    std::string spectrum_str;
    std::optional<Index> factory_n;
    double target_cond = 1.0;
    std::string emit_str = "json";
    std::string out_path;
    std::string probs_str;
    std::optional<Index> uniform_n;
};

void add_output_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--emit", st.emit_str, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", st.out_path, "Write the report to this path instead of stdout");
    cmd->add_option("--seed", st.config.seed, "Experiment seed");
}

void add_matrix_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--matrix", st.matrix_path, "Matrix Market file to ingest");
    cmd->add_option("--spectrum", st.spectrum_str,
                    "Factory spectrum: comma-separated complex literals "
                    "(a+bi, bi, i, or polar r@turns)");
    cmd->add_option("--n", st.factory_n, "Expected factory order (consistency check)");
    cmd->add_option("--cond", st.target_cond, "Factory eigenvector conditioning target");
    cmd->add_flag("--verify-dense", st.config.verify_dense,
                  "Check ingested-matrix estimates against a dense eigensolve (n <= 64)");
    cmd->add_flag("--dist", st.config.emit_distribution,
                  "Attach the full register distribution to the report");
}

void add_encoder_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--rho", st.config.rho, "Spectral-radius budget (default: Gershgorin)");
    cmd->add_option("--m", st.config.m_override, "Step-count override");
    cmd->add_option("--k", st.config.k_override, "Taylor-degree override");
    cmd->add_option("--dt", st.config.dt_override, "Step-size override");
}

// Transfers the string-typed CLI inputs into the config proper.
void finish_config(CliState& st) {
    if (!st.matrix_path.empty()) st.config.matrix_path = st.matrix_path;
    if (!st.spectrum_str.empty()) {
        eigsim::FactorySpec f;
        f.spectrum = eigsim::parse_spectrum(st.spectrum_str);
        f.target_cond = st.target_cond;
        f.seed = st.config.seed;
        if (st.factory_n && *st.factory_n != static_cast<Index>(f.spectrum.size()))
            throw eigsim::PreconditionError(
                "--n disagrees with the spectrum length (" + std::to_string(*st.factory_n) +
                " vs " + std::to_string(f.spectrum.size()) + ")");
        st.config.factory = std::move(f);
    }
    if (!st.probs_str.empty()) {
        for (const eigsim::cxd& z : eigsim::parse_spectrum(st.probs_str)) {
            if (z.imag() != 0.0)
                throw eigsim::PreconditionError("probabilities must be real numbers");
            st.config.probs.push_back(z.real());
        }
    }
    if (st.uniform_n) {
        if (*st.uniform_n < 1)
            throw eigsim::PreconditionError("--uniform needs a positive outcome count");
        st.config.probs.assign(static_cast<std::size_t>(*st.uniform_n),
                               1.0 / static_cast<double>(*st.uniform_n));
    }
    st.config.emit = st.emit_str == "csv" ? eigsim::EmitFormat::Csv : eigsim::EmitFormat::Json;
    if (!st.out_path.empty()) st.config.out_path = st.out_path;
}

void deliver(const std::string& text, const CliState& st) {
    if (st.config.out_path) {
        std::ofstream out(*st.config.out_path, std::ios::binary);
        if (!out) throw eigsim::IoError("cannot open '" + *st.config.out_path + "' for writing");
        out << text;
        if (!out) throw eigsim::IoError("short write to '" + *st.config.out_path + "'");
        return;
    }
    std::cout << text;
}

void run_pipeline(CliState& st, eigsim::Pipeline pipeline) {
    st.config.pipeline = pipeline;
    finish_config(st);
    const eigsim::RunReport report = eigsim::run_experiment(st.config);
    deliver(st.config.emit == eigsim::EmitFormat::Csv ? report.to_csv_string()
                                                      : report.to_json_string(),
            st);
}

// `matrix gen` manufactures a factory operator; `matrix export` additionally
// accepts --matrix to canonicalize an existing file.  Both write Matrix
// Market and print a one-object summary.
void run_matrix_io(CliState& st, bool allow_ingest) {
    finish_config(st);
    if (st.out_path.empty()) throw eigsim::PreconditionError("matrix output needs --out PATH");
    if (st.config.matrix_path && st.config.factory)
        throw eigsim::PreconditionError("give either --matrix or --spectrum, not both");

    nlohmann::json summary;
    if (st.config.matrix_path) {
        if (!allow_ingest)
            throw eigsim::PreconditionError("matrix gen builds factory operators; "
                                            "use matrix export for existing files");
        const eigsim::ComplexMatrix m = eigsim::ingest_matrix(*st.config.matrix_path);
        eigsim::export_matrix(m, st.out_path);
        summary = {{"written", st.out_path},
                   {"n", m.rows()},
                   {"nonzeros", m.non_zeros()},
                   {"source", *st.config.matrix_path}};
    } else if (st.config.factory) {
        const auto& f = *st.config.factory;
        const eigsim::EigenSystem es = eigsim::make_eigensystem(
            static_cast<Index>(f.spectrum.size()), f.spectrum, f.target_cond, f.seed);
        eigsim::export_matrix(es.matrix, st.out_path);
        summary = {{"written", st.out_path},
                   {"n", es.matrix.rows()},
                   {"cond_e", es.cond_e},
                   {"seed", f.seed}};
    } else {
        throw eigsim::PreconditionError("matrix output needs --spectrum or --matrix");
    }
    std::cout << summary.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale simulator of eigenvalue-estimation pipelines"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(eigsim::kVersion));

    CliState st;

    auto* spectrum = app.add_subcommand("spectrum", "Run an estimation pipeline");
    spectrum->require_subcommand(1);
    auto* sp_real = spectrum->add_subcommand("real", "Real-spectrum estimation");
    auto* sp_complex = spectrum->add_subcommand("complex", "Complex-spectrum estimation");
    auto* sp_normal = spectrum->add_subcommand("normal", "Normal-operator (sigma, theta) readout");
    for (CLI::App* cmd : {sp_real, sp_complex, sp_normal}) {
        add_matrix_options(cmd, st);
        add_output_options(cmd, st);
    }
    for (CLI::App* cmd : {sp_real, sp_complex}) {
        add_encoder_options(cmd, st);
        cmd->add_option("--eps", st.config.eps, "Target precision");
    }
    sp_normal->add_option("--eps1", st.config.eps1, "Magnitude precision");
    sp_normal->add_option("--eps2", st.config.eps2, "Angle precision");
    sp_real->callback([&st] { run_pipeline(st, eigsim::Pipeline::Real); });
    sp_complex->callback([&st] { run_pipeline(st, eigsim::Pipeline::Complex); });
    sp_normal->callback([&st] { run_pipeline(st, eigsim::Pipeline::Normal); });

    auto* analyze = app.add_subcommand("analyze", "Run a diagnostic analyzer");
    analyze->require_subcommand(1);
    auto* an_leak = analyze->add_subcommand("leakage", "Damped-mode register leakage profile");
    an_leak->add_option("--lambda-re", st.config.lambda_re, "Mode frequency (real part)");
    an_leak->add_option("--lambda-im", st.config.lambda_im, "Damping rate (positive)")
        ->required();
    an_leak->add_option("--dt", st.config.dt_override, "Step size (default 1)");
    an_leak->add_option("--m", st.config.m_override, "Steps; register size is m+1 (default 63)");
    an_leak->add_option("-r,--radius", st.config.leak_radius, "Window half-width (>= 2)");
    add_output_options(an_leak, st);
    an_leak->callback([&st] { run_pipeline(st, eigsim::Pipeline::Leakage); });

    auto* an_bounds = analyze->add_subcommand("bounds", "Per-eigenvector truncation bound table");
    add_matrix_options(an_bounds, st);
    add_encoder_options(an_bounds, st);
    an_bounds->add_option("--eps", st.config.eps, "Target precision");
    add_output_options(an_bounds, st);
    an_bounds->callback([&st] { run_pipeline(st, eigsim::Pipeline::Bounds); });

    auto* an_euler = analyze->add_subcommand(
        "euler", "First-order chain against the exact propagator");
    add_matrix_options(an_euler, st);
    an_euler->add_option("--m", st.config.m_override, "Base step count (default 8)");
    an_euler->add_option("--dt", st.config.dt_override, "Base step size (default 1/steps)");
    add_output_options(an_euler, st);
    an_euler->callback([&st] { run_pipeline(st, eigsim::Pipeline::EulerCheck); });

    auto* sample = app.add_subcommand("sample", "Measurement budgeting");
    sample->require_subcommand(1);
    auto* sa_plan = sample->add_subcommand("plan", "Coverage plan plus Monte-Carlo check");
    sa_plan->add_option("--probs", st.probs_str, "Comma-separated outcome probabilities");
    sa_plan->add_option("--uniform", st.uniform_n, "Shorthand for a uniform distribution");
    sa_plan->add_option("--delta", st.config.delta, "Miss tolerance");
    sa_plan->add_option("--trials", st.config.trials, "Monte-Carlo repetitions");
    sa_plan->add_option("--par", st.config.par, "Worker fan-out (deterministic merge)");
    add_output_options(sa_plan, st);
    sa_plan->callback([&st] { run_pipeline(st, eigsim::Pipeline::Sample); });

    auto* matrix = app.add_subcommand("matrix", "Matrix Market I/O");
    matrix->require_subcommand(1);
    auto* mx_gen = matrix->add_subcommand("gen", "Manufacture a factory operator");
    auto* mx_export = matrix->add_subcommand("export", "Write an operator in canonical form");
    for (CLI::App* cmd : {mx_gen, mx_export}) {
        add_matrix_options(cmd, st);
        add_output_options(cmd, st);
    }
    mx_gen->callback([&st] { run_matrix_io(st, false); });
    mx_export->callback([&st] { run_matrix_io(st, true); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const eigsim::Error& e) {
        nlohmann::json err{{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
    return 0;
}
