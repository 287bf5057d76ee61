#pragma once

// Experiment harness: a declarative config, a dispatcher over the seven
// pipelines, and a structured report that serializes to JSON (stable key
// order) or RFC-4180 CSV.  Reports are deterministic for a fixed
// (config, seed) pair; the wall-time field is the single exception and is
// kept on its own top-level key so consumers can strip it before comparing.

#include "eigsim/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eigsim {

enum class Pipeline { Real, Complex, Normal, Leakage, EulerCheck, Bounds, Sample };
enum class EmitFormat { Json, Csv };

std::string pipeline_name(Pipeline p);
Pipeline parse_pipeline(const std::string& name);

// Seeded factory request: a prescribed spectrum plus an eigenvector
// conditioning target.  n is implied by the spectrum length.
struct FactorySpec {
    std::vector<cxd> spectrum;
    double target_cond = 1.0;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    Pipeline pipeline = Pipeline::Real;

    // Exactly one matrix source for the pipelines that consume an operator.
    std::optional<std::string> matrix_path;
    std::optional<FactorySpec> factory;

    double eps = 1.0 / 64.0;
    double eps1 = 1.0 / 64.0;
    double eps2 = 1.0 / 64.0;
    std::optional<double> rho;
    double delta = 0.01;
    std::uint64_t seed = 1;

    // Encoder overrides (also the leakage/euler step parameters).
    std::optional<Index> m_override;
    std::optional<Index> k_override;
    std::optional<double> dt_override;

    bool verify_dense = false;      // ingested matrices: run the dense-eig oracle
    bool emit_distribution = false; // attach the full register distribution
    int par = 1;                    // sampler fan-out (deterministic merge)

    // Leakage pipeline inputs.
    double lambda_re = 0.0;
    double lambda_im = 0.0;
    Index leak_radius = 8;

    // Sample pipeline inputs.
    std::vector<double> probs;
    Index trials = 2000;

    // Delivery plumbing (not echoed into the report).
    std::optional<std::string> out_path;
    EmitFormat emit = EmitFormat::Json;
};

// Throws PreconditionError when the config violates its invariants
// (missing/ambiguous matrix source, precisions outside (0,1), ...).
void validate_config(const ExperimentConfig& config);

// Complex literals for --spectrum: "0.25", "-0.1-0.4i", "i", "2e-3i", or the
// polar form "0.9@0.1" meaning 0.9 * e^{2 pi i 0.1}.  Lists are
// comma-separated.  Throws ParseError on malformed input.
cxd parse_complex(const std::string& text);
std::vector<cxd> parse_spectrum(const std::string& text);

struct RunReport {
    nlohmann::json body;

    std::string to_json_string() const;  // pretty, sorted keys, trailing newline
    std::string to_csv_string() const;   // RFC-4180, CRLF, pipeline-specific table
};

RunReport run_experiment(const ExperimentConfig& config);

}  // namespace eigsim
