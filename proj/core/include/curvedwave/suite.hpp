#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvedwave/verify.hpp"

namespace curvedwave {

struct Tolerances {
    double residual{1e-6};        // Schroedinger residuals
    double eigen{1e-8};           // P3 eigenvalue residuals
    double generator{1e-6};       // q-space generator eigenvalues
    double commutator{1e-4};      // Lie-algebra closure
    double metric{1e-8};          // pullback vs closed form
    double variable_set{1e-6};    // complex-chart variable sets, Hamiltonian forms
    double exact{1e-12};          // algebraic identities
    double representation{1e-10};  // pointwise agreement of closed forms
    double polynomial{1e-14};
    double contiguity{1e-10};
    double flat_limit{0.1};
};

struct SuiteConfig {
    /// Empty means all. A non-empty filter drops checks not tagged with a match.
    std::vector<ChartId> charts;
    std::vector<Family> families;
    Tolerances tol;
    int grid_count{20};
    std::map<ChartId, GridSpec> grid_overrides;
    std::uint64_t seed{20240917};
    double hamiltonian_step{default_hamiltonian_step};
    double first_order_step{1e-3};
    double commutator_step{1e-2};
    /// Relative fault injected into every check's input (0 disables):
    /// x -> x (1 + p) + p.
    double perturbation{0.0};
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads{0};
    std::string json_output;
    std::string csv_output;

    GridSpec grid(ChartId chart) const;
    double perturb(double x) const { return x * (1.0 + perturbation) + perturbation; }
    complex perturb(complex x) const { return x * (1.0 + perturbation) + perturbation; }
};

/// Strict JSON reader: unknown keys and wrong types raise ConfigError with the
/// JSON pointer of the offending field.
SuiteConfig parse_config(std::string_view json_text, const std::string& path = "<inline>");
SuiteConfig load_config(const std::string& path);

struct CheckEntry {
    std::string name;
    std::optional<ChartId> chart;
    std::optional<Family> family;
    std::function<ResidualReport(const SuiteConfig&)> run;
};

/// Every registered check, in report order.
const std::vector<CheckEntry>& check_registry();

std::vector<const CheckEntry*> selected_checks(const SuiteConfig& config);

/// Runs the selected checks concurrently; reports come back in registry order.
/// A check that throws is reported as failed with the message in params.
std::vector<ResidualReport> run_suite(const SuiteConfig& config);

struct SuiteSummary {
    std::size_t total{0};
    std::size_t passed{0};
    std::size_t failed{0};
    std::vector<std::string> failures;
};

SuiteSummary summarize(const std::vector<ResidualReport>& reports);

}  // namespace curvedwave
