#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "juliadim/fit.hpp"
#include "juliadim/stats.hpp"

namespace juliadim {

inline const char* const kTaskNames[] = {"exterior-dim", "quasicircle-dim", "repeller-dim",
                                         "beta",         "sigma",           "bounds"};

// Flat key=value text with [sections]. Every field has a default and is
// written back by serialize_config, so parse(serialize(x)) == x.
struct ScanConfig {
    // [grid] default epsilon grid: explicit list, or log-spaced when eps_count > 0
    std::vector<double> epsilons;
    double eps_lo = 1e-4, eps_hi = 1e-1;
    int eps_count = 0;
    // per-task grids; empty means "use the default grid"
    std::vector<double> exterior_eps, repeller_eps, beta_eps, sigma_eps, bounds_eps;
    std::vector<double> quasicircle_c;

    // [scan]
    std::vector<std::string> tasks;
    std::uint64_t seed = 1;
    int workers = 1;

    // [budgets]
    int exterior_n_lo = 10, exterior_n_hi = 20;
    int quasicircle_depth = 14;
    double tol = 1e-10;
    double min_len = 1e-7;
    double C1 = 6.0;
    int cloud_size = 20000;
    int beta_depth = 12;
    int orbit_length = 1000000;
    int radii_count = 60;
    double sigma_r_hi = 0.1;
    double R_prime = 0.5;

    // [constants]
    double C = 1.0, kappa = 1.0, Z = 1.0;
    double omega_prime = 1.0;
    int ce_depth = 10000;

    // [output]
    std::string path = "scan.csv";
    std::string format = "csv";

    bool operator==(const ScanConfig&) const = default;
};

ScanConfig parse_config(const std::string& text);
std::string serialize_config(const ScanConfig& cfg);
// JULIADIM_<SECTION>_<KEY>, upper case, '-' as '_'. Returns the names applied.
std::vector<std::string> apply_env_overrides(ScanConfig& cfg);
void validate_config(const ScanConfig& cfg);

// Grid actually used for a task.
std::vector<double> task_grid(const ScanConfig& cfg, const std::string& task);

struct ScanRow {
    std::size_t index = 0;
    std::string task;
    double c = 0.0, epsilon = 0.0;
    bool ok = false;
    double value = 0.0, lo = 0.0, hi = 0.0, value2 = 0.0, aux = 0.0;
    std::string message;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::size_t failed = 0;
};

// Rows run concurrently on cfg.workers threads; output order is by index.
ScanResult run_scan(const ScanConfig& cfg);

// A single row, as run_scan would compute it.
ScanRow run_row(const ScanConfig& cfg, std::size_t index, const std::string& task, double grid_value);

struct BoundsDetail {
    UpperBoundReport report;
    IntegralValue I, O;
};

// The bounds task at c = -2 + epsilon, with the integrals kept.
BoundsDetail bounds_detail(const ScanConfig& cfg, double epsilon, std::uint64_t seed);

// Per-row seed derived from the scan seed.
std::uint64_t row_seed(std::uint64_t seed, std::size_t index);

std::string emit_csv(const std::vector<ScanRow>& rows);
std::string emit_json(const std::vector<ScanRow>& rows);
std::vector<ScanRow> parse_csv(const std::string& text);

std::string manifest_json(const ScanConfig& cfg, const ScanResult& res);

// Writes results and the manifest (<path>.manifest.json). Throws on I/O failure.
void write_outputs(const ScanConfig& cfg, const ScanResult& res);

// Column of a row by name: c, epsilon, value, lo, hi, value2, aux,
// one-minus-value, value-minus-one, abs-c.
double row_column(const ScanRow& row, const std::string& name);

std::string format_double(double x);

}  // namespace juliadim
