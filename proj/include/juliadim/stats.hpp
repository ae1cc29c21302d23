#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "juliadim/fit.hpp"
#include "juliadim/quadratic.hpp"

namespace juliadim {

struct OrbitSample {
    double c = 0.0;
    double x0 = 0.0;
    std::uint64_t seed = 0;
    std::size_t transient = 0;
    std::vector<double> x;     // kept iterates, transient removed
    std::size_t redraws = 0;   // stall-guard interventions
};

// N iterates of f_c after `transient` discarded ones. x0 defaults to a uniform
// point of [c, f(c)] drawn from the seed. Needs c in [-2, c0].
OrbitSample typical_orbit(double c, std::size_t N, std::uint64_t seed,
                          std::optional<double> x0 = std::nullopt, std::size_t transient = 1000);

inline constexpr std::size_t kConfidentVisits = 100;

struct SigmaEstimate {
    double center = 0.0;
    std::vector<double> radii;  // decreasing
    std::vector<double> mass;
    std::vector<std::size_t> visits;
    std::vector<bool> confident;
    std::size_t orbit_length = 0;
    double x0 = 0.0;
};

// count radii geometrically spaced from hi down to lo
std::vector<double> log_radii(double hi, double lo, int count);

SigmaEstimate sigma_ball(const OrbitSample& orbit, std::vector<double> radii);

// Fit of log mass on log r over confident radii inside [r_lo, r_hi].
FitResult sigma_exponent(const SigmaEstimate& sig, double r_lo, double r_hi);

// Synthetic estimate from an exact mass function; used to exercise the integrals.
template <class F>
SigmaEstimate sigma_from_function(F&& mass, const std::vector<double>& radii) {
    SigmaEstimate s;
    s.radii = radii;
    for (double r : radii) {
        s.mass.push_back(mass(r));
        s.visits.push_back(static_cast<std::size_t>(-1));
        s.confident.push_back(true);
    }
    return s;
}

struct ReturnDepthRow {
    int p = 0;
    double r_p = 0.0;
    double density = 0.0;   // |E_p| / N
    double bound = 0.0;     // p * sigma(B(c, r_p))
    std::size_t visits = 0;
    bool confident = false;
};

struct ReturnDepthOptions {
    double omega = 0.75 * 0.6931471805599453;
    double Omega1 = 1.0;
    double R_prime = 1.0;
};

// p0 = |log eps| / omega; p_grid entries below p0 are rejected.
std::vector<ReturnDepthRow> return_depth_density(const OrbitSample& orbit, double epsilon,
                                                 const std::vector<int>& p_grid,
                                                 const ReturnDepthOptions& opt = {});

struct IntegralValue {
    double value = 0.0;
    bool lower_bound_only = false;  // grid stopped at the confidence floor
    double floor = 0.0;             // smallest radius used
    double dyadic = 0.0;            // annulus cross-check (I only)
};

IntegralValue O_integral(const SigmaEstimate& sig, double epsilon);
IntegralValue I_integral(const SigmaEstimate& sig, double epsilon, double R_prime);

struct BoundConstants {
    double C = 1.0;
    double kappa = 1.0;
    double Z = 1.0;
};

struct UpperBoundReport {
    double epsilon = 0.0;
    double beta_norm = 0.0;
    double I_val = 0.0, O_val = 0.0;
    double bound_formula = 0.0;
    double bound_hausTop = 0.0;
    double bound_mis = 0.0;
};

UpperBoundReport upper_bound_report(double epsilon, double beta_norm, double I_val, double O_val,
                                    const BoundConstants& k = {});

struct CeParameter {
    double c, epsilon, margin;
};

// Real c = -2 + eps with eps log-spaced in [eps_lo, eps_hi] whose ce_margin at
// `depth` exceeds `threshold`; returns up to `count` of them, spread over the range.
std::vector<CeParameter> find_ce_parameters(double eps_lo, double eps_hi, int count,
                                            int grid = 400, double threshold = 0.3,
                                            int depth = 10000);

}  // namespace juliadim
