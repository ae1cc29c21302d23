#pragma once

#include <string>
#include <vector>

#include "juliadim/inducing.hpp"

namespace juliadim {

// One inverse branch G of an expanding system on a real range [lo, hi].
//   Affine: G(y) = a*y + b
//   Word:   G = pull_back(c, itin, .)
//   Imag:   G(z) = i*sqrt(c - pull_back(c, itin, z)), the complex branch W
enum class BranchKind { Affine, Word, Imag };

struct InverseBranch {
    BranchKind kind = BranchKind::Affine;
    double a = 0.0, b = 0.0;
    Itinerary itin;
    double log_inf = 0.0, log_sup = 0.0;  // log|G'| over the range

    cplx apply(double c, cplx z, double* log_deriv) const;
};

struct BranchSystem {
    double c = 0.0;
    double lo = 0.0, hi = 1.0;  // range interval (its disk for complex branches)
    std::vector<InverseBranch> branches;
    double imag_height = 0.0;   // max |Im| reached by an Imag branch image

    bool is_real() const;
    double range_len() const { return hi - lo; }
};

BranchSystem linear_system(const std::vector<double>& ratios);
BranchSystem exterior_system(double c);
BranchSystem repeller_system(const CantorRepeller& rep, bool with_W);

// Log-lengths of all depth-n word images of the range, cached once per depth.
// mid is exact; lo/hi come from the per-branch derivative brackets.
struct WordTable {
    int depth = 0;
    std::vector<double> mid, lo, hi;
};

inline constexpr std::size_t kDefaultWordBudget = std::size_t(1) << 22;

WordTable enumerate_words(const BranchSystem& sys, int n,
                          std::size_t budget = kDefaultWordBudget);

struct QSum {
    double lo, mid, hi;  // log Q(n, t)
};

QSum qsum(const WordTable& words, double t);
QSum qsum(const BranchSystem& sys, int n, double t);

struct PressureValue {
    double value, lo, hi;
};

PressureValue pressure(const WordTable& w_lo, const WordTable& w_hi, double t);
PressureValue pressure(const BranchSystem& sys, double t, int n_lo, int n_hi);

struct PressureCurve {
    struct Sample {
        double t;
        int depth;
        double normalized_log_q;  // (1/n) log Q(n, t)
    };
    std::vector<Sample> samples;
    std::vector<double> ts;
    std::vector<PressureValue> extrapolated;
    bool monotone = true;
};

PressureCurve pressure_curve(const BranchSystem& sys, const std::vector<double>& ts, int n_lo,
                             int n_hi);

enum class DimMethod { qsum_bisection, transfer_eigenvalue, harmonic_lower, moran_oracle };
const char* dim_method_name(DimMethod m);

struct DimensionEstimate {
    double value = 0.0;
    DimMethod method = DimMethod::qsum_bisection;
    double lo = 0.0, hi = 0.0;
    int depth = 0;
    bool monotone = true;  // P decreased across every bisection step
};

// Default depths: largest n with (#branches)^n <= 2e4, and n/2.
DimensionEstimate dimension(const BranchSystem& sys, double tol = 1e-10, int n_lo = 0,
                            int n_hi = 0);

double moran_oracle(const std::vector<double>& ratios, double tol = 1e-14);

// Log of the depth-n preimage sum of |(phi^n)'(y)|^{-t} at a range point z.
double preimage_log_sum(const BranchSystem& sys, cplx z, int n, double t);

// Collocation of the transfer operator on Chebyshev nodes: 1-D on the range
// for real systems, a tensor grid on [lo, hi] x [-h, h] once Imag branches appear.
struct TransferOptions {
    int nx = 16;
    int ny = 6;
    double height_factor = 1.25;
    int max_iter = 10000;
    double tol = 1e-13;
    // the conformal weights use a separate piecewise-linear grid: its matrix is
    // nonnegative, so the left Perron vector is a genuine measure
    int nu_nx = 128;
    int nu_ny = 9;
};

struct TransferResult {
    double lambda = 0.0;
    std::vector<cplx> nodes;
    std::vector<double> h;   // right eigenfunction on the nodes, max h = 1
    std::vector<cplx> nu_nodes;
    std::vector<double> nu;  // conformal weights on nu_nodes, nonnegative, sum 1
    double nu_lambda = 0.0;  // Perron root of the piecewise-linear discretization
    int iterations = 0;
    double min_h = 0.0;
};

TransferResult transfer_eigenvalue(const BranchSystem& sys, double t,
                                   const TransferOptions& opt = {});

DimensionEstimate dimension_transfer(const BranchSystem& sys, double tol = 1e-10,
                                     const TransferOptions& opt = {});

struct ExteriorDimension {
    DimensionEstimate dim;
    double green = 0.0;
    double harmonic_bound = 0.0;  // log 2 / (log 2 + G_c(c))
};

ExteriorDimension dimension_exterior(double c, double tol = 1e-10, int n_lo = 10, int n_hi = 20);

DimensionEstimate dimension_quasicircle(cplx c, int n = 14, double tol = 1e-12);

struct RepellerDimension {
    DimensionEstimate real_only;
    DimensionEstimate full;
    std::size_t branch_count = 0;
};

RepellerDimension dimension_repeller(const CantorRepeller& rep, double tol = 1e-10,
                                     const TransferOptions& opt = {});

}  // namespace juliadim
