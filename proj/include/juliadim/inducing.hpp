#pragma once

#include <string>
#include <vector>

#include "juliadim/branches.hpp"

namespace juliadim {

struct InducingOptions {
    int max_time = 10000;
    double min_len = 1e-8;        // composed domains shorter than this are dropped and ledgered
    double filling_floor = 1e-12;
    int filling_cap = 200;
    double C1 = 6.0;              // retention: keep measure >= |V|(1 - C1 eps^{3/4})
    int K_max = 3;
    int disk_samples = 64;
    int boundary_steps = 1000;
};

// A box mapping on U = (q, -q). Monotone branches only in `branches`;
// the even central branch, if any, sits in `central` with central.itin[0] == 0.
struct BoxMapping {
    double c = 0.0, q = 0.0, p = 0.0;
    double Vlo = 0.0, Vhi = 0.0;
    bool has_V = false;
    double Zlo = 0.0, Zhi = 0.0;
    bool has_Z = false;
    std::vector<Branch> branches;
    bool has_central = false;
    Branch central;
    double central_value = 0.0;  // psi(0)
    double central_edge = 0.0;   // psi(+-x), always q or -q
    int zeta_l = -1, zeta_r = -1;
    double untracked = 0.0;      // measure dropped by max_time / min length
    // diagnostics from the first-return construction
    double z_over_sqrt_eps = 0.0;
    double min_log_inf_off_Z = 0.0;

    double Ulen() const { return -2.0 * q; }
    double Vlen() const { return Vhi - Vlo; }
};

BoxMapping first_return_map(double c, const InducingOptions& opt = {});

// Sets V = U minus the closed n = 2 components. Throws if they are missing.
void make_V(BoxMapping& box);

// Forward orbits of the endpoints of V stay out of V for `steps` iterates.
// Values within 1e-9 of +-q are snapped back onto q: the exact orbit lands there
// and double rounding near a repelling point would otherwise wander off.
bool boundary_regular(const BoxMapping& box, int steps);

// First entry map to V: gap words followed by the identity on V.
std::vector<Branch> first_entry_V(const BoxMapping& box, double min_len, double* lost);

struct FillingResult {
    std::vector<Branch> branches;  // targets U (long) or Z (short)
    std::vector<double> sizes;     // |d_{P,j}| for the executed steps
    bool cap_exceeded = false;
    bool contraction_ok = true;    // |d_{P,j}| < 3^{1-j}
    double short_length = 0.0;
};

FillingResult postcritical_filling(const BoxMapping& phi, const InducingOptions& opt = {});

BoxMapping pullback_star(const BoxMapping& phi, const FillingResult& inf,
                         const std::vector<Branch>& hV, const InducingOptions& opt,
                         double* truncated);

struct ComplexBranch {
    int m = 0;
    Itinerary J;  // f^m maps J onto V
    double Jlo = 0.0, Jhi = 0.0;
    double diam = 0.0;
    double im_lo = 0.0, im_hi = 0.0;
    double log_inf = 0.0, log_sup = 0.0;  // log|phi'| on W
};

struct CantorRepeller {
    double c = 0.0, epsilon = 0.0, p = 0.0, q = 0.0;
    double Vlo = 0.0, Vhi = 0.0, Zlo = 0.0, Zhi = 0.0;
    std::vector<Branch> branches;  // real branches onto V
    int K = 1;
    bool has_W = false;
    ComplexBranch W;
    double C1 = 0.0;
    double coverage = 0.0;
    // measure ledger
    double untracked = 0.0, truncated = 0.0, short_measure = 0.0, central_measure = 0.0,
           dropped_by_retention = 0.0;
    int n0 = 0;
    int filling_steps = 0;

    double Vlen() const { return Vhi - Vlo; }
    double measured_C() const;
};

CantorRepeller assemble_repeller(const BoxMapping& star, const BoxMapping& phi,
                                 const InducingOptions& opt);

CantorRepeller build_repeller(double c, const InducingOptions& opt = {});

// Complex inverse branches on the range disk D_V.
cplx repeller_inverse(const CantorRepeller& rep, const Branch& b, cplx z, double* log_deriv);
cplx W_inverse(const CantorRepeller& rep, cplx z, double* log_deriv);
Polygon branch_disk(const CantorRepeller& rep, const Branch& b, int samples = 64);
Polygon W_disk(const CantorRepeller& rep, int samples = 64);

struct TailHistogram {
    int first_bin = 0;
    std::vector<long> counts;
    double slope = 0.0;
    bool fitted = false;
};

TailHistogram branch_tail_histogram(const CantorRepeller& rep);

struct RepellerCheck {
    bool itineraries_ok = true;   // stored domains equal pull-backs of V
    bool landing_ok = true;       // f^n(midpoint) lands in V
    bool brackets_ok = true;      // log_inf <= log|phi'(mid)| <= log_sup
    bool disjoint_ok = true;
    bool nonadjacent_ok = true;
    bool coverage_ok = true;
    bool expansion_ok = true;     // min inf|phi'| >= 2
    bool W_ok = true;             // diam W / sqrt(eps) in [1e-2, 1e2] and f(W) real trace in (-p, c)
    bool tail_ok = true;          // tail slope < 1
    double coverage_ratio = 0.0;
    double measured_C = 0.0;
    double min_inf_deriv = 0.0;
    double diam_W_over_sqrt_eps = 0.0;
    double tail_slope = 0.0;
    double max_distortion = 0.0;  // sup|phi'| / inf|phi'| over real branches
    std::string first_failure;

    bool ok() const {
        return itineraries_ok && landing_ok && brackets_ok && disjoint_ok && nonadjacent_ok &&
               coverage_ok && expansion_ok && W_ok && tail_ok;
    }
};

RepellerCheck check_repeller(const CantorRepeller& rep, int disk_samples = 64);

std::string repeller_to_json(const CantorRepeller& rep);
CantorRepeller repeller_from_json(const std::string& text);

}  // namespace juliadim
