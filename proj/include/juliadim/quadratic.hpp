#pragma once

#include <complex>
#include <limits>
#include <vector>

namespace juliadim {

using cplx = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kDefaultC0 = -1.75;

enum class Regime { exterior, tip, small, other };

const char* regime_name(Regime r);

struct Parameter {
    cplx c;
    bool real = true;
    double epsilon = 0.0;  // c + 2 for real c, |c + 2| otherwise
    Regime regime = Regime::other;

    double re() const { return c.real(); }
};

Parameter make_parameter(double c, double c0 = kDefaultC0);
Parameter make_parameter(cplx c, double c0 = kDefaultC0);

struct FixedPair {
    cplx p, q;
};

FixedPair fixed_points(const Parameter& param);

// Real shortcut used all over the place. Requires c <= 1/4.
struct RealFixed {
    double p, q;
};
RealFixed real_fixed_points(double c);

struct CriticalOrbit {
    std::vector<double> points;     // f^k(c), k = 0..N (may hold +-inf after escape)
    std::vector<double> log_deriv;  // S_n, n = 0..N, -inf once a factor vanished
    bool membership_violation = false;
};

CriticalOrbit critical_orbit(double c, int N);

struct CeMargin {
    double margin;
    double deviation;  // |margin - log 2|
};

CeMargin ce_margin(const CriticalOrbit& orbit, double omega_prime = 1.0);

struct GreenResult {
    double value = 0.0;
    int steps = 0;
    bool bounded = false;
    bool flagged = false;  // depth exhausted with no verdict
};

GreenResult green_function(cplx c, double escape_radius = 1e8, int max_depth = 10000);
inline GreenResult green_function(double c) { return green_function(cplx(c, 0.0)); }

struct TechnicalSequences {
    double delta, gamma, alpha;
};

TechnicalSequences technical_sequences(int n, double omega, double omega_prime);

struct SequenceSums {
    double inv_gamma_sum;
    double delta_sum;
    bool ok;  // inv_gamma_sum < 1/64 and delta_sum < 1/2
};

SequenceSums technical_sequence_sums(double omega, double omega_prime, int depth = 1000000);

inline double fc(double x, double c) { return x * x + c; }

}  // namespace juliadim
