#include "juliadim/quadratic.hpp"

#include <cmath>
#include <stdexcept>

namespace juliadim {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::exterior: return "exterior";
        case Regime::tip: return "tip";
        case Regime::small: return "small";
        default: return "other";
    }
}

Parameter make_parameter(double c, double c0) {
    if (!std::isfinite(c)) throw std::invalid_argument("parameter must be finite");
    Parameter p;
    p.c = cplx(c, 0.0);
    p.real = true;
    p.epsilon = c + 2.0;
    if (c < -2.0)
        p.regime = Regime::exterior;
    else if (c > -2.0 && c <= c0)
        p.regime = Regime::tip;
    else if (std::abs(c) < 0.25)
        p.regime = Regime::small;
    else
        p.regime = Regime::other;
    return p;
}

Parameter make_parameter(cplx c, double c0) {
    if (c.imag() == 0.0) return make_parameter(c.real(), c0);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("parameter must be finite");
    Parameter p;
    p.c = c;
    p.real = false;
    p.epsilon = std::abs(c + 2.0);
    p.regime = std::abs(c) < 0.25 ? Regime::small : Regime::other;
    return p;
}

FixedPair fixed_points(const Parameter& param) {
    // Principal root keeps p the "+" root; on the real line this is the
    // orientation-preserving one.
    cplx r = std::sqrt(1.0 - 4.0 * param.c);
    return {(1.0 + r) / 2.0, (1.0 - r) / 2.0};
}

RealFixed real_fixed_points(double c) {
    if (c > 0.25) throw std::invalid_argument("real fixed points need c <= 1/4");
    double r = std::sqrt(1.0 - 4.0 * c);
    return {(1.0 + r) / 2.0, (1.0 - r) / 2.0};
}

CriticalOrbit critical_orbit(double c, int N) {
    if (N < 1) throw std::invalid_argument("critical_orbit: N must be >= 1");
    CriticalOrbit o;
    o.points.resize(N + 1);
    o.log_deriv.resize(N + 1);
    o.log_deriv[0] = 0.0;

    const bool in_m_range = c >= -2.0 && c <= 0.25;
    double z = c;
    double lz = std::log(std::abs(z));  // tracked separately once z overflows
    bool huge = false;
    o.points[0] = z;
    for (int k = 0; k < N; ++k) {
        double S = o.log_deriv[k];
        if (S != kNegInf) {
            if (!huge && z == 0.0)
                S = kNegInf;
            else
                S += std::log(2.0) + (huge ? lz : std::log(std::abs(z)));
        }
        o.log_deriv[k + 1] = S;

        if (!huge && std::abs(z) < 1e150) {
            z = z * z + c;
            lz = std::log(std::abs(z));
        } else {
            huge = true;
            lz *= 2.0;
            z = std::numeric_limits<double>::infinity();
        }
        o.points[k + 1] = z;
        if (in_m_range && std::abs(z) > 2.0) o.membership_violation = true;
    }
    return o;
}

CeMargin ce_margin(const CriticalOrbit& orbit, double omega_prime) {
    if (orbit.log_deriv.size() < 11)
        throw std::invalid_argument("ce_margin: need at least 10 log-derivative entries");
    if (!(omega_prime > 0.0)) throw std::invalid_argument("ce_margin: omega_prime must be > 0");
    double lo = std::log(omega_prime);
    double best = std::numeric_limits<double>::infinity();
    const int N = static_cast<int>(orbit.log_deriv.size()) - 1;
    for (int n = 1; n <= N; ++n) {
        double S = orbit.log_deriv[n];
        if (S == kNegInf) return {kNegInf, std::numeric_limits<double>::infinity()};
        best = std::min(best, (S - lo) / n);
    }
    return {best, std::abs(best - std::log(2.0))};
}

GreenResult green_function(cplx c, double escape_radius, int max_depth) {
    GreenResult g;
    cplx z = c;
    const double certain = std::max(2.0, std::abs(c));
    double scale = 1.0;  // 2^-n
    for (int n = 0; n <= max_depth; ++n) {
        double az = std::abs(z);
        if (az > escape_radius && az > certain) {
            g.value = scale * std::log(az);
            g.steps = n;
            return g;
        }
        if (n == max_depth) break;
        z = z * z + c;
        scale *= 0.5;
    }
    g.steps = max_depth;
    if (std::abs(z) <= 2.0) {
        g.bounded = true;
        g.value = 0.0;
    } else {
        g.flagged = true;
        g.value = scale * std::log(std::abs(z));
    }
    return g;
}

TechnicalSequences technical_sequences(int n, double omega, double omega_prime) {
    if (n < 1) throw std::invalid_argument("technical_sequences: n must be >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("technical_sequences: omega must be > 0");
    TechnicalSequences t;
    double nn = static_cast<double>(n);
    t.delta = 1.0 / (8.0 * nn * nn);
    double grow = std::exp(nn * omega / 4.0);
    t.gamma = 64.0 * grow / (1.0 - std::exp(-omega / 4.0));
    t.alpha = (1.0 - std::exp(-omega)) * std::sqrt(t.delta * omega_prime) * grow / 16.0;
    return t;
}

SequenceSums technical_sequence_sums(double omega, double omega_prime, int depth) {
    (void)omega_prime;  // neither sum depends on it
    if (!(omega > 0.0)) throw std::invalid_argument("technical_sequence_sums: omega must be > 0");
    // gamma_n^-1 in log space; terms die quickly, but keep the full loop cheap anyway
    double sg = 0.0, sd = 0.0;
    const double lpref = std::log1p(-std::exp(-omega / 4.0)) - std::log(64.0);
    for (int n = depth; n >= 1; --n) {  // small terms first
        double nn = n;
        double lg = lpref - nn * omega / 4.0;
        if (lg > -745.0) sg += std::exp(lg);
        sd += 1.0 / (8.0 * nn * nn);
    }
    return {sg, sd, sg < 1.0 / 64.0 && sd < 0.5};
}

}  // namespace juliadim
