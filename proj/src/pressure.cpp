#include "juliadim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace juliadim {

cplx InverseBranch::apply(double c, cplx z, double* log_deriv) const {
    switch (kind) {
        case BranchKind::Affine:
            if (log_deriv) *log_deriv += std::log(std::abs(a));
            return a * z + b;
        case BranchKind::Word:
            return pull_back(c, itin, z, log_deriv);
        case BranchKind::Imag: {
            double ld = 0.0;
            cplx w = pull_back(c, itin, z, &ld);
            cplx r = std::sqrt(c - w);
            ld -= std::log(2.0 * std::abs(r));
            if (log_deriv) *log_deriv += ld;
            return cplx(0.0, 1.0) * r;
        }
    }
    return z;
}

bool BranchSystem::is_real() const {
    return std::none_of(branches.begin(), branches.end(),
                        [](const InverseBranch& b) { return b.kind == BranchKind::Imag; });
}

BranchSystem linear_system(const std::vector<double>& ratios) {
    if (ratios.empty()) throw std::invalid_argument("linear_system: no ratios");
    BranchSystem s;
    s.lo = 0.0;
    s.hi = 1.0;
    const std::size_t k = ratios.size();
    for (std::size_t i = 0; i < k; ++i) {
        double r = ratios[i];
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("linear_system: ratios must be in (0,1)");
        InverseBranch br;
        br.kind = BranchKind::Affine;
        br.a = r;
        // spread the images evenly; they stay inside [0, 1] even if they overlap
        br.b = k == 1 ? 0.0 : (1.0 - r) * static_cast<double>(i) / static_cast<double>(k - 1);
        br.log_inf = br.log_sup = std::log(r);
        s.branches.push_back(br);
    }
    return s;
}

BranchSystem exterior_system(double c) {
    if (!(c < -2.0)) throw std::invalid_argument("exterior_system: needs c < -2");
    BranchSystem s;
    s.c = c;
    double p = real_fixed_points(c).p;
    s.lo = -p;
    s.hi = p;
    for (std::int8_t sign : {std::int8_t(-1), std::int8_t(1)}) {
        InverseBranch br;
        br.kind = BranchKind::Word;
        br.itin = {sign};
        LogBounds lb = pull_back_log_bounds(c, br.itin, s.lo, s.hi);
        br.log_inf = lb.lo;
        br.log_sup = lb.hi;
        s.branches.push_back(br);
    }
    return s;
}

BranchSystem repeller_system(const CantorRepeller& rep, bool with_W) {
    BranchSystem s;
    s.c = rep.c;
    s.lo = rep.Vlo;
    s.hi = rep.Vhi;
    for (const Branch& b : rep.branches) {
        InverseBranch br;
        br.kind = BranchKind::Word;
        br.itin = b.itin;
        br.log_inf = -b.log_sup;
        br.log_sup = -b.log_inf;
        s.branches.push_back(std::move(br));
    }
    if (with_W) {
        if (!rep.has_W) throw std::invalid_argument("repeller_system: repeller has no complex branch");
        InverseBranch br;
        br.kind = BranchKind::Imag;
        br.itin = rep.W.J;
        br.log_inf = -rep.W.log_sup;
        br.log_sup = -rep.W.log_inf;
        s.branches.push_back(std::move(br));
        s.imag_height = std::max(std::abs(rep.W.im_lo), std::abs(rep.W.im_hi));
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

struct WordState {
    double a, b;     // current interval
    double loglen;   // exact log length, carried without cancellation
    double lo, hi;   // bracketed log lengths
};

WordState step(const BranchSystem& sys, const InverseBranch& br, WordState s) {
    switch (br.kind) {
        case BranchKind::Affine: {
            double x = br.a * s.a + br.b, y = br.a * s.b + br.b;
            s.a = std::min(x, y);
            s.b = std::max(x, y);
            s.loglen += std::log(br.a);
            s.lo += br.log_inf;
            s.hi += br.log_sup;
            break;
        }
        case BranchKind::Word:
            for (auto k = br.itin.size(); k-- > 0;) {
                double ra = std::sqrt(std::max(s.a - sys.c, 0.0));
                double rb = std::sqrt(std::max(s.b - sys.c, 0.0));
                s.loglen -= std::log(ra + rb);  // (b - a) / (ra + rb) is the new length
                // |G'| = 1/(2 sqrt(y - c)) over the current interval
                s.lo -= std::log(2.0 * rb);
                s.hi -= std::log(2.0 * ra);
                if (br.itin[k] < 0) {
                    s.a = -rb;
                    s.b = -ra;
                } else {
                    s.a = ra;
                    s.b = rb;
                }
            }
            break;
        case BranchKind::Imag:
            throw std::invalid_argument("word sums need a real branch system");
    }
    return s;
}

double log_sum_exp(const std::vector<double>& x, double t) {
    if (x.empty()) return kNegInf;
    double m = kNegInf;
    for (double v : x) m = std::max(m, t * v);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double v : x) s += std::exp(t * v - m);
    return m + std::log(s);
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double tol,
                   bool* monotone) {
    double fa = f(a), fb = f(b);
    while (b - a > tol) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (monotone && !(fm <= fa && fm >= fb)) *monotone = false;
        if (fm > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

WordTable enumerate_words(const BranchSystem& sys, int n, std::size_t budget) {
    if (n < 0) throw std::invalid_argument("enumerate_words: negative depth");
    if (!sys.is_real()) throw std::invalid_argument("word sums need a real branch system");
    const std::size_t k = sys.branches.size();
    double count = std::pow(static_cast<double>(k), n);
    if (count > static_cast<double>(budget))
        throw std::length_error("enumerate_words: word budget exceeded");

    WordTable w;
    w.depth = n;
    w.mid.reserve(static_cast<std::size_t>(count));
    w.lo.reserve(static_cast<std::size_t>(count));
    w.hi.reserve(static_cast<std::size_t>(count));
    const double L = std::log(sys.range_len());

    std::vector<WordState> st(n + 1);
    st[0] = {sys.lo, sys.hi, L, L, L};
    if (n == 0) {
        w.mid.push_back(L);
        w.lo.push_back(L);
        w.hi.push_back(L);
        return w;
    }
    // odometer over branch indices; level j holds the state after j letters
    std::vector<std::size_t> idx(n, 0);
    int level = 0;
    while (level >= 0) {
        if (idx[level] == k) {
            idx[level] = 0;
            --level;
            if (level >= 0) ++idx[level];
            continue;
        }
        st[level + 1] = step(sys, sys.branches[idx[level]], st[level]);
        if (level + 1 == n) {
            w.mid.push_back(st[n].loglen);
            w.lo.push_back(st[n].lo);
            w.hi.push_back(st[n].hi);
            ++idx[level];
        } else {
            ++level;
        }
    }
    return w;
}

QSum qsum(const WordTable& words, double t) {
    double a = log_sum_exp(words.lo, t), b = log_sum_exp(words.hi, t);
    return {std::min(a, b), log_sum_exp(words.mid, t), std::max(a, b)};
}

QSum qsum(const BranchSystem& sys, int n, double t) { return qsum(enumerate_words(sys, n), t); }

namespace {

double pressure_variant(const WordTable& a, const WordTable& b, double t, int which) {
    const std::vector<double>& xa = which < 0 ? a.lo : (which > 0 ? a.hi : a.mid);
    const std::vector<double>& xb = which < 0 ? b.lo : (which > 0 ? b.hi : b.mid);
    return (log_sum_exp(xb, t) - log_sum_exp(xa, t)) / (b.depth - a.depth);
}

}  // namespace

PressureValue pressure(const WordTable& w_lo, const WordTable& w_hi, double t) {
    if (!(w_hi.depth > w_lo.depth)) throw std::invalid_argument("pressure: need n_lo < n_hi");
    double m = pressure_variant(w_lo, w_hi, t, 0);
    double a = pressure_variant(w_lo, w_hi, t, -1), b = pressure_variant(w_lo, w_hi, t, 1);
    return {m, std::min({a, b, m}), std::max({a, b, m})};
}

PressureValue pressure(const BranchSystem& sys, double t, int n_lo, int n_hi) {
    return pressure(enumerate_words(sys, n_lo), enumerate_words(sys, n_hi), t);
}

PressureCurve pressure_curve(const BranchSystem& sys, const std::vector<double>& ts, int n_lo,
                             int n_hi) {
    WordTable a = enumerate_words(sys, n_lo), b = enumerate_words(sys, n_hi);
    PressureCurve pc;
    pc.ts = ts;
    for (double t : ts) {
        for (const WordTable* w : {&a, &b})
            if (w->depth > 0)
                pc.samples.push_back({t, w->depth, log_sum_exp(w->mid, t) / w->depth});
        pc.extrapolated.push_back(pressure(a, b, t));
    }
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        if (ts[i + 1] > ts[i] && !(pc.extrapolated[i + 1].value < pc.extrapolated[i].value))
            pc.monotone = false;
    return pc;
}

const char* dim_method_name(DimMethod m) {
    switch (m) {
        case DimMethod::qsum_bisection: return "qsum-bisection";
        case DimMethod::transfer_eigenvalue: return "transfer-eigenvalue";
        case DimMethod::harmonic_lower: return "harmonic-lower";
        default: return "moran-oracle";
    }
}

DimensionEstimate dimension(const BranchSystem& sys, double tol, int n_lo, int n_hi) {
    const double k = static_cast<double>(sys.branches.size());
    if (sys.branches.size() < 2) throw std::invalid_argument("dimension: need at least two branches");
    if (n_hi <= 0) {
        n_hi = 1;
        while (std::pow(k, n_hi + 1) <= 2e4) ++n_hi;
        n_lo = n_hi / 2;
    }
    if (!(n_lo >= 0 && n_lo < n_hi)) throw std::invalid_argument("dimension: need 0 <= n_lo < n_hi");
    WordTable a = enumerate_words(sys, n_lo), b = enumerate_words(sys, n_hi);

    double t_hi = 2.0;
    auto P = [&](double t) { return pressure_variant(a, b, t, 0); };
    double p0 = P(0.0), p2 = P(t_hi);
    if (!(p0 > 0.0))
        throw std::runtime_error("dimension: bracket failure, P(0) = " + std::to_string(p0));
    // linear systems with large ratios can have their root above 2
    while (!(p2 < 0.0) && t_hi < 64.0) {
        t_hi *= 2.0;
        p2 = P(t_hi);
    }
    if (!(p2 < 0.0))
        throw std::runtime_error("dimension: bracket failure, P(0) = " + std::to_string(p0) +
                                 ", P(" + std::to_string(t_hi) + ") = " + std::to_string(p2));

    DimensionEstimate d;
    d.method = DimMethod::qsum_bisection;
    d.depth = n_hi;
    d.value = bisect_root(P, 0.0, t_hi, tol, &d.monotone);
    double r_lo = d.value, r_hi = d.value;
    for (int which : {-1, 1}) {
        auto Pv = [&](double t) { return pressure_variant(a, b, t, which); };
        if (Pv(0.0) > 0.0 && Pv(t_hi) < 0.0) {
            double r = bisect_root(Pv, 0.0, t_hi, tol, nullptr);
            r_lo = std::min(r_lo, r);
            r_hi = std::max(r_hi, r);
        }
    }
    d.lo = std::min(r_lo, d.value - 0.5 * tol);
    d.hi = std::max(r_hi, d.value + 0.5 * tol);
    return d;
}

double moran_oracle(const std::vector<double>& ratios, double tol) {
    if (ratios.empty()) throw std::invalid_argument("moran_oracle: no ratios");
    auto f = [&](double s, double* df) {
        double v = -1.0, d = 0.0;
        for (double r : ratios) {
            double p = std::pow(r, s);
            v += p;
            d += p * std::log(r);
        }
        if (df) *df = d;
        return v;
    };
    if (ratios.size() == 1) return 0.0;
    double a = 0.0, b = 1.0;
    while (f(b, nullptr) > 0.0) b *= 2.0;
    double s = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        double df = 0.0, v = f(s, &df);
        if (v > 0.0) a = s;
        else b = s;
        double nx = s - v / df;
        if (!(nx > a && nx < b)) nx = 0.5 * (a + b);  // Newton left the bracket
        if (std::abs(nx - s) < tol) return nx;
        s = nx;
    }
    return s;
}

double preimage_log_sum(const BranchSystem& sys, cplx z, int n, double t) {
    std::vector<double> terms;
    std::function<void(cplx, double, int)> rec = [&](cplx w, double ld, int depth) {
        if (depth == n) {
            terms.push_back(ld);
            return;
        }
        for (const InverseBranch& br : sys.branches) {
            double l = ld;
            cplx y = br.apply(sys.c, w, &l);
            rec(y, l, depth + 1);
        }
    };
    rec(z, 0.0, 0);
    return log_sum_exp(terms, t);
}

// ---------------------------------------------------------------------------

ExteriorDimension dimension_exterior(double c, double tol, int n_lo, int n_hi) {
    if (!(c < -2.0)) throw std::invalid_argument("dimension_exterior: needs c < -2");
    ExteriorDimension r;
    r.dim = dimension(exterior_system(c), tol, n_lo, n_hi);
    GreenResult g = green_function(c);
    r.green = g.value;
    r.harmonic_bound = std::log(2.0) / (std::log(2.0) + g.value);
    return r;
}

namespace {

// sum over period-n points of |(f^n)'|^{-t}, as a function of t; returns log-derivatives
std::vector<double> periodic_log_derivs(cplx c, int n) {
    const std::uint64_t M = (std::uint64_t(1) << n) - 1;
    std::vector<double> out;
    out.reserve(M);
    std::vector<cplx> dir(n);
    std::vector<cplx> orbit(n);
    for (std::uint64_t j = 0; j < M; ++j) {
        // angles theta_k = 2^k j / M mod 1, exactly
        std::uint64_t num = j;
        for (int k = 0; k < n; ++k) {
            double th = static_cast<double>(num) / static_cast<double>(M);
            dir[k] = std::polar(1.0, 2.0 * std::numbers::pi * th);
            num = (2 * num) % M;
        }
        cplx z = dir[0];
        bool converged = false;
        for (int cyc = 0; cyc < 200; ++cyc) {
            cplx w = z;
            for (int k = n - 1; k >= 0; --k) {
                cplx r = std::sqrt(w - c);
                if (std::real(r * std::conj(dir[k])) < 0.0) r = -r;
                w = r;
                orbit[k] = w;
            }
            double diff = std::abs(w - z);
            z = w;
            if (diff < 1e-14) {
                converged = true;
                break;
            }
        }
        if (!converged) throw std::runtime_error("dimension_quasicircle: inverse iteration did not converge");
        double ld = 0.0;
        for (int k = 0; k < n; ++k) ld += std::log(2.0 * std::abs(orbit[k]));
        out.push_back(ld);
    }
    return out;
}

double periodic_root(const std::vector<double>& ld, double tol) {
    auto F = [&](double t) { return log_sum_exp(ld, -t); };
    double hi = 3.0;
    if (!(F(0.0) > 0.0) || !(F(hi) < 0.0))
        throw std::runtime_error("dimension_quasicircle: bracket failure");
    return bisect_root(F, 0.0, hi, tol, nullptr);
}

}  // namespace

DimensionEstimate dimension_quasicircle(cplx c, int n, double tol) {
    if (!(std::abs(c) <= 0.25)) throw std::invalid_argument("dimension_quasicircle: needs |c| <= 1/4");
    if (n < 3 || n > 24) throw std::invalid_argument("dimension_quasicircle: depth must be in [3, 24]");
    DimensionEstimate d;
    d.method = DimMethod::qsum_bisection;
    d.depth = n;
    d.value = periodic_root(periodic_log_derivs(c, n), tol);
    double prev = periodic_root(periodic_log_derivs(c, n - 1), tol);
    d.lo = std::min(d.value, prev);
    d.hi = std::max(d.value, prev);
    return d;
}

}  // namespace juliadim
