#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdint>
#include <stdexcept>

#include "juliadim/pressure.hpp"

namespace juliadim {

namespace {

struct Cheb {
    std::vector<double> x, w;
};

Cheb cheb_nodes(double lo, double hi, int N) {
    Cheb c;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = 0; k < N; ++k) {
        double th = (2 * k + 1) * std::numbers::pi / (2.0 * N);
        c.x.push_back(mid + half * std::cos(th));
        c.w.push_back((k % 2 ? -1.0 : 1.0) * std::sin(th));
    }
    return c;
}

// barycentric interpolation weights of the point x against the nodes
void interp_row(const Cheb& c, double x, double* row) {
    const int N = static_cast<int>(c.x.size());
    for (int k = 0; k < N; ++k)
        if (x == c.x[k]) {
            std::fill(row, row + N, 0.0);
            row[k] = 1.0;
            return;
        }
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
        row[k] = c.w[k] / (x - c.x[k]);
        s += row[k];
    }
    for (int k = 0; k < N; ++k) row[k] /= s;
}

// Branch images and log-derivatives on the nodes do not depend on t; cache them.
struct Grid {
    bool two_d = false;
    Cheb gx, gy;
    std::vector<cplx> nodes;
    std::vector<double> rx, ry;  // [branch][node][nx or ny]
    std::vector<double> ld;      // [branch][node]
    std::size_t nb = 0;
};

Grid build_grid(const BranchSystem& sys, const TransferOptions& opt) {
    if (opt.nx < 2) throw std::invalid_argument("transfer: need at least 2 nodes");
    Grid g;
    g.two_d = !sys.is_real();
    g.gx = cheb_nodes(sys.lo, sys.hi, opt.nx);
    double h = 0.0;
    if (g.two_d) {
        h = opt.height_factor * sys.imag_height;
        if (!(h > 0.0)) throw std::invalid_argument("transfer: complex branch without height");
        g.gy = cheb_nodes(-h, h, opt.ny);
    } else {
        g.gy = {{0.0}, {1.0}};
    }
    const int nx = opt.nx, ny = static_cast<int>(g.gy.x.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) g.nodes.emplace_back(g.gx.x[i], g.gy.x[j]);
    const std::size_t n = g.nodes.size();
    g.nb = sys.branches.size();
    g.rx.resize(g.nb * n * nx);
    g.ry.resize(g.nb * n * ny);
    g.ld.resize(g.nb * n);
    for (std::size_t b = 0; b < g.nb; ++b)
        for (std::size_t k = 0; k < n; ++k) {
            double ld = 0.0;
            cplx y = sys.branches[b].apply(sys.c, g.nodes[k], &ld);
            g.ld[b * n + k] = ld;
            interp_row(g.gx, y.real(), &g.rx[(b * n + k) * nx]);
            if (g.two_d) interp_row(g.gy, y.imag(), &g.ry[(b * n + k) * ny]);
            else g.ry[b * n + k] = 1.0;
        }
    return g;
}

std::vector<double> assemble(const Grid& g, double t) {
    const std::size_t n = g.nodes.size(), nx = g.gx.x.size(), ny = g.gy.x.size();
    std::vector<double> M(n * n, 0.0);
    for (std::size_t b = 0; b < g.nb; ++b)
        for (std::size_t k = 0; k < n; ++k) {
            double wgt = std::exp(t * g.ld[b * n + k]);
            const double* rx = &g.rx[(b * n + k) * nx];
            const double* ry = &g.ry[(b * n + k) * ny];
            double* row = &M[k * n];
            for (std::size_t j = 0; j < ny; ++j) {
                double wy = wgt * ry[j];
                for (std::size_t i = 0; i < nx; ++i) row[j * nx + i] += wy * rx[i];
            }
        }
    return M;
}

// dominant eigenpair by power iteration
double power_iterate(const std::vector<double>& M, std::size_t n, std::vector<double>& v,
                     int max_iter, double tol, int* iters) {
    v.assign(n, 1.0);
    std::vector<double> w(n);
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += M[i * n + j] * v[j];
            w[i] = s;
        }
        // normalise by the entry of largest modulus, keeping its sign
        std::size_t im = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(w[i]) > std::abs(w[im])) im = i;
        double nl = w[im] / v[im];
        double scale = w[im];
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= scale;
            change = std::max(change, std::abs(w[i] - v[i]));
        }
        v.swap(w);
        bool done = it > 1 && std::abs(nl - lambda) <= tol * std::abs(nl) && change <= 1e3 * tol;
        lambda = nl;
        if (done) {
            if (iters) *iters = it;
            return lambda;
        }
    }
    throw std::runtime_error("transfer: power iteration did not converge");
}

// Left Perron vector of the hat-function collocation on a uniform grid.
void conformal_weights(const BranchSystem& sys, double t, const TransferOptions& opt,
                       TransferResult& r) {
    const bool two_d = !sys.is_real();
    const int nx = std::max(opt.nu_nx, 2), ny = two_d ? std::max(opt.nu_ny | 1, 3) : 1;
    const double h = two_d ? opt.height_factor * sys.imag_height : 0.0;
    const double dx = (sys.hi - sys.lo) / (nx - 1), dy = two_d ? 2.0 * h / (ny - 1) : 1.0;
    r.nu_nodes.clear();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            r.nu_nodes.emplace_back(sys.lo + i * dx, two_d ? -h + j * dy : 0.0);
    const std::size_t n = r.nu_nodes.size();

    struct Entry {
        std::uint32_t from, to;
        double v;
    };
    std::vector<Entry> E;
    for (std::size_t k = 0; k < n; ++k)
        for (const InverseBranch& br : sys.branches) {
            double ld = 0.0;
            cplx y = br.apply(sys.c, r.nu_nodes[k], &ld);
            double w = std::exp(t * ld);
            double fx = std::clamp((y.real() - sys.lo) / dx, 0.0, nx - 1.0);
            double fy = two_d ? std::clamp((y.imag() + h) / dy, 0.0, ny - 1.0) : 0.0;
            int i0 = std::min(static_cast<int>(fx), nx - 2);
            int j0 = two_d ? std::min(static_cast<int>(fy), ny - 2) : 0;
            double ax = fx - i0, ay = fy - j0;
            for (int dj = 0; dj < (two_d ? 2 : 1); ++dj)
                for (int di = 0; di < 2; ++di) {
                    double v = w * (di ? ax : 1.0 - ax) * (two_d ? (dj ? ay : 1.0 - ay) : 1.0);
                    if (v > 0.0)
                        E.push_back({static_cast<std::uint32_t>(k),
                                     static_cast<std::uint32_t>((j0 + dj) * nx + i0 + di), v});
                }
        }

    std::vector<double> nu(n, 1.0 / n), nx_(n);
    double lambda = 0.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        std::fill(nx_.begin(), nx_.end(), 0.0);
        for (const Entry& e : E) nx_[e.to] += nu[e.from] * e.v;
        double s = 0.0;
        for (double x : nx_) s += x;
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nx_[i] /= s;
            change += std::abs(nx_[i] - nu[i]);
        }
        nu.swap(nx_);
        lambda = s;
        if (change < 1e-12) break;
    }
    r.nu = std::move(nu);
    r.nu_lambda = lambda;
}

TransferResult eigen(const Grid& g, double t, const TransferOptions& opt) {
    TransferResult r;
    const std::size_t n = g.nodes.size();
    std::vector<double> M = assemble(g, t);
    r.lambda = power_iterate(M, n, r.h, opt.max_iter, opt.tol, &r.iterations);
    r.nodes = g.nodes;
    double hmax = *std::max_element(r.h.begin(), r.h.end());
    for (double& x : r.h) x /= hmax;
    r.min_h = *std::min_element(r.h.begin(), r.h.end());
    return r;
}

}  // namespace

TransferResult transfer_eigenvalue(const BranchSystem& sys, double t, const TransferOptions& opt) {
    TransferResult r = eigen(build_grid(sys, opt), t, opt);
    conformal_weights(sys, t, opt, r);
    return r;
}

DimensionEstimate dimension_transfer(const BranchSystem& sys, double tol, const TransferOptions& opt) {
    Grid g = build_grid(sys, opt);
    auto F = [&](double t) { return std::log(eigen(g, t, opt).lambda); };

    double a = 0.0, b = 2.0;
    double fa = F(a), fb = F(b);
    if (!(fa > 0.0)) throw std::runtime_error("dimension_transfer: log lambda(0) <= 0");
    while (!(fb < 0.0) && b < 64.0) {
        a = b;
        fa = fb;
        b *= 2.0;
        fb = F(b);
    }
    if (!(fb < 0.0)) throw std::runtime_error("dimension_transfer: bracket failure");

    // Illinois variant of regula falsi
    int side = 0;
    double t = a;
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        t = (a * fb - b * fa) / (fb - fa);
        double ft = F(t);
        if (ft == 0.0) {
            a = b = t;
            break;
        }
        if (ft > 0.0) {
            a = t;
            fa = ft;
            if (side == 1) fb *= 0.5;
            side = 1;
        } else {
            b = t;
            fb = ft;
            if (side == -1) fa *= 0.5;
            side = -1;
        }
        if (std::abs(ft) < 1e-15) break;
    }

    DimensionEstimate d;
    d.method = DimMethod::transfer_eigenvalue;
    d.depth = static_cast<int>(g.nodes.size());
    if (b - a <= tol) {
        d.value = 0.5 * (a + b);
        d.lo = a;
        d.hi = b;
    } else {
        // converged on one side only; confirm a sign change around the estimate
        d.value = t;
        d.lo = t - tol;
        d.hi = t + tol;
        double fl = F(d.lo), fh = F(d.hi);
        d.monotone = fl >= fh;
        if (!(fl >= 0.0 && fh <= 0.0)) {
            d.lo = a;
            d.hi = b;
        }
    }
    return d;
}

RepellerDimension dimension_repeller(const CantorRepeller& rep, double tol, const TransferOptions& opt) {
    RepellerDimension r;
    r.branch_count = rep.branches.size() + (rep.has_W ? 1 : 0);
    r.real_only = dimension_transfer(repeller_system(rep, false), tol, opt);
    if (rep.has_W) r.full = dimension_transfer(repeller_system(rep, true), tol, opt);
    else r.full = r.real_only;
    return r;
}

}  // namespace juliadim
