#include "juliadim/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace juliadim {

namespace {

// Endpoint tags for the first-return search. Image endpoints are always q, -q or
// a point f^k(0) of the critical orbit, so we carry the tag instead of iterating
// the endpoint forward (which would drift away from the repelling point q).
struct Tag {
    enum Kind { Q, NQ, C } kind;
    int k = 0;
};

Tag fwd(Tag t) {
    if (t.kind == Tag::C) return {Tag::C, t.k + 1};
    return {Tag::Q, 0};  // f(q) = f(-q) = q
}

struct Piece {
    Tag lo, hi;
    Itinerary itin;
};

// The per-step bracket is loose on long targets; splitting the target keeps it
// rigorous and much tighter.
LogBounds phi_bounds(double c, const Itinerary& it, double a, double b) {
    constexpr int kPieces = 16;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = 0; k < kPieces; ++k) {
        LogBounds g = pull_back_log_bounds(c, it, a + (b - a) * k / kPieces, a + (b - a) * (k + 1) / kPieces);
        lo = std::min(lo, -g.hi);
        hi = std::max(hi, -g.lo);
    }
    return {lo, hi};
}

void set_bounds(double c, Branch& br, double a, double b) {
    LogBounds lb = phi_bounds(c, br.itin, a, b);
    br.log_inf = lb.lo;
    br.log_sup = lb.hi;
}

Branch mirror(const Branch& b) {
    Branch m = b;
    m.lo = -b.hi;
    m.hi = -b.lo;
    if (!m.itin.empty() && m.itin[0] != 0) m.itin[0] = static_cast<std::int8_t>(-m.itin[0]);
    return m;
}

bool is_gap(const Branch& b) { return b.n == 2 && b.target == Target::U; }

std::vector<double> critical_values(double c, int n) {
    std::vector<double> v(n + 1);
    v[0] = 0.0;
    for (int k = 0; k < n; ++k) v[k + 1] = v[k] * v[k] + c;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// first return to U

BoxMapping first_return_map(double c, const InducingOptions& opt) {
    if (!(c > -2.0 && c <= kDefaultC0))
        throw std::invalid_argument("first_return_map: needs real c in (-2, c0]");
    if (opt.max_time < 2) throw std::invalid_argument("first_return_map: max_time must be >= 2");

    BoxMapping box;
    box.c = c;
    RealFixed fp = real_fixed_points(c);
    box.p = fp.p;
    box.q = fp.q;
    const double q = fp.q;
    const std::vector<double> crit = critical_values(c, opt.max_time + 2);
    auto val = [&](Tag t) {
        return t.kind == Tag::Q ? q : (t.kind == Tag::NQ ? -q : crit[t.k]);
    };

    // Right half (0, -q) only; the map is even.
    std::vector<Branch> half;
    std::vector<Piece> stack{{{Tag::C, 0}, {Tag::NQ, 0}, {1}}};
    double untracked = 0.0;
    bool have_central = false;
    Branch central_half;
    double central_edge = 0.0;
    int central_k = 0;

    while (!stack.empty()) {
        Piece pc = std::move(stack.back());
        stack.pop_back();
        const int k = static_cast<int>(pc.itin.size());
        Tag a = fwd(pc.lo), b = fwd(pc.hi);
        if (pc.itin.back() < 0) std::swap(a, b);  // f reverses order on the left
        const double va = val(a), vb = val(b);

        struct Part {
            bool in;
            Tag ta;
            double xa;
            Tag tb;
            double xb;
        };
        Part parts[3];
        int np = 0;
        if (va < q) parts[np++] = {false, a, va, vb > q ? Tag{Tag::Q, 0} : b, std::min(vb, q)};
        {
            double ilo = std::max(va, q), ihi = std::min(vb, -q);
            if (ihi > ilo)
                parts[np++] = {true, va > q ? a : Tag{Tag::Q, 0}, ilo,
                               vb < -q ? b : Tag{Tag::NQ, 0}, ihi};
        }
        if (vb > -q)
            parts[np++] = {false, va < -q ? Tag{Tag::NQ, 0} : a, std::max(va, -q), b, vb};

        for (int i = 0; i < np; ++i) {
            const Part& pt = parts[i];
            if (!(pt.xb > pt.xa)) continue;
            double d1 = pull_back(c, pc.itin, pt.xa), d2 = pull_back(c, pc.itin, pt.xb);
            double dlo = std::min(d1, d2), dhi = std::max(d1, d2);
            if (pt.in) {
                Branch br;
                br.lo = dlo;
                br.hi = dhi;
                br.n = k;
                br.itin = pc.itin;
                br.target = Target::U;
                bool full = pt.ta.kind == Tag::Q && pt.tb.kind == Tag::NQ;
                if (full) {
                    half.push_back(std::move(br));
                } else {
                    // image runs from the critical value f^k(0) to an edge of U
                    have_central = true;
                    central_half = std::move(br);
                    central_k = pt.ta.kind == Tag::C ? pt.ta.k : pt.tb.k;
                    central_edge = pt.ta.kind == Tag::C ? val(pt.tb) : val(pt.ta);
                }
            } else {
                if (dhi - dlo < opt.min_len * 1e-6 || k >= opt.max_time) {
                    untracked += dhi - dlo;
                    continue;
                }
                Itinerary nx = pc.itin;
                nx.push_back(pt.xa >= 0.0 ? 1 : -1);
                stack.push_back({pt.ta, pt.tb, std::move(nx)});
            }
        }
    }

    for (const Branch& b : half) {
        box.branches.push_back(b);
        box.branches.push_back(mirror(b));
    }
    box.untracked = 2.0 * untracked;
    std::sort(box.branches.begin(), box.branches.end(),
              [](const Branch& x, const Branch& y) { return x.lo < y.lo; });
    for (Branch& b : box.branches) set_bounds(c, b, q, -q);

    if (have_central) {
        double x = std::max(std::abs(central_half.lo), std::abs(central_half.hi));
        box.has_central = true;
        box.central = central_half;
        box.central.lo = -x;
        box.central.hi = x;
        box.central.itin[0] = 0;
        box.central.log_inf = kNegInf;
        box.central.log_sup = phi_bounds(c, central_half.itin, std::min(crit[central_k], central_edge),
                                         std::max(crit[central_k], central_edge)).hi;
        box.central_value = crit[central_k];
        box.central_edge = central_edge;

        // neighbours of the central domain
        int zr = -1;
        for (int i = 0; i < static_cast<int>(box.branches.size()); ++i)
            if (box.branches[i].lo >= x - 1e-12 &&
                (zr < 0 || box.branches[i].lo < box.branches[zr].lo))
                zr = i;
        if (zr < 0) throw std::runtime_error("first_return_map: no branch right of the central one");
        int zl = -1;
        for (int i = 0; i < static_cast<int>(box.branches.size()); ++i)
            if (box.branches[i].hi <= -x + 1e-12 &&
                (zl < 0 || box.branches[i].hi > box.branches[zl].hi))
                zl = i;
        if (zl < 0) throw std::runtime_error("first_return_map: no branch left of the central one");
        box.zeta_l = zl;
        box.zeta_r = zr;
        box.Zlo = box.branches[zl].lo;
        box.Zhi = box.branches[zr].hi;
        box.has_Z = true;
        box.z_over_sqrt_eps = (box.Zhi - box.Zlo) / std::sqrt(c + 2.0);
    }

    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(box.branches.size()); ++i) {
        if (i == box.zeta_l || i == box.zeta_r) continue;
        mn = std::min(mn, box.branches[i].log_inf);
    }
    box.min_log_inf_off_Z = mn;
    return box;
}

void make_V(BoxMapping& box) {
    const Branch* left = nullptr;
    const Branch* right = nullptr;
    for (const Branch& b : box.branches) {
        if (!is_gap(b)) continue;
        if (b.lo < 0.0) left = &b;
        else right = &b;
    }
    if (!left || !right)
        throw std::invalid_argument("make_V: the n = 2 components are missing (c too far from -2)");
    box.Vlo = left->hi;
    box.Vhi = right->lo;
    box.has_V = true;
}

bool boundary_regular(const BoxMapping& box, int steps) {
    if (!box.has_V) throw std::invalid_argument("boundary_regular: V not set");
    const double q = box.q, c = box.c;
    for (double x : {box.Vlo, box.Vhi}) {
        for (int k = 0; k < steps; ++k) {
            x = x * x + c;
            if (std::abs(x - q) < 1e-9) x = q;
            else if (std::abs(x + q) < 1e-9) x = -q;
            if (x > box.Vlo && x < box.Vhi) return false;
        }
    }
    return true;
}

std::vector<Branch> first_entry_V(const BoxMapping& box, double min_len, double* lost) {
    if (!box.has_V) throw std::invalid_argument("first_entry_V: V not set");
    std::vector<const Branch*> gaps;
    for (const Branch& b : box.branches)
        if (is_gap(b)) gaps.push_back(&b);

    Branch idV;
    idV.lo = box.Vlo;
    idV.hi = box.Vhi;
    idV.target = Target::V;

    std::vector<Branch> out;
    double lost_sum = 0.0;
    // words over the gap branches; each word maps its domain onto U
    Branch root;
    root.lo = box.q;
    root.hi = -box.q;
    std::vector<Branch> frontier{root};
    while (!frontier.empty()) {
        Branch w = std::move(frontier.back());
        frontier.pop_back();
        if (w.itin.empty()) out.push_back(idV);
        else out.push_back(compose(box.c, w, idV));
        for (const Branch* g : gaps) {
            Branch ch = compose(box.c, w, *g);
            ch.target = Target::U;
            if (ch.length() < min_len) {
                lost_sum += ch.length();
                continue;
            }
            frontier.push_back(std::move(ch));
        }
    }
    if (lost) *lost = lost_sum;
    return out;
}

// ---------------------------------------------------------------------------
// postcritical filling

FillingResult postcritical_filling(const BoxMapping& phi, const InducingOptions& opt) {
    FillingResult res;
    std::vector<Branch> phi0;
    for (int i = 0; i < static_cast<int>(phi.branches.size()); ++i)
        if (i != phi.zeta_l && i != phi.zeta_r) phi0.push_back(phi.branches[i]);
    if (phi.has_Z) {
        Branch idZ;
        idZ.lo = phi.Zlo;
        idZ.hi = phi.Zhi;
        idZ.target = Target::Z;
        phi0.push_back(idZ);
    }
    res.branches = phi0;
    if (!phi.has_central) return res;

    const double v0 = phi.central_value;
    for (int j = 1;; ++j) {
        auto it = std::find_if(res.branches.begin(), res.branches.end(), [&](const Branch& b) {
            return b.target == Target::U && b.lo < v0 && v0 < b.hi;
        });
        if (it == res.branches.end()) break;
        if (j > opt.filling_cap) {
            res.cap_exceeded = true;
            break;
        }
        Branch d = *it;
        res.sizes.push_back(d.length());
        if (!(d.length() < std::pow(3.0, 1 - j))) res.contraction_ok = false;
        if (d.length() < opt.filling_floor) break;  // resolution floor, d stays long
        res.branches.erase(it);
        for (const Branch& e : phi0) res.branches.push_back(compose(phi.c, d, e));
    }
    for (const Branch& b : res.branches)
        if (b.target == Target::Z) res.short_length += b.length();
    return res;
}

// ---------------------------------------------------------------------------
// pull-back

BoxMapping pullback_star(const BoxMapping& phi, const FillingResult& inf,
                         const std::vector<Branch>& hV, const InducingOptions& opt,
                         double* truncated) {
    const double c = phi.c;
    const double Ul = phi.Ulen();
    double trunc = 0.0;

    BoxMapping star;
    star.c = c;
    star.p = phi.p;
    star.q = phi.q;
    star.Vlo = phi.Vlo;
    star.Vhi = phi.Vhi;
    star.has_V = true;
    star.Zlo = phi.Zlo;
    star.Zhi = phi.Zhi;
    star.has_Z = phi.has_Z;

    // length of a composite is about |a| |b| / |U|; skip the exact pull-back
    // when even a generous estimate is below the floor
    auto emit = [&](std::vector<Branch>& dst, const Branch& a, const Branch& b) {
        double est = a.length() * b.length() / Ul;
        if (est < 0.1 * opt.min_len) {
            trunc += est;
            return;
        }
        Branch r = compose(c, a, b);
        if (r.length() < opt.min_len) {
            trunc += r.length();
            return;
        }
        dst.push_back(std::move(r));
    };

    // V minus Z: h_V after phi on long branches away from the gaps
    for (int i = 0; i < static_cast<int>(phi.branches.size()); ++i) {
        const Branch& a = phi.branches[i];
        if (is_gap(a) || i == phi.zeta_l || i == phi.zeta_r) continue;
        for (const Branch& b : hV) emit(star.branches, a, b);
    }
    if (!phi.has_Z) {
        if (truncated) *truncated = trunc;
        return star;
    }

    // H = h_V o phi_inf, over U
    double L = std::max(phi.branches[phi.zeta_l].length(), phi.branches[phi.zeta_r].length());
    if (phi.has_central) L = std::max(L, phi.central.hi);
    const double floorH = 0.1 * opt.min_len * Ul / L;
    std::vector<Branch> H;
    for (const Branch& e : inf.branches) {
        if (e.target == Target::Z) {
            H.push_back(e);
            continue;
        }
        for (const Branch& b : hV) {
            double est = e.length() * b.length() / Ul;
            if (est < floorH) {
                trunc += est * L / Ul;
                continue;
            }
            H.push_back(compose(c, e, b));
        }
    }

    // zeta_l, zeta_r then H
    for (int zi : {phi.zeta_l, phi.zeta_r})
        for (const Branch& h : H) emit(star.branches, phi.branches[zi], h);

    // central branch then H
    if (phi.has_central) {
        Branch pos = phi.central;
        pos.itin[0] = 1;
        pos.lo = 0.0;
        const double v0 = phi.central_value, edge = phi.central_edge;
        const double ilo = std::min(v0, edge), ihi = std::max(v0, edge);
        for (const Branch& h : H) {
            if (h.hi <= ilo || h.lo >= ihi) continue;  // not in the image of psi
            if (h.lo < v0 && v0 < h.hi) {
                double end = edge > v0 ? h.hi : h.lo;
                double y = std::abs(pull_back(c, pos.itin, end));
                Branch cb;
                cb.lo = -y;
                cb.hi = y;
                cb.n = pos.n + h.n;
                cb.itin = pos.itin;
                cb.itin[0] = 0;
                cb.itin.insert(cb.itin.end(), h.itin.begin(), h.itin.end());
                cb.target = h.target;
                cb.log_inf = kNegInf;
                star.has_central = true;
                star.central = std::move(cb);
                continue;
            }
            // psi is square-root-like near 0, so the linear estimate is not safe here
            Branch r = compose(c, pos, h);
            if (r.length() < opt.min_len) {
                trunc += 2.0 * r.length();
                continue;
            }
            star.branches.push_back(mirror(r));
            star.branches.push_back(std::move(r));
        }
    }
    if (truncated) *truncated = trunc;
    return star;
}

// ---------------------------------------------------------------------------
// assembly

double CantorRepeller::measured_C() const {
    return (1.0 - coverage / Vlen()) / std::pow(epsilon, 0.75);
}

cplx repeller_inverse(const CantorRepeller& rep, const Branch& b, cplx z, double* log_deriv) {
    return pull_back(rep.c, b.itin, z, log_deriv);
}

cplx W_inverse(const CantorRepeller& rep, cplx z, double* log_deriv) {
    double ld = 0.0;
    cplx w = pull_back(rep.c, rep.W.J, z, &ld);
    cplx r = std::sqrt(rep.c - w);  // principal root: c - w stays off the negative axis
    ld -= std::log(2.0 * std::abs(r));
    if (log_deriv) *log_deriv += ld;
    return cplx(0.0, 1.0) * r;
}

Polygon branch_disk(const CantorRepeller& rep, const Branch& b, int samples) {
    Polygon p = circle_polygon(0.5 * (rep.Vlo + rep.Vhi), 0.5 * rep.Vlen(), samples);
    for (cplx& z : p) z = repeller_inverse(rep, b, z, nullptr);
    return p;
}

Polygon W_disk(const CantorRepeller& rep, int samples) {
    Polygon p = circle_polygon(0.5 * (rep.Vlo + rep.Vhi), 0.5 * rep.Vlen(), samples);
    for (cplx& z : p) z = W_inverse(rep, z, nullptr);
    return p;
}

namespace {

void attach_W(CantorRepeller& rep, int max_time, int samples) {
    const std::vector<double> crit = critical_values(rep.c, max_time + 1);
    int m = 0;
    for (int k = 1; k <= max_time; ++k)
        if (crit[k] >= rep.q && crit[k] <= -rep.q) {
            m = k;
            break;
        }
    if (m == 0) return;
    ComplexBranch& W = rep.W;
    W.m = m;
    W.J.assign(m, 1);
    W.J[0] = -1;
    double a = pull_back(rep.c, W.J, rep.Vlo), b = pull_back(rep.c, W.J, rep.Vhi);
    W.Jlo = std::min(a, b);
    W.Jhi = std::max(a, b);
    rep.has_W = true;

    Polygon circ = circle_polygon(0.5 * (rep.Vlo + rep.Vhi), 0.5 * rep.Vlen(), samples);
    Polygon poly;
    double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin;
    for (cplx z : circ) {
        double ld = 0.0;
        poly.push_back(W_inverse(rep, z, &ld));
        lmin = std::min(lmin, ld);
        lmax = std::max(lmax, ld);
    }
    // log|G'| is harmonic on the disk, so its extremes are on the boundary
    W.log_inf = -lmax;
    W.log_sup = -lmin;
    W.diam = polygon_diameter(poly);
    Box bb = bounding_box(poly);
    W.im_lo = bb.y0;
    W.im_hi = bb.y1;
}

std::vector<Branch> retain(std::vector<Branch> longs, double target, double* kept_measure,
                           double* dropped) {
    std::sort(longs.begin(), longs.end(), [](const Branch& a, const Branch& b) {
        if (a.length() != b.length()) return a.length() > b.length();
        return a.lo < b.lo;
    });
    double acc = 0.0, rest = 0.0;
    std::size_t k = 0;
    for (; k < longs.size() && acc < target; ++k) acc += longs[k].length();
    for (std::size_t i = k; i < longs.size(); ++i) rest += longs[i].length();
    longs.resize(k);
    *kept_measure = acc;
    *dropped = rest;
    return longs;
}

}  // namespace

CantorRepeller assemble_repeller(const BoxMapping& star, const BoxMapping& phi,
                                 const InducingOptions& opt) {
    if (opt.K_max < 1) throw std::invalid_argument("assemble_repeller: K must be >= 1");
    CantorRepeller rep;
    rep.c = star.c;
    rep.epsilon = star.c + 2.0;
    rep.p = star.p;
    rep.q = star.q;
    rep.Vlo = star.Vlo;
    rep.Vhi = star.Vhi;
    rep.Zlo = star.Zlo;
    rep.Zhi = star.Zhi;
    rep.C1 = opt.C1;
    rep.untracked = phi.untracked;
    rep.n0 = phi.has_central ? phi.central.n : 0;

    std::vector<Branch> longs;
    for (const Branch& b : star.branches) {
        if (b.target == Target::V) longs.push_back(b);
        else rep.short_measure += b.length();
    }
    if (star.has_central) rep.central_measure = star.central.length();

    const double target = rep.Vlen() * (1.0 - opt.C1 * std::pow(rep.epsilon, 0.75));
    std::vector<Branch> kept = retain(std::move(longs), target, &rep.coverage,
                                      &rep.dropped_by_retention);
    for (Branch& b : kept) set_bounds(rep.c, b, rep.Vlo, rep.Vhi);

    auto min_inf = [](const std::vector<Branch>& v) {
        double m = std::numeric_limits<double>::infinity();
        for (const Branch& b : v) m = std::min(m, b.log_inf);
        return m;
    };
    rep.K = 1;
    std::vector<Branch> cur = kept;
    while (min_inf(cur) <= std::log(2.0) && rep.K < opt.K_max) {
        std::vector<Branch> nxt;
        for (const Branch& a : cur)
            for (const Branch& b : kept) nxt.push_back(compose(rep.c, a, b));
        double dropped = 0.0;
        cur = retain(std::move(nxt), target, &rep.coverage, &dropped);
        rep.dropped_by_retention += dropped;
        for (Branch& b : cur) set_bounds(rep.c, b, rep.Vlo, rep.Vhi);
        ++rep.K;
    }
    std::sort(cur.begin(), cur.end(), [](const Branch& a, const Branch& b) { return a.lo < b.lo; });
    rep.branches = std::move(cur);
    attach_W(rep, opt.max_time, opt.disk_samples);
    return rep;
}

CantorRepeller build_repeller(double c, const InducingOptions& opt) {
    BoxMapping phi = first_return_map(c, opt);
    make_V(phi);
    double lost_h = 0.0;
    std::vector<Branch> hV = first_entry_V(phi, opt.min_len, &lost_h);
    FillingResult inf = postcritical_filling(phi, opt);
    if (inf.cap_exceeded) throw std::runtime_error("postcritical filling: iteration cap exceeded");
    double trunc = 0.0;
    BoxMapping star = pullback_star(phi, inf, hV, opt, &trunc);
    CantorRepeller rep = assemble_repeller(star, phi, opt);
    rep.truncated = trunc + lost_h;
    rep.filling_steps = static_cast<int>(inf.sizes.size());
    return rep;
}

// ---------------------------------------------------------------------------
// diagnostics

TailHistogram branch_tail_histogram(const CantorRepeller& rep) {
    TailHistogram h;
    std::vector<double> vals;
    for (const Branch& b : rep.branches) vals.push_back(b.log_inf);
    if (rep.has_W) vals.push_back(rep.W.log_inf);
    if (vals.empty()) return h;
    int lo = static_cast<int>(std::floor(*std::min_element(vals.begin(), vals.end())));
    int hi = static_cast<int>(std::floor(*std::max_element(vals.begin(), vals.end())));
    h.first_bin = lo;
    h.counts.assign(hi - lo + 1, 0);
    for (double v : vals) ++h.counts[static_cast<int>(std::floor(v)) - lo];

    // least squares of log(count) on the bin index, nonempty bins only
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i] == 0) continue;
        double x = lo + static_cast<double>(i), y = std::log(static_cast<double>(h.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        h.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        h.fitted = true;
    }
    return h;
}

RepellerCheck check_repeller(const CantorRepeller& rep, int disk_samples) {
    RepellerCheck ck;
    auto fail = [&](bool& flag, const std::string& why) {
        if (flag && ck.first_failure.empty()) ck.first_failure = why;
        flag = false;
    };
    const double c = rep.c;
    const double ymid = 0.5 * (rep.Vlo + rep.Vhi);
    double min_inf = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < rep.branches.size(); ++i) {
        const Branch& b = rep.branches[i];
        double a = pull_back(c, b.itin, rep.Vlo), e = pull_back(c, b.itin, rep.Vhi);
        if (std::abs(std::min(a, e) - b.lo) > 1e-10 || std::abs(std::max(a, e) - b.hi) > 1e-10)
            fail(ck.itineraries_ok, "branch " + std::to_string(i) + " domain differs from pull-back");
        if (static_cast<int>(b.itin.size()) != b.n)
            fail(ck.itineraries_ok, "branch " + std::to_string(i) + " iterate count mismatch");

        double x = 0.5 * (b.lo + b.hi);
        for (int k = 0; k < b.n; ++k) x = x * x + c;
        if (!(x > rep.Vlo && x < rep.Vhi))
            fail(ck.landing_ok, "branch " + std::to_string(i) + " midpoint does not land in V");

        double ld = 0.0;
        pull_back(c, b.itin, cplx(ymid, 0.0), &ld);
        double d = -ld;
        if (d < b.log_inf - 1e-12 || d > b.log_sup + 1e-12)
            fail(ck.brackets_ok, "branch " + std::to_string(i) + " derivative outside bracket");
        ck.max_distortion = std::max(ck.max_distortion, std::exp(b.log_sup - b.log_inf));
        min_inf = std::min(min_inf, b.log_inf);

        if (i > 0 && !(rep.branches[i - 1].hi < b.lo))
            fail(ck.nonadjacent_ok, "branches " + std::to_string(i - 1) + " and " +
                                        std::to_string(i) + " touch or overlap");
    }
    if (rep.has_W) min_inf = std::min(min_inf, rep.W.log_inf);
    ck.min_inf_deriv = std::exp(min_inf);
    if (!(min_inf >= std::log(2.0))) fail(ck.expansion_ok, "inf|phi'| below 2");

    ck.coverage_ratio = rep.coverage / rep.Vlen();
    ck.measured_C = rep.measured_C();
    if (!(ck.measured_C <= rep.C1 * (1.0 + 1e-9)))
        fail(ck.coverage_ok, "real coverage below |V|(1 - C1 eps^{3/4})");

    // disks: bounding-box sweep, polygons only for overlapping boxes
    std::vector<Polygon> polys;
    for (const Branch& b : rep.branches) polys.push_back(branch_disk(rep, b, disk_samples));
    if (rep.has_W) polys.push_back(W_disk(rep, disk_samples));
    std::vector<Box> boxes;
    for (const Polygon& p : polys) boxes.push_back(bounding_box(p));
    std::vector<std::size_t> order(polys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return boxes[a].x0 < boxes[b].x0; });
    const double R = 0.5 * rep.Vlen();
    const cplx ctr(ymid, 0.0);
    for (std::size_t s = 0; s < order.size(); ++s) {
        std::size_t i = order[s];
        for (const cplx& z : polys[i])
            if (std::abs(z - ctr) >= R) {
                fail(ck.disjoint_ok, "a branch disk leaves D_V");
                break;
            }
        for (std::size_t t = s + 1; t < order.size() && boxes[order[t]].x0 <= boxes[i].x1; ++t) {
            std::size_t j = order[t];
            if (boxes[i].overlaps(boxes[j]) && polygons_intersect(polys[i], polys[j]))
                fail(ck.disjoint_ok, "branch disks " + std::to_string(i) + " and " +
                                         std::to_string(j) + " intersect");
        }
    }

    if (rep.has_W) {
        ck.diam_W_over_sqrt_eps = rep.W.diam / std::sqrt(rep.epsilon);
        if (!(ck.diam_W_over_sqrt_eps >= 1e-2 && ck.diam_W_over_sqrt_eps <= 1e2))
            fail(ck.W_ok, "diam W / sqrt(eps) outside [1e-2, 1e2]");
        if (!(rep.W.Jlo > -rep.p && rep.W.Jhi < c))
            fail(ck.W_ok, "real trace of f(W) not inside (-p, c)");
    } else {
        fail(ck.W_ok, "no complex branch");
    }

    TailHistogram th = branch_tail_histogram(rep);
    ck.tail_slope = th.slope;
    if (th.fitted && !(th.slope < 1.0)) fail(ck.tail_ok, "tail histogram slope >= 1");
    return ck;
}

// ---------------------------------------------------------------------------
// JSON

std::string repeller_to_json(const CantorRepeller& rep) {
    using nlohmann::json;
    json j;
    j["c"] = rep.c;
    j["epsilon"] = rep.epsilon;
    j["p"] = rep.p;
    j["q"] = rep.q;
    j["V"] = {rep.Vlo, rep.Vhi};
    j["Z"] = {rep.Zlo, rep.Zhi};
    j["K"] = rep.K;
    j["C1"] = rep.C1;
    j["coverage"] = rep.coverage;
    j["n0"] = rep.n0;
    j["filling_steps"] = rep.filling_steps;
    j["ledger"] = {{"untracked", rep.untracked},
                   {"truncated", rep.truncated},
                   {"short", rep.short_measure},
                   {"central", rep.central_measure},
                   {"dropped_by_retention", rep.dropped_by_retention}};
    if (rep.has_W) {
        j["W"] = {{"m", rep.W.m},
                  {"itinerary", itinerary_string(rep.W.J)},
                  {"J", {rep.W.Jlo, rep.W.Jhi}},
                  {"diam", rep.W.diam},
                  {"im", {rep.W.im_lo, rep.W.im_hi}},
                  {"log_inf_deriv", rep.W.log_inf},
                  {"log_sup_deriv", rep.W.log_sup}};
    } else {
        j["W"] = nullptr;
    }
    json arr = json::array();
    for (const Branch& b : rep.branches)
        arr.push_back({{"domain", {b.lo, b.hi}},
                       {"iterate", b.n},
                       {"itinerary", itinerary_string(b.itin)},
                       {"log_inf_deriv", b.log_inf},
                       {"log_sup_deriv", b.log_sup}});
    j["branches"] = std::move(arr);
    return j.dump(1);
}

CantorRepeller repeller_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("repeller json: ") + e.what());
    }
    try {
        CantorRepeller rep;
        rep.c = j.at("c").get<double>();
        rep.epsilon = j.at("epsilon").get<double>();
        rep.p = j.at("p").get<double>();
        rep.q = j.at("q").get<double>();
        rep.Vlo = j.at("V").at(0).get<double>();
        rep.Vhi = j.at("V").at(1).get<double>();
        rep.Zlo = j.at("Z").at(0).get<double>();
        rep.Zhi = j.at("Z").at(1).get<double>();
        rep.K = j.at("K").get<int>();
        rep.C1 = j.at("C1").get<double>();
        rep.coverage = j.at("coverage").get<double>();
        rep.n0 = j.value("n0", 0);
        rep.filling_steps = j.value("filling_steps", 0);
        const json& L = j.at("ledger");
        rep.untracked = L.at("untracked").get<double>();
        rep.truncated = L.at("truncated").get<double>();
        rep.short_measure = L.at("short").get<double>();
        rep.central_measure = L.at("central").get<double>();
        rep.dropped_by_retention = L.at("dropped_by_retention").get<double>();
        if (!j.at("W").is_null()) {
            const json& w = j.at("W");
            rep.has_W = true;
            rep.W.m = w.at("m").get<int>();
            rep.W.J = parse_itinerary(w.at("itinerary").get<std::string>());
            rep.W.Jlo = w.at("J").at(0).get<double>();
            rep.W.Jhi = w.at("J").at(1).get<double>();
            rep.W.diam = w.at("diam").get<double>();
            rep.W.im_lo = w.at("im").at(0).get<double>();
            rep.W.im_hi = w.at("im").at(1).get<double>();
            rep.W.log_inf = w.at("log_inf_deriv").get<double>();
            rep.W.log_sup = w.at("log_sup_deriv").get<double>();
        }
        for (const json& b : j.at("branches")) {
            Branch br;
            br.lo = b.at("domain").at(0).get<double>();
            br.hi = b.at("domain").at(1).get<double>();
            br.n = b.at("iterate").get<int>();
            br.itin = parse_itinerary(b.at("itinerary").get<std::string>());
            br.target = Target::V;
            br.log_inf = b.at("log_inf_deriv").get<double>();
            br.log_sup = b.at("log_sup_deriv").get<double>();
            rep.branches.push_back(std::move(br));
        }
        return rep;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("repeller json: ") + e.what());
    }
}

}  // namespace juliadim
