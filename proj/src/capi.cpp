#include "juliadim.h"

#include <cmath>
#include <cstring>
#include <ios>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "juliadim/beta.hpp"
#include "juliadim/experiments.hpp"
#include "juliadim/inducing.hpp"
#include "juliadim/pressure.hpp"
#include "juliadim/sampler.hpp"
#include "juliadim/stats.hpp"

using namespace juliadim;

struct jd_text {
    std::string s;
};
struct jd_cloud {
    std::vector<cplx> points;
};
struct jd_repeller {
    CantorRepeller rep;
};

namespace {

thread_local std::string g_error;

template <class F>
jd_status guard(F&& f) {
    try {
        f();
        g_error.clear();
        return JD_OK;
    } catch (const std::invalid_argument& e) {
        g_error = e.what();
        return JD_INVALID_ARGUMENT;
    } catch (const std::length_error& e) {
        g_error = e.what();
        return JD_OUT_OF_RANGE;
    } catch (const std::out_of_range& e) {
        g_error = e.what();
        return JD_OUT_OF_RANGE;
    } catch (const std::ios_base::failure& e) {
        g_error = e.what();
        return JD_IO;
    } catch (const std::bad_alloc&) {
        g_error = "out of memory";
        return JD_INTERNAL;
    } catch (const std::exception& e) {
        g_error = e.what();
        return JD_NUMERICAL;
    } catch (...) {
        g_error = "unknown error";
        return JD_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw std::invalid_argument(std::string(what) + " is NULL");
}

jd_text* make_text(std::string s) { return new jd_text{std::move(s)}; }

jd_dimension to_c(const DimensionEstimate& d) {
    jd_dimension o{};
    o.value = d.value;
    o.lo = d.lo;
    o.hi = d.hi;
    o.depth = d.depth;
    o.method = static_cast<jd_method>(d.method);
    o.monotone = d.monotone ? 1 : 0;
    return o;
}

jd_fit to_c(const FitResult& f) {
    jd_fit o{};
    o.slope = f.slope;
    o.intercept = f.intercept;
    o.r_squared = f.r_squared;
    o.residual_max = f.residual_max;
    o.n_points = f.n_points;
    o.flagged = f.flagged ? 1 : 0;
    return o;
}

ScanConfig scan_config(const jd_scan_options* opt) {
    ScanConfig cfg = opt && opt->config_text ? parse_config(opt->config_text) : ScanConfig{};
    if (opt) {
        if (opt->apply_env) apply_env_overrides(cfg);
        if (opt->workers > 0) cfg.workers = opt->workers;
        if (opt->has_seed) cfg.seed = opt->seed;
        if (opt->output_path) cfg.path = opt->output_path;
        if (opt->format) cfg.format = opt->format;
    }
    validate_config(cfg);
    return cfg;
}

}  // namespace

extern "C" {

const char* jd_last_error(void) { return g_error.c_str(); }

const char* jd_status_name(jd_status s) {
    switch (s) {
        case JD_OK: return "ok";
        case JD_INVALID_ARGUMENT: return "invalid-argument";
        case JD_OUT_OF_RANGE: return "out-of-range";
        case JD_NUMERICAL: return "numerical";
        case JD_IO: return "io";
        case JD_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* jd_version(void) { return "1.0.0"; }

const char* jd_text_data(const jd_text* t) { return t ? t->s.c_str() : ""; }
size_t jd_text_size(const jd_text* t) { return t ? t->s.size() : 0; }
void jd_text_free(jd_text* t) { delete t; }

jd_status jd_fixed_points_compute(double c_re, double c_im, jd_fixed_points* out) {
    return guard([&] {
        need(out, "out");
        Parameter p = make_parameter(cplx(c_re, c_im));
        FixedPair fp = fixed_points(p);
        *out = {fp.p.real(), fp.p.imag(), fp.q.real(), fp.q.imag(), static_cast<int>(p.regime), p.epsilon};
    });
}

jd_status jd_green_function(double c_re, double c_im, double escape_radius, int max_depth, jd_green* out) {
    return guard([&] {
        need(out, "out");
        GreenResult g = green_function(cplx(c_re, c_im), escape_radius, max_depth);
        *out = {g.value, g.steps, g.bounded ? 1 : 0, g.flagged ? 1 : 0};
    });
}

jd_status jd_ce_margin(double c, int depth, double omega_prime, jd_ce* out) {
    return guard([&] {
        need(out, "out");
        CriticalOrbit o = critical_orbit(c, depth);
        CeMargin m = ce_margin(o, omega_prime);
        *out = {m.margin, m.deviation, o.membership_violation ? 1 : 0};
    });
}

jd_status jd_cloud_sample(double c_re, double c_im, size_t count, uint64_t seed, size_t burn_in, jd_cloud** out) {
    return guard([&] {
        need(out, "out");
        PointCloud pc = sample_inverse(make_parameter(cplx(c_re, c_im)), count, seed, burn_in);
        *out = new jd_cloud{std::move(pc.points)};
    });
}

jd_status jd_cloud_from_points(const double* xy, size_t count, jd_cloud** out) {
    return guard([&] {
        need(out, "out");
        if (count) need(xy, "xy");
        auto* c = new jd_cloud;
        c->points.reserve(count);
        for (size_t i = 0; i < count; ++i) c->points.emplace_back(xy[2 * i], xy[2 * i + 1]);
        *out = c;
    });
}

jd_status jd_cloud_from_csv(const char* text, jd_cloud** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        std::istringstream ss(text);
        std::string line;
        std::vector<cplx> pts;
        while (std::getline(ss, line)) {
            if (line.empty() || line == "re,im") continue;
            auto comma = line.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("cloud csv: expected re,im");
            pts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        }
        *out = new jd_cloud{std::move(pts)};
    });
}

size_t jd_cloud_size(const jd_cloud* cloud) { return cloud ? cloud->points.size() : 0; }

jd_status jd_cloud_point(const jd_cloud* cloud, size_t i, double* re, double* im) {
    return guard([&] {
        need(cloud, "cloud");
        if (i >= cloud->points.size()) throw std::invalid_argument("point index out of range");
        if (re) *re = cloud->points[i].real();
        if (im) *im = cloud->points[i].imag();
    });
}

jd_status jd_cloud_csv(const jd_cloud* cloud, jd_text** out) {
    return guard([&] {
        need(cloud, "cloud");
        need(out, "out");
        std::string s = "re,im\n";
        for (cplx z : cloud->points) s += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
        *out = make_text(std::move(s));
    });
}

void jd_cloud_free(jd_cloud* cloud) { delete cloud; }

jd_status jd_beta_at(const jd_cloud* cloud, double x_re, double x_im, double r, double* beta, size_t* count) {
    return guard([&] {
        need(cloud, "cloud");
        BetaValue b = beta_at(cloud->points, cplx(x_re, x_im), r);
        if (beta) *beta = b.beta;
        if (count) *count = b.count;
    });
}

jd_status jd_beta_profile_csv(const jd_cloud* cloud, double x_re, double x_im, int depth, jd_text** out) {
    return guard([&] {
        need(cloud, "cloud");
        need(out, "out");
        BetaProfile p = beta_profile(cloud->points, cplx(x_re, x_im), depth);
        std::string s = "n,r,beta,count\n";
        for (size_t i = 0; i < p.scales.size(); ++i) {
            int n = static_cast<int>(std::lround(std::log2(p.diam / p.scales[i])));
            s += std::to_string(n) + "," + format_double(p.scales[i]) + "," + format_double(p.betas[i]) + "," +
                 std::to_string(p.counts[i]) + "\n";
        }
        *out = make_text(std::move(s));
    });
}

jd_status jd_interval_cover_csv(double c, int depth, jd_text** out) {
    return guard([&] {
        need(out, "out");
        IntervalCover cov = interval_cover(make_parameter(c), depth);
        std::string s = "left,right,log_length\n";
        for (const Interval& iv : cov.components)
            s += format_double(iv.left) + "," + format_double(iv.right) + "," + format_double(iv.log_length) + "\n";
        *out = make_text(std::move(s));
    });
}

void jd_build_options_default(jd_build_options* opt) {
    if (!opt) return;
    InducingOptions d;
    *opt = {d.min_len, d.C1, d.max_time, d.K_max};
}

jd_status jd_repeller_build(double c, const jd_build_options* opt, jd_repeller** out) {
    return guard([&] {
        need(out, "out");
        InducingOptions o;
        if (opt) {
            o.min_len = opt->min_len;
            o.C1 = opt->C1;
            o.max_time = opt->max_time;
            o.K_max = opt->K_max;
        }
        *out = new jd_repeller{build_repeller(c, o)};
    });
}

jd_status jd_repeller_from_json(const char* text, jd_repeller** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new jd_repeller{repeller_from_json(text)};
    });
}

jd_status jd_repeller_to_json(const jd_repeller* rep, jd_text** out) {
    return guard([&] {
        need(rep, "repeller");
        need(out, "out");
        *out = make_text(repeller_to_json(rep->rep));
    });
}

size_t jd_repeller_branch_count(const jd_repeller* rep) { return rep ? rep->rep.branches.size() : 0; }
void jd_repeller_free(jd_repeller* rep) { delete rep; }

jd_status jd_repeller_check(const jd_repeller* rep, jd_check_report* out) {
    return guard([&] {
        need(rep, "repeller");
        need(out, "out");
        RepellerCheck r = check_repeller(rep->rep);
        jd_check_report o{};
        o.ok = r.ok();
        o.itineraries_ok = r.itineraries_ok;
        o.landing_ok = r.landing_ok;
        o.brackets_ok = r.brackets_ok;
        o.disjoint_ok = r.disjoint_ok;
        o.nonadjacent_ok = r.nonadjacent_ok;
        o.coverage_ok = r.coverage_ok;
        o.expansion_ok = r.expansion_ok;
        o.W_ok = r.W_ok;
        o.tail_ok = r.tail_ok;
        o.coverage_ratio = r.coverage_ratio;
        o.measured_C = r.measured_C;
        o.min_inf_deriv = r.min_inf_deriv;
        o.diam_W_over_sqrt_eps = r.diam_W_over_sqrt_eps;
        o.tail_slope = r.tail_slope;
        o.max_distortion = r.max_distortion;
        std::strncpy(o.first_failure, r.first_failure.c_str(), sizeof(o.first_failure) - 1);
        *out = o;
    });
}

const char* jd_method_name(jd_method m) { return dim_method_name(static_cast<DimMethod>(m)); }

jd_status jd_dim_exterior(double c, double tol, int n_lo, int n_hi, jd_dimension* dim, double* harmonic_bound,
                          double* green) {
    return guard([&] {
        need(dim, "dim");
        ExteriorDimension d = dimension_exterior(c, tol, n_lo, n_hi);
        *dim = to_c(d.dim);
        if (harmonic_bound) *harmonic_bound = d.harmonic_bound;
        if (green) *green = d.green;
    });
}

jd_status jd_dim_quasicircle(double c_re, double c_im, int depth, jd_dimension* dim) {
    return guard([&] {
        need(dim, "dim");
        *dim = to_c(dimension_quasicircle(cplx(c_re, c_im), depth));
    });
}

jd_status jd_dim_repeller(const jd_repeller* rep, double tol, jd_dimension* real_only, jd_dimension* full) {
    return guard([&] {
        need(rep, "repeller");
        RepellerDimension d = dimension_repeller(rep->rep, tol);
        if (real_only) *real_only = to_c(d.real_only);
        if (full) *full = to_c(d.full);
    });
}

jd_status jd_dim_moran(const double* ratios, size_t k, double tol, jd_dimension* dim, double* oracle) {
    return guard([&] {
        need(ratios, "ratios");
        std::vector<double> r(ratios, ratios + k);
        if (dim) *dim = to_c(dimension(linear_system(r), tol));
        if (oracle) *oracle = moran_oracle(r);
    });
}

jd_status jd_fit_loglog(const double* xs, const double* ys, size_t n, jd_fit* out) {
    return guard([&] {
        need(xs, "xs");
        need(ys, "ys");
        need(out, "out");
        *out = to_c(fit_loglog(std::vector<double>(xs, xs + n), std::vector<double>(ys, ys + n)));
    });
}

jd_status jd_sigma(double c, size_t orbit_length, uint64_t seed, const double* radii, size_t n_radii, double r_lo,
                   double r_hi, jd_text** csv, jd_fit* fit) {
    return guard([&] {
        need(radii, "radii");
        OrbitSample orbit = typical_orbit(c, orbit_length, seed);
        SigmaEstimate s = sigma_ball(orbit, std::vector<double>(radii, radii + n_radii));
        if (csv) {
            std::string t = "r,mass,confident\n";
            for (size_t j = 0; j < s.radii.size(); ++j)
                t += format_double(s.radii[j]) + "," + format_double(s.mass[j]) + "," + (s.confident[j] ? "1" : "0") +
                     "\n";
            *csv = make_text(std::move(t));
        }
        if (fit) *fit = to_c(sigma_exponent(s, r_lo, r_hi));
    });
}

void jd_bounds_options_default(jd_bounds_options* opt) {
    if (!opt) return;
    ScanConfig d;
    *opt = {static_cast<size_t>(d.orbit_length), static_cast<size_t>(d.cloud_size), d.seed, d.R_prime,
            d.C, d.kappa, d.Z};
}

jd_status jd_bounds_compute(double c, const jd_bounds_options* opt, jd_bounds* out) {
    return guard([&] {
        need(out, "out");
        ScanConfig cfg;
        if (opt) {
            cfg.orbit_length = static_cast<int>(opt->orbit_length);
            cfg.cloud_size = static_cast<int>(opt->cloud_size);
            cfg.seed = opt->seed;
            cfg.R_prime = opt->R_prime;
            cfg.C = opt->C;
            cfg.kappa = opt->kappa;
            cfg.Z = opt->Z;
        }
        BoundsDetail d = bounds_detail(cfg, c + 2.0, cfg.seed);
        jd_bounds o{};
        o.epsilon = d.report.epsilon;
        o.beta_norm = d.report.beta_norm;
        o.I_val = d.I.value;
        o.O_val = d.O.value;
        o.I_dyadic = d.I.dyadic;
        o.O_lower_bound_only = d.O.lower_bound_only;
        o.bound_formula = d.report.bound_formula;
        o.bound_hausTop = d.report.bound_hausTop;
        o.bound_mis = d.report.bound_mis;
        *out = o;
    });
}

void jd_scan_options_default(jd_scan_options* opt) {
    if (opt) *opt = jd_scan_options{};
}

jd_status jd_scan_run(const jd_scan_options* opt, size_t* rows, size_t* failed) {
    return guard([&] {
        ScanConfig cfg = scan_config(opt);
        ScanResult res = run_scan(cfg);
        write_outputs(cfg, res);
        if (rows) *rows = res.rows.size();
        if (failed) *failed = res.failed;
    });
}

jd_status jd_config_normalize(const jd_scan_options* opt, jd_text** out) {
    return guard([&] {
        need(out, "out");
        *out = make_text(serialize_config(scan_config(opt)));
    });
}

jd_status jd_scan_fit(const char* csv_text, const char* task, const char* x_column, const char* y_column,
                      jd_fit* out) {
    return guard([&] {
        need(csv_text, "csv_text");
        need(task, "task");
        need(x_column, "x_column");
        need(y_column, "y_column");
        need(out, "out");
        std::vector<double> xs, ys;
        for (const ScanRow& r : parse_csv(csv_text))
            if (r.ok && r.task == task) {
                xs.push_back(row_column(r, x_column));
                ys.push_back(row_column(r, y_column));
            }
        *out = to_c(fit_loglog(xs, ys));
    });
}

}  // extern "C"
