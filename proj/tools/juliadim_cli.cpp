// Command-line front end. Talks to the library through juliadim.h only.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "juliadim.h"

using nlohmann::ordered_json;

namespace {

struct Failure {
    jd_status status;
    std::string message;
};

void check(jd_status s) {
    if (s != JD_OK) throw Failure{s, jd_last_error()};
}

// RAII for library text objects
struct Text {
    jd_text* t = nullptr;
    ~Text() { jd_text_free(t); }
    std::string str() const { return std::string(jd_text_data(t), jd_text_size(t)); }
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Failure{JD_IO, "cannot read " + path};
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw Failure{JD_IO, "cannot write " + path};
}

ordered_json num(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

ordered_json dim_json(const jd_dimension& d) {
    return {{"value", num(d.value)},   {"lo", num(d.lo)},          {"hi", num(d.hi)},
            {"depth", d.depth},        {"method", jd_method_name(d.method)},
            {"monotone", d.monotone != 0}};
}

ordered_json fit_json(const jd_fit& f) {
    return {{"slope", num(f.slope)},         {"intercept", num(f.intercept)},
            {"r_squared", num(f.r_squared)}, {"residual_max", num(f.residual_max)},
            {"n_points", f.n_points},        {"flagged", f.flagged != 0}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct Repeller {
    jd_repeller* r = nullptr;
    ~Repeller() { jd_repeller_free(r); }
};

struct Cloud {
    jd_cloud* c = nullptr;
    ~Cloud() { jd_cloud_free(c); }
};

// a repeller either loaded from JSON or built for --c
void load_repeller(Repeller& rep, const std::string& in, double c, const jd_build_options& opt) {
    if (!in.empty())
        check(jd_repeller_from_json(read_file(in).c_str(), &rep.r));
    else
        check(jd_repeller_build(c, &opt, &rep.r));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hausdorff dimension experiments for quadratic Julia sets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", jd_version());

    std::string out;
    double c = -2.0, c_re = 0.0, c_im = 0.0;
    int depth = 0;
    std::uint64_t seed = 1;

    // fixed-points
    auto* fp = app.add_subcommand("fixed-points", "fixed points and regime of f_c");
    fp->add_option("--c,--c-re", c_re, "real part of c")->required();
    fp->add_option("--c-im", c_im, "imaginary part of c");

    // green
    double escape = 1e8;
    int green_depth = 10000;
    auto* gr = app.add_subcommand("green", "Green's function at the critical value");
    gr->add_option("--c,--c-re", c_re)->required();
    gr->add_option("--c-im", c_im);
    gr->add_option("--escape-radius", escape);
    gr->add_option("--depth", green_depth);

    // ce-check
    int ce_depth = 10000;
    double omega_prime = 1.0;
    auto* ce = app.add_subcommand("ce-check", "Collet-Eckmann margin of the critical orbit");
    ce->add_option("--c", c)->required();
    ce->add_option("--depth", ce_depth);
    ce->add_option("--omega-prime", omega_prime);

    // julia
    auto* julia = app.add_subcommand("julia", "Julia set samples");
    julia->require_subcommand(1);
    std::size_t count = 20000, burn_in = 100;
    auto* js = julia->add_subcommand("sample", "inverse-iteration point cloud, CSV re,im");
    js->add_option("--c,--c-re", c_re)->required();
    js->add_option("--c-im", c_im);
    js->add_option("--count", count);
    js->add_option("--seed", seed);
    js->add_option("--burn-in", burn_in);
    js->add_option("-o,--output", out);
    auto* ji = julia->add_subcommand("intervals", "interval cover for real c < -2");
    ji->add_option("--c", c)->required();
    ji->add_option("--depth", depth)->required();
    ji->add_option("-o,--output", out);

    // beta
    auto* beta = app.add_subcommand("beta", "beta numbers");
    beta->require_subcommand(1);
    std::string cloud_path;
    double x_re = 0.0, x_im = 0.0;
    int beta_depth = 12;
    auto* bp = beta->add_subcommand("profile", "dyadic beta profile, CSV n,r,beta,count");
    bp->add_option("--cloud", cloud_path, "CSV from 'julia sample'");
    bp->add_option("--c,--c-re", c_re, "sample a fresh cloud for this c");
    bp->add_option("--c-im", c_im);
    bp->add_option("--count", count);
    bp->add_option("--seed", seed);
    bp->add_option("--x-re", x_re);
    bp->add_option("--x-im", x_im);
    std::vector<double> x_pair;
    bp->add_option("--x", x_pair, "base point as re,im")->delimiter(',')->expected(2);
    bp->add_option("--depth", beta_depth);
    bp->add_option("-o,--output", out);

    // repeller
    jd_build_options bopt;
    jd_build_options_default(&bopt);
    std::string in;
    auto* rep = app.add_subcommand("repeller", "induced Cantor repellers for c = -2 + eps");
    rep->require_subcommand(1);
    auto* rb = rep->add_subcommand("build", "build and write JSON");
    rb->add_option("--c", c)->required();
    rb->add_option("--min-len", bopt.min_len);
    rb->add_option("--C1", bopt.C1);
    rb->add_option("--max-time", bopt.max_time);
    rb->add_option("--K-max", bopt.K_max);
    rb->add_option("-o,--output,--emit", out);
    auto* rc = rep->add_subcommand("check", "verify a repeller");
    rc->add_option("in,--in", in, "repeller JSON");
    rc->add_option("--c", c, "build instead of loading");
    rc->add_option("--min-len", bopt.min_len);

    // dim
    auto* dim = app.add_subcommand("dim", "Hausdorff dimension estimates (JSON)");
    dim->require_subcommand(1);
    double tol = 1e-10;
    int n_lo = 10, n_hi = 20, qdepth = 14;
    std::vector<double> ratios;
    auto* de = dim->add_subcommand("exterior", "real c < -2");
    de->add_option("--c", c)->required();
    de->add_option("--tol", tol);
    de->add_option("--n-lo", n_lo);
    de->add_option("--n-hi", n_hi);
    auto* dq = dim->add_subcommand("quasicircle", "|c| <= 1/4");
    dq->add_option("--c,--c-re", c_re)->required();
    dq->add_option("--c-im", c_im);
    dq->add_option("--depth", qdepth);
    auto* dr = dim->add_subcommand("repeller", "real-only and full repeller dimension");
    dr->add_option("in,--in", in);
    dr->add_option("--c", c);
    dr->add_option("--min-len", bopt.min_len);
    dr->add_option("--tol", tol);
    auto* dm = dim->add_subcommand("moran", "linear Cantor set with the given ratios");
    dm->add_option("--ratios", ratios)->required()->delimiter(',');
    dm->add_option("--tol", tol);

    // stats
    auto* stats = app.add_subcommand("stats", "orbit statistics for real c in [-2, c0]");
    stats->require_subcommand(1);
    std::size_t length = 1000000;
    double r_hi = 0.1, r_lo = 1e-4, fit_lo = 0.0, fit_hi = 0.0;
    int radii_count = 40;
    auto* ss = stats->add_subcommand("sigma", "ball masses at the critical value, CSV r,mass,confident");
    ss->add_option("--c", c)->required();
    ss->add_option("--orbit-length", length);
    ss->add_option("--seed", seed);
    ss->add_option("--r-hi", r_hi);
    ss->add_option("--r-lo", r_lo);
    ss->add_option("--radii", radii_count, "number of log-spaced radii");
    ss->add_option("--fit-lo", fit_lo, "also report the exponent fit over [fit-lo, fit-hi] on stderr");
    ss->add_option("--fit-hi", fit_hi);
    ss->add_option("-o,--output", out);
    jd_bounds_options bounds_opt;
    jd_bounds_options_default(&bounds_opt);
    auto* sb = stats->add_subcommand("bounds", "upper-bound report (JSON)");
    sb->add_option("--c", c)->required();
    sb->add_option("--orbit-length", bounds_opt.orbit_length);
    sb->add_option("--cloud-size", bounds_opt.cloud_size);
    sb->add_option("--seed", bounds_opt.seed);
    sb->add_option("--R-prime", bounds_opt.R_prime);
    sb->add_option("--C", bounds_opt.C);
    sb->add_option("--kappa", bounds_opt.kappa);
    sb->add_option("--Z", bounds_opt.Z);

    // scan
    std::string config_path, format, output_path;
    int workers = 0;
    bool no_env = false, print_config = false;
    auto* scan = app.add_subcommand("scan", "run a parameter scan from a config file");
    auto* seed_opt = scan->add_option("--seed", seed);
    scan->add_option("--config", config_path, "key = value file with [sections]");
    scan->add_option("--workers", workers);
    scan->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("-o,--output", output_path);
    scan->add_flag("--no-env", no_env, "ignore JULIADIM_* environment overrides");
    scan->add_flag("--print-config", print_config, "print the effective config and exit");

    // fit
    std::string csv_path, task, xcol = "epsilon", ycol = "value";
    auto* fit = app.add_subcommand("fit", "log-log fit of two columns of a scan CSV");
    fit->add_option("--csv", csv_path)->required();
    fit->add_option("--task", task)->required();
    fit->add_option("--x", xcol);
    fit->add_option("--y", ycol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fp) {
            jd_fixed_points r;
            check(jd_fixed_points_compute(c_re, c_im, &r));
            static const char* regimes[] = {"exterior", "tip", "small", "other"};
            emit(dump({{"c", {c_re, c_im}},
                       {"p", {num(r.p_re), num(r.p_im)}},
                       {"q", {num(r.q_re), num(r.q_im)}},
                       {"regime", regimes[r.regime]},
                       {"epsilon", num(r.epsilon)}}),
                 "");
        } else if (*gr) {
            jd_green g;
            check(jd_green_function(c_re, c_im, escape, green_depth, &g));
            emit(dump({{"value", num(g.value)}, {"steps", g.steps}, {"bounded", g.bounded != 0},
                       {"flagged", g.flagged != 0}}),
                 "");
        } else if (*ce) {
            jd_ce m;
            check(jd_ce_margin(c, ce_depth, omega_prime, &m));
            emit(dump({{"c", c}, {"margin", num(m.margin)}, {"deviation", num(m.deviation)},
                       {"membership_violation", m.membership_violation != 0}}),
                 "");
        } else if (*js) {
            Cloud cl;
            check(jd_cloud_sample(c_re, c_im, count, seed, burn_in, &cl.c));
            Text t;
            check(jd_cloud_csv(cl.c, &t.t));
            emit(t.str(), out);
        } else if (*ji) {
            Text t;
            check(jd_interval_cover_csv(c, depth, &t.t));
            emit(t.str(), out);
        } else if (*bp) {
            Cloud cl;
            if (!cloud_path.empty())
                check(jd_cloud_from_csv(read_file(cloud_path).c_str(), &cl.c));
            else
                check(jd_cloud_sample(c_re, c_im, count, seed, 100, &cl.c));
            Text t;
            if (x_pair.size() == 2) {
                x_re = x_pair[0];
                x_im = x_pair[1];
            }
            check(jd_beta_profile_csv(cl.c, x_re, x_im, beta_depth, &t.t));
            emit(t.str(), out);
        } else if (*rb) {
            Repeller r;
            check(jd_repeller_build(c, &bopt, &r.r));
            Text t;
            check(jd_repeller_to_json(r.r, &t.t));
            emit(t.str(), out);
        } else if (*rc) {
            Repeller r;
            load_repeller(r, in, c, bopt);
            jd_check_report k;
            check(jd_repeller_check(r.r, &k));
            emit(dump({{"ok", k.ok != 0},
                       {"itineraries_ok", k.itineraries_ok != 0},
                       {"landing_ok", k.landing_ok != 0},
                       {"brackets_ok", k.brackets_ok != 0},
                       {"disjoint_ok", k.disjoint_ok != 0},
                       {"nonadjacent_ok", k.nonadjacent_ok != 0},
                       {"coverage_ok", k.coverage_ok != 0},
                       {"expansion_ok", k.expansion_ok != 0},
                       {"W_ok", k.W_ok != 0},
                       {"tail_ok", k.tail_ok != 0},
                       {"coverage_ratio", num(k.coverage_ratio)},
                       {"measured_C", num(k.measured_C)},
                       {"min_inf_deriv", num(k.min_inf_deriv)},
                       {"diam_W_over_sqrt_eps", num(k.diam_W_over_sqrt_eps)},
                       {"tail_slope", num(k.tail_slope)},
                       {"max_distortion", num(k.max_distortion)},
                       {"first_failure", k.first_failure}}),
                 "");
            return k.ok ? 0 : 2;
        } else if (*de) {
            jd_dimension d;
            double hb = 0.0, g = 0.0;
            check(jd_dim_exterior(c, tol, n_lo, n_hi, &d, &hb, &g));
            ordered_json j = dim_json(d);
            j["green"] = num(g);
            j["harmonic_bound"] = num(hb);
            emit(dump(j), "");
        } else if (*dq) {
            jd_dimension d;
            check(jd_dim_quasicircle(c_re, c_im, qdepth, &d));
            emit(dump(dim_json(d)), "");
        } else if (*dr) {
            Repeller r;
            load_repeller(r, in, c, bopt);
            jd_dimension real_only, full;
            check(jd_dim_repeller(r.r, tol, &real_only, &full));
            emit(dump({{"branches", jd_repeller_branch_count(r.r)},
                       {"real_only", dim_json(real_only)},
                       {"full", dim_json(full)}}),
                 "");
        } else if (*dm) {
            jd_dimension d;
            double oracle = 0.0;
            check(jd_dim_moran(ratios.data(), ratios.size(), tol, &d, &oracle));
            ordered_json j = dim_json(d);
            j["oracle"] = num(oracle);
            emit(dump(j), "");
        } else if (*ss) {
            if (!(r_hi > r_lo && r_lo > 0.0) || radii_count < 2) throw Failure{JD_INVALID_ARGUMENT, "bad radius range"};
            std::vector<double> radii(radii_count);
            for (int i = 0; i < radii_count; ++i)
                radii[i] = std::exp(std::log(r_hi) + (std::log(r_lo) - std::log(r_hi)) * i / (radii_count - 1));
            bool want_fit = fit_hi > fit_lo && fit_lo > 0.0;
            Text t;
            jd_fit f;
            check(jd_sigma(c, length, seed, radii.data(), radii.size(), fit_lo, fit_hi, &t.t, want_fit ? &f : nullptr));
            emit(t.str(), out);
            if (want_fit) std::cerr << fit_json(f).dump() << "\n";
        } else if (*sb) {
            jd_bounds b;
            check(jd_bounds_compute(c, &bounds_opt, &b));
            emit(dump({{"epsilon", num(b.epsilon)},
                       {"beta_norm", num(b.beta_norm)},
                       {"I", num(b.I_val)},
                       {"I_dyadic", num(b.I_dyadic)},
                       {"O", num(b.O_val)},
                       {"O_lower_bound_only", b.O_lower_bound_only != 0},
                       {"bound_formula", num(b.bound_formula)},
                       {"bound_hausTop", num(b.bound_hausTop)},
                       {"bound_mis", num(b.bound_mis)}}),
                 "");
        } else if (*scan) {
            std::string config_text;
            if (!config_path.empty()) config_text = read_file(config_path);
            jd_scan_options so;
            jd_scan_options_default(&so);
            so.config_text = config_path.empty() ? nullptr : config_text.c_str();
            so.apply_env = no_env ? 0 : 1;
            so.workers = workers;
            so.has_seed = seed_opt->count() > 0;
            so.seed = seed;
            so.output_path = output_path.empty() ? nullptr : output_path.c_str();
            so.format = format.empty() ? nullptr : format.c_str();
            if (print_config) {
                Text t;
                check(jd_config_normalize(&so, &t.t));
                emit(t.str(), "");
                return 0;
            }
            std::size_t rows = 0, failed = 0;
            check(jd_scan_run(&so, &rows, &failed));
            std::cerr << rows << " rows, " << failed << " failed\n";
            return failed ? 2 : 0;
        } else if (*fit) {
            jd_fit f;
            check(jd_scan_fit(read_file(csv_path).c_str(), task.c_str(), xcol.c_str(), ycol.c_str(), &f));
            emit(dump(fit_json(f)), "");
        }
    } catch (const Failure& f) {
        std::cerr << "error (" << jd_status_name(f.status) << "): " << f.message << "\n";
        return 1;
    }
    return 0;
}
