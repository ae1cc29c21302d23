#include "juliadim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "juliadim/beta.hpp"
#include "juliadim/inducing.hpp"
#include "juliadim/pressure.hpp"
#include "juliadim/sampler.hpp"
#include "juliadim/stats.hpp"

namespace juliadim {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// config

namespace {

enum class Kind { Dbl, Int, U64, Str, DblList, StrList };

struct Field {
    const char* section;
    const char* key;
    Kind kind;
    void* ptr;
};

std::vector<Field> fields(ScanConfig& c) {
    return {
        {"grid", "epsilons", Kind::DblList, &c.epsilons},
        {"grid", "eps_lo", Kind::Dbl, &c.eps_lo},
        {"grid", "eps_hi", Kind::Dbl, &c.eps_hi},
        {"grid", "eps_count", Kind::Int, &c.eps_count},
        {"grid", "exterior_eps", Kind::DblList, &c.exterior_eps},
        {"grid", "repeller_eps", Kind::DblList, &c.repeller_eps},
        {"grid", "beta_eps", Kind::DblList, &c.beta_eps},
        {"grid", "sigma_eps", Kind::DblList, &c.sigma_eps},
        {"grid", "bounds_eps", Kind::DblList, &c.bounds_eps},
        {"grid", "quasicircle_c", Kind::DblList, &c.quasicircle_c},
        {"scan", "tasks", Kind::StrList, &c.tasks},
        {"scan", "seed", Kind::U64, &c.seed},
        {"scan", "workers", Kind::Int, &c.workers},
        {"budgets", "exterior_n_lo", Kind::Int, &c.exterior_n_lo},
        {"budgets", "exterior_n_hi", Kind::Int, &c.exterior_n_hi},
        {"budgets", "quasicircle_depth", Kind::Int, &c.quasicircle_depth},
        {"budgets", "tol", Kind::Dbl, &c.tol},
        {"budgets", "min_len", Kind::Dbl, &c.min_len},
        {"budgets", "C1", Kind::Dbl, &c.C1},
        {"budgets", "cloud_size", Kind::Int, &c.cloud_size},
        {"budgets", "beta_depth", Kind::Int, &c.beta_depth},
        {"budgets", "orbit_length", Kind::Int, &c.orbit_length},
        {"budgets", "radii_count", Kind::Int, &c.radii_count},
        {"budgets", "sigma_r_hi", Kind::Dbl, &c.sigma_r_hi},
        {"budgets", "R_prime", Kind::Dbl, &c.R_prime},
        {"constants", "C", Kind::Dbl, &c.C},
        {"constants", "kappa", Kind::Dbl, &c.kappa},
        {"constants", "Z", Kind::Dbl, &c.Z},
        {"constants", "omega_prime", Kind::Dbl, &c.omega_prime},
        {"constants", "ce_depth", Kind::Int, &c.ce_depth},
        {"output", "path", Kind::Str, &c.path},
        {"output", "format", Kind::Str, &c.format},
    };
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config: bad number for " + what + ": '" + s + "'");
}

long long to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config: bad integer for " + what + ": '" + s + "'");
}

void assign(const Field& f, const std::string& value) {
    const std::string what = std::string(f.section) + "." + f.key;
    switch (f.kind) {
        case Kind::Dbl: *static_cast<double*>(f.ptr) = to_double(value, what); break;
        case Kind::Int: {
            long long v = to_int(value, what);
            if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
                throw std::invalid_argument("config: integer out of range for " + what);
            *static_cast<int*>(f.ptr) = static_cast<int>(v);
            break;
        }
        case Kind::U64: {
            std::uint64_t v = 0;
            auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || end != value.data() + value.size())
                throw std::invalid_argument("config: bad unsigned integer for " + what);
            *static_cast<std::uint64_t*>(f.ptr) = v;
            break;
        }
        case Kind::Str: *static_cast<std::string*>(f.ptr) = value; break;
        case Kind::DblList: {
            auto& out = *static_cast<std::vector<double>*>(f.ptr);
            out.clear();
            for (const std::string& s : split_list(value)) out.push_back(to_double(s, what));
            break;
        }
        case Kind::StrList: *static_cast<std::vector<std::string>*>(f.ptr) = split_list(value); break;
    }
}

std::string render(const Field& f) {
    switch (f.kind) {
        case Kind::Dbl: return format_double(*static_cast<const double*>(f.ptr));
        case Kind::Int: return std::to_string(*static_cast<const int*>(f.ptr));
        case Kind::U64: return std::to_string(*static_cast<const std::uint64_t*>(f.ptr));
        case Kind::Str: return *static_cast<const std::string*>(f.ptr);
        case Kind::DblList: {
            std::string s;
            for (double v : *static_cast<const std::vector<double>*>(f.ptr))
                s += (s.empty() ? "" : ",") + format_double(v);
            return s;
        }
        case Kind::StrList: {
            std::string s;
            for (const auto& v : *static_cast<const std::vector<std::string>*>(f.ptr))
                s += (s.empty() ? "" : ",") + v;
            return s;
        }
    }
    return "";
}

bool known_task(const std::string& t) {
    return std::any_of(std::begin(kTaskNames), std::end(kTaskNames),
                       [&](const char* n) { return t == n; });
}

}  // namespace

ScanConfig parse_config(const std::string& text) {
    ScanConfig cfg;
    auto fs = fields(cfg);
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        auto it = std::find_if(fs.begin(), fs.end(),
                               [&](const Field& f) { return section == f.section && key == f.key; });
        if (it == fs.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key " +
                                        section + "." + key);
        assign(*it, value);
    }
    return cfg;
}

std::string serialize_config(const ScanConfig& cfg_in) {
    ScanConfig cfg = cfg_in;
    std::string out, section;
    for (const Field& f : fields(cfg)) {
        if (section != f.section) {
            section = f.section;
            out += (out.empty() ? "[" : "\n[") + section + "]\n";
        }
        out += std::string(f.key) + " = " + render(f) + "\n";
    }
    return out;
}

std::vector<std::string> apply_env_overrides(ScanConfig& cfg) {
    std::vector<std::string> applied;
    for (const Field& f : fields(cfg)) {
        std::string name = std::string("JULIADIM_") + f.section + "_" + f.key;
        for (char& ch : name) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (const char* v = std::getenv(name.c_str())) {
            assign(f, v);
            applied.push_back(name);
        }
    }
    return applied;
}

void validate_config(const ScanConfig& c) {
    for (const std::string& t : c.tasks)
        if (!known_task(t)) throw std::invalid_argument("config: unknown task '" + t + "'");
    if (c.eps_count < 0) throw std::invalid_argument("config: eps_count must be >= 0");
    if (c.eps_count > 0 && !(c.eps_lo > 0.0 && c.eps_hi >= c.eps_lo))
        throw std::invalid_argument("config: need 0 < eps_lo <= eps_hi");
    for (const std::string& t : c.tasks)
        if (task_grid(c, t).empty()) throw std::invalid_argument("config: empty grid for task " + t);
    if (c.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    for (int v : {c.exterior_n_hi, c.quasicircle_depth, c.cloud_size, c.beta_depth, c.orbit_length,
                  c.radii_count, c.ce_depth})
        if (v <= 0) throw std::invalid_argument("config: budgets must be positive");
    if (c.exterior_n_lo < 0 || c.exterior_n_lo >= c.exterior_n_hi)
        throw std::invalid_argument("config: need 0 <= exterior_n_lo < exterior_n_hi");
    for (double v : {c.tol, c.min_len, c.C1, c.sigma_r_hi, c.R_prime, c.omega_prime})
        if (!(v > 0.0)) throw std::invalid_argument("config: tolerances and constants must be positive");
    if (c.format != "csv" && c.format != "json") throw std::invalid_argument("config: format must be csv or json");
}

std::vector<double> task_grid(const ScanConfig& c, const std::string& task) {
    const std::vector<double>* own = nullptr;
    if (task == "exterior-dim") own = &c.exterior_eps;
    else if (task == "quasicircle-dim") return c.quasicircle_c;
    else if (task == "repeller-dim") own = &c.repeller_eps;
    else if (task == "beta") own = &c.beta_eps;
    else if (task == "sigma") own = &c.sigma_eps;
    else if (task == "bounds") own = &c.bounds_eps;
    if (own && !own->empty()) return *own;
    if (!c.epsilons.empty()) return c.epsilons;
    std::vector<double> g;
    for (int i = 0; i < c.eps_count; ++i) {
        double u = c.eps_count == 1 ? 0.0 : static_cast<double>(i) / (c.eps_count - 1);
        g.push_back(std::exp(std::log(c.eps_lo) + u * (std::log(c.eps_hi) - std::log(c.eps_lo))));
    }
    return g;
}

// ---------------------------------------------------------------------------
// rows

std::uint64_t row_seed(std::uint64_t seed, std::size_t index) {
    // splitmix64 finaliser: independent streams per row
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

struct BetaSummary {
    double top, wiggliness, good;
};

BetaSummary beta_summary(const ScanConfig& cfg, double c, std::uint64_t seed) {
    PointCloud cloud = sample_inverse(make_parameter(c), cfg.cloud_size, seed);
    cplx base = *std::min_element(cloud.points.begin(), cloud.points.end(),
                                  [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    BetaProfile prof = beta_profile(cloud.points, base, cfg.beta_depth);
    if (prof.betas.empty()) throw std::runtime_error("no admissible scales");
    double eps = c + 2.0;
    double r = prof.scales.back();
    return {prof.betas.front(), r < 1.0 ? mean_wiggliness(prof, r) : 0.0,
            good_scale_density(prof, std::min(1.0, 2.0 * std::sqrt(eps)))};
}

SigmaEstimate sigma_for(const ScanConfig& cfg, double c, double eps, std::uint64_t seed) {
    OrbitSample orbit = typical_orbit(c, static_cast<std::size_t>(cfg.orbit_length), seed);
    double diam = std::abs(c * c);
    return sigma_ball(orbit, log_radii(diam, std::min(eps * 1e-2, diam / 2), cfg.radii_count));
}

}  // namespace

BoundsDetail bounds_detail(const ScanConfig& cfg, double epsilon, std::uint64_t seed) {
    const double c = -2.0 + epsilon;
    SigmaEstimate s = sigma_for(cfg, c, epsilon, seed);
    BetaSummary b = beta_summary(cfg, c, seed);
    BoundsDetail d;
    d.O = O_integral(s, epsilon);
    d.I = I_integral(s, epsilon, cfg.R_prime);
    d.report = upper_bound_report(epsilon, b.top, d.I.value, d.O.value, {cfg.C, cfg.kappa, cfg.Z});
    return d;
}

ScanRow run_row(const ScanConfig& cfg, std::size_t index, const std::string& task, double g) {
    ScanRow row;
    row.index = index;
    row.task = task;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.value = row.lo = row.hi = row.value2 = row.aux = nan;
    const std::uint64_t seed = row_seed(cfg.seed, index);
    try {
        if (task == "exterior-dim") {
            row.epsilon = g;
            row.c = -2.0 - g;
            ExteriorDimension d = dimension_exterior(row.c, cfg.tol, cfg.exterior_n_lo, cfg.exterior_n_hi);
            row.value = d.dim.value;
            row.lo = d.dim.lo;
            row.hi = d.dim.hi;
            row.value2 = d.harmonic_bound;
            row.aux = d.green;
        } else if (task == "quasicircle-dim") {
            row.c = g;
            row.epsilon = g + 2.0;
            DimensionEstimate d = dimension_quasicircle(g, cfg.quasicircle_depth, std::min(cfg.tol, 1e-12));
            row.value = d.value;
            row.lo = d.lo;
            row.hi = d.hi;
            row.value2 = g != 0.0 ? (d.value - 1.0) / (g * g) : nan;
            row.aux = d.depth;
        } else {
            row.epsilon = g;
            row.c = -2.0 + g;
            if (task == "repeller-dim") {
                InducingOptions opt;
                opt.min_len = cfg.min_len;
                opt.C1 = cfg.C1;
                CantorRepeller rep = build_repeller(row.c, opt);
                RepellerDimension d = dimension_repeller(rep, cfg.tol);
                row.value = d.full.value;
                row.lo = d.full.lo;
                row.hi = d.full.hi;
                row.value2 = d.real_only.value;
                row.aux = static_cast<double>(d.branch_count);
            } else if (task == "beta") {
                BetaSummary b = beta_summary(cfg, row.c, seed);
                row.value = b.top;
                row.value2 = b.wiggliness;
                row.aux = b.good;
            } else if (task == "sigma") {
                SigmaEstimate s = sigma_for(cfg, row.c, g, seed);
                FitResult f = sigma_exponent(s, g, cfg.sigma_r_hi);
                row.value = f.slope;
                row.value2 = f.r_squared;
                row.aux = ce_margin(critical_orbit(row.c, cfg.ce_depth), cfg.omega_prime).margin;
            } else if (task == "bounds") {
                UpperBoundReport r = bounds_detail(cfg, g, seed).report;
                row.value = r.bound_formula;
                row.value2 = r.bound_hausTop;
                row.aux = r.bound_mis;
            } else {
                throw std::invalid_argument("unknown task");
            }
        }
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
    }
    return row;
}

ScanResult run_scan(const ScanConfig& cfg) {
    validate_config(cfg);
    struct Job {
        std::string task;
        double g;
    };
    std::vector<Job> jobs;
    for (const std::string& t : cfg.tasks)
        for (double g : task_grid(cfg, t)) jobs.push_back({t, g});

    ScanResult res;
    res.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
            res.rows[i] = run_row(cfg, i, jobs[i].task, jobs[i].g);
    };
    const int nw = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const ScanRow& r : res.rows)
        if (!r.ok) ++res.failed;
    return res;
}

// ---------------------------------------------------------------------------
// output

namespace {

const char* const kHeader = "index,task,c,epsilon,status,value,lo,hi,value2,aux,message";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_num(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

std::string json_num(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

}  // namespace

std::string emit_csv(const std::vector<ScanRow>& rows) {
    std::string out = std::string(kHeader) + "\n";
    for (const ScanRow& r : rows) {
        out += std::to_string(r.index) + "," + r.task + "," + format_double(r.c) + "," +
               format_double(r.epsilon) + "," + (r.ok ? "ok" : "failed") + "," +
               format_double(r.value) + "," + format_double(r.lo) + "," + format_double(r.hi) + "," +
               format_double(r.value2) + "," + format_double(r.aux) + "," + csv_field(r.message) + "\n";
    }
    return out;
}

std::string emit_json(const std::vector<ScanRow>& rows) {
    std::string out = "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ScanRow& r = rows[i];
        out += i ? ",\n " : "\n ";
        out += "{\"index\": " + std::to_string(r.index) + ", \"task\": " + nlohmann::json(r.task).dump() +
               ", \"c\": " + json_num(r.c) + ", \"epsilon\": " + json_num(r.epsilon) +
               ", \"status\": \"" + (r.ok ? "ok" : "failed") + "\", \"value\": " + json_num(r.value) +
               ", \"lo\": " + json_num(r.lo) + ", \"hi\": " + json_num(r.hi) +
               ", \"value2\": " + json_num(r.value2) + ", \"aux\": " + json_num(r.aux) +
               ", \"message\": " + nlohmann::json(r.message).dump() + "}";
    }
    return out + (rows.empty() ? "]\n" : "\n]\n");
}

std::vector<ScanRow> parse_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || trim(line) != kHeader) throw std::invalid_argument("scan csv: bad header");
    std::vector<ScanRow> rows;
    while (std::getline(ss, line)) {
        if (trim(line).empty()) continue;
        auto f = csv_split(line);
        if (f.size() != 11) throw std::invalid_argument("scan csv: expected 11 fields");
        ScanRow r;
        try {
            r.index = static_cast<std::size_t>(std::stoull(f[0]));
            r.task = f[1];
            r.c = parse_num(f[2]);
            r.epsilon = parse_num(f[3]);
            r.ok = f[4] == "ok";
            r.value = parse_num(f[5]);
            r.lo = parse_num(f[6]);
            r.hi = parse_num(f[7]);
            r.value2 = parse_num(f[8]);
            r.aux = parse_num(f[9]);
            r.message = f[10];
        } catch (const std::logic_error&) {
            throw std::invalid_argument("scan csv: bad number in row");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string manifest_json(const ScanConfig& cfg, const ScanResult& res) {
    nlohmann::ordered_json m;
    m["tool"] = "juliadim";
    m["format"] = cfg.format;
    m["output"] = cfg.path;
    m["rows"] = res.rows.size();
    m["failed"] = res.failed;
    m["config"] = serialize_config(cfg);
    nlohmann::ordered_json settings;
    ScanConfig copy = cfg;
    for (const Field& f : fields(copy)) settings[std::string(f.section) + "." + f.key] = render(f);
    m["settings"] = settings;
    return m.dump(2) + "\n";
}

void write_outputs(const ScanConfig& cfg, const ScanResult& res) {
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
        f << body;
        f.flush();
        if (!f) throw std::ios_base::failure("write failed: " + path);
    };
    std::string body = cfg.format == "json" ? emit_json(res.rows) : emit_csv(res.rows);
    // manifest first: it describes whatever ends up in the results file
    write(cfg.path + ".manifest.json", manifest_json(cfg, res));
    write(cfg.path, body);
}

double row_column(const ScanRow& r, const std::string& name) {
    if (name == "c") return r.c;
    if (name == "epsilon") return r.epsilon;
    if (name == "value") return r.value;
    if (name == "lo") return r.lo;
    if (name == "hi") return r.hi;
    if (name == "value2") return r.value2;
    if (name == "aux") return r.aux;
    if (name == "one-minus-value") return 1.0 - r.value;
    if (name == "value-minus-one") return r.value - 1.0;
    if (name == "abs-c") return std::abs(r.c);
    throw std::invalid_argument("unknown column '" + name + "'");
}

}  // namespace juliadim
