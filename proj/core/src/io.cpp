#include "conefoliate/io.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unistd.h>

#include "conefoliate/glued.hpp"
#include "conefoliate/nonlinear.hpp"
#include "conefoliate/profile.hpp"
#include "conefoliate/radial.hpp"
#include "conefoliate/spectrum.hpp"
#include "conefoliate/verify.hpp"

#ifndef CONEFOLIATE_VERSION
#define CONEFOLIATE_VERSION "0.0.0"
#endif

namespace conefoliate {

using nlohmann::json;

std::vector<std::string> subcommand_names() {
    return {"spectrum", "profile", "linear-solve", "solve", "solve-near-cone", "verify"};
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
    }
}

int resolve_threads(int config_value, std::optional<int> override_value) {
    int t = config_value;
    if (const char* env = std::getenv("CONEFOLIATE_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 1024) throw SchemaError("CONEFOLIATE_THREADS must be an integer in [1, 1024]");
        t = int(v);
    }
    if (override_value) t = *override_value;
    if (t < 1 || t > 1024) throw SchemaError("thread count must be in [1, 1024]");
    return t;
}

namespace {

// ------------------------------------------------------------------ schema

class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_ + ": expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        for (const auto& item : j_.items()) {
            const bool ok = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; });
            if (!ok) throw SchemaError(path_ + ": unknown key '" + item.key() + "'");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) const { return j_.at(key); }
    std::string path(const char* key) const { return path_ + "." + key; }

    long long integer(const char* key, long long def, long long lo, long long hi) const {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw SchemaError(path(key) + ": expected an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi)
            throw SchemaError(path(key) + ": " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
        return x;
    }

    double number(const char* key, double def, double lo, double hi, bool open_lo = false) const {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number()) throw SchemaError(path(key) + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x) || x > hi || x < lo || (open_lo && x == lo))
            throw SchemaError(path(key) + ": " + format17(x) + " outside " + (open_lo ? "(" : "[") + format17(lo) +
                              ", " + format17(hi) + "]");
        return x;
    }

    std::string string(const char* key, const std::string& def, std::initializer_list<const char*> allowed) const {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_string()) throw SchemaError(path(key) + ": expected a string");
        const std::string s = v.get<std::string>();
        if (allowed.size() && std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return s == a; }))
            throw SchemaError(path(key) + ": unsupported value '" + s + "'");
        return s;
    }

private:
    const json& j_;
    std::string path_;
};

#define CF_GLOBAL_KEYS "seed", "output_dir", "thread_count"

struct Globals {
    unsigned seed = 1;
    std::string output_dir = ".";
    int threads = 1;
};

Globals read_globals(const Obj& o, const GlobalOverrides& ov) {
    Globals g;
    g.seed = unsigned(o.integer("seed", 1, 0, std::numeric_limits<unsigned>::max()));
    if (ov.seed) {
        if (*ov.seed < 0 || *ov.seed > (long long)std::numeric_limits<unsigned>::max())
            throw SchemaError("--seed outside [0, 4294967295]");
        g.seed = unsigned(*ov.seed);
    }
    g.output_dir = o.string("output_dir", ".", {});
    if (ov.output_dir) g.output_dir = *ov.output_dir;
    if (g.output_dir.empty()) throw SchemaError("output_dir must not be empty");
    g.threads = resolve_threads(int(o.integer("thread_count", 1, 1, 1024)), ov.threads);
    return g;
}

ConeParams read_cone(const Obj& o, json& echo) {
    const int p = int(o.integer("p", 3, 1, 64));
    const int q = int(o.integer("q", 3, 1, 64));
    echo["p"] = p;
    echo["q"] = q;
    return ConeParams::make(p, q);
}

BoundaryData read_modes(const Obj& o, const char* key, const ConeParams& cone, bool zonal, int jmax, json& echo) {
    BoundaryData g;
    echo[key] = json::array();
    if (!o.has(key)) return g;
    const json& arr = o.at(key);
    if (!arr.is_array()) throw SchemaError(o.path(key) + ": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const Obj e(arr[i], o.path(key) + "[" + std::to_string(i) + "]");
        e.allow({"j", "k", "coefficient"});
        if (!e.has("j") || !e.has("coefficient")) throw SchemaError(o.path(key) + ": entries need j and coefficient");
        const int j = int(e.integer("j", 1, 1, jmax));
        const int k = int(e.integer("k", 1, 1, zonal ? 1 : 64));
        const double c = e.number("coefficient", 0, -1e6, 1e6);
        g.emplace_back(make_mode(j, k, cone), c);
        echo[key].push_back({{"j", j}, {"k", k}, {"coefficient", c}});
    }
    return g;
}

GlueConfig read_glue(const Obj& root, double delta, json& echo) {
    GlueConfig gc;
    gc.delta = delta;
    json e = json::object();
    if (root.has("grid")) {
        const Obj o(root.at("grid"), root.path("grid"));
        o.allow({"N", "n_theta", "a_minus", "a_plus", "map_a", "R_out"});
        gc.N = int(o.integer("N", gc.N, 40, 20000));
        gc.n_theta = int(o.integer("n_theta", gc.n_theta, 4, 32));
        gc.a_minus = o.number("a_minus", gc.a_minus, 0, 1, true);
        gc.a_plus = o.number("a_plus", gc.a_plus, 0, 1, true);
        gc.map_a = o.number("map_a", gc.map_a, 0, 10, true);
        gc.R_out = o.number("R_out", gc.R_out, 10, 1e8);
    }
    e["N"] = gc.N;
    e["n_theta"] = gc.n_theta;
    e["a_minus"] = gc.a_minus;
    e["a_plus"] = gc.a_plus;
    e["map_a"] = gc.map_a;
    e["R_out"] = gc.R_out;
    echo["grid"] = e;
    return gc;
}

// ------------------------------------------------------------------ output

struct Csv {
    std::ostringstream os;
    Csv(const std::string& kind, const std::vector<std::string>& cols) {
        os << "# conefoliate-csv v1 " << kind << '\n';
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << '\n';
    }
    template <class... T>
    void row(const T&... v) {
        bool first = true;
        ((os << (first ? "" : ",") << cell(v), first = false), ...);
        os << '\n';
    }
    static std::string cell(double v) { return format17(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
};

std::string field_csv(const AxisymField& u) {
    Csv c("axisym-field", {"i", "xi", "r", "theta", "u"});
    const BaseSurface& b = *u.grid.base;
    for (int i = 0; i < u.rows(); ++i)
        for (int k = 0; k < u.cols(); ++k) c.row(i, b.xi(i), b.r(i), u.grid.theta(k), u.v(i, k));
    return c.os.str();
}

json vec_json(const std::vector<double>& v) { return json(v); }

json solve_report_json(const SolveReport& r) {
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"failure", r.failure},
            {"iterate_norms", vec_json(r.iterate_norms)},
            {"step_norms", vec_json(r.step_norms)},
            {"contraction", vec_json(r.contraction)},
            {"neumann_iterations", r.neumann_iterations},
            {"final_residual", r.final_residual},
            {"final_residual_sup", r.final_residual_sup},
            {"boundary_error", r.boundary_error},
            {"g_norm", r.g_norm},
            {"seed_distance", r.seed_distance},
            {"eg_ratio", r.eg_ratio},
            {"in_ball", r.in_ball},
            {"max_contraction_tail", r.max_contraction_tail}};
}

struct Outcome {
    json result;
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    std::string failure;  // empty when every certificate holds
};

// ------------------------------------------------------------------ runners

Outcome run_spectrum(const Obj& o, const Globals&, json& echo) {
    o.allow({CF_GLOBAL_KEYS, "p", "q", "mu_max"});
    const ConeParams cone = read_cone(o, echo);
    const double mu_max = o.number("mu_max", 3.0 * (cone.n - 1), -(cone.n - 1), 1e4);
    echo["mu_max"] = mu_max;
    const auto modes = enumerate_modes(cone, mu_max);
    Csv c("spectrum", {"index", "j", "k", "mu", "mu_exact", "class", "multiplicity", "gamma_plus", "gamma_minus",
                       "gamma_plus_exact", "gamma_minus_exact"});
    json distinct = json::array();
    std::string last;
    for (const Mode& m : modes) {
        const Rational mu = mu_exact(m.j, m.k, cone);
        const ExactGamma g = gamma_exact(m.j, m.k, cone);
        auto exact = [&](int s) {
            if (g.rational()) return g.root(s).str();
            return g.a.str() + (s > 0 ? " + " : " - ") + "sqrt(" + g.d.str() + ")/2";
        };
        const long mult = harmonic_dimension(m.j - 1, cone.p) * harmonic_dimension(m.k - 1, cone.q);
        c.row(m.index, m.j, m.k, m.mu, mu.str(), mode_class_name(m.cls), int(mult), m.gamma_plus, m.gamma_minus,
              exact(+1), exact(-1));
        if (mu.str() != last) {
            distinct.push_back({{"mu", mu.str()}, {"class", mode_class_name(m.cls)}, {"j", m.j}, {"k", m.k}});
            last = mu.str();
        }
    }
    Outcome out;
    out.result = {{"modes", modes.size()}, {"distinct_eigenvalues", distinct}};
    out.files.emplace_back("spectrum.csv", c.os.str());
    return out;
}

Outcome run_profile(const Obj& o, const Globals&, json& echo) {
    o.allow({CF_GLOBAL_KEYS, "p", "q", "side", "R_max", "tol"});
    const ConeParams cone = read_cone(o, echo);
    const std::string side = o.string("side", "E_plus", {"E_plus", "E_minus"});
    const double R = o.number("R_max", 100.0, 10.0, 1e7);
    const double tol = o.number("tol", 1e-10, 1e-14, 1e-4);
    echo["side"] = side;
    echo["R_max"] = R;
    echo["tol"] = tol;
    const ProfileCurve curve = shoot_profile(cone, side_from_name(side), R, tol);
    Csv c("profile", {"s", "x", "y", "rho", "U", "psi"});
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const ProfileSample m = curve.sample(i);
        c.row(m.s, m.x, m.y, m.rho, m.U, m.psi);
    }
    const AsymptoticFit fit = asymptotic_fit(curve);
    Outcome out;
    out.result = {{"samples", curve.size()},
                  {"r_max", curve.r_max()},
                  {"scale", curve.scale},
                  {"norm_coeff", curve.norm_coeff},
                  {"fit",
                   {{"gamma_hat", fit.gamma_hat},
                    {"coeff", fit.coeff},
                    {"r_lo", fit.r_lo},
                    {"r_hi", fit.r_hi},
                    {"next_exponent", fit.next_exponent},
                    {"gamma_1_plus", make_mode(1, 1, cone).gamma_plus}}}};
    out.files.emplace_back("profile.csv", c.os.str());
    return out;
}

Outcome run_linear(const Obj& o, const Globals&, json& echo) {
    o.allow({CF_GLOBAL_KEYS, "p", "q", "delta", "grid", "modes"});
    const ConeParams cone = read_cone(o, echo);
    const double delta = o.number("delta", 1.3, 1.0, 100.0, true);
    echo["delta"] = delta;
    check_delta(cone, delta);
    int N = 513;
    double r_min = 1e-4;
    if (o.has("grid")) {
        const Obj gobj(o.at("grid"), o.path("grid"));
        gobj.allow({"N", "r_min"});
        N = int(gobj.integer("N", N, 16, 1000000));
        r_min = gobj.number("r_min", r_min, 1e-12, 0.5, true);
    }
    echo["grid"] = {{"N", N}, {"r_min", r_min}};
    const BoundaryData g = read_modes(o, "modes", cone, false, 64, echo);
    const RadialGrid grid = RadialGrid::make(N, r_min, 1.0);
    ModeField f{cone, grid, {}, delta};
    LinearSolveReport rep;
    const ModeField u = linear_dirichlet_solve(f, g, delta, &rep);
    std::vector<std::string> cols = {"r"};
    for (const auto& e : u.entries) cols.push_back("a_" + std::to_string(e.mode.j) + "_" + std::to_string(e.mode.k));
    Csv c("radial-modes", cols);
    const Eigen::VectorXd r = grid.rvec();
    for (int i = 0; i < N; ++i) {
        c.os << format17(r(i));
        for (const auto& e : u.entries) c.os << ',' << format17(e.a(i));
        c.os << '\n';
    }
    json disc = json::array();
    for (const auto& [m, v] : rep.discarded) disc.push_back({{"j", m.j}, {"k", m.k}, {"coefficient", v}});
    Outcome out;
    out.result = {{"residual_max", rep.residual_max}, {"boundary_error", rep.boundary_error},
                  {"norm_u", rep.norm_u},             {"norm_f", rep.norm_f},
                  {"norm_g", rep.norm_g},             {"schauder_constant", rep.schauder_constant},
                  {"discarded_low_modes", disc}};
    out.files.emplace_back("linear_solution.csv", c.os.str());
    if (rep.boundary_error > 1e-12) out.failure = "boundary error " + format17(rep.boundary_error) + " > 1e-12";
    return out;
}

Outcome run_solve(const Obj& o, const Globals&, json& echo) {
    o.allow({CF_GLOBAL_KEYS, "p", "q", "delta", "lambda", "grid", "g_modes", "tol", "max_iter", "c"});
    SolveConfig cfg;
    cfg.cone = read_cone(o, echo);
    cfg.delta = o.number("delta", 1.3, 1.0, 100.0, true);
    check_delta(cfg.cone, cfg.delta);
    cfg.lambda = o.number("lambda", 1e-3, 0, 0.05, true);
    cfg.tol_residual = o.number("tol", 1e-8, 1e-15, 1e-2, true);
    cfg.max_iter = int(o.integer("max_iter", 50, 1, 10000));
    cfg.ball_c = o.number("c", 1e4, 0, 1e12, true);
    echo["delta"] = cfg.delta;
    echo["lambda"] = cfg.lambda;
    echo["tol"] = cfg.tol_residual;
    echo["max_iter"] = cfg.max_iter;
    echo["c"] = cfg.ball_c;
    cfg.grid = read_glue(o, cfg.delta, echo);
    cfg.g = read_modes(o, "g_modes", cfg.cone, true, cfg.grid.n_theta, echo);

    const GluedSurface S = build_approx_surface(cfg.cone, cfg.lambda, cfg.grid);
    S.validate();
    const GluedLinearSystem sys(S, cfg.grid);
    const PicardResult pr = picard_iterate(sys, zonal_coefficients(cfg.g, sys.modes()), cfg);
    const SolveReport& R = pr.report;
    Outcome out;
    out.result = solve_report_json(R);
    out.result["r_lambda"] = S.r_lambda;
    out.files.emplace_back("solution.csv", field_csv(pr.u));
    std::vector<std::string> fail;
    if (!R.converged) fail.push_back("not converged: " + R.failure);
    if (!(R.final_residual <= cfg.tol_residual)) fail.push_back("final residual " + format17(R.final_residual) + " > tol");
    if (!(R.boundary_error <= 1e-12)) fail.push_back("boundary error " + format17(R.boundary_error) + " > 1e-12");
    if (!R.in_ball) fail.push_back("outside E_g: distance/|g|^2 = " + format17(R.eg_ratio) + " > c");
    for (std::size_t i = 0; i < fail.size(); ++i) out.failure += (i ? "; " : "") + fail[i];
    return out;
}

Outcome run_near_cone(const Obj& o, const Globals&, json& echo) {
    o.allow({CF_GLOBAL_KEYS, "p", "q", "delta", "grid", "g_modes", "theta_seed"});
    ThetaConfig tc;
    tc.solve.cone = read_cone(o, echo);
    tc.solve.delta = o.number("delta", 1.3, 1.0, 100.0, true);
    check_delta(tc.solve.cone, tc.solve.delta);
    echo["delta"] = tc.solve.delta;
    tc.solve.grid = read_glue(o, tc.solve.delta, echo);
    const BoundaryData g = read_modes(o, "g_modes", tc.solve.cone, true, tc.solve.grid.n_theta, echo);
    std::optional<ThetaParams> seed;
    if (o.has("theta_seed")) {
        const Obj s(o.at("theta_seed"), o.path("theta_seed"));
        s.allow({"a_axis", "ell"});
        seed = ThetaParams{s.number("a_axis", 0, -1e-3, 1e-3), s.number("ell", 0, -1e-3, 1e-3)};
        echo["theta_seed"] = {{"a_axis", seed->a_axis}, {"ell", seed->lambda}};
    }
    const ThetaContext ctx(tc);
    const Eigen::VectorXd gv = zonal_coefficients(g, ctx.zonal().size());
    const NearConeResult r = solve_near_cone(ctx, gv, seed ? &*seed : nullptr);
    const NearConeReport& R = r.report;
    json its = json::array();
    for (std::size_t i = 0; i < R.iterates.size(); ++i)
        its.push_back({{"a_axis", R.iterates[i].a_axis}, {"ell", R.iterates[i].lambda}, {"residual", R.residuals[i]}});
    Outcome out;
    out.result = {{"theta", {{"a_axis", r.theta.a_axis}, {"ell", r.theta.lambda}}},
                  {"converged", R.converged},
                  {"failure", R.failure},
                  {"theta_residual", R.residuals.empty() ? 0.0 : R.residuals.back()},
                  {"newton", its},
                  {"jacobian", {{R.jacobian(0, 0), R.jacobian(0, 1)}, {R.jacobian(1, 0), R.jacobian(1, 1)}}},
                  {"trust_region_used", R.trust_region_used},
                  {"boundary_mismatch", R.boundary_mismatch},
                  {"picard", solve_report_json(r.eval.picard.report)}};
    out.files.emplace_back("near_cone_solution.csv", field_csv(r.eval.picard.u));
    if (!R.converged) out.failure = "Newton on Theta did not converge: " + R.failure;
    else if (!(R.residuals.back() <= 1e-6)) out.failure = "|Theta| = " + format17(R.residuals.back()) + " > 1e-6";
    return out;
}

Outcome run_verify(const Obj& o, const Globals& gl, json& echo) {
    o.allow({CF_GLOBAL_KEYS, "suite"});
    std::vector<std::string> names;
    if (o.has("suite")) {
        const json& s = o.at("suite");
        if (!s.is_array()) throw SchemaError(o.path("suite") + ": expected an array of check names");
        const auto known = acceptance_suite_names();
        for (const auto& v : s) {
            if (!v.is_string()) throw SchemaError(o.path("suite") + ": expected strings");
            const std::string n = v.get<std::string>();
            if (std::find(known.begin(), known.end(), n) == known.end())
                throw SchemaError(o.path("suite") + ": unknown check '" + n + "'");
            names.push_back(n);
        }
    }
    echo["suite"] = names;
    std::ostringstream log;
    const auto res = run_acceptance(names, gl.threads, gl.seed, &log);
    json checks = json::array();
    std::string failed;
    for (const auto& c : res) {
        json m = json::object();
        for (const auto& [k, v] : c.metrics) m[k] = v;
        checks.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"summary", c.summary}, {"metrics", m}});
        if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    Outcome out;
    out.result = {{"checks", checks}, {"log", log.str()}};
    for (const auto& c : res) out.result["check_seconds"][c.name] = c.seconds;
    if (!failed.empty()) out.failure = "failed checks: " + failed;
    return out;
}

}  // namespace

int run_command(const std::string& subcommand, const std::string& config_json, const GlobalOverrides& overrides,
                std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        json cfg;
        try {
            cfg = config_json.empty() ? json::object() : json::parse(config_json);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("config is not valid JSON: ") + e.what());
        }
        const Obj root(cfg, "config");
        const Globals gl = read_globals(root, overrides);
        json echo = json::object();
        echo["seed"] = gl.seed;

        Outcome out;
        try {
            if (subcommand == "spectrum") out = run_spectrum(root, gl, echo);
            else if (subcommand == "profile") out = run_profile(root, gl, echo);
            else if (subcommand == "linear-solve") out = run_linear(root, gl, echo);
            else if (subcommand == "solve") out = run_solve(root, gl, echo);
            else if (subcommand == "solve-near-cone") out = run_near_cone(root, gl, echo);
            else if (subcommand == "verify") out = run_verify(root, gl, echo);
            else throw SchemaError("unknown subcommand '" + subcommand + "'");
        } catch (const SchemaError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            // parameter combinations rejected by the core library
            throw SchemaError(e.what());
        } catch (const std::domain_error& e) {
            throw CertificateError(e.what());
        } catch (const std::runtime_error& e) {
            // solver aborts: divergence, non-injective transfer, missed roots
            throw CertificateError(e.what());
        }

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json report;
        report["format"] = "conefoliate-report v1";
        report["subcommand"] = subcommand;
        report["versions"] = {{"conefoliate", CONEFOLIATE_VERSION},
                              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                            "." + std::to_string(EIGEN_MINOR_VERSION)},
                              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                              {"compiler", __VERSION__}};
        report["config"] = echo;
        report["certificate"] = {{"pass", out.failure.empty()}, {"failure", out.failure}};
        report["result"] = out.result;
        json files = json::array();
        for (const auto& f : out.files) files.push_back(f.first);
        report["files"] = files;
        // run-dependent fields; everything outside this block is reproducible
        json timing = {{"wall_seconds", wall}, {"thread_count", gl.threads}};
        if (out.result.contains("check_seconds")) {
            timing["check_seconds"] = out.result["check_seconds"];
            report["result"].erase("check_seconds");
        }
        report["run"] = timing;

        const std::filesystem::path dir(gl.output_dir);
        for (const auto& [name, content] : out.files) write_file_atomic(dir / name, content);
        std::string stem = subcommand;
        std::replace(stem.begin(), stem.end(), '-', '_');
        write_file_atomic(dir / (stem + "_report.json"), report.dump(2) + "\n");

        if (report["result"].contains("log")) log << report["result"]["log"].get<std::string>();
        if (!out.failure.empty()) {
            log << subcommand << ": certificate failure: " << out.failure << '\n';
            return kExitCertificate;
        }
        log << subcommand << ": ok (" << (dir / (stem + "_report.json")).string() << ")\n";
        return kExitOk;
    } catch (const SchemaError& e) {
        log << "schema error: " << e.what() << '\n';
        return kExitSchema;
    } catch (const CertificateError& e) {
        log << "certificate failure: " << e.what() << '\n';
        return kExitCertificate;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace conefoliate
