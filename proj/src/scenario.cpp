#include "degenlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>

#include "degenlab/matrix_lemma.hpp"
#include "degenlab/report.hpp"
#include <json.hpp>

namespace degen {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
}

double num(const json& obj, const char* key) {
    if (!obj.at(key).is_number()) throw std::invalid_argument(std::string("config: '") + key + "' must be a number");
    return obj.at(key).get<double>();
}

double num_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? num(obj, key) : fallback;
}

long integer(const json& obj, const char* key) {
    if (!obj.at(key).is_number_integer()) throw std::invalid_argument(std::string("config: '") + key + "' must be an integer");
    return obj.at(key).get<long>();
}

std::string text(const json& obj, const char* key) {
    if (!obj.at(key).is_string()) throw std::invalid_argument(std::string("config: '") + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

GeometryKind parse_geometry_kind(const std::string& s) {
    if (s == "line") return GeometryKind::line;
    if (s == "circle") return GeometryKind::circle;
    if (s == "radial_euclidean") return GeometryKind::radial_euclidean;
    if (s == "radial_hyperbolic") return GeometryKind::radial_hyperbolic;
    if (s == "radial_spherical") return GeometryKind::radial_spherical;
    throw std::invalid_argument("config: unknown geometry kind '" + s + "'");
}

BoundaryCondition parse_bc(const std::string& s) {
    if (s == "periodic") return BoundaryCondition::periodic;
    if (s == "dirichlet_exact") return BoundaryCondition::dirichlet_exact;
    if (s == "neumann_zero") return BoundaryCondition::neumann_zero;
    throw std::invalid_argument("config: unknown boundary condition '" + s + "'");
}

InitialKind parse_initial_kind(const std::string& s) {
    if (s == "constant") return InitialKind::constant;
    if (s == "heat_mode") return InitialKind::heat_mode;
    if (s == "fde_barenblatt") return InitialKind::fde_barenblatt;
    if (s == "pme_quadratic_pressure") return InitialKind::pme_quadratic_pressure;
    if (s == "linear") return InitialKind::linear;
    throw std::invalid_argument("config: unknown initial data kind '" + s + "'");
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json root = json::parse(json_text);
    check_keys(root, {"geometry", "equation", "initial_data", "solver", "analysis"}, "the top level");

    ScenarioConfig cfg;

    // geometry ---------------------------------------------------------------
    {
        const json& g = root.at("geometry");
        check_keys(g, {"kind", "n", "r_lo", "r_hi", "grid_points", "circumference"}, "geometry");
        cfg.gkind = parse_geometry_kind(text(g, "kind"));
        cfg.grid_points = static_cast<int>(integer(g, "grid_points"));
        const bool one_dim = cfg.gkind == GeometryKind::line || cfg.gkind == GeometryKind::circle;
        cfg.dim = one_dim ? 1 : static_cast<int>(integer(g, "n"));
        if (one_dim && g.contains("n") && integer(g, "n") != 1)
            throw std::invalid_argument("config: line/circle geometries are one-dimensional");
        if (cfg.gkind == GeometryKind::circle && g.contains("circumference")) {
            cfg.circumference = num(g, "circumference");
            if (g.contains("r_lo") || g.contains("r_hi"))
                throw std::invalid_argument("config: give either circumference or r_lo/r_hi for a circle");
        } else {
            cfg.r_lo = num(g, "r_lo");
            cfg.r_hi = num(g, "r_hi");
        }
    }

    // equation ----------------------------------------------------------------
    {
        const json& e = root.at("equation");
        check_keys(e, {"preset", "p", "alpha", "delta", "table_s", "table_F"}, "equation");
        const std::string preset = text(e, "preset");
        if (preset == "heat") {
            cfg.preset = NonlinearityKind::heat;
            cfg.p = 1.0;
        } else if (preset == "power") {
            cfg.preset = NonlinearityKind::power;
            cfg.p = num(e, "p");
        } else if (preset == "custom") {
            cfg.preset = NonlinearityKind::custom;
            cfg.table_s = e.at("table_s").get<std::vector<double>>();
            cfg.table_F = e.at("table_F").get<std::vector<double>>();
        } else {
            throw std::invalid_argument("config: unknown equation preset '" + preset + "'");
        }
        if (e.contains("alpha")) {
            if (e.at("alpha").is_string()) {
                const std::string a = text(e, "alpha");
                if (a == "auto_heat")
                    cfg.alpha_policy = AlphaPolicy::heat_auto;
                else if (a == "auto_pme")
                    cfg.alpha_policy = AlphaPolicy::pme_auto;
                else
                    throw std::invalid_argument("config: alpha must be a number, 'auto_heat' or 'auto_pme'");
            } else {
                cfg.alpha_policy = AlphaPolicy::fixed;
                cfg.alpha = num(e, "alpha");
            }
        }
        cfg.delta = num_or(e, "delta", 1.0);
    }

    // initial data -------------------------------------------------------------
    {
        const json& d = root.at("initial_data");
        check_keys(d, {"kind", "t_start", "value", "A", "B", "mu", "C", "T_blow", "intercept", "slope"},
                   "initial_data");
        cfg.init_kind = parse_initial_kind(text(d, "kind"));
        cfg.t_start = num_or(d, "t_start", 0.0);
        switch (cfg.init_kind) {
            case InitialKind::constant: cfg.const_value = num(d, "value"); break;
            case InitialKind::heat_mode:
                cfg.A = num(d, "A");
                cfg.B = num(d, "B");
                cfg.mu = num(d, "mu");
                break;
            case InitialKind::fde_barenblatt: cfg.C = num_or(d, "C", 1.0); break;
            case InitialKind::pme_quadratic_pressure: cfg.T_blow = num(d, "T_blow"); break;
            case InitialKind::linear:
                cfg.intercept = num(d, "intercept");
                cfg.slope = num(d, "slope");
                break;
        }
    }

    // solver ---------------------------------------------------------------
    {
        const json& s = root.at("solver");
        check_keys(s, {"mode", "dt", "horizon", "newton_tol", "newton_max_iter", "bc",
                       "positivity_floor", "snapshot_stride"},
                   "solver");
        if (s.contains("mode")) {
            const std::string m = text(s, "mode");
            if (m == "solve")
                cfg.mode = RunMode::solve;
            else if (m == "sample_exact")
                cfg.mode = RunMode::sample_exact;
            else
                throw std::invalid_argument("config: solver mode must be 'solve' or 'sample_exact'");
        }
        cfg.dt = num(s, "dt");
        cfg.horizon = num(s, "horizon");
        cfg.newton_tol = num_or(s, "newton_tol", 1e-10);
        cfg.newton_max_iter = s.contains("newton_max_iter") ? static_cast<int>(integer(s, "newton_max_iter")) : 50;
        cfg.bc = parse_bc(text(s, "bc"));
        cfg.positivity_floor = num_or(s, "positivity_floor", 1e-12);
        cfg.snapshot_stride = s.contains("snapshot_stride") ? static_cast<int>(integer(s, "snapshot_stride")) : 1;
        if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0))
            throw std::invalid_argument("config: dt and horizon must be positive");
        if (!(cfg.newton_tol > 0.0) || cfg.snapshot_stride < 1)
            throw std::invalid_argument("config: tolerances and strides must be positive");
    }

    // analysis ---------------------------------------------------------------
    if (root.contains("analysis")) {
        const json& a = root.at("analysis");
        check_keys(a, {"range", "windows", "reports", "detail_csv", "sweep", "seed"}, "analysis");
        if (a.contains("range")) {
            const json& r = a.at("range");
            check_keys(r, {"m", "M"}, "analysis.range");
            cfg.range.emplace(num(r, "m"), num(r, "M"));
        }
        if (a.contains("windows")) {
            for (const json& w : a.at("windows")) {
                check_keys(w, {"x0", "t0", "R", "T"}, "analysis.windows[]");
                cfg.windows.push_back(Window{num(w, "x0"), num(w, "t0"), num(w, "R"), num(w, "T")});
            }
        }
        if (a.contains("reports")) {
            for (const json& r : a.at("reports")) {
                const std::string name = r.get<std::string>();
                static const std::set<std::string> known{"thm11", "fde", "pme_n1", "pme_n2",
                                                         "heat_sz", "inequality"};
                if (!known.count(name)) throw std::invalid_argument("config: unknown report '" + name + "'");
                cfg.reports.push_back(name);
            }
        }
        if (a.contains("detail_csv")) cfg.detail_csv = a.at("detail_csv").get<bool>();
        if (a.contains("sweep")) {
            const json& s = a.at("sweep");
            check_keys(s, {"theorem", "R_list", "schedule_coeff", "schedule_exponent", "x0", "t0", "delta"},
                       "analysis.sweep");
            SweepSpec spec;
            const std::string thm = text(s, "theorem");
            if (thm == "fde")
                spec.theorem = SweepTheorem::fde;
            else if (thm == "pme_n1")
                spec.theorem = SweepTheorem::pme_n1;
            else
                throw std::invalid_argument("config: sweep theorem must be 'fde' or 'pme_n1'");
            spec.R_list = s.at("R_list").get<std::vector<double>>();
            spec.schedule.coeff = num_or(s, "schedule_coeff", 1.0);
            spec.schedule.exponent =
                num_or(s, "schedule_exponent", spec.theorem == SweepTheorem::fde ? 2.0 : 1.0);
            spec.x0 = num(s, "x0");
            spec.t0 = num(s, "t0");
            spec.delta = num_or(s, "delta", 1.0);
            spec.p = cfg.p;
            cfg.sweep = spec;
        }
        if (a.contains("seed")) cfg.seed = static_cast<std::uint64_t>(integer(a, "seed"));
    }

    cfg.resolved_json = root.dump(2);
    cfg.config_hash = hash_hex(cfg.resolved_json);

    // Cross-field validation happens eagerly so a parsed config always runs.
    build_geometry(cfg);
    build_nonlinearity(cfg);
    if (cfg.bc == BoundaryCondition::dirichlet_exact && cfg.init_kind == InitialKind::linear)
        throw std::invalid_argument("config: dirichlet_exact needs exact-solution initial data");
    if (cfg.mode == RunMode::sample_exact && cfg.init_kind == InitialKind::linear)
        throw std::invalid_argument("config: sample_exact needs exact-solution initial data");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

GeometryPtr build_geometry(const ScenarioConfig& cfg) {
    if (cfg.gkind == GeometryKind::circle && cfg.circumference)
        return std::make_shared<ModelGeometry>(
            ModelGeometry::circle_with_circumference(*cfg.circumference, cfg.grid_points));
    return std::make_shared<ModelGeometry>(cfg.gkind, cfg.dim, cfg.r_lo, cfg.r_hi, cfg.grid_points);
}

Nonlinearity build_nonlinearity(const ScenarioConfig& cfg) {
    switch (cfg.preset) {
        case NonlinearityKind::heat: return Nonlinearity::heat();
        case NonlinearityKind::power: return Nonlinearity::power(cfg.p);
        case NonlinearityKind::custom: return Nonlinearity::custom(cfg.table_s, cfg.table_F);
    }
    throw std::logic_error("build_nonlinearity: unreachable");
}

std::optional<ExactSolution> build_exact(const ScenarioConfig& cfg) {
    switch (cfg.init_kind) {
        case InitialKind::constant: return ExactSolution::constant(cfg.const_value);
        case InitialKind::heat_mode: return ExactSolution::heat_mode(cfg.A, cfg.B, cfg.mu);
        case InitialKind::fde_barenblatt: return ExactSolution::fde_barenblatt(cfg.p, cfg.dim, cfg.C);
        case InitialKind::pme_quadratic_pressure:
            return ExactSolution::pme_quadratic_pressure(cfg.p, cfg.T_blow);
        case InitialKind::linear: return std::nullopt;
    }
    return std::nullopt;
}

Field build_initial(const ScenarioConfig& cfg, GeometryPtr geom) {
    if (cfg.init_kind == InitialKind::linear) {
        Field f(geom, cfg.t_start);
        for (int i = 0; i < f.size(); ++i) f.values[i] = cfg.intercept + cfg.slope * geom->node(i);
        if (f.min_value() <= 0.0)
            throw std::invalid_argument("config: linear initial data must stay positive on the grid");
        return f;
    }
    return build_exact(cfg)->sample(geom, cfg.t_start);
}

Trajectory build_trajectory(const ScenarioConfig& cfg) {
    GeometryPtr geom = build_geometry(cfg);
    const Nonlinearity nl = build_nonlinearity(cfg);
    const std::optional<ExactSolution> exact = build_exact(cfg);
    if (cfg.mode == RunMode::sample_exact) {
        const int snaps = static_cast<int>(std::lround(cfg.horizon / cfg.dt)) + 1;
        return sample_exact(*exact, geom, cfg.t_start, cfg.horizon, snaps);
    }
    SolverConfig scfg;
    scfg.dt = cfg.dt;
    scfg.newton_tol = cfg.newton_tol;
    scfg.newton_max_iter = cfg.newton_max_iter;
    scfg.bc = cfg.bc;
    scfg.positivity_floor = cfg.positivity_floor;
    scfg.snapshot_stride = cfg.snapshot_stride;
    const Field u0 = build_initial(cfg, geom);
    return solve(u0, cfg.horizon, nl, scfg, exact ? &*exact : nullptr);
}

namespace {

double resolve_alpha(const ScenarioConfig& cfg, double M) {
    switch (cfg.alpha_policy) {
        case AlphaPolicy::fixed: return cfg.alpha;
        case AlphaPolicy::heat_auto: return 1.0 + std::log(M);
        case AlphaPolicy::pme_auto:
            return cfg.p / (cfg.p - 1.0) * std::pow(M, cfg.p - 1.0) * (1.0 + cfg.delta);
    }
    return cfg.alpha;
}

void embed_config(ReportDoc& doc, const ScenarioConfig& cfg) {
    doc.section("config");
    doc.kv("content_hash", cfg.config_hash);
    doc.raw(cfg.resolved_json + "\n");
}

void append_estimate(ReportDoc& doc, const EstimateReport& rep, int index) {
    doc.section("window " + std::to_string(index) + " " + rep.theorem);
    doc.kv("x0", rep.window.x0);
    doc.kv("t0", rep.window.t0);
    doc.kv("R", rep.window.R);
    doc.kv("T", rep.window.T);
    doc.kv("m_window", rep.m_window);
    doc.kv("M_window", rep.M_window);
    doc.kv("alpha", rep.alpha);
    doc.kv("lhs_sup", rep.lhs_sup);
    doc.kv("lhs_argmax_r", rep.lhs_argmax_r);
    doc.kv("lhs_argmax_t", rep.lhs_argmax_t);
    doc.kv("term_R", rep.term_R);
    doc.kv("term_T", rep.term_T);
    doc.kv("term_k", rep.term_k);
    doc.kv("rhs", rep.rhs);
    doc.kv("ratio", rep.ratio);
    if (rep.theorem == "fde") doc.kv("identity_defect", rep.consistency_defect);
    if (rep.theorem == "pme_n2") doc.kv("gamma", rep.consistency_defect);
}

} // namespace

RunOutcome run_check(const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    if (!cfg.range) throw std::invalid_argument("check: analysis.range {m, M} is required");
    const Nonlinearity nl = build_nonlinearity(cfg);
    const double alpha = resolve_alpha(cfg, cfg.range->M);
    const ConditionReport rep = condition_report(nl, *cfg.range, alpha, cfg.dim);

    ReportDoc doc("degenlab condition report");
    doc.section("conditions");
    doc.kv("K", rep.K);
    doc.kv("delta", rep.delta);
    doc.kv("tau_min", rep.tau_min);
    doc.kv("gamma_2_10", rep.gamma_2_10);
    doc.kv("gamma_thm11C", rep.gamma_thm11C);
    doc.kv("alpha", rep.alpha);
    doc.kv("satisfied_A", rep.satisfied_A);
    doc.kv("satisfied_B", rep.satisfied_B);
    doc.kv("satisfied_C_2_10", rep.satisfied_C_2_10);
    doc.kv("satisfied_C_literal", rep.satisfied_C_literal);
    doc.kv("versions_match", rep.versions_match);

    bool ok = rep.satisfied_A && rep.satisfied_B && rep.satisfied_C_2_10;

    if (cfg.preset == NonlinearityKind::power && cfg.p < 1.0) {
        const Interval adm = fde_admissible_range(cfg.dim);
        const bool in_range = adm.contains(cfg.p);
        doc.section("fde");
        doc.kv("admissible_lo", adm.lo);
        doc.kv("admissible_hi", adm.hi);
        doc.kv("p", cfg.p);
        doc.kv("admissible", in_range);
        if (in_range) doc.kv("gamma", fde_gamma(cfg.dim, cfg.p));
        ok = ok && in_range;
    }
    if (cfg.preset == NonlinearityKind::power && cfg.p > 1.0 && cfg.dim >= 2) {
        const PinchResult pinch = pme_pinch(cfg.dim, cfg.p, cfg.delta, *cfg.range);
        doc.section("pme_pinch");
        doc.kv("oscillation", pinch.osc);
        doc.kv("threshold", pinch.threshold);
        doc.kv("holds", pinch.holds);
        doc.kv("gamma", pinch.gamma);
        doc.kv("alpha", pinch.alpha);
        ok = ok && pinch.holds;
    }

    doc.section("verdict");
    doc.kv("pass", ok);
    embed_config(doc, cfg);
    doc.write((fs::path(out_dir) / "check_report.txt").string());
    return RunOutcome{ok ? 0 : 2, doc.str()};
}

RunOutcome run_lemma(double a, double b, int n, long samples, std::uint64_t seed,
                     const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const double bound = supremum_bound(a, b, n);
    const LemmaWitness wit = witness(a, b, n);
    const double empirical = bruteforce_sup(a, b, n, samples, seed);
    const bool dominated = empirical <= bound + 1e-9;
    const bool attained = std::abs(wit.value * wit.value - bound) <= 1e-6 * std::max(1.0, bound);

    ReportDoc doc("degenlab matrix lemma report");
    doc.section("inputs");
    doc.kv("a", a);
    doc.kv("b", b);
    doc.kv("n", n);
    doc.kv("samples", samples);
    doc.kv("seed", static_cast<long>(seed));
    doc.section("results");
    doc.kv("supremum_bound", bound);
    doc.kv("witness_value_sq", wit.value * wit.value);
    doc.kv("bruteforce_sup", empirical);
    doc.kv("empirical_below_bound", dominated);
    doc.kv("witness_attains", attained);
    doc.section("verdict");
    doc.kv("pass", dominated && attained);

    std::ostringstream cfg;
    cfg << "lemma a=" << a << " b=" << b << " n=" << n << " samples=" << samples << " seed=" << seed;
    doc.section("config");
    doc.kv("content_hash", hash_hex(cfg.str()));
    doc.kv("invocation", cfg.str());
    doc.write((fs::path(out_dir) / "lemma_report.txt").string());
    return RunOutcome{dominated && attained ? 0 : 2, doc.str()};
}

RunOutcome run_solve(const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const Trajectory traj = build_trajectory(cfg);
    const Nonlinearity nl = build_nonlinearity(cfg);
    export_trajectory(traj, out_dir, cfg.resolved_json + "\ncontent_hash: " + cfg.config_hash + "\n");

    ReportDoc doc("degenlab solve report");
    doc.section("trajectory");
    doc.kv("snapshots", traj.snapshots());
    doc.kv("t_first", traj.times.front());
    doc.kv("t_last", traj.times.back());
    doc.kv("min_value", traj.min_value());
    doc.kv("max_value", traj.max_value());
    doc.kv("mass_first", weighted_mass(traj.field(0)));
    doc.kv("mass_last", weighted_mass(traj.field(traj.snapshots() - 1)));
    if (traj.snapshots() >= 3) {
        const std::vector<double> defect = residual(traj, nl);
        doc.kv("residual_max", *std::max_element(defect.begin(), defect.end()));
    }
    embed_config(doc, cfg);
    doc.write((fs::path(out_dir) / "solve_report.txt").string());
    return RunOutcome{0, doc.str()};
}

RunOutcome run_verify(const ScenarioConfig& cfg, const std::string& out_dir, int jobs) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    if (cfg.reports.empty()) throw std::invalid_argument("verify: analysis.reports is empty");
    if (jobs < 1) throw std::invalid_argument("verify: jobs must be >= 1");
    const Trajectory traj = build_trajectory(cfg);
    const Nonlinearity nl = build_nonlinearity(cfg);
    const double alpha = resolve_alpha(cfg, traj.max_value());
    const double k = traj.geom->ricci_lower_bound();

    struct Task {
        std::string name;
        Window window;
    };
    std::vector<Task> tasks;
    bool want_inequality = false;
    for (const std::string& name : cfg.reports) {
        if (name == "inequality") {
            want_inequality = true;
            continue;
        }
        for (const Window& win : cfg.windows) tasks.push_back(Task{name, win});
    }

    auto run_task = [&](const Task& task) -> std::pair<EstimateReport, std::string> {
        try {
            if (task.name == "thm11") {
                const ConditionReport cr = condition_report(
                    nl, ValueRange(traj.min_value(), traj.max_value()), alpha, traj.geom->dim());
                return {bound_ratio_thm11(traj, nl, alpha, task.window, cr), ""};
            }
            if (task.name == "fde") return {bound_ratio_fde(traj, cfg.p, task.window), ""};
            if (task.name == "pme_n1")
                return {bound_ratio_pme_n1(traj, cfg.p, cfg.delta, task.window), ""};
            if (task.name == "pme_n2")
                return {bound_ratio_pme_n2(traj, cfg.p, cfg.delta, task.window), ""};
            return {bound_ratio_heat_sz(traj, nl, task.window), ""};
        } catch (const std::domain_error& err) {
            return {EstimateReport{}, err.what()};
        } catch (const std::invalid_argument& err) {
            return {EstimateReport{}, err.what()};
        }
    };

    // Workers own disjoint tasks over the shared immutable trajectory; the
    // document is assembled in task order afterwards.
    std::vector<std::pair<EstimateReport, std::string>> results(tasks.size());
    if (jobs == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = run_task(tasks[i]);
    } else {
        std::size_t next = 0;
        while (next < tasks.size()) {
            const std::size_t batch = std::min<std::size_t>(jobs, tasks.size() - next);
            std::vector<std::future<std::pair<EstimateReport, std::string>>> futs;
            for (std::size_t j = 0; j < batch; ++j)
                futs.push_back(std::async(std::launch::async, run_task, tasks[next + j]));
            for (std::size_t j = 0; j < batch; ++j) results[next + j] = futs[j].get();
            next += batch;
        }
    }

    ReportDoc doc("degenlab verify report");
    bool ok = true;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const int index = static_cast<int>(i) + 1;
        const auto& [rep, refusal] = results[i];
        if (!refusal.empty()) {
            doc.section("window " + std::to_string(index) + " " + tasks[i].name);
            doc.kv("refused", refusal);
            ok = false;
            continue;
        }
        append_estimate(doc, rep, index);
        if (cfg.detail_csv) {
            std::ostringstream csv;
            csv << "r,lhs\n";
            for (std::size_t j = 0; j < rep.detail_r.size(); ++j)
                csv << fmt17(rep.detail_r[j]) << "," << fmt17(rep.detail_lhs[j]) << "\n";
            std::ofstream out(fs::path(out_dir) /
                              ("window_" + std::to_string(index) + "_" + tasks[i].name + ".csv"));
            out << csv.str();
        }
    }

    if (want_inequality) {
        const InequalityResidualReport rep = inequality_residual(traj, nl, alpha, k, traj.geom->dim());
        const double dt_eff = (traj.times.back() - traj.times.front()) / (traj.snapshots() - 1);
        const double h = traj.geom->spacing();
        const double eps = 10.0 * rep.scale * (h * h + dt_eff);
        const bool pass = rep.min_residual >= -eps;
        doc.section("inequality_residual");
        doc.kv("min_residual", rep.min_residual);
        doc.kv("node", rep.node);
        doc.kv("time", rep.time);
        doc.kv("scale", rep.scale);
        doc.kv("tolerance", eps);
        doc.kv("pass", pass);
        ok = ok && pass;
    }

    doc.section("verdict");
    doc.kv("pass", ok);
    embed_config(doc, cfg);
    doc.write((fs::path(out_dir) / "verify_report.txt").string());
    return RunOutcome{ok ? 0 : 2, doc.str()};
}

RunOutcome run_sweep(const ScenarioConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    if (!cfg.sweep) throw std::invalid_argument("sweep: analysis.sweep block is required");
    const auto traj = std::make_shared<const Trajectory>(build_trajectory(cfg));
    const SweepTable table =
        liouville_sweep([&](double, double) { return traj; }, *cfg.sweep);

    std::ostringstream csv;
    csv << "R,M_double,rhs,lhs_at_center,decreasing_flag\n";
    for (const SweepRow& row : table.rows)
        csv << fmt17(row.R) << "," << fmt17(row.M_double) << "," << fmt17(row.rhs) << ","
            << fmt17(row.lhs_center) << "," << (row.decreasing ? 1 : 0) << "\n";
    {
        std::ofstream out(fs::path(out_dir) / "sweep.csv");
        out << csv.str();
    }

    ReportDoc doc("degenlab liouville sweep");
    doc.section("sweep");
    doc.kv("theorem", cfg.sweep->theorem == SweepTheorem::fde ? "fde" : "pme_n1");
    doc.kv("rows", static_cast<long>(table.rows.size()));
    doc.kv("rhs_decreasing", table.rhs_decreasing);
    doc.raw(csv.str());
    embed_config(doc, cfg);
    doc.write((fs::path(out_dir) / "sweep_report.txt").string());
    return RunOutcome{0, doc.str()};
}

} // namespace degen
