#include "nitsche_iga/harness.hpp"

#include "nitsche_iga/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace niga {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (trim(value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    raise(ErrorCode::ConfigError, "key '" + key + "': expected a number, got '" + value + "'");
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (trim(value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    raise(ErrorCode::ConfigError, "key '" + key + "': expected an integer, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::string s = value;
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    raise(ErrorCode::ConfigError, "key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents, StudyResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << contents;
    if (!out) raise(ErrorCode::IoError, "failed writing '" + path.string() + "'");
    result.files.push_back(path.string());
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(ErrorCode::IoError, "cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    return dir;
}

std::string config_manifest(const RunConfig& cfg) {
    std::ostringstream os;
    os << "case = " << cfg.case_name << "\n";
    os << "geometry = " << cfg.geometry << "\n";
    os << "degree = " << cfg.degree << "\n";
    os << "continuity = " << (cfg.continuity < 0 ? cfg.degree - 1 : cfg.continuity) << "\n";
    os << "levels =";
    for (auto l : cfg.levels) os << ' ' << l;
    os << "\n";
    if (cfg.epsilon)
        os << "epsilon = " << num(*cfg.epsilon) << "\n";
    else
        os << "epsilon_factor = " << num(cfg.effective_epsilon_factor()) << "\n";
    if (cfg.tau_rule)
        os << "tau_rule = " << *cfg.tau_rule << "\ntau_scale = " << num(cfg.tau_scale) << "\n";
    else
        os << "num_steps = " << *cfg.num_steps << "\n";
    if (cfg.final_time) os << "final_time = " << num(*cfg.final_time) << "\n";
    os << "quadrature_order = " << cfg.quadrature_order << "\n";
    os << "solver_tol = " << num(cfg.solver_tol) << "\n";
    os << "solver_maxit = " << cfg.solver_maxit << "\n";
    os << "freeze_operator = " << (cfg.freeze_operator ? "true" : "false") << "\n";
    os << "mu_scale = " << num(cfg.mu_scale) << "\n";
    os << "c_scale = " << num(cfg.c_scale) << "\n";
    return os.str();
}

std::string level_manifest(const LevelSetup& s) {
    std::ostringstream os;
    const PhysicalMesh& mesh = s.disc->mesh();
    os << "[level spans=" << s.spans << "]\n";
    os << "dof = " << s.disc->dimension() << "\n";
    os << "quadrature_order = " << s.disc->quadrature_order() << "\n";
    os << "h_span = " << num(mesh.h_param()) << "\n";
    os << "h_max_K = " << num(mesh.h()) << "\n";
    os << "mesh_constant = " << num(mesh.mesh_constant()) << "\n";
    os << "theta = " << num(s.disc->space().direction(0).theta()) << " " << num(s.disc->space().direction(1).theta())
       << "\n";
    os << "trace_constant = " << num(s.floor.trace.flux) << "\n";
    os << "trace_constant_l2 = " << num(s.floor.trace.l2) << "\n";
    os << "alpha = " << num(s.floor.alpha) << "\n";
    os << "penalty_floor = " << num(s.floor.floor) << "\n";
    os << "epsilon_used = " << num(s.epsilon) << "\n";
    os << "penalty_above_floor = " << (s.epsilon >= s.floor.floor ? "true" : "false") << "\n";
    os << "final_time = " << num(s.grid.T) << "\n";
    os << "num_steps = " << s.grid.N << "\n";
    os << "tau = " << num(s.grid.tau()) << "\n";
    const AssumptionAudit audit = audit_coefficients(s.mc.problem, s.disc->geometry());
    os << "coefficient_audit = " << (audit.ok() ? "ok" : "warn") << "\n";
    for (const auto& w : audit.warnings) os << "warning = " << w << "\n";
    return os.str();
}

double evaluate(const Discretization& disc, std::span<const double> coef, const Vec2& xhat) {
    const TensorBasisEval b = disc.space().eval(xhat, 0);
    double v = 0.0;
    for (std::size_t a = 0; a < b.indices.size(); ++a) v += coef[b.indices[a]] * b.value[a];
    return v;
}

std::string snapshot_csv(const Discretization& disc, std::span<const double> coef) {
    std::ostringstream os;
    os << "x,y,value\n";
    constexpr int n = 64;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 xhat(static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1));
            const Vec2 x = disc.geometry().eval(xhat).x;
            os << sci(x[0]) << ',' << sci(x[1]) << ',' << sci(evaluate(disc, coef, xhat)) << '\n';
        }
    return os.str();
}

std::string boundary_csv(const Discretization& disc, std::span<const double> coef) {
    std::ostringstream os;
    os << "side,s,x,y,value\n";
    constexpr int n = 129;
    for (int side = 0; side < 4; ++side)
        for (int i = 0; i < n; ++i) {
            const double s = static_cast<double>(i) / (n - 1);
            Vec2 xhat;
            switch (static_cast<Side>(side)) {
                case Side::Left: xhat = {0.0, s}; break;
                case Side::Right: xhat = {1.0, s}; break;
                case Side::Bottom: xhat = {s, 0.0}; break;
                case Side::Top: xhat = {s, 1.0}; break;
            }
            const Vec2 x = disc.geometry().eval(xhat).x;
            os << to_string(static_cast<Side>(side)) << ',' << num(s) << ',' << sci(x[0]) << ',' << sci(x[1]) << ','
               << sci(evaluate(disc, coef, xhat)) << '\n';
        }
    return os.str();
}

SolverOptions solver_options(const RunConfig& cfg) { return SolverOptions{cfg.solver_tol, cfg.solver_maxit}; }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs one level end to end, accumulating the space-time errors on the fly.
LevelRecord run_level(const RunConfig& cfg, std::size_t index, int threads) {
    const auto t0 = Clock::now();
    LevelSetup s = setup_level(cfg, cfg.levels[index], threads);
    AssembledForms forms(*s.disc, s.mc.problem, s.epsilon, cfg.freeze_operator);
    std::vector<double> u0 = project_initial(*s.disc, s.mc.problem.u0, solver_options(cfg));
    LevelRecord rec;
    rec.assembly_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    SpaceTimeError acc(*s.disc, s.mc, s.grid);
    MarchOptions mo;
    mo.solver = solver_options(cfg);
    mo.keep_trajectory = false;
    mo.observer = [&](std::size_t n, const std::vector<double>& u) { acc.add_step(n, u); };
    const SolutionTrajectory traj = march(forms, s.grid, std::move(u0), mo);
    rec.solve_seconds = seconds_since(t1);

    rec.level = index;
    rec.spans = s.spans;
    rec.h = s.disc->mesh().h_param();
    rec.tau = s.grid.tau();
    rec.steps = s.grid.N;
    rec.dof = s.disc->dimension();
    rec.epsilon = s.epsilon;
    rec.penalty_floor = s.floor.floor;
    rec.err_l2h1 = acc.l2_h1();
    rec.err_l2l2 = acc.l2_l2();
    rec.err_bdry = boundary_defect(*s.disc, traj.coefficients.back(), s.mc.problem, s.grid.T);
    return rec;
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "case")
        case_name = value;
    else if (key == "geometry")
        geometry = value;
    else if (key == "degree")
        degree = static_cast<int>(parse_int(key, value));
    else if (key == "continuity")
        continuity = static_cast<int>(parse_int(key, value));
    else if (key == "levels") {
        levels.clear();
        for (const auto& tok : split_list(value)) {
            const long v = parse_int(key, tok);
            if (v < 1) raise(ErrorCode::ConfigError, "key 'levels': span counts must be positive");
            levels.push_back(static_cast<std::size_t>(v));
        }
    } else if (key == "epsilon")
        epsilon = parse_double(key, value);
    else if (key == "epsilon_factor")
        epsilon_factor = parse_double(key, value);
    else if (key == "tau_rule")
        tau_rule = value;
    else if (key == "num_steps") {
        const long v = parse_int(key, value);
        if (v < 1) raise(ErrorCode::ConfigError, "key 'num_steps' must be at least 1");
        num_steps = static_cast<std::size_t>(v);
    } else if (key == "tau_scale")
        tau_scale = parse_double(key, value);
    else if (key == "final_time")
        final_time = parse_double(key, value);
    else if (key == "quadrature_order")
        quadrature_order = static_cast<int>(parse_int(key, value));
    else if (key == "solver_tol")
        solver_tol = parse_double(key, value);
    else if (key == "solver_maxit")
        solver_maxit = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "freeze_operator")
        freeze_operator = parse_bool(key, value);
    else if (key == "snapshot_times") {
        snapshot_times.clear();
        for (const auto& tok : split_list(value)) snapshot_times.push_back(parse_double(key, tok));
    } else if (key == "calibrate_factors") {
        calibrate_factors.clear();
        for (const auto& tok : split_list(value)) calibrate_factors.push_back(parse_double(key, tok));
    } else if (key == "mu_scale")
        mu_scale = parse_double(key, value);
    else if (key == "c_scale")
        c_scale = parse_double(key, value);
    else if (key == "out")
        out_dir = value;
    else if (key == "threads")
        threads = static_cast<int>(parse_int(key, value));
    else
        raise(ErrorCode::ConfigError, "unknown config key '" + key + "'");
}

RunConfig RunConfig::parse(std::string_view text) {
    RunConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) raise(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

int RunConfig::tau_exponent() const {
    if (!tau_rule) return 0;
    const std::string& r = *tau_rule;
    if (r.rfind("h^", 0) != 0) raise(ErrorCode::ConfigError, "key 'tau_rule': expected \"h^k\" or \"h^<p>\"");
    const std::string e = r.substr(2);
    if (e == "k") return degree;
    const long p = parse_int("tau_rule", e);
    if (p < 1) raise(ErrorCode::ConfigError, "key 'tau_rule': exponent must be positive");
    return static_cast<int>(p);
}

void RunConfig::validate() const {
    if (case_name.empty()) raise(ErrorCode::ConfigError, "missing config key 'case'");
    if (degree == 0) raise(ErrorCode::ConfigError, "missing config key 'degree'");
    if (degree < kMinDegree || degree > kMaxDegree)
        raise(ErrorCode::ConfigError, "key 'degree' must lie in [1, 4]");
    if (continuity >= degree || continuity < -1)
        raise(ErrorCode::ConfigError, "key 'continuity' must lie in [0, degree-1]");
    if (levels.empty()) raise(ErrorCode::ConfigError, "missing config key 'levels'");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1]) raise(ErrorCode::ConfigError, "key 'levels' must be strictly increasing");
    if (epsilon && epsilon_factor)
        raise(ErrorCode::ConfigError, "keys 'epsilon' and 'epsilon_factor' are mutually exclusive");
    if (!epsilon && !epsilon_factor)
        raise(ErrorCode::ConfigError, "missing config key 'epsilon_factor' (or 'epsilon')");
    if (epsilon && !(*epsilon >= 0.0)) raise(ErrorCode::ConfigError, "key 'epsilon' must be nonnegative");
    if (epsilon_factor && !(*epsilon_factor >= 0.0))
        raise(ErrorCode::ConfigError, "key 'epsilon_factor' must be nonnegative");
    if (tau_rule && num_steps) raise(ErrorCode::ConfigError, "keys 'tau_rule' and 'num_steps' are mutually exclusive");
    if (!tau_rule && !num_steps) raise(ErrorCode::ConfigError, "missing config key 'num_steps' (or 'tau_rule')");
    if (tau_rule) tau_exponent();
    if (!(tau_scale > 0.0)) raise(ErrorCode::ConfigError, "key 'tau_scale' must be positive");
    if (final_time && !(*final_time > 0.0)) raise(ErrorCode::ConfigError, "key 'final_time' must be positive");
    if (quadrature_order < 0 || quadrature_order > 16)
        raise(ErrorCode::ConfigError, "key 'quadrature_order' must lie in [1, 16]");
    if (!(solver_tol > 0.0)) raise(ErrorCode::ConfigError, "key 'solver_tol' must be positive");
    if (!(mu_scale > 0.0) || !(c_scale > 0.0)) raise(ErrorCode::ConfigError, "coefficient scalings must be positive");
    if (threads < 1) raise(ErrorCode::ConfigError, "key 'threads' must be at least 1");
    const auto names = builtin_case_names();
    if (std::find(names.begin(), names.end(), case_name) == names.end())
        raise(ErrorCode::UnknownCase, "no builtin case named '" + case_name + "'");
}

// ---------------------------------------------------------------------------

LevelSetup setup_level(const RunConfig& cfg, std::size_t spans, int threads) {
    cfg.validate();
    ManufacturedCase mc = builtin_case(cfg.case_name, CaseOptions{cfg.mu_scale, cfg.c_scale});
    if (cfg.final_time) mc.problem.T = *cfg.final_time;
    auto geometry = std::make_shared<const GeometryMap>(GeometryMap::from_name(cfg.geometry));
    const int k = cfg.degree;
    const int continuity = cfg.continuity < 0 ? k - 1 : cfg.continuity;
    const int mult = k - continuity;
    TensorSpace space(KnotVector::uniform(k, spans, mult), KnotVector::uniform(k, spans, mult));
    auto disc = std::make_unique<Discretization>(geometry, std::move(space),
                                                 DiscretizationOptions{cfg.quadrature_order, threads});
    const PenaltyFloor floor = penalty_floor(*disc, mc.problem);
    const double eps = cfg.epsilon ? *cfg.epsilon : cfg.effective_epsilon_factor() * floor.floor;
    std::optional<TimeGrid> grid;
    if (cfg.num_steps) {
        grid.emplace(mc.problem.T, *cfg.num_steps);
    } else {
        const double tau = cfg.tau_scale * std::pow(disc->mesh().h_param(), cfg.tau_exponent());
        grid.emplace(TimeGrid::from_step(mc.problem.T, tau));
    }
    return LevelSetup{spans, std::move(mc), std::move(disc), floor, eps, *grid};
}

StudyResult run_solve(const RunConfig& cfg) {
    cfg.validate();
    StudyResult result;
    const auto dir = prepare_out_dir(cfg);
    const auto t0 = Clock::now();
    LevelSetup s = setup_level(cfg, cfg.levels.back(), cfg.threads);
    AssembledForms forms(*s.disc, s.mc.problem, s.epsilon, cfg.freeze_operator);
    std::vector<double> u0 = project_initial(*s.disc, s.mc.problem.u0, solver_options(cfg));
    const double setup_seconds = seconds_since(t0);

    std::vector<double> times = cfg.snapshot_times.empty() ? std::vector<double>{s.grid.T} : cfg.snapshot_times;
    std::vector<std::size_t> steps;
    for (double t : times) {
        if (t < 0.0 || t > s.grid.T + 1e-12)
            raise(ErrorCode::ConfigError, "key 'snapshot_times': " + num(t) + " outside [0, T]");
        steps.push_back(static_cast<std::size_t>(std::llround(t / s.grid.tau())));
    }
    std::vector<std::pair<std::size_t, std::vector<double>>> snaps;
    const auto t1 = Clock::now();
    SpaceTimeError acc(*s.disc, s.mc, s.grid);
    MarchOptions mo;
    mo.solver = solver_options(cfg);
    mo.keep_trajectory = false;
    mo.observer = [&](std::size_t n, const std::vector<double>& u) {
        acc.add_step(n, u);
        if (std::find(steps.begin(), steps.end(), n) != steps.end()) snaps.emplace_back(n, u);
    };
    const SolutionTrajectory traj = march(forms, s.grid, std::move(u0), mo);
    const double march_seconds = seconds_since(t1);

    double max_abs = 0.0;
    for (const auto& [n, u] : snaps) {
        const std::string tag = num(s.grid.time(n));
        write_file(dir / ("snapshot_t" + tag + ".csv"), snapshot_csv(*s.disc, u), result);
        write_file(dir / ("boundary_t" + tag + ".csv"), boundary_csv(*s.disc, u), result);
        for (double v : u) max_abs = std::max(max_abs, std::abs(v));
    }

    LevelRecord rec;
    rec.level = cfg.levels.size() - 1;
    rec.spans = s.spans;
    rec.h = s.disc->mesh().h_param();
    rec.tau = s.grid.tau();
    rec.steps = s.grid.N;
    rec.dof = s.disc->dimension();
    rec.epsilon = s.epsilon;
    rec.penalty_floor = s.floor.floor;
    rec.err_l2h1 = acc.l2_h1();
    rec.err_l2l2 = acc.l2_l2();
    rec.err_bdry = boundary_defect(*s.disc, traj.coefficients.back(), s.mc.problem, s.grid.T);
    rec.assembly_seconds = setup_seconds;
    rec.solve_seconds = march_seconds;
    result.levels.push_back(rec);

    std::ostringstream manifest;
    manifest << "command = solve\n" << config_manifest(cfg) << level_manifest(s);
    manifest << "err_l2h1 = " << sci(rec.err_l2h1) << "\nerr_l2l2 = " << sci(rec.err_l2l2)
             << "\nerr_bdry = " << sci(rec.err_bdry) << "\n";
    write_file(dir / "manifest.txt", manifest.str(), result);

    std::ostringstream os;
    os << "solve: case=" << cfg.case_name << " geometry=" << cfg.geometry << " k=" << cfg.degree
       << " spans=" << s.spans << " dof=" << rec.dof << "\n";
    os << "  penalty_floor=" << num(s.floor.floor) << " (C*=" << num(s.floor.trace.flux) << ")"
       << " epsilon=" << num(s.epsilon) << "\n";
    os << "  steps=" << s.grid.N << " tau=" << num(s.grid.tau()) << " T=" << num(s.grid.T) << "\n";
    os << "  err_l2h1=" << sci(rec.err_l2h1) << " err_l2l2=" << sci(rec.err_l2l2) << " err_bdry=" << sci(rec.err_bdry)
       << "\n";
    os << "  max |coefficient| at snapshots=" << sci(max_abs) << "\n";
    os << "  time: setup " << num(setup_seconds) << " s, march " << num(march_seconds) << " s\n";
    os << "  wrote " << result.files.size() << " files to " << dir.string() << "\n";
    result.summary = os.str();
    return result;
}

StudyResult run_convergence(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.levels.size() < 2) raise(ErrorCode::InsufficientLevels, "convergence study needs at least two levels");
    StudyResult result;
    const auto dir = prepare_out_dir(cfg);

    const std::size_t nl = cfg.levels.size();
    std::vector<LevelRecord> records(nl);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), nl);
    if (workers <= 1) {
        for (std::size_t i = 0; i < nl; ++i) records[i] = run_level(cfg, i, cfg.threads);
    } else {
        std::vector<std::exception_ptr> errors(nl);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < nl; i += workers) {
                    try {
                        records[i] = run_level(cfg, i, 1);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<double> hs, errs;
    for (const auto& r : records) {
        hs.push_back(r.h);
        errs.push_back(r.err_l2h1);
    }
    const RateTable rates = rate_table(hs, errs);

    std::ostringstream csv;
    csv << "level,h,tau,dof,err_l2h1,err_l2l2,err_bdry,rate_l2h1\n";
    for (std::size_t i = 0; i < nl; ++i) {
        const auto& r = records[i];
        csv << r.level << ',' << sci(r.h) << ',' << sci(r.tau) << ',' << r.dof << ',' << sci(r.err_l2h1) << ','
            << sci(r.err_l2l2) << ',' << sci(r.err_bdry) << ',';
        if (i > 0) csv << sci(rates.pairwise[i - 1]);
        csv << '\n';
    }
    write_file(dir / "convergence.csv", csv.str(), result);

    std::ostringstream dat;
    dat << "# h err_l2h1\n";
    for (const auto& r : records) dat << sci(r.h) << ' ' << sci(r.err_l2h1) << '\n';
    write_file(dir / "err_vs_h.dat", dat.str(), result);

    std::ostringstream manifest;
    manifest << "command = convergence\n" << config_manifest(cfg);
    for (const auto& r : records)
        manifest << "[level spans=" << r.spans << "]\ndof = " << r.dof << "\npenalty_floor = " << num(r.penalty_floor)
                 << "\nepsilon_used = " << num(r.epsilon) << "\nnum_steps = " << r.steps << "\ntau = " << num(r.tau)
                 << "\n";
    manifest << "slope_l2h1 = " << num(rates.slope) << "\n";
    write_file(dir / "manifest.txt", manifest.str(), result);

    std::ostringstream os;
    os << "convergence: case=" << cfg.case_name << " geometry=" << cfg.geometry << " k=" << cfg.degree << "\n";
    os << "  " << std::left << std::setw(7) << "spans" << std::setw(8) << "dof" << std::setw(8) << "steps"
       << std::setw(18) << "err_l2h1" << std::setw(18) << "err_l2l2" << std::setw(18) << "err_bdry" << std::setw(9)
       << "rate" << "time[s]\n";
    for (std::size_t i = 0; i < nl; ++i) {
        const auto& r = records[i];
        os << "  " << std::left << std::setw(7) << r.spans << std::setw(8) << r.dof << std::setw(8) << r.steps
           << std::setw(18) << sci(r.err_l2h1) << std::setw(18) << sci(r.err_l2l2) << std::setw(18) << sci(r.err_bdry)
           << std::setw(9) << (i > 0 ? num(std::round(rates.pairwise[i - 1] * 1000) / 1000) : std::string("-"))
           << num(std::round((r.assembly_seconds + r.solve_seconds) * 100) / 100) << "\n";
    }
    os << "fitted slope (L2(J;H1)) = " << num(rates.slope) << "\n";
    result.summary = os.str();
    result.levels = std::move(records);
    result.rates = rates;
    return result;
}

StudyResult run_calibrate(const RunConfig& cfg) {
    cfg.validate();
    StudyResult result;
    const auto dir = prepare_out_dir(cfg);
    std::ostringstream csv, os, manifest;
    csv << "spans,dof,trace_constant,penalty_floor,factor,epsilon,alpha_hat_min,pass\n";
    os << "calibrate: case=" << cfg.case_name << " geometry=" << cfg.geometry << " k=" << cfg.degree << "\n";
    manifest << "command = calibrate\n" << config_manifest(cfg);
    for (std::size_t spans : cfg.levels) {
        LevelSetup s = setup_level(cfg, spans, cfg.threads);
        manifest << level_manifest(s);
        os << "  spans=" << spans << " dof=" << s.disc->dimension() << " C*=" << num(s.floor.trace.flux)
           << " alpha=" << num(s.floor.alpha) << " mu1=" << num(s.mc.problem.mu1)
           << " penalty_floor=" << num(s.floor.floor) << "\n";
        if (s.disc->dimension() > kMaxAuditDofs) {
            os << "    coercivity audit skipped (more than " << kMaxAuditDofs << " DOF)\n";
            continue;
        }
        const double T = s.mc.problem.T;
        for (double factor : cfg.calibrate_factors) {
            const double eps = factor * s.floor.floor;
            double amin = std::numeric_limits<double>::infinity();
            bool pass = true;
            os << "    factor " << std::left << std::setw(6) << num(factor) << " eps=" << std::setw(14) << num(eps)
               << " alpha_hat(t=0,T/2,T) =";
            for (double t : {0.0, 0.5 * T, T}) {
                const CoercivityAudit a = coercivity_audit(*s.disc, s.mc.problem, eps, t);
                amin = std::min(amin, a.alpha_hat);
                pass = pass && a.pass;
                os << ' ' << sci(a.alpha_hat);
            }
            os << (pass ? "  pass" : "  FAIL") << "\n";
            csv << spans << ',' << s.disc->dimension() << ',' << sci(s.floor.trace.flux) << ',' << sci(s.floor.floor)
                << ',' << num(factor) << ',' << sci(eps) << ',' << sci(amin) << ',' << (pass ? 1 : 0) << '\n';
        }
    }
    write_file(dir / "calibrate.csv", csv.str(), result);
    write_file(dir / "manifest.txt", manifest.str(), result);
    result.summary = os.str();
    return result;
}

StudyResult run_command(const std::string& command, const RunConfig& cfg) {
    if (command == "solve") return run_solve(cfg);
    if (command == "convergence") return run_convergence(cfg);
    if (command == "calibrate") return run_calibrate(cfg);
    raise(ErrorCode::ConfigError, "unknown command '" + command + "'");
}

}  // namespace niga
