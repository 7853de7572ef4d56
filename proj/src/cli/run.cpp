#include "ellround/adversary.hpp"
#include "ellround/cli.hpp"
#include "ellround/coreset.hpp"
#include "ellround/oracle.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace ellround::cli {

using nlohmann::ordered_json;

Mode parse_mode(const std::string& name) {
    if (name == "seeded") return Mode::seeded;
    if (name == "online") return Mode::online;
    if (name == "coreset") return Mode::coreset;
    if (name == "adversary") return Mode::adversary;
    if (name == "verify") return Mode::verify;
    if (name == "inequalities") return Mode::inequalities;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

const char* to_string(Mode m) {
    switch (m) {
        case Mode::seeded: return "seeded";
        case Mode::online: return "online";
        case Mode::coreset: return "coreset";
        case Mode::adversary: return "adversary";
        case Mode::verify: return "verify";
        case Mode::inequalities: return "inequalities";
    }
    return "?";
}

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Non-finite values become null in JSON.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

struct CertificateTally {
    std::size_t every = 0;
    double tol = 1e-7;
    std::size_t checked = 0;
    std::size_t outer_failures = 0;
    std::size_t inner_failures = 0;
    std::size_t probabilistic = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> first_failure;
    std::optional<Vector> first_direction;

    void observe(const StepRecord& r, const State& before, const State& after, const Vector& z) {
        if (every == 0 || r.t % every != 0) return;
        if (r.kind == StepKind::skip) return;
        const StepCertificate c = check_monotone_step(before, after, z, tol);
        ++checked;
        if (!c.inner_exact) ++probabilistic;
        worst_margin = std::min(worst_margin, c.worst_margin);
        if (!c.outer_ok) ++outer_failures;
        if (!c.inner_ok) ++inner_failures;
        if ((!c.outer_ok || !c.inner_ok) && !first_failure) {
            first_failure = r.t;
            first_direction = c.violating_direction;
        }
    }

    bool ok() const { return outer_failures == 0 && inner_failures == 0; }

    ordered_json to_json() const {
        ordered_json j;
        j["every"] = every;
        j["checked"] = checked;
        j["outer_failures"] = outer_failures;
        j["inner_failures"] = inner_failures;
        j["probabilistic"] = probabilistic;
        j["worst_margin"] = checked ? num(worst_margin) : ordered_json(nullptr);
        j["first_failure"] = first_failure ? ordered_json(*first_failure) : ordered_json(nullptr);
        if (first_direction) j["violating_direction"] = std::vector<double>(first_direction->begin(), first_direction->end());
        return j;
    }
};

ordered_json steps_json(const RunReport& report) {
    ordered_json arr = ordered_json::array();
    for (const StepRecord& r : report.steps) {
        ordered_json s;
        s["t"] = r.t;
        s["kind"] = to_string(r.kind);
        s["alpha_inv"] = 1.0 / r.alpha;
        s["log_vol"] = r.log_volume;
        s["gamma"] = r.gamma;
        arr.push_back(std::move(s));
    }
    return arr;
}

void write_trace(const std::filesystem::path& file, const RunReport& report) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "t,kind,alpha_inv,log_vol,gamma\n";
    for (const StepRecord& r : report.steps) {
        out << r.t << ',' << to_string(r.kind) << ',' << g17(1.0 / r.alpha) << ',' << g17(r.log_volume) << ','
            << g17(r.gamma) << '\n';
    }
}

void write_json(const std::filesystem::path& file, const ordered_json& j) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

PointList load_stream(const RunConfig& cfg) {
    const bool has_file = !cfg.input_path.empty();
    if (has_file == cfg.generator.has_value()) {
        throw std::invalid_argument("exactly one of --input and --gen is required");
    }
    PointList pts = has_file ? parse_points_file(cfg.input_path) : generate(*cfg.generator);
    if (pts.empty()) throw std::invalid_argument("input stream is empty");
    return pts;
}

double max_distance(const PointList& pts, const Vector& c) {
    double r = 0;
    for (const Vector& p : pts) r = std::max(r, (p - c).norm());
    return r;
}

int run_inequalities(const RunConfig& cfg, ordered_json& report, std::ostream& log) {
    const auto results = inequality_suite(cfg.grid_density);
    ordered_json rows = ordered_json::array();
    bool ok = true;
    for (const InequalityResult& r : results) {
        ordered_json c;
        c["id"] = r.id;
        c["worst_slack"] = num(r.worst_slack);
        c["argmin"] = r.argmin;
        c["points"] = r.points;
        rows.push_back(std::move(c));
        const bool pass = r.worst_slack >= -1e-12;
        ok = ok && pass;
        log << r.id << ": worst slack " << g17(r.worst_slack) << (pass ? "" : "  VIOLATED") << '\n';
    }
    report["constants"]["inequalities"] = rows;
    report["constants"]["grid_density"] = cfg.grid_density;
    return ok ? kExitOk : kExitViolation;
}

int run_adversary_mode(const RunConfig& cfg, ordered_json& report, const std::filesystem::path& out, std::ostream& log) {
    AdversaryOptions opts;
    opts.check_every = cfg.verify_every.value_or(cfg.d <= 6 ? 1 : 0);
    opts.check_tolerance = cfg.tolerance;
    const AdversaryTrace tr = run_adversary(library_rule, cfg.d, cfg.radius, opts);
    report["n"] = tr.points.size();
    const AdversaryStep& last = tr.steps.back();
    report["final_alpha_inv"] = last.a;
    ordered_json steps = ordered_json::array();
    for (const AdversaryStep& s : tr.steps) {
        ordered_json j;
        j["t"] = s.t;
        j["phase"] = s.phase;
        j["kind"] = to_string(s.kind);
        j["A"] = s.a;
        j["P"] = s.p;
        steps.push_back(std::move(j));
    }
    report["steps"] = steps;
    report["certificates"] = {{"every", opts.check_every}, {"checked", tr.checked_steps}, {"outer_failures", 0}, {"inner_failures", 0}};
    auto& k = report["constants"];
    k["R"] = cfg.radius;
    k["stop_reason"] = to_string(tr.stop_reason);
    k["phase_two_steps"] = tr.phase_two_steps;
    k["P_T"] = last.p;
    k["A_T"] = last.a;
    k["volume_target"] = static_cast<double>(cfg.d) * std::log(cfg.radius / 2);
    k["min_step_ratio"] = num(tr.min_step_ratio);
    k["A_T_log_d_over_P_T"] = last.p > 0 ? num(last.a * std::log(static_cast<double>(cfg.d)) / last.p) : ordered_json(nullptr);

    std::ofstream csv(out / "adversary.csv");
    if (!csv) throw std::runtime_error("cannot write adversary.csv");
    csv << "t,A_t,P_t,step_kind\n";
    for (const AdversaryStep& s : tr.steps) csv << s.t << ',' << g17(s.a) << ',' << g17(s.p) << ',' << to_string(s.kind) << '\n';
    log << "adversary: T = " << tr.steps.size() << ", P_T = " << g17(last.p) << ", A_T = " << g17(last.a) << ", stop "
        << to_string(tr.stop_reason) << '\n';
    return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
    try {
        const std::filesystem::path out(cfg.out_dir);
        std::filesystem::create_directories(out);
        ordered_json report;
        report["mode"] = to_string(cfg.mode);
        report["d"] = cfg.d;
        report["n"] = 0;
        report["final_alpha_inv"] = nullptr;
        report["steps"] = ordered_json::array();
        report["certificates"] = ordered_json::object();
        report["constants"] = ordered_json::object();

        int code = kExitOk;
        if (cfg.mode == Mode::inequalities) {
            code = run_inequalities(cfg, report, log);
            write_json(out / "report.json", report);
            return code;
        }
        if (cfg.mode == Mode::adversary) {
            if (cfg.d < 2) throw std::invalid_argument("adversary mode needs d >= 2");
            code = run_adversary_mode(cfg, report, out, log);
            write_json(out / "report.json", report);
            return code;
        }

        const PointList pts = load_stream(cfg);
        const Eigen::Index d = pts.front().size();
        report["d"] = d;
        report["n"] = pts.size();

        CertificateTally tally;
        tally.tol = cfg.tolerance;
        tally.every = cfg.verify_every.value_or(d <= 6 ? 1 : 0);
        if (cfg.mode == Mode::verify && tally.every == 0) tally.every = 1;
        RunOptions opts;
        opts.path = cfg.path;
        opts.observer = [&tally](const StepRecord& r, const State& b, const State& a, const Vector& z) {
            tally.observe(r, b, a, z);
        };

        const bool seeded = cfg.mode == Mode::seeded || (cfg.mode == Mode::verify && cfg.r0 > 0);
        State final_state;
        RunReport rr;
        auto& k = report["constants"];
        if (seeded) {
            if (!(cfg.r0 > 0)) throw std::invalid_argument("seeded mode needs --r0 > 0");
            const Vector c0 = cfg.c0.value_or(Vector::Zero(d));
            if (c0.size() != d) throw std::invalid_argument("--c0 dimension does not match the points");
            std::tie(final_state, rr) = run_seeded(pts, c0, cfg.r0, opts);
            const double big_r = max_distance(pts, c0);
            k["r0"] = cfg.r0;
            k["max_distance"] = big_r;
            k["phase_two_start"] = rr.phase_two_start;
            const double dd = static_cast<double>(d);
            k["bound"] = rr.phase_two_start ? 8 * dd * (std::log(dd) + std::log(std::max(big_r, cfg.r0) / cfg.r0))
                                            : 2 * std::max(big_r, cfg.r0) / cfg.r0;
        } else if (cfg.mode == Mode::coreset) {
            auto [trace, report_c] = run_coreset(pts, opts);
            final_state = *trace.driver;
            rr = std::move(report_c);
            std::ofstream idx(out / "coreset.txt");
            if (!idx) throw std::runtime_error("cannot write coreset.txt");
            for (std::size_t t : trace.selected) idx << t << '\n';
            std::size_t dim = 0, jump = 0;
            for (SelectionReason r : trace.reasons) (r == SelectionReason::dim_growth ? dim : jump)++;
            k["selected"] = trace.selected.size();
            k["dim_growth"] = dim;
            k["volume_jump"] = jump;
            double worst = -std::numeric_limits<double>::infinity();
            const double scale = 2 * std::exp(1.0) + 1;
            const Ellipsoid<double> grown = final_state.outer.scaled(scale);
            for (const Vector& p : pts) worst = std::max(worst, membership(grown, p, kSpanTolerance));
            k["outer_margin_2e_plus_1"] = num(worst);
        } else {
            std::tie(final_state, rr) = run_fully_online(pts, opts);
        }
        report["final_alpha_inv"] = rr.final_alpha_inv;
        report["steps"] = steps_json(rr);
        k["rank"] = final_state.dim();
        k["irregular_count"] = rr.irregular_count;
        k["sum_regular_two_gamma"] = rr.sum_regular_two_gamma;
        k["aspect_surrogate"] = num(rr.aspect_surrogate);
        if (cfg.generator && cfg.generator->kind == Generator::lattice) {
            const double dn = static_cast<double>(d) * static_cast<double>(cfg.generator->lattice_n);
            k["N"] = cfg.generator->lattice_n;
            k["C_empirical"] = rr.final_alpha_inv / (static_cast<double>(d) * std::log(dn));
        }

        // Final sandwich, outer side: every point inside c + E.
        double worst_point = -std::numeric_limits<double>::infinity();
        for (const Vector& p : pts) worst_point = std::max(worst_point, membership(final_state.outer, p, kSpanTolerance));
        ordered_json cert = tally.to_json();
        cert["worst_point_margin"] = num(worst_point);
        const bool points_ok = cfg.mode == Mode::coreset || worst_point <= cfg.tolerance;
        cert["points_ok"] = points_ok;
        report["certificates"] = cert;
        write_trace(out / "trace.csv", rr);
        write_json(out / "report.json", report);

        log << to_string(cfg.mode) << ": d = " << d << ", n = " << pts.size() << ", 1/alpha = " << g17(rr.final_alpha_inv)
            << ", checked " << tally.checked << " steps\n";
        if (cfg.mode == Mode::verify && (!tally.ok() || !points_ok)) {
            log << "verify: invariant violation";
            if (tally.first_failure) log << " at step " << *tally.first_failure;
            log << '\n';
            return kExitViolation;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace ellround::cli
