#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seapass/bounds.hpp"
#include "seapass/config.hpp"
#include "seapass/freq.hpp"
#include "seapass/guidelines.hpp"
#include "seapass/passivity.hpp"
#include "seapass/tuner.hpp"

namespace seapass {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNotPassive = 2, kExitMarginal = 3 };

enum class OutputFormat { Table, Json };

/// Reference setups shared by the reproduction scenarios.
namespace scenarios {

inline PlantParams nominal_plant() { return {0.2, 3.0, 250.0}; }
inline ControllerGains nominal_null_gains() { return {20.0, 10.0, 5.0, 5.0}; }
inline ControllerGains nominal_spring_gains() { return {20.0, 100.0, 30.0, 5.0}; }
inline double nominal_spring_stiffness() { return 50.0; }
/// Two null-impedance controllers differing only in the torque integral gain.
inline ControllerGains damping_study_gains(double torque_i) { return {20.0, 10.0, 5.0, torque_i}; }

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"null-gain-sweeps", "spring-gain-sweeps", "damping-counterexample",
                                            "bounds-tables"};
    return n;
}

}  // namespace scenarios

namespace detail {

inline std::string num(double v, const char* f = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string percent(double m) { return num(100.0 * m, "%.1f") + "%"; }

inline nlohmann::json bound_json(const Bound& b) {
    if (b.is_finite()) return b.value();
    return to_string(b);
}

inline nlohmann::json verdict_json(const PassivityVerdict& v) {
    nlohmann::json failed = nlohmann::json::array();
    for (const auto& c : v.failed_conditions)
        failed.push_back({{"id", c.id}, {"description", c.description}, {"margin", c.margin}});
    nlohmann::json j{{"route", to_string(v.route)}, {"passive", v.passive}, {"marginal", v.marginal},
                     {"failed_conditions", failed}};
    j["witness_frequency"] = v.witness_frequency ? nlohmann::json(*v.witness_frequency) : nlohmann::json();
    return j;
}

inline nlohmann::json bounds_json(const BoundsReport& r) {
    nlohmann::json margins = nlohmann::json::array();
    for (const auto& m : r.margins) {
        margins.push_back({{"constraint", m.constraint},
                           {"bound", bound_json(m.bound)},
                           {"actual", m.actual},
                           {"margin", m.margin ? nlohmann::json(*m.margin) : nlohmann::json()}});
    }
    nlohmann::json j{{"b_max", bound_json(r.b_max)},
                     {"j_max", bound_json(r.j_max)},
                     {"j_max_null", bound_json(r.j_max_null)},
                     {"binding", r.binding},
                     {"margins", margins}};
    j["kd_max"] = r.kd_max ? bound_json(*r.kd_max) : nlohmann::json();
    return j;
}

inline const char* symbol_of(const std::string& constraint) {
    if (constraint == "damping") return "b";
    if (constraint == "inertia") return "J";
    return "Kd";
}

inline void print_margins(std::ostream& out, const BoundsReport& r) {
    for (const auto& m : r.margins) {
        out << "  " << m.constraint << ": " << symbol_of(m.constraint) << " = " << num(m.actual) << ", bound "
            << to_string(m.bound);
        if (m.margin) out << ", margin " << percent(*m.margin);
        out << "\n";
    }
}

inline std::string binding_text(const BoundsReport& r) {
    std::string s = r.binding == "none" ? std::string("none") : r.binding + " bound";
    for (const auto& m : r.margins) {
        if (m.constraint == r.binding && m.margin) s += ", margin " + percent(*m.margin);
    }
    return s;
}

// A frequency where Re Z(jw) < 0, from the exact test or else the log grid.
inline std::optional<double> witness_for(const PassivityVerdict& numeric, const RationalTransferFunction& tf,
                                         const SweepSpec& sweep) {
    if (numeric.witness_frequency) return numeric.witness_frequency;
    const auto scan = scan_real_part(tf, sweep.wmin, sweep.wmax, sweep.points_per_decade);
    if (scan.min_normalized_real < 0.0) return scan.at_frequency;
    return std::nullopt;
}

}  // namespace detail

/// 0 passive, 2 not passive, 3 within the boundary band of the closed-form test.
inline int cmd_check(const AnalysisConfig& cfg, OutputFormat fmt, std::ostream& out) {
    const auto closed = check_closed_form(cfg.plant, cfg.gains, cfg.target, cfg.tolerances.boundary_band);
    const auto tf = build_output_impedance(cfg.plant, cfg.gains, cfg.target);
    PassivityTolerances tol;
    tol.boundary_band = cfg.tolerances.boundary_band;
    const auto numeric = check_numeric(tf, tol);
    const auto report = bounds_report(cfg.plant, cfg.gains, cfg.target);
    const auto witness = closed.passive ? std::nullopt : detail::witness_for(numeric, tf, cfg.sweep);

    const int code = closed.marginal ? kExitMarginal : (closed.passive ? kExitOk : kExitNotPassive);
    const char* verdict = closed.marginal ? "marginal" : (closed.passive ? "passive" : "not passive");

    if (fmt == OutputFormat::Json) {
        nlohmann::json j{{"verdict", verdict},
                         {"target", to_string(cfg.target)},
                         {"closed_form", detail::verdict_json(closed)},
                         {"numeric", detail::verdict_json(numeric)},
                         {"routes_agree", closed.passive == numeric.passive},
                         {"bounds", detail::bounds_json(report)}};
        j["witness_frequency"] = witness ? nlohmann::json(*witness) : nlohmann::json();
        out << j.dump(2) << "\n";
        return code;
    }
    out << verdict << "; binding: " << detail::binding_text(report) << "\n";
    out << "target: " << to_string(cfg.target) << "\n";
    out << "closed-form: " << (closed.passive ? "passive" : "not passive") << (closed.marginal ? " (marginal)" : "")
        << "\n";
    for (const auto& c : closed.failed_conditions)
        out << "  failed " << c.id << ": " << c.description << ", margin " << detail::percent(c.margin) << "\n";
    out << "numeric: " << (numeric.passive ? "passive" : "not passive") << (numeric.marginal ? " (marginal)" : "")
        << "\n";
    for (const auto& c : numeric.failed_conditions) out << "  failed " << c.id << ": " << c.description << "\n";
    out << "margins:\n";
    detail::print_margins(out, report);
    out << "witness frequency: " << (witness ? detail::num(*witness) + " rad/s" : std::string("none")) << "\n";
    return code;
}

inline int cmd_bounds(const AnalysisConfig& cfg, OutputFormat fmt, std::ostream& out) {
    const auto r = bounds_report(cfg.plant, cfg.gains, cfg.target);
    if (fmt == OutputFormat::Json) {
        out << detail::bounds_json(r).dump(2) << "\n";
        return kExitOk;
    }
    out << "b_max: " << to_string(r.b_max) << "\n";
    out << "J_max (null): " << to_string(r.j_max_null) << "\n";
    if (cfg.target.is_spring()) {
        out << "J_max (spring, Kd = " << detail::num(cfg.target.stiffness) << "): " << to_string(r.j_max) << "\n";
        out << "Kd_max: " << (r.kd_max ? to_string(*r.kd_max) : std::string("none")) << "\n";
    }
    out << "binding: " << detail::binding_text(r) << "\n";
    out << "margins:\n";
    detail::print_margins(out, r);
    return kExitOk;
}

/// CSV rows `w_rad_s,magnitude_db,phase_deg,regime`, 17 significant digits.
/// Rows get regime "none" when the sweep cannot be segmented.
inline void write_bode_csv(std::ostream& out, const std::vector<BodeSample>& samples,
                           const std::optional<RegimeSegmentation>& seg) {
    out << "w_rad_s,magnitude_db,phase_deg,regime\n";
    for (const auto& s : samples) {
        out << detail::num(s.w, "%.17g") << ',' << detail::num(s.magnitude_db, "%.17g") << ','
            << detail::num(s.phase_deg, "%.17g") << ',' << (seg ? regime_label(*seg, s.w) : std::string("none"))
            << '\n';
    }
}

inline std::optional<RegimeSegmentation> try_segment(const std::vector<BodeSample>& samples,
                                                     const RenderTarget& target) {
    try {
        return segment_regimes(samples, target);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientSpan) throw;
        return std::nullopt;
    }
}

namespace detail {

inline bool write_csv_file(const std::filesystem::path& path, const std::vector<BodeSample>& samples,
                           const std::optional<RegimeSegmentation>& seg) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    write_bode_csv(f, samples, seg);
    f.flush();
    return static_cast<bool>(f);
}

}  // namespace detail

/// Writes the sweep to `path`, or to `out` when `path` is empty.
inline int cmd_bode(const AnalysisConfig& cfg, const std::string& path, std::ostream& out, std::ostream& err) {
    const auto tf = cfg.impedance();
    const auto samples = bode(tf, cfg.sweep);
    const auto seg = cfg.transfer_function ? std::nullopt : try_segment(samples, cfg.target);
    if (path.empty()) {
        write_bode_csv(out, samples, seg);
        return kExitOk;
    }
    if (!detail::write_csv_file(path, samples, seg)) {
        err << "error: cannot write '" << path << "'\n";
        return kExitUsage;
    }
    return kExitOk;
}

inline int cmd_compare(const AnalysisConfig& cfg, OutputFormat fmt, std::ostream& out) {
    const auto verdicts = evaluate_prior_guidelines(cfg.plant, cfg.gains, cfg.target);
    if (fmt == OutputFormat::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : verdicts) {
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& t : v.terms) {
                terms.push_back({{"expression", t.expression},
                                 {"lhs", t.lhs},
                                 {"rhs", std::isinf(t.rhs) ? nlohmann::json("unbounded") : nlohmann::json(t.rhs)},
                                 {"holds", t.holds},
                                 {"margin", t.margin}});
            }
            arr.push_back({{"guideline", v.author}, {"passes", v.passes}, {"terms", terms}});
        }
        out << nlohmann::json{{"target", to_string(cfg.target)}, {"guidelines", arr}}.dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& v : verdicts) {
        out << v.author << ": " << (v.passes ? "pass" : "fail") << "\n";
        for (const auto& t : v.terms) {
            out << "  " << (t.holds ? "ok  " : "FAIL") << " " << t.expression << ": " << detail::num(t.lhs) << " vs "
                << (std::isinf(t.rhs) ? std::string("unbounded") : detail::num(t.rhs)) << ", margin "
                << detail::percent(t.margin) << "\n";
        }
    }
    return kExitOk;
}

/// Recommends gains for the config's plant and target; `both` also requires
/// null-impedance passivity. 2 when no gain set meets the margin.
inline int cmd_tune(const AnalysisConfig& cfg, double margin, bool both, OutputFormat fmt, std::ostream& out,
                    std::ostream& err) {
    TuningSpec spec;
    spec.safety_margin = margin;
    if (cfg.target.is_spring()) {
        spec.target = both ? TuningSpec::Target::Both : TuningSpec::Target::Spring;
        spec.kd = cfg.target.stiffness;
    }
    TuningResult r;
    try {
        r = tune(cfg.plant, spec);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Infeasible) throw;
        err << "infeasible: " << e.what() << "\n";
        return kExitNotPassive;
    }
    if (fmt == OutputFormat::Json) {
        out << nlohmann::json{{"gains",
                               {{"velocity_p", r.gains.velocity_p},
                                {"velocity_i", r.gains.velocity_i},
                                {"torque_p", r.gains.torque_p},
                                {"torque_i", r.gains.torque_i}}},
                              {"trace", r.trace}}
                   .dump(2)
            << "\n";
        return kExitOk;
    }
    out << "velocity_p: " << detail::num(r.gains.velocity_p, "%.10g") << "\n"
        << "velocity_i: " << detail::num(r.gains.velocity_i, "%.10g") << "\n"
        << "torque_p: " << detail::num(r.gains.torque_p, "%.10g") << "\n"
        << "torque_i: " << detail::num(r.gains.torque_i, "%.10g") << "\n";
    for (const auto& line : r.trace) out << "- " << line << "\n";
    return kExitOk;
}

struct ScenarioAssertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ScenarioResult {
    std::vector<std::string> files;
    std::vector<ScenarioAssertion> assertions;
    nlohmann::json data;

    [[nodiscard]] bool all_passed() const {
        for (const auto& a : assertions)
            if (!a.passed) return false;
        return true;
    }
};

namespace detail {

inline void emit_sweep_member(ScenarioResult& res, const std::filesystem::path& dir, const std::string& stem,
                              const PlantParams& plant, const ControllerGains& g, const RenderTarget& target) {
    const auto closed = check_closed_form(plant, g, target);
    const auto tf = build_output_impedance(plant, g, target);
    const auto numeric = check_numeric(tf);
    const bool agree = closed.marginal || closed.passive == numeric.passive;
    res.assertions.push_back({stem + " routes agree", agree,
                              std::string(closed.passive ? "passive" : "not passive") +
                                  (closed.marginal ? " (marginal)" : "")});
    const auto samples = bode(tf, SweepSpec{});
    const auto file = dir / (stem + ".csv");
    if (!write_csv_file(file, samples, try_segment(samples, target)))
        throw Error(ErrorKind::Config, "cannot write '" + file.string() + "'");
    res.files.push_back(file.string());
    res.data.push_back({{"file", file.filename().string()}, {"passive", closed.passive}});
}

inline void gain_sweeps(ScenarioResult& res, const std::filesystem::path& dir, const std::string& prefix,
                        const PlantParams& plant, const ControllerGains& nominal, const RenderTarget& target) {
    // Multiples of the nominal gains; the sweep values are a local choice.
    static constexpr double kMultipliers[] = {0.5, 1.0, 2.0, 4.0};
    const std::pair<const char*, double ControllerGains::*> members[] = {
        {"velocity_p", &ControllerGains::velocity_p},
        {"velocity_i", &ControllerGains::velocity_i},
        {"torque_p", &ControllerGains::torque_p},
        {"torque_i", &ControllerGains::torque_i},
    };
    res.data = nlohmann::json::array();
    for (const auto& [name, member] : members) {
        for (double k : kMultipliers) {
            ControllerGains g = nominal;
            g.*member *= k;
            emit_sweep_member(res, dir, prefix + "_" + name + "_x" + num(k, "%g"), plant, g, target);
        }
    }
    if (target.is_spring()) {
        for (double k : kMultipliers) {
            emit_sweep_member(res, dir, prefix + "_stiffness_x" + num(k, "%g"), plant, nominal,
                              RenderTarget::spring(target.stiffness * k));
        }
    }
}

inline void damping_counterexample(ScenarioResult& res, const std::filesystem::path& dir) {
    const auto plant = scenarios::nominal_plant();
    res.data = nlohmann::json::array();
    int index = 1;
    for (double it : {15.0, 80.0}) {
        const auto g = scenarios::damping_study_gains(it);
        const auto tf = build_null_impedance(plant, g);
        const auto samples = bode(tf, SweepSpec{});
        const auto ext = phase_extrema(tf, samples);
        const auto file = dir / ("controller" + std::to_string(index) + ".csv");
        if (!write_csv_file(file, samples, try_segment(samples, RenderTarget::null())))
            throw Error(ErrorKind::Config, "cannot write '" + file.string() + "'");
        res.files.push_back(file.string());
        const auto closed = check_closed_form(plant, g, RenderTarget::null());
        res.data.push_back({{"controller", index},
                            {"torque_i", it},
                            {"passive", closed.passive},
                            {"max_phase_deg", ext.max_phase_deg},
                            {"argmax_w", ext.argmax_w}});
        const std::string where = "max phase " + num(ext.max_phase_deg, "%.4f") + " deg at " + num(ext.argmax_w) +
                                  " rad/s";
        if (index == 1) {
            res.assertions.push_back({"controller 1 max phase <= 90 deg", ext.max_phase_deg <= 90.0 + 1e-6, where});
        } else {
            res.assertions.push_back({"controller 2 max phase exceeds 90 deg", ext.max_phase_deg > 90.0, where});
            res.assertions.push_back({"controller 2 max phase in [93.2, 93.8] deg",
                                      ext.max_phase_deg >= 93.2 && ext.max_phase_deg <= 93.8, where});
            res.assertions.push_back({"controller 2 fails the damping bound",
                                      closed.failed("damping_bound"), "b_max = " + to_string(b_max(g))});
        }
        ++index;
    }
}

inline void bounds_tables(ScenarioResult& res, const std::filesystem::path& dir) {
    const auto plant = scenarios::nominal_plant();
    const auto null_gains = scenarios::nominal_null_gains();
    const auto spring_gains = scenarios::nominal_spring_gains();
    const auto spring = RenderTarget::spring(scenarios::nominal_spring_stiffness());

    const auto guideline_json = [](const std::vector<GuidelineVerdict>& vs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : vs) {
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& t : v.terms)
                terms.push_back({{"expression", t.expression},
                                 {"lhs", t.lhs},
                                 {"rhs", std::isinf(t.rhs) ? nlohmann::json("unbounded") : nlohmann::json(t.rhs)},
                                 {"holds", t.holds}});
            arr.push_back({{"guideline", v.author}, {"passes", v.passes}, {"terms", terms}});
        }
        return arr;
    };
    const auto null_report = bounds_report(plant, null_gains, RenderTarget::null());
    const auto spring_report = bounds_report(plant, spring_gains, spring);
    res.data = {{"null", {{"bounds", bounds_json(null_report)},
                          {"guidelines", guideline_json(evaluate_prior_guidelines(plant, null_gains,
                                                                                  RenderTarget::null()))}}},
                {"spring", {{"bounds", bounds_json(spring_report)},
                            {"guidelines", guideline_json(evaluate_prior_guidelines(plant, spring_gains, spring))}}}};
    const auto file = dir / "bounds_tables.json";
    std::ofstream f(file, std::ios::binary);
    if (!(f << res.data.dump(2) << "\n")) throw Error(ErrorKind::Config, "cannot write '" + file.string() + "'");
    res.files.push_back(file.string());

    const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    res.assertions.push_back({"null b_max = 10", null_report.b_max.is_finite() && null_report.b_max.value() == 10.0,
                              to_string(null_report.b_max)});
    res.assertions.push_back({"null J_max = 2323/150",
                              null_report.j_max.is_finite() && rel(null_report.j_max.value(), 2323.0 / 150.0) < 1e-12,
                              to_string(null_report.j_max)});
    res.assertions.push_back({"spring Kd_max = 74625000/1073500",
                              spring_report.kd_max && spring_report.kd_max->is_finite() &&
                                  rel(spring_report.kd_max->value(), 74625000.0 / 1073500.0) < 1e-12,
                              spring_report.kd_max ? to_string(*spring_report.kd_max) : "none"});
}

}  // namespace detail

/// Regenerates one reference scenario into `dir`. 0 when every embedded
/// assertion holds, 2 otherwise; UnknownScenario for an unknown id.
inline ScenarioResult run_scenario(const std::string& scenario, const std::filesystem::path& dir) {
    const auto& known = scenarios::names();
    if (std::find(known.begin(), known.end(), scenario) == known.end())
        throw Error(ErrorKind::UnknownScenario, "unknown scenario '" + scenario + "'");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Config, "cannot create '" + dir.string() + "'");

    ScenarioResult res;
    if (scenario == "null-gain-sweeps") {
        detail::gain_sweeps(res, dir, "null", scenarios::nominal_plant(), scenarios::nominal_null_gains(),
                            RenderTarget::null());
    } else if (scenario == "spring-gain-sweeps") {
        detail::gain_sweeps(res, dir, "spring", scenarios::nominal_plant(), scenarios::nominal_spring_gains(),
                            RenderTarget::spring(scenarios::nominal_spring_stiffness()));
    } else if (scenario == "damping-counterexample") {
        detail::damping_counterexample(res, dir);
    } else {
        detail::bounds_tables(res, dir);
    }
    return res;
}

inline int cmd_reproduce(const std::string& scenario, const std::string& dir, OutputFormat fmt, std::ostream& out) {
    const auto res = run_scenario(scenario, dir);
    if (fmt == OutputFormat::Json) {
        nlohmann::json asserts = nlohmann::json::array();
        for (const auto& a : res.assertions)
            asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
        out << nlohmann::json{{"scenario", scenario},
                              {"files", res.files},
                              {"assertions", asserts},
                              {"all_passed", res.all_passed()}}
                   .dump(2)
            << "\n";
    } else {
        out << "scenario " << scenario << ": " << res.files.size() << " file(s) in " << dir << "\n";
        for (const auto& a : res.assertions)
            out << (a.passed ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
    }
    return res.all_passed() ? kExitOk : kExitNotPassive;
}

}  // namespace seapass
