#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seapass/error.hpp"
#include "seapass/freq.hpp"
#include "seapass/model.hpp"
#include "seapass/rational.hpp"

namespace seapass {

struct AnalysisTolerances {
    double boundary_band = 1e-6;
    double phase_tol_deg = 1e-6;

    friend bool operator==(const AnalysisTolerances&, const AnalysisTolerances&) = default;
};

/// Explicit numerator/denominator, ascending powers of s. Used by bode only.
struct TransferOverride {
    std::vector<double> num;
    std::vector<double> den;

    friend bool operator==(const TransferOverride&, const TransferOverride&) = default;
};

struct AnalysisConfig {
    PlantParams plant;
    ControllerGains gains;
    RenderTarget target;
    SweepSpec sweep;
    AnalysisTolerances tolerances;
    std::optional<TransferOverride> transfer_function;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;

    [[nodiscard]] RationalTransferFunction impedance() const {
        if (transfer_function)
            return {Polynomial(transfer_function->num), Polynomial(transfer_function->den)};
        return build_output_impedance(plant, gains, target);
    }
};

namespace detail {

using nlohmann::json;

// Best-effort 1-based line of a dotted field path: each key is searched for
// after the position of its parent.
inline int locate_line(const std::string& text, const std::string& path) {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    std::stringstream ss(path);
    std::string key;
    while (std::getline(ss, key, '.')) {
        const std::size_t at = text.find('"' + key + '"', pos);
        if (at == std::string::npos) break;
        found = at;
        pos = at + key.size() + 2;
    }
    if (found == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(found), '\n'));
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        const int line = locate_line(text_, path);
        std::string msg = "config";
        if (line > 0) msg += " line " + std::to_string(line);
        msg += ": field '" + path + "' " + what;
        throw Error(ErrorKind::Config, msg);
    }

    const json& object(const json& parent, const std::string& key, const std::string& path) const {
        if (!parent.contains(key)) fail(path, "is missing");
        const json& v = parent.at(key);
        if (!v.is_object()) fail(path, "must be an object");
        return v;
    }

    void only_keys(const json& obj, std::set<std::string> allowed, const std::string& prefix) const {
        for (const auto& [k, v] : obj.items()) {
            if (!allowed.count(k)) fail(prefix.empty() ? k : prefix + "." + k, "is not a recognised key");
        }
    }

    double number(const json& obj, const std::string& key, const std::string& path) const {
        if (!obj.contains(key)) fail(path, "is missing");
        const json& v = obj.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) fail(path, "must be a finite number");
        return v.get<double>();
    }

    double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) const {
        return obj.contains(key) ? number(obj, key, path) : fallback;
    }

    std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path) const {
        if (!obj.contains(key)) fail(path, "is missing");
        const json& v = obj.at(key);
        if (!v.is_array() || v.empty()) fail(path, "must be a non-empty array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) fail(path, "must be a non-empty array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    void require(bool ok, const std::string& path, const char* what) const {
        if (!ok) fail(path, what);
    }

private:
    const std::string& text_;
};

}  // namespace detail

inline AnalysisConfig parse_config(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
        const std::size_t upto = std::min(byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(ErrorKind::Config, "config line " + std::to_string(line) + ": malformed JSON");
    }
    const detail::ConfigReader r(text);
    if (!doc.is_object()) throw Error(ErrorKind::Config, "config: top level must be an object");
    r.only_keys(doc, {"plant", "gains", "target", "sweep", "tolerances", "transfer_function"}, "");

    AnalysisConfig cfg;
    const json& plant = r.object(doc, "plant", "plant");
    r.only_keys(plant, {"inertia", "damping", "stiffness"}, "plant");
    cfg.plant.inertia = r.number(plant, "inertia", "plant.inertia");
    cfg.plant.damping = r.number(plant, "damping", "plant.damping");
    cfg.plant.stiffness = r.number(plant, "stiffness", "plant.stiffness");
    r.require(cfg.plant.inertia > 0.0, "plant.inertia", "must be > 0");
    r.require(cfg.plant.damping >= 0.0, "plant.damping", "must be >= 0");
    r.require(cfg.plant.stiffness > 0.0, "plant.stiffness", "must be > 0");

    const json& gains = r.object(doc, "gains", "gains");
    r.only_keys(gains, {"velocity_p", "velocity_i", "torque_p", "torque_i"}, "gains");
    cfg.gains.velocity_p = r.number(gains, "velocity_p", "gains.velocity_p");
    cfg.gains.velocity_i = r.number(gains, "velocity_i", "gains.velocity_i");
    cfg.gains.torque_p = r.number(gains, "torque_p", "gains.torque_p");
    cfg.gains.torque_i = r.number(gains, "torque_i", "gains.torque_i");
    r.require(cfg.gains.velocity_p > 0.0, "gains.velocity_p", "must be > 0");
    r.require(cfg.gains.velocity_i >= 0.0, "gains.velocity_i", "must be >= 0");
    r.require(cfg.gains.torque_p > 0.0, "gains.torque_p", "must be > 0");
    r.require(cfg.gains.torque_i >= 0.0, "gains.torque_i", "must be >= 0");

    const json& target = r.object(doc, "target", "target");
    r.only_keys(target, {"type", "stiffness"}, "target");
    if (!target.contains("type") || !target.at("type").is_string()) r.fail("target.type", "must be \"null\" or \"spring\"");
    const std::string type = target.at("type").get<std::string>();
    if (type == "null") {
        if (target.contains("stiffness")) r.fail("target.stiffness", "is only valid for a spring target");
        cfg.target = RenderTarget::null();
    } else if (type == "spring") {
        cfg.target = RenderTarget::spring(r.number(target, "stiffness", "target.stiffness"));
        r.require(cfg.target.stiffness >= 0.0, "target.stiffness", "must be >= 0");
    } else {
        r.fail("target.type", "must be \"null\" or \"spring\"");
    }

    if (doc.contains("sweep")) {
        const json& sweep = r.object(doc, "sweep", "sweep");
        r.only_keys(sweep, {"wmin", "wmax", "points_per_decade"}, "sweep");
        cfg.sweep.wmin = r.number_or(sweep, "wmin", "sweep.wmin", cfg.sweep.wmin);
        cfg.sweep.wmax = r.number_or(sweep, "wmax", "sweep.wmax", cfg.sweep.wmax);
        if (sweep.contains("points_per_decade")) {
            const json& p = sweep.at("points_per_decade");
            if (!p.is_number_integer()) r.fail("sweep.points_per_decade", "must be an integer");
            cfg.sweep.points_per_decade = p.get<int>();
        }
        r.require(cfg.sweep.wmin > 0.0, "sweep.wmin", "must be > 0");
        r.require(cfg.sweep.wmax > cfg.sweep.wmin, "sweep.wmax", "must exceed sweep.wmin");
        r.require(cfg.sweep.points_per_decade >= 1, "sweep.points_per_decade", "must be >= 1");
    }

    if (doc.contains("tolerances")) {
        const json& tol = r.object(doc, "tolerances", "tolerances");
        r.only_keys(tol, {"boundary_band", "phase_tol_deg"}, "tolerances");
        cfg.tolerances.boundary_band =
            r.number_or(tol, "boundary_band", "tolerances.boundary_band", cfg.tolerances.boundary_band);
        cfg.tolerances.phase_tol_deg =
            r.number_or(tol, "phase_tol_deg", "tolerances.phase_tol_deg", cfg.tolerances.phase_tol_deg);
        r.require(cfg.tolerances.boundary_band >= 0.0, "tolerances.boundary_band", "must be >= 0");
        r.require(cfg.tolerances.phase_tol_deg >= 0.0, "tolerances.phase_tol_deg", "must be >= 0");
    }

    if (doc.contains("transfer_function")) {
        const json& tf = r.object(doc, "transfer_function", "transfer_function");
        r.only_keys(tf, {"num", "den"}, "transfer_function");
        TransferOverride o{r.numbers(tf, "num", "transfer_function.num"), r.numbers(tf, "den", "transfer_function.den")};
        if (Polynomial(o.den).is_zero()) r.fail("transfer_function.den", "must not be identically zero");
        cfg.transfer_function = std::move(o);
    }
    return cfg;
}

inline AnalysisConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline nlohmann::json config_to_json(const AnalysisConfig& cfg) {
    nlohmann::json doc;
    doc["plant"] = {{"inertia", cfg.plant.inertia}, {"damping", cfg.plant.damping}, {"stiffness", cfg.plant.stiffness}};
    doc["gains"] = {{"velocity_p", cfg.gains.velocity_p},
                    {"velocity_i", cfg.gains.velocity_i},
                    {"torque_p", cfg.gains.torque_p},
                    {"torque_i", cfg.gains.torque_i}};
    if (cfg.target.is_spring())
        doc["target"] = {{"type", "spring"}, {"stiffness", cfg.target.stiffness}};
    else
        doc["target"] = {{"type", "null"}};
    doc["sweep"] = {{"wmin", cfg.sweep.wmin},
                    {"wmax", cfg.sweep.wmax},
                    {"points_per_decade", cfg.sweep.points_per_decade}};
    doc["tolerances"] = {{"boundary_band", cfg.tolerances.boundary_band},
                         {"phase_tol_deg", cfg.tolerances.phase_tol_deg}};
    if (cfg.transfer_function)
        doc["transfer_function"] = {{"num", cfg.transfer_function->num}, {"den", cfg.transfer_function->den}};
    return doc;
}

inline std::string emit_config(const AnalysisConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

}  // namespace seapass
