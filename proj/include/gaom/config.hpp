#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gaom/constants.hpp"
#include "gaom/errors.hpp"
#include "gaom/params.hpp"

namespace gaom {

enum class Spacing { Lin, Log };
enum class Format { Csv, Json };

inline const char* to_string(Spacing s) {
    return s == Spacing::Lin ? "lin" : "log";
}
inline const char* to_string(Format f) {
    return f == Format::Csv ? "csv" : "json";
}

/// System parameters in user units: every rate/frequency is value/2pi in Hz.
struct ParamsHz {
    double omega_d = 0.0;
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double g = 0.0;
    double J = 0.0;
    double Delta1 = 0.0;
    double Delta2 = 0.0;
    double kappa1_e = 0.0;
    double kappa1_o = 0.0;
    double kappa2_e = 0.0;
    double kappa2_o = 0.0;
    double gain = 0.0;

    /// Convert to SI angular units and validate.
    SystemParams to_system() const {
        SystemParams p;
        p.omega_d = two_pi * omega_d;
        p.omega_m = two_pi * omega_m;
        p.gamma_m = two_pi * gamma_m;
        p.g = two_pi * g;
        p.J = two_pi * J;
        p.Delta1 = two_pi * Delta1;
        p.Delta2 = two_pi * Delta2;
        p.kappa1_e = two_pi * kappa1_e;
        p.kappa1_o = two_pi * kappa1_o;
        p.kappa2_e = two_pi * kappa2_e;
        p.kappa2_o = two_pi * kappa2_o;
        p.gain = two_pi * gain;
        validate(p);
        return p;
    }
};

struct SweepConfig {
    double p_min_w = 1e-9;
    double p_max_w = 1e-5;
    std::size_t points = 400;
    Spacing spacing = Spacing::Log;
};

struct NoiseConfig {
    double n_m = 0.0;
    double delta_omega_over_2pi_hz = 30.0;
    std::size_t n_points = 41;
};

struct OutputConfig {
    std::string path;            ///< empty means stdout
    Format format = Format::Csv;
};

/// Full run description as read from / written to a JSON config file.
struct RunConfig {
    ParamsHz params;
    SweepConfig sweep;
    NoiseConfig noise;
    OutputConfig outputs;

    SystemParams system_params() const { return params.to_system(); }
};

namespace detail {

inline double require_number(const nlohmann::json& obj, const char* section,
                             const char* key) {
    if (!obj.contains(key))
        throw config_error(std::string("config: missing required field ") +
                           section + "." + key);
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw config_error(std::string("config: field ") + section + "." + key +
                           " must be a number");
    return v.get<double>();
}

inline double optional_number(const nlohmann::json& obj, const char* section,
                              const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw config_error(std::string("config: field ") + section + "." + key +
                           " must be a number");
    return v.get<double>();
}

inline std::size_t optional_count(const nlohmann::json& obj,
                                  const char* section, const char* key,
                                  std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned())
        throw config_error(std::string("config: field ") + section + "." + key +
                           " must be a nonnegative integer");
    return v.get<std::size_t>();
}

inline void reject_unknown(const nlohmann::json& obj, const char* section,
                           std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok)
            throw config_error(std::string("config: unknown field ") + section +
                               "." + key);
    }
}

inline ParamsHz parse_params(const nlohmann::json& j) {
    reject_unknown(j, "params",
                   {"omega_d_over_2pi_hz", "omega_m_over_2pi_hz",
                    "gamma_m_over_2pi_hz", "g_over_2pi_hz", "j_over_2pi_hz",
                    "delta1_over_2pi_hz", "delta2_over_2pi_hz",
                    "kappa1_e_over_2pi_hz", "kappa1_o_over_2pi_hz",
                    "kappa1_over_2pi_hz", "kappa2_e_over_2pi_hz",
                    "kappa2_o_over_2pi_hz", "kappa2_over_2pi_hz",
                    "gain_over_2pi_hz", "kappa_eff_over_2pi_hz"});

    ParamsHz p;
    p.omega_d = require_number(j, "params", "omega_d_over_2pi_hz");
    p.omega_m = require_number(j, "params", "omega_m_over_2pi_hz");
    p.gamma_m = require_number(j, "params", "gamma_m_over_2pi_hz");
    p.g = require_number(j, "params", "g_over_2pi_hz");
    p.J = require_number(j, "params", "j_over_2pi_hz");
    p.Delta1 = require_number(j, "params", "delta1_over_2pi_hz");
    p.Delta2 = require_number(j, "params", "delta2_over_2pi_hz");
    p.kappa1_e = require_number(j, "params", "kappa1_e_over_2pi_hz");
    p.kappa2_e = require_number(j, "params", "kappa2_e_over_2pi_hz");

    // Intrinsic losses: given directly, or derived from a total decay rate.
    if (j.contains("kappa1_o_over_2pi_hz") && j.contains("kappa1_over_2pi_hz"))
        throw config_error("config: give either params.kappa1_o_over_2pi_hz or "
                           "params.kappa1_over_2pi_hz, not both");
    if (j.contains("kappa1_over_2pi_hz")) {
        const double total = require_number(j, "params", "kappa1_over_2pi_hz");
        if (total < p.kappa1_e)
            throw external_exceeds_total(
                "config: kappa1_over_2pi_hz below kappa1_e_over_2pi_hz");
        p.kappa1_o = total - p.kappa1_e;
    } else {
        p.kappa1_o = optional_number(j, "params", "kappa1_o_over_2pi_hz", 0.0);
    }
    if (j.contains("kappa2_o_over_2pi_hz") && j.contains("kappa2_over_2pi_hz"))
        throw config_error("config: give either params.kappa2_o_over_2pi_hz or "
                           "params.kappa2_over_2pi_hz, not both");
    if (j.contains("kappa2_over_2pi_hz")) {
        const double total = require_number(j, "params", "kappa2_over_2pi_hz");
        if (total < p.kappa2_e)
            throw external_exceeds_total(
                "config: kappa2_over_2pi_hz below kappa2_e_over_2pi_hz");
        p.kappa2_o = total - p.kappa2_e;
    } else {
        p.kappa2_o = optional_number(j, "params", "kappa2_o_over_2pi_hz", 0.0);
    }

    // Optical gain: given directly, or derived from the effective damping
    // kappa_eff = kappa1 - gain.
    if (j.contains("gain_over_2pi_hz") && j.contains("kappa_eff_over_2pi_hz"))
        throw config_error("config: give either params.gain_over_2pi_hz or "
                           "params.kappa_eff_over_2pi_hz, not both");
    if (j.contains("kappa_eff_over_2pi_hz")) {
        const double keff = require_number(j, "params", "kappa_eff_over_2pi_hz");
        p.gain = (p.kappa1_e + p.kappa1_o) - keff;
        if (p.gain < 0.0)
            throw config_error(
                "config: kappa_eff_over_2pi_hz exceeds the total kappa1");
    } else {
        p.gain = optional_number(j, "params", "gain_over_2pi_hz", 0.0);
    }
    return p;
}

} // namespace detail

/// Parse a JSON config document. Unknown or ill-typed fields are rejected
/// with the offending field named; physics-level validation runs immediately.
inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config: top level must be an object");
    detail::reject_unknown(j, "<top>", {"params", "sweep", "noise", "outputs"});
    if (!j.contains("params"))
        throw config_error("config: missing required section params");

    RunConfig cfg;
    try {
        cfg.params = detail::parse_params(j.at("params"));

        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            detail::reject_unknown(s, "sweep",
                                   {"p_min_w", "p_max_w", "points", "spacing"});
            cfg.sweep.p_min_w =
                detail::optional_number(s, "sweep", "p_min_w", cfg.sweep.p_min_w);
            cfg.sweep.p_max_w =
                detail::optional_number(s, "sweep", "p_max_w", cfg.sweep.p_max_w);
            cfg.sweep.points =
                detail::optional_count(s, "sweep", "points", cfg.sweep.points);
            if (s.contains("spacing")) {
                const std::string sp = s.at("spacing").is_string()
                                           ? s.at("spacing").get<std::string>()
                                           : std::string();
                if (sp == "lin")
                    cfg.sweep.spacing = Spacing::Lin;
                else if (sp == "log")
                    cfg.sweep.spacing = Spacing::Log;
                else
                    throw config_error(
                        "config: sweep.spacing must be \"lin\" or \"log\"");
            }
        }
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            detail::reject_unknown(
                n, "noise", {"n_m", "delta_omega_over_2pi_hz", "n_points"});
            cfg.noise.n_m =
                detail::optional_number(n, "noise", "n_m", cfg.noise.n_m);
            cfg.noise.delta_omega_over_2pi_hz = detail::optional_number(
                n, "noise", "delta_omega_over_2pi_hz",
                cfg.noise.delta_omega_over_2pi_hz);
            cfg.noise.n_points =
                detail::optional_count(n, "noise", "n_points", cfg.noise.n_points);
        }
        if (j.contains("outputs")) {
            const auto& o = j.at("outputs");
            detail::reject_unknown(o, "outputs", {"path", "format"});
            if (o.contains("path")) {
                if (!o.at("path").is_string())
                    throw config_error("config: outputs.path must be a string");
                cfg.outputs.path = o.at("path").get<std::string>();
            }
            if (o.contains("format")) {
                const std::string f = o.at("format").is_string()
                                          ? o.at("format").get<std::string>()
                                          : std::string();
                if (f == "csv")
                    cfg.outputs.format = Format::Csv;
                else if (f == "json")
                    cfg.outputs.format = Format::Json;
                else
                    throw config_error(
                        "config: outputs.format must be \"csv\" or \"json\"");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }

    if (cfg.sweep.points < 2)
        throw config_error("config: sweep.points must be at least 2");
    if (!(cfg.sweep.p_min_w >= 0.0) || !(cfg.sweep.p_max_w >= 0.0))
        throw config_error("config: sweep powers must be nonnegative");
    if (cfg.sweep.p_min_w > cfg.sweep.p_max_w)
        throw config_error("config: sweep.p_min_w exceeds sweep.p_max_w");
    if (cfg.sweep.spacing == Spacing::Log && cfg.sweep.p_min_w <= 0.0)
        throw config_error("config: log spacing requires positive p_min_w");
    if (cfg.noise.n_m < 0.0)
        throw config_error("config: noise.n_m must be nonnegative");
    if (cfg.noise.delta_omega_over_2pi_hz < 0.0)
        throw config_error(
            "config: noise.delta_omega_over_2pi_hz must be nonnegative");
    if (cfg.noise.n_points < 11)
        throw config_error("config: noise.n_points must be at least 11");

    cfg.params.to_system(); // physics-level validation
    return cfg;
}

/// Serialize a config to canonical JSON (sorted keys, two-space indent).
/// parse_config(emit_config(c)) reproduces c exactly.
inline std::string emit_config(const RunConfig& cfg) {
    nlohmann::json j;
    auto& p = j["params"];
    p["omega_d_over_2pi_hz"] = cfg.params.omega_d;
    p["omega_m_over_2pi_hz"] = cfg.params.omega_m;
    p["gamma_m_over_2pi_hz"] = cfg.params.gamma_m;
    p["g_over_2pi_hz"] = cfg.params.g;
    p["j_over_2pi_hz"] = cfg.params.J;
    p["delta1_over_2pi_hz"] = cfg.params.Delta1;
    p["delta2_over_2pi_hz"] = cfg.params.Delta2;
    p["kappa1_e_over_2pi_hz"] = cfg.params.kappa1_e;
    p["kappa1_o_over_2pi_hz"] = cfg.params.kappa1_o;
    p["kappa2_e_over_2pi_hz"] = cfg.params.kappa2_e;
    p["kappa2_o_over_2pi_hz"] = cfg.params.kappa2_o;
    p["gain_over_2pi_hz"] = cfg.params.gain;
    auto& s = j["sweep"];
    s["p_min_w"] = cfg.sweep.p_min_w;
    s["p_max_w"] = cfg.sweep.p_max_w;
    s["points"] = cfg.sweep.points;
    s["spacing"] = to_string(cfg.sweep.spacing);
    auto& n = j["noise"];
    n["n_m"] = cfg.noise.n_m;
    n["delta_omega_over_2pi_hz"] = cfg.noise.delta_omega_over_2pi_hz;
    n["n_points"] = cfg.noise.n_points;
    auto& o = j["outputs"];
    o["path"] = cfg.outputs.path;
    o["format"] = to_string(cfg.outputs.format);
    return j.dump(2) + "\n";
}

/// Read and parse a config file.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("config: cannot open file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Apply one `key=value` override. Keys may be dotted (params.g_over_2pi_hz)
/// or bare (g_over_2pi_hz), in which case the owning section is looked up.
/// Alternative spellings (kappa_eff_over_2pi_hz, kappa1_over_2pi_hz,
/// kappa2_over_2pi_hz) replace their canonical counterparts.
inline void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error("override: expected key=value, got \"" + assignment +
                           "\"");
    std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    nlohmann::json j = nlohmann::json::parse(emit_config(cfg));

    std::string section, field;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
        section = key.substr(0, dot);
        field = key.substr(dot + 1);
        if (!j.contains(section))
            throw config_error("override: unknown section " + section);
    } else {
        field = key;
        for (const char* sec : {"params", "sweep", "noise", "outputs"}) {
            const bool alt =
                std::string(sec) == "params" &&
                (field == "kappa_eff_over_2pi_hz" ||
                 field == "kappa1_over_2pi_hz" || field == "kappa2_over_2pi_hz");
            if (j.at(sec).contains(field) || alt) {
                section = sec;
                break;
            }
        }
        if (section.empty())
            throw config_error("override: unknown key " + field);
    }

    // Alternative parameter spellings displace their canonical partner.
    if (section == "params") {
        if (field == "kappa_eff_over_2pi_hz") j["params"].erase("gain_over_2pi_hz");
        if (field == "kappa1_over_2pi_hz") j["params"].erase("kappa1_o_over_2pi_hz");
        if (field == "kappa2_over_2pi_hz") j["params"].erase("kappa2_o_over_2pi_hz");
        if (field == "gain_over_2pi_hz") j["params"].erase("kappa_eff_over_2pi_hz");
    }

    nlohmann::json parsed_value;
    try {
        parsed_value = nlohmann::json::parse(value);
    } catch (const nlohmann::json::exception&) {
        parsed_value = value; // plain string (e.g. format=json)
    }
    j[section][field] = parsed_value;
    cfg = parse_config(j.dump());
}

} // namespace gaom
