// SPDX-License-Identifier: Apache-2.0
//
// riscade: correlated mixture-gamma channel synthesis and linear estimation
// for RIS-aided THz uplinks
// Copyright (C) 2026 the riscade authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "riscade/common.hpp"
#include "riscade/geometry.hpp"
#include "riscade/mgdist.hpp"
#include "riscade/rng.hpp"
#include "riscade/spatial_correlation.hpp"

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace riscade
{

inline constexpr const char *csv_schema_line = "# riscade-csv 1";

// ------------------------------------------------------------------------
// Sectioned key-value configuration text:
//   [section.name]
//   key = value value value   # comment
// Values are whitespace-separated tokens. A CSV produced by the runner can
// be fed back directly: its "#cfg " comment lines carry the resolved
// configuration that generated it.
// ------------------------------------------------------------------------

struct ConfigMap
{
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string &sec, const std::string &key) const
    {
        const auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
};

namespace detail
{
inline std::string trim(const std::string &s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace detail

inline ConfigMap parse_config_text(const std::string &text)
{
    std::istringstream in(text);
    const bool embedded_csv = text.rfind(csv_schema_line, 0) == 0;

    ConfigMap out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (embedded_csv)
        {
            if (line.rfind("#cfg ", 0) != 0)
                continue; // only the embedded-config lines matter in a CSV
            line = line.substr(5);
        }
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw validation_error("config line " + std::to_string(lineno) +
                                       ": unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw validation_error("config line " + std::to_string(lineno) +
                                       ": empty section name");
            out.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        if (section.empty())
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": key outside any [section]");
        const std::string key = detail::trim(line.substr(0, eq));
        out.sections[section][key] = detail::trim(line.substr(eq + 1));
    }
    return out;
}

// Typed access with section-qualified error messages.
class ConfigReader
{
  public:
    explicit ConfigReader(const ConfigMap &map) : map_(map) {}

    bool has(const std::string &sec, const std::string &key) const { return map_.has(sec, key); }

    std::string raw(const std::string &sec, const std::string &key) const
    {
        if (!map_.has(sec, key))
            throw validation_error("[" + sec + "] " + key + ": missing required key");
        return map_.sections.at(sec).at(key);
    }

    std::string str(const std::string &sec, const std::string &key, const std::string &dflt) const
    {
        return map_.has(sec, key) ? raw(sec, key) : dflt;
    }

    double number(const std::string &sec, const std::string &key) const
    {
        return parse_number(sec, key, raw(sec, key));
    }
    double number(const std::string &sec, const std::string &key, double dflt) const
    {
        return map_.has(sec, key) ? number(sec, key) : dflt;
    }

    long integer(const std::string &sec, const std::string &key) const
    {
        const double v = number(sec, key);
        const long r = static_cast<long>(v);
        if (static_cast<double>(r) != v)
            throw validation_error("[" + sec + "] " + key + ": expected an integer");
        return r;
    }
    long integer(const std::string &sec, const std::string &key, long dflt) const
    {
        return map_.has(sec, key) ? integer(sec, key) : dflt;
    }

    bool boolean(const std::string &sec, const std::string &key, bool dflt) const
    {
        if (!map_.has(sec, key))
            return dflt;
        const std::string v = raw(sec, key);
        if (v == "true" || v == "1")
            return true;
        if (v == "false" || v == "0")
            return false;
        throw validation_error("[" + sec + "] " + key + ": expected true or false, got '" + v +
                               "'");
    }

    std::vector<double> numbers(const std::string &sec, const std::string &key) const
    {
        std::istringstream in(raw(sec, key));
        std::vector<double> out;
        std::string tok;
        while (in >> tok)
            out.push_back(parse_number(sec, key, tok));
        if (out.empty())
            throw validation_error("[" + sec + "] " + key + ": expected at least one number");
        return out;
    }

  private:
    double parse_number(const std::string &sec, const std::string &key,
                        const std::string &tok) const
    {
        char *end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw validation_error("[" + sec + "] " + key + ": cannot parse number '" + tok + "'");
        return v;
    }

    const ConfigMap &map_;
};

// ------------------------------------------------------------------------
// Scenario configuration
// ------------------------------------------------------------------------

// One link's ring set; phi and mu may be marked auto, in which case they are
// drawn once per scenario from the master seed (uniform over [-pi/2, pi/2)
// for phi; mu faces the array, mu = wrap(phi + pi)) and recorded in the
// resolved configuration.
struct RingSetConfig
{
    std::vector<double> center_distance; // D_l, meters
    std::vector<double> center_angle;    // phi_l (empty while phi_auto)
    std::vector<double> radius;          // r_l
    std::vector<double> power_fraction;  // eps_l
    std::vector<double> concentration;   // kappa_l
    std::vector<double> vm_mean;         // mu_l (empty while mu_auto)
    std::vector<long> scatterer_count;   // N_l
    bool phi_auto = false;
    bool mu_auto = false;

    std::size_t count() const { return center_distance.size(); }

    std::vector<ClusterRing> to_rings() const
    {
        if (phi_auto || mu_auto)
            throw validation_error("rings: configuration not resolved (auto angles pending)");
        std::vector<ClusterRing> rings(count());
        for (std::size_t l = 0; l < count(); ++l)
        {
            rings[l].center_distance = center_distance[l];
            rings[l].center_angle = center_angle[l];
            rings[l].radius = radius[l];
            rings[l].power_fraction = power_fraction[l];
            rings[l].vm_concentration = concentration[l];
            rings[l].vm_mean = vm_mean[l];
            rings[l].scatterer_count = static_cast<int>(scatterer_count[l]);
        }
        return rings;
    }
};

struct CouplingConfig
{
    bool enabled = false;
    double r_d_ohms = 2.0;
    double dipole_length_lambda = 0.5;
};

struct UeConfig
{
    double distance = 2.0;
    double theta = 0.0;
    bool theta_auto = true;
};

struct ScenarioConfig
{
    std::string name = "default";
    double center_frequency = 142e9;
    double bandwidth = 4e9; // scenario metadata only
    double absorption = 2.3e-4;
    double omega = 1.0;
    int bs_elements = 16;
    int ris_elements = 16;
    int training_length = 16;
    double bs_spacing_lambda = 0.5;
    double ris_spacing_lambda = 0.5;
    std::vector<double> snr_db{0.0, 10.0, 20.0};
    long trials = 1000;
    std::uint64_t seed = 20260401;
    int quad_points = 2048;
    FieldType field_ru = FieldType::near;
    FieldType field_rb = FieldType::near;
    FieldType field_br = FieldType::near;
    FarfieldAbsorption farfield_absorption = FarfieldAbsorption::final_display;
    // Orientation of the RIS-side factor inside R_cc. true matches the
    // verbatim Kronecker sampler (first-principles covariance); false is the
    // closed-form product as written.
    bool rcc_transpose_rrb = true;
    bool identity_correlations = false;
    bool mismatch_far = false;
    bool mismatch_nocoupling = false;
    bool ls_only = false;
    CouplingConfig coupling;
    UeConfig ue;
    MGParams mg_ru;
    MGParams mg_br;
    RingSetConfig rings_ru;
    RingSetConfig rings_rb;
    RingSetConfig rings_br;
    bool resolved = false;

    double wavelength() const { return speed_of_light / center_frequency; }
};

namespace detail
{

inline FieldType parse_field(const std::string &sec, const std::string &v)
{
    if (v == "near")
        return FieldType::near;
    if (v == "far")
        return FieldType::far;
    throw validation_error("[" + sec + "]: field must be 'near' or 'far', got '" + v + "'");
}

inline std::string field_name(FieldType f) { return f == FieldType::near ? "near" : "far"; }

inline RingSetConfig parse_rings(const ConfigReader &r, const std::string &sec)
{
    RingSetConfig out;
    out.center_distance = r.numbers(sec, "d");
    out.radius = r.numbers(sec, "r");
    out.power_fraction = r.numbers(sec, "eps");
    out.concentration = r.numbers(sec, "kappa");
    std::vector<double> n = r.numbers(sec, "n");
    for (double v : n)
        out.scatterer_count.push_back(static_cast<long>(v));

    if (r.raw(sec, "phi") == "auto")
        out.phi_auto = true;
    else
        out.center_angle = r.numbers(sec, "phi");
    if (r.raw(sec, "mu") == "auto")
        out.mu_auto = true;
    else
        out.vm_mean = r.numbers(sec, "mu");

    const std::size_t l = out.center_distance.size();
    auto check = [&](std::size_t got, const char *key) {
        if (got != l)
            throw validation_error("[" + sec + "] " + key + ": expected " + std::to_string(l) +
                                   " values to match d");
    };
    check(out.radius.size(), "r");
    check(out.power_fraction.size(), "eps");
    check(out.concentration.size(), "kappa");
    check(out.scatterer_count.size(), "n");
    if (!out.phi_auto)
        check(out.center_angle.size(), "phi");
    if (!out.mu_auto)
        check(out.vm_mean.size(), "mu");
    return out;
}

inline MGParams parse_mg(const ConfigReader &r, const std::string &sec)
{
    const auto w = r.numbers(sec, "w");
    const auto alpha = r.numbers(sec, "alpha");
    const auto beta = r.numbers(sec, "beta");
    if (alpha.size() != w.size() || beta.size() != w.size())
        throw validation_error("[" + sec + "]: w, alpha, beta must have equal lengths");
    MGParams mg;
    for (std::size_t j = 0; j < w.size(); ++j)
        mg.components.push_back({w[j], alpha[j], beta[j]});
    try
    {
        mg.validate();
    }
    catch (const validation_error &e)
    {
        throw validation_error("[" + sec + "]: " + e.what());
    }
    return mg;
}

inline void serialize_numbers(std::ostringstream &out, const std::vector<double> &v)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        out << (i ? " " : "") << format_double(v[i]);
}

} // namespace detail

inline ScenarioConfig scenario_from_config(const ConfigMap &map)
{
    const ConfigReader r(map);
    ScenarioConfig cfg;

    cfg.name = r.str("scenario", "name", cfg.name);
    cfg.center_frequency = r.number("scenario", "f_c", cfg.center_frequency);
    cfg.bandwidth = r.number("scenario", "bandwidth", cfg.bandwidth);
    cfg.absorption = r.number("scenario", "k_a", cfg.absorption);
    cfg.omega = r.number("scenario", "omega", cfg.omega);
    cfg.training_length = static_cast<int>(r.integer("scenario", "t_p", cfg.training_length));
    if (r.has("scenario", "snr_db"))
        cfg.snr_db = r.numbers("scenario", "snr_db");
    cfg.trials = r.integer("scenario", "trials", cfg.trials);
    cfg.seed = static_cast<std::uint64_t>(r.integer("scenario", "seed",
                                                    static_cast<long>(cfg.seed)));
    cfg.quad_points = static_cast<int>(r.integer("scenario", "quad_points", cfg.quad_points));

    const std::string field_all = r.str("scenario", "field", "near");
    cfg.field_ru = detail::parse_field("scenario", r.str("scenario", "field_ru", field_all));
    cfg.field_rb = detail::parse_field("scenario", r.str("scenario", "field_rb", field_all));
    cfg.field_br = detail::parse_field("scenario", r.str("scenario", "field_br", field_all));

    const std::string ff = r.str("scenario", "farfield_absorption", "final");
    if (ff == "final")
        cfg.farfield_absorption = FarfieldAbsorption::final_display;
    else if (ff == "eq14")
        cfg.farfield_absorption = FarfieldAbsorption::eq14;
    else
        throw validation_error("[scenario] farfield_absorption: expected 'final' or 'eq14'");

    cfg.rcc_transpose_rrb = r.boolean("scenario", "rcc_transpose_rrb", cfg.rcc_transpose_rrb);
    cfg.identity_correlations =
        r.boolean("scenario", "identity_correlations", cfg.identity_correlations);
    cfg.mismatch_far = r.boolean("scenario", "mismatch_far", cfg.mismatch_far);
    cfg.mismatch_nocoupling =
        r.boolean("scenario", "mismatch_nocoupling", cfg.mismatch_nocoupling);
    cfg.ls_only = r.boolean("scenario", "ls_only", cfg.ls_only);

    cfg.bs_elements = static_cast<int>(r.integer("geometry.bs", "elements", cfg.bs_elements));
    cfg.bs_spacing_lambda = r.number("geometry.bs", "spacing_lambda", cfg.bs_spacing_lambda);
    cfg.ris_elements = static_cast<int>(r.integer("geometry.ris", "elements", cfg.ris_elements));
    cfg.ris_spacing_lambda = r.number("geometry.ris", "spacing_lambda", cfg.ris_spacing_lambda);

    cfg.ue.distance = r.number("geometry.ue", "distance", cfg.ue.distance);
    if (r.has("geometry.ue", "theta"))
    {
        if (r.raw("geometry.ue", "theta") == "auto")
            cfg.ue.theta_auto = true;
        else
        {
            cfg.ue.theta = r.number("geometry.ue", "theta");
            cfg.ue.theta_auto = false;
        }
    }

    cfg.coupling.enabled = r.boolean("coupling", "enabled", cfg.coupling.enabled);
    cfg.coupling.r_d_ohms = r.number("coupling", "r_d_ohms", cfg.coupling.r_d_ohms);
    cfg.coupling.dipole_length_lambda =
        r.number("coupling", "dipole_length_lambda", cfg.coupling.dipole_length_lambda);

    if (map.sections.count("mg.ru"))
        cfg.mg_ru = detail::parse_mg(r, "mg.ru");
    if (map.sections.count("mg.br"))
        cfg.mg_br = detail::parse_mg(r, "mg.br");
    if (map.sections.count("rings.ru"))
        cfg.rings_ru = detail::parse_rings(r, "rings.ru");
    if (map.sections.count("rings.rb"))
        cfg.rings_rb = detail::parse_rings(r, "rings.rb");
    if (map.sections.count("rings.br"))
        cfg.rings_br = detail::parse_rings(r, "rings.br");

    cfg.resolved = !cfg.ue.theta_auto && !cfg.rings_ru.phi_auto && !cfg.rings_ru.mu_auto &&
                   !cfg.rings_rb.phi_auto && !cfg.rings_rb.mu_auto && !cfg.rings_br.phi_auto &&
                   !cfg.rings_br.mu_auto;
    return cfg;
}

inline ScenarioConfig scenario_from_text(const std::string &text)
{
    return scenario_from_config(parse_config_text(text));
}

inline ScenarioConfig load_scenario_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw validation_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_text(buf.str());
}

// Draws the pending auto angles from the master seed, once per scenario, so
// the theory matrices and every simulated trial share identical geometry.
// phi is uniform over [-pi/2, pi/2); UE theta likewise; auto mu faces the
// array (mu = wrap(phi + pi)).
inline ScenarioConfig resolve_scenario(const ScenarioConfig &cfg)
{
    ScenarioConfig out = cfg;
    auto rng = make_stream(cfg.seed, /*stream=*/0);
    std::uniform_real_distribution<double> half(-pi / 2.0, pi / 2.0);

    auto resolve_rings = [&](RingSetConfig &rings) {
        if (rings.phi_auto)
        {
            rings.center_angle.resize(rings.count());
            for (auto &phi : rings.center_angle)
                phi = half(rng);
            rings.phi_auto = false;
        }
        if (rings.mu_auto)
        {
            rings.vm_mean.resize(rings.count());
            for (std::size_t l = 0; l < rings.count(); ++l)
                rings.vm_mean[l] = wrap_angle(rings.center_angle[l] + pi);
            rings.mu_auto = false;
        }
    };
    resolve_rings(out.rings_ru);
    resolve_rings(out.rings_rb);
    resolve_rings(out.rings_br);
    if (out.ue.theta_auto)
    {
        out.ue.theta = half(rng);
        out.ue.theta_auto = false;
    }
    out.resolved = true;
    return out;
}

inline void validate_scenario(const ScenarioConfig &cfg)
{
    if (cfg.bs_elements < 1 || cfg.ris_elements < 1)
        throw validation_error("[geometry]: element counts must be positive");
    if (!(cfg.bs_spacing_lambda > 0.0) || !(cfg.ris_spacing_lambda > 0.0))
        throw validation_error("[geometry]: element spacings must be positive");
    if (cfg.training_length < cfg.ris_elements)
        throw validation_error("[scenario] t_p: training length must be at least the RIS element "
                               "count for LS identifiability");
    if (cfg.snr_db.empty())
        throw validation_error("[scenario] snr_db: at least one SNR point required");
    if (cfg.trials < 0)
        throw validation_error("[scenario] trials: must be nonnegative");
    if (!(cfg.center_frequency > 0.0))
        throw validation_error("[scenario] f_c: must be positive");
    if (cfg.absorption < 0.0)
        throw validation_error("[scenario] k_a: must be nonnegative");
    if (!(cfg.omega > 0.0))
        throw validation_error("[scenario] omega: must be positive");
    if (cfg.quad_points < 64)
        throw validation_error("[scenario] quad_points: must be at least 64");
    if (cfg.mismatch_nocoupling && !cfg.coupling.enabled)
        throw validation_error("[scenario] mismatch_nocoupling requires [coupling] enabled");

    cfg.mg_ru.validate();
    cfg.mg_br.validate();
    if (!cfg.identity_correlations)
    {
        auto check_rings = [&](const RingSetConfig &rc, const char *sec, FieldType field) {
            if (rc.count() == 0)
                throw validation_error(std::string("[") + sec + "]: ring set required");
            try
            {
                validate_rings(rc.to_rings(), field == FieldType::near);
            }
            catch (const validation_error &e)
            {
                throw validation_error(std::string("[") + sec + "] " + e.what());
            }
        };
        check_rings(cfg.rings_ru, "rings.ru", cfg.field_ru);
        check_rings(cfg.rings_rb, "rings.rb", cfg.field_rb);
        check_rings(cfg.rings_br, "rings.br", cfg.field_br);
        UePlacement{cfg.ue.distance, cfg.ue.theta}.validate();
    }
    // Desk-scale guard: the LMMSE covariance is (MK)^2 complex entries.
    if (!cfg.ls_only && static_cast<long>(cfg.bs_elements) * cfg.ris_elements > 4096)
        throw validation_error("[scenario]: M*K > 4096 needs ls_only (LMMSE covariance memory)");
}

inline std::string serialize_scenario(const ScenarioConfig &cfg)
{
    using detail::format_double;
    std::ostringstream out;
    out << "[scenario]\n";
    out << "name = " << cfg.name << "\n";
    out << "f_c = " << format_double(cfg.center_frequency) << "\n";
    out << "bandwidth = " << format_double(cfg.bandwidth) << "\n";
    out << "k_a = " << format_double(cfg.absorption) << "\n";
    out << "omega = " << format_double(cfg.omega) << "\n";
    out << "t_p = " << cfg.training_length << "\n";
    out << "snr_db = ";
    detail::serialize_numbers(out, cfg.snr_db);
    out << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "quad_points = " << cfg.quad_points << "\n";
    out << "field_ru = " << detail::field_name(cfg.field_ru) << "\n";
    out << "field_rb = " << detail::field_name(cfg.field_rb) << "\n";
    out << "field_br = " << detail::field_name(cfg.field_br) << "\n";
    out << "farfield_absorption = "
        << (cfg.farfield_absorption == FarfieldAbsorption::final_display ? "final" : "eq14")
        << "\n";
    out << "rcc_transpose_rrb = " << (cfg.rcc_transpose_rrb ? "true" : "false") << "\n";
    out << "identity_correlations = " << (cfg.identity_correlations ? "true" : "false") << "\n";
    out << "mismatch_far = " << (cfg.mismatch_far ? "true" : "false") << "\n";
    out << "mismatch_nocoupling = " << (cfg.mismatch_nocoupling ? "true" : "false") << "\n";
    out << "ls_only = " << (cfg.ls_only ? "true" : "false") << "\n";

    out << "\n[geometry.bs]\n";
    out << "elements = " << cfg.bs_elements << "\n";
    out << "spacing_lambda = " << format_double(cfg.bs_spacing_lambda) << "\n";
    out << "\n[geometry.ris]\n";
    out << "elements = " << cfg.ris_elements << "\n";
    out << "spacing_lambda = " << format_double(cfg.ris_spacing_lambda) << "\n";
    out << "\n[geometry.ue]\n";
    out << "distance = " << format_double(cfg.ue.distance) << "\n";
    out << "theta = " << (cfg.ue.theta_auto ? "auto" : format_double(cfg.ue.theta)) << "\n";

    out << "\n[coupling]\n";
    out << "enabled = " << (cfg.coupling.enabled ? "true" : "false") << "\n";
    out << "r_d_ohms = " << format_double(cfg.coupling.r_d_ohms) << "\n";
    out << "dipole_length_lambda = " << format_double(cfg.coupling.dipole_length_lambda) << "\n";

    auto write_mg = [&](const char *sec, const MGParams &mg) {
        out << "\n[" << sec << "]\n";
        std::ostringstream w, a, b;
        for (std::size_t j = 0; j < mg.components.size(); ++j)
        {
            const char *sep = j ? " " : "";
            w << sep << format_double(mg.components[j].weight);
            a << sep << format_double(mg.components[j].shape);
            b << sep << format_double(mg.components[j].rate);
        }
        out << "w = " << w.str() << "\n";
        out << "alpha = " << a.str() << "\n";
        out << "beta = " << b.str() << "\n";
    };
    write_mg("mg.ru", cfg.mg_ru);
    write_mg("mg.br", cfg.mg_br);

    auto write_rings = [&](const char *sec, const RingSetConfig &rc) {
        if (rc.count() == 0)
            return;
        out << "\n[" << sec << "]\n";
        out << "d = ";
        detail::serialize_numbers(out, rc.center_distance);
        out << "\n";
        if (rc.phi_auto)
            out << "phi = auto\n";
        else
        {
            out << "phi = ";
            detail::serialize_numbers(out, rc.center_angle);
            out << "\n";
        }
        out << "r = ";
        detail::serialize_numbers(out, rc.radius);
        out << "\n";
        out << "eps = ";
        detail::serialize_numbers(out, rc.power_fraction);
        out << "\n";
        out << "kappa = ";
        detail::serialize_numbers(out, rc.concentration);
        out << "\n";
        if (rc.mu_auto)
            out << "mu = auto\n";
        else
        {
            out << "mu = ";
            detail::serialize_numbers(out, rc.vm_mean);
            out << "\n";
        }
        out << "n = ";
        std::ostringstream n;
        for (std::size_t l = 0; l < rc.scatterer_count.size(); ++l)
            n << (l ? " " : "") << rc.scatterer_count[l];
        out << n.str() << "\n";
    };
    write_rings("rings.ru", cfg.rings_ru);
    write_rings("rings.rb", cfg.rings_rb);
    write_rings("rings.br", cfg.rings_br);
    return out.str();
}

} // namespace riscade
