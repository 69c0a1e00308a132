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

#include "riscade/config.hpp"

#include <string>
#include <vector>

namespace riscade
{

// Shipped scenario presets. Desk-scale: 16 x 16 arrays (the LMMSE covariance
// is 256 x 256) with clusters placed inside the radiative near field of the
// arrays, so near-field effects are visible at this aperture. Default
// mixture parameters are editable stand-ins, not measurement fits.
inline std::vector<std::string> preset_names()
{
    return {"default", "identity_sanity", "fig2_near_vs_far", "fig3_coupling", "fig4_alpha"};
}

namespace detail
{

inline MGParams default_mixture()
{
    return MGParams{{{0.6, 1.2, 1.5}, {0.4, 3.0, 4.0}}};
}

inline RingSetConfig desk_rings(std::vector<double> d, std::vector<double> r,
                                std::vector<double> eps, std::vector<double> kappa,
                                long scatterers)
{
    RingSetConfig rc;
    rc.center_distance = std::move(d);
    rc.radius = std::move(r);
    rc.power_fraction = std::move(eps);
    rc.concentration = std::move(kappa);
    rc.scatterer_count.assign(rc.center_distance.size(), scatterers);
    rc.phi_auto = true;
    rc.mu_auto = true;
    return rc;
}

inline ScenarioConfig desk_base()
{
    ScenarioConfig cfg;
    cfg.name = "default";
    cfg.center_frequency = 142e9;
    cfg.bandwidth = 4e9;
    cfg.absorption = 2.3e-4;
    cfg.omega = 1.0;
    cfg.bs_elements = 16;
    cfg.ris_elements = 16;
    cfg.training_length = 16;
    cfg.bs_spacing_lambda = 0.5;
    cfg.ris_spacing_lambda = 0.5;
    cfg.snr_db = {0.0, 10.0, 20.0};
    cfg.trials = 1000;
    cfg.seed = 20260401;
    cfg.quad_points = 2048;
    cfg.rcc_transpose_rrb = true;
    cfg.mg_ru = default_mixture();
    cfg.mg_br = default_mixture();
    cfg.ue.distance = 2.0;
    cfg.ue.theta_auto = true;
    // Tight clusters inside the radiative near field of the 16-element
    // aperture: long-baseline coherence is what makes the wavefront model
    // matter at this scale.
    cfg.rings_ru = desk_rings({0.13, 0.16, 0.23}, {0.060, 0.077, 0.102}, {0.5, 0.3, 0.2},
                              {500.0, 700.0, 600.0}, 24);
    cfg.rings_rb = desk_rings({0.15, 0.20, 0.26}, {0.068, 0.094, 0.111}, {0.45, 0.35, 0.2},
                              {600.0, 500.0, 700.0}, 24);
    cfg.rings_br = desk_rings({0.14, 0.19, 0.26}, {0.068, 0.085, 0.111}, {0.5, 0.3, 0.2},
                              {700.0, 600.0, 500.0}, 24);
    return cfg;
}

} // namespace detail

inline ScenarioConfig make_preset(const std::string &name)
{
    if (name == "default")
        return detail::desk_base();

    if (name == "identity_sanity")
    {
        ScenarioConfig cfg = detail::desk_base();
        cfg.name = "identity_sanity";
        cfg.identity_correlations = true;
        cfg.trials = 10000;
        return cfg;
    }

    if (name == "fig2_near_vs_far")
    {
        ScenarioConfig cfg = detail::desk_base();
        cfg.name = "fig2_near_vs_far";
        cfg.snr_db = {0.0, 5.0, 10.0, 15.0, 20.0};
        cfg.trials = 2000;
        cfg.mismatch_far = true;
        return cfg;
    }

    if (name == "fig3_coupling")
    {
        ScenarioConfig cfg = detail::desk_base();
        cfg.name = "fig3_coupling";
        cfg.snr_db = {0.0, 10.0, 20.0};
        cfg.trials = 2000;
        cfg.coupling.enabled = true;
        cfg.mismatch_nocoupling = true;
        return cfg;
    }

    if (name == "fig4_alpha")
    {
        // UE-link shape-parameter study: sweep [mg.ru] alpha over
        // {0.8, 1.2, 2, 4, 8} at fixed pilot power (beta fixed at 1).
        ScenarioConfig cfg = detail::desk_base();
        cfg.name = "fig4_alpha";
        cfg.mg_ru = MGParams::single(2.0, 1.0);
        cfg.trials = 2000;
        return cfg;
    }

    throw validation_error("unknown preset '" + name + "'; available: default, identity_sanity, "
                           "fig2_near_vs_far, fig3_coupling, fig4_alpha");
}

} // namespace riscade
