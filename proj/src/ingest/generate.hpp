#pragma once

#include "core/scenario.hpp"

#include <cstdint>

namespace cppa {

struct GenerationParams {
    std::size_t n_pi = 0;        // non-conflicting PIs (phase 1)
    std::size_t n_conflict = 0;  // conflicting PIs (phase 2)
    std::size_t n_entities = 0;  // exact total entity count across all trees
    std::uint64_t seed = 0;
    // Scheme mix for phase 1; weights are normalized internally.
    double w_end_to_end = 0.4;
    double w_site_to_site = 0.3;
    double w_remote_access = 0.3;
};

/// Seeded synthetic scenario builder. Phase 1 grows conflict-free PIs from
/// the three communication schemes (end-to-end, site-to-site,
/// remote-access); phase 2 injects conflicting PIs, drawing the anomaly kind
/// uniformly from all nineteen and recording each injection in the scenario
/// manifest; phase 3 pads the entity count to exactly n_entities with filler
/// nodes and minimal connectivity.
///
/// Phase-1 PIs analysed alone produce no anomalies, with one documented
/// exemption: multi-tunnel schemes legitimately create monitorable
/// gateway-to-gateway paths.
///
/// Throws std::invalid_argument when n_entities cannot host the request.
Scenario generate_scenario(const GenerationParams& params);

} // namespace cppa
