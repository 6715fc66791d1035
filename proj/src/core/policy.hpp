#pragma once

#include "core/coefficients.hpp"
#include "core/entity.hpp"
#include "core/selector.hpp"
#include "core/technology.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cppa {

/// The 6-tuple i = (s, d, t, C, S, G) plus where the PI is deployed (N(i))
/// and its priority within its PI set (pi(i), lower number = higher
/// priority).
struct PolicyImplementation {
    std::string id;
    EntityId source = kNoEntity;
    EntityId destination = kNoEntity;
    std::string technology;
    CoefficientTriple coefficients;
    Selector selector;
    std::vector<std::string> gateways; // crossed gateways, end-points excluded
    std::string deployed_at;
    std::uint32_t priority = 0;

    /// G* = {s} ∪ G ∪ {d} as node ids, in walk order.
    std::vector<std::string> chain_nodes(const EntityForest& forest) const;
};

/// Priority-ordered PIs sharing a deployment node and technology.
struct PISet {
    std::string node_id;
    std::string technology;
    std::vector<std::size_t> pi_indices; // sorted by ascending priority value
};

/// Strict mode is the ingestion contract: a layer-L technology attaches at
/// entities of layer >= L. Resolution outputs (least upper bounds) may land
/// on aggregate ancestor entities above the technology's layer, so analysis
/// re-validation accepts those.
enum class PiValidation { Strict, AllowAggregatedEndpoints };

/// Structural validation of one PI against the forest and registry.
/// Returns human-readable problems; empty means valid.
std::vector<std::string> validate_pi(const PolicyImplementation& pi, const EntityForest& forest,
                                     const TechnologyRegistry& technologies,
                                     PiValidation mode = PiValidation::Strict);

struct LubOptions {
    /// Tie-break order for same-layer technologies (scenario-declared).
    std::vector<std::string> preferred_technologies;
};

/// Least upper bound of two PIs with non-disjoint end-points and identical
/// gateway lists: LCA entities, dominating (or preferred same-layer)
/// technology, component-wise max coefficients, field-wise selector hull.
/// Throws std::invalid_argument when the preconditions fail.
PolicyImplementation least_upper_bound_pi(const PolicyImplementation& i1,
                                          const PolicyImplementation& i2,
                                          const EntityForest& forest,
                                          const TechnologyRegistry& technologies,
                                          const LubOptions& options = {});

/// s_k ∈ S|ip_src×p_src: does the entity's resolved address tuple fall in
/// the source scope of the selector? The entity's layer-3 address comes from
/// itself or its nearest bound ancestor; a port is checked only when the
/// entity carries one. Entities with no resolvable address are never in
/// scope (an error for the standalone operation, see source_scope_error).
bool source_in_selector_scope(const EntityForest& forest, EntityId e, const Selector& s);

/// Same check but distinguishing "no resolvable address".
std::optional<bool> source_in_selector_scope_checked(const EntityForest& forest, EntityId e,
                                                     const Selector& s);

} // namespace cppa
