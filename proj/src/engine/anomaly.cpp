#include "engine/anomaly.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

namespace cppa {

std::string_view to_string(AnomalyKind k) {
    switch (k) {
    case AnomalyKind::InternalLoop: return "INTERNAL_LOOP";
    case AnomalyKind::OutOfPlace: return "OUT_OF_PLACE";
    case AnomalyKind::NonEnforceability: return "NON_ENFORCEABILITY";
    case AnomalyKind::Inadequacy: return "INADEQUACY";
    case AnomalyKind::Shadowing: return "SHADOWING";
    case AnomalyKind::Redundancy: return "REDUNDANCY";
    case AnomalyKind::Exception: return "EXCEPTION";
    case AnomalyKind::Correlation: return "CORRELATION";
    case AnomalyKind::Inclusion: return "INCLUSION";
    case AnomalyKind::Affinity: return "AFFINITY";
    case AnomalyKind::Contradiction: return "CONTRADICTION";
    case AnomalyKind::Superfluous: return "SUPERFLUOUS";
    case AnomalyKind::SkewedChannel: return "SKEWED_CHANNEL";
    case AnomalyKind::FilteredChannel: return "FILTERED_CHANNEL";
    case AnomalyKind::L2: return "L2";
    case AnomalyKind::AsymmetricChannel: return "ASYMMETRIC_CHANNEL";
    case AnomalyKind::CyclicPath: return "CYCLIC_PATH";
    case AnomalyKind::Monitorability: return "MONITORABILITY";
    case AnomalyKind::AlternativePath: return "ALTERNATIVE_PATH";
    }
    return "?";
}

std::optional<AnomalyKind> anomaly_kind_from_string(const std::string& name) {
    for (std::size_t i = 0; i < kAnomalyKindCount; ++i) {
        const auto kind = static_cast<AnomalyKind>(i);
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(EffectCategory c) {
    switch (c) {
    case EffectCategory::Insecure: return "INSECURE";
    case EffectCategory::Unfeasible: return "UNFEASIBLE";
    case EffectCategory::PotentialError: return "POTENTIAL_ERROR";
    case EffectCategory::SuboptimalImplementation: return "SUBOPTIMAL_IMPLEMENTATION";
    case EffectCategory::SuboptimalWalk: return "SUBOPTIMAL_WALK";
    }
    return "?";
}

std::string_view to_string(InfoCategory c) {
    switch (c) {
    case InfoCategory::PiLevelIrrelevant: return "PI_LEVEL_IRRELEVANT";
    case InfoCategory::PiLevelUnsuitable: return "PI_LEVEL_UNSUITABLE";
    case InfoCategory::NodeIntraTech: return "NODE_INTRA_TECH";
    case InfoCategory::NodeInterTech: return "NODE_INTER_TECH";
    case InfoCategory::NetworkChannel: return "NETWORK_CHANNEL";
    case InfoCategory::NetworkPath: return "NETWORK_PATH";
    }
    return "?";
}

EffectCategory effect_category(AnomalyKind k) {
    switch (k) {
    case AnomalyKind::Inadequacy:
    case AnomalyKind::Monitorability:
    case AnomalyKind::SkewedChannel:
    case AnomalyKind::AsymmetricChannel: return EffectCategory::Insecure;
    case AnomalyKind::NonEnforceability:
    case AnomalyKind::OutOfPlace:
    case AnomalyKind::FilteredChannel:
    case AnomalyKind::L2: return EffectCategory::Unfeasible;
    case AnomalyKind::Shadowing:
    case AnomalyKind::Exception:
    case AnomalyKind::Correlation:
    case AnomalyKind::Affinity:
    case AnomalyKind::Contradiction: return EffectCategory::PotentialError;
    case AnomalyKind::Redundancy:
    case AnomalyKind::Inclusion:
    case AnomalyKind::Superfluous:
    case AnomalyKind::InternalLoop: return EffectCategory::SuboptimalImplementation;
    case AnomalyKind::AlternativePath:
    case AnomalyKind::CyclicPath: return EffectCategory::SuboptimalWalk;
    }
    return EffectCategory::PotentialError;
}

InfoCategory info_category(AnomalyKind k) {
    switch (k) {
    case AnomalyKind::InternalLoop:
    case AnomalyKind::OutOfPlace: return InfoCategory::PiLevelIrrelevant;
    case AnomalyKind::NonEnforceability:
    case AnomalyKind::Inadequacy: return InfoCategory::PiLevelUnsuitable;
    case AnomalyKind::Shadowing:
    case AnomalyKind::Redundancy:
    case AnomalyKind::Exception:
    case AnomalyKind::Correlation: return InfoCategory::NodeIntraTech;
    case AnomalyKind::Inclusion:
    case AnomalyKind::Affinity:
    case AnomalyKind::Contradiction: return InfoCategory::NodeInterTech;
    case AnomalyKind::Superfluous:
    case AnomalyKind::FilteredChannel:
    case AnomalyKind::L2:
    case AnomalyKind::SkewedChannel:
    case AnomalyKind::AsymmetricChannel: return InfoCategory::NetworkChannel;
    case AnomalyKind::CyclicPath:
    case AnomalyKind::Monitorability:
    case AnomalyKind::AlternativePath: return InfoCategory::NetworkPath;
    }
    return InfoCategory::NetworkChannel;
}

namespace {

const char* kTrue = "true";
const char* kFalse = "false";

CapabilityProfile permissive_profile(const Scenario& s, const std::string& node) {
    CapabilityProfile p;
    p.node_id = node;
    for (const std::string& name : s.technologies.names()) {
        p.supported_technologies.insert(name);
        if (s.technologies.get(name).is_layer2()) p.layer2_technologies.insert(name);
    }
    return p;
}

CapabilityProfile profile_or_default(const Scenario& s, const std::string& node) {
    if (const CapabilityProfile* p = s.profile(node)) return *p;
    return permissive_profile(s, node);
}

std::set<std::string> chain_set(const Scenario& s, const PolicyImplementation& pi) {
    const auto chain = pi.chain_nodes(s.forest);
    return {chain.begin(), chain.end()};
}

EvidenceClause rel_clause(const std::string& text, const std::string& check,
                          std::vector<std::string> args, Relation observed) {
    return {text, check, std::move(args), std::string(to_string(observed))};
}

EvidenceClause bool_clause(const std::string& text, const std::string& check,
                           std::vector<std::string> args, bool observed) {
    return {text, check, std::move(args), observed ? kTrue : kFalse};
}

struct PairRelations {
    Relation source;
    Relation destination;
    Relation technology;
    Relation coefficients;
    Relation selector;
    bool gateways_equal;
};

PairRelations pair_relations(const Scenario& s, const PolicyImplementation& i1,
                             const PolicyImplementation& i2) {
    return {
        entity_relation(s.forest, i1.source, i2.source),
        entity_relation(s.forest, i1.destination, i2.destination),
        technology_relation(s.technologies.get(i1.technology), s.technologies.get(i2.technology)),
        coefficient_relation(i1.coefficients, i2.coefficients),
        selector_relation(i1.selector, i2.selector),
        i1.gateways == i2.gateways,
    };
}

void push_pair_evidence(Anomaly& a, const PolicyImplementation& i1,
                        const PolicyImplementation& i2, const PairRelations& r) {
    a.evidence.push_back(rel_clause("s1 vs s2", "entity_rel",
                                    {i1.id, "source", i2.id, "source"}, r.source));
    a.evidence.push_back(rel_clause("d1 vs d2", "entity_rel",
                                    {i1.id, "destination", i2.id, "destination"},
                                    r.destination));
    a.evidence.push_back(rel_clause("t1 vs t2", "tech_rel", {i1.id, i2.id}, r.technology));
    a.evidence.push_back(rel_clause("C1 vs C2", "coeff_rel", {i1.id, i2.id}, r.coefficients));
    a.evidence.push_back(rel_clause("S1 vs S2", "sel_rel", {i1.id, i2.id}, r.selector));
    a.evidence.push_back(
        bool_clause("G1 = G2", "gw_eq", {i1.id, i2.id}, r.gateways_equal));
}

Anomaly make(AnomalyKind kind, std::vector<std::string> subjects, std::string message) {
    Anomaly a;
    a.kind = kind;
    a.subject_pis = std::move(subjects);
    a.message = std::move(message);
    return a;
}

bool shadowing_fires(const Scenario& s, const PolicyImplementation& i1,
                     const PolicyImplementation& i2, PairRelations* out = nullptr) {
    if (i1.id == i2.id) return false;
    if (i1.deployed_at != i2.deployed_at || i1.technology != i2.technology) return false;
    const PairRelations r = pair_relations(s, i1, i2);
    if (out) *out = r;
    return i1.priority < i2.priority && dominates_or_equal(r.source) &&
           dominates_or_equal(r.destination) && dominates_or_equal(r.selector) &&
           r.coefficients == Relation::Disjoint && r.gateways_equal;
}

bool redundancy_fires(const Scenario& s, const PolicyImplementation& i1,
                      const PolicyImplementation& i2, PairRelations* out = nullptr) {
    if (i1.id == i2.id) return false;
    if (i1.deployed_at != i2.deployed_at || i1.technology != i2.technology) return false;
    const PairRelations r = pair_relations(s, i1, i2);
    if (out) *out = r;
    // The priority clause comes from the prose ("with a higher priority");
    // without it two identical PIs would flag each other symmetrically.
    return i1.priority < i2.priority && dominates_or_equal(r.source) &&
           dominates_or_equal(r.destination) && dominates_or_equal(r.selector) &&
           dominates_or_equal(r.coefficients) && r.gateways_equal;
}

bool exception_fires(const Scenario& s, const PolicyImplementation& i1,
                     const PolicyImplementation& i2, PairRelations* out = nullptr) {
    if (i1.id == i2.id) return false;
    if (i1.deployed_at != i2.deployed_at || i1.technology != i2.technology) return false;
    const PairRelations r = pair_relations(s, i1, i2);
    if (out) *out = r;
    return i1.priority < i2.priority && r.source == Relation::DominatedBy &&
           r.destination == Relation::DominatedBy && r.selector == Relation::DominatedBy &&
           r.coefficients == Relation::Disjoint && r.gateways_equal;
}

bool inclusion_fires(const Scenario& s, const PolicyImplementation& i1,
                     const PolicyImplementation& i2, PairRelations* out = nullptr) {
    if (i1.id == i2.id) return false;
    if (i1.deployed_at != i2.deployed_at) return false;
    const PairRelations r = pair_relations(s, i1, i2);
    if (out) *out = r;
    const bool all_ge = dominates_or_equal(r.source) && dominates_or_equal(r.destination) &&
                        dominates_or_equal(r.technology) && dominates_or_equal(r.coefficients) &&
                        dominates_or_equal(r.selector);
    const bool any_strict = strictly_dominates(r.source) || strictly_dominates(r.destination) ||
                            strictly_dominates(r.technology) ||
                            strictly_dominates(r.coefficients) || strictly_dominates(r.selector);
    return all_ge && any_strict && r.gateways_equal;
}

} // namespace

// --- PI level ---

std::optional<Anomaly> detect_internal_loop(const Scenario& s, const PolicyImplementation& pi) {
    const Relation r = entity_relation(s.forest, pi.source, pi.destination);
    if (r == Relation::Disjoint) return std::nullopt;
    Anomaly a = make(AnomalyKind::InternalLoop, {pi.id},
                     "source and destination of " + pi.id + " live on the same node " +
                         s.node_of(pi.source));
    a.evidence.push_back(rel_clause("s1 not disjoint from d1", "entity_rel",
                                    {pi.id, "source", pi.id, "destination"}, r));
    return a;
}

std::optional<Anomaly> detect_out_of_place(const Scenario& s, const PolicyImplementation& pi) {
    const std::string source_node = s.node_of(pi.source);
    if (source_node == pi.deployed_at) return std::nullopt;
    Anomaly a = make(AnomalyKind::OutOfPlace, {pi.id},
                     pi.id + " is deployed on " + pi.deployed_at + " but its source lives on " +
                         source_node);
    a.evidence.push_back(bool_clause("N(i1) disjoint from s1", "deployed_elsewhere", {pi.id}, true));
    return a;
}

std::optional<Anomaly> detect_non_enforceability(const Scenario& s,
                                                 const PolicyImplementation& pi) {
    const std::string src_node = s.node_of(pi.source);
    const std::string dst_node = s.node_of(pi.destination);
    const CapabilityProfile src = profile_or_default(s, src_node);
    const CapabilityProfile dst = profile_or_default(s, dst_node);

    const bool src_supports = src.supports(pi.technology);
    const bool dst_supports = dst.supports(pi.technology);
    bool too_strong = false;
    CoefficientTriple ceiling;
    if (src_supports && dst_supports) {
        const MaxCoefficients cmax = max_coefficients(src, dst, pi.technology);
        ceiling = cmax.coefficients;
        too_strong =
            coefficient_relation(pi.coefficients, cmax.coefficients) == Relation::Dominates;
    }
    if (src_supports && dst_supports && !too_strong) return std::nullopt;

    Anomaly a = make(AnomalyKind::NonEnforceability, {pi.id}, "");
    std::string why;
    if (!src_supports)
        why = pi.technology + " is not supported by source node " + src_node;
    else if (!dst_supports)
        why = pi.technology + " is not supported by destination node " + dst_node;
    else
        why = "coefficients " + pi.coefficients.str() + " exceed the enforceable maximum " +
              ceiling.str();
    a.message = pi.id + " cannot be enforced: " + why;
    a.evidence.push_back(
        bool_clause("t1 in T(s1)", "tech_supported", {pi.id, src_node}, src_supports));
    a.evidence.push_back(
        bool_clause("t1 in T(d1)", "tech_supported", {pi.id, dst_node}, dst_supports));
    if (src_supports && dst_supports)
        a.evidence.push_back(bool_clause("C1 strictly dominates C_max(i1)", "coeff_above_max",
                                         {pi.id}, too_strong));
    return a;
}

std::optional<Anomaly> detect_inadequacy(const Scenario& s, const PolicyImplementation& pi,
                                         std::string* note) {
    const CoefficientTriple minimum = s.min_coefficients_for(pi);
    const Relation r = coefficient_relation(pi.coefficients, minimum);
    if (r == Relation::Disjoint && note)
        *note = "PI " + pi.id + ": coefficients " + pi.coefficients.str() +
                " are incomparable with the required minimum " + minimum.str();
    if (r != Relation::DominatedBy) return std::nullopt;
    Anomaly a = make(AnomalyKind::Inadequacy, {pi.id},
                     pi.id + " enforces " + pi.coefficients.str() +
                         ", below the required minimum " + minimum.str());
    a.evidence.push_back(rel_clause("C1 vs C_min(i1)", "coeff_vs_min", {pi.id}, r));
    return a;
}

// --- node level, intra technology ---

std::optional<Anomaly> detect_shadowing(const Scenario& s, const PolicyImplementation& i1,
                                        const PolicyImplementation& i2) {
    PairRelations r{};
    if (!shadowing_fires(s, i1, i2, &r)) return std::nullopt;
    Anomaly a = make(AnomalyKind::Shadowing, {i1.id, i2.id},
                     i1.id + " matches all traffic of " + i2.id +
                         " at higher priority with incomparable protection");
    a.evidence.push_back(bool_clause("pi(i1) < pi(i2)", "priority_lt", {i1.id, i2.id}, true));
    push_pair_evidence(a, i1, i2, r);
    return a;
}

std::optional<Anomaly> detect_redundancy(const Scenario& s, const PolicyImplementation& i1,
                                         const PolicyImplementation& i2) {
    PairRelations r{};
    if (!redundancy_fires(s, i1, i2, &r)) return std::nullopt;
    Anomaly a = make(AnomalyKind::Redundancy, {i1.id, i2.id},
                     i2.id + " adds nothing: " + i1.id +
                         " already covers its traffic at least as strongly");
    a.evidence.push_back(bool_clause("pi(i1) < pi(i2)", "priority_lt", {i1.id, i2.id}, true));
    push_pair_evidence(a, i1, i2, r);
    return a;
}

std::optional<Anomaly> detect_exception(const Scenario& s, const PolicyImplementation& i1,
                                        const PolicyImplementation& i2) {
    PairRelations r{};
    if (!exception_fires(s, i1, i2, &r)) return std::nullopt;
    Anomaly a = make(AnomalyKind::Exception, {i1.id, i2.id},
                     i1.id + " is an exception carved out of the broader " + i2.id);
    a.evidence.push_back(bool_clause("pi(i1) < pi(i2)", "priority_lt", {i1.id, i2.id}, true));
    push_pair_evidence(a, i1, i2, r);
    return a;
}

std::optional<Anomaly> detect_correlation(const Scenario& s, const PolicyImplementation& i1,
                                          const PolicyImplementation& i2) {
    if (i1.id == i2.id) return std::nullopt;
    if (i1.deployed_at != i2.deployed_at || i1.technology != i2.technology) return std::nullopt;
    const PairRelations r = pair_relations(s, i1, i2);
    if (r.source == Relation::Disjoint || r.destination == Relation::Disjoint ||
        r.selector == Relation::Disjoint || !r.gateways_equal)
        return std::nullopt;
    const bool excluded = shadowing_fires(s, i1, i2) || shadowing_fires(s, i2, i1) ||
                          exception_fires(s, i1, i2) || exception_fires(s, i2, i1) ||
                          redundancy_fires(s, i1, i2) || redundancy_fires(s, i2, i1);
    if (excluded) return std::nullopt;
    Anomaly a = make(AnomalyKind::Correlation, {i1.id, i2.id},
                     "some traffic matches both " + i1.id + " and " + i2.id +
                         ", leaving the applied protection ambiguous");
    push_pair_evidence(a, i1, i2, r);
    a.evidence.push_back(bool_clause("no shadowing/exception/redundancy either way",
                                     "not_sh_ex_re", {i1.id, i2.id}, true));
    return a;
}

// --- node level, inter technology ---

std::optional<Anomaly> detect_inclusion(const Scenario& s, const PolicyImplementation& i1,
                                        const PolicyImplementation& i2) {
    PairRelations r{};
    if (!inclusion_fires(s, i1, i2, &r)) return std::nullopt;
    Anomaly a = make(AnomalyKind::Inclusion, {i1.id, i2.id},
                     i1.id + " includes " + i2.id + ": every field dominates or equals");
    push_pair_evidence(a, i1, i2, r);
    return a;
}

std::optional<Anomaly> detect_affinity(const Scenario& s, const PolicyImplementation& i1,
                                       const PolicyImplementation& i2) {
    if (i1.id == i2.id) return std::nullopt;
    if (i1.deployed_at != i2.deployed_at) return std::nullopt;
    const PairRelations r = pair_relations(s, i1, i2);
    if (r.source == Relation::Disjoint || r.destination == Relation::Disjoint ||
        r.technology == Relation::Disjoint || r.selector == Relation::Disjoint ||
        !r.gateways_equal)
        return std::nullopt;
    if (inclusion_fires(s, i1, i2) || inclusion_fires(s, i2, i1)) return std::nullopt;
    Anomaly a = make(AnomalyKind::Affinity, {i1.id, i2.id},
                     i1.id + " and " + i2.id +
                         " protect overlapping traffic with different technologies; neither "
                         "includes the other");
    push_pair_evidence(a, i1, i2, r);
    a.evidence.push_back(
        bool_clause("no inclusion either way", "not_inclusion", {i1.id, i2.id}, true));
    return a;
}

std::optional<Anomaly> detect_contradiction(const Scenario& s, const PolicyImplementation& i1,
                                            const PolicyImplementation& i2) {
    if (i1.id == i2.id) return std::nullopt;
    if (i1.deployed_at != i2.deployed_at) return std::nullopt;
    const PairRelations r = pair_relations(s, i1, i2);
    if (r.source == Relation::Disjoint || r.destination == Relation::Disjoint ||
        r.technology != Relation::Disjoint || r.selector == Relation::Disjoint ||
        !r.gateways_equal)
        return std::nullopt;
    Anomaly a = make(AnomalyKind::Contradiction, {i1.id, i2.id},
                     i1.id + " and " + i2.id +
                         " disagree on whether overlapping traffic must be protected");
    push_pair_evidence(a, i1, i2, r);
    return a;
}

std::optional<Anomaly> detect_inspection_contradiction(const Scenario& s,
                                                       const PolicyImplementation& pi) {
    if (pi.coefficients.confidentiality.is_zero()) return std::nullopt;
    for (std::size_t z = 0; z < s.thresholds.inspection_zones.size(); ++z) {
        if (!selectors_intersect(pi.selector, s.thresholds.inspection_zones[z])) continue;
        Anomaly a = make(AnomalyKind::Contradiction, {pi.id},
                         pi.id + " encrypts traffic that inspection zone #" + std::to_string(z) +
                             " requires to stay monitorable");
        a.evidence.push_back(bool_clause("selector overlaps inspection zone",
                                         "inspection_overlap", {pi.id, std::to_string(z)}, true));
        a.evidence.push_back(bool_clause("c^c > 0", "confidential", {pi.id}, true));
        return a;
    }
    return std::nullopt;
}

// --- channel level ---

bool is_tunnel(const Scenario& s, const PolicyImplementation& pi) {
    if (!pi.gateways.empty()) return true;
    return s.kind_of(s.node_of(pi.source)) == NodeKind::Gateway &&
           s.kind_of(s.node_of(pi.destination)) == NodeKind::Gateway;
}

std::optional<Anomaly> detect_superfluous(const Scenario& s, const PolicyImplementation& pi) {
    if (!is_tunnel(s, pi)) return std::nullopt;
    const auto own_chain = chain_set(s, pi);
    std::vector<const PolicyImplementation*> encapsulated;
    bool weaker_inner_exists = false;
    for (const PolicyImplementation& other : s.pis) {
        if (other.id == pi.id) continue;
        const auto other_chain = chain_set(s, other);
        const bool strict_superset =
            other_chain.size() > own_chain.size() &&
            std::includes(other_chain.begin(), other_chain.end(), own_chain.begin(),
                          own_chain.end());
        if (!strict_superset) continue;
        if (!source_in_selector_scope(s.forest, other.source, pi.selector)) continue;
        encapsulated.push_back(&other);
        if (coefficient_relation(other.coefficients, pi.coefficients) == Relation::DominatedBy)
            weaker_inner_exists = true;
    }
    // A tunnel carrying nothing is not superfluous; the anomaly needs inner
    // channels that all protect at least as much as the tunnel itself.
    if (encapsulated.empty() || weaker_inner_exists) return std::nullopt;

    Anomaly a = make(AnomalyKind::Superfluous, {pi.id},
                     "tunnel " + pi.id + " protects no more than any channel it encapsulates");
    for (const PolicyImplementation* inner : encapsulated) {
        a.evidence.push_back(bool_clause("s_k in S1|src and Gk* strictly contains G1*",
                                         "encapsulates", {pi.id, inner->id}, true));
        a.evidence.push_back(rel_clause("C_k vs C1 (not dominated)", "coeff_rel",
                                        {inner->id, pi.id},
                                        coefficient_relation(inner->coefficients,
                                                             pi.coefficients)));
    }
    return a;
}

std::optional<Anomaly> detect_skewed(const Scenario& s, const PolicyImplementation& i1,
                                     const PolicyImplementation& i2) {
    if (i1.id == i2.id) return std::nullopt;
    if (!is_tunnel(s, i1) || !is_tunnel(s, i2)) return std::nullopt;
    if (i1.coefficients.confidentiality.is_zero() || i2.coefficients.confidentiality.is_zero())
        return std::nullopt;
    const bool in_scope = source_in_selector_scope(s.forest, i1.source, i2.selector);
    if (!in_scope) return std::nullopt;

    const auto c1 = chain_set(s, i1);
    const auto c2 = chain_set(s, i2);
    std::vector<std::string> shared;
    std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(shared));
    if (shared.size() < 2) return std::nullopt;
    std::vector<std::string> extra;
    std::set_difference(c2.begin(), c2.end(), c1.begin(), c1.end(), std::back_inserter(extra));
    if (extra.empty()) return std::nullopt;

    Anomaly a = make(AnomalyKind::SkewedChannel, {i1.id, i2.id},
                     "tunnels " + i1.id + " and " + i2.id +
                         " overlap; decapsulation order can expose a cleartext segment");
    a.evidence.push_back(bool_clause("s1 in S2|src", "src_scope", {i1.id, i2.id}, true));
    a.evidence.push_back(bool_clause("|G1* intersect G2*| >= 2", "chain_shared_ge2",
                                     {i1.id, i2.id}, true));
    a.evidence.push_back(
        bool_clause("G2* minus G1* nonempty", "chain_extra", {i1.id, i2.id}, true));
    a.evidence.push_back(bool_clause("c1^c > 0", "confidential", {i1.id}, true));
    a.evidence.push_back(bool_clause("c2^c > 0", "confidential", {i2.id}, true));
    return a;
}

std::optional<Anomaly> detect_filtered(const Scenario& s, const PolicyImplementation& pi) {
    for (const std::string& gw : pi.gateways) {
        if (is_filtered(s, gw, pi)) {
            Anomaly a = make(AnomalyKind::FilteredChannel, {pi.id},
                             "gateway " + gw + " drops the entire traffic of " + pi.id);
            a.evidence.push_back(bool_clause("F_e(i1) at " + gw, "filtered_at", {gw, pi.id}, true));
            return a;
        }
    }
    return std::nullopt;
}

std::optional<Anomaly> detect_l2(const Scenario& s, const PolicyImplementation& pi) {
    const Technology& tech = s.technologies.get(pi.technology);
    if (!tech.is_layer2()) return std::nullopt;
    for (const std::string& node : pi.chain_nodes(s.forest)) {
        const CapabilityProfile profile = profile_or_default(s, node);
        if (!profile.layer2_technologies.count(pi.technology)) {
            Anomaly a = make(AnomalyKind::L2, {pi.id},
                             pi.id + " uses " + pi.technology + " but " + node +
                                 " does not speak it at the data-link layer");
            a.evidence.push_back(
                bool_clause("t1 not in T2(e)", "l2_missing", {node, pi.id}, true));
            return a;
        }
    }
    return std::nullopt;
}

std::optional<Anomaly> detect_asymmetric(const Scenario& s, const PolicyImplementation& pi,
                                         bool strict) {
    const std::string src_node = s.node_of(pi.source);
    const std::string dst_node = s.node_of(pi.destination);
    std::vector<std::string> reverse_gateways(pi.gateways.rbegin(), pi.gateways.rend());

    bool reverse_traffic_exists = false;
    for (const PolicyImplementation& other : s.pis) {
        if (other.id == pi.id) continue;
        if (s.node_of(other.destination) != src_node) continue; // s1 not disjoint from d2
        if (s.node_of(other.source) != dst_node) continue;      // d1 not disjoint from s2
        if (!selectors_intersect(pi.selector, reverse_selector(other.selector))) continue;
        reverse_traffic_exists = true;
        if (other.technology == pi.technology && other.coefficients == pi.coefficients &&
            other.gateways == reverse_gateways)
            return std::nullopt; // matching reverse channel found
    }
    if (!strict && !reverse_traffic_exists) return std::nullopt;

    Anomaly a = make(AnomalyKind::AsymmetricChannel, {pi.id},
                     "no reverse channel mirrors " + pi.id +
                         " (same technology, coefficients and reversed gateways)");
    a.evidence.push_back(bool_clause("reverse-direction channel exists", "reverse_exists",
                                     {pi.id}, reverse_traffic_exists));
    a.evidence.push_back(bool_clause("no mirror with equal t, C and reversed G", "no_mirror",
                                     {pi.id}, true));
    return a;
}

// --- path level ---

std::vector<Anomaly> detect_cyclic_paths(const Scenario& s, std::size_t cycle_cap) {
    std::vector<Anomaly> out;

    // A single PI whose own gateway walk revisits a node is already a loop.
    for (const PolicyImplementation& pi : s.pis) {
        const auto chain = pi.chain_nodes(s.forest);
        std::set<std::string> seen;
        for (const std::string& node : chain) {
            if (!seen.insert(node).second) {
                Anomaly a = make(AnomalyKind::CyclicPath, {pi.id},
                                 pi.id + " crosses node " + node + " more than once");
                a.subject_paths.push_back({pi.id});
                a.evidence.push_back(
                    bool_clause("node repeats in G*", "chain_repeats", {pi.id}, true));
                out.push_back(std::move(a));
                break;
            }
        }
    }

    // Cycles in the PI-succession graph are loops the carried traffic can
    // actually take (junction nodes shared, selectors compatible).
    const ConnectionGraph graph = chain_graph(s);
    for (const auto& cycle : detect_cycles(graph, cycle_cap)) {
        Selector traffic = s.pis[cycle.front()].selector;
        std::vector<std::string> ids;
        std::set<std::string> nodes;
        for (std::uint32_t v : cycle) {
            const PolicyImplementation& pi = s.pis[v];
            if (&pi != &s.pis[cycle.front()]) traffic = selector_intersect(traffic, pi.selector);
            ids.push_back(pi.id);
            for (const std::string& n : pi.chain_nodes(s.forest)) nodes.insert(n);
        }
        if (traffic.empty()) continue; // no single flow travels the whole loop
        std::string node_list;
        for (const std::string& n : nodes) node_list += (node_list.empty() ? "" : ", ") + n;
        Anomaly a = make(AnomalyKind::CyclicPath, ids,
                         "traffic can loop through nodes {" + node_list + "}");
        a.subject_paths.push_back(ids);
        a.evidence.push_back(bool_clause("PI chain forms a cycle with non-empty traffic",
                                         "chain_cycle", ids, true));
        out.push_back(std::move(a));
    }
    return out;
}

std::optional<Anomaly> detect_monitorability(const Scenario& s, EntityId e1, EntityId e2,
                                             const std::vector<const Path*>& paths) {
    bool communicating = false;
    const Path* witness = nullptr;
    for (const Path* p : paths) {
        for (std::size_t idx : p->pi_indices) {
            if (!s.pis[idx].coefficients.confidentiality.is_zero()) {
                communicating = true;
                if (!witness || p->pi_indices.size() < witness->pi_indices.size()) witness = p;
                break;
            }
        }
    }
    if (!communicating) return std::nullopt;
    for (const Path* p : paths) {
        if (p->pi_indices.size() == 1 &&
            !s.pis[p->pi_indices.front()].coefficients.confidentiality.is_zero())
            return std::nullopt; // a true end-to-end protected channel exists
    }

    Anomaly a;
    a.kind = AnomalyKind::Monitorability;
    a.endpoint_from = s.forest.dotted_name(e1);
    a.endpoint_to = s.forest.dotted_name(e2);
    a.subject_pis = witness->pi_ids(s);
    a.subject_paths.push_back(witness->pi_ids(s));
    a.message = "every protected route from " + a.endpoint_from + " to " + a.endpoint_to +
                " re-exposes the payload at a junction node";
    a.evidence.push_back(bool_clause("no length-1 path with c^c > 0",
                                     "no_confidential_single_hop",
                                     {a.endpoint_from, a.endpoint_to}, true));
    return a;
}

std::vector<Anomaly> detect_alternative_paths(const Scenario& s, EntityId e1, EntityId e2,
                                              const std::vector<const Path*>& paths) {
    std::vector<Anomaly> out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            Anomaly a;
            a.kind = AnomalyKind::AlternativePath;
            a.endpoint_from = s.forest.dotted_name(e1);
            a.endpoint_to = s.forest.dotted_name(e2);
            a.subject_paths.push_back(paths[i]->pi_ids(s));
            a.subject_paths.push_back(paths[j]->pi_ids(s));
            for (const auto& ids : a.subject_paths)
                for (const std::string& id : ids) a.subject_pis.push_back(id);
            a.message = "two distinct paths connect " + a.endpoint_from + " and " + a.endpoint_to;
            a.evidence.push_back(bool_clause("paths differ", "paths_differ",
                                             {a.endpoint_from, a.endpoint_to}, true));
            out.push_back(std::move(a));
        }
    }
    return out;
}

// --- replay ---

std::optional<std::string> replay_clause(const Scenario& s, const EvidenceClause& clause) {
    auto pi_by_id = [&](const std::string& id) -> const PolicyImplementation* {
        return s.find_pi(id);
    };
    auto verdict = [](bool b) { return std::string(b ? kTrue : kFalse); };

    try {
        if (clause.check == "entity_rel") {
            if (clause.args.size() != 4) return std::nullopt;
            const PolicyImplementation* p1 = pi_by_id(clause.args[0]);
            const PolicyImplementation* p2 = pi_by_id(clause.args[2]);
            if (!p1 || !p2) return std::nullopt;
            auto pick = [&](const PolicyImplementation* p, const std::string& field) {
                return field == "source" ? p->source : p->destination;
            };
            return std::string(to_string(entity_relation(
                s.forest, pick(p1, clause.args[1]), pick(p2, clause.args[3]))));
        }
        if (clause.check == "tech_rel") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return std::string(to_string(technology_relation(
                s.technologies.get(p1->technology), s.technologies.get(p2->technology))));
        }
        if (clause.check == "coeff_rel") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return std::string(
                to_string(coefficient_relation(p1->coefficients, p2->coefficients)));
        }
        if (clause.check == "sel_rel") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return std::string(to_string(selector_relation(p1->selector, p2->selector)));
        }
        if (clause.check == "priority_lt") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return verdict(p1->priority < p2->priority);
        }
        if (clause.check == "gw_eq") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return verdict(p1->gateways == p2->gateways);
        }
        if (clause.check == "deployed_elsewhere") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            return verdict(s.node_of(p->source) != p->deployed_at);
        }
        if (clause.check == "tech_supported") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            return verdict(profile_or_default(s, clause.args.at(1)).supports(p->technology));
        }
        if (clause.check == "coeff_above_max") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            const auto cmax = max_coefficients(profile_or_default(s, s.node_of(p->source)),
                                               profile_or_default(s, s.node_of(p->destination)),
                                               p->technology);
            if (!cmax.supported) return std::nullopt;
            return verdict(coefficient_relation(p->coefficients, cmax.coefficients) ==
                           Relation::Dominates);
        }
        if (clause.check == "coeff_vs_min") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            return std::string(to_string(
                coefficient_relation(p->coefficients, s.min_coefficients_for(*p))));
        }
        if (clause.check == "not_sh_ex_re") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return verdict(!shadowing_fires(s, *p1, *p2) && !shadowing_fires(s, *p2, *p1) &&
                           !exception_fires(s, *p1, *p2) && !exception_fires(s, *p2, *p1) &&
                           !redundancy_fires(s, *p1, *p2) && !redundancy_fires(s, *p2, *p1));
        }
        if (clause.check == "not_inclusion") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return verdict(!inclusion_fires(s, *p1, *p2) && !inclusion_fires(s, *p2, *p1));
        }
        if (clause.check == "encapsulates") {
            const PolicyImplementation* outer = pi_by_id(clause.args.at(0));
            const PolicyImplementation* inner = pi_by_id(clause.args.at(1));
            if (!outer || !inner) return std::nullopt;
            const auto oc = chain_set(s, *outer);
            const auto ic = chain_set(s, *inner);
            const bool strict = ic.size() > oc.size() &&
                                std::includes(ic.begin(), ic.end(), oc.begin(), oc.end());
            return verdict(strict &&
                           source_in_selector_scope(s.forest, inner->source, outer->selector));
        }
        if (clause.check == "src_scope") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            return verdict(source_in_selector_scope(s.forest, p1->source, p2->selector));
        }
        if (clause.check == "chain_shared_ge2" || clause.check == "chain_extra") {
            const PolicyImplementation* p1 = pi_by_id(clause.args.at(0));
            const PolicyImplementation* p2 = pi_by_id(clause.args.at(1));
            if (!p1 || !p2) return std::nullopt;
            const auto c1 = chain_set(s, *p1);
            const auto c2 = chain_set(s, *p2);
            std::vector<std::string> tmp;
            if (clause.check == "chain_shared_ge2") {
                std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(),
                                      std::back_inserter(tmp));
                return verdict(tmp.size() >= 2);
            }
            std::set_difference(c2.begin(), c2.end(), c1.begin(), c1.end(),
                                std::back_inserter(tmp));
            return verdict(!tmp.empty());
        }
        if (clause.check == "confidential") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            return verdict(!p->coefficients.confidentiality.is_zero());
        }
        if (clause.check == "filtered_at") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(1));
            if (!p) return std::nullopt;
            return verdict(is_filtered(s, clause.args.at(0), *p));
        }
        if (clause.check == "l2_missing") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(1));
            if (!p) return std::nullopt;
            return verdict(
                !profile_or_default(s, clause.args.at(0)).layer2_technologies.count(p->technology));
        }
        if (clause.check == "inspection_overlap") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            const std::size_t z = std::stoul(clause.args.at(1));
            if (z >= s.thresholds.inspection_zones.size()) return std::nullopt;
            return verdict(selectors_intersect(p->selector, s.thresholds.inspection_zones[z]));
        }
        if (clause.check == "reverse_exists" || clause.check == "no_mirror") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            const std::string src_node = s.node_of(p->source);
            const std::string dst_node = s.node_of(p->destination);
            std::vector<std::string> rev_gw(p->gateways.rbegin(), p->gateways.rend());
            bool reverse = false, mirror = false;
            for (const PolicyImplementation& other : s.pis) {
                if (other.id == p->id) continue;
                if (s.node_of(other.destination) != src_node ||
                    s.node_of(other.source) != dst_node)
                    continue;
                if (!selectors_intersect(p->selector, reverse_selector(other.selector))) continue;
                reverse = true;
                if (other.technology == p->technology && other.coefficients == p->coefficients &&
                    other.gateways == rev_gw)
                    mirror = true;
            }
            return verdict(clause.check == "reverse_exists" ? reverse : !mirror);
        }
        if (clause.check == "chain_repeats") {
            const PolicyImplementation* p = pi_by_id(clause.args.at(0));
            if (!p) return std::nullopt;
            const auto chain = p->chain_nodes(s.forest);
            std::set<std::string> seen(chain.begin(), chain.end());
            return verdict(seen.size() != chain.size());
        }
        if (clause.check == "chain_cycle") {
            // The member PIs must chain pairwise with a globally non-empty
            // traffic intersection.
            std::vector<const PolicyImplementation*> members;
            for (const std::string& id : clause.args) {
                const PolicyImplementation* p = pi_by_id(id);
                if (!p) return std::nullopt;
                members.push_back(p);
            }
            if (members.empty()) return verdict(false);
            Selector traffic = members.front()->selector;
            bool chained = true;
            for (std::size_t i = 0; i < members.size(); ++i) {
                const PolicyImplementation* cur = members[i];
                const PolicyImplementation* next = members[(i + 1) % members.size()];
                if (s.node_of(cur->destination) != s.node_of(next->source)) chained = false;
                if (i + 1 < members.size())
                    traffic = selector_intersect(traffic, next->selector);
            }
            return verdict(chained && !traffic.empty());
        }
        if (clause.check == "no_confidential_single_hop" || clause.check == "paths_differ") {
            // Path-derived facts: recompute from a fresh enumeration.
            auto from = s.forest.find(clause.args.at(0));
            auto to = s.forest.find(clause.args.at(1));
            if (!from || !to) return std::nullopt;
            const auto paths = enumerate_simple_paths(s, *from, *to);
            if (clause.check == "paths_differ") return verdict(paths.paths.size() >= 2);
            for (const Path& p : paths.paths) {
                if (p.pi_indices.size() == 1 &&
                    !s.pis[p.pi_indices.front()].coefficients.confidentiality.is_zero())
                    return verdict(false);
            }
            return verdict(true);
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

// --- orchestration ---

AnalysisResult run_analysis(const Scenario& scenario, const AnalysisOptions& options) {
    using clock = std::chrono::steady_clock;

    AnalysisResult result;

    // Pre-computation: the world model (entity forest, topology, routing,
    // capability profiles) is verified and the chained walks are
    // enumerated. Per-PI work belongs to the analysis phase.
    const auto t0 = clock::now();
    auto problems = scenario.validate_world();
    if (!problems.empty()) throw ScenarioError(problems);
    // Chained (multi-PI) walks; every PI is trivially a one-hop path of its
    // own and those are folded in during the per-path analysis below.
    const PathEnumeration chained_paths =
        enumerate_all_paths(scenario, options.path_cap, /*include_singletons=*/false);
    const auto t1 = clock::now();

    // Analysis: PI validation first (aggregated end-points are legal here;
    // strictness is an ingestion concern, and resolution outputs may sit at
    // ancestor entities), then the detector families.
    problems = scenario.validate_pis(PiValidation::AllowAggregatedEndpoints);
    if (!problems.empty()) throw ScenarioError(problems);
    const ConnectionGraph node_graph = ConnectionGraph::from_scenario(scenario);

    std::vector<Anomaly>& found = result.anomalies;

    // PI-level detectors, PIs visited in id order.
    std::vector<std::size_t> order(scenario.pis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scenario.pis[a].id < scenario.pis[b].id;
    });

    for (std::size_t idx : order) {
        const PolicyImplementation& pi = scenario.pis[idx];
        if (auto a = detect_internal_loop(scenario, pi)) found.push_back(std::move(*a));
        if (auto a = detect_out_of_place(scenario, pi)) found.push_back(std::move(*a));
        if (auto a = detect_non_enforceability(scenario, pi)) found.push_back(std::move(*a));
        std::string note;
        if (auto a = detect_inadequacy(scenario, pi, &note)) found.push_back(std::move(*a));
        if (!note.empty()) result.notes.push_back(std::move(note));
    }

    // Node level, intra-technology: ordered and unordered pairs per PI set.
    for (const PISet& set : scenario.pi_sets()) {
        const auto& members = set.pi_indices;
        for (std::size_t a : members) {
            for (std::size_t b : members) {
                if (a == b) continue;
                const PolicyImplementation& i1 = scenario.pis[a];
                const PolicyImplementation& i2 = scenario.pis[b];
                if (auto an = detect_shadowing(scenario, i1, i2)) found.push_back(std::move(*an));
                if (auto an = detect_redundancy(scenario, i1, i2)) found.push_back(std::move(*an));
                if (auto an = detect_exception(scenario, i1, i2)) found.push_back(std::move(*an));
            }
        }
        for (std::size_t ai = 0; ai < members.size(); ++ai) {
            for (std::size_t bi = ai + 1; bi < members.size(); ++bi) {
                if (auto an = detect_correlation(scenario, scenario.pis[members[ai]],
                                                 scenario.pis[members[bi]]))
                    found.push_back(std::move(*an));
            }
        }
    }

    // Node level, inter-technology: pairs with different technologies on the
    // same deployment node.
    std::map<std::string, std::vector<std::size_t>> by_node;
    for (std::size_t idx : order) by_node[scenario.pis[idx].deployed_at].push_back(idx);
    for (const auto& [node, members] : by_node) {
        for (std::size_t ai = 0; ai < members.size(); ++ai) {
            for (std::size_t bi = 0; bi < members.size(); ++bi) {
                if (ai == bi) continue;
                const PolicyImplementation& i1 = scenario.pis[members[ai]];
                const PolicyImplementation& i2 = scenario.pis[members[bi]];
                if (i1.technology == i2.technology) continue;
                if (auto an = detect_inclusion(scenario, i1, i2)) found.push_back(std::move(*an));
                if (ai < bi) {
                    if (auto an = detect_affinity(scenario, i1, i2))
                        found.push_back(std::move(*an));
                    if (auto an = detect_contradiction(scenario, i1, i2))
                        found.push_back(std::move(*an));
                }
            }
        }
    }
    for (std::size_t idx : order) {
        if (auto an = detect_inspection_contradiction(scenario, scenario.pis[idx]))
            found.push_back(std::move(*an));
    }

    // Channel level.
    for (std::size_t idx : order) {
        const PolicyImplementation& pi = scenario.pis[idx];
        if (auto an = detect_superfluous(scenario, pi)) found.push_back(std::move(*an));
        if (auto an = detect_filtered(scenario, pi)) found.push_back(std::move(*an));
        if (auto an = detect_l2(scenario, pi)) found.push_back(std::move(*an));
        if (auto an = detect_asymmetric(scenario, pi, options.strict_asymmetric))
            found.push_back(std::move(*an));
    }
    for (std::size_t ai = 0; ai < order.size(); ++ai) {
        for (std::size_t bi = ai + 1; bi < order.size(); ++bi) {
            const PolicyImplementation& i1 = scenario.pis[order[ai]];
            const PolicyImplementation& i2 = scenario.pis[order[bi]];
            // Try both orderings, report the unordered pair once.
            if (auto an = detect_skewed(scenario, i1, i2)) {
                found.push_back(std::move(*an));
            } else if (auto an2 = detect_skewed(scenario, i2, i1)) {
                found.push_back(std::move(*an2));
            }
        }
    }

    // Path level. Merge the pre-computed chains with the trivial one-PI
    // paths, keeping the deterministic lexicographic-by-ids order.
    std::vector<Path> all_paths;
    all_paths.reserve(chained_paths.paths.size() + scenario.pis.size());
    for (std::size_t idx : order) {
        // Internal loops are not simple paths (the node repeats).
        if (scenario.node_of(scenario.pis[idx].source) ==
            scenario.node_of(scenario.pis[idx].destination))
            continue;
        Path p;
        p.source_entity = scenario.pis[idx].source;
        p.destination_entity = scenario.pis[idx].destination;
        p.pi_indices = {idx};
        p.traffic = scenario.pis[idx].selector;
        all_paths.push_back(std::move(p));
    }
    for (const Path& p : chained_paths.paths) all_paths.push_back(p);
    std::sort(all_paths.begin(), all_paths.end(), [&](const Path& a, const Path& b) {
        return a.pi_ids(scenario) < b.pi_ids(scenario);
    });

    std::map<std::pair<EntityId, EntityId>, std::vector<const Path*>> by_endpoints;
    for (const Path& p : all_paths)
        by_endpoints[{p.source_entity, p.destination_entity}].push_back(&p);
    for (const auto& [key, paths] : by_endpoints) {
        if (auto an = detect_monitorability(scenario, key.first, key.second, paths))
            found.push_back(std::move(*an));
        for (Anomaly& an : detect_alternative_paths(scenario, key.first, key.second, paths))
            found.push_back(std::move(an));
    }
    for (Anomaly& an : detect_cyclic_paths(scenario, options.cycle_cap))
        found.push_back(std::move(an));

    const auto t2 = clock::now();

    std::sort(found.begin(), found.end(), [](const Anomaly& a, const Anomaly& b) {
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        if (a.subject_pis != b.subject_pis) return a.subject_pis < b.subject_pis;
        return a.subject_paths < b.subject_paths;
    });

    result.stats.entity_count = scenario.forest.size();
    result.stats.pi_count = scenario.pis.size();
    result.stats.connection_count = node_graph.edges.size();
    result.stats.enumerated_paths = all_paths.size();
    result.stats.paths_truncated = chained_paths.truncated;
    result.stats.pre_computation_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    result.stats.analysis_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    return result;
}

} // namespace cppa
