#include "engine/resolution.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace cppa {

std::string_view to_string(ResolutionAction a) {
    switch (a) {
    case ResolutionAction::DeletePi: return "DELETE_PI";
    case ResolutionAction::ReplaceWithLub: return "REPLACE_WITH_LUB";
    case ResolutionAction::SplitTunnels: return "SPLIT_TUNNELS";
    case ResolutionAction::RaiseCoefficients: return "RAISE_COEFFICIENTS";
    case ResolutionAction::RedeployPi: return "REDEPLOY_PI";
    case ResolutionAction::EditFilterRule: return "EDIT_FILTER_RULE";
    case ResolutionAction::ChangeTechnology: return "CHANGE_TECHNOLOGY";
    case ResolutionAction::RemoveCycleEdges: return "REMOVE_CYCLE_EDGES";
    case ResolutionAction::SelectPreferredPath: return "SELECT_PREFERRED_PATH";
    case ResolutionAction::ManualReview: return "MANUAL_REVIEW";
    }
    return "?";
}

namespace {

const PolicyImplementation& require_pi(const Scenario& s, const std::string& id) {
    const PolicyImplementation* pi = s.find_pi(id);
    if (!pi) throw std::invalid_argument("resolution subject missing: " + id);
    return *pi;
}

Resolution base(const Anomaly& a, ResolutionAction action, std::string rationale) {
    Resolution r;
    r.action = action;
    r.anomaly_kind = a.kind;
    r.anomaly_subjects = a.subject_pis;
    r.rationale = std::move(rationale);
    return r;
}

std::uint32_t next_priority(const Scenario& s, const std::string& node, const std::string& tech,
                            const std::set<std::string>& ignoring) {
    std::uint32_t next = 0;
    for (const PolicyImplementation& pi : s.pis) {
        if (pi.deployed_at != node || pi.technology != tech) continue;
        if (ignoring.count(pi.id)) continue;
        next = std::max(next, pi.priority + 1);
    }
    return next;
}

/// Entity where a layer-L technology can attach on/under `from`: the entity
/// itself when compatible, otherwise its shallowest descendant at a layer
/// >= L (deterministic by name).
EntityId re_anchor(const Scenario& s, EntityId from, const Technology& tech) {
    if (tech.is_null()) return from;
    const NetworkEntity& e = s.forest.entity(from);
    if (e.layer.has_value() && *e.layer >= tech.osi_layer) return from;
    const std::string node = e.node_id;
    EntityId best = kNoEntity;
    for (EntityId cand : s.forest.entities_of(node)) {
        const NetworkEntity& c = s.forest.entity(cand);
        if (!c.layer.has_value() || *c.layer < tech.osi_layer) continue;
        if (cand != from && !s.forest.is_ancestor(from, cand)) continue;
        if (best == kNoEntity) {
            best = cand;
            continue;
        }
        const NetworkEntity& b = s.forest.entity(best);
        if (*c.layer < *b.layer || (*c.layer == *b.layer && c.name < b.name)) best = cand;
    }
    return best == kNoEntity ? from : best;
}

/// Replacement technology for a PI that cannot be enforced (or must leave
/// layer 2): supported by both end nodes, strong enough ceilings, attachable
/// at (or under) the current end-points.
std::optional<PolicyImplementation> change_technology(const Scenario& s,
                                                      const PolicyImplementation& pi,
                                                      int min_layer_exclusive) {
    const std::string src_node = s.node_of(pi.source);
    const std::string dst_node = s.node_of(pi.destination);
    const CapabilityProfile* src = s.profile(src_node);
    const CapabilityProfile* dst = s.profile(dst_node);

    std::vector<std::string> candidates = s.preferred_technologies;
    for (const std::string& name : s.technologies.names()) candidates.push_back(name);

    for (const std::string& name : candidates) {
        const Technology* tech = s.technologies.find(name);
        if (!tech || tech->is_null() || name == pi.technology) continue;
        if (tech->osi_layer <= min_layer_exclusive) continue;
        if (src && !src->supports(name)) continue;
        if (dst && !dst->supports(name)) continue;
        CapabilityProfile sp = src ? *src : CapabilityProfile{};
        CapabilityProfile dp = dst ? *dst : CapabilityProfile{};
        if (src && dst) {
            const MaxCoefficients cmax = max_coefficients(*src, *dst, name);
            if (cmax.supported &&
                coefficient_relation(pi.coefficients, cmax.coefficients) == Relation::Dominates)
                continue;
        }
        PolicyImplementation out = pi;
        out.technology = name;
        out.source = re_anchor(s, pi.source, *tech);
        out.destination = re_anchor(s, pi.destination, *tech);
        const NetworkEntity& se = s.forest.entity(out.source);
        const NetworkEntity& de = s.forest.entity(out.destination);
        if (!se.layer.has_value() || *se.layer < tech->osi_layer) continue;
        if (!de.layer.has_value() || *de.layer < tech->osi_layer) continue;
        std::set<std::string> ignoring = {pi.id};
        out.priority = next_priority(s, out.deployed_at, name, ignoring);
        return out;
    }
    return std::nullopt;
}

std::vector<Resolution> suggest_split_tunnels(const Anomaly& a, const Scenario& s) {
    const PolicyImplementation& i1 = require_pi(s, a.subject_pis.at(0));
    const PolicyImplementation& i2 = require_pi(s, a.subject_pis.at(1));
    const auto chain1 = i1.chain_nodes(s.forest);
    const auto chain2 = i2.chain_nodes(s.forest);
    std::set<std::string> shared(chain1.begin(), chain1.end());
    std::set<std::string> set2(chain2.begin(), chain2.end());
    std::set<std::string> cut;
    for (const std::string& n : shared)
        if (set2.count(n)) cut.insert(n);

    Resolution r = base(a, ResolutionAction::SplitTunnels,
                        "split the overlapping tunnels at every shared node so no pair "
                        "overlaps past a common segment");
    r.delete_pis = {i1.id, i2.id};

    auto split_one = [&](const PolicyImplementation& pi, const std::vector<std::string>& chain) {
        std::vector<std::size_t> cuts = {0};
        for (std::size_t k = 1; k + 1 < chain.size(); ++k)
            if (cut.count(chain[k])) cuts.push_back(k);
        cuts.push_back(chain.size() - 1);
        const Technology& tech = s.technologies.get(pi.technology);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const std::size_t from = cuts[c];
            const std::size_t to = cuts[c + 1];
            PolicyImplementation seg = pi;
            seg.id = pi.id + "#" + std::to_string(c + 1);
            seg.source = from == 0 ? pi.source
                                   : re_anchor(s, s.forest.root_of(chain[from]).value(), tech);
            seg.destination = to == chain.size() - 1
                                  ? pi.destination
                                  : re_anchor(s, s.forest.root_of(chain[to]).value(), tech);
            seg.gateways.assign(chain.begin() + static_cast<long>(from) + 1,
                                chain.begin() + static_cast<long>(to));
            seg.deployed_at = chain[from];
            std::set<std::string> ignoring = {i1.id, i2.id};
            seg.priority = next_priority(s, seg.deployed_at, seg.technology, ignoring) +
                           static_cast<std::uint32_t>(r.replacement_pis.size());
            r.replacement_pis.push_back(std::move(seg));
        }
    };
    split_one(i1, chain1);
    split_one(i2, chain2);
    return {r};
}

std::vector<Resolution> suggest_select_path(const Anomaly& a, const Scenario& s) {
    // Preferred path: the shortest; ties go to the larger summed
    // coefficients. Every PI exclusive to the losing path is removed.
    const auto& p1 = a.subject_paths.at(0);
    const auto& p2 = a.subject_paths.at(1);
    auto coeff_sum = [&](const std::vector<std::string>& ids) {
        Rational sum(0);
        for (const std::string& id : ids) {
            const PolicyImplementation& pi = require_pi(s, id);
            for (const Rational& c : pi.coefficients.components())
                sum = Rational(sum.num() * c.den() + c.num() * sum.den(), sum.den() * c.den());
        }
        return sum;
    };
    const std::vector<std::string>* keep = &p1;
    const std::vector<std::string>* drop = &p2;
    if (p2.size() < p1.size() || (p2.size() == p1.size() && coeff_sum(p2) > coeff_sum(p1))) {
        keep = &p2;
        drop = &p1;
    }
    Resolution r = base(a, ResolutionAction::SelectPreferredPath,
                        "keep the shortest (then strongest) path and delete the other one");
    std::set<std::string> kept(keep->begin(), keep->end());
    for (const std::string& id : *drop)
        if (!kept.count(id)) r.delete_pis.push_back(id);
    return {r};
}

PolicyImplementation end_to_end_replacement(const Scenario& s, const Anomaly& a) {
    // Strongest hop of the witness path becomes the template for a direct
    // end-to-end channel between the pair.
    const auto& ids = a.subject_paths.at(0);
    const PolicyImplementation* strongest = nullptr;
    for (const std::string& id : ids) {
        const PolicyImplementation& pi = require_pi(s, id);
        if (!strongest ||
            pi.coefficients.confidentiality > strongest->coefficients.confidentiality)
            strongest = &pi;
    }
    PolicyImplementation out = *strongest;
    out.id = "e2e(" + a.endpoint_from + "," + a.endpoint_to + ")";
    const Technology& tech = s.technologies.get(out.technology);
    out.source = re_anchor(s, s.forest.require(a.endpoint_from), tech);
    out.destination = re_anchor(s, s.forest.require(a.endpoint_to), tech);
    out.deployed_at = s.node_of(out.source);
    // The direct channel spans every node the chained hops crossed.
    std::vector<std::string> gateways;
    const std::string src_node = s.node_of(out.source);
    const std::string dst_node = s.node_of(out.destination);
    for (const std::string& id : ids) {
        for (const std::string& n : require_pi(s, id).chain_nodes(s.forest)) {
            if (n == src_node || n == dst_node) continue;
            if (std::find(gateways.begin(), gateways.end(), n) == gateways.end())
                gateways.push_back(n);
        }
    }
    out.gateways = gateways;
    out.selector = strongest->selector;
    out.priority = next_priority(s, out.deployed_at, out.technology, {});
    return out;
}

} // namespace

std::vector<Resolution> suggest(const Anomaly& a, const Scenario& s) {
    std::vector<Resolution> out;
    switch (a.kind) {
    case AnomalyKind::InternalLoop: {
        Resolution r = base(a, ResolutionAction::DeletePi,
                            "a channel looping inside one node adds nothing; delete it");
        r.delete_pis = {a.subject_pis.at(0)};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::OutOfPlace: {
        Resolution del = base(a, ResolutionAction::DeletePi, "delete the misplaced PI");
        del.delete_pis = {a.subject_pis.at(0)};
        const PolicyImplementation& pi = require_pi(s, a.subject_pis.at(0));
        Resolution redeploy = base(a, ResolutionAction::RedeployPi,
                                   "redeploy the PI on its source node " + s.node_of(pi.source));
        PolicyImplementation moved = pi;
        moved.deployed_at = s.node_of(pi.source);
        moved.priority = next_priority(s, moved.deployed_at, moved.technology, {pi.id});
        redeploy.delete_pis = {pi.id};
        redeploy.replacement_pis = {std::move(moved)};
        out.push_back(std::move(del));
        out.push_back(std::move(redeploy));
        break;
    }
    case AnomalyKind::NonEnforceability: {
        const PolicyImplementation& pi = require_pi(s, a.subject_pis.at(0));
        if (auto changed = change_technology(s, pi, 0)) {
            Resolution r = base(a, ResolutionAction::ChangeTechnology,
                                "switch to " + changed->technology +
                                    ", which both end-points can enforce");
            r.delete_pis = {pi.id};
            r.replacement_pis = {std::move(*changed)};
            out.push_back(std::move(r));
        }
        Resolution manual = base(a, ResolutionAction::ManualReview,
                                 "upgrade the end-point security services, or lower the "
                                 "coefficients at your own risk");
        // Default proposal: clamp the coefficients to the enforceable maximum
        // when the protocol itself is available on both ends.
        const CapabilityProfile* src = s.profile(s.node_of(pi.source));
        const CapabilityProfile* dst = s.profile(s.node_of(pi.destination));
        if (src && dst) {
            const MaxCoefficients cmax = max_coefficients(*src, *dst, pi.technology);
            if (cmax.supported) {
                PolicyImplementation clamped = pi;
                clamped.coefficients =
                    CoefficientTriple::component_min(pi.coefficients, cmax.coefficients);
                manual.delete_pis = {pi.id};
                manual.replacement_pis = {std::move(clamped)};
            }
        }
        out.push_back(std::move(manual));
        break;
    }
    case AnomalyKind::Inadequacy: {
        const PolicyImplementation& pi = require_pi(s, a.subject_pis.at(0));
        Resolution r = base(a, ResolutionAction::RaiseCoefficients,
                            "raise the coefficients to the smallest compliant triple");
        PolicyImplementation raised = pi;
        raised.coefficients =
            CoefficientTriple::component_max(pi.coefficients, s.min_coefficients_for(pi));
        r.delete_pis = {pi.id};
        r.replacement_pis = {std::move(raised)};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::Shadowing:
    case AnomalyKind::Exception: {
        const PolicyImplementation& i1 = require_pi(s, a.subject_pis.at(0));
        const PolicyImplementation& i2 = require_pi(s, a.subject_pis.at(1));
        const bool exception = a.kind == AnomalyKind::Exception;
        Resolution del =
            base(a, ResolutionAction::DeletePi,
                 exception ? "drop the exception if it is unintended (exceptions are often "
                             "deliberate 'all but one' rules)"
                           : "delete the shadowed PI");
        del.delete_pis = {exception ? i1.id : i2.id};
        out.push_back(std::move(del));

        Resolution lub = base(a, ResolutionAction::ReplaceWithLub,
                              "replace both with their least upper bound at priority " +
                                  std::to_string(i1.priority));
        PolicyImplementation merged =
            least_upper_bound_pi(i1, i2, s.forest, s.technologies,
                                 LubOptions{s.preferred_technologies});
        merged.priority = i1.priority;
        lub.delete_pis = {i1.id, i2.id};
        lub.replacement_pis = {std::move(merged)};
        out.push_back(std::move(lub));
        break;
    }
    case AnomalyKind::Redundancy: {
        Resolution r = base(a, ResolutionAction::DeletePi,
                            "the lower-priority PI adds no semantics; delete it");
        r.delete_pis = {a.subject_pis.at(1)};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::Correlation:
    case AnomalyKind::Affinity: {
        const PolicyImplementation& i1 = require_pi(s, a.subject_pis.at(0));
        const PolicyImplementation& i2 = require_pi(s, a.subject_pis.at(1));
        Resolution r = base(a, ResolutionAction::ReplaceWithLub,
                            "replace the ambiguous pair with one covering PI");
        PolicyImplementation merged =
            least_upper_bound_pi(i1, i2, s.forest, s.technologies,
                                 LubOptions{s.preferred_technologies});
        merged.priority = std::min(i1.priority, i2.priority);
        r.delete_pis = {i1.id, i2.id};
        r.replacement_pis = {std::move(merged)};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::Inclusion:
    case AnomalyKind::Superfluous: {
        const bool superfluous = a.kind == AnomalyKind::Superfluous;
        Resolution r = base(a, ResolutionAction::DeletePi,
                            superfluous
                                ? "the tunnel protects no more than its inner channels; delete it"
                                : "the included PI can be removed");
        r.delete_pis = {superfluous ? a.subject_pis.at(0) : a.subject_pis.at(1)};
        out.push_back(std::move(r));
        out.push_back(base(a, ResolutionAction::ManualReview,
                           "alternatively keep both for defense in depth"));
        break;
    }
    case AnomalyKind::Contradiction: {
        Resolution r = base(a, ResolutionAction::ManualReview,
                            "decide between 'protect' and 'inspect'; the default proposal drops "
                            "the side that blocks inspection");
        // Prefer removing the NULL PI of a pair; for the threshold-sourced
        // variant the protecting PI itself is the only subject.
        std::string victim = a.subject_pis.back();
        for (const std::string& id : a.subject_pis) {
            if (require_pi(s, id).technology == kNullTechnology) victim = id;
        }
        r.delete_pis = {victim};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::SkewedChannel: {
        out = suggest_split_tunnels(a, s);
        break;
    }
    case AnomalyKind::FilteredChannel: {
        const PolicyImplementation& pi = require_pi(s, a.subject_pis.at(0));
        Resolution del = base(a, ResolutionAction::DeletePi, "delete the unusable PI");
        del.delete_pis = {pi.id};
        out.push_back(std::move(del));
        for (const std::string& gw : pi.gateways) {
            const CapabilityProfile* profile = s.profile(gw);
            if (!profile || !is_filtered(s, gw, pi)) continue;
            for (std::size_t ri = 0; ri < profile->firewall_rules.size(); ++ri) {
                const FirewallRule& rule = profile->firewall_rules[ri];
                if (rule.action == FilterAction::Deny &&
                    selectors_intersect(rule.selector, pi.selector)) {
                    Resolution edit =
                        base(a, ResolutionAction::EditFilterRule,
                             "drop the DENY rule #" + std::to_string(ri) + " on " + gw);
                    edit.filter_node = gw;
                    edit.filter_rule_index = ri;
                    out.push_back(std::move(edit));
                    break;
                }
            }
            break;
        }
        break;
    }
    case AnomalyKind::L2: {
        const PolicyImplementation& pi = require_pi(s, a.subject_pis.at(0));
        if (auto changed = change_technology(s, pi, 2)) {
            Resolution r = base(a, ResolutionAction::ChangeTechnology,
                                "move the protection above the data-link layer (" +
                                    changed->technology + ")");
            r.delete_pis = {pi.id};
            r.replacement_pis = {std::move(*changed)};
            out.push_back(std::move(r));
        } else {
            Resolution r = base(a, ResolutionAction::ManualReview,
                                "no common higher-layer technology is available; the PI must be "
                                "redesigned by hand (default proposal deletes it)");
            r.delete_pis = {pi.id};
            out.push_back(std::move(r));
        }
        break;
    }
    case AnomalyKind::CyclicPath: {
        Resolution r = base(a, ResolutionAction::RemoveCycleEdges,
                            "break the loop by removing one of its PIs");
        r.delete_pis = {a.subject_pis.back()};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::Monitorability: {
        Resolution r = base(a, ResolutionAction::ManualReview,
                            "if the junction nodes are untrusted, replace the chain with the "
                            "proposed end-to-end channel");
        r.replacement_pis = {end_to_end_replacement(s, a)};
        out.push_back(std::move(r));
        break;
    }
    case AnomalyKind::AlternativePath: {
        out = suggest_select_path(a, s);
        break;
    }
    case AnomalyKind::AsymmetricChannel: {
        const PolicyImplementation& pi = require_pi(s, a.subject_pis.at(0));
        Resolution r = base(a, ResolutionAction::ManualReview,
                            "check whether the weaker reply direction is intended; the default "
                            "proposal adds the missing mirror PI");
        PolicyImplementation mirror = pi;
        mirror.id = "mirror(" + pi.id + ")";
        mirror.source = pi.destination;
        mirror.destination = pi.source;
        mirror.selector = reverse_selector(pi.selector);
        mirror.gateways.assign(pi.gateways.rbegin(), pi.gateways.rend());
        mirror.deployed_at = s.node_of(pi.destination);
        mirror.priority = next_priority(s, mirror.deployed_at, mirror.technology, {});
        r.replacement_pis = {std::move(mirror)};
        out.push_back(std::move(r));
        break;
    }
    }
    return out;
}

Scenario apply_resolution(const Scenario& scenario, const Resolution& resolution) {
    Scenario out = scenario;
    for (const std::string& id : resolution.delete_pis) {
        auto it = std::find_if(out.pis.begin(), out.pis.end(),
                               [&](const PolicyImplementation& pi) { return pi.id == id; });
        if (it == out.pis.end())
            throw std::invalid_argument("resolution refers to missing PI " + id);
        out.pis.erase(it);
    }
    if (resolution.filter_rule_index) {
        auto it = out.profiles.find(resolution.filter_node);
        if (it == out.profiles.end() ||
            *resolution.filter_rule_index >= it->second.firewall_rules.size())
            throw std::invalid_argument("resolution refers to a missing firewall rule");
        it->second.firewall_rules.erase(it->second.firewall_rules.begin() +
                                        static_cast<long>(*resolution.filter_rule_index));
    }
    for (const PolicyImplementation& pi : resolution.replacement_pis) out.pis.push_back(pi);
    return out;
}

ResolutionReport verify_resolution(const Resolution& resolution, const Scenario& scenario,
                                   const AnalysisOptions& options) {
    const AnalysisResult before = run_analysis(scenario, options);
    const Scenario patched = apply_resolution(scenario, resolution);
    const AnalysisResult after = run_analysis(patched, options);

    auto signature = [](const Anomaly& a) {
        return std::make_tuple(a.kind, a.subject_pis, a.subject_paths);
    };

    ResolutionReport report;
    std::set<std::string> involved(resolution.anomaly_subjects.begin(),
                                   resolution.anomaly_subjects.end());
    for (const PolicyImplementation& rp : resolution.replacement_pis) involved.insert(rp.id);

    report.anomaly_eliminated = true;
    for (const Anomaly& a : after.anomalies) {
        if (a.kind != resolution.anomaly_kind) continue;
        bool touches = a.subject_pis.empty() && involved.empty();
        for (const std::string& id : a.subject_pis)
            if (involved.count(id)) touches = true;
        if (touches) report.anomaly_eliminated = false;
    }

    std::set<decltype(signature(std::declval<Anomaly>()))> known;
    for (const Anomaly& a : before.anomalies) known.insert(signature(a));
    for (const Anomaly& a : after.anomalies)
        if (!known.count(signature(a))) report.new_anomalies.push_back(a);
    return report;
}

} // namespace cppa
