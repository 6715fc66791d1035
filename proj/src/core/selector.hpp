#pragma once

#include "core/interval_set.hpp"
#include "core/relation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cppa {

enum class FieldKind { IpSet, PortSet, ProtoSet };

std::uint64_t field_domain_max(FieldKind kind);

/// One selector dimension: a normalized union of intervals over the field's
/// discrete domain. The wildcard is the full domain.
struct FieldSet {
    FieldKind kind = FieldKind::IpSet;
    IntervalSet members;

    static FieldSet wildcard(FieldKind kind);
    bool is_wildcard() const;
    bool empty() const { return members.empty(); }

    friend bool operator==(const FieldSet&, const FieldSet&) = default;
};

/// The classic five-tuple (src address/port, dst address/port, protocol)
/// plus optional named extra fields. The matched-traffic set is the
/// Cartesian product of all fields, so it is empty iff any field is empty.
struct Selector {
    FieldSet ip_src = FieldSet::wildcard(FieldKind::IpSet);
    FieldSet p_src = FieldSet::wildcard(FieldKind::PortSet);
    FieldSet ip_dst = FieldSet::wildcard(FieldKind::IpSet);
    FieldSet p_dst = FieldSet::wildcard(FieldKind::PortSet);
    FieldSet prt = FieldSet::wildcard(FieldKind::ProtoSet);
    std::vector<std::pair<std::string, FieldSet>> extras;

    static Selector wildcard() { return Selector{}; }

    bool empty() const;
    bool is_wildcard() const;
    bool same_schema(const Selector& other) const;

    std::vector<const FieldSet*> fields() const;
    std::vector<FieldSet*> fields();

    /// Canonical field names: ip_src, p_src, ip_dst, p_dst, prt, then extras.
    std::vector<std::string> field_names() const;

    friend bool operator==(const Selector&, const Selector&) = default;

    std::string str() const;
};

/// Comparison of the matched-traffic sets. Because the sets are products of
/// per-field interval sets, the verdict is computed exactly without
/// enumeration. When one side is empty the containment branch wins over
/// disjointness (checked in the order equal, superset, subset, disjoint, kin).
Relation selector_relation(const Selector& s1, const Selector& s2);

/// S̄ — source and destination address/port swapped, protocol and extras kept.
Selector reverse_selector(const Selector& s);

/// S|fields — keep the named fields, widen everything else to the wildcard.
/// Unknown field names raise std::invalid_argument.
Selector restrict_selector(const Selector& s, const std::vector<std::string>& keep);

/// Field-wise least upper bound: per-field union of members. The result is
/// the tightest product-form selector covering both operands.
Selector selector_lub(const Selector& a, const Selector& b);

Selector selector_intersect(const Selector& a, const Selector& b);
bool selectors_intersect(const Selector& a, const Selector& b);

/// Difference a \ b expressed as disjoint product boxes. Used by the
/// firewall "drops all traffic" evaluation.
std::vector<Selector> box_subtract(const Selector& a, const Selector& b);

// ---- textual field parsing (scenario files, CLI) ----

/// "10.1.0.0/16", "10.1.0.1", "10.1.0.1-10.1.0.9", comma unions, or "*".
std::optional<IntervalSet> parse_ip_set(const std::string& text);
/// "443", "1000-2000", comma unions, or "*".
std::optional<IntervalSet> parse_port_set(const std::string& text);
/// "TCP", "UDP", "ICMP", a raw protocol number, comma unions, or "*".
std::optional<IntervalSet> parse_proto_set(const std::string& text);

std::optional<std::uint32_t> parse_ipv4(const std::string& text);
std::string ipv4_to_string(std::uint32_t addr);
std::string field_set_to_string(const FieldSet& fs);

} // namespace cppa
