#include "core/selector.hpp"

#include <sstream>
#include <stdexcept>

namespace cppa {

std::uint64_t field_domain_max(FieldKind kind) {
    switch (kind) {
    case FieldKind::IpSet: return 0xFFFFFFFFull;
    case FieldKind::PortSet: return 65535;
    case FieldKind::ProtoSet: return 255;
    }
    return 0;
}

FieldSet FieldSet::wildcard(FieldKind kind) {
    FieldSet fs;
    fs.kind = kind;
    fs.members = IntervalSet(0, field_domain_max(kind));
    return fs;
}

bool FieldSet::is_wildcard() const {
    return members == IntervalSet(0, field_domain_max(kind));
}

bool Selector::empty() const {
    for (const FieldSet* f : fields())
        if (f->empty()) return true;
    return false;
}

bool Selector::is_wildcard() const {
    for (const FieldSet* f : fields())
        if (!f->is_wildcard()) return false;
    return true;
}

bool Selector::same_schema(const Selector& other) const {
    if (extras.size() != other.extras.size()) return false;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        if (extras[i].first != other.extras[i].first) return false;
        if (extras[i].second.kind != other.extras[i].second.kind) return false;
    }
    return true;
}

std::vector<const FieldSet*> Selector::fields() const {
    std::vector<const FieldSet*> out = {&ip_src, &p_src, &ip_dst, &p_dst, &prt};
    for (const auto& [name, fs] : extras) out.push_back(&fs);
    return out;
}

std::vector<FieldSet*> Selector::fields() {
    std::vector<FieldSet*> out = {&ip_src, &p_src, &ip_dst, &p_dst, &prt};
    for (auto& [name, fs] : extras) out.push_back(&fs);
    return out;
}

std::vector<std::string> Selector::field_names() const {
    std::vector<std::string> out = {"ip_src", "p_src", "ip_dst", "p_dst", "prt"};
    for (const auto& [name, fs] : extras) out.push_back(name);
    return out;
}

std::string Selector::str() const {
    std::ostringstream os;
    os << "(" << field_set_to_string(ip_src) << "," << field_set_to_string(p_src) << ","
       << field_set_to_string(ip_dst) << "," << field_set_to_string(p_dst) << ","
       << field_set_to_string(prt);
    for (const auto& [name, fs] : extras) os << "," << name << "=" << field_set_to_string(fs);
    os << ")";
    return os.str();
}

Relation selector_relation(const Selector& s1, const Selector& s2) {
    if (!s1.same_schema(s2)) throw std::invalid_argument("selector schema mismatch");
    const auto f1 = s1.fields();
    const auto f2 = s2.fields();

    if (s1.empty() && s2.empty()) return Relation::Equivalent;

    bool all_eq = true, all_sup = true, all_sub = true, disjoint = false;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        const IntervalSet& a = f1[i]->members;
        const IntervalSet& b = f2[i]->members;
        if (!(a == b)) all_eq = false;
        if (!b.subset_of(a)) all_sup = false;
        if (!a.subset_of(b)) all_sub = false;
        if (!a.intersects(b)) disjoint = true;
    }
    if (all_eq) return Relation::Equivalent;
    if (s2.empty() || all_sup) return Relation::Dominates;
    if (s1.empty() || all_sub) return Relation::DominatedBy;
    if (disjoint) return Relation::Disjoint;
    return Relation::Kin;
}

Selector reverse_selector(const Selector& s) {
    Selector out = s;
    out.ip_src = s.ip_dst;
    out.p_src = s.p_dst;
    out.ip_dst = s.ip_src;
    out.p_dst = s.p_src;
    return out;
}

Selector restrict_selector(const Selector& s, const std::vector<std::string>& keep) {
    const auto names = s.field_names();
    for (const std::string& k : keep) {
        bool known = false;
        for (const std::string& n : names)
            if (n == k) known = true;
        if (!known) throw std::invalid_argument("unknown selector field: " + k);
    }
    auto kept = [&](const std::string& name) {
        for (const std::string& k : keep)
            if (k == name) return true;
        return false;
    };
    Selector out = s;
    auto fields = out.fields();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!kept(names[i])) *fields[i] = FieldSet::wildcard(fields[i]->kind);
    }
    return out;
}

Selector selector_lub(const Selector& a, const Selector& b) {
    if (!a.same_schema(b)) throw std::invalid_argument("selector schema mismatch");
    Selector out = a;
    auto fo = out.fields();
    const auto fb = b.fields();
    for (std::size_t i = 0; i < fo.size(); ++i) fo[i]->members = fo[i]->members.unite(fb[i]->members);
    return out;
}

Selector selector_intersect(const Selector& a, const Selector& b) {
    if (!a.same_schema(b)) throw std::invalid_argument("selector schema mismatch");
    Selector out = a;
    auto fo = out.fields();
    const auto fb = b.fields();
    for (std::size_t i = 0; i < fo.size(); ++i)
        fo[i]->members = fo[i]->members.intersect(fb[i]->members);
    return out;
}

bool selectors_intersect(const Selector& a, const Selector& b) {
    if (!a.same_schema(b)) throw std::invalid_argument("selector schema mismatch");
    const auto fa = a.fields();
    const auto fb = b.fields();
    for (std::size_t i = 0; i < fa.size(); ++i)
        if (!fa[i]->members.intersects(fb[i]->members)) return false;
    return !a.empty() && !b.empty();
}

std::vector<Selector> box_subtract(const Selector& a, const Selector& b) {
    if (a.empty()) return {};
    if (!selectors_intersect(a, b)) return {a};
    // Peel dimension by dimension: the part of `a` outside `b` on dimension i
    // (with dimensions < i already clipped to b) is disjoint from the rest.
    std::vector<Selector> out;
    Selector rest = a;
    auto rest_fields = rest.fields();
    const auto b_fields = b.fields();
    for (std::size_t i = 0; i < rest_fields.size(); ++i) {
        const IntervalSet outside = rest_fields[i]->members.subtract(b_fields[i]->members);
        if (!outside.empty()) {
            Selector piece = rest;
            piece.fields()[i]->members = outside;
            out.push_back(std::move(piece));
        }
        rest_fields[i]->members = rest_fields[i]->members.intersect(b_fields[i]->members);
        if (rest_fields[i]->members.empty()) break;
    }
    return out;
}

// ---- parsing ----

std::optional<std::uint32_t> parse_ipv4(const std::string& text) {
    std::uint32_t out = 0;
    int octets = 0;
    std::size_t pos = 0;
    while (octets < 4) {
        std::size_t dot = text.find('.', pos);
        if (dot == std::string::npos) dot = text.size();
        if (dot == pos || dot - pos > 3) return std::nullopt;
        int value = 0;
        for (std::size_t i = pos; i < dot; ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            value = value * 10 + (text[i] - '0');
        }
        if (value > 255) return std::nullopt;
        out = (out << 8) | static_cast<std::uint32_t>(value);
        ++octets;
        if (octets == 4) {
            if (dot != text.size()) return std::nullopt; // trailing garbage
            return out;
        }
        if (dot == text.size()) return std::nullopt; // too few octets
        pos = dot + 1;
    }
    return std::nullopt;
}

std::string ipv4_to_string(std::uint32_t addr) {
    std::ostringstream os;
    os << ((addr >> 24) & 0xFF) << "." << ((addr >> 16) & 0xFF) << "." << ((addr >> 8) & 0xFF)
       << "." << (addr & 0xFF);
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(text.substr(pos, next - pos));
        pos = next + 1;
        if (next == text.size()) break;
    }
    return out;
}

std::optional<IntervalSet> parse_ip_piece(const std::string& piece) {
    if (auto slash = piece.find('/'); slash != std::string::npos) {
        auto base = parse_ipv4(piece.substr(0, slash));
        if (!base) return std::nullopt;
        int prefix = -1;
        try {
            prefix = std::stoi(piece.substr(slash + 1));
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (prefix < 0 || prefix > 32) return std::nullopt;
        const std::uint32_t mask = prefix == 0 ? 0xFFFFFFFFu : ((1ull << (32 - prefix)) - 1);
        return IntervalSet(*base & ~mask, *base | mask);
    }
    if (auto dash = piece.find('-'); dash != std::string::npos) {
        auto lo = parse_ipv4(piece.substr(0, dash));
        auto hi = parse_ipv4(piece.substr(dash + 1));
        if (!lo || !hi || *lo > *hi) return std::nullopt;
        return IntervalSet(*lo, *hi);
    }
    auto addr = parse_ipv4(piece);
    if (!addr) return std::nullopt;
    return IntervalSet::single(*addr);
}

std::optional<IntervalSet> parse_numeric_piece(const std::string& piece, std::uint64_t max) {
    auto parse_one = [&](const std::string& s) -> std::optional<std::uint64_t> {
        if (s.empty()) return std::nullopt;
        std::uint64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
            if (v > max) return std::nullopt;
        }
        return v;
    };
    if (auto dash = piece.find('-'); dash != std::string::npos) {
        auto lo = parse_one(piece.substr(0, dash));
        auto hi = parse_one(piece.substr(dash + 1));
        if (!lo || !hi || *lo > *hi) return std::nullopt;
        return IntervalSet(*lo, *hi);
    }
    auto v = parse_one(piece);
    if (!v) return std::nullopt;
    return IntervalSet::single(*v);
}

template <typename PieceParser>
std::optional<IntervalSet> parse_union(const std::string& text, FieldKind kind,
                                       PieceParser&& piece_parser) {
    if (text == "*" || text == "any") return IntervalSet(0, field_domain_max(kind));
    IntervalSet out;
    for (const std::string& piece : split(text, ',')) {
        auto part = piece_parser(piece);
        if (!part) return std::nullopt;
        out = out.unite(*part);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

} // namespace

std::optional<IntervalSet> parse_ip_set(const std::string& text) {
    return parse_union(text, FieldKind::IpSet, parse_ip_piece);
}

std::optional<IntervalSet> parse_port_set(const std::string& text) {
    return parse_union(text, FieldKind::PortSet,
                       [](const std::string& p) { return parse_numeric_piece(p, 65535); });
}

std::optional<IntervalSet> parse_proto_set(const std::string& text) {
    return parse_union(text, FieldKind::ProtoSet, [](const std::string& p) -> std::optional<IntervalSet> {
        if (p == "TCP" || p == "tcp") return IntervalSet::single(6);
        if (p == "UDP" || p == "udp") return IntervalSet::single(17);
        if (p == "ICMP" || p == "icmp") return IntervalSet::single(1);
        return parse_numeric_piece(p, 255);
    });
}

std::string field_set_to_string(const FieldSet& fs) {
    if (fs.is_wildcard()) return "*";
    if (fs.kind != FieldKind::IpSet) {
        if (fs.kind == FieldKind::ProtoSet && fs.members.count() == 1) {
            const std::uint64_t v = fs.members.intervals()[0].lo;
            if (v == 6) return "TCP";
            if (v == 17) return "UDP";
            if (v == 1) return "ICMP";
        }
        return fs.members.str();
    }
    std::string out;
    const auto& ivals = fs.members.intervals();
    for (std::size_t i = 0; i < ivals.size(); ++i) {
        if (i) out += ",";
        const std::uint32_t lo = static_cast<std::uint32_t>(ivals[i].lo);
        const std::uint32_t hi = static_cast<std::uint32_t>(ivals[i].hi);
        if (lo == hi) {
            out += ipv4_to_string(lo);
        } else {
            out += ipv4_to_string(lo) + "-" + ipv4_to_string(hi);
        }
    }
    return out;
}

} // namespace cppa
