#include "core/technology.hpp"

#include <stdexcept>

namespace cppa {

TechnologyRegistry TechnologyRegistry::with_defaults() {
    TechnologyRegistry reg;
    reg.register_technology({"WPA2", 2});
    reg.register_technology({"MACsec", 2});
    reg.register_technology({"IPsec", 3});
    reg.register_technology({"TLS", 5});
    reg.register_technology({"SSH", 5});
    reg.register_technology({"WS-Security", 7});
    reg.register_technology({kNullTechnology, kNoLayer});
    return reg;
}

void TechnologyRegistry::register_technology(const Technology& t) {
    if (t.name.empty()) throw std::invalid_argument("technology name empty");
    if (t.is_null() && t.osi_layer != kNoLayer)
        throw std::invalid_argument("NULL technology cannot have a layer");
    if (!t.is_null() && t.osi_layer != 2 && t.osi_layer != 3 && t.osi_layer != 5 &&
        t.osi_layer != 7)
        throw std::invalid_argument("technology layer must be one of 2,3,5,7: " + t.name);
    if (by_name_.count(t.name)) throw std::invalid_argument("duplicate technology: " + t.name);
    by_name_[t.name] = t;
}

const Technology* TechnologyRegistry::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &it->second;
}

const Technology& TechnologyRegistry::get(const std::string& name) const {
    const Technology* t = find(name);
    if (!t) throw std::out_of_range("unregistered technology: " + name);
    return *t;
}

std::vector<std::string> TechnologyRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(by_name_.size());
    for (const auto& [name, t] : by_name_) out.push_back(name);
    return out;
}

Relation technology_relation(const Technology& t1, const Technology& t2) {
    if (t1.name == t2.name) return Relation::Equivalent;
    if (t1.is_null() != t2.is_null()) return Relation::Disjoint;
    // Both NULL is covered by the equality case; here both are real protocols.
    if (t1.osi_layer == t2.osi_layer) return Relation::Kin;
    return t1.osi_layer < t2.osi_layer ? Relation::Dominates : Relation::DominatedBy;
}

} // namespace cppa
