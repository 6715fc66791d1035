#include "core/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace cppa {

void TopologyGraph::add_edge(const std::string& a, const std::string& b) {
    if (!has_node(a) || !has_node(b))
        throw std::invalid_argument("edge references unknown node: " + a + "--" + b);
    if (a == b) throw std::invalid_argument("self edge: " + a);
    if (!has_edge(a, b)) edges_.emplace_back(a, b);
}

bool TopologyGraph::has_edge(const std::string& a, const std::string& b) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const auto& e) {
        return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
}

void TopologyGraph::add_route(const std::string& from, const std::string& to,
                              std::vector<std::string> walk) {
    routing_[{from, to}] = std::move(walk);
}

const std::vector<std::string>* TopologyGraph::route(const std::string& from,
                                                     const std::string& to) const {
    auto it = routing_.find({from, to});
    return it == routing_.end() ? nullptr : &it->second;
}

std::vector<std::string> TopologyGraph::validate() const {
    std::vector<std::string> problems;
    for (const auto& [key, walk] : routing_) {
        const auto& [from, to] = key;
        if (walk.size() < 2 || walk.front() != from || walk.back() != to) {
            problems.push_back("route " + from + "->" + to +
                               " must start at its source and end at its destination");
            continue;
        }
        for (const std::string& hop : walk) {
            if (!has_node(hop)) {
                problems.push_back("route " + from + "->" + to + " visits unknown node " + hop);
            }
        }
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
            if (!has_edge(walk[i], walk[i + 1])) {
                problems.push_back("route " + from + "->" + to + " hop " + walk[i] + "--" +
                                   walk[i + 1] + " is not a topology edge");
            }
        }
    }
    return problems;
}

MaxCoefficients max_coefficients(const CapabilityProfile& src, const CapabilityProfile& dst,
                                 const std::string& technology) {
    MaxCoefficients out;
    if (!src.supports(technology) || !dst.supports(technology)) return out;
    out.supported = true;
    auto lookup = [&](const CapabilityProfile& p) -> CoefficientTriple {
        auto it = p.max_coefficients.find(technology);
        // A supported technology with no declared ceiling is unconstrained;
        // model that as a very high ceiling.
        if (it == p.max_coefficients.end())
            return {Rational(1000000), Rational(1000000), Rational(1000000)};
        return it->second;
    };
    out.coefficients = CoefficientTriple::component_min(lookup(src), lookup(dst));
    return out;
}

} // namespace cppa
