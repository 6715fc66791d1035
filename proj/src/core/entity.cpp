#include "core/entity.hpp"

#include <stdexcept>

namespace cppa {

EntityId EntityForest::add_node(const std::string& node_id) {
    if (node_id.empty()) throw std::invalid_argument("empty node id");
    if (roots_.count(node_id)) throw std::invalid_argument("duplicate node: " + node_id);
    NetworkEntity root;
    root.node_id = node_id;
    root.label = node_id;
    const EntityId id = static_cast<EntityId>(entities_.size());
    entities_.push_back(std::move(root));
    roots_[node_id] = id;
    return id;
}

EntityId EntityForest::add_entity(const std::string& node_id, const std::string& name, int layer,
                                  EntityId parent, const std::string& label) {
    auto root = roots_.find(node_id);
    if (root == roots_.end()) throw std::invalid_argument("unknown node: " + node_id);
    if (name.empty()) throw std::invalid_argument("empty entity name");
    if (layer != 2 && layer != 3 && layer != 5 && layer != 7)
        throw std::invalid_argument("entity layer must be one of 2,3,5,7");
    if (index_.count({node_id, name}))
        throw std::invalid_argument("duplicate entity " + node_id + "." + name);

    EntityId parent_id = parent == kNoEntity ? root->second : parent;
    const NetworkEntity& p = entity(parent_id);
    if (p.node_id != node_id)
        throw std::invalid_argument("parent belongs to another node: " + node_id + "." + name);
    if (p.layer.has_value() && *p.layer >= layer)
        throw std::invalid_argument("parent layer must be strictly smaller: " + node_id + "." +
                                    name);

    NetworkEntity e;
    e.node_id = node_id;
    e.name = name;
    e.layer = layer;
    e.label = label.empty() ? node_id + "." + name : label;
    e.parent = parent_id;
    const EntityId id = static_cast<EntityId>(entities_.size());
    entities_.push_back(std::move(e));
    index_[{node_id, name}] = id;
    return id;
}

const NetworkEntity& EntityForest::entity(EntityId id) const {
    if (id >= entities_.size()) throw std::out_of_range("bad entity id");
    return entities_[id];
}

void EntityForest::bind_ip(EntityId id, std::uint32_t ip) {
    if (id >= entities_.size()) throw std::out_of_range("bad entity id");
    entities_[id].ip = ip;
}

void EntityForest::bind_port(EntityId id, std::uint16_t port) {
    if (id >= entities_.size()) throw std::out_of_range("bad entity id");
    entities_[id].port = port;
}

std::optional<EntityId> EntityForest::find(const std::string& dotted) const {
    const auto dot = dotted.find('.');
    if (dot == std::string::npos) {
        auto it = roots_.find(dotted);
        if (it == roots_.end()) return std::nullopt;
        return it->second;
    }
    auto it = index_.find({dotted.substr(0, dot), dotted.substr(dot + 1)});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EntityId EntityForest::require(const std::string& dotted) const {
    auto id = find(dotted);
    if (!id) throw std::out_of_range("unknown entity reference: " + dotted);
    return *id;
}

std::optional<EntityId> EntityForest::root_of(const std::string& node_id) const {
    auto it = roots_.find(node_id);
    if (it == roots_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> EntityForest::node_ids() const {
    std::vector<std::string> out;
    out.reserve(roots_.size());
    for (const auto& [id, root] : roots_) out.push_back(id);
    return out;
}

std::vector<EntityId> EntityForest::entities_of(const std::string& node_id) const {
    std::vector<EntityId> out;
    for (EntityId id = 0; id < entities_.size(); ++id)
        if (entities_[id].node_id == node_id) out.push_back(id);
    return out;
}

std::string EntityForest::dotted_name(EntityId id) const {
    const NetworkEntity& e = entity(id);
    return e.is_root() ? e.node_id : e.node_id + "." + e.name;
}

bool EntityForest::is_ancestor(EntityId maybe_ancestor, EntityId e) const {
    EntityId cur = entity(e).parent;
    while (cur != kNoEntity) {
        if (cur == maybe_ancestor) return true;
        cur = entity(cur).parent;
    }
    return false;
}

EntityId EntityForest::lowest_common_ancestor(EntityId a, EntityId b) const {
    if (entity(a).node_id != entity(b).node_id)
        throw std::invalid_argument("entities on different nodes have no common ancestor");
    // Walk up from `a`, marking the chain, then climb from `b`.
    std::vector<EntityId> chain;
    for (EntityId cur = a; cur != kNoEntity; cur = entity(cur).parent) chain.push_back(cur);
    for (EntityId cur = b; cur != kNoEntity; cur = entity(cur).parent) {
        for (EntityId c : chain)
            if (c == cur) return cur;
    }
    throw std::logic_error("forest invariant broken: no common ancestor in one tree");
}

std::optional<std::uint32_t> EntityForest::resolve_ip(EntityId id) const {
    for (EntityId cur = id; cur != kNoEntity; cur = entity(cur).parent) {
        if (entity(cur).ip) return entity(cur).ip;
    }
    return std::nullopt;
}

std::optional<std::uint16_t> EntityForest::resolve_port(EntityId id) const {
    return entity(id).port;
}

std::vector<std::string> EntityForest::verify() const {
    std::vector<std::string> problems;
    std::size_t indexed = 0;
    for (EntityId id = 0; id < entities_.size(); ++id) {
        const NetworkEntity& e = entities_[id];
        if (e.is_root()) {
            auto it = roots_.find(e.node_id);
            if (it == roots_.end() || it->second != id)
                problems.push_back("root of " + e.node_id + " is not registered");
            continue;
        }
        // Climb to the root, bounding the walk so a corrupted parent chain
        // cannot loop forever.
        EntityId cur = id;
        std::size_t steps = 0;
        std::optional<int> child_layer = e.layer;
        while (cur != kNoEntity && steps <= entities_.size()) {
            const NetworkEntity& at = entities_[cur];
            if (cur != id) {
                if (at.layer.has_value() && child_layer.has_value() &&
                    *at.layer >= *child_layer) {
                    problems.push_back("entity " + dotted_name(id) +
                                       ": ancestor layers must strictly decrease");
                    break;
                }
                child_layer = at.layer;
            }
            if (at.node_id != e.node_id) {
                problems.push_back("entity " + dotted_name(id) + " escapes its tree");
                break;
            }
            if (at.is_root()) break;
            cur = at.parent;
            ++steps;
        }
        if (steps > entities_.size())
            problems.push_back("entity " + dotted_name(id) + " sits on a parent cycle");
        auto it = index_.find({e.node_id, e.name});
        if (it == index_.end() || it->second != id)
            problems.push_back("entity " + dotted_name(id) + " missing from the index");
        else
            ++indexed;
    }
    if (indexed != index_.size())
        problems.push_back("entity index holds stale entries");
    return problems;
}

Relation entity_relation(const EntityForest& forest, EntityId e1, EntityId e2) {
    if (e1 == e2) return Relation::Equivalent;
    const NetworkEntity& a = forest.entity(e1);
    const NetworkEntity& b = forest.entity(e2);
    if (a.node_id != b.node_id) return Relation::Disjoint;
    if (forest.is_ancestor(e1, e2)) return Relation::Dominates;
    if (forest.is_ancestor(e2, e1)) return Relation::DominatedBy;
    return Relation::Kin;
}

} // namespace cppa
