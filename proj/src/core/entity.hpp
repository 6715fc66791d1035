#pragma once

#include "core/relation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cppa {

using EntityId = std::uint32_t;
inline constexpr EntityId kNoEntity = UINT32_MAX;

/// A connection end-point inside a node's protocol stack. The tree root
/// (layer == nullopt) stands for the network node itself; children are
/// ordered by OSI layer, a parent always sits at a strictly smaller layer.
struct NetworkEntity {
    std::string node_id;
    std::string name;        // "l3", "l5'", service names... unique per node; empty for the root
    std::optional<int> layer; // 2/3/5/7; nullopt only for the root
    std::string label;        // address-like display string
    EntityId parent = kNoEntity;

    std::optional<std::uint32_t> ip;   // layer-3 address if bound
    std::optional<std::uint16_t> port; // port qualification if bound

    bool is_root() const { return parent == kNoEntity && !layer.has_value(); }
};

/// One rooted tree per network node plus a (node, dotted name) index.
/// Immutable once built; all queries are const.
class EntityForest {
public:
    /// Adds a root entity for a node. Fails if the node already exists.
    EntityId add_node(const std::string& node_id);

    /// Adds an entity under `parent` (kNoEntity attaches to the node root).
    /// Enforces the layer ordering invariant and per-node name uniqueness.
    EntityId add_entity(const std::string& node_id, const std::string& name, int layer,
                        EntityId parent = kNoEntity, const std::string& label = "");

    const NetworkEntity& entity(EntityId id) const;
    std::size_t size() const { return entities_.size(); }

    void bind_ip(EntityId id, std::uint32_t ip);
    void bind_port(EntityId id, std::uint16_t port);

    /// "node" resolves to the root, "node.l5'" to the named entity.
    std::optional<EntityId> find(const std::string& dotted) const;
    EntityId require(const std::string& dotted) const; // throws on unknown refs

    std::optional<EntityId> root_of(const std::string& node_id) const;
    std::vector<std::string> node_ids() const;
    std::vector<EntityId> entities_of(const std::string& node_id) const;

    /// Dotted external name ("node" for roots, "node.name" otherwise).
    std::string dotted_name(EntityId id) const;

    bool is_ancestor(EntityId maybe_ancestor, EntityId e) const;
    EntityId lowest_common_ancestor(EntityId a, EntityId b) const; // same tree only

    /// Structural invariant walk: every entity reaches exactly one root
    /// without cycles, parent layers strictly decrease, and the lookup index
    /// is a bijection onto the non-root entities. Returns problems.
    std::vector<std::string> verify() const;

    /// Nearest layer-3 binding: the entity's own address or the closest
    /// ancestor's. Empty when the chain carries no address.
    std::optional<std::uint32_t> resolve_ip(EntityId id) const;
    std::optional<std::uint16_t> resolve_port(EntityId id) const;

private:
    std::vector<NetworkEntity> entities_;
    std::map<std::string, EntityId> roots_;
    std::map<std::pair<std::string, std::string>, EntityId> index_;
};

/// Relationship between two end-points: same entity, ancestor/descendant,
/// same tree (kin) or different nodes (disjoint).
Relation entity_relation(const EntityForest& forest, EntityId e1, EntityId e2);

} // namespace cppa
