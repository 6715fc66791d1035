#pragma once

#include "core/relation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cppa {

inline constexpr const char* kNullTechnology = "NULL";
inline constexpr int kNoLayer = -1;

/// A channel-protection protocol and the OSI layer it operates at.
/// The NULL technology (layer NONE) stands for "create the channel with no
/// protection at all".
struct Technology {
    std::string name;
    int osi_layer = kNoLayer; // 2, 3, 5, 7 or kNoLayer for NULL

    bool is_null() const { return name == kNullTechnology; }
    bool is_layer2() const { return osi_layer == 2; }
};

/// Extensible name -> technology table. Seeded with the protocols the model
/// ships with; scenarios may register more.
class TechnologyRegistry {
public:
    static TechnologyRegistry with_defaults();

    /// Fails on duplicate names and on non-NULL entries without a valid layer.
    void register_technology(const Technology& t);

    const Technology* find(const std::string& name) const;
    const Technology& get(const std::string& name) const; // throws on unknown

    std::vector<std::string> names() const;

private:
    std::map<std::string, Technology> by_name_;
};

/// Relationship between two registered technologies: lower layer dominates,
/// same layer is kinship, NULL is disjoint from everything else.
Relation technology_relation(const Technology& t1, const Technology& t2);

} // namespace cppa
