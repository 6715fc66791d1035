#pragma once

#include <string_view>

namespace cppa {

/// Outcome of comparing two values in one of the model's ordered domains
/// (entities, technologies, coefficient triples, selectors).
enum class Relation {
    Equivalent,
    Dominates,
    DominatedBy,
    Kin,
    Disjoint,
};

constexpr std::string_view to_string(Relation r) {
    switch (r) {
    case Relation::Equivalent: return "EQUIVALENT";
    case Relation::Dominates: return "DOMINATES";
    case Relation::DominatedBy: return "DOMINATED_BY";
    case Relation::Kin: return "KIN";
    case Relation::Disjoint: return "DISJOINT";
    }
    return "?";
}

/// Swap the roles of the two operands.
constexpr Relation flip(Relation r) {
    switch (r) {
    case Relation::Dominates: return Relation::DominatedBy;
    case Relation::DominatedBy: return Relation::Dominates;
    default: return r;
    }
}

// x ⪰ y
constexpr bool dominates_or_equal(Relation r) {
    return r == Relation::Equivalent || r == Relation::Dominates;
}

// x ≻ y
constexpr bool strictly_dominates(Relation r) { return r == Relation::Dominates; }

// x ⊥̸ y
constexpr bool not_disjoint(Relation r) { return r != Relation::Disjoint; }

} // namespace cppa
