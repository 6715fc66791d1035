#include "core/coefficients.hpp"

namespace cppa {

Relation coefficient_relation(const CoefficientTriple& c1, const CoefficientTriple& c2) {
    bool all_ge = true, all_le = true, any_gt = false, any_lt = false;
    const auto a = c1.components();
    const auto b = c2.components();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) {
            all_ge = false;
            any_lt = true;
        } else if (b[i] < a[i]) {
            all_le = false;
            any_gt = true;
        }
    }
    if (all_ge && all_le) return Relation::Equivalent;
    if (all_ge && any_gt) return Relation::Dominates;
    if (all_le && any_lt) return Relation::DominatedBy;
    return Relation::Disjoint;
}

} // namespace cppa
