#pragma once

#include "core/rational.hpp"
#include "core/relation.hpp"

#include <array>
#include <string>

namespace cppa {

/// Required strength of the three protected properties: header integrity,
/// payload integrity and payload confidentiality. Zero means "must not be
/// enforced".
struct CoefficientTriple {
    Rational header_integrity;
    Rational payload_integrity;
    Rational confidentiality;

    CoefficientTriple() = default;
    CoefficientTriple(Rational hi, Rational pi, Rational c)
        : header_integrity(hi), payload_integrity(pi), confidentiality(c) {}

    std::array<Rational, 3> components() const {
        return {header_integrity, payload_integrity, confidentiality};
    }

    bool is_zero() const {
        return header_integrity.is_zero() && payload_integrity.is_zero() &&
               confidentiality.is_zero();
    }

    friend bool operator==(const CoefficientTriple&, const CoefficientTriple&) = default;

    static CoefficientTriple component_max(const CoefficientTriple& a,
                                           const CoefficientTriple& b) {
        return {Rational::max(a.header_integrity, b.header_integrity),
                Rational::max(a.payload_integrity, b.payload_integrity),
                Rational::max(a.confidentiality, b.confidentiality)};
    }

    static CoefficientTriple component_min(const CoefficientTriple& a,
                                           const CoefficientTriple& b) {
        return {Rational::min(a.header_integrity, b.header_integrity),
                Rational::min(a.payload_integrity, b.payload_integrity),
                Rational::min(a.confidentiality, b.confidentiality)};
    }

    std::string str() const {
        return "(" + header_integrity.str() + "," + payload_integrity.str() + "," +
               confidentiality.str() + ")";
    }
};

/// Coefficient triples form a strict partial order: dominance requires every
/// component to be >= with at least one strictly greater. There is no kinship
/// in this domain; incomparable triples are disjoint.
Relation coefficient_relation(const CoefficientTriple& c1, const CoefficientTriple& c2);

} // namespace cppa
