#pragma once

#include "engine/anomaly.hpp"

#include <string>
#include <vector>

namespace cppa {

/// Graphviz rendering of one anomaly: the entity trees of every involved
/// end-point and crossed gateway, one edge per PI anchored at its
/// technology's layer, labelled with technology, coefficients and selector.
/// OUT_OF_PLACE has no graphical form; requesting it throws
/// std::invalid_argument.
std::string emit_dot(const Anomaly& anomaly, const Scenario& scenario);

struct DotFile {
    std::string name; // e.g. "003_SHADOWING.dot"
    std::string content;
};

/// One DOT file per renderable anomaly, deterministically named.
std::vector<DotFile> emit_dot_bundle(const std::vector<Anomaly>& anomalies,
                                     const Scenario& scenario);

} // namespace cppa
