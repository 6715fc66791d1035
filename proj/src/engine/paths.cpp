#include "engine/paths.hpp"

#include <algorithm>
#include <set>
#include <string_view>
#include <unordered_map>

namespace cppa {

std::uint32_t ConnectionGraph::add_vertex(const std::string& name) {
    vertices.push_back(name);
    return static_cast<std::uint32_t>(vertices.size() - 1);
}

void ConnectionGraph::add_edge(std::uint32_t from, std::uint32_t to,
                               std::optional<std::size_t> pi_index) {
    edges.push_back({from, to, pi_index});
}

std::optional<std::uint32_t> ConnectionGraph::vertex(const std::string& name) const {
    for (std::uint32_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return i;
    return std::nullopt;
}

ConnectionGraph ConnectionGraph::from_scenario(const Scenario& scenario) {
    ConnectionGraph g;
    std::map<std::string, std::uint32_t> index;
    auto intern = [&](const std::string& node) {
        auto it = index.find(node);
        if (it != index.end()) return it->second;
        const std::uint32_t v = g.add_vertex(node);
        index[node] = v;
        return v;
    };
    for (const std::string& node : scenario.forest.node_ids()) intern(node);
    for (std::size_t i = 0; i < scenario.pis.size(); ++i) {
        const auto chain = scenario.pis[i].chain_nodes(scenario.forest);
        for (std::size_t h = 0; h + 1 < chain.size(); ++h)
            g.add_edge(intern(chain[h]), intern(chain[h + 1]), i);
    }
    return g;
}

CrossedGateways crossed_gateways(const std::string& src_node, const std::string& dst_node,
                                 const TopologyGraph& topology) {
    CrossedGateways out;
    const std::vector<std::string>* walk = topology.route(src_node, dst_node);
    if (!walk || walk->size() < 2) return out;
    out.routable = true;
    out.gateways.assign(walk->begin() + 1, walk->end() - 1);
    return out;
}

namespace {

/// Working indices shared by the enumeration machinery: nodes interned to
/// dense ids, per-PI spans in interned form, id-ordered successor lists.
/// Interning hashes string_views into the scenario-owned strings.
struct PathIndex {
    std::unordered_map<std::string_view, std::uint32_t> node_ids;
    std::vector<std::vector<std::uint32_t>> spans; // per PI: chain minus the source node
    std::vector<std::uint32_t> source_node;        // per PI
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::size_t> order; // PI indices sorted by id

    explicit PathIndex(const Scenario& scenario) {
        const std::size_t n = scenario.pis.size();
        auto intern = [&](const std::string& node) {
            auto [it, inserted] =
                node_ids.emplace(std::string_view(node),
                                 static_cast<std::uint32_t>(node_ids.size()));
            return it->second;
        };

        spans.resize(n);
        source_node.resize(n);
        std::vector<std::vector<std::size_t>> starting_at;
        for (std::size_t i = 0; i < n; ++i) {
            const PolicyImplementation& pi = scenario.pis[i];
            source_node[i] = intern(scenario.forest.entity(pi.source).node_id);
            spans[i].reserve(pi.gateways.size() + 1);
            for (const std::string& g : pi.gateways) spans[i].push_back(intern(g));
            spans[i].push_back(intern(scenario.forest.entity(pi.destination).node_id));
            if (starting_at.size() < node_ids.size()) starting_at.resize(node_ids.size());
            starting_at[source_node[i]].push_back(i);
        }
        starting_at.resize(node_ids.size());

        order.resize(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scenario.pis[a].id < scenario.pis[b].id;
        });

        succ.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t end_node = spans[i].empty() ? source_node[i] : spans[i].back();
            for (std::size_t j : starting_at[end_node]) {
                if (i == j) continue;
                if (selectors_intersect(scenario.pis[i].selector, scenario.pis[j].selector))
                    succ[i].push_back(j);
            }
            std::sort(succ[i].begin(), succ[i].end(), [&](std::size_t a, std::size_t b) {
                return scenario.pis[a].id < scenario.pis[b].id;
            });
        }
    }
};

struct PathDfs {
    const Scenario& scenario;
    const PathIndex& index;
    std::size_t cap;
    std::optional<EntityId> wanted_to; // entity filter for the targeted query
    bool include_singletons = true;

    std::vector<Path> out;
    bool truncated = false;

    std::vector<std::size_t> stack;
    std::vector<bool> visited;

    bool emit(const Selector& traffic) {
        if (out.size() >= cap) {
            truncated = true;
            return false;
        }
        Path p;
        p.source_entity = scenario.pis[stack.front()].source;
        p.destination_entity = scenario.pis[stack.back()].destination;
        p.pi_indices = stack;
        p.traffic = traffic;
        out.push_back(std::move(p));
        return true;
    }

    bool extend(std::size_t pi, const Selector* upstream) {
        // Simple-path rule: no node may repeat, counting crossed gateways.
        for (std::uint32_t node : index.spans[pi])
            if (visited[node]) return true; // skip, keep searching siblings

        const Selector* traffic = &scenario.pis[pi].selector;
        std::optional<Selector> combined;
        if (upstream) {
            combined = selector_intersect(*upstream, *traffic);
            if (combined->empty()) return true;
            traffic = &*combined;
        }

        stack.push_back(pi);
        for (std::uint32_t node : index.spans[pi]) visited[node] = true;

        bool keep_going = true;
        if ((include_singletons || stack.size() > 1) &&
            (!wanted_to || scenario.pis[pi].destination == *wanted_to))
            keep_going = emit(*traffic);
        if (keep_going) {
            for (std::size_t next : index.succ[pi]) {
                if (!extend(next, traffic)) {
                    keep_going = false;
                    break;
                }
            }
        }

        for (std::uint32_t node : index.spans[pi]) visited[node] = false;
        stack.pop_back();
        return keep_going;
    }
};

PathEnumeration enumerate_impl(const Scenario& scenario, std::optional<EntityId> from,
                               std::optional<EntityId> to, std::size_t cap,
                               bool include_singletons) {
    const PathIndex index(scenario);

    PathDfs dfs{scenario, index, cap, to, include_singletons, {}, false, {}, {}};
    dfs.visited.assign(index.node_ids.size(), false);
    for (std::size_t start : index.order) {
        if (from && scenario.pis[start].source != *from) continue;
        // Without singleton emission a start with no continuation is dead.
        if (!include_singletons && index.succ[start].empty()) continue;
        dfs.visited[index.source_node[start]] = true;
        const bool keep_going = dfs.extend(start, nullptr);
        dfs.visited[index.source_node[start]] = false;
        if (!keep_going) break;
    }

    PathEnumeration out;
    out.truncated = dfs.truncated;
    out.paths = std::move(dfs.out);
    // Deterministic report order: lexicographic by the PI id sequence,
    // via precomputed keys.
    std::vector<std::vector<std::string>> keys(out.paths.size());
    std::vector<std::size_t> by_key(out.paths.size());
    for (std::size_t i = 0; i < out.paths.size(); ++i) {
        keys[i] = out.paths[i].pi_ids(scenario);
        by_key[i] = i;
    }
    std::sort(by_key.begin(), by_key.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<Path> sorted;
    sorted.reserve(out.paths.size());
    for (std::size_t i : by_key) sorted.push_back(std::move(out.paths[i]));
    out.paths = std::move(sorted);
    return out;
}

} // namespace

PathEnumeration enumerate_simple_paths(const Scenario& scenario, EntityId from, EntityId to,
                                       std::size_t cap) {
    return enumerate_impl(scenario, from, to, cap, true);
}

PathEnumeration enumerate_all_paths(const Scenario& scenario, std::size_t cap,
                                    bool include_singletons) {
    return enumerate_impl(scenario, std::nullopt, std::nullopt, cap, include_singletons);
}

namespace {

/// Bounded elementary-cycle search (DFS with an open-path stack, smallest
/// start vertex first, Johnson-style restriction to vertices >= root).
/// Confined to one strongly connected component.
struct CycleDfs {
    const std::vector<std::vector<std::uint32_t>>& adj;
    const std::vector<std::uint32_t>& component;
    std::size_t cap;
    std::vector<std::vector<std::uint32_t>> cycles;
    std::vector<std::uint32_t> stack;
    std::vector<bool> on_stack;
    std::uint32_t root = 0;
    bool done = false;

    void run(std::uint32_t v) {
        if (done) return;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::uint32_t w : adj[v]) {
            if (w < root) continue; // canonical: cycle reported from its smallest vertex
            if (component[w] != component[root]) continue;
            if (w == root) {
                if (stack.size() == 1 && w == v) continue; // self loop, counted separately
                cycles.push_back(stack);
                if (cycles.size() >= cap) {
                    done = true;
                    break;
                }
            } else if (!on_stack[w]) {
                run(w);
                if (done) break;
            }
        }
        on_stack[v] = false;
        stack.pop_back();
    }
};

/// Iterative Tarjan strongly-connected components; cycles live inside
/// non-trivial components, so acyclic regions cost only the linear pass.
std::vector<std::uint32_t> strongly_connected(const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::uint32_t> component(n, UINT32_MAX), low(n), index(n, UINT32_MAX);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t next_index = 0, next_component = 0;

    struct Frame {
        std::uint32_t v;
        std::size_t edge;
    };
    for (std::uint32_t start = 0; start < n; ++start) {
        if (index[start] != UINT32_MAX) continue;
        std::vector<Frame> frames = {{start, 0}};
        index[start] = low[start] = next_index++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                const std::uint32_t w = adj[f.v][f.edge++];
                if (index[w] == UINT32_MAX) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        const std::uint32_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        component[w] = next_component;
                        if (w == f.v) break;
                    }
                    ++next_component;
                }
                const std::uint32_t child = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[child]);
            }
        }
    }
    return component;
}

} // namespace

std::vector<std::vector<std::uint32_t>> detect_cycles(const ConnectionGraph& graph,
                                                      std::size_t cap) {
    const std::size_t n = graph.vertices.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    std::vector<std::set<std::uint32_t>> seen(n);
    bool any_self_loop = false;
    for (const auto& e : graph.edges) {
        if (e.from == e.to) any_self_loop = true;
        if (seen[e.from].insert(e.to).second) adj[e.from].push_back(e.to);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());

    const std::vector<std::uint32_t> component = strongly_connected(adj);

    std::vector<std::vector<std::uint32_t>> cycles;
    if (any_self_loop) {
        for (std::uint32_t v = 0; v < n && cycles.size() < cap; ++v)
            if (seen[v].count(v)) cycles.push_back({v});
    }

    // Component sizes: only vertices sharing a component with someone else
    // can sit on a multi-vertex cycle.
    std::vector<std::uint32_t> size(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) ++size[component[v]];

    CycleDfs dfs{adj, component, cap, std::move(cycles), {}, std::vector<bool>(n, false), 0,
                 false};
    dfs.done = dfs.cycles.size() >= cap;
    for (std::uint32_t root = 0; root < n && !dfs.done; ++root) {
        if (size[component[root]] < 2) continue;
        dfs.root = root;
        dfs.run(root);
    }
    return std::move(dfs.cycles);
}

ConnectionGraph chain_graph(const Scenario& scenario) {
    ConnectionGraph g;
    for (const PolicyImplementation& pi : scenario.pis) g.add_vertex(pi.id);
    const PathIndex index(scenario);
    for (std::size_t i = 0; i < index.succ.size(); ++i)
        for (std::size_t j : index.succ[i])
            g.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), j);
    return g;
}

bool is_filtered(const Scenario& scenario, const std::string& node_id,
                 const PolicyImplementation& pi) {
    if (!scenario.topology.has_node(node_id) && !scenario.forest.root_of(node_id))
        throw std::out_of_range("unknown node " + node_id);
    const CapabilityProfile* profile = scenario.profile(node_id);
    if (!profile) return false; // no profile: no filtering rules
    if (pi.selector.empty()) return false;

    // Track which part of the matched set is still undecided; a packet's
    // fate is the first rule it matches, default ALLOW.
    std::vector<Selector> undecided = {pi.selector};
    for (const FirewallRule& rule : profile->firewall_rules) {
        std::vector<Selector> next;
        for (const Selector& box : undecided) {
            if (selectors_intersect(box, rule.selector)) {
                if (rule.action == FilterAction::Allow) return false;
                auto rest = box_subtract(box, rule.selector);
                next.insert(next.end(), rest.begin(), rest.end());
            } else {
                next.push_back(box);
            }
        }
        undecided = std::move(next);
        if (undecided.empty()) return true; // everything hit a DENY
    }
    return false; // whatever is left falls through to the default ALLOW
}

} // namespace cppa
