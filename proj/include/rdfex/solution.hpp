#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rdfex/chase.hpp"
#include "rdfex/graph.hpp"
#include "rdfex/setting.hpp"

namespace rdfex {

/// A set of co-occurring node types; the literal mark may be a member.
struct TypeSet {
    bool literal = false;
    std::set<std::string> types;

    bool mixed() const { return literal && !types.empty(); }
    bool pure_literal() const { return literal && types.empty(); }
    bool empty() const { return !literal && types.empty(); }

    friend bool operator==(const TypeSet&, const TypeSet&) = default;
    friend auto operator<=>(const TypeSet&, const TypeSet&) = default;
};

std::string to_display(const TypeSet& x);

/// Types that must hold at any node reached over a p-edge from a node
/// satisfying X; all multiplicities contribute. The literal-mark member of X
/// contributes nothing.
TypeSet delta(const TypeSet& x, const std::string& pred, const ShapeSchema& shapes);

/// Predicates some type in X requires (multiplicity 1 or +).
std::set<std::string> req(const TypeSet& x, const ShapeSchema& shapes);

/// (node, predicate) pairs where a required outgoing edge is missing.
std::set<std::pair<Value, std::string>> frontier(const TypedGraph& g, const ShapeSchema& shapes);

struct MixedKindSet {
    TypeSet set;
    /// Delta chain from a frontier set to the mixed one, innermost first.
    std::vector<std::pair<TypeSet, std::string>> chain;
};

/// The completion component: one null IRI node per reachable type set in the
/// requirement fixpoint, one null literal leaf per edge whose delta is the
/// bare literal mark, frontier edges wired in. Pre-quotient.
std::variant<TypedGraph, MixedKindSet> completion_graph(const TypedGraph& j0,
                                                        const ShapeSchema& shapes);

struct SimulationRelation {
    std::set<std::pair<Value, Value>> pairs;

    bool contains(const Value& a, const Value& b) const { return pairs.count({a, b}) != 0; }
};

/// Greatest simulation of g by h: kinds match, non-nulls map to themselves,
/// every edge of the left node is matched on the right.
SimulationRelation max_simulation(const TypedGraph& g, const TypedGraph& h);

/// Every node of g is simulated by some node of h.
bool is_simulated(const TypedGraph& g, const TypedGraph& h);

/// Merges maximal-bisimulation classes; class typing is the union. Non-null
/// nodes are bisimilar only to themselves, so each class has at most one
/// non-null member, which becomes the representative; otherwise the lowest
/// null id wins. Idempotent.
TypedGraph bisim_quotient(const TypedGraph& g);

struct NoSolution {
    std::variant<SourceInconsistent, KindClash, std::vector<ShapeViolation>, MixedKindSet>
        evidence;
    std::string describe() const;
};

/// The size-minimal universal simulation solution: the bisimulation quotient
/// of the core pre-solution plus its completion graph. Re-verifies the
/// per-instance gates and reports NoSolution with the failing evidence.
std::variant<TypedGraph, NoSolution> universal_solution(const Setting& s,
                                                        const SourceInstance& inst);

}  // namespace rdfex
