#pragma once

#include <set>
#include <utility>
#include <variant>

#include "rdfex/graph.hpp"
#include "rdfex/instance.hpp"
#include "rdfex/nre.hpp"
#include "rdfex/setting.hpp"
#include "rdfex/solution.hpp"

namespace rdfex {

using NodePairs = std::set<std::pair<Value, Value>>;

/// The node-pair relation an expression defines on a graph. Node tests match
/// constants only; the wildcard ranges over every predicate; star is the
/// reflexive-transitive closure over all nodes of the graph.
NodePairs eval_nre(const Nre& e, const TypedGraph& g);

struct NotForward {
    Nre expr;
};

using CertainError = std::variant<NotForward, NoSolution>;

/// Certain answers to a forward expression: its pairs in the universal
/// simulation solution with both endpoints non-null.
std::variant<NodePairs, CertainError> certain_pairs(const Setting& s, const SourceInstance& inst,
                                                    const Nre& e);

/// Boolean certain answer: the expression matches somewhere in the universal
/// simulation solution; null witnesses are fine here.
std::variant<bool, CertainError> certain_bool(const Setting& s, const SourceInstance& inst,
                                              const Nre& e);

}  // namespace rdfex
