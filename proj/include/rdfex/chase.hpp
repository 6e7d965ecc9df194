#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdfex/graph.hpp"
#include "rdfex/instance.hpp"
#include "rdfex/setting.hpp"

namespace rdfex {

/// Failed egd step: the dependency forced two distinct constants together.
struct FdFailure {
    FunctionalDependency fd;
    std::pair<Value, Value> clash;
};

struct FdChaseDone {
    SourceInstance instance;
    /// Null -> representative (a constant wins over a null; among nulls the
    /// lowest id wins). Identity entries are omitted.
    std::map<Value, Value> unifier;

    bool identity() const { return unifier.empty(); }
};

using FdChaseResult = std::variant<FdChaseDone, FdFailure>;

/// Chases the schema's functional dependencies as egds to fixpoint. Order
/// independent; never throws — failure is a value.
FdChaseResult fd_chase(const SourceInstance& inst, const RelationalSchema& schema);

struct ShapeViolation {
    enum Kind : uint8_t { PF, PE, TpKindClash } kind;
    Value node;
    std::string type;
    std::string pred;
    std::vector<Value> witnesses;  // offending objects
};

std::string to_display(const ShapeViolation& v);

/// Type propagation forced a schema type onto a literal node or the literal
/// mark onto a non-literal node.
struct KindClash {
    Value node;
    std::string type;  // the schema type involved, empty when the mark was forced
    std::string pred;
};

/// The instance handed to core_pre_solution was not a consistent concrete
/// instance: either an FD fails on it or it contains nulls.
struct SourceInconsistent {
    std::optional<FdFailure> failure;  // empty when the instance was not concrete
};

using CorePreSolutionResult = std::variant<TypedGraph, KindClash, SourceInconsistent>;

/// Chase of a concrete instance with the st-tgds and all TP rules: exports
/// every body homomorphism's head fact, then saturates type propagation.
/// Null-free, unique, order independent.
CorePreSolutionResult core_pre_solution(const Setting& s, const SourceInstance& inst);

/// Enumerates every homomorphism from the body atoms into the instance, in
/// deterministic order.
void for_each_body_match(const std::vector<RelAtom>& body, const SourceInstance& inst,
                         const std::function<void(const std::map<std::string, Value>&)>& sink);

/// Value of a head position under a body binding; constructor applications
/// go through make_iri.
Value head_value(const Setting& s, const Term& t, const std::map<std::string, Value>& binding);

/// Every (node, type, predicate) with a functional constraint and two or more
/// distinct objects. Empty iff the graph is value consistent. Cross-kind
/// object pairs count.
std::vector<ShapeViolation> check_pf(const TypedGraph& g, const ShapeSchema& shapes);

/// Full validation relative to the graph's typing: TP targets, PF bounds,
/// PE existence. Predicates without a delta entry are unconstrained.
std::vector<ShapeViolation> validate_shapes(const TypedGraph& g, const ShapeSchema& shapes);

}  // namespace rdfex
