#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdfex/cnf.hpp"
#include "rdfex/graph.hpp"
#include "rdfex/instance.hpp"
#include "rdfex/setting.hpp"
#include "rdfex/solution.hpp"

namespace rdfex {

/// The SAT lower-bound construction: binary relations V_t, V_f, R_1..R_n with
/// first-attribute keys, unary constructors f_1..f_{m+1}, a type chain
/// T_1..T_{m+1} over the single predicate :a, one rule per clause literal,
/// two object rules and two seeding rules. The produced setting is consistent
/// iff the formula is unsatisfiable.
Setting sat_setting(const Cnf& cnf);

/// Exhaustive valuation enumeration; empty for more than 24 variables.
std::optional<bool> brute_sat(const Cnf& cnf);

/// Structurally distinct solutions used to falsify non-certain answers: the
/// universal simulation solution itself, the unquotiented variant with one
/// blank per reachable type set, and unrollings of its cycles closed back at
/// depths 1..k. Every graph satisfies the shapes and the tgds.
std::variant<std::vector<TypedGraph>, NoSolution> alt_solutions(const Setting& s,
                                                                const SourceInstance& inst,
                                                                int depth);

/// Homomorphism re-check: every body match of every tgd has its head fact.
bool satisfies_tgds(const Setting& s, const SourceInstance& inst, const TypedGraph& g);

}  // namespace rdfex
