#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rdfex/instance.hpp"
#include "rdfex/setting.hpp"
#include "rdfex/solution.hpp"
#include "rdfex/term.hpp"

namespace rdfex {

/// A chain of st-tgds forcing a type onto a constructor's node: the first
/// step's head is a type atom T0(f0(..)), each later step i is a triple head
/// Triple(f_{i-1}(..), p_i, f_i(..)) with delta(T_{i-1}, p_i) = T_i.
/// Elementary: step labels are pairwise distinct.
struct AccessSequence {
    std::vector<std::string> steps;       // tgd labels, sigma_0 .. sigma_n
    std::vector<std::string> type_chain;  // T_0 .. T_n
    std::vector<std::string> ctor_chain;  // f_0 .. f_n
    std::vector<std::string> pred_chain;  // p_1 .. p_n

    const std::string& type() const { return type_chain.back(); }
    const std::string& ctor() const { return ctor_chain.back(); }
};

/// All (type, constructor) pairs reachable through the access graph.
std::set<std::pair<std::string, std::string>> access_pairs(const Setting& s);

/// Enumerates elementary access sequences ending at (type, ctor) in
/// length-then-lexicographic label order. The sink returns false to stop;
/// limit 0 means unlimited. Returns true when enumeration was exhaustive.
bool access_sequences(const Setting& s, const std::string& type, const std::string& ctor,
                      size_t limit, const std::function<bool(const AccessSequence&)>& sink);

/// Convenience: first `limit` sequences (all when limit is 0).
std::vector<AccessSequence> access_sequences(const Setting& s, const std::string& type,
                                             const std::string& ctor, size_t limit = 0);

struct ContentiousPair {
    std::string type, ctor, pred;  // sort (T, f, p)
    std::string sigma, sigma_prime;  // labels, sigma <= sigma_prime
};

/// Unordered pairs of st-tgds (self-pairs included) that can both populate a
/// functional predicate of an accessible constructor node.
std::vector<ContentiousPair> contentious(const Setting& s);

/// A head object after chasing the tableau: a null representative, a literal
/// constant, or a constructor applied to null representatives.
struct ChasedTerm {
    enum Kind : uint8_t { Null, Lit, App } kind = Null;
    Value null_rep;
    std::string text;              // Lit
    std::string ctor;              // App
    std::vector<Value> arg_reps;   // App

    bool equals(const ChasedTerm& o) const;
    std::string describe() const;
};

/// The most general source instance on which the access chain and both
/// contentious rules can fire with a shared subject.
struct ViolationInstance {
    SourceInstance tableau;                  // null literals only
    std::map<std::string, Value> assignment; // step-qualified variable -> null
    Term object1, object2;                   // head objects, variables step-qualified
};

/// Builds the ladder of mappings h_0..h_{n+2}: step variables get fresh
/// nulls, head-subject variables are identified with the previous step's
/// head-object nulls (unifying when a repeated variable demands it). Rules
/// are alpha-renamed apart by qualifying variables with their step index, so
/// sigma == sigma_prime self-pairs work unchanged.
ViolationInstance violation_instance(const Setting& s, const AccessSequence& pi,
                                     const StTgd& sigma, const StTgd& sigma_prime);

struct ValueWitness {
    std::string type, ctor, pred;
    AccessSequence pi;
    std::string sigma, sigma_prime;
    SourceInstance tableau;
    std::map<std::string, Value> assignment;
    ChasedTerm object1, object2;  // distinct, which is what makes it a witness
};

struct CheckOptions {
    size_t max_sequences = 0;  // 0 = unlimited
    bool exhaustive = false;   // collect every witness instead of the first
};

struct ValueReport {
    enum Status : uint8_t { Consistent, Inconsistent, Inconclusive } status = Consistent;
    std::vector<ValueWitness> witnesses;
};

/// Theorem: the setting is value consistent iff for every sort, every
/// contentious pair and every elementary access sequence, the FD-chase of the
/// violation instance forces the two head objects together.
ValueReport check_value_consistency(const Setting& s, const CheckOptions& opts = {});

/// Co-occurring type sets of a typed graph: frontier deltas closed under
/// required-predicate deltas.
std::set<TypeSet> cotypes_of_graph(const TypedGraph& g, const ShapeSchema& shapes);

/// How each reachable type set was first derived: from a constructor root or
/// by a delta step from another set.
struct CotypeProvenance {
    struct Origin {
        std::optional<std::string> root_ctor;  // set when the set is a root
        TypeSet parent;
        std::string pred;
    };
    std::map<TypeSet, Origin> origins;

    std::vector<std::pair<TypeSet, std::string>> chain_to(const TypeSet& x) const;
};

struct MixedCotypesWitness {
    std::string root_ctor;
    TypeSet mixed;
    std::vector<std::pair<TypeSet, std::string>> chain;  // from the root to mixed
};

struct DirectClashWitness {
    std::string tgd;
    std::string type, ctor, pred;
    bool literal_object;      // the head object's kind
    ShapeTarget demanded;     // what delta(type, pred) requires instead
};

struct KindReport {
    enum Status : uint8_t { Consistent, Inconsistent } status = Consistent;
    std::vector<MixedCotypesWitness> mixed;
    std::vector<DirectClashWitness> clashes;
    CotypeProvenance provenance;
};

/// Node-kind consistency: the constructor-rooted co-type fixpoint must not
/// mix the literal mark with a schema type, and no tgd head may force the
/// wrong kind onto its object (direct-clash scan, reported separately).
KindReport check_node_kind(const Setting& s);

struct Verdict {
    enum Status : uint8_t { Consistent, Inconsistent, Inconclusive } status = Consistent;
    ValueReport value;
    KindReport kind;
};

/// Conjunction of the value and node-kind checks.
Verdict check_consistency(const Setting& s, const CheckOptions& opts = {});

/// Grounds each null class of the witness tableau (after FD-chasing it) to a
/// distinct fresh constant c0, c1, ...; the result satisfies the FDs and its
/// core pre-solution reproduces a PF violation of the witness's sort.
SourceInstance materialize_counterexample(const Setting& s, const ValueWitness& w);

std::string to_display(const ValueWitness& w);
std::string to_display(const MixedCotypesWitness& w);
std::string to_display(const DirectClashWitness& w);

}  // namespace rdfex
