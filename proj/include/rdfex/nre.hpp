#pragma once

#include <string>
#include <vector>

#include "rdfex/value.hpp"

namespace rdfex {

/// Nested regular expression over predicates: epsilon, a predicate, the
/// wildcard, a node test, nesting [E], star, inverse, concatenation, union.
struct Nre {
    enum Kind : uint8_t { Eps, Pred, Any, NodeTest, Nest, Star, Inv, Concat, Union };

    Kind kind = Eps;
    std::string pred;        // Pred
    Value test;              // NodeTest: an Iri or ConstLit value
    std::vector<Nre> kids;   // Nest/Star/Inv: 1 child; Concat/Union: 2

    static Nre eps() { return {}; }
    static Nre predicate(std::string p) {
        Nre e;
        e.kind = Pred;
        e.pred = std::move(p);
        return e;
    }
    static Nre any() {
        Nre e;
        e.kind = Any;
        return e;
    }
    static Nre node_test(Value v) {
        Nre e;
        e.kind = NodeTest;
        e.test = std::move(v);
        return e;
    }
    static Nre unary(Kind k, Nre child) {
        Nre e;
        e.kind = k;
        e.kids.push_back(std::move(child));
        return e;
    }
    static Nre nest(Nre child) { return unary(Nest, std::move(child)); }
    static Nre star(Nre child) { return unary(Star, std::move(child)); }
    static Nre inverse(Nre child) { return unary(Inv, std::move(child)); }
    static Nre binary(Kind k, Nre lhs, Nre rhs) {
        Nre e;
        e.kind = k;
        e.kids.push_back(std::move(lhs));
        e.kids.push_back(std::move(rhs));
        return e;
    }
    static Nre concat(Nre lhs, Nre rhs) { return binary(Concat, std::move(lhs), std::move(rhs)); }
    static Nre alt(Nre lhs, Nre rhs) { return binary(Union, std::move(lhs), std::move(rhs)); }

    friend bool operator==(const Nre&, const Nre&) = default;
};

/// Forward NREs do not use the inverse operator.
bool is_forward(const Nre& e);

/// Concrete syntax, parseable by parse_nre.
std::string to_string(const Nre& e);

}  // namespace rdfex
