#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rdfex {

/// Application of an IRI constructor to body variables. Terms are flat:
/// constructor arguments are variables, never nested applications.
struct IriApp {
    std::string ctor;
    std::vector<std::string> vars;

    friend bool operator==(const IriApp&, const IriApp&) = default;
    friend auto operator<=>(const IriApp&, const IriApp&) = default;
};

/// A head object position: a body variable, a literal constant, or a
/// constructor application.
struct Term {
    enum Kind : uint8_t { Var, LitConst, App } kind = Var;
    std::string text;  // variable name or constant text
    IriApp app;        // when kind == App

    static Term var(std::string name) { return Term{Var, std::move(name), {}}; }
    static Term lit(std::string text) { return Term{LitConst, std::move(text), {}}; }
    static Term iri_app(IriApp a) { return Term{App, {}, std::move(a)}; }

    friend bool operator==(const Term&, const Term&) = default;
};

struct RelAtom {
    std::string relation;
    std::vector<std::string> vars;

    friend bool operator==(const RelAtom&, const RelAtom&) = default;
};

/// One target atom: Triple(subject, predicate, object) or Type(subject).
/// Subjects are always constructor applications (RDF subjects are never
/// literals).
struct HeadAtom {
    enum Kind : uint8_t { Triple, Type } kind = Triple;
    IriApp subject;
    std::string pred;  // constant predicate IRI, Triple only
    Term object;       // Triple only
    std::string type;  // Type only

    static HeadAtom triple(IriApp subj, std::string pred, Term obj) {
        HeadAtom h;
        h.kind = Triple;
        h.subject = std::move(subj);
        h.pred = std::move(pred);
        h.object = std::move(obj);
        return h;
    }
    static HeadAtom type_atom(std::string t, IriApp subj) {
        HeadAtom h;
        h.kind = Type;
        h.subject = std::move(subj);
        h.type = std::move(t);
        return h;
    }

    friend bool operator==(const HeadAtom&, const HeadAtom&) = default;
};

/// A raw source-to-target rule as parsed: one body, any number of head atoms.
struct RawRule {
    std::string label;
    std::vector<RelAtom> body;
    std::vector<HeadAtom> heads;
};

/// Normalized single-head rule; the unit of work for the chase and the
/// consistency checker.
struct StTgd {
    std::string label;
    std::vector<RelAtom> body;
    HeadAtom head;

    /// Variables in body-atom order, then head order, first occurrence wins.
    std::vector<std::string> variables() const;
    bool uses_variable(const std::string& v) const;
};

}  // namespace rdfex
