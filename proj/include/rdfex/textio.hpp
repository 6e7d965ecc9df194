#pragma once

#include <optional>
#include <string>

#include "rdfex/cnf.hpp"
#include "rdfex/diag.hpp"
#include "rdfex/graph.hpp"
#include "rdfex/instance.hpp"
#include "rdfex/nre.hpp"
#include "rdfex/setting.hpp"

namespace rdfex {

/// Parse outcome: a value when diagnostics are empty, diagnostics otherwise.
/// Parsers recover at statement boundaries and report everything they find.
template <typename T>
struct Parsed {
    std::optional<T> value;
    Diagnostics diagnostics;

    bool ok() const { return diagnostics.empty() && value.has_value(); }
    const T& operator*() const { return *value; }
    const T* operator->() const { return &*value; }
};

/// Setting files: relation / fd / iri / shape / rule statements, '#' comments.
/// Runs normalize_tgds and validate_setting; rules without an explicit label
/// get "rule<k>" by declaration order.
Parsed<Setting> parse_setting(const std::string& text, const std::string& filename = "");

std::string render_setting(const Setting& s);

/// Instance files: one fact per line, `Rel(v1, ..., vn)`. Values are
/// double-quoted strings, bare tokens over [A-Za-z0-9_.@!-], or `_?nK` nulls
/// (used by witness tableaux).
Parsed<SourceInstance> parse_instance(const std::string& text, const RelationalSchema& schema,
                                      const std::string& filename = "");

/// Canonical instance serialization; null ids are renumbered densely.
std::string render_instance(const SourceInstance& inst);

/// Graph files: `triple(S, :p, O).` and `type(S, T).` lines; node syntax
/// <iri>, "lit", _:nK, _?nK.
Parsed<TypedGraph> parse_graph(const std::string& text, const std::string& filename = "");

/// Canonical rendering: null ids renumbered densely per kind, lines sorted
/// lexicographically. parse_graph(render_graph(g)) == g up to null renaming.
std::string render_graph(const TypedGraph& g);

/// Nested regular expressions: `()`, `:name`, `<iri>`, `_`, `node(<iri>)`,
/// `node("lit")`, `[E]`, postfix `*`, prefix `^`, `/`, `|`, parentheses.
Parsed<Nre> parse_nre(const std::string& text);

/// DIMACS CNF reader.
Parsed<Cnf> parse_dimacs(const std::string& text, const std::string& filename = "");

}  // namespace rdfex
