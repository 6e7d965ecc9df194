#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rdfex {

/// An IRI template: alternating constant text segments and parameter slots,
/// segments[0] + {slot 0} + segments[1] + {slot 1} + ... + segments[n].
/// slot_param maps template slots to parameter positions, so the template may
/// reference declared parameters in any order. Well-formed constructors have
/// every param in exactly one slot and at least one constant character
/// between consecutive slots.
struct IriConstructor {
    std::string name;
    std::vector<std::string> params;      // declaration order
    std::vector<std::string> segments;    // slot count + 1 entries
    std::vector<size_t> slot_param;       // template order -> param index

    size_t arity() const { return params.size(); }
    /// Constant prefix up to the first slot (the whole template when there
    /// are no slots).
    const std::string& prefix() const { return segments.front(); }

    std::string template_text() const;

    /// Convenience for the common case where slots follow declaration order.
    static IriConstructor simple(std::string name, std::vector<std::string> params,
                                 std::vector<std::string> segments);

    /// Missing separator between consecutive slots, duplicate or unused
    /// params; empty when well formed.
    std::optional<std::string> well_formed_error() const;
};

/// Expands the template over the given literal arguments. Arguments are
/// percent-encoded: RFC 3986 unreserved characters (A-Z a-z 0-9 - . _ ~) pass
/// through, everything else becomes %XX. A non-final slot additionally
/// encodes the first character of the constant segment that follows it, so
/// the expansion is injective in the arguments.
std::string make_iri(const IriConstructor& c, const std::vector<std::string>& args);

struct OverlapError {
    std::string name1;
    std::string name2;
};

/// Constructor library with declaration order preserved for deterministic
/// error reporting.
struct ConstructorLibrary {
    std::vector<IriConstructor> ctors;

    const IriConstructor* find(const std::string& name) const;
    bool add(IriConstructor c);  // false when the name is already taken
};

/// Conservative non-overlap check: for every distinct pair, the constant
/// prefixes up to the first slot must differ and neither may be a prefix of
/// the other. Returns the first offending pair in declaration order.
std::optional<OverlapError> check_library(const ConstructorLibrary& lib);

}  // namespace rdfex
