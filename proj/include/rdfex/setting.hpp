#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdfex/constructor.hpp"
#include "rdfex/diag.hpp"
#include "rdfex/schema.hpp"
#include "rdfex/term.hpp"

namespace rdfex {

/// The full exchange configuration: source schema + FDs, target shape schema,
/// normalized st-tgds, and the IRI constructor library.
struct Setting {
    RelationalSchema source;
    ShapeSchema shapes;
    std::vector<StTgd> tgds;
    ConstructorLibrary library;

    const StTgd* tgd_by_label(const std::string& label) const;
};

struct NotFullError {
    std::string rule;
    std::string variable;
};

/// Splits multi-head rules into single-head tgds sharing the body verbatim.
/// A rule with one head keeps its label; a rule with k >= 2 heads becomes
/// "<label>#1" ... "<label>#k" in head order. Fails when a head variable does
/// not occur in the body.
std::variant<std::vector<StTgd>, NotFullError> normalize_tgds(const std::vector<RawRule>& rules);

/// Declaration-closure and well-formedness checks over a whole setting;
/// returns all diagnostics, not just the first. Locations are supplied by the
/// parser when available.
Diagnostics validate_setting(const Setting& s);

}  // namespace rdfex
