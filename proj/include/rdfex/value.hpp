#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace rdfex {

enum class ValueKind : uint8_t { ConstLit, NullLit, Iri, NullIri };

/// A node label: a literal constant, an IRI, or a named null of either kind.
/// Values are immutable; equality and ordering are total (kind, then payload),
/// which keeps every downstream container and serialization deterministic.
class Value {
public:
    Value() : kind_(ValueKind::ConstLit) {}

    static Value lit(std::string text) { return Value(ValueKind::ConstLit, std::move(text), 0); }
    static Value iri(std::string text) { return Value(ValueKind::Iri, std::move(text), 0); }
    static Value null_lit(uint64_t id) { return Value(ValueKind::NullLit, {}, id); }
    static Value null_iri(uint64_t id) { return Value(ValueKind::NullIri, {}, id); }

    ValueKind kind() const { return kind_; }

    bool is_literal() const { return kind_ == ValueKind::ConstLit || kind_ == ValueKind::NullLit; }
    bool is_null() const { return kind_ == ValueKind::NullLit || kind_ == ValueKind::NullIri; }
    bool is_const_lit() const { return kind_ == ValueKind::ConstLit; }
    bool is_iri() const { return kind_ == ValueKind::Iri; }

    /// Payload of a non-null value; meaningless for nulls.
    const std::string& text() const { return text_; }
    /// Id of a null value; meaningless for non-nulls.
    uint64_t null_id() const { return id_; }

    friend bool operator==(const Value& a, const Value& b) {
        return a.kind_ == b.kind_ && a.id_ == b.id_ && a.text_ == b.text_;
    }
    friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
        if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
        if (a.is_null()) return a.id_ <=> b.id_;
        return a.text_ <=> b.text_;
    }

private:
    Value(ValueKind kind, std::string text, uint64_t id)
        : kind_(kind), text_(std::move(text)), id_(id) {}

    ValueKind kind_;
    std::string text_;
    uint64_t id_ = 0;
};

/// Node syntax used by the graph format and reports: <iri>, "lit", _:nK, _?nK.
std::string to_display(const Value& v);

std::ostream& operator<<(std::ostream& os, const Value& v);

}  // namespace rdfex
