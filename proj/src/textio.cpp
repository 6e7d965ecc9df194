#include "rdfex/textio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "rdfex/oracle.hpp"

namespace rdfex {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool bare_value_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '@' ||
           c == '!' || c == '-';
}

struct Token {
    enum Kind { Ident, String, IriRef, PredName, Punct, Arrow, Implies, End } kind = End;
    std::string text;  // payload; for Punct the single character
    SourceLocation loc;

    bool is_punct(char c) const { return kind == Punct && text.size() == 1 && text[0] == c; }
    bool is_ident(const char* s) const { return kind == Ident && text == s; }
};

/// Tokenizer for the setting grammar. Newlines are whitespace; statements are
/// keyword-delimited. '#' starts a comment running to end of line.
class Lexer {
public:
    Lexer(const std::string& text, std::string filename)
        : text_(text), file_(std::move(filename)) {
        advance();
    }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    SourceLocation here() const { return tok_.loc; }

private:
    void advance() {
        skip_space();
        tok_ = Token{};
        tok_.loc = loc();
        if (pos_ >= text_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = text_[pos_];
        if (ident_start(c) || std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) bump();
            tok_.kind = Token::Ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (c == '"') {
            bump();
            std::string out;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) bump();
                out += text_[pos_];
                bump();
            }
            if (pos_ < text_.size()) bump();  // closing quote
            tok_.kind = Token::String;
            tok_.text = std::move(out);
            return;
        }
        if (c == '<') {
            size_t close = text_.find('>', pos_ + 1);
            if (close != std::string::npos) {
                tok_.kind = Token::IriRef;
                tok_.text = text_.substr(pos_ + 1, close - pos_ - 1);
                while (pos_ <= close) bump();
                return;
            }
        }
        if (c == ':' && pos_ + 1 < text_.size() && ident_start(text_[pos_ + 1])) {
            bump();
            size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) bump();
            tok_.kind = Token::PredName;
            tok_.text = ":" + text_.substr(start, pos_ - start);
            return;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            bump();
            bump();
            tok_.kind = Token::Arrow;
            tok_.text = "->";
            return;
        }
        if (c == '=' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            bump();
            bump();
            tok_.kind = Token::Implies;
            tok_.text = "=>";
            return;
        }
        bump();
        tok_.kind = Token::Punct;
        tok_.text = std::string(1, c);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SourceLocation loc() const { return {file_, line_, col_}; }

    const std::string& text_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

bool is_statement_keyword(const Token& t) {
    return t.kind == Token::Ident &&
           (t.text == "relation" || t.text == "fd" || t.text == "iri" || t.text == "shape" ||
            t.text == "rule");
}

class SettingParser {
public:
    SettingParser(const std::string& text, const std::string& filename)
        : lex_(text, filename) {}

    Parsed<Setting> run() {
        std::vector<RawRule> rules;
        int rule_counter = 0;
        while (lex_.peek().kind != Token::End) {
            Token t = lex_.peek();
            if (t.is_punct(';')) {
                lex_.take();
                continue;
            }
            if (!is_statement_keyword(t)) {
                error(t.loc, "expected statement keyword, got '" + t.text + "'");
                recover();
                continue;
            }
            lex_.take();
            bool before = diags_.empty();
            if (t.text == "relation") parse_relation();
            else if (t.text == "fd") parse_fd();
            else if (t.text == "iri") parse_iri();
            else if (t.text == "shape") parse_shape();
            else parse_rule(rules, ++rule_counter);
            if (before && !diags_.empty()) recover();
        }

        Parsed<Setting> out;
        if (!diags_.empty()) {
            out.diagnostics = std::move(diags_);
            return out;
        }
        auto normalized = normalize_tgds(rules);
        if (auto* err = std::get_if<NotFullError>(&normalized)) {
            out.diagnostics.push_back(
                {{}, "rule " + err->rule + " is not full: head variable " + err->variable +
                         " does not occur in the body"});
            return out;
        }
        setting_.tgds = std::move(std::get<std::vector<StTgd>>(normalized));
        Diagnostics vd = validate_setting(setting_);
        if (!vd.empty()) {
            out.diagnostics = std::move(vd);
            return out;
        }
        out.value = std::move(setting_);
        return out;
    }

private:
    void error(const SourceLocation& loc, std::string msg) {
        diags_.push_back({loc, std::move(msg)});
    }

    void recover() {
        while (lex_.peek().kind != Token::End && !is_statement_keyword(lex_.peek())) lex_.take();
    }

    bool expect_punct(char c) {
        if (lex_.peek().is_punct(c)) {
            lex_.take();
            return true;
        }
        error(lex_.here(), std::string("expected '") + c + "', got '" + lex_.peek().text + "'");
        return false;
    }

    std::optional<std::string> expect_ident(const char* what) {
        if (lex_.peek().kind == Token::Ident) return lex_.take().text;
        error(lex_.here(), std::string("expected ") + what + ", got '" + lex_.peek().text + "'");
        return std::nullopt;
    }

    // relation Name(attr, ...)
    void parse_relation() {
        auto name = expect_ident("relation name");
        if (!name || !expect_punct('(')) return;
        std::vector<std::string> attrs;
        if (!lex_.peek().is_punct(')')) {
            do {
                auto attr = expect_ident("attribute name");
                if (!attr) return;
                attrs.push_back(*attr);
            } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        }
        if (!expect_punct(')')) return;
        if (setting_.source.relations.count(*name)) {
            error(lex_.here(), "relation " + *name + " declared twice");
            return;
        }
        setting_.source.relations[*name] = std::move(attrs);
    }

    // fd Rel : a, b -> c, d
    void parse_fd() {
        auto rel = expect_ident("relation name");
        if (!rel || !expect_punct(':')) return;
        FunctionalDependency fd;
        fd.relation = *rel;
        do {
            auto attr = expect_ident("attribute name");
            if (!attr) return;
            fd.lhs.insert(*attr);
        } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        if (lex_.peek().kind != Token::Arrow) {
            error(lex_.here(), "expected '->' in fd");
            return;
        }
        lex_.take();
        do {
            auto attr = expect_ident("attribute name");
            if (!attr) return;
            fd.rhs.insert(*attr);
        } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        setting_.source.fds.push_back(std::move(fd));
    }

    // iri name(param, ...) = "template"
    void parse_iri() {
        auto name = expect_ident("constructor name");
        if (!name || !expect_punct('(')) return;
        std::vector<std::string> params;
        if (!lex_.peek().is_punct(')')) {
            do {
                auto p = expect_ident("parameter name");
                if (!p) return;
                params.push_back(*p);
            } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        }
        if (!expect_punct(')') || !expect_punct('=')) return;
        if (lex_.peek().kind != Token::String) {
            error(lex_.here(), "expected template string");
            return;
        }
        Token tmpl = lex_.take();

        IriConstructor c;
        c.name = *name;
        c.params = params;
        std::string segment;
        const std::string& t = tmpl.text;
        for (size_t i = 0; i < t.size(); ++i) {
            if (t[i] == '{') {
                size_t close = t.find('}', i + 1);
                if (close == std::string::npos) {
                    error(tmpl.loc, "unterminated slot in template of " + c.name);
                    return;
                }
                std::string param = t.substr(i + 1, close - i - 1);
                auto it = std::find(params.begin(), params.end(), param);
                if (it == params.end()) {
                    error(tmpl.loc, "template slot {" + param + "} is not a parameter of " +
                                        c.name);
                    return;
                }
                c.segments.push_back(segment);
                segment.clear();
                c.slot_param.push_back(static_cast<size_t>(it - params.begin()));
                i = close;
            } else {
                segment += t[i];
            }
        }
        c.segments.push_back(segment);
        if (auto err = c.well_formed_error()) {
            error(tmpl.loc, *err);
            return;
        }
        if (!setting_.library.add(std::move(c)))
            error(tmpl.loc, "constructor " + *name + " declared twice");
    }

    std::optional<std::string> parse_pred() {
        if (lex_.peek().kind == Token::PredName || lex_.peek().kind == Token::IriRef)
            return lex_.take().text;
        error(lex_.here(), "expected predicate (:name or <iri>)");
        return std::nullopt;
    }

    // shape T { :p -> @U [1]; :q -> Literal [*] }
    void parse_shape() {
        auto name = expect_ident("type name");
        if (!name) return;
        setting_.shapes.types.insert(*name);
        if (!expect_punct('{')) return;
        while (!lex_.peek().is_punct('}')) {
            if (lex_.peek().kind == Token::End) {
                error(lex_.here(), "unterminated shape " + *name);
                return;
            }
            auto pred = parse_pred();
            if (!pred) return;
            if (lex_.peek().kind != Token::Arrow) {
                error(lex_.here(), "expected '->' in shape constraint");
                return;
            }
            lex_.take();
            ShapeConstraint c;
            if (lex_.peek().is_punct('@')) {
                lex_.take();
                auto target = expect_ident("type name");
                if (!target) return;
                c.target = ShapeTarget::of_type(*target);
            } else if (lex_.peek().is_ident("Literal")) {
                lex_.take();
                c.target = ShapeTarget::literal_mark();
            } else {
                error(lex_.here(), "expected @Type or Literal");
                return;
            }
            if (!expect_punct('[')) return;
            Token m = lex_.take();
            if (m.is_ident("1")) c.mult = Mult::One;
            else if (m.is_punct('?')) c.mult = Mult::Opt;
            else if (m.is_punct('*')) c.mult = Mult::Star;
            else if (m.is_punct('+')) c.mult = Mult::Plus;
            else {
                error(m.loc, "expected multiplicity 1, ?, * or +");
                return;
            }
            if (!expect_punct(']')) return;
            auto key = std::make_pair(*name, *pred);
            if (setting_.shapes.delta.count(key)) {
                error(lex_.here(), "shape " + *name + " constrains " + *pred + " twice");
                return;
            }
            setting_.shapes.delta.emplace(std::move(key), c);
            if (lex_.peek().is_punct(';')) lex_.take();
        }
        lex_.take();  // '}'
    }

    std::optional<IriApp> parse_iri_app(const std::string& ctor) {
        if (!expect_punct('(')) return std::nullopt;
        IriApp app;
        app.ctor = ctor;
        if (!lex_.peek().is_punct(')')) {
            do {
                auto v = expect_ident("variable");
                if (!v) return std::nullopt;
                app.vars.push_back(*v);
            } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        }
        if (!expect_punct(')')) return std::nullopt;
        return app;
    }

    // rule [label :] body => heads ; labels with non-ident characters are
    // quoted ("rule1#2").
    void parse_rule(std::vector<RawRule>& rules, int index) {
        RawRule rule;
        rule.label = "rule" + std::to_string(index);

        if (lex_.peek().kind == Token::String) {
            Token label = lex_.take();
            if (!expect_punct(':')) return;
            rule.label = label.text;
        } else if (lex_.peek().kind == Token::Ident) {
            // Could be a label or the first body atom; a following ':'
            // disambiguates.
            Token first = lex_.take();
            if (lex_.peek().is_punct(':')) {
                lex_.take();
                rule.label = first.text;
            } else {
                auto atom = parse_body_atom(first.text);
                if (!atom) return;
                rule.body.push_back(std::move(*atom));
                if (lex_.peek().is_punct(',')) lex_.take();
            }
        }
        while (lex_.peek().kind != Token::Implies) {
            if (lex_.peek().kind == Token::End) {
                error(lex_.here(), "rule without '=>'");
                return;
            }
            auto rel = expect_ident("relation name");
            if (!rel) return;
            auto atom = parse_body_atom(*rel);
            if (!atom) return;
            rule.body.push_back(std::move(*atom));
            if (lex_.peek().is_punct(',')) lex_.take();
        }
        lex_.take();  // '=>'
        if (rule.body.empty()) {
            error(lex_.here(), "rule " + rule.label + " has an empty body");
            return;
        }

        do {
            auto head = parse_head_atom();
            if (!head) return;
            rule.heads.push_back(std::move(*head));
        } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        if (rule.heads.empty()) {
            error(lex_.here(), "rule " + rule.label + " has no head atoms");
            return;
        }
        rules.push_back(std::move(rule));
    }

    std::optional<RelAtom> parse_body_atom(const std::string& rel) {
        if (!expect_punct('(')) return std::nullopt;
        RelAtom atom;
        atom.relation = rel;
        if (!lex_.peek().is_punct(')')) {
            do {
                auto v = expect_ident("variable");
                if (!v) return std::nullopt;
                atom.vars.push_back(*v);
            } while (lex_.peek().is_punct(',') && (lex_.take(), true));
        }
        if (!expect_punct(')')) return std::nullopt;
        return atom;
    }

    std::optional<HeadAtom> parse_head_atom() {
        auto name = expect_ident("head atom");
        if (!name) return std::nullopt;
        if (*name == "Triple") {
            if (!expect_punct('(')) return std::nullopt;
            auto subj_ctor = expect_ident("constructor name");
            if (!subj_ctor) return std::nullopt;
            auto subj = parse_iri_app(*subj_ctor);
            if (!subj || !expect_punct(',')) return std::nullopt;
            auto pred = parse_pred();
            if (!pred || !expect_punct(',')) return std::nullopt;
            auto obj = parse_term();
            if (!obj || !expect_punct(')')) return std::nullopt;
            return HeadAtom::triple(std::move(*subj), std::move(*pred), std::move(*obj));
        }
        auto subj = parse_iri_app_after_type();
        if (!subj) return std::nullopt;
        return HeadAtom::type_atom(*name, std::move(*subj));
    }

    std::optional<IriApp> parse_iri_app_after_type() {
        if (!expect_punct('(')) return std::nullopt;
        auto ctor = expect_ident("constructor name");
        if (!ctor) return std::nullopt;
        auto app = parse_iri_app(*ctor);
        if (!app) return std::nullopt;
        if (!expect_punct(')')) return std::nullopt;
        return app;
    }

    std::optional<Term> parse_term() {
        if (lex_.peek().kind == Token::String) return Term::lit(lex_.take().text);
        auto name = expect_ident("term");
        if (!name) return std::nullopt;
        if (lex_.peek().is_punct('(')) {
            auto app = parse_iri_app(*name);
            if (!app) return std::nullopt;
            return Term::iri_app(std::move(*app));
        }
        return Term::var(*name);
    }

    Lexer lex_;
    Setting setting_;
    Diagnostics diags_;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_value_for_instance(const Value& v) {
    if (v.kind() == ValueKind::NullLit) return "_?n" + std::to_string(v.null_id());
    const std::string& s = v.text();
    bool bare = !s.empty();
    for (char c : s)
        if (!bare_value_char(c)) bare = false;
    return bare ? s : quote(s);
}

std::string render_term(const Term& t) {
    switch (t.kind) {
        case Term::Var: return t.text;
        case Term::LitConst: return quote(t.text);
        case Term::App: {
            std::string out = t.app.ctor + "(";
            for (size_t i = 0; i < t.app.vars.size(); ++i) {
                if (i) out += ", ";
                out += t.app.vars[i];
            }
            return out + ")";
        }
    }
    return {};
}

}  // namespace

Parsed<Setting> parse_setting(const std::string& text, const std::string& filename) {
    return SettingParser(text, filename).run();
}

std::string render_setting(const Setting& s) {
    std::ostringstream os;
    for (const auto& [rel, attrs] : s.source.relations) {
        os << "relation " << rel << "(";
        for (size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
        os << ")\n";
    }
    for (const auto& fd : s.source.fds) {
        os << "fd " << fd.relation << " : ";
        size_t i = 0;
        for (const auto& a : fd.lhs) os << (i++ ? ", " : "") << a;
        os << " -> ";
        i = 0;
        for (const auto& a : fd.rhs) os << (i++ ? ", " : "") << a;
        os << "\n";
    }
    for (const auto& c : s.library.ctors) {
        os << "iri " << c.name << "(";
        for (size_t i = 0; i < c.params.size(); ++i) os << (i ? ", " : "") << c.params[i];
        os << ") = " << quote(c.template_text()) << "\n";
    }
    for (const auto& type : s.shapes.types) {
        os << "shape " << type << " {";
        bool first = true;
        for (const auto& [key, c] : s.shapes.delta) {
            if (key.first != type) continue;
            os << (first ? " " : "; ") << key.second << " -> ";
            if (c.target.literal) os << "Literal";
            else os << "@" << c.target.type;
            os << " " << mult_token(c.mult);
            first = false;
        }
        os << (first ? "}" : " }") << "\n";
    }
    auto plain_ident = [](const std::string& label) {
        if (label.empty() || !ident_start(label[0])) return false;
        for (char c : label)
            if (!ident_char(c)) return false;
        return true;
    };
    for (const auto& tgd : s.tgds) {
        os << "rule " << (plain_ident(tgd.label) ? tgd.label : quote(tgd.label)) << " : ";
        for (size_t i = 0; i < tgd.body.size(); ++i) {
            if (i) os << ", ";
            os << tgd.body[i].relation << "(";
            for (size_t j = 0; j < tgd.body[i].vars.size(); ++j)
                os << (j ? ", " : "") << tgd.body[i].vars[j];
            os << ")";
        }
        os << " => ";
        const HeadAtom& h = tgd.head;
        if (h.kind == HeadAtom::Type) {
            os << h.type << "(" << render_term(Term::iri_app(h.subject)) << ")";
        } else {
            os << "Triple(" << render_term(Term::iri_app(h.subject)) << ", " << h.pred << ", "
               << render_term(h.object) << ")";
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Instance files

namespace {

/// Character scanner for the line-based formats.
struct LineScanner {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
};

std::optional<Value> scan_instance_value(LineScanner& sc, std::string& err) {
    sc.skip_ws();
    if (sc.pos >= sc.s.size()) {
        err = "expected value";
        return std::nullopt;
    }
    char c = sc.s[sc.pos];
    if (c == '"') {
        ++sc.pos;
        std::string out;
        while (sc.pos < sc.s.size() && sc.s[sc.pos] != '"') {
            if (sc.s[sc.pos] == '\\' && sc.pos + 1 < sc.s.size()) ++sc.pos;
            out += sc.s[sc.pos++];
        }
        if (sc.pos >= sc.s.size()) {
            err = "unterminated string";
            return std::nullopt;
        }
        ++sc.pos;
        return Value::lit(out);
    }
    if (c == '_' && sc.pos + 2 < sc.s.size() && sc.s[sc.pos + 1] == '?' &&
        sc.s[sc.pos + 2] == 'n') {
        sc.pos += 3;
        size_t start = sc.pos;
        while (sc.pos < sc.s.size() && std::isdigit(static_cast<unsigned char>(sc.s[sc.pos])))
            ++sc.pos;
        if (sc.pos == start) {
            err = "malformed null";
            return std::nullopt;
        }
        return Value::null_lit(std::stoull(sc.s.substr(start, sc.pos - start)));
    }
    size_t start = sc.pos;
    while (sc.pos < sc.s.size() && bare_value_char(sc.s[sc.pos])) ++sc.pos;
    if (sc.pos == start) {
        err = std::string("malformed value at '") + c + "'";
        return std::nullopt;
    }
    return Value::lit(sc.s.substr(start, sc.pos - start));
}

}  // namespace

Parsed<SourceInstance> parse_instance(const std::string& text, const RelationalSchema& schema,
                                      const std::string& filename) {
    Parsed<SourceInstance> out;
    SourceInstance inst;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        SourceLocation loc{filename, lineno, 1};
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        LineScanner sc{line};
        if (sc.at_end()) continue;

        size_t start = sc.pos;
        while (sc.pos < line.size() && ident_char(line[sc.pos])) ++sc.pos;
        std::string rel = line.substr(start, sc.pos - start);
        if (rel.empty() || !sc.eat('(')) {
            out.diagnostics.push_back({loc, "expected fact `Rel(v1, ...)`"});
            continue;
        }
        if (!schema.has_relation(rel)) {
            out.diagnostics.push_back({loc, "unknown relation " + rel});
            continue;
        }
        Tuple tuple;
        bool bad = false;
        if (!sc.eat(')')) {
            while (true) {
                std::string err;
                auto v = scan_instance_value(sc, err);
                if (!v) {
                    out.diagnostics.push_back({loc, err});
                    bad = true;
                    break;
                }
                tuple.push_back(std::move(*v));
                if (sc.eat(',')) continue;
                if (sc.eat(')')) break;
                out.diagnostics.push_back({loc, "expected ',' or ')'"});
                bad = true;
                break;
            }
        }
        if (bad) continue;
        if (tuple.size() != schema.arity(rel)) {
            out.diagnostics.push_back(
                {loc, "relation " + rel + " expects " + std::to_string(schema.arity(rel)) +
                          " values, got " + std::to_string(tuple.size())});
            continue;
        }
        inst.add(rel, std::move(tuple));
    }
    if (out.diagnostics.empty()) out.value = std::move(inst);
    return out;
}

std::string render_instance(const SourceInstance& inst) {
    // Dense null renumbering in id order keeps output canonical.
    std::map<uint64_t, uint64_t> renumber;
    for (const auto& [rel, tuples] : inst.facts())
        for (const auto& t : tuples)
            for (const auto& v : t)
                if (v.kind() == ValueKind::NullLit) renumber.emplace(v.null_id(), 0);
    uint64_t next = 0;
    for (auto& [old_id, new_id] : renumber) new_id = next++;

    std::vector<std::string> lines;
    for (const auto& [rel, tuples] : inst.facts()) {
        for (const auto& t : tuples) {
            std::string line = rel + "(";
            for (size_t i = 0; i < t.size(); ++i) {
                if (i) line += ", ";
                Value v = t[i];
                if (v.kind() == ValueKind::NullLit) v = Value::null_lit(renumber.at(v.null_id()));
                line += render_value_for_instance(v);
            }
            line += ")";
            lines.push_back(std::move(line));
        }
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graph files

namespace {

std::optional<Value> scan_node(LineScanner& sc, std::string& err) {
    sc.skip_ws();
    if (sc.pos >= sc.s.size()) {
        err = "expected node";
        return std::nullopt;
    }
    char c = sc.s[sc.pos];
    if (c == '<') {
        size_t close = sc.s.find('>', sc.pos + 1);
        if (close == std::string::npos) {
            err = "unterminated IRI";
            return std::nullopt;
        }
        std::string iri = sc.s.substr(sc.pos + 1, close - sc.pos - 1);
        sc.pos = close + 1;
        return Value::iri(iri);
    }
    if (c == '"') {
        std::string dummy;
        return scan_instance_value(sc, err);
    }
    if (c == '_' && sc.pos + 2 < sc.s.size() && (sc.s[sc.pos + 1] == ':' || sc.s[sc.pos + 1] == '?') &&
        sc.s[sc.pos + 2] == 'n') {
        bool iri_null = sc.s[sc.pos + 1] == ':';
        sc.pos += 3;
        size_t start = sc.pos;
        while (sc.pos < sc.s.size() && std::isdigit(static_cast<unsigned char>(sc.s[sc.pos])))
            ++sc.pos;
        if (sc.pos == start) {
            err = "malformed null";
            return std::nullopt;
        }
        uint64_t id = std::stoull(sc.s.substr(start, sc.pos - start));
        return iri_null ? Value::null_iri(id) : Value::null_lit(id);
    }
    err = std::string("malformed node at '") + c + "'";
    return std::nullopt;
}

std::optional<std::string> scan_pred(LineScanner& sc, std::string& err) {
    sc.skip_ws();
    if (sc.pos < sc.s.size() && sc.s[sc.pos] == ':') {
        size_t start = sc.pos++;
        while (sc.pos < sc.s.size() && ident_char(sc.s[sc.pos])) ++sc.pos;
        if (sc.pos == start + 1) {
            err = "malformed predicate";
            return std::nullopt;
        }
        return sc.s.substr(start, sc.pos - start);
    }
    if (sc.pos < sc.s.size() && sc.s[sc.pos] == '<') {
        size_t close = sc.s.find('>', sc.pos + 1);
        if (close == std::string::npos) {
            err = "unterminated IRI";
            return std::nullopt;
        }
        std::string iri = sc.s.substr(sc.pos + 1, close - sc.pos - 1);
        sc.pos = close + 1;
        return iri;
    }
    err = "expected predicate";
    return std::nullopt;
}

}  // namespace

Parsed<TypedGraph> parse_graph(const std::string& text, const std::string& filename) {
    Parsed<TypedGraph> out;
    TypedGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        SourceLocation loc{filename, lineno, 1};
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        LineScanner sc{line};
        if (sc.at_end()) continue;

        size_t start = sc.pos;
        while (sc.pos < line.size() && ident_char(line[sc.pos])) ++sc.pos;
        std::string kw = line.substr(start, sc.pos - start);
        std::string err;
        if (kw == "triple") {
            if (!sc.eat('(')) {
                out.diagnostics.push_back({loc, "expected '('"});
                continue;
            }
            auto s = scan_node(sc, err);
            if (!s) {
                out.diagnostics.push_back({loc, err});
                continue;
            }
            if (s->is_literal()) {
                out.diagnostics.push_back({loc, "literal subject " + to_display(*s)});
                continue;
            }
            if (!sc.eat(',')) {
                out.diagnostics.push_back({loc, "expected ','"});
                continue;
            }
            auto p = scan_pred(sc, err);
            if (!p) {
                out.diagnostics.push_back({loc, err});
                continue;
            }
            if (!sc.eat(',')) {
                out.diagnostics.push_back({loc, "expected ','"});
                continue;
            }
            auto o = scan_node(sc, err);
            if (!o) {
                out.diagnostics.push_back({loc, err});
                continue;
            }
            if (!sc.eat(')') || !sc.eat('.')) {
                out.diagnostics.push_back({loc, "expected ')...' terminator"});
                continue;
            }
            g.add_triple(std::move(*s), std::move(*p), std::move(*o));
        } else if (kw == "type") {
            if (!sc.eat('(')) {
                out.diagnostics.push_back({loc, "expected '('"});
                continue;
            }
            auto s = scan_node(sc, err);
            if (!s) {
                out.diagnostics.push_back({loc, err});
                continue;
            }
            if (s->is_literal()) {
                out.diagnostics.push_back({loc, "literal subject " + to_display(*s)});
                continue;
            }
            if (!sc.eat(',')) {
                out.diagnostics.push_back({loc, "expected ','"});
                continue;
            }
            sc.skip_ws();
            size_t tstart = sc.pos;
            while (sc.pos < line.size() && ident_char(line[sc.pos])) ++sc.pos;
            std::string type = line.substr(tstart, sc.pos - tstart);
            if (type.empty() || !sc.eat(')') || !sc.eat('.')) {
                out.diagnostics.push_back({loc, "malformed type fact"});
                continue;
            }
            g.add_type(*s, type);
        } else {
            out.diagnostics.push_back({loc, "expected triple(...) or type(...)"});
        }
    }
    if (out.diagnostics.empty()) out.value = std::move(g);
    return out;
}

std::string render_graph(const TypedGraph& g) {
    std::map<uint64_t, uint64_t> iri_ids, lit_ids;
    for (const auto& n : g.nodes()) {
        if (n.kind() == ValueKind::NullIri) iri_ids.emplace(n.null_id(), 0);
        if (n.kind() == ValueKind::NullLit) lit_ids.emplace(n.null_id(), 0);
    }
    uint64_t next = 0;
    for (auto& [o, n] : iri_ids) n = next++;
    next = 0;
    for (auto& [o, n] : lit_ids) n = next++;

    auto canon = [&](const Value& v) -> Value {
        if (v.kind() == ValueKind::NullIri) return Value::null_iri(iri_ids.at(v.null_id()));
        if (v.kind() == ValueKind::NullLit) return Value::null_lit(lit_ids.at(v.null_id()));
        return v;
    };

    std::vector<std::string> lines;
    for (const auto& t : g.triples())
        lines.push_back("triple(" + to_display(canon(t.subject)) + ", " + t.pred + ", " +
                        to_display(canon(t.object)) + ").");
    for (const auto& [node, types] : g.typing())
        for (const auto& ty : types)
            lines.push_back("type(" + to_display(canon(node)) + ", " + ty + ").");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nested regular expressions

namespace {

class NreParser {
public:
    explicit NreParser(const std::string& text) : s_(text) {}

    Parsed<Nre> run() {
        Parsed<Nre> out;
        auto e = parse_union();
        skip_ws();
        if (!error_.empty()) {
            out.diagnostics.push_back({{}, error_});
        } else if (pos_ < s_.size()) {
            out.diagnostics.push_back(
                {{}, "unexpected trailing input at offset " + std::to_string(pos_)});
        } else if (e) {
            out.value = std::move(*e);
        } else {
            out.diagnostics.push_back({{}, "empty expression"});
        }
        return out;
    }

private:
    void fail(std::string msg) {
        if (error_.empty()) error_ = std::move(msg);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    std::optional<Nre> parse_union() {
        auto lhs = parse_concat();
        if (!lhs) return std::nullopt;
        while (eat('|')) {
            auto rhs = parse_concat();
            if (!rhs) return std::nullopt;
            lhs = Nre::alt(std::move(*lhs), std::move(*rhs));
        }
        return lhs;
    }

    std::optional<Nre> parse_concat() {
        auto lhs = parse_unary();
        if (!lhs) return std::nullopt;
        while (eat('/')) {
            auto rhs = parse_unary();
            if (!rhs) return std::nullopt;
            lhs = Nre::concat(std::move(*lhs), std::move(*rhs));
        }
        return lhs;
    }

    std::optional<Nre> parse_unary() {
        if (eat('^')) {
            auto inner = parse_unary();
            if (!inner) return std::nullopt;
            return Nre::inverse(std::move(*inner));
        }
        auto prim = parse_primary();
        if (!prim) return std::nullopt;
        while (eat('*')) prim = Nre::star(std::move(*prim));
        return prim;
    }

    std::optional<Nre> parse_primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            if (eat(')')) return Nre::eps();
            auto inner = parse_union();
            if (!inner) return std::nullopt;
            if (!eat(')')) {
                fail("expected ')'");
                return std::nullopt;
            }
            return inner;
        }
        if (c == '[') {
            ++pos_;
            auto inner = parse_union();
            if (!inner) return std::nullopt;
            if (!eat(']')) {
                fail("expected ']'");
                return std::nullopt;
            }
            return Nre::nest(std::move(*inner));
        }
        if (c == '_') {
            ++pos_;
            return Nre::any();
        }
        if (c == ':') {
            ++pos_;
            size_t start = pos_;
            while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
            if (pos_ == start) {
                fail("malformed predicate");
                return std::nullopt;
            }
            return Nre::predicate(":" + s_.substr(start, pos_ - start));
        }
        if (c == '<') {
            ++pos_;
            size_t close = s_.find('>', pos_);
            if (close == std::string::npos) {
                fail("unterminated IRI");
                return std::nullopt;
            }
            std::string iri = s_.substr(pos_, close - pos_);
            pos_ = close + 1;
            return Nre::predicate(iri);
        }
        if (ident_start(c)) {
            size_t start = pos_;
            while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
            std::string word = s_.substr(start, pos_ - start);
            if (word != "node") {
                fail("unknown token '" + word + "'");
                return std::nullopt;
            }
            if (!eat('(')) {
                fail("expected '(' after node");
                return std::nullopt;
            }
            skip_ws();
            std::optional<Value> v;
            if (pos_ < s_.size() && s_[pos_] == '<') {
                size_t close = s_.find('>', pos_ + 1);
                if (close == std::string::npos) {
                    fail("unterminated IRI");
                    return std::nullopt;
                }
                v = Value::iri(s_.substr(pos_ + 1, close - pos_ - 1));
                pos_ = close + 1;
            } else if (pos_ < s_.size() && s_[pos_] == '"') {
                ++pos_;
                std::string out;
                while (pos_ < s_.size() && s_[pos_] != '"') {
                    if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
                    out += s_[pos_++];
                }
                if (pos_ >= s_.size()) {
                    fail("unterminated string");
                    return std::nullopt;
                }
                ++pos_;
                v = Value::lit(out);
            } else {
                fail("node() takes <iri> or \"literal\"");
                return std::nullopt;
            }
            if (!eat(')')) {
                fail("expected ')'");
                return std::nullopt;
            }
            return Nre::node_test(std::move(*v));
        }
        fail(c ? std::string("unexpected '") + c + "'" : "unexpected end of input");
        return std::nullopt;
    }

    const std::string& s_;
    size_t pos_ = 0;
    std::string error_;
};

}  // namespace

Parsed<Nre> parse_nre(const std::string& text) { return NreParser(text).run(); }

bool is_forward(const Nre& e) {
    if (e.kind == Nre::Inv) return false;
    for (const auto& k : e.kids)
        if (!is_forward(k)) return false;
    return true;
}

std::string to_string(const Nre& e) {
    switch (e.kind) {
        case Nre::Eps: return "()";
        case Nre::Pred: return e.pred[0] == ':' ? e.pred : "<" + e.pred + ">";
        case Nre::Any: return "_";
        case Nre::NodeTest: return "node(" + to_display(e.test) + ")";
        case Nre::Nest: return "[" + to_string(e.kids[0]) + "]";
        case Nre::Star: return "(" + to_string(e.kids[0]) + ")*";
        case Nre::Inv: return "^(" + to_string(e.kids[0]) + ")";
        case Nre::Concat: return "(" + to_string(e.kids[0]) + "/" + to_string(e.kids[1]) + ")";
        case Nre::Union: return "(" + to_string(e.kids[0]) + "|" + to_string(e.kids[1]) + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// DIMACS

Parsed<Cnf> parse_dimacs(const std::string& text, const std::string& filename) {
    Parsed<Cnf> out;
    Cnf cnf;
    bool saw_header = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<int> current;
    while (std::getline(in, line)) {
        ++lineno;
        SourceLocation loc{filename, lineno, 1};
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") continue;
        if (first == "p") {
            std::string kind;
            int vars = 0, clauses = 0;
            if (!(ls >> kind >> vars >> clauses) || kind != "cnf" || vars < 0) {
                out.diagnostics.push_back({loc, "malformed DIMACS header"});
                return out;
            }
            cnf.num_vars = vars;
            saw_header = true;
            continue;
        }
        if (!saw_header) {
            out.diagnostics.push_back({loc, "clause before DIMACS header"});
            return out;
        }
        std::istringstream body(line);
        int lit;
        while (body >> lit) {
            if (lit == 0) {
                if (!current.empty()) {
                    cnf.clauses.push_back(current);
                    current.clear();
                }
            } else {
                int var = lit > 0 ? lit : -lit;
                if (var > cnf.num_vars) {
                    out.diagnostics.push_back(
                        {loc, "literal " + std::to_string(lit) + " out of range"});
                    return out;
                }
                current.push_back(lit);
            }
        }
    }
    if (!saw_header) {
        out.diagnostics.push_back({{filename, 1, 1}, "missing DIMACS header"});
        return out;
    }
    if (!current.empty()) cnf.clauses.push_back(current);
    out.value = std::move(cnf);
    return out;
}

}  // namespace rdfex
