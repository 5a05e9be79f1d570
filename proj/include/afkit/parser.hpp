#pragma once

// Prefix s-expression reader for the formula grammar:
//   formula := "(" "not" formula ")" | "(" ("and"|"or") formula+ ")"
//            | "(" "->" formula formula ")" | "(" "<->" formula formula ")"
//            | "(" ("forall"|"exists") var formula ")"
//            | "(" pred var* ")" | "(" "=" var var ")" | "true" | "false"
//   var     := "x" [1-9][0-9]*
//   pred    := [A-Za-z_][A-Za-z0-9_]*

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afkit/formula.hpp"

namespace afkit {

namespace detail {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
        return text[pos];
    }
    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos);
        ++pos;
    }
    std::string token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (pos == start) throw ParseError("expected a token", pos);
        return std::string(text.substr(start, pos - start));
    }
};

inline std::optional<int> parse_var_token(const std::string& tok) {
    if (tok.size() < 2 || tok[0] != 'x') return std::nullopt;
    if (tok[1] == '0') return std::nullopt;
    int v = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
        v = v * 10 + (tok[i] - '0');
        if (v > 1'000'000) return std::nullopt;
    }
    return v;
}

inline bool valid_pred_name(const std::string& tok) {
    if (tok.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_')) return false;
    for (char c : tok)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline FormulaPtr parse_formula(Lexer& lx) {
    if (lx.peek() != '(') {
        std::size_t at = lx.pos;
        std::string tok = lx.token();
        if (tok == "true") return f_true();
        if (tok == "false") return f_false();
        throw ParseError("expected '(' or a boolean constant, got '" + tok + "'", at);
    }
    lx.expect('(');
    std::size_t head_at = lx.pos;
    std::string head = lx.token();
    FormulaPtr out;
    if (head == "not") {
        out = f_not(parse_formula(lx));
    } else if (head == "and" || head == "or") {
        std::vector<FormulaPtr> kids;
        while (lx.peek() != ')') kids.push_back(parse_formula(lx));
        if (kids.empty()) throw ParseError("'" + head + "' needs at least one operand", head_at);
        out = head == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
    } else if (head == "->" || head == "<->") {
        FormulaPtr a = parse_formula(lx);
        FormulaPtr b = parse_formula(lx);
        out = head == "->" ? f_implies(std::move(a), std::move(b)) : f_iff(std::move(a), std::move(b));
    } else if (head == "forall" || head == "exists") {
        std::size_t at = lx.pos;
        auto v = parse_var_token(lx.token());
        if (!v) throw ParseError("expected a variable after '" + head + "'", at);
        FormulaPtr body = parse_formula(lx);
        out = head == "forall" ? f_forall(*v, std::move(body)) : f_exists(*v, std::move(body));
    } else if (head == "=") {
        std::size_t at = lx.pos;
        auto i = parse_var_token(lx.token());
        auto j = parse_var_token(lx.token());
        if (!i || !j) throw ParseError("'=' expects two variables", at);
        out = f_eq(*i, *j);
    } else {
        if (!valid_pred_name(head) || parse_var_token(head))
            throw ParseError("invalid predicate name '" + head + "'", head_at);
        std::vector<int> args;
        while (lx.peek() != ')') {
            std::size_t at = lx.pos;
            auto v = parse_var_token(lx.token());
            if (!v) throw ParseError("atom arguments must be variables", at);
            args.push_back(*v);
        }
        out = f_atom(head, std::move(args));
    }
    lx.expect(')');
    return out;
}

}  // namespace detail

// Parses a single formula; rejects trailing garbage and arity clashes.
inline FormulaPtr parse(std::string_view text, const Signature* declared = nullptr) {
    detail::Lexer lx{text, 0};
    FormulaPtr f = detail::parse_formula(lx);
    if (!lx.eof()) throw ParseError("trailing input after formula", lx.pos);
    Signature sig = declared ? *declared : Signature{};
    try {
        infer_signature(f, sig);
    } catch (const Error& e) {
        throw ParseError(e.what(), 0);
    }
    return f;
}

}  // namespace afkit
