#include "latq/latexpr.hpp"

#include <cstddef>
#include <utility>

namespace latq {

LatticeExpr expr_named(std::string name) {
    LatticeExpr e;
    e.kind = LatticeExpr::Kind::Named;
    e.name = std::move(name);
    return e;
}

LatticeExpr expr_rank_one(Int d) {
    LatticeExpr e;
    e.kind = LatticeExpr::Kind::RankOne;
    e.value = std::move(d);
    return e;
}

LatticeExpr expr_scaled(LatticeExpr x, Int t) {
    LatticeExpr e;
    e.kind = LatticeExpr::Kind::Scaled;
    e.value = std::move(t);
    e.children.push_back(std::move(x));
    return e;
}

LatticeExpr expr_negated(LatticeExpr x) {
    LatticeExpr e;
    e.kind = LatticeExpr::Kind::Negated;
    e.children.push_back(std::move(x));
    return e;
}

LatticeExpr expr_repeat(Int k, LatticeExpr x) {
    LatticeExpr e;
    e.kind = LatticeExpr::Kind::Repeat;
    e.value = std::move(k);
    e.children.push_back(std::move(x));
    return e;
}

LatticeExpr expr_sum(std::vector<LatticeExpr> terms) {
    LatticeExpr e;
    e.kind = LatticeExpr::Kind::Sum;
    e.children = std::move(terms);
    return e;
}

ParseError::ParseError(const std::string& msg, size_t pos)
    : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}

namespace {

struct Token {
    enum class Kind { Plus, Star, LParen, RParen, LAngle, RAngle, Integer, Name, Repeat, End };
    Kind kind;
    Int ival;          // Integer / Repeat
    std::string text;  // Name
    size_t pos;        // byte offset in the original input
};

// Recognizes a UTF-8 alias at s[i]; on success advances i past it and stores
// the ASCII meaning ('+', '<', '>', '-') in out.
bool utf8_alias(const std::string& s, size_t& i, char& out) {
    auto at = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    if (i + 2 < s.size() && at(i) == 0xE2) {
        unsigned char b = at(i + 1), c = at(i + 2);
        char m = 0;
        if (b == 0x8A && c == 0x95) m = '+';       // ⊕
        else if (b == 0x9F && c == 0xA8) m = '<';  // ⟨
        else if (b == 0x9F && c == 0xA9) m = '>';  // ⟩
        else if (b == 0x8C && c == 0xA9) m = '<';  // U+2329
        else if (b == 0x8C && c == 0xAA) m = '>';  // U+232A
        else if (b == 0x88 && c == 0x92) m = '-';  // −
        if (m) {
            i += 3;
            out = m;
            return true;
        }
    }
    if (i + 2 < s.size() && at(i) == 0xE3 && at(i + 1) == 0x80) {
        unsigned char c = at(i + 2);
        char m = 0;
        if (c == 0x88) m = '<';       // 〈 U+3008
        else if (c == 0x89) m = '>';  // 〉 U+3009
        if (m) {
            i += 3;
            out = m;
            return true;
        }
    }
    return false;
}

// Superscript digit at s[i]; advances i on success.
bool utf8_sup_digit(const std::string& s, size_t& i, int& d) {
    auto at = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    if (i + 1 < s.size() && at(i) == 0xC2) {
        switch (at(i + 1)) {
            case 0xB9: d = 1; i += 2; return true;
            case 0xB2: d = 2; i += 2; return true;
            case 0xB3: d = 3; i += 2; return true;
        }
    }
    if (i + 2 < s.size() && at(i) == 0xE2 && at(i + 1) == 0x81) {
        unsigned char c = at(i + 2);
        if (c == 0xB0 || (c >= 0xB4 && c <= 0xB9)) {
            d = c - 0xB0;
            i += 3;
            return true;
        }
    }
    return false;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> toks;
    size_t i = 0;
    auto simple = [&](Token::Kind k, size_t pos) { toks.push_back(Token{k, 0, "", pos}); };
    while (i < s.size()) {
        size_t pos = i;
        char c = s[i];
        int supd = 0;
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (utf8_alias(s, i, c)) {
            // fall through with the ASCII meaning; i already advanced
        } else if (utf8_sup_digit(s, i, supd)) {
            Int k = supd;
            while (utf8_sup_digit(s, i, supd)) k = k * 10 + supd;
            toks.push_back(Token{Token::Kind::Repeat, k, "", pos});
            continue;
        } else {
            ++i;
        }
        switch (c) {
            case '+': simple(Token::Kind::Plus, pos); continue;
            case '*': simple(Token::Kind::Star, pos); continue;
            case '(': simple(Token::Kind::LParen, pos); continue;
            case ')': simple(Token::Kind::RParen, pos); continue;
            case '<': simple(Token::Kind::LAngle, pos); continue;
            case '>': simple(Token::Kind::RAngle, pos); continue;
            default: break;
        }
        if (c == '^') {
            // ^k, ^{k}, ^{⊕k}: a repetition marker.
            bool braced = false;
            if (i < s.size() && s[i] == '{') {
                braced = true;
                ++i;
            }
            while (i < s.size() && s[i] == ' ') ++i;
            {
                char a = 0;
                size_t j = i;
                if (utf8_alias(s, j, a) && a == '+') i = j;  // ⊕ inside ^{...}
            }
            while (i < s.size() && s[i] == ' ') ++i;
            std::string digits;
            while (i < s.size() && is_digit(s[i])) digits += s[i++];
            if (digits.empty()) {
                int d = 0;
                while (utf8_sup_digit(s, i, d)) digits += static_cast<char>('0' + d);
            }
            if (digits.empty()) throw ParseError("expected a repeat count after '^'", i);
            while (i < s.size() && s[i] == ' ') ++i;
            if (braced) {
                if (i >= s.size() || s[i] != '}') throw ParseError("expected '}' in repetition marker", i);
                ++i;
            }
            toks.push_back(Token{Token::Kind::Repeat, Int(digits), "", pos});
            continue;
        }
        if (c == '-' || is_digit(c)) {
            std::string digits;
            if (c != '-') digits += c;
            while (i < s.size() && is_digit(s[i])) digits += s[i++];
            if (digits.empty()) throw ParseError("expected digits after '-'", pos);
            Int v(digits);
            if (c == '-') v = -v;
            toks.push_back(Token{Token::Kind::Integer, v, "", pos});
            continue;
        }
        if (is_alpha(c)) {
            std::string name(1, c);
            while (i < s.size() && (is_alpha(s[i]) || is_digit(s[i]))) name += s[i++];
            toks.push_back(Token{Token::Kind::Name, 0, name, pos});
            continue;
        }
        throw ParseError("unexpected character", pos);
    }
    toks.push_back(Token{Token::Kind::End, 0, "", s.size()});
    return toks;
}

struct Parser {
    const std::vector<Token>& t;
    size_t i = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t k = i + ahead;
        return k < t.size() ? t[k] : t.back();
    }
    const Token& take() { return t[i < t.size() - 1 ? i++ : i]; }

    [[noreturn]] static void fail(const std::string& msg, const Token& at) {
        throw ParseError(msg, at.pos);
    }

    LatticeExpr parse_expr() {
        std::vector<LatticeExpr> terms;
        auto push = [&](LatticeExpr e) {
            // A parenthesized sum used bare as a term merges into this sum.
            if (e.kind == LatticeExpr::Kind::Sum)
                for (LatticeExpr& c : e.children) terms.push_back(std::move(c));
            else
                terms.push_back(std::move(e));
        };
        push(parse_term());
        while (peek().kind == Token::Kind::Plus) {
            take();
            push(parse_term());
        }
        if (terms.size() == 1) return std::move(terms[0]);
        return expr_sum(std::move(terms));
    }

    LatticeExpr parse_term() {
        if (peek().kind == Token::Kind::Integer) {
            const Token& k = take();
            if (peek().kind != Token::Kind::Star) fail("expected '*' after repeat count", peek());
            take();
            if (k.ival < 1) fail("repeat count must be a positive integer", k);
            return expr_repeat(k.ival, parse_atom());
        }
        return parse_atom();
    }

    LatticeExpr parse_atom() {
        LatticeExpr node;
        const Token& head = peek();
        switch (head.kind) {
            case Token::Kind::Name: {
                take();
                try {
                    named_lattice(head.text);
                } catch (const std::invalid_argument&) {
                    fail("unknown lattice name: " + head.text, head);
                }
                node = expr_named(head.text);
                if (peek().kind == Token::Kind::LParen) {
                    if (peek(1).kind != Token::Kind::Integer) fail("expected an integer scale factor", peek(1));
                    if (peek(2).kind != Token::Kind::RParen) fail("expected ')'", peek(2));
                    take();
                    const Token& f = take();
                    take();
                    if (f.ival == -1)
                        node = expr_negated(std::move(node));
                    else if (f.ival >= 1)
                        node = expr_scaled(std::move(node), f.ival);
                    else
                        fail("scale factor must be a positive integer or -1", f);
                }
                break;
            }
            case Token::Kind::LAngle: {
                take();
                if (peek().kind != Token::Kind::Integer) fail("expected an integer inside <>", peek());
                const Token& d = take();
                if (d.ival == 0) fail("the integer inside <> must be nonzero", d);
                if (fmod(d.ival, 2) != 0) fail("odd integer inside <>", d);
                if (peek().kind != Token::Kind::RAngle) fail("expected '>'", peek());
                take();
                node = expr_rank_one(d.ival);
                break;
            }
            case Token::Kind::LParen: {
                take();
                node = parse_expr();
                if (peek().kind != Token::Kind::RParen) fail("expected ')'", peek());
                take();
                break;
            }
            default:
                fail("expected a lattice name, '<', or '('", head);
        }
        for (;;) {
            if (peek().kind == Token::Kind::LParen && peek(1).kind == Token::Kind::Integer &&
                peek(2).kind == Token::Kind::RParen) {
                if (peek(1).ival != -1) fail("only (-1) may follow this expression", peek(1));
                take();
                take();
                take();
                node = expr_negated(std::move(node));
                continue;
            }
            if (peek().kind == Token::Kind::Repeat) {
                const Token& k = take();
                if (k.ival < 1) fail("repeat count must be a positive integer", k);
                node = expr_repeat(k.ival, std::move(node));
                continue;
            }
            break;
        }
        return node;
    }
};

bool is_postfixable(const LatticeExpr& e) {
    switch (e.kind) {
        case LatticeExpr::Kind::Named:
        case LatticeExpr::Kind::RankOne:
            return true;
        case LatticeExpr::Kind::Scaled:
        case LatticeExpr::Kind::Negated:
            return is_postfixable(e.children.at(0));
        default:
            return false;
    }
}

const LatticeExpr& only_child(const LatticeExpr& e) {
    if (e.children.size() != 1) throw std::invalid_argument("malformed expression tree: expected one child");
    return e.children.front();
}

}  // namespace

LatticeExpr parse(const std::string& input) {
    std::vector<Token> toks = lex(input);
    Parser p{toks};
    LatticeExpr e = p.parse_expr();
    if (p.peek().kind != Token::Kind::End) Parser::fail("unexpected trailing input", p.peek());
    return e;
}

std::string print_expr(const LatticeExpr& e) {
    auto wrapped = [](const LatticeExpr& x) {
        std::string s = print_expr(x);
        return is_postfixable(x) ? s : "(" + s + ")";
    };
    switch (e.kind) {
        case LatticeExpr::Kind::Named:
            return e.name;
        case LatticeExpr::Kind::RankOne:
            return "<" + e.value.get_str() + ">";
        case LatticeExpr::Kind::Scaled:
            return wrapped(only_child(e)) + "(" + e.value.get_str() + ")";
        case LatticeExpr::Kind::Negated:
            return wrapped(only_child(e)) + "(-1)";
        case LatticeExpr::Kind::Repeat: {
            const LatticeExpr& c = only_child(e);
            bool bare = is_postfixable(c);
            return e.value.get_str() + "*" + (bare ? print_expr(c) : "(" + print_expr(c) + ")");
        }
        case LatticeExpr::Kind::Sum: {
            std::string out;
            for (size_t k = 0; k < e.children.size(); ++k) {
                const LatticeExpr& c = e.children[k];
                if (k) out += " + ";
                if (c.kind == LatticeExpr::Kind::Sum)
                    out += "(" + print_expr(c) + ")";
                else
                    out += print_expr(c);
            }
            return out;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

GramLattice evaluate(const LatticeExpr& e) {
    switch (e.kind) {
        case LatticeExpr::Kind::Named:
            return named_lattice(e.name);
        case LatticeExpr::Kind::RankOne:
            return rank_one_lattice(e.value);
        case LatticeExpr::Kind::Scaled:
            return rescale(evaluate(only_child(e)), e.value);
        case LatticeExpr::Kind::Negated:
            return negate(evaluate(only_child(e)));
        case LatticeExpr::Kind::Repeat: {
            if (e.value < 1) throw std::invalid_argument("repeat count must be a positive integer");
            GramLattice block = evaluate(only_child(e));
            GramLattice acc = block;
            for (Int k = 1; k < e.value; ++k) acc = direct_sum(acc, block);
            return acc;
        }
        case LatticeExpr::Kind::Sum: {
            if (e.children.empty()) throw std::invalid_argument("malformed expression tree: empty sum");
            GramLattice acc = evaluate(e.children.front());
            for (size_t k = 1; k < e.children.size(); ++k) acc = direct_sum(acc, evaluate(e.children[k]));
            return acc;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

GramLattice lattice_from_expr(const std::string& input) { return evaluate(parse(input)); }

}  // namespace latq
