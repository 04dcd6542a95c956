#include "rtl_interp.hpp"

#include <cctype>
#include <optional>

namespace vlcm {

namespace {

struct Token {
    enum Kind { Ident, Number, Literal, Punct, End } kind = End;
    std::string text;       // ident / punct
    BigUint value;          // literal value
    unsigned lit_width = 0; // literal width
    unsigned long number = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws_and_comments();
        if (pos_ >= text_.size()) return {};
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '`') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '$' || text_[pos_] == '`'))
                ++pos_;
            Token t;
            t.kind = Token::Ident;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            unsigned long num = std::stoul(text_.substr(start, pos_ - start));
            if (pos_ < text_.size() && text_[pos_] == '\'') {
                ++pos_;
                char basec = text_[pos_++];
                int base = (basec == 'h' || basec == 'H')   ? 16
                           : (basec == 'b' || basec == 'B') ? 2
                                                            : 10;
                std::size_t vstart = pos_;
                while (pos_ < text_.size() &&
                       std::isxdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                Token t;
                t.kind = Token::Literal;
                t.lit_width = static_cast<unsigned>(num);
                t.value.set_str(text_.substr(vstart, pos_ - vstart), base);
                return t;
            }
            Token t;
            t.kind = Token::Number;
            t.number = num;
            return t;
        }
        Token t;
        t.kind = Token::Punct;
        t.text = std::string(1, c);
        ++pos_;
        return t;
    }

  private:
    void skip_ws_and_comments() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            return;
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

struct RtlModule::Expr {
    enum Kind { Ident, Literal, Slice, Concat, Bin } kind = Ident;
    std::string ident;
    BigUint value;
    unsigned lit_width = 0;
    unsigned hi = 0, lo = 0;                   // slice bounds
    char op = 0;                               // + - ^ & |
    std::vector<std::shared_ptr<Expr>> parts;  // concat parts / binary chain
};

namespace {

using Expr = RtlModule::Expr;
using ExprPtr = std::shared_ptr<Expr>;

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) { advance(); }

    Token cur;

    void advance() { cur = lex_.next(); }

    bool accept_punct(const std::string& p) {
        if (cur.kind == Token::Punct && cur.text == p) {
            advance();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) throw Error("RTL parse: expected '" + p + "'");
    }

    bool accept_ident(const std::string& id) {
        if (cur.kind == Token::Ident && cur.text == id) {
            advance();
            return true;
        }
        return false;
    }

    std::string expect_any_ident() {
        if (cur.kind != Token::Ident) throw Error("RTL parse: expected identifier");
        std::string s = cur.text;
        advance();
        return s;
    }

    unsigned long expect_number() {
        if (cur.kind != Token::Number) throw Error("RTL parse: expected number");
        unsigned long n = cur.number;
        advance();
        return n;
    }

    // [hi:lo] or [hi:lo] missing -> width 1 nets are emitted with [0:0]
    std::pair<unsigned, unsigned> parse_range() {
        expect_punct("[");
        unsigned hi = static_cast<unsigned>(expect_number());
        expect_punct(":");
        unsigned lo = static_cast<unsigned>(expect_number());
        expect_punct("]");
        return {hi, lo};
    }

    ExprPtr parse_expr() { return parse_or(); }

  private:
    ExprPtr parse_bin_chain(char op, ExprPtr (Parser::*sub)(), const std::string& tok) {
        ExprPtr lhs = (this->*sub)();
        if (!(cur.kind == Token::Punct && cur.text == tok)) return lhs;
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Bin;
        node->op = op;
        node->parts.push_back(lhs);
        while (accept_punct(tok)) node->parts.push_back((this->*sub)());
        return node;
    }

    ExprPtr parse_or() { return parse_bin_chain('|', &Parser::parse_xor, "|"); }
    ExprPtr parse_xor() { return parse_bin_chain('^', &Parser::parse_and, "^"); }
    ExprPtr parse_and() { return parse_bin_chain('&', &Parser::parse_addsub, "&"); }

    ExprPtr parse_addsub() {
        ExprPtr lhs = parse_atom();
        while (cur.kind == Token::Punct && (cur.text == "+" || cur.text == "-")) {
            char op = cur.text[0];
            advance();
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Bin;
            node->op = op;
            node->parts = {lhs, parse_atom()};
            lhs = node;
        }
        return lhs;
    }

    ExprPtr parse_atom() {
        if (accept_punct("(")) {
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (accept_punct("{")) {
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Concat;
            node->parts.push_back(parse_expr());
            while (accept_punct(",")) node->parts.push_back(parse_expr());
            expect_punct("}");
            return node;
        }
        if (cur.kind == Token::Literal) {
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Literal;
            node->value = cur.value;
            node->lit_width = cur.lit_width;
            advance();
            return node;
        }
        if (cur.kind == Token::Ident) {
            std::string name = cur.text;
            advance();
            if (cur.kind == Token::Punct && cur.text == "[") {
                auto [hi, lo] = parse_range();
                auto node = std::make_shared<Expr>();
                node->kind = Expr::Slice;
                node->ident = name;
                node->hi = hi;
                node->lo = lo;
                return node;
            }
            auto node = std::make_shared<Expr>();
            node->kind = Expr::Ident;
            node->ident = name;
            return node;
        }
        throw Error("RTL parse: unexpected token in expression");
    }

    Lexer lex_;
};

unsigned self_width(const Expr& e, const std::map<std::string, unsigned>& widths) {
    switch (e.kind) {
        case Expr::Ident: {
            auto it = widths.find(e.ident);
            if (it == widths.end()) throw Error("RTL parse: unknown net '" + e.ident + "'");
            return it->second;
        }
        case Expr::Literal:
            return e.lit_width;
        case Expr::Slice:
            return e.hi - e.lo + 1;
        case Expr::Concat: {
            unsigned w = 0;
            for (const auto& p : e.parts) w += self_width(*p, widths);
            return w;
        }
        case Expr::Bin: {
            unsigned w = 0;
            for (const auto& p : e.parts) w = std::max(w, self_width(*p, widths));
            return w;
        }
    }
    return 0;
}

BigUint eval_expr(const Expr& e, const std::map<std::string, BigUint>& values,
                  const std::map<std::string, unsigned>& widths, unsigned ctx_width) {
    switch (e.kind) {
        case Expr::Ident: {
            auto it = values.find(e.ident);
            if (it == values.end()) throw Error("RTL eval: net '" + e.ident + "' used before set");
            return it->second;
        }
        case Expr::Literal:
            return e.value;
        case Expr::Slice: {
            auto it = values.find(e.ident);
            if (it == values.end()) throw Error("RTL eval: net '" + e.ident + "' used before set");
            BigUint v = it->second >> e.lo;
            BigUint mask = (BigUint(1) << (e.hi - e.lo + 1)) - 1;
            return v & mask;
        }
        case Expr::Concat: {
            // concatenations are self-determined
            BigUint acc = 0;
            for (const auto& p : e.parts) {
                unsigned w = self_width(*p, widths);
                acc <<= w;
                acc += eval_expr(*p, values, widths, w);
            }
            return acc;
        }
        case Expr::Bin: {
            unsigned w = std::max(ctx_width, self_width(e, widths));
            BigUint mod = BigUint(1) << w;
            BigUint acc = eval_expr(*e.parts[0], values, widths, w);
            for (std::size_t i = 1; i < e.parts.size(); ++i) {
                BigUint rhs = eval_expr(*e.parts[i], values, widths, w);
                switch (e.op) {
                    case '+': acc += rhs; break;
                    case '-': acc -= rhs; break;
                    case '^': acc ^= rhs; break;
                    case '&': acc &= rhs; break;
                    case '|': acc |= rhs; break;
                    default: throw Error("RTL eval: unknown operator");
                }
            }
            acc %= mod;
            if (acc < 0) acc += mod;
            return acc;
        }
    }
    throw Error("RTL eval: bad expression");
}

}  // namespace

RtlModule RtlModule::parse(const std::string& verilog_text) {
    RtlModule m;
    Parser p(verilog_text);

    while (!(p.cur.kind == Token::Ident && p.cur.text == "module")) {
        if (p.cur.kind == Token::End) throw Error("RTL parse: no module found");
        p.advance();
    }
    p.advance();
    m.name_ = p.expect_any_ident();
    p.expect_punct("(");
    while (!p.accept_punct(")")) {
        bool is_input = false;
        if (p.accept_ident("input"))
            is_input = true;
        else if (p.accept_ident("output"))
            is_input = false;
        else
            throw Error("RTL parse: expected port direction");
        p.accept_ident("wire");
        p.accept_ident("reg");
        auto [hi, lo] = p.parse_range();
        std::string name = p.expect_any_ident();
        unsigned width = hi - lo + 1;
        m.widths_[name] = width;
        (is_input ? m.inputs_ : m.outputs_).push_back({name, width});
        p.accept_punct(",");
    }
    p.expect_punct(";");

    while (!(p.cur.kind == Token::Ident && p.cur.text == "endmodule")) {
        if (p.cur.kind == Token::End) throw Error("RTL parse: missing endmodule");
        if (p.accept_ident("wire") || p.accept_ident("reg")) {
            auto [hi, lo] = p.parse_range();
            std::string name = p.expect_any_ident();
            m.widths_[name] = hi - lo + 1;
            if (p.accept_punct("=")) {
                Statement st;
                st.lhs = name;
                st.expr = p.parse_expr();
                m.statements_.push_back(std::move(st));
            }
            p.expect_punct(";");
            continue;
        }
        if (p.accept_ident("assign")) {
            Statement st;
            st.lhs = p.expect_any_ident();
            p.expect_punct("=");
            st.expr = p.parse_expr();
            p.expect_punct(";");
            m.statements_.push_back(std::move(st));
            continue;
        }
        if (p.accept_ident("always")) {
            // always @(*) begin case (sel) ... endcase end
            p.expect_punct("@");
            p.expect_punct("(");
            p.expect_punct("*");
            p.expect_punct(")");
            if (!p.accept_ident("begin")) throw Error("RTL parse: expected begin");
            if (!p.accept_ident("case")) throw Error("RTL parse: expected case");
            p.expect_punct("(");
            Statement st;
            st.case_selector = p.expect_any_ident();
            p.expect_punct(")");
            while (!p.accept_ident("endcase")) {
                if (p.cur.kind != Token::Literal) throw Error("RTL parse: expected case label");
                CaseArm arm;
                arm.match = p.cur.value;
                p.advance();
                p.expect_punct(":");
                std::string lhs = p.expect_any_ident();
                if (st.lhs.empty())
                    st.lhs = lhs;
                else if (st.lhs != lhs)
                    throw Error("RTL parse: case arms assign different nets");
                p.expect_punct("=");
                if (p.cur.kind != Token::Literal)
                    throw Error("RTL parse: case arms must assign constants");
                arm.value = p.cur.value;
                p.advance();
                p.expect_punct(";");
                st.case_arms.push_back(std::move(arm));
            }
            if (!p.accept_ident("end")) throw Error("RTL parse: expected end");
            m.statements_.push_back(std::move(st));
            continue;
        }
        throw Error("RTL parse: unsupported statement at '" + p.cur.text + "'");
    }
    return m;
}

std::map<std::string, BigUint> RtlModule::run(
    const std::map<std::string, BigUint>& input_values) const {
    std::map<std::string, BigUint> values;
    for (const auto& [name, width] : inputs_) {
        auto it = input_values.find(name);
        if (it == input_values.end()) throw Error("RTL eval: missing input '" + name + "'");
        BigUint mask = (BigUint(1) << width) - 1;
        values[name] = it->second & mask;
    }
    for (const Statement& st : statements_) {
        auto wit = widths_.find(st.lhs);
        if (wit == widths_.end()) throw Error("RTL eval: assignment to unknown net " + st.lhs);
        unsigned width = wit->second;
        BigUint mask = (BigUint(1) << width) - 1;
        if (st.expr) {
            values[st.lhs] = eval_expr(*st.expr, values, widths_, width) & mask;
        } else {
            auto sit = values.find(st.case_selector);
            if (sit == values.end())
                throw Error("RTL eval: selector '" + st.case_selector + "' used before set");
            bool hit = false;
            for (const CaseArm& arm : st.case_arms) {
                if (arm.match == sit->second) {
                    values[st.lhs] = arm.value & mask;
                    hit = true;
                    break;
                }
            }
            if (!hit) throw Error("RTL eval: selector value has no case arm");
        }
    }
    std::map<std::string, BigUint> out;
    for (const auto& [name, width] : outputs_) {
        auto it = values.find(name);
        if (it == values.end()) throw Error("RTL eval: output '" + name + "' never assigned");
        out[name] = it->second;
    }
    return out;
}

}  // namespace vlcm
