#include "bssram/parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "bssram/error.hpp"

namespace bssram {

namespace {

enum class Tok { word, number, punct, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::end, "", line_, col_});
                return out;
            }
            const std::size_t line = line_, col = col_;
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) advance();
                out.push_back({Tok::word, std::string(src_.substr(start, pos_ - start)), line, col});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
                if (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
                    throw ParseError(line_, col_, "unexpected letter after number");
                }
                out.push_back({Tok::number, std::string(src_.substr(start, pos_ - start)), line, col});
            } else if (src_.substr(pos_, 3) == "...") {
                advance(3);
                out.push_back({Tok::punct, "...", line, col});
            } else if (src_.substr(pos_, 2) == ":=") {
                advance(2);
                out.push_back({Tok::punct, ":=", line, col});
            } else if (std::string_view(":;.,()[]=+^").find(c) != std::string_view::npos) {
                advance();
                out.push_back({Tok::punct, std::string(1, c), line, col});
            } else {
                throw ParseError(line, col, std::string("unexpected character '") + c + "'");
            }
        }
    }

private:
    void advance(std::size_t n = 1) {
        while (n-- && pos_ < src_.size()) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
                ++col_;  // count UTF-8 code points, not bytes
            }
            ++pos_;
        }
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else if (src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program() {
        Program p;
        if (peek_word("signature")) p.declared = signature_header();
        Label expected = 1;
        while (true) {
            const Token& lt = expect(Tok::number, "instruction label");
            if (to_size(lt) != expected) {
                fail(lt, "expected label " + std::to_string(expected) + ", found " + lt.text);
            }
            expect_punct(":");
            const Token& start = peek();
            p.instructions.push_back(instruction());
            const bool is_stop = std::holds_alternative<instr::Stop>(p.instructions.back());
            const Token& sep = next();
            if (sep.kind == Tok::punct && sep.text == ";") {
                if (is_stop) fail(start, "stop must be the last instruction");
                ++expected;
                continue;
            }
            if (sep.kind == Tok::punct && sep.text == ".") {
                if (!is_stop) fail(sep, "program must end with 'stop.'");
                break;
            }
            fail(sep, "expected ';' or '.' after instruction, found " + describe(sep));
        }
        if (peek().kind != Tok::end) fail(peek(), "unexpected text after 'stop.'");
        return p;
    }

private:
    Signature signature_header() {
        next();
        expect_punct("(");
        Signature sig;
        sig.constants = to_size(expect(Tok::number, "constant count"));
        expect_punct(";");
        sig.op_arities = number_list(";");
        expect_punct(";");
        sig.rel_arities = number_list(")");
        expect_punct(")");
        for (auto a : sig.op_arities)
            if (a == 0) fail(peek(), "arities must be >= 1");
        for (auto a : sig.rel_arities)
            if (a == 0) fail(peek(), "arities must be >= 1");
        return sig;
    }

    std::vector<std::size_t> number_list(const std::string& terminator) {
        std::vector<std::size_t> out;
        if (peek_punct(terminator)) return out;
        out.push_back(to_size(expect(Tok::number, "arity")));
        while (peek_punct(",")) {
            next();
            out.push_back(to_size(expect(Tok::number, "arity")));
        }
        return out;
    }

    Instruction instruction() {
        const Token& t = peek();
        if (t.kind != Tok::word) fail(t, "expected an instruction, found " + describe(t));
        if (t.text == "stop") {
            next();
            return instr::Stop{};
        }
        if (t.text == "goto") {
            next();
            Label a = label();
            expect_word("or");
            expect_word("goto");
            Label b = label();
            return instr::NdGoto{a, b};
        }
        if (t.text == "if") return conditional();
        if (t.text == "Z") {
            IIndex dst = bracket_index();
            expect_punct(":=");
            expect_word("Z");
            IIndex src = bracket_index();
            return instr::CopyIndirect{dst, src};
        }
        if (is_reg(t, 'I')) {
            IIndex j = reg_index(next(), 'I');
            expect_punct(":=");
            if (peek().kind == Tok::number) {
                const Token& one = next();
                if (one.text != "1") fail(one, "index registers can only be set to 1");
                return instr::IdxSetOne{j};
            }
            const Token& same = next();
            if (!is_reg(same, 'I')) fail(same, "expected I" + std::to_string(j) + " + 1");
            if (reg_index(same, 'I') != j) fail(same, "increment must read the register it writes");
            expect_punct("+");
            const Token& one = expect(Tok::number, "1");
            if (one.text != "1") fail(one, "index registers can only be incremented by 1");
            return instr::IdxInc{j};
        }
        if (is_reg(t, 'Z')) {
            ZIndex dst = reg_index(next(), 'Z');
            expect_punct(":=");
            const Token& rhs = peek();
            if (rhs.kind == Tok::word && rhs.text == "nu") {
                next();
                expect_punct("[");
                expect_word("O");
                expect_punct("]");
                query_prefix();
                return instr::NuAssign{dst};
            }
            if (is_reg(rhs, 'f')) {
                std::size_t op = reg_index(next(), 'f');
                expect_punct("^");
                const Token& arity_tok = expect(Tok::number, "arity");
                auto args = z_list();
                if (to_size(arity_tok) != args.size()) {
                    fail(arity_tok, "arity " + arity_tok.text + " does not match " + std::to_string(args.size()) +
                                        " arguments");
                }
                return instr::Compute{dst, op, std::move(args)};
            }
            if (is_reg(rhs, 'c')) {
                std::size_t c = reg_index(next(), 'c');
                if (peek_punct("^")) {
                    next();
                    const Token& zero = expect(Tok::number, "0");
                    if (zero.text != "0") fail(zero, "constants have arity 0");
                }
                return instr::SetConst{dst, c};
            }
            if (is_reg(rhs, 'Z')) return instr::CopyDirect{dst, reg_index(next(), 'Z')};
            fail(rhs, "expected f, c, Z or nu on the right of ':=', found " + describe(rhs));
        }
        fail(t, "unknown instruction starting with " + describe(t));
    }

    Instruction conditional() {
        next();  // if
        const Token& t = peek();
        if (t.kind == Tok::punct && t.text == "(") {
            query_prefix();
            expect_word("in");
            expect_word("O");
            auto [a, b] = branch_targets();
            return instr::OracleBranch{a, b};
        }
        if (is_reg(t, 'r')) {
            std::size_t rel = reg_index(next(), 'r');
            expect_punct("^");
            const Token& arity_tok = expect(Tok::number, "arity");
            auto args = z_list();
            if (to_size(arity_tok) != args.size()) {
                fail(arity_tok, "arity " + arity_tok.text + " does not match " + std::to_string(args.size()) +
                                    " arguments");
            }
            auto [a, b] = branch_targets();
            return instr::RelBranch{rel, std::move(args), a, b};
        }
        if (is_reg(t, 'I')) {
            IIndex lhs = reg_index(next(), 'I');
            expect_punct("=");
            const Token& r = next();
            if (!is_reg(r, 'I')) fail(r, "expected an index register");
            IIndex rhs = reg_index(r, 'I');
            auto [a, b] = branch_targets();
            return instr::IdxBranch{lhs, rhs, a, b};
        }
        fail(t, "expected a relation, index comparison or oracle query after 'if'");
    }

    std::pair<Label, Label> branch_targets() {
        expect_word("then");
        expect_word("goto");
        Label a = label();
        expect_word("else");
        expect_word("goto");
        Label b = label();
        return {a, b};
    }

    // The fixed text (Z1,...,Z[I1]).
    void query_prefix() {
        expect_punct("(");
        const Token& z1 = next();
        if (!is_reg(z1, 'Z') || reg_index(z1, 'Z') != 1) fail(z1, "query prefix must start with Z1");
        expect_punct(",");
        expect_punct("...");
        expect_punct(",");
        expect_word("Z");
        const Token& open = peek();
        if (bracket_index() != 1) fail(open, "query prefix must end with Z[I1]");
        expect_punct(")");
    }

    std::vector<ZIndex> z_list() {
        expect_punct("(");
        std::vector<ZIndex> out;
        while (true) {
            const Token& z = next();
            if (!is_reg(z, 'Z')) fail(z, "expected a Z-register, found " + describe(z));
            out.push_back(reg_index(z, 'Z'));
            if (peek_punct(",")) {
                next();
                continue;
            }
            expect_punct(")");
            return out;
        }
    }

    IIndex bracket_index() {
        if (peek().kind == Tok::word && peek().text == "Z") next();
        expect_punct("[");
        const Token& i = next();
        if (!is_reg(i, 'I')) fail(i, "expected an index register inside brackets");
        IIndex j = reg_index(i, 'I');
        expect_punct("]");
        return j;
    }

    Label label() {
        const Token& t = expect(Tok::number, "label");
        Label l = to_size(t);
        if (l == 0) fail(t, "labels start at 1");
        return l;
    }

    static bool is_reg(const Token& t, char prefix) {
        if (t.kind != Tok::word || t.text.size() < 2 || t.text[0] != prefix) return false;
        for (std::size_t i = 1; i < t.text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) return false;
        }
        return true;
    }

    std::size_t reg_index(const Token& t, char prefix) {
        if (!is_reg(t, prefix)) fail(t, std::string("expected ") + prefix + "<n>, found " + describe(t));
        std::size_t v = 0;
        auto res = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), v);
        if (res.ec != std::errc{}) fail(t, "index too large");
        if (v == 0) fail(t, "indices start at 1");
        return v;
    }

    std::size_t to_size(const Token& t) {
        std::size_t v = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc{}) fail(t, "number too large");
        return v;
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::end) ++pos_;
        return t;
    }
    bool peek_punct(const std::string& p) const { return peek().kind == Tok::punct && peek().text == p; }
    bool peek_word(const std::string& w) const { return peek().kind == Tok::word && peek().text == w; }

    const Token& expect(Tok kind, const std::string& what) {
        const Token& t = next();
        if (t.kind != kind) fail(t, "expected " + what + ", found " + describe(t));
        return t;
    }
    void expect_punct(const std::string& p) {
        const Token& t = next();
        if (t.kind != Tok::punct || t.text != p) fail(t, "expected '" + p + "', found " + describe(t));
    }
    void expect_word(const std::string& w) {
        const Token& t = next();
        if (t.kind != Tok::word || t.text != w) fail(t, "expected '" + w + "', found " + describe(t));
    }

    static std::string describe(const Token& t) {
        return t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'";
    }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.column, msg);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string z_args(const std::vector<ZIndex>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += "Z" + std::to_string(args[i]);
    }
    return out + ")";
}

std::string targets(Label a, Label b) {
    return " then goto " + std::to_string(a) + " else goto " + std::to_string(b);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

Program parse_program(std::string_view text) {
    Lexer lexer(text);
    Parser parser(lexer.run());
    return parser.program();
}

std::string format_instruction(const Instruction& ins) {
    auto n = [](std::size_t v) { return std::to_string(v); };
    return std::visit(
        overloaded{
            [&](const instr::Compute& c) {
                return "Z" + n(c.dst) + " := f" + n(c.op) + "^" + n(c.args.size()) + z_args(c.args);
            },
            [&](const instr::SetConst& c) { return "Z" + n(c.dst) + " := c" + n(c.constant) + "^0"; },
            [&](const instr::CopyDirect& c) { return "Z" + n(c.dst) + " := Z" + n(c.src); },
            [&](const instr::CopyIndirect& c) { return "Z[I" + n(c.dst) + "] := Z[I" + n(c.src) + "]"; },
            [&](const instr::RelBranch& r) {
                return "if r" + n(r.rel) + "^" + n(r.args.size()) + z_args(r.args) + targets(r.then_label, r.else_label);
            },
            [&](const instr::IdxBranch& b) {
                return "if I" + n(b.lhs) + " = I" + n(b.rhs) + targets(b.then_label, b.else_label);
            },
            [&](const instr::IdxSetOne& s) { return "I" + n(s.index) + " := 1"; },
            [&](const instr::IdxInc& s) { return "I" + n(s.index) + " := I" + n(s.index) + " + 1"; },
            [](const instr::Stop&) { return std::string("stop"); },
            [&](const instr::OracleBranch& o) {
                return "if (Z1,...,Z[I1]) in O" + targets(o.then_label, o.else_label);
            },
            [&](const instr::NuAssign& v) { return "Z" + n(v.dst) + " := nu[O](Z1,...,Z[I1])"; },
            [&](const instr::NdGoto& g) { return "goto " + n(g.first) + " or goto " + n(g.second); },
        },
        ins);
}

std::string format_program(const Program& p) {
    std::ostringstream out;
    if (p.declared) out << "signature " << format_signature(*p.declared) << '\n';
    for (std::size_t i = 0; i < p.instructions.size(); ++i) {
        out << (i + 1) << ": " << format_instruction(p.instructions[i]);
        out << (i + 1 == p.instructions.size() ? "." : ";\n");
    }
    return out.str();
}

} // namespace bssram
