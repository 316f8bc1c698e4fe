#include "bssram/encodings.hpp"

#include <boost/multiprecision/integer.hpp>

#include "bssram/error.hpp"

namespace bssram {

Integer cantor(const Integer& a, const Integer& b) {
    if (a < 1 || b < 1) throw Error("cantor pairing is defined for a, b >= 1");
    const Integer s = a + b;
    return (s * s + 3 * b + a) / 2;
}

// ca(a, b) = s(s+1)/2 + b with s = a + b and 1 <= b <= s - 1.
std::optional<std::pair<Integer, Integer>> cantor_inv(const Integer& c) {
    if (c < 4) return std::nullopt;
    // Largest s with s(s+1)/2 < c.
    const Integer disc = 8 * c + 1;
    Integer s = (boost::multiprecision::sqrt(disc) - 1) / 2;
    while (s * (s + 1) / 2 >= c) --s;
    while ((s + 1) * (s + 2) / 2 < c) ++s;
    const Integer b = c - s * (s + 1) / 2;
    if (b > s - 1) return std::nullopt;
    return std::make_pair(s - b, b);
}

std::string bin(const Integer& n) {
    if (n < 1) throw Error("bin is defined for n >= 1");
    std::string out;
    for (Integer v = n; v > 0; v >>= 1) out.push_back(bit_test(v, 0) ? '1' : '0');
    return {out.rbegin(), out.rend()};
}

std::optional<Integer> bin_inv(std::string_view word) {
    if (word.empty() || word.front() != '1') return std::nullopt;
    Integer v = 0;
    for (char ch : word) {
        if (ch != '0' && ch != '1') return std::nullopt;
        v = 2 * v + (ch - '0');
    }
    return v;
}

BitTape in_star(std::string_view word) {
    if (word.empty()) throw Error("in_star needs a nonempty word");
    BitTape t;
    t.nu1 = 2 * word.size();
    t.tail = 1;
    // x_1 is the last character of the word.
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it != '0' && *it != '1') throw Error("in_star words are over {0,1}");
        t.prefix.push_back(0);
        t.prefix.push_back(*it - '0');
    }
    return t;
}

std::optional<std::string> out_star(const BitTape& tape) {
    auto check = [](int v) {
        if (v != 0 && v != 1) throw Error("out_star reads a tape over {0,1}");
        return v;
    };
    check(tape.tail);
    for (int v : tape.prefix) check(v);
    std::string bits;  // x_1 x_2 ... in tape order
    for (std::size_t i = 1;; ++i) {
        const std::size_t odd = 2 * i - 1;
        if (odd > tape.prefix.size() && tape.tail == 0) return std::nullopt;
        if (tape.at(odd) == 1) break;
        bits.push_back(tape.at(odd + 1) == 1 ? '1' : '0');
    }
    if (bits.empty()) return std::nullopt;
    return std::string(bits.rbegin(), bits.rend());
}

BitTape in_nat(const Integer& m) { return in_star(bin(m)); }

std::optional<Integer> out_nat(const BitTape& tape) {
    auto w = out_star(tape);
    if (!w) return std::nullopt;
    return bin_inv(*w);
}

BitTape bit_tape_of(const Structure& bit, std::uint64_t nu1, const Tuple& prefix, const Element& tail) {
    auto value = [&](const Element& e) {
        const std::string r = bit.render(e);
        if (r == "0") return 0;
        if (r == "1") return 1;
        throw Error("element '" + r + "' is not a bit");
    };
    BitTape t;
    t.nu1 = nu1;
    for (const auto& e : prefix) t.prefix.push_back(value(e));
    t.tail = value(tail);
    return t;
}

namespace {

enum class Tok { zero, one, neg, conj, disj, bicond, open, close };

std::optional<std::vector<Tok>> tokenize(std::string_view s) {
    std::vector<Tok> out;
    std::size_t i = 0;
    auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
    while (i < s.size()) {
        const char ch = s[i];
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
            ++i;
            continue;
        }
        struct Lit {
            std::string_view text;
            Tok tok;
        };
        static constexpr Lit lits[] = {
            {"0", Tok::zero},  {"1", Tok::one},          {"(", Tok::open},         {")", Tok::close},
            {"\xC2\xAC", Tok::neg}, {"~", Tok::neg},     {"!", Tok::neg},          {"\xE2\x88\xA7", Tok::conj},
            {"&", Tok::conj},  {"\xE2\x88\xA8", Tok::disj}, {"|", Tok::disj},     {"\xE2\x86\x94", Tok::bicond},
            {"<->", Tok::bicond},
        };
        bool matched = false;
        for (const auto& lit : lits) {
            if (starts(lit.text)) {
                out.push_back(lit.tok);
                i += lit.text.size();
                matched = true;
                break;
            }
        }
        if (!matched) return std::nullopt;
    }
    return out;
}

class InfixParser {
public:
    explicit InfixParser(const std::vector<Tok>& toks) : toks_(toks) {}

    bool formula(std::vector<BoolSym>& out) {
        if (pos_ >= toks_.size()) return false;
        switch (toks_[pos_++]) {
        case Tok::zero: out.push_back(BoolSym::zero); return true;
        case Tok::one: out.push_back(BoolSym::one); return true;
        case Tok::neg: out.push_back(BoolSym::neg); return formula(out);
        case Tok::open: {
            // The operator precedes both operands in prefix form; reserve its slot.
            const std::size_t slot = out.size();
            out.push_back(BoolSym::zero);
            if (!formula(out) || pos_ >= toks_.size()) return false;
            switch (toks_[pos_++]) {
            case Tok::conj: out[slot] = BoolSym::conj; break;
            case Tok::disj: out[slot] = BoolSym::disj; break;
            case Tok::bicond: out[slot] = BoolSym::bicond; break;
            default: return false;
            }
            if (!formula(out) || pos_ >= toks_.size()) return false;
            return toks_[pos_++] == Tok::close;
        }
        default: return false;
        }
    }

    bool at_end() const { return pos_ == toks_.size(); }

private:
    const std::vector<Tok>& toks_;
    std::size_t pos_ = 0;
};

} // namespace

PrefixFormula infix_to_prefix(std::string_view text) {
    auto toks = tokenize(text);
    if (!toks) return std::nullopt;
    InfixParser p(*toks);
    std::vector<BoolSym> out;
    if (!p.formula(out) || !p.at_end()) return std::nullopt;
    return out;
}

bool eval_boolean_prefix(const std::vector<BoolSym>& formula) {
    std::vector<bool> stack;
    for (auto it = formula.rbegin(); it != formula.rend(); ++it) {
        switch (*it) {
        case BoolSym::zero: stack.push_back(false); break;
        case BoolSym::one: stack.push_back(true); break;
        case BoolSym::neg:
            if (stack.empty()) throw Error("malformed prefix formula");
            stack.back() = !stack.back();
            break;
        default: {
            if (stack.size() < 2) throw Error("malformed prefix formula");
            const bool a = stack.back();
            stack.pop_back();
            const bool b = stack.back();
            stack.back() = *it == BoolSym::conj ? (a && b) : *it == BoolSym::disj ? (a || b) : (a == b);
        }
        }
    }
    if (stack.size() != 1) throw Error("malformed prefix formula");
    return stack.back();
}

std::string_view bool_sym_name(BoolSym s) {
    switch (s) {
    case BoolSym::zero: return "0";
    case BoolSym::one: return "1";
    case BoolSym::neg: return "not";
    case BoolSym::conj: return "and";
    case BoolSym::disj: return "or";
    case BoolSym::bicond: return "iff";
    }
    return "?";
}

std::string_view bool_sym_glyph(BoolSym s) {
    switch (s) {
    case BoolSym::zero: return "0";
    case BoolSym::one: return "1";
    case BoolSym::neg: return "\xC2\xAC";
    case BoolSym::conj: return "\xE2\x88\xA7";
    case BoolSym::disj: return "\xE2\x88\xA8";
    case BoolSym::bicond: return "\xE2\x86\x94";
    }
    return "?";
}

std::string format_prefix(const std::vector<BoolSym>& formula) {
    std::string out;
    for (auto s : formula) out += bool_sym_glyph(s);
    return out;
}

Tuple formula_input(std::string_view text, const Structure& bool_symbols) {
    auto pol = infix_to_prefix(text);
    Tuple out;
    if (!pol) {
        out.push_back(bool_symbols.parse_element("0"));
        return out;
    }
    for (auto s : *pol) out.push_back(bool_symbols.parse_element(bool_sym_name(s)));
    return out;
}

} // namespace bssram
