#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bssram/structure.hpp"

namespace bssram {

/// ca(a, b) = ((a+b)^2 + 3b + a) / 2 for a, b >= 1.
Integer cantor(const Integer& a, const Integer& b);
/// (a, b) with ca(a, b) = c, or none when c is not in the range of ca.
std::optional<std::pair<Integer, Integer>> cantor_inv(const Integer& c);

/// Binary word x_n ... x_1 of n >= 1, most significant bit first.
std::string bin(const Integer& n);
/// Partial inverse of bin: none for empty words, other characters, or a leading 0.
std::optional<Integer> bin_inv(std::string_view word);

/// A tape over {0,1}: I1 followed by the register prefix and a constant tail.
struct BitTape {
    std::uint64_t nu1 = 1;
    std::vector<int> prefix;
    int tail = 1;

    int at(std::size_t pos) const { return pos <= prefix.size() ? prefix[pos - 1] : tail; }
    bool operator==(const BitTape&) const = default;
};

/// In_*(x_n...x_1) = ((2n, 1, ...) . (0, x_1, 0, x_2, ..., 0, x_n, 1, 1, ...)).
BitTape in_star(std::string_view word);
/// Left inverse of in_star. Reads pairs (u_{2i-1}, u_{2i}) from i = 1 while the
/// odd slot is 0, collecting the even slots; stops at the first odd slot 1.
/// Returns none (the empty word Lambda) when the first odd slot is 1 or when
/// the pairs never end.
std::optional<std::string> out_star(const BitTape& tape);

BitTape in_nat(const Integer& m);
std::optional<Integer> out_nat(const BitTape& tape);

/// A configuration's tape read over the bit structure (elements "0" and "1").
BitTape bit_tape_of(const Structure& bit, std::uint64_t nu1, const Tuple& prefix, const Element& tail);

enum class BoolSym { zero, one, neg, conj, disj, bicond };

/// Polish prefix form of a formula; none marks a malformed formula.
using PrefixFormula = std::optional<std::vector<BoolSym>>;

/// Accepts 0, 1, negation (¬ ~ !) binding to the following operand, and
/// fully parenthesized binary (A op B) with op among ∧ &, ∨ |, ↔ <->.
/// Whitespace is ignored.
PrefixFormula infix_to_prefix(std::string_view text);

/// Truth value of a well-formed prefix formula; throws Error otherwise.
bool eval_boolean_prefix(const std::vector<BoolSym>& formula);

/// Symbol names as used by the bool-symbols structure: 0 1 not and or iff.
std::string_view bool_sym_name(BoolSym s);
/// Display form: 0 1 ¬ ∧ ∨ ↔.
std::string_view bool_sym_glyph(BoolSym s);
std::string format_prefix(const std::vector<BoolSym>& formula);

/// Machine input for a formula text over bool-symbols: the prefix tuple, or
/// (0) for a malformed formula, which input_i1 turns into ((1,...) . (0,0,...)).
Tuple formula_input(std::string_view text, const Structure& bool_symbols);

} // namespace bssram
