#include <doctest.h>

#include <set>

#include "bssram/encodings.hpp"
#include "bssram/error.hpp"
#include "kit/kit.hpp"

using namespace bssram;

namespace {

using S = BoolSym;

std::string word_of(unsigned v, int len) {
    std::string w;
    for (int i = len - 1; i >= 0; --i) w.push_back((v >> i) & 1 ? '1' : '0');
    return w;
}

} // namespace

TEST_SUITE("encodings") {

TEST_CASE("cantor pairing") {
    CHECK(cantor(1, 1) == 4);
    CHECK(cantor(2, 1) == 7);
    CHECK(cantor(1, 2) == 8);
    CHECK_FALSE(cantor_inv(5).has_value());
    CHECK_FALSE(cantor_inv(1).has_value());
    CHECK(cantor_inv(7) == std::optional<std::pair<Integer, Integer>>({2, 1}));
    CHECK_THROWS_AS(cantor(0, 1), Error);

    std::set<Integer> seen;
    for (int a = 1; a <= 100; ++a) {
        for (int b = 1; b <= 100; ++b) {
            const Integer c = cantor(a, b);
            CHECK(c == ((a + b) * (a + b) + 3 * b + a) / 2);
            seen.insert(c);
            CHECK(cantor_inv(c) == std::optional<std::pair<Integer, Integer>>({a, b}));
        }
    }
    CHECK(seen.size() == 10000);
    // Values below the smallest image of a pair with a + b = 101 are covered exactly.
    for (int c = 1; c <= 5000; ++c) CHECK(cantor_inv(c).has_value() == (seen.count(c) == 1));
}

TEST_CASE("cantor on large arguments") {
    const Integer a("123456789012345678901234567890");
    const Integer b("987654321098765432109876543210");
    CHECK(cantor_inv(cantor(a, b)) == std::optional<std::pair<Integer, Integer>>({a, b}));
}

TEST_CASE("binary words") {
    CHECK(bin(1) == "1");
    CHECK(bin(6) == "110");
    CHECK_FALSE(bin_inv("0110").has_value());
    CHECK_FALSE(bin_inv("").has_value());
    CHECK_FALSE(bin_inv("12").has_value());
    CHECK_THROWS_AS(bin(0), Error);
    for (int n = 1; n <= 65536; ++n) {
        const std::string w = bin(n);
        REQUIRE(w.front() == '1');
        REQUIRE(bin_inv(w) == std::optional<Integer>(n));
    }
}

TEST_CASE("word tapes") {
    const BitTape eleven = in_star("11");
    CHECK(eleven.nu1 == 4);
    CHECK(eleven.prefix == std::vector<int>{0, 1, 0, 1});
    CHECK(eleven.tail == 1);
    const BitTape t = in_star("110");
    CHECK(t.nu1 == 6);
    CHECK(t.prefix == std::vector<int>{0, 0, 0, 1, 0, 1});
    CHECK(t.at(7) == 1);
    CHECK(out_star(in_star("101")) == std::optional<std::string>("101"));
    CHECK_THROWS_AS(in_star(""), Error);
    CHECK_THROWS_AS(in_star("102"), Error);
}

TEST_CASE("empty word markers") {
    CHECK_FALSE(out_star(BitTape{1, {1, 0}, 0}).has_value());
    CHECK_FALSE(out_star(BitTape{1, {}, 1}).has_value());
    // Pairs that never close.
    CHECK_FALSE(out_star(BitTape{1, {0, 1}, 0}).has_value());
    CHECK(out_star(BitTape{1, {0, 1, 0, 0, 1}, 0}) == std::optional<std::string>("01"));
}

TEST_CASE("word tapes roundtrip") {
    std::size_t words = 0;
    for (int len = 1; len <= 12; ++len) {
        for (unsigned v = 0; v < (1u << len); ++v) {
            const std::string w = word_of(v, len);
            const BitTape t = in_star(w);
            REQUIRE(t.nu1 == 2 * w.size());
            // Even slots hold x_1..x_n, the last character first.
            for (std::size_t i = 1; i <= w.size(); ++i) {
                REQUIRE(t.at(2 * i - 1) == 0);
                REQUIRE(t.at(2 * i) == w[w.size() - i] - '0');
            }
            REQUIRE(out_star(t) == std::optional<std::string>(w));
            ++words;
        }
    }
    CHECK(words == 8190);
}

TEST_CASE("natural tapes") {
    CHECK(in_nat(1) == in_star("1"));
    CHECK(out_nat(in_nat(6)) == std::optional<Integer>(6));
    CHECK_FALSE(out_nat(BitTape{1, {1}, 1}).has_value());
    CHECK_FALSE(out_nat(in_star("011")).has_value());
    for (int m = 1; m <= 2000; ++m) REQUIRE(out_nat(in_nat(m)) == std::optional<Integer>(m));
}

TEST_CASE("bit tapes from configurations") {
    const auto b = get_builtin_structure("bit");
    const BitTape t = bit_tape_of(*b, 6, b->parse_tuple("0,0,0,1,0,1"), b->parse_element("1"));
    CHECK(t == in_star("110"));
    CHECK_THROWS_AS(bit_tape_of(*get_builtin_structure("peano"), 1, {}, Element{Integer(3)}), Error);
}

TEST_CASE("infix to prefix") {
    CHECK(infix_to_prefix("((1∧0)∨1)") == PrefixFormula({S::disj, S::conj, S::one, S::zero, S::one}));
    CHECK_FALSE(infix_to_prefix("(1∧0)∧1∨1").has_value());
    CHECK(infix_to_prefix("0") == PrefixFormula({S::zero}));
    CHECK(infix_to_prefix(" ( ~1 <-> !0 ) ") == PrefixFormula({S::bicond, S::neg, S::one, S::neg, S::zero}));
    CHECK(infix_to_prefix("(1 & (0 | 1))") == PrefixFormula({S::conj, S::one, S::disj, S::zero, S::one}));
    CHECK(infix_to_prefix("¬¬1") == PrefixFormula({S::neg, S::neg, S::one}));
    for (const char* bad : {"", "()", "(1)", "1 & 0", "(1 & 0", "1 & 0)", "(1 & 0))", "2", "(1 ^ 0)", "¬", "11"}) {
        CAPTURE(bad);
        CHECK_FALSE(infix_to_prefix(bad).has_value());
    }
}

TEST_CASE("prefix evaluation") {
    const std::vector<S> long_formula = {S::conj, S::disj, S::conj, S::zero, S::one, S::neg, S::bicond, S::one, S::zero,
                                         S::disj, S::neg, S::conj, S::zero, S::one, S::bicond, S::zero, S::zero};
    CHECK(eval_boolean_prefix(long_formula));
    CHECK_FALSE(eval_boolean_prefix({S::zero}));
    CHECK(eval_boolean_prefix({S::neg, S::zero}));
    CHECK_THROWS_AS(eval_boolean_prefix({}), Error);
    CHECK_THROWS_AS(eval_boolean_prefix({S::conj, S::one}), Error);
    CHECK_THROWS_AS(eval_boolean_prefix({S::one, S::one}), Error);
    CHECK(format_prefix({S::disj, S::conj, S::one, S::zero, S::one}) == "∨∧101");
}

TEST_CASE("machine input of a formula") {
    const auto b = get_builtin_structure("bool-symbols");
    CHECK(b->render_tuple(formula_input("((1∧0)∨1)", *b)) == "or,and,1,0,1");
    CHECK(b->render_tuple(formula_input("(1∧0)∧1∨1", *b)) == "0");
    for (S s : {S::zero, S::one, S::neg, S::conj, S::disj, S::bicond}) {
        CHECK(b->render(b->parse_element(std::string(bool_sym_name(s)))) == bool_sym_name(s));
    }
}

TEST_CASE("prefix evaluation agrees with infix trees") {
    kit::Rng rng(0x9401);
    std::size_t cases = 0;
    for (; cases < 500; ++cases) {
        const kit::Formula f = kit::random_formula(rng, static_cast<int>(rng() % 7));
        CAPTURE(f.infix);
        const auto prefix = infix_to_prefix(f.infix);
        REQUIRE(prefix.has_value());
        CHECK(eval_boolean_prefix(*prefix) == f.value);
    }
    CHECK(cases == 500);
}

TEST_CASE("every small formula") {
    const auto all = kit::formulas_up_to(2);
    CHECK(all.size() == 786);
    for (const auto& f : all) {
        const auto prefix = infix_to_prefix(f.infix);
        REQUIRE(prefix.has_value());
        CHECK(eval_boolean_prefix(*prefix) == f.value);
    }
}

} // TEST_SUITE
