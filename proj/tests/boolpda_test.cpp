#include <doctest.h>

#include "bssram/boolpda.hpp"
#include "bssram/encodings.hpp"
#include "bssram/parser.hpp"
#include "kit/kit.hpp"

using namespace bssram;

namespace {

constexpr std::size_t kBudget = 2000000;

StructurePtr symbols() { return get_builtin_structure("bool-symbols"); }

const Machine& pda() {
    static const Machine m(build_boolean_pda(), symbols());
    return m;
}

// Recursive descent over symbol codes 0 1 not and or iff; none when malformed.
std::optional<bool> parse_value(const std::vector<int>& syms, std::size_t& pos) {
    if (pos >= syms.size()) return std::nullopt;
    const int s = syms[pos++];
    if (s <= 1) return s == 1;
    const auto a = parse_value(syms, pos);
    if (!a) return std::nullopt;
    if (s == 2) return !*a;
    const auto b = parse_value(syms, pos);
    if (!b) return std::nullopt;
    return s == 3 ? (*a && *b) : s == 4 ? (*a || *b) : (*a == *b);
}

bool accepts(const Tuple& x) {
    const auto out = run(pda(), x, kBudget);
    const auto* h = std::get_if<Halted>(&out);
    if (!h) return false;
    REQUIRE(kit::same_tuple(pda().structure(), h->output, symbols()->parse_tuple("1")));
    return true;
}

} // namespace

TEST_SUITE("boolpda") {

TEST_CASE("shipped program matches the builder") {
    const Program built = build_boolean_pda();
    CHECK(kit::load_program("boolpda.bssram") == built);
    CHECK(parse_program(format_program(built)) == built);
    const auto report = validate_program(built, symbols()->signature());
    CHECK(report.ok());
    CHECK_FALSE(report.uses.oracle);
    CHECK_FALSE(report.uses.nu);
    CHECK_FALSE(report.uses.branch);
}

TEST_CASE("sample formulas") {
    const auto b = symbols();
    CHECK(accepts(formula_input("((1∧0)∨1)", *b)));
    CHECK_FALSE(accepts(formula_input("((1∧0)∧1)", *b)));
    CHECK(accepts(formula_input("¬0", *b)));
    CHECK_FALSE(accepts(formula_input("0", *b)));
    CHECK(accepts(formula_input("1", *b)));
    CHECK(accepts(formula_input("(0↔0)", *b)));
}

TEST_CASE("malformed text is not accepted") {
    const auto b = symbols();
    for (const char* text : {"(1∧0)∧1∨1", "1∧", "((1)", "(1 ^ 0)"}) {
        CAPTURE(text);
        CHECK(b->render_tuple(formula_input(text, *b)) == "0");
        CHECK_FALSE(accepts(formula_input(text, *b)));
    }
}

TEST_CASE("every formula of depth at most 2") {
    const auto b = symbols();
    std::size_t accepted = 0;
    for (const auto& f : kit::formulas_up_to(2)) {
        CAPTURE(f.infix);
        const bool a = accepts(formula_input(f.infix, *b));
        CHECK(a == f.value);
        accepted += a;
    }
    CHECK(accepted > 0);
}

TEST_CASE("random formulas of depth 3 to 5") {
    const auto b = symbols();
    kit::Rng rng(0x9501);
    for (int i = 0; i < 300; ++i) {
        const auto f = kit::random_formula(rng, 3 + i % 3);
        CAPTURE(f.infix);
        CHECK(accepts(formula_input(f.infix, *b)) == f.value);
    }
}

TEST_CASE("every symbol tuple of length at most 4") {
    const auto b = symbols();
    std::size_t tuples = 0;
    for (int len = 1; len <= 4; ++len) {
        std::vector<int> syms(len, 0);
        for (;;) {
            Tuple x;
            for (int s : syms) x.push_back(b->parse_element(bool_sym_name(static_cast<BoolSym>(s))));
            std::size_t pos = 0;
            const auto v = parse_value(syms, pos);
            const bool expected = v && pos == syms.size() && *v;
            CAPTURE(b->render_tuple(x));
            CHECK(accepts(x) == expected);
            ++tuples;
            int i = len - 1;
            while (i >= 0 && syms[i] == 5) syms[i--] = 0;
            if (i < 0) break;
            ++syms[i];
        }
    }
    CHECK(tuples == 6 + 36 + 216 + 1296);
}

TEST_CASE("foreign symbols are not accepted") {
    const auto b = symbols();
    for (const char* text : {"#", "q0", "Lambda", "and0", "1,#", "not,q0", "iff1"}) {
        CAPTURE(text);
        CHECK_FALSE(accepts(b->parse_tuple(text)));
    }
}

} // TEST_SUITE
