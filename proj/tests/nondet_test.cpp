#include <doctest.h>

#include <algorithm>

#include "bssram/error.hpp"
#include "bssram/nondet.hpp"
#include "bssram/parser.hpp"
#include "kit/kit.hpp"
#include "kit/properties.hpp"

using namespace bssram;

namespace {

using Index = std::vector<std::uint64_t>;

StructurePtr rationals() { return get_builtin_structure("rational-field-eq"); }

Tuple tape_window(const Configuration& c, std::size_t n) {
    Tuple out;
    for (std::size_t p = 1; p <= n; ++p) out.push_back(c.tape.get(p));
    return out;
}

// Every tuple over 1..n of length <= max_len, sorted by length then lex.
std::vector<Index> finite_listing(std::uint64_t n, std::size_t max_len) {
    std::vector<Index> out{{}};
    std::vector<Index> layer{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Index> next;
        for (const auto& t : layer) {
            for (std::uint64_t v = 1; v <= n; ++v) {
                next.push_back(t);
                next.back().push_back(v);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

std::uint64_t weight(const Index& t) {
    std::uint64_t w = 0;
    for (auto v : t) w += v;
    return w;
}

// Every tuple of positive integers with weight <= w, sorted by weight, length, lex.
std::vector<Index> weighted_listing(std::uint64_t w) {
    std::vector<Index> all{{}};
    std::vector<Index> frontier{{}};
    while (!frontier.empty()) {
        std::vector<Index> next;
        for (const auto& t : frontier) {
            for (std::uint64_t v = 1; weight(t) + v <= w; ++v) {
                next.push_back(t);
                next.back().push_back(v);
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end(), [](const Index& a, const Index& b) {
        if (weight(a) != weight(b)) return weight(a) < weight(b);
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return all;
}

void check_order(std::optional<std::uint64_t> alphabet, const std::vector<Index>& expected) {
    GuessEnumerator e(alphabet);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(i);
        REQUIRE(e.current() == expected[i]);
        CHECK(e.position() == i + 1);
        e.advance();
    }
}

void check_property(const kit::PropertyResult& r) {
    CHECK_MESSAGE(r.ok(), r.summary());
    CHECK(r.cases >= 200);
}

Accepted require_accepted(const SearchOutcome& o) {
    REQUIRE(std::holds_alternative<Accepted>(o));
    return std::get<Accepted>(o);
}

} // namespace

TEST_SUITE("nondet") {

TEST_CASE("guess input procedure") {
    const auto q = rationals();
    const Configuration c = input_i2(q->parse_tuple("5"), q->parse_tuple("1,2"), 2);
    CHECK(c.label == 1);
    CHECK(c.indices == std::vector<std::uint64_t>{1, 1});
    CHECK(kit::same_tuple(*q, tape_window(c, 5), q->parse_tuple("5,1,2,5,5")));

    const Configuration d = input_i2(q->parse_tuple("1,2"), q->parse_tuple("3"), 3);
    CHECK(d.indices == std::vector<std::uint64_t>{2, 1, 1});
    CHECK(kit::same_tuple(*q, tape_window(d, 4), q->parse_tuple("1,2,3,2")));
    CHECK(kit::same_tuple(*q, {d.tape.tail()}, q->parse_tuple("2")));

    const Tuple x = q->parse_tuple("4,6,7");
    CHECK(kit::same_configuration(*q, input_i2(x, {}, 2), input_i1(x, 2)));
    CHECK_THROWS_AS(input_i2({}, x, 2), Error);
}

TEST_CASE("guess order with a finite alphabet") {
    check_order(2, finite_listing(2, 7));
    check_order(3, finite_listing(3, 5));
    check_order(1, finite_listing(1, 20));
}

TEST_CASE("guess order with an unbounded alphabet") {
    const auto expected = weighted_listing(10);
    CHECK(expected.size() == 1024);
    check_order(std::nullopt, expected);
}

TEST_CASE("square root guessing") {
    const auto q = rationals();
    const Machine m(kit::load_program("nonneg-nd.bssram"), q);
    for (const char* text : {"4", "9/4", "0", "1/4"}) {
        CAPTURE(text);
        const Tuple x = q->parse_tuple(text);
        const auto a = require_accepted(search_nd(m, x, 10000, GuessMode::nd));
        const auto& w = std::get<NdWitness>(a.witness);
        const Element y = input_i2(x, w.guesses, m.k()).tape.get(2);
        const Element yy[] = {y, y};
        CHECK(kit::same_tuple(*q, {q->apply(3, yy)}, x));
        const auto replayed = replay_nd(m, x, w, 10000);
        REQUIRE(kit::halted(replayed));
        CHECK(std::get<Halted>(replayed).steps == a.steps);
    }
    for (const char* text : {"-1", "2"}) {
        CHECK(std::holds_alternative<NotWithinBudget>(search_nd(m, q->parse_tuple(text), 3000, GuessMode::nd)));
    }
}

TEST_CASE("digital guessing") {
    const auto b = get_builtin_structure("bit");
    // Halts iff the first guess equals x1.
    const Machine m(parse_program("1: if r1^2(Z1,Z2) then goto 2 else goto 1; 2: stop."), b);
    const auto a = require_accepted(search_nd(m, b->parse_tuple("1"), 100, GuessMode::dnd));
    // The empty guess leaves Z2 = x1 and is scheduled first.
    CHECK(std::get<NdWitness>(a.witness).guesses.empty());
    const Machine n(parse_program("1: if r1^2(Z1,Z2) then goto 1 else goto 2; 2: stop."), b);
    const auto c = require_accepted(search_nd(n, b->parse_tuple("1"), 100, GuessMode::dnd));
    CHECK(kit::same_tuple(*b, std::get<NdWitness>(c.witness).guesses, b->parse_tuple("0")));
}

TEST_CASE("branch search") {
    const auto b = get_builtin_structure("bit");
    const Tuple x = b->parse_tuple("0");
    const auto a = require_accepted(search_branch(Machine(parse_program("1: goto 2 or goto 1; 2: stop."), b), x, 10));
    CHECK(std::get<BranchWitness>(a.witness).choices == "0");
    CHECK(a.steps == 1);

    const Machine loop(parse_program("1: goto 1 or goto 1; 2: stop."), b);
    for (std::size_t depth = 0; depth <= 12; ++depth) {
        CHECK(std::holds_alternative<NotWithinBudget>(search_branch(loop, x, depth)));
    }

    const Machine branchy(kit::load_program("branchy.bssram"), b);
    const auto w = require_accepted(search_branch(branchy, x, 50));
    CHECK(std::get<BranchWitness>(w.witness).choices == "01");
    const auto replayed = replay_branch(branchy, x, std::get<BranchWitness>(w.witness), 50);
    REQUIRE(kit::halted(replayed));
    CHECK(std::get<Halted>(replayed).steps == w.steps);
    CHECK_FALSE(kit::halted(replay_branch(branchy, x, BranchWitness{"0"}, 50)));
}

TEST_CASE("nu search") {
    const auto q = rationals();
    const Machine m(kit::load_program("nu-squares.bssram"), q, std::nullopt, make_builtin_oracle("squares-pairs", q));
    const auto a = require_accepted(search_nu(m, q->parse_tuple("4"), 10));
    const auto& w = std::get<NuWitness>(a.witness);
    REQUIRE(w.choices.size() == 1);
    const Element y = w.choices[0].candidate.value;
    const Element yy[] = {y, y};
    CHECK(kit::same_tuple(*q, {q->apply(3, yy)}, q->parse_tuple("4")));
    CHECK(kit::halted(replay_nu(m, q->parse_tuple("4"), w, 10)));

    CHECK(std::holds_alternative<NotWithinBudget>(search_nu(m, q->parse_tuple("2"), 6)));

    const Machine u(kit::load_program("nu-squares.bssram"), q, std::nullopt, make_builtin_oracle("universal", q));
    const auto first = require_accepted(search_nu(u, q->parse_tuple("5"), 10));
    CHECK(kit::same_tuple(*q, {std::get<NuWitness>(first.witness).choices.at(0).candidate.value}, {q->enumerate(1)}));
}

TEST_CASE("nu replay rejects a false extension") {
    const auto q = rationals();
    const Machine m(kit::load_program("nu-squares.bssram"), q, std::nullopt, make_builtin_oracle("squares-pairs", q));
    NuWitness forged;
    forged.choices.push_back({1, q->parse_tuple("4"), NuCandidate{q->parse_element("3"), q->parse_tuple("3")}});
    CHECK_THROWS_AS(replay_nu(m, q->parse_tuple("4"), forged, 10), Error);
}

TEST_CASE("nu evaluation") {
    const auto q = rationals();
    const auto squares = make_builtin_oracle("squares-pairs", q);
    const auto found = eval_nu(*squares, *q, q->parse_tuple("4"), 50);
    std::vector<std::string> values;
    for (const auto& c : found) values.push_back(q->render(c.value));
    std::sort(values.begin(), values.end());
    CHECK(values == std::vector<std::string>{"-2", "2"});
    for (const auto& c : found) {
        Tuple full = q->parse_tuple("4");
        full.insert(full.end(), c.extension.begin(), c.extension.end());
        CHECK(squares->member(full));
    }

    const auto empty = make_builtin_oracle("empty", q);
    for (std::size_t bound = 1; bound <= 4; ++bound) CHECK(eval_nu(*empty, *q, q->parse_tuple("1"), bound).empty());

    const auto universal = make_builtin_oracle("universal", q);
    const auto all = eval_nu(*universal, *q, q->parse_tuple("7"), 6);
    REQUIRE(all.size() == 6);
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(kit::same_tuple(*q, {all[i].value}, {q->enumerate(i + 1)}));

    // Brute force over growing boxes of enumerator indices: -1 is index 3, 2 index 4, -2 index 5.
    const auto file = load_finite_oracle("4,2\n4,-1,0\n4,-2,1,1\n5,5\n", q);
    const OracleSet bare{"bare", file->member, nullptr};
    auto values_at = [&](std::size_t bound) {
        std::vector<std::string> seen;
        for (const auto& c : eval_nu(bare, *q, q->parse_tuple("4"), bound)) seen.push_back(q->render(c.value));
        return seen;
    };
    CHECK(values_at(2).empty());
    CHECK(values_at(4) == std::vector<std::string>{"-1", "2"});
    CHECK(values_at(5) == std::vector<std::string>{"-1", "2", "-2"});
    CHECK(eval_nu(*file, *q, q->parse_tuple("4"), 1).size() == 3);
}

TEST_CASE("nu lists grow by extension") {
    const auto q = rationals();
    const auto file = load_finite_oracle("0,1\n1,-1,0\n1,1\n0,0,1/2\n-1,2\n1,2,1\n0,-1,-1,1\n", q);
    const auto bare = std::make_shared<OracleSet>(OracleSet{"bare", file->member, nullptr});
    const std::vector<OraclePtr> oracles = {bare, file, make_builtin_oracle("squares-pairs", q),
                                            make_builtin_oracle("universal", q), make_builtin_oracle("empty", q)};
    kit::Rng rng(0x9301);
    std::size_t cases = 0;
    for (; cases < 240; ++cases) {
        const auto& o = oracles[cases % oracles.size()];
        const Tuple prefix = kit::random_input(rng, *q, 1, 6);
        const std::size_t bound = 1 + rng() % 3;
        const auto small = eval_nu(*o, *q, prefix, bound);
        const auto large = eval_nu(*o, *q, prefix, bound + 1);
        REQUIRE(small.size() <= large.size());
        for (std::size_t i = 0; i < small.size(); ++i) {
            CHECK(kit::same_tuple(*q, {small[i].value}, {large[i].value}));
        }
    }
    CHECK(cases >= 200);
}

TEST_CASE("halting comparison") {
    const auto q = rationals();
    const Machine nd(kit::load_program("nonneg-nd.bssram"), q);
    const Machine semi(kit::load_program("nonneg-semi.bssram"), q, std::nullopt,
                       make_builtin_oracle("nonneg-singletons", q));
    const std::vector<Tuple> inputs = {q->parse_tuple("4"), q->parse_tuple("9/4"), q->parse_tuple("-1"),
                                       q->parse_tuple("2")};
    const auto rows = compare_halting(nd, Engine::nd, semi, Engine::deterministic, inputs, 10000);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].verdict == Verdict::agree);
    CHECK(rows[1].verdict == Verdict::agree);
    CHECK(rows[2].verdict == Verdict::both_unknown);
    CHECK(rows[3].verdict == Verdict::m2_only);
    CHECK(rows[3].accepted2);
    CHECK_FALSE(rows[3].accepted1);

    CHECK(compare_halting(nd, Engine::nd, semi, Engine::deterministic, {}, 100).empty());
    const Machine bits(parse_program("1: stop."), get_builtin_structure("bit"));
    CHECK_THROWS_AS(compare_halting(nd, Engine::nd, bits, Engine::deterministic, inputs, 10), Error);
}

TEST_CASE("engine selection") {
    const auto q = rationals();
    const auto b = get_builtin_structure("bit");
    CHECK(parse_engine("nd") == Engine::nd);
    CHECK(parse_engine("branch") == Engine::branch);
    CHECK_FALSE(parse_engine("dfs").has_value());
    for (Engine e : {Engine::deterministic, Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        CHECK(parse_engine(engine_name(e)) == e);
    }
    const Machine branchy(kit::load_program("branchy.bssram"), b);
    CHECK_THROWS_AS(check_engine(branchy, Engine::nd), Error);
    CHECK_THROWS_AS(check_engine(branchy, Engine::deterministic), Error);
    CHECK_NOTHROW(check_engine(branchy, Engine::branch));
    const Machine nu(kit::load_program("nu-squares.bssram"), q, std::nullopt, make_builtin_oracle("squares-pairs", q));
    CHECK_THROWS_AS(check_engine(nu, Engine::branch), Error);
    CHECK_NOTHROW(check_engine(nu, Engine::nu));
    const Machine peano(parse_program("1: stop."), get_builtin_structure("peano"));
    CHECK_THROWS_AS(check_engine(peano, Engine::dnd), Error);
    CHECK_NOTHROW(check_engine(peano, Engine::nd));
}

TEST_CASE("guessing and branching gadgets agree") {
    const auto b = get_builtin_structure("bit");
    std::vector<std::vector<int>> inputs;
    for (int len = 1; len <= 2; ++len) {
        for (int v = 0; v < (1 << len); ++v) {
            std::vector<int> x;
            for (int i = 0; i < len; ++i) x.push_back((v >> i) & 1);
            inputs.push_back(x);
        }
    }
    std::size_t accepting = 0;
    for (const auto& g : kit::gadget_family(3)) {
        const Machine guessing(kit::gadget_guessing(g), b);
        const Machine branching(kit::gadget_branching(g), b);
        for (const auto& bits : inputs) {
            Tuple x;
            for (int v : bits) x.push_back(b->enumerate(v + 1));
            const bool expected = kit::gadget_accepts(g, bits);
            CHECK(kit::accepted(search_nd(guessing, x, 400, GuessMode::dnd)) == expected);
            CHECK(kit::accepted(search_branch(branching, x, 400)) == expected);
            accepting += expected;
        }
    }
    CHECK(accepting > 0);
}

TEST_CASE("deterministic runs embed in every engine") { check_property(kit::prop_engine_embedding_random(0x9302, 200)); }

TEST_CASE("search budget monotonicity") {
    for (Engine e : {Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        CAPTURE(engine_name(e));
        check_property(kit::prop_search_budget_monotone(e, 0x9310 + static_cast<int>(e), 200));
    }
}

TEST_CASE("search determinism") {
    for (Engine e : {Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        CAPTURE(engine_name(e));
        check_property(kit::prop_search_deterministic(e, 0x9320 + static_cast<int>(e), 200));
    }
}

TEST_CASE("search witnesses replay") {
    for (Engine e : {Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        CAPTURE(engine_name(e));
        check_property(kit::prop_search_replay(e, 0x9330 + static_cast<int>(e), 200));
    }
}

} // TEST_SUITE
