#include <doctest.h>

#include "bssram/error.hpp"
#include "bssram/machine.hpp"
#include "bssram/parser.hpp"
#include "kit/kit.hpp"
#include "kit/properties.hpp"

using namespace bssram;

namespace {

StructurePtr rationals() { return get_builtin_structure("rational-field-eq"); }

Machine decider() {
    const auto q = rationals();
    return Machine(kit::load_program("nonneg-decider.bssram"), q, std::nullopt,
                   make_builtin_oracle("nonneg-singletons", q));
}

Tuple tape_window(const Configuration& c, std::size_t n) {
    Tuple out;
    for (std::size_t p = 1; p <= n; ++p) out.push_back(c.tape.get(p));
    return out;
}

void check_property(const kit::PropertyResult& r) {
    CHECK_MESSAGE(r.ok(), r.summary());
    CHECK(r.cases >= 200);
}

} // namespace

TEST_SUITE("machine") {

TEST_CASE("input and output procedures") {
    const auto q = rationals();
    const Configuration c = input_i1(q->parse_tuple("4,6,7"), 2);
    CHECK(c.label == 1);
    CHECK(c.indices == std::vector<std::uint64_t>{3, 1});
    CHECK(kit::same_tuple(*q, tape_window(c, 5), q->parse_tuple("4,6,7,7,7")));
    CHECK(kit::same_tuple(*q, {c.tape.tail()}, q->parse_tuple("7")));

    const Configuration single = input_i1(q->parse_tuple("5"), 1);
    CHECK(single.indices == std::vector<std::uint64_t>{1});
    CHECK(kit::same_tuple(*q, tape_window(single, 3), q->parse_tuple("5,5,5")));
    CHECK_THROWS_AS(input_i1({}, 1), Error);

    Configuration out{7, {1, 2}, Tape(q->parse_tuple("0,0,6"), q->parse_element("7"))};
    CHECK(kit::same_tuple(*q, output_o(out), q->parse_tuple("0")));
    out.indices[0] = 5;
    CHECK(kit::same_tuple(*q, output_o(out), q->parse_tuple("0,0,6,7,7")));
    CHECK(kit::same_tuple(*q, query_prefix(out), q->parse_tuple("0,0,6,7,7")));
}

TEST_CASE("decider steps") {
    const Machine m = decider();
    const auto& q = m.structure();
    Configuration c = input_i1(q.parse_tuple("4,6,7"), m.k());
    c = step(m, c);
    CHECK(c.label == 2);
    CHECK(c.indices == std::vector<std::uint64_t>{3, 1});
    CHECK(kit::same_tuple(q, tape_window(c, 4), q.parse_tuple("4,0,7,7")));
    c = step(m, c);
    CHECK(c.label == 3);
    CHECK(c.indices == std::vector<std::uint64_t>{3, 2});
    // (4,0,7) is not a singleton, so the oracle test takes the else branch.
    c = step(m, c);
    CHECK(c.label == 5);

    const auto out = run(m, q.parse_tuple("4,6,7"), 100);
    const auto* h = std::get_if<Halted>(&out);
    REQUIRE(h != nullptr);
    CHECK(h->steps == 5);
    CHECK(h->final.label == m.program().stop_label());
    CHECK(kit::same_tuple(q, h->output, q.parse_tuple("0")));

    std::vector<Label> labels;
    for (const auto& t : trace(m, q.parse_tuple("4,6,7"), 100)) labels.push_back(t.label);
    CHECK(labels == std::vector<Label>{1, 2, 3, 5, 6, 7});
}

TEST_CASE("decider on singletons") {
    const Machine m = decider();
    const auto& q = m.structure();
    const struct {
        const char* in;
        const char* out;
    } cases[] = {{"4", "1"}, {"0", "1"}, {"1/3", "1"}, {"-4", "0"}, {"-1/2", "0"}, {"1,2", "0"}};
    for (const auto& t : cases) {
        CAPTURE(t.in);
        const auto out = run(m, q.parse_tuple(t.in), 100);
        REQUIRE(kit::halted(out));
        CHECK(kit::same_tuple(q, std::get<Halted>(out).output, q.parse_tuple(t.out)));
    }
}

TEST_CASE("gaussian sum decider") {
    const auto g = get_builtin_structure("gaussian-rational-field-eq");
    const Machine m(kit::load_program("sumn-c.bssram"), g);
    std::vector<Label> labels;
    for (const auto& t : trace(m, g->parse_tuple("1"), 100)) labels.push_back(t.label);
    CHECK(labels == std::vector<Label>{1, 2, 7, 8, 10, 11});
    const struct {
        const char* in;
        const char* out;
    } cases[] = {{"1", "1"}, {"i,1-i", "1"}, {"1/2,1/4,1/4", "1"}, {"3*i,2,3,6+i,7", "0"}, {"0", "0"}};
    for (const auto& t : cases) {
        CAPTURE(t.in);
        const auto out = run(m, g->parse_tuple(t.in), 1000);
        REQUIRE(kit::halted(out));
        CHECK(kit::same_tuple(*g, std::get<Halted>(out).output, g->parse_tuple(t.out)));
    }
}

TEST_CASE("finite machine output width") {
    const auto q = rationals();
    const Machine m(kit::load_program("sum3.bssram"), q, std::nullopt, nullptr, 1);
    const auto t = trace(m, q->parse_tuple("1,2,3"), 100);
    CHECK(t.size() == 3);
    const auto out = run(m, q->parse_tuple("1,2,3"), 100);
    REQUIRE(kit::halted(out));
    CHECK(kit::same_tuple(*q, std::get<Halted>(out).output, q->parse_tuple("6")));
    CHECK(std::get<Halted>(out).steps == 2);

    const Machine wide(kit::load_program("sum3.bssram"), q, std::nullopt, nullptr, 3);
    CHECK(kit::same_tuple(*q, std::get<Halted>(run(wide, q->parse_tuple("1,2,3"), 100)).output,
                          q->parse_tuple("6,2,3")));
}

TEST_CASE("stop-only program") {
    const auto b = get_builtin_structure("bit");
    const Machine m(parse_program("1: stop."), b);
    const auto t = trace(m, b->parse_tuple("1"), 100);
    CHECK(t.size() == 1);
    const auto out = run(m, b->parse_tuple("1"), 0);
    REQUIRE(kit::halted(out));
    CHECK(std::get<Halted>(out).steps == 0);
    Configuration c = input_i1(b->parse_tuple("1"), 1);
    CHECK(step_in_place(m, c) == StepEffect::fixed_point);
}

TEST_CASE("self loop exhausts every budget") {
    const auto q = rationals();
    const Machine m(kit::load_program("loop.bssram"), q);
    for (std::size_t budget : {0, 1, 7, 100, 1000000}) {
        const auto out = run(m, q->parse_tuple("1,2"), budget);
        REQUIRE(std::holds_alternative<BudgetExhausted>(out));
        CHECK(std::get<BudgetExhausted>(out).steps == budget);
        CHECK(std::get<BudgetExhausted>(out).last.label == 1);
    }
    CHECK(kit::halted(run(m, q->parse_tuple("1"), 10)));
}

TEST_CASE("machine construction errors") {
    const auto q = rationals();
    CHECK_THROWS_AS(Machine(kit::load_program("nonneg-decider.bssram"), q), Error);
    CHECK_THROWS_AS(Machine(kit::load_program("sum3.bssram"), q, std::nullopt, make_builtin_oracle("empty", q)),
                    Error);
    CHECK_THROWS_AS(Machine(kit::load_program("sumn-c.bssram"), q, 2), Error);
    CHECK_THROWS_AS(Machine(kit::load_program("sum3.bssram"), get_builtin_structure("bit")), Error);
    CHECK_THROWS_AS(Machine(kit::load_program("sum3.bssram"), q, std::nullopt, nullptr, 0), Error);
    CHECK(Machine(kit::load_program("sumn-c.bssram"), get_builtin_structure("gaussian-rational-field-eq"), 5).k() ==
          5);
}

TEST_CASE("nondeterministic instructions are rejected by step") {
    const auto q = rationals();
    const Machine m(parse_program("1: goto 2 or goto 2; 2: stop."), q);
    Configuration c = input_i1(q->parse_tuple("1"), m.k());
    CHECK_THROWS_AS(step_in_place(m, c), Error);
    CHECK_THROWS_AS(run(m, q->parse_tuple("1"), 10), Error);
}

TEST_CASE("configuration text") {
    const Machine m = decider();
    const auto& q = m.structure();
    CHECK(format_configuration(q, input_i1(q.parse_tuple("4,6,7"), 2)) == "1 | 3,1 | 4,6 | tail=7");
    CHECK(format_configuration(q, input_i1(q.parse_tuple("5"), 1)) == "1 | 1 |  | tail=5");
    const Configuration c = step(m, input_i1(q.parse_tuple("4,6,7"), 2));
    CHECK(format_configuration(q, c) == "2 | 3,1 | 4,0 | tail=7");
}

TEST_CASE("tape bound") {
    const auto q = rationals();
    Tape t(q->parse_tuple("1"), q->parse_element("0"));
    CHECK_THROWS_AS(t.set(kMaxTapePosition + 1, q->parse_element("1")), Error);
    t.set(10, q->parse_element("3"));
    CHECK(q->render(t.get(10)) == "3");
    CHECK(q->render(t.get(9)) == "0");
}

TEST_CASE("stop absorption") { check_property(kit::prop_stop_absorption(0x9201, 250)); }
TEST_CASE("step locality") { check_property(kit::prop_step_locality(0x9202, 250)); }
TEST_CASE("tail preservation") { check_property(kit::prop_tail_preservation(0x9203, 250)); }
TEST_CASE("input output roundtrip") { check_property(kit::prop_io_roundtrip(0x9204, 250)); }
TEST_CASE("run budget monotonicity") { check_property(kit::prop_run_budget_monotone(0x9205, 250)); }
TEST_CASE("run determinism") { check_property(kit::prop_run_deterministic(0x9206, 250)); }
TEST_CASE("step totality") { check_property(kit::prop_step_total(0x9207, 250)); }

} // TEST_SUITE
