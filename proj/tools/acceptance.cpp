// Acceptance run: one PASS/FAIL line per criterion, exact tolerances.
//
// Exit status is 0 when every criterion passes except those listed as
// unattainable, which still print FAIL together with what was checked.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bssram/boolpda.hpp"
#include "bssram/encodings.hpp"
#include "bssram/machine.hpp"
#include "bssram/nondet.hpp"
#include "bssram/oracle.hpp"
#include "bssram/parser.hpp"
#include "kit/kit.hpp"
#include "kit/properties.hpp"

using namespace bssram;

namespace {

// The exhaustive depth-4 formula corpus has about 1e13 members.
const std::set<int> kUnattainable = {5};

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

std::string tuple_text(const Structure& s, const Tuple& t) { return "(" + s.render_tuple(t) + ")"; }

std::vector<Label> labels_of(const std::vector<Configuration>& configs) {
    std::vector<Label> out;
    for (const auto& c : configs) out.push_back(c.label);
    return out;
}

bool halts_with(const Structure& s, const RunOutcome& o, const Tuple& expected) {
    const auto* h = std::get_if<Halted>(&o);
    return h && kit::same_tuple(s, h->output, expected);
}

Check oracle_decider() {
    Check c;
    const auto q = get_builtin_structure("rational-field-eq");
    const Machine m(kit::load_program("nonneg-decider.bssram"), q, std::nullopt,
                    make_builtin_oracle("nonneg-singletons", q));
    const Tuple x = q->parse_tuple("4,6,7");
    const auto out = run(m, x, 100);
    c.expect(halts_with(*q, out, q->parse_tuple("0")), "(4,6,7) halts with (0): " + kit::describe(*q, out));
    const auto labels = labels_of(trace(m, x, 100));
    c.expect(labels == std::vector<Label>{1, 2, 3, 5, 6, 7}, "label sequence 1,2,3,5,6,7");
    c.expect(halts_with(*q, run(m, q->parse_tuple("4"), 100), q->parse_tuple("1")), "(4) halts with (1)");
    c.expect(halts_with(*q, run(m, q->parse_tuple("-4"), 100), q->parse_tuple("0")), "(-4) halts with (0)");
    c.note("(4,6,7) -> (0) via labels 1,2,3,5,6,7; (4) -> (1); (-4) -> (0)");
    return c;
}

Check gaussian_sum_decider() {
    Check c;
    const auto g = get_builtin_structure("gaussian-rational-field-eq");
    const Machine m(kit::load_program("sumn-c.bssram"), g);
    c.expect(m.k() == 3, "three index registers");
    const struct {
        const char* input;
        const char* output;
    } cases[] = {{"1", "1"}, {"1/2,1/2", "1"}, {"3*i,2,3,6+i,7", "0"}};
    for (const auto& t : cases) {
        const auto out = run(m, g->parse_tuple(t.input), 1000);
        c.expect(halts_with(*g, out, g->parse_tuple(t.output)),
                 std::string("(") + t.input + ") -> (" + t.output + "): " + kit::describe(*g, out));
    }
    // Start configuration: (1 . (5,1,1) . (3i,2,3,6+i,7,7,7,...)).
    const Configuration start = input_i1(g->parse_tuple("3*i,2,3,6+i,7"), m.k());
    c.expect(start.label == 1, "start label 1");
    c.expect(start.indices == std::vector<std::uint64_t>{5, 1, 1}, "start indices (5,1,1)");
    Tuple tape;
    for (std::size_t p = 1; p <= 8; ++p) tape.push_back(start.tape.get(p));
    c.expect(kit::same_tuple(*g, tape, g->parse_tuple("3*i,2,3,6+i,7,7,7,7")), "start tape 3i,2,3,6+i,7,7,7,...");
    c.expect(kit::same_tuple(*g, {start.tape.tail()}, g->parse_tuple("7")), "tail 7");
    c.note("start " + format_configuration(*g, start) + "; outputs (1),(1),(0)");
    return c;
}

Check square_root_guessing() {
    Check c;
    const auto q = get_builtin_structure("rational-field-eq");
    const Machine m(kit::load_program("nonneg-nd.bssram"), q);
    constexpr std::size_t kBudget = 10000;
    for (const char* text : {"4", "9/4", "0"}) {
        const Tuple x = q->parse_tuple(text);
        const auto outcome = search_nd(m, x, kBudget, GuessMode::nd);
        const auto* a = std::get_if<Accepted>(&outcome);
        c.expect(a != nullptr, std::string("accepts (") + text + ")");
        if (!a) continue;
        const auto& w = std::get<NdWitness>(a->witness);
        // The first guess is register n+1 of the guessing input; for the empty tuple it is the tail.
        const Element y = input_i2(x, w.guesses, m.k()).tape.get(x.size() + 1);
        const Element yy[] = {y, y};
        const Element square = q->apply(3, yy);
        c.expect(kit::same_tuple(*q, {square}, x), std::string("first guess squares to ") + text);
        const auto replayed = replay_nd(m, x, w, kBudget);
        const auto* h = std::get_if<Halted>(&replayed);
        c.expect(h && h->steps == a->steps, std::string("replay of (") + text + ") halts in the recorded steps");
        c.note(std::string("(") + text + ") guesses " + tuple_text(*q, w.guesses) + " first guess " + q->render(y) +
               " in " + std::to_string(a->steps) + " steps");
    }
    for (const char* text : {"-1", "2"}) {
        const auto outcome = search_nd(m, q->parse_tuple(text), kBudget, GuessMode::nd);
        c.expect(std::holds_alternative<NotWithinBudget>(outcome), std::string("(") + text + ") not within 10^4");
    }
    c.note("(-1), (2): not within budget 10^4");
    return c;
}

Check encoding_suite() {
    Check c;
    c.expect(cantor(1, 1) == 4 && cantor(2, 1) == 7 && cantor(1, 2) == 8, "cantor(1,1)=4, (2,1)=7, (1,2)=8");
    std::set<Integer> seen;
    bool inverse = true;
    for (int a = 1; a <= 100; ++a) {
        for (int b = 1; b <= 100; ++b) {
            const Integer v = cantor(a, b);
            seen.insert(v);
            const auto back = cantor_inv(v);
            inverse = inverse && back && back->first == a && back->second == b;
        }
    }
    c.expect(seen.size() == 10000, "cantor injective on {1..100}^2");
    c.expect(inverse, "cantor_inv is a left inverse on {1..100}^2");
    bool bins = true;
    for (int n = 1; n <= 65536; ++n) {
        const auto w = bin(n);
        const auto back = bin_inv(w);
        bins = bins && w.front() == '1' && back && *back == n;
    }
    c.expect(bins, "bin/bin_inv roundtrip on 1..65536");
    std::size_t words = 0;
    bool stars = true;
    for (int len = 1; len <= 12; ++len) {
        for (int v = 0; v < (1 << len); ++v) {
            std::string w;
            for (int i = len - 1; i >= 0; --i) w.push_back((v >> i) & 1 ? '1' : '0');
            const auto back = out_star(in_star(w));
            stars = stars && back && *back == w;
            ++words;
        }
    }
    c.expect(stars, "in_star/out_star roundtrip on all words of length <= 12");
    const BitTape t = in_star("110");
    c.expect(t.nu1 == 6 && t.prefix == std::vector<int>{0, 0, 0, 1, 0, 1} && t.tail == 1,
             "in_star(110) = ((6,1,...,1) . (0,0,0,1,0,1,1,1,...))");
    c.note("10000 pairs, 65536 naturals, " + std::to_string(words) + " words");
    return c;
}

// Arity scan over symbols 0 1 not and or iff: well-formed iff the scan
// consumes exactly the whole tuple.
bool well_formed(const std::vector<int>& syms) {
    long need = 1;
    for (int s : syms) {
        if (need <= 0) return false;
        need += s <= 1 ? -1 : s == 2 ? 0 : 1;
    }
    return need == 0;
}

bool prefix_value(const std::vector<int>& syms, std::size_t& pos) {
    const int s = syms[pos++];
    if (s <= 1) return s == 1;
    if (s == 2) return !prefix_value(syms, pos);
    const bool a = prefix_value(syms, pos);
    const bool b = prefix_value(syms, pos);
    return s == 3 ? (a && b) : s == 4 ? (a || b) : (a == b);
}

Check formula_evaluator() {
    Check c;
    const auto b = get_builtin_structure("bool-symbols");
    const std::vector<BoolSym> long_formula = {
        BoolSym::conj,   BoolSym::disj, BoolSym::conj, BoolSym::zero, BoolSym::one, BoolSym::neg,
        BoolSym::bicond, BoolSym::one,  BoolSym::zero, BoolSym::disj, BoolSym::neg, BoolSym::conj,
        BoolSym::zero,   BoolSym::one,  BoolSym::bicond, BoolSym::zero, BoolSym::zero};
    c.expect(eval_boolean_prefix(long_formula), "17-symbol formula evaluates to 1");

    const Program shipped = kit::load_program("boolpda.bssram");
    c.expect(shipped == build_boolean_pda(), "shipped boolpda.bssram equals the builder output");
    const Machine m(shipped, b);
    constexpr std::size_t kBudget = 2000000;
    const Tuple one = b->parse_tuple("1");

    std::size_t checked = 0;
    auto check_text = [&](const std::string& infix, bool expected) {
        const auto out = run(m, formula_input(infix, *b), kBudget);
        const bool ok = expected ? halts_with(*b, out, one) : !kit::halted(out);
        if (!ok && c.ok) c.expect(false, "machine on " + infix + ": " + kit::describe(*b, out));
        ++checked;
    };

    const auto infix = "(((0\xE2\x88\xA7" "1)\xE2\x88\xA8\xC2\xAC(1\xE2\x86\x94" "0))\xE2\x88\xA7(\xC2\xAC(0\xE2\x88\xA7" "1)"
                       "\xE2\x88\xA8(0\xE2\x86\x94" "0)))";
    c.expect(infix_to_prefix(infix) == PrefixFormula(long_formula), "infix form converts to the 17 symbols");
    check_text(infix, true);

    const std::string malformed = "(1\xE2\x88\xA7" "0)\xE2\x88\xA7" "1\xE2\x88\xA8" "1";
    c.expect(!infix_to_prefix(malformed).has_value(), "(1 and 0) and 1 or 1 is malformed");
    const Configuration start = input_i1(formula_input(malformed, *b), m.k());
    c.expect(start.indices[0] == 1 && kit::same_tuple(*b, {start.tape.get(1), start.tape.tail()},
                                                      b->parse_tuple("0,0")),
             "malformed input starts as ((1,...,1) . (0,0,0,...))");
    c.expect(!kit::halted(run(m, formula_input(malformed, *b), kBudget)), "malformed input is not accepted");

    for (const auto& f : kit::formulas_up_to(2)) check_text(f.infix, f.value);
    kit::for_each_formula_at_depth(3, [&](const kit::Formula& f) { check_text(f.infix, f.value); });
    const std::size_t exhaustive = checked - 1;

    kit::Rng rng(0x5eed0005);
    constexpr std::size_t kSamples = 2000;
    for (std::size_t i = 0; i < kSamples; ++i) {
        const auto f = kit::random_formula(rng, 4);
        check_text(f.infix, f.value);
    }

    // Every symbol tuple of length <= 5, well-formed or not.
    std::size_t tuples = 0;
    for (int len = 1; len <= 5; ++len) {
        std::vector<int> syms(len, 0);
        for (;;) {
            Tuple x;
            for (int s : syms) x.push_back(b->parse_element(bool_sym_name(static_cast<BoolSym>(s))));
            std::size_t pos = 0;
            const bool expected = well_formed(syms) && prefix_value(syms, pos);
            const auto out = run(m, x, kBudget);
            const bool ok = expected ? halts_with(*b, out, one) : !kit::halted(out);
            if (!ok && c.ok) c.expect(false, "machine on symbol tuple " + tuple_text(*b, x));
            ++tuples;
            int i = len - 1;
            while (i >= 0 && syms[i] == 5) syms[i--] = 0;
            if (i < 0) break;
            ++syms[i];
        }
    }

    Integer corpus = 2;
    for (int d = 1; d <= 4; ++d) corpus = 2 + corpus + 3 * corpus * corpus;
    c.note("exhaustive depth <= 3 (" + std::to_string(exhaustive) + " formulas), " + std::to_string(kSamples) +
           " random formulas of depth 4, all " + std::to_string(tuples) +
           " symbol tuples of length <= 5; the depth <= 4 corpus has " + corpus.str() +
           " formulas and is not enumerated");
    return c;
}

Check semantics_properties() {
    Check c;
    constexpr std::size_t kCases = 250;
    std::vector<kit::PropertyResult> results = {
        kit::prop_stop_absorption(0x6001, kCases),
        kit::prop_step_locality(0x6002, kCases),
        kit::prop_tail_preservation(0x6003, kCases),
        kit::prop_io_roundtrip(0x6004, kCases),
        kit::prop_run_budget_monotone(0x6005, kCases),
    };
    std::uint64_t seed = 0x6100;
    for (Engine e : {Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        results.push_back(kit::prop_search_budget_monotone(e, ++seed, kCases));
    }
    results.push_back(kit::prop_run_deterministic(0x6200, kCases));
    for (Engine e : {Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        results.push_back(kit::prop_search_deterministic(e, ++seed, kCases));
    }
    std::size_t total = 0;
    for (const auto& r : results) {
        c.expect(r.ok(), r.summary());
        total += r.cases;
    }
    c.note(std::to_string(results.size()) + " properties, " + std::to_string(total) + " cases, >= " +
           std::to_string(kCases) + " each");
    return c;
}

Check engine_embedding() {
    Check c;
    constexpr std::size_t kBudget = 5000;
    const auto q = get_builtin_structure("rational-field-eq");
    const auto g = get_builtin_structure("gaussian-rational-field-eq");
    const auto b = get_builtin_structure("bool-symbols");
    const auto nonneg = make_builtin_oracle("nonneg-singletons", q);
    struct Shipped {
        const char* file;
        StructurePtr structure;
        OraclePtr oracle;
        std::vector<std::string> inputs;
    };
    const std::vector<Shipped> shipped = {
        {"sum3.bssram", q, nullptr, {"1,2,3", "0,0,0", "1/2,-1/3,5"}},
        {"sumn-c.bssram", g, nullptr, {"1", "1/2,1/2", "3*i,2,3,6+i,7", "i,-i,1"}},
        {"nonneg-nd.bssram", q, nullptr, {"0", "1", "4", "-1"}},
        {"nonneg-decider.bssram", q, nonneg, {"4,6,7", "4", "-4", "0"}},
        {"nonneg-semi.bssram", q, nonneg, {"4", "-4", "0"}},
        {"nonneg-cosemi.bssram", q, nonneg, {"4", "-4", "0"}},
        {"loop.bssram", q, nullptr, {"1", "1,2", "5"}},
        {"boolpda.bssram", b, nullptr, {"1", "0", "not,0", "and,1,1", "or,0,0"}},
    };
    std::size_t runs = 0;
    std::size_t halting = 0;
    for (const auto& s : shipped) {
        const Machine m(kit::load_program(s.file), s.structure, std::nullopt, s.oracle);
        for (const auto& text : s.inputs) {
            const Tuple x = s.structure->parse_tuple(text);
            ++runs;
            if (!kit::halted(run(m, x, kBudget))) continue;
            ++halting;
            c.expect(kit::accepted(search_nd(m, x, kBudget, GuessMode::nd)),
                     std::string(s.file) + " on (" + text + ") accepted by search_nd");
        }
    }
    const auto random = kit::prop_engine_embedding_random(0x7001, 100);
    c.expect(random.ok(), random.summary());
    c.note(std::to_string(shipped.size()) + " shipped programs (" + std::to_string(halting) + " of " +
           std::to_string(runs) + " runs halt), 100 random machines");
    return c;
}

Check dnd_branch_agreement() {
    Check c;
    const auto bit = get_builtin_structure("bit");
    constexpr std::size_t kBudget = 400;
    std::vector<std::vector<int>> inputs = {{0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const auto family = kit::gadget_family(3);
    std::size_t accepting = 0;
    for (const auto& gadget : family) {
        const Machine guessing(kit::gadget_guessing(gadget), bit);
        const Machine branching(kit::gadget_branching(gadget), bit);
        for (const auto& bits : inputs) {
            Tuple x;
            for (int v : bits) x.push_back(bit->enumerate(v + 1));
            const bool nd = kit::accepted(search_nd(guessing, x, kBudget, GuessMode::dnd));
            const bool br = kit::accepted(search_branch(branching, x, kBudget));
            const bool ref = kit::gadget_accepts(gadget, bits);
            accepting += ref;
            c.expect(nd == br && nd == ref, "k=" + std::to_string(gadget.k) + " mask=" + std::to_string(gadget.mask) +
                                                " input " + tuple_text(*bit, x));
        }
    }
    c.note(std::to_string(family.size()) + " gadgets x " + std::to_string(inputs.size()) + " inputs, " +
           std::to_string(accepting) + " accepting");
    return c;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"oracle decider golden run", oracle_decider},
        {"sum decider over gaussian rationals", gaussian_sum_decider},
        {"square-root guessing", square_root_guessing},
        {"encoding suite", encoding_suite},
        {"boolean formula machine", formula_evaluator},
        {"semantics properties", semantics_properties},
        {"deterministic runs embed into nd search", engine_embedding},
        {"dnd and branching agree on guessing gadgets", dnd_branch_agreement},
    };
    int status = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool unattainable = kUnattainable.count(id) > 0;
        const bool pass = c.ok && !unattainable;
        std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first;
        if (c.ok && unattainable) std::cout << " [unattainable as stated; every checked case passed]";
        char timing[32];
        std::snprintf(timing, sizeof timing, " (%.1fs)", secs);
        std::cout << timing << '\n';
        for (const auto& n : c.notes) std::cout << "    " << n << '\n';
        if (!c.ok) status = 1;
    }
    return status;
}
