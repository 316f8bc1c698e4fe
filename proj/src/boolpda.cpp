#include "bssram/boolpda.hpp"

#include <string>

namespace bssram {

namespace {

// Constant indices of bool-symbols.
enum : std::size_t {
    kZero = 1, kOne, kNot, kAnd, kOr, kIff, kAnd0, kOr0, kIff0, kAnd1, kOr1, kIff1, kLambda, kHash, kQ0
};

constexpr ZIndex X = 1, T = 2, Q = 3, W = 4;
constexpr ZIndex K(std::size_t c) { return 4 + c; }

constexpr IIndex M = 1, Src = 2, R = 3, S = 4, A1 = 5, A2 = 6, L = 7, PW = 8, PX = 9, PT = 10;

struct UnaryState {
    std::size_t state;
    std::size_t on0;
    std::size_t on1;
};

} // namespace

Program build_boolean_pda() {
    ProgramBuilder b;

    // R and L count up to m together; then L = m + 20 and R = m + 21.
    b.mark("count").idx_branch(R, M, "counted", "count_inc");
    b.mark("count_inc").idx_inc(R).idx_inc(L).jump("count");
    b.mark("counted").idx_inc(L, 20).idx_inc(R, 21);

    // Z[m+20+i] := Z[i] for i = 1..m; afterwards R = 2m + 20.
    b.mark("copy").copy_indirect(R, Src).idx_branch(Src, M, "copied", "copy_inc");
    b.mark("copy_inc").idx_inc(Src).idx_inc(R).jump("copy");

    // S := R + 1.
    b.mark("copied").idx_branch(S, R, "stacked", "stack_inc");
    b.mark("stack_inc").idx_inc(S).jump("copied");
    b.mark("stacked").idx_inc(S);

    for (std::size_t c = kZero; c <= kQ0; ++c) b.set_const(K(c), c);
    b.set_const(Q, kQ0);
    b.idx_set_one(PW).idx_inc(PW, 3);
    b.idx_set_one(PX);
    b.idx_set_one(PT).idx_inc(PT);
    b.set_const(W, kLambda).copy_indirect(L, PW);
    b.set_const(W, kHash).copy_indirect(S, PW);

    b.mark("main").copy_indirect(PX, R).copy_indirect(PT, S);
    b.rel_branch(1, {Q, K(kQ0)}, "read", "apply");

    b.mark("read").rel_branch(1, {X, K(kZero)}, "push", "read1");
    b.mark("read1").rel_branch(1, {X, K(kOne)}, "push", "read2");
    b.mark("read2").rel_branch(1, {X, K(kNot)}, "neg", "read3");
    b.mark("read3").rel_branch(1, {X, K(kAnd)}, "and", "read4");
    b.mark("read4").rel_branch(1, {X, K(kOr)}, "or", "read5");
    b.mark("read5").rel_branch(1, {X, K(kIff)}, "iff", "read6");
    b.mark("read6").rel_branch(1, {X, K(kLambda)}, "end", "reject");

    b.mark("push").idx_inc(S).copy_indirect(S, PX).decrement(R, A1, A2).jump("main");

    b.mark("neg").rel_branch(1, {T, K(kZero)}, "neg0", "neg_b");
    b.mark("neg_b").rel_branch(1, {T, K(kOne)}, "neg1", "reject");
    b.mark("neg0").set_const(W, kOne).jump("neg_store");
    b.mark("neg1").set_const(W, kZero);
    b.mark("neg_store").copy_indirect(S, PW).decrement(R, A1, A2).jump("main");

    // A binary operator pops the top value v and enters state op_v.
    const struct {
        const char* name;
        std::size_t s0;
        std::size_t s1;
    } binaries[] = {{"and", kAnd0, kAnd1}, {"or", kOr0, kOr1}, {"iff", kIff0, kIff1}};
    for (const auto& op : binaries) {
        const std::string n = op.name;
        b.mark(n).rel_branch(1, {T, K(kZero)}, n + "0", n + "_b");
        b.mark(n + "_b").rel_branch(1, {T, K(kOne)}, n + "1", "reject");
        b.mark(n + "0").set_const(Q, op.s0).jump("pop");
        b.mark(n + "1").set_const(Q, op.s1).jump("pop");
    }
    b.mark("pop").decrement(S, A1, A2).decrement(R, A1, A2).jump("main");

    b.mark("end").rel_branch(1, {T, K(kOne)}, "end1", "reject");
    b.mark("end1").set_const(Q, kOne).decrement(S, A1, A2).jump("main");

    // op_v replaces the top value w by (v op w).
    const UnaryState unary[] = {
        {kAnd0, kZero, kZero}, {kOr0, kZero, kOne}, {kIff0, kOne, kZero},
        {kAnd1, kZero, kOne},  {kOr1, kOne, kOne},  {kIff1, kZero, kOne},
    };
    b.mark("apply");
    for (std::size_t i = 0; i < std::size(unary); ++i) {
        const std::string next = i + 1 < std::size(unary) ? "apply" + std::to_string(i + 1) : "final";
        if (i > 0) b.mark("apply" + std::to_string(i));
        b.rel_branch(1, {Q, K(unary[i].state)}, "unary" + std::to_string(i), next);
    }
    for (std::size_t i = 0; i < std::size(unary); ++i) {
        const std::string n = "unary" + std::to_string(i);
        b.mark(n).rel_branch(1, {T, K(kZero)}, n + "_0", n + "_b");
        b.mark(n + "_b").rel_branch(1, {T, K(kOne)}, n + "_1", "reject");
        b.mark(n + "_0").set_const(W, unary[i].on0).jump("store");
        b.mark(n + "_1").set_const(W, unary[i].on1).jump("store");
    }
    b.mark("store").copy_indirect(S, PW).set_const(Q, kQ0).jump("main");

    b.mark("final").rel_branch(1, {Q, K(kOne)}, "check", "reject");
    b.mark("check").rel_branch(1, {T, K(kHash)}, "accept", "reject");
    b.mark("reject").jump("reject");
    b.mark("accept").idx_set_one(M).set_const(X, kOne);

    Signature sig;
    sig.constants = 15;
    sig.rel_arities = {2};
    return b.build(sig);
}

} // namespace bssram
