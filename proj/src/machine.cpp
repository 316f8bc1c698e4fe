#include "bssram/machine.hpp"

#include <algorithm>
#include <sstream>

#include "bssram/error.hpp"

namespace bssram {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t index_value(const Configuration& c, IIndex j) {
    if (j == 0 || j > c.indices.size()) {
        throw Error("index register I" + std::to_string(j) + " not available");
    }
    return static_cast<std::size_t>(c.indices[j - 1]);
}

} // namespace

void Tape::set(std::size_t pos, Element value) {
    if (pos == 0) throw Error("tape positions start at 1");
    if (pos > kMaxTapePosition) {
        throw Error("tape position " + std::to_string(pos) + " exceeds the supported limit");
    }
    if (pos > prefix_.size()) prefix_.resize(pos, tail_);
    prefix_[pos - 1] = std::move(value);
}

Machine::Machine(Program program, StructurePtr structure, std::optional<std::size_t> k, OraclePtr oracle,
                 std::optional<std::size_t> output_width)
    : program_(std::move(program)),
      structure_(std::move(structure)),
      oracle_(std::move(oracle)),
      output_width_(output_width) {
    if (!structure_) throw Error("machine needs a structure");
    if (output_width_ && *output_width_ == 0) throw Error("output width must be at least 1");
    if (program_.declared) {
        const Signature& want = *program_.declared;
        const Signature& have = structure_->signature();
        auto prefix_of = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
            return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
        };
        if (want.constants > have.constants || !prefix_of(want.op_arities, have.op_arities) ||
            !prefix_of(want.rel_arities, have.rel_arities)) {
            throw Error("program signature " + format_signature(want) + " does not fit structure '" +
                        structure_->name() + "' of signature " + format_signature(have));
        }
    }
    report_ = validate_program(program_, structure_->signature(), Mode::infinite);
    if (!report_.ok()) {
        std::string msg = "program does not fit structure '" + structure_->name() + "':";
        for (const auto& e : report_.errors) msg += "\n  " + e;
        throw Error(msg);
    }
    k_ = k.value_or(report_.k_P);
    if (k_ < report_.k_P) {
        throw Error("machine has " + std::to_string(k_) + " index registers, program needs " +
                    std::to_string(report_.k_P));
    }
    const bool wants_oracle = report_.uses.oracle || report_.uses.nu;
    if (wants_oracle && !oracle_) throw Error("program uses oracle instructions but no oracle was given");
    if (!wants_oracle && oracle_) throw Error("an oracle was given but the program has no oracle instructions");
    const int kinds = int(report_.uses.oracle) + int(report_.uses.nu) + int(report_.uses.branch);
    if (kinds > 1) {
        throw Error("programs may use at most one of oracle branches, nu assignments and nondeterministic gotos");
    }
}

Configuration input_i1(const Tuple& x, std::size_t k) {
    if (x.empty()) throw Error("input must contain at least one element");
    if (k == 0) throw Error("machines have at least one index register");
    std::vector<std::uint64_t> idx(k, 1);
    idx[0] = x.size();
    return Configuration{1, std::move(idx), Tape(x, x.back())};
}

Tuple output_o(const Configuration& c) {
    Tuple out;
    const std::size_t n = c.indices.at(0);
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(c.tape.get(i));
    return out;
}

Tuple machine_output(const Machine& m, const Configuration& c) {
    if (!m.output_width()) return output_o(c);
    Tuple out;
    for (std::size_t i = 1; i <= *m.output_width(); ++i) out.push_back(c.tape.get(i));
    return out;
}

Tuple query_prefix(const Configuration& c) { return output_o(c); }

StepEffect step_in_place(const Machine& m, Configuration& c) {
    const Program& p = m.program();
    if (c.label == 0 || c.label > p.size()) throw Error("label " + std::to_string(c.label) + " out of range");
    const Label here = c.label;
    auto branch = [&](bool taken, Label a, Label b) {
        c.label = taken ? a : b;
        return c.label == here ? StepEffect::fixed_point : StepEffect::moved;
    };
    return std::visit(
        overloaded{
            [&](const instr::Compute& ins) {
                Tuple args;
                args.reserve(ins.args.size());
                for (auto j : ins.args) args.push_back(c.tape.get(j));
                c.tape.set(ins.dst, m.structure().apply(ins.op, args));
                ++c.label;
                return StepEffect::moved;
            },
            [&](const instr::SetConst& ins) {
                c.tape.set(ins.dst, m.structure().constant(ins.constant));
                ++c.label;
                return StepEffect::moved;
            },
            [&](const instr::CopyDirect& ins) {
                c.tape.set(ins.dst, Element(c.tape.get(ins.src)));
                ++c.label;
                return StepEffect::moved;
            },
            [&](const instr::CopyIndirect& ins) {
                const std::size_t dst = index_value(c, ins.dst);
                const std::size_t src = index_value(c, ins.src);
                c.tape.set(dst, Element(c.tape.get(src)));
                ++c.label;
                return StepEffect::moved;
            },
            [&](const instr::RelBranch& ins) {
                Tuple args;
                args.reserve(ins.args.size());
                for (auto j : ins.args) args.push_back(c.tape.get(j));
                return branch(m.structure().test(ins.rel, args), ins.then_label, ins.else_label);
            },
            [&](const instr::IdxBranch& ins) {
                return branch(index_value(c, ins.lhs) == index_value(c, ins.rhs), ins.then_label, ins.else_label);
            },
            [&](const instr::IdxSetOne& ins) {
                index_value(c, ins.index);
                c.indices[ins.index - 1] = 1;
                ++c.label;
                return StepEffect::moved;
            },
            [&](const instr::IdxInc& ins) {
                index_value(c, ins.index);
                ++c.indices[ins.index - 1];
                ++c.label;
                return StepEffect::moved;
            },
            [](const instr::Stop&) { return StepEffect::fixed_point; },
            [&](const instr::OracleBranch& ins) {
                if (!m.oracle()) throw Error("oracle instruction without an oracle");
                const Tuple q = query_prefix(c);
                return branch(m.oracle()->member(q), ins.then_label, ins.else_label);
            },
            [&](const instr::NuAssign&) -> StepEffect {
                throw Error("label " + std::to_string(here) + ": nu assignment needs the nondeterministic engine");
            },
            [&](const instr::NdGoto&) -> StepEffect {
                throw Error("label " + std::to_string(here) + ": nondeterministic goto needs the branching engine");
            },
        },
        p.at(here));
}

Configuration step(const Machine& m, Configuration c) {
    step_in_place(m, c);
    return c;
}

RunOutcome run_from(const Machine& m, Configuration c, std::size_t max_steps) {
    const Label stop = m.program().stop_label();
    std::size_t steps = 0;
    while (c.label != stop) {
        if (steps == max_steps) return BudgetExhausted{std::move(c), steps};
        if (step_in_place(m, c) == StepEffect::fixed_point) {
            // Every further transition is the identity; the outcome at the
            // budget is this very configuration.
            return BudgetExhausted{std::move(c), max_steps};
        }
        ++steps;
    }
    Tuple out = machine_output(m, c);
    return Halted{std::move(out), steps, std::move(c)};
}

RunOutcome run(const Machine& m, const Tuple& x, std::size_t max_steps) {
    if (!m.deterministic()) throw Error("run needs a deterministic program (types 1-9)");
    return run_from(m, input_i1(x, m.k()), max_steps);
}

std::vector<Configuration> trace(const Machine& m, const Tuple& x, std::size_t max_steps) {
    if (!m.deterministic()) throw Error("trace needs a deterministic program (types 1-9)");
    const Label stop = m.program().stop_label();
    std::vector<Configuration> out;
    out.push_back(input_i1(x, m.k()));
    for (std::size_t steps = 0; out.back().label != stop && steps < max_steps; ++steps) {
        out.push_back(step(m, out.back()));
    }
    return out;
}

std::string format_configuration(const Structure& s, const Configuration& c) {
    std::ostringstream out;
    out << c.label << " | ";
    for (std::size_t i = 0; i < c.indices.size(); ++i) out << (i ? "," : "") << c.indices[i];
    out << " | ";
    const std::string tail = s.render(c.tape.tail());
    const auto& prefix = c.tape.prefix();
    std::vector<std::string> cells;
    cells.reserve(prefix.size());
    for (const auto& e : prefix) cells.push_back(s.render(e));
    std::size_t keep = cells.size();
    while (keep > 0 && cells[keep - 1] == tail) --keep;
    for (std::size_t i = 0; i < keep; ++i) out << (i ? "," : "") << cells[i];
    out << " | tail=" << tail;
    return out.str();
}

} // namespace bssram
