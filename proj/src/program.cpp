#include "bssram/program.hpp"

#include <algorithm>

#include "bssram/error.hpp"

namespace bssram {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Every label field of an instruction, in field order.
std::vector<Label*> label_fields(Instruction& ins) {
    return std::visit(overloaded{
                          [](instr::RelBranch& b) { return std::vector<Label*>{&b.then_label, &b.else_label}; },
                          [](instr::IdxBranch& b) { return std::vector<Label*>{&b.then_label, &b.else_label}; },
                          [](instr::OracleBranch& b) { return std::vector<Label*>{&b.then_label, &b.else_label}; },
                          [](instr::NdGoto& g) { return std::vector<Label*>{&g.first, &g.second}; },
                          [](auto&) { return std::vector<Label*>{}; },
                      },
                      ins);
}

std::vector<Label> label_targets(const Instruction& ins) {
    auto copy = ins;
    std::vector<Label> out;
    for (auto* l : label_fields(copy)) out.push_back(*l);
    return out;
}

} // namespace

int instruction_type(const Instruction& ins) {
    return std::visit(overloaded{
                          [](const instr::Compute&) { return 1; },
                          [](const instr::SetConst&) { return 2; },
                          [](const instr::CopyDirect&) { return 3; },
                          [](const instr::CopyIndirect&) { return 3; },
                          [](const instr::RelBranch&) { return 4; },
                          [](const instr::IdxBranch&) { return 5; },
                          [](const instr::IdxSetOne&) { return 6; },
                          [](const instr::IdxInc&) { return 7; },
                          [](const instr::Stop&) { return 8; },
                          [](const instr::OracleBranch&) { return 9; },
                          [](const instr::NuAssign&) { return 10; },
                          [](const instr::NdGoto&) { return 11; },
                      },
                      ins);
}

Signature Program::signature() const {
    if (declared) return *declared;
    Signature sig;
    std::map<std::size_t, std::size_t> ops, rels;
    for (const auto& ins : instructions) {
        std::visit(overloaded{
                       [&](const instr::Compute& c) { ops.try_emplace(c.op, c.args.size()); },
                       [&](const instr::SetConst& c) { sig.constants = std::max(sig.constants, c.constant); },
                       [&](const instr::RelBranch& r) { rels.try_emplace(r.rel, r.args.size()); },
                       [](const auto&) {},
                   },
                   ins);
    }
    auto fill = [](const std::map<std::size_t, std::size_t>& used) {
        std::vector<std::size_t> arities(used.empty() ? 0 : used.rbegin()->first, 1);
        for (auto [idx, arity] : used) {
            if (idx >= 1) arities[idx - 1] = std::max<std::size_t>(arity, 1);
        }
        return arities;
    };
    sig.op_arities = fill(ops);
    sig.rel_arities = fill(rels);
    return sig;
}

std::size_t compute_kP(const Program& p) {
    std::size_t k = 1;
    for (const auto& ins : p.instructions) {
        std::visit(overloaded{
                       [&](const instr::CopyIndirect& c) { k = std::max({k, c.dst, c.src}); },
                       [&](const instr::IdxBranch& b) { k = std::max({k, b.lhs, b.rhs}); },
                       [&](const instr::IdxSetOne& s) { k = std::max(k, s.index); },
                       [&](const instr::IdxInc& s) { k = std::max(k, s.index); },
                       [](const auto&) {},
                   },
                   ins);
    }
    return k;
}

ValidationReport validate_program(const Program& p, const Signature& sig, Mode mode) {
    ValidationReport report;
    report.k_P = compute_kP(p);
    auto& errors = report.errors;
    const Label last = p.stop_label();

    if (p.instructions.empty()) {
        errors.push_back("program is empty");
        return report;
    }

    for (Label l = 1; l <= last; ++l) {
        const auto& ins = p.at(l);
        const std::string at = "label " + std::to_string(l) + ": ";
        auto err = [&](const std::string& msg) { errors.push_back(at + msg); };
        auto check_z = [&](ZIndex z) {
            if (z == 0) err("Z-register index must be >= 1");
            report.j_max = std::max(report.j_max, z);
        };
        auto check_i = [&](IIndex i) {
            if (i == 0) err("index register must be >= 1");
        };

        if (std::holds_alternative<instr::Stop>(ins) && l != last) err("stop must be the last instruction");
        if (l == last && !std::holds_alternative<instr::Stop>(ins)) err("last instruction must be stop");

        for (Label target : label_targets(ins)) {
            if (target == 0 || target > last) err("goto target " + std::to_string(target) + " out of range");
        }

        std::visit(overloaded{
                       [&](const instr::Compute& c) {
                           check_z(c.dst);
                           for (auto a : c.args) check_z(a);
                           if (c.op == 0 || c.op > sig.op_arities.size()) {
                               err("op index " + std::to_string(c.op) + " out of range");
                           } else if (sig.op_arities[c.op - 1] != c.args.size()) {
                               err("op f" + std::to_string(c.op) + " has arity " +
                                   std::to_string(sig.op_arities[c.op - 1]) + ", used with " +
                                   std::to_string(c.args.size()));
                           }
                       },
                       [&](const instr::SetConst& c) {
                           check_z(c.dst);
                           if (c.constant == 0 || c.constant > sig.constants) {
                               err("constant index " + std::to_string(c.constant) + " out of range");
                           }
                       },
                       [&](const instr::CopyDirect& c) {
                           check_z(c.dst);
                           check_z(c.src);
                       },
                       [&](const instr::CopyIndirect& c) {
                           report.uses.indirect = true;
                           check_i(c.dst);
                           check_i(c.src);
                           if (mode == Mode::finite) err("indirect copy not allowed in a finite machine");
                       },
                       [&](const instr::RelBranch& r) {
                           for (auto a : r.args) check_z(a);
                           if (r.rel == 0 || r.rel > sig.rel_arities.size()) {
                               err("relation index " + std::to_string(r.rel) + " out of range");
                           } else if (sig.rel_arities[r.rel - 1] != r.args.size()) {
                               err("relation r" + std::to_string(r.rel) + " has arity " +
                                   std::to_string(sig.rel_arities[r.rel - 1]) + ", used with " +
                                   std::to_string(r.args.size()));
                           }
                       },
                       [&](const instr::IdxBranch& b) {
                           check_i(b.lhs);
                           check_i(b.rhs);
                           if (mode == Mode::finite) err("index instruction not allowed in a finite machine");
                       },
                       [&](const instr::IdxSetOne& s) {
                           check_i(s.index);
                           if (mode == Mode::finite) err("index instruction not allowed in a finite machine");
                       },
                       [&](const instr::IdxInc& s) {
                           check_i(s.index);
                           if (mode == Mode::finite) err("index instruction not allowed in a finite machine");
                       },
                       [](const instr::Stop&) {},
                       [&](const instr::OracleBranch&) {
                           report.uses.oracle = true;
                           if (mode == Mode::finite) err("oracle instruction not allowed in a finite machine");
                       },
                       [&](const instr::NuAssign& n) {
                           report.uses.nu = true;
                           check_z(n.dst);
                           if (mode == Mode::finite) err("nu instruction not allowed in a finite machine");
                       },
                       [&](const instr::NdGoto&) {
                           report.uses.branch = true;
                           if (mode == Mode::finite) err("branching instruction not allowed in a finite machine");
                       },
                   },
                   ins);
    }
    return report;
}

std::vector<Instruction> emit_decrement(IIndex target, IIndex aux1, IIndex aux2, Label base) {
    if (target == aux1 || target == aux2 || aux1 == aux2) {
        throw Error("emit_decrement: target, aux1 and aux2 must be pairwise distinct");
    }
    if (target == 0 || aux1 == 0 || aux2 == 0 || base == 0) {
        throw Error("emit_decrement: registers and base label must be >= 1");
    }
    using namespace instr;
    // aux1 trails aux2 by one; when aux2 reaches target, aux1 = target - 1.
    // The value is then recounted into target from 1.
    return {
        IdxSetOne{aux1},                                 // +0
        IdxSetOne{aux2},                                 // +1
        IdxInc{aux2},                                    // +2
        IdxBranch{aux2, target, base + 7, base + 4},     // +3
        IdxInc{aux1},                                    // +4
        IdxInc{aux2},                                    // +5
        IdxBranch{aux1, aux1, base + 3, base + 3},       // +6
        IdxSetOne{target},                               // +7
        IdxBranch{target, aux1, base + 11, base + 9},    // +8
        IdxInc{target},                                  // +9
        IdxBranch{target, target, base + 8, base + 8},   // +10
    };
}

// --- builder ---------------------------------------------------------------

ProgramBuilder& ProgramBuilder::mark(const std::string& name) {
    if (name == "stop") throw Error("the label name 'stop' is reserved");
    if (!marks_.emplace(name, next_label()).second) throw Error("duplicate builder label '" + name + "'");
    return *this;
}

ProgramBuilder& ProgramBuilder::compute(ZIndex dst, std::size_t op, std::vector<ZIndex> args) {
    code_.push_back({instr::Compute{dst, op, std::move(args)}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::set_const(ZIndex dst, std::size_t constant) {
    code_.push_back({instr::SetConst{dst, constant}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::copy(ZIndex dst, ZIndex src) {
    code_.push_back({instr::CopyDirect{dst, src}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::copy_indirect(IIndex dst, IIndex src) {
    code_.push_back({instr::CopyIndirect{dst, src}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::rel_branch(std::size_t rel, std::vector<ZIndex> args, const std::string& then_name,
                                           const std::string& else_name) {
    code_.push_back({instr::RelBranch{rel, std::move(args), 0, 0}, {then_name, else_name}});
    return *this;
}

ProgramBuilder& ProgramBuilder::idx_branch(IIndex lhs, IIndex rhs, const std::string& then_name,
                                           const std::string& else_name) {
    code_.push_back({instr::IdxBranch{lhs, rhs, 0, 0}, {then_name, else_name}});
    return *this;
}

ProgramBuilder& ProgramBuilder::jump(const std::string& name) { return idx_branch(1, 1, name, name); }

ProgramBuilder& ProgramBuilder::idx_set_one(IIndex j) {
    code_.push_back({instr::IdxSetOne{j}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::idx_inc(IIndex j, std::size_t times) {
    for (std::size_t i = 0; i < times; ++i) code_.push_back({instr::IdxInc{j}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::oracle_branch(const std::string& then_name, const std::string& else_name) {
    code_.push_back({instr::OracleBranch{0, 0}, {then_name, else_name}});
    return *this;
}

ProgramBuilder& ProgramBuilder::nu_assign(ZIndex dst) {
    code_.push_back({instr::NuAssign{dst}, {}});
    return *this;
}

ProgramBuilder& ProgramBuilder::nd_goto(const std::string& first, const std::string& second) {
    code_.push_back({instr::NdGoto{0, 0}, {first, second}});
    return *this;
}

ProgramBuilder& ProgramBuilder::decrement(IIndex target, IIndex aux1, IIndex aux2) {
    for (auto& ins : emit_decrement(target, aux1, aux2, next_label())) code_.push_back({std::move(ins), {}});
    return *this;
}

Program ProgramBuilder::build(std::optional<Signature> declared) const {
    Program p;
    p.declared = std::move(declared);
    const Label stop = code_.size() + 1;
    for (const auto& pending : code_) {
        Instruction ins = pending.ins;
        auto fields = label_fields(ins);
        for (std::size_t k = 0; k < pending.targets.size(); ++k) {
            const auto& name = pending.targets[k];
            if (name == "stop") {
                *fields[k] = stop;
                continue;
            }
            auto it = marks_.find(name);
            if (it == marks_.end()) throw Error("undefined builder label '" + name + "'");
            *fields[k] = it->second;
        }
        p.instructions.push_back(std::move(ins));
    }
    p.instructions.push_back(instr::Stop{});
    return p;
}

} // namespace bssram
