#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bssram/structure.hpp"

namespace bssram {

// Register and label numbers are 1-based throughout, as in the program text.
using Label = std::size_t;
using ZIndex = std::size_t;
using IIndex = std::size_t;

namespace instr {

/// Zj := fi^m(Zj1,...,Zjm)
struct Compute {
    ZIndex dst;
    std::size_t op;
    std::vector<ZIndex> args;
    bool operator==(const Compute&) const = default;
};

/// Zj := ci^0
struct SetConst {
    ZIndex dst;
    std::size_t constant;
    bool operator==(const SetConst&) const = default;
};

/// Zj := Zk
struct CopyDirect {
    ZIndex dst;
    ZIndex src;
    bool operator==(const CopyDirect&) const = default;
};

/// Z[Ij] := Z[Ik]
struct CopyIndirect {
    IIndex dst;
    IIndex src;
    bool operator==(const CopyIndirect&) const = default;
};

/// if ri^k(Zj1,...,Zjk) then goto L1 else goto L2
struct RelBranch {
    std::size_t rel;
    std::vector<ZIndex> args;
    Label then_label;
    Label else_label;
    bool operator==(const RelBranch&) const = default;
};

/// if Ij = Ik then goto L1 else goto L2
struct IdxBranch {
    IIndex lhs;
    IIndex rhs;
    Label then_label;
    Label else_label;
    bool operator==(const IdxBranch&) const = default;
};

/// Ij := 1
struct IdxSetOne {
    IIndex index;
    bool operator==(const IdxSetOne&) const = default;
};

/// Ij := Ij + 1
struct IdxInc {
    IIndex index;
    bool operator==(const IdxInc&) const = default;
};

struct Stop {
    bool operator==(const Stop&) const = default;
};

/// if (Z1,...,Z[I1]) in O then goto L1 else goto L2
struct OracleBranch {
    Label then_label;
    Label else_label;
    bool operator==(const OracleBranch&) const = default;
};

/// Zj := nu[O](Z1,...,Z[I1])
struct NuAssign {
    ZIndex dst;
    bool operator==(const NuAssign&) const = default;
};

/// goto L1 or goto L2
struct NdGoto {
    Label first;
    Label second;
    bool operator==(const NdGoto&) const = default;
};

} // namespace instr

using Instruction = std::variant<instr::Compute, instr::SetConst, instr::CopyDirect, instr::CopyIndirect,
                                 instr::RelBranch, instr::IdxBranch, instr::IdxSetOne, instr::IdxInc,
                                 instr::Stop, instr::OracleBranch, instr::NuAssign, instr::NdGoto>;

/// Instruction at label l lives at instructions[l - 1].
struct Program {
    std::vector<Instruction> instructions;
    // Set when the source pinned a signature; otherwise the minimal one is inferred.
    std::optional<Signature> declared;

    std::size_t size() const noexcept { return instructions.size(); }
    const Instruction& at(Label l) const { return instructions.at(l - 1); }
    Label stop_label() const noexcept { return instructions.size(); }

    /// The pinned signature, or the smallest one covering every used index.
    /// Operation/relation slots below the highest used index that the program
    /// never mentions get arity 1.
    Signature signature() const;

    bool operator==(const Program&) const = default;
};

enum class Mode { finite, infinite };

struct FeatureFlags {
    bool oracle = false;
    bool nu = false;
    bool branch = false;
    bool indirect = false;
};

struct ValidationReport {
    std::size_t k_P = 1;
    std::size_t j_max = 0;
    FeatureFlags uses;
    std::vector<std::string> errors;

    bool ok() const noexcept { return errors.empty(); }
};

ValidationReport validate_program(const Program& p, const Signature& sig, Mode mode = Mode::infinite);
std::size_t compute_kP(const Program& p);

/// Instruction kind as numbered in the machine model: 1..11, with direct copy
/// reported as 3 as well.
int instruction_type(const Instruction& ins);

/// Straight-line-with-loop snippet (types 5-7 only) that decrements `target`
/// and falls through to `base + kDecrementLength`. Requires three distinct
/// registers. A runtime target value of 1 makes the snippet loop forever.
inline constexpr std::size_t kDecrementLength = 11;
std::vector<Instruction> emit_decrement(IIndex target, IIndex aux1, IIndex aux2, Label base);

/// Incremental program construction with symbolic labels. Jump targets are
/// given by name and resolved in build(); the final Stop is appended there.
class ProgramBuilder {
public:
    /// Binds `name` to the label of the next emitted instruction.
    ProgramBuilder& mark(const std::string& name);

    ProgramBuilder& compute(ZIndex dst, std::size_t op, std::vector<ZIndex> args);
    ProgramBuilder& set_const(ZIndex dst, std::size_t constant);
    ProgramBuilder& copy(ZIndex dst, ZIndex src);
    ProgramBuilder& copy_indirect(IIndex dst, IIndex src);
    ProgramBuilder& rel_branch(std::size_t rel, std::vector<ZIndex> args, const std::string& then_name,
                               const std::string& else_name);
    ProgramBuilder& idx_branch(IIndex lhs, IIndex rhs, const std::string& then_name, const std::string& else_name);
    ProgramBuilder& jump(const std::string& name);  // if I1 = I1 then goto name else goto name
    ProgramBuilder& idx_set_one(IIndex j);
    ProgramBuilder& idx_inc(IIndex j, std::size_t times = 1);
    ProgramBuilder& oracle_branch(const std::string& then_name, const std::string& else_name);
    ProgramBuilder& nu_assign(ZIndex dst);
    ProgramBuilder& nd_goto(const std::string& first, const std::string& second);
    ProgramBuilder& decrement(IIndex target, IIndex aux1, IIndex aux2);

    Label next_label() const noexcept { return code_.size() + 1; }

    /// The name "stop" always refers to the final Stop instruction.
    Program build(std::optional<Signature> declared = std::nullopt) const;

private:
    struct Pending {
        Instruction ins;
        std::vector<std::string> targets;  // symbolic targets, in field order
    };
    std::vector<Pending> code_;
    std::map<std::string, Label> marks_;
};

} // namespace bssram
