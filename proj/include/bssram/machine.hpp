#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bssram/oracle.hpp"
#include "bssram/program.hpp"
#include "bssram/structure.hpp"

namespace bssram {

/// Positions past this bound are rejected rather than materialized.
inline constexpr std::size_t kMaxTapePosition = std::size_t{1} << 24;

/// The register tape u1 u2 ... as a finite prefix followed by a constant tail.
/// Positions are 1-based.
class Tape {
public:
    Tape(Tuple prefix, Element tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {}

    const Element& get(std::size_t pos) const {
        return pos <= prefix_.size() ? prefix_[pos - 1] : tail_;
    }
    void set(std::size_t pos, Element value);

    const Tuple& prefix() const noexcept { return prefix_; }
    const Element& tail() const noexcept { return tail_; }

private:
    Tuple prefix_;
    Element tail_;
};

/// (label . index registers . tape)
struct Configuration {
    Label label = 1;
    std::vector<std::uint64_t> indices;
    Tape tape;
};

/// A program bound to a structure, an index-register count and, for programs
/// with oracle or nu instructions, an oracle set. Construction validates the
/// program against the structure's signature and throws on any error.
///
/// With an output width w the result of a halting run is (u_1, ..., u_w), the
/// output of a finite machine; otherwise it is output_o.
class Machine {
public:
    Machine(Program program, StructurePtr structure, std::optional<std::size_t> k = std::nullopt,
            OraclePtr oracle = nullptr, std::optional<std::size_t> output_width = std::nullopt);

    const Program& program() const noexcept { return program_; }
    const Structure& structure() const noexcept { return *structure_; }
    const StructurePtr& structure_ptr() const noexcept { return structure_; }
    std::size_t k() const noexcept { return k_; }
    const OracleSet* oracle() const noexcept { return oracle_.get(); }
    const OraclePtr& oracle_ptr() const noexcept { return oracle_; }
    const ValidationReport& report() const noexcept { return report_; }
    std::optional<std::size_t> output_width() const noexcept { return output_width_; }

    bool deterministic() const noexcept { return !report_.uses.nu && !report_.uses.branch; }

private:
    Program program_;
    StructurePtr structure_;
    std::size_t k_;
    OraclePtr oracle_;
    ValidationReport report_;
    std::optional<std::size_t> output_width_;
};

struct Halted {
    Tuple output;
    std::size_t steps = 0;
    Configuration final;
};

struct BudgetExhausted {
    Configuration last;
    std::size_t steps = 0;
};

using RunOutcome = std::variant<Halted, BudgetExhausted>;

Configuration input_i1(const Tuple& x, std::size_t k);
Tuple output_o(const Configuration& c);
/// The machine's result for a stop configuration.
Tuple machine_output(const Machine& m, const Configuration& c);

/// (Z1, ..., Z_{I1}) of a configuration: the oracle query argument.
Tuple query_prefix(const Configuration& c);

enum class StepEffect { moved, fixed_point };

/// One deterministic transition (types 1-9) applied in place. Returns
/// fixed_point when the successor equals the input configuration: at stop,
/// and at a branch whose chosen target is its own label.
StepEffect step_in_place(const Machine& m, Configuration& c);
Configuration step(const Machine& m, Configuration c);

RunOutcome run(const Machine& m, const Tuple& x, std::size_t max_steps);
RunOutcome run_from(const Machine& m, Configuration start, std::size_t max_steps);

/// Every configuration from the initial one through halt or budget.
std::vector<Configuration> trace(const Machine& m, const Tuple& x, std::size_t max_steps);

/// "l | v1,...,vk | u1,...,um | tail=t" with the prefix cut after the last
/// position that differs from the tail.
std::string format_configuration(const Structure& s, const Configuration& c);

} // namespace bssram
