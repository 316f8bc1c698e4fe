#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bssram/machine.hpp"

namespace bssram {

/// Enumerates guess tuples as vectors of 1-based enumerator indices, the
/// empty tuple first.
///
/// With an alphabet of finite size N the order is by length, then
/// lexicographic over 1..N. With an unbounded alphabet it is by weight (sum of
/// indices), then length, then lexicographic, so that every tuple has a finite
/// position.
class GuessEnumerator {
public:
    explicit GuessEnumerator(std::optional<std::uint64_t> alphabet_size);

    const std::vector<std::uint64_t>& current() const noexcept { return cur_; }
    /// 1-based position of current() in the enumeration.
    std::uint64_t position() const noexcept { return pos_; }
    void advance();

private:
    bool next_composition();
    bool next_odometer();

    std::optional<std::uint64_t> size_;
    std::vector<std::uint64_t> cur_;
    std::uint64_t weight_ = 0;
    std::uint64_t pos_ = 1;
};

enum class GuessMode { nd, dnd };
enum class Engine { deterministic, nd, dnd, branch, nu };

std::string_view engine_name(Engine e);
std::optional<Engine> parse_engine(std::string_view name);

/// Throws Error when the machine's instruction set does not fit the engine,
/// or its structure lacks the enumerator (nd) or designated pair (dnd).
void check_engine(const Machine& m, Engine e);

/// Guessing input: x followed by the guesses on the tape, tail x_n.
Configuration input_i2(const Tuple& x, const Tuple& guesses, std::size_t k);

struct NdWitness {
    Tuple guesses;
    std::uint64_t position = 0;
};

/// '0' selects the first target of an NdGoto, '1' the second.
struct BranchWitness {
    std::string choices;
};

struct NuChoice {
    Label label = 0;
    Tuple query;
    NuCandidate candidate;
};

struct NuWitness {
    std::vector<NuChoice> choices;
};

using Witness = std::variant<std::monostate, NdWitness, BranchWitness, NuWitness>;

struct Accepted {
    Witness witness;
    std::size_t steps = 0;
    Tuple output;
};

struct NotWithinBudget {
    std::size_t budget = 0;
    /// Set when exploration stopped at the node limit before the budget.
    bool truncated = false;
};

using SearchOutcome = std::variant<Accepted, NotWithinBudget>;

/// Upper bound on configurations held or expanded by the tree searches.
inline constexpr std::size_t kMaxSearchNodes = std::size_t{1} << 21;
/// Upper bound on oracle membership tests in one brute-force eval_nu call.
inline constexpr std::uint64_t kMaxNuWork = std::uint64_t{1} << 22;

/// Dovetailed guess search. Guess tuple i (1-based, canonical order) that
/// halts after s steps succeeds in round max(i, s); the earliest round wins
/// and ties go to the smaller i. Rounds run up to `budget`.
SearchOutcome search_nd(const Machine& m, const Tuple& x, std::size_t budget, GuessMode mode);

/// Breadth-first search of the NdGoto tree rooted at input_i1, to depth
/// `depth_budget` transitions.
SearchOutcome search_branch(const Machine& m, const Tuple& x, std::size_t depth_budget);

/// Breadth-first search over nu choices. A nu node first asks eval_nu with
/// bound 1 and is requeued with bound + 1 until the budget, spawning one child
/// per newly discovered candidate. Paths are limited to `budget` transitions.
SearchOutcome search_nu(const Machine& m, const Tuple& x, std::size_t budget);

/// Candidates y1 in nu[Q](prefix) found within `bound`, in discovery order.
/// Delegates to Q.witnesses when present; otherwise tests every nonempty
/// extension of length <= bound with enumerator indices <= bound. The list
/// for bound b is a prefix of the list for b + 1.
std::vector<NuCandidate> eval_nu(const OracleSet& q, const Structure& s, const Tuple& prefix, std::size_t bound);

/// Dispatches to run or the matching search engine.
SearchOutcome search(const Machine& m, Engine e, const Tuple& x, std::size_t budget);

RunOutcome replay_nd(const Machine& m, const Tuple& x, const NdWitness& w, std::size_t max_steps);
/// Re-executes resolving each NdGoto by the next recorded bit; running out of
/// bits at an NdGoto ends the run as BudgetExhausted.
RunOutcome replay_branch(const Machine& m, const Tuple& x, const BranchWitness& w, std::size_t max_steps);
/// Re-executes assigning the recorded values at nu instructions. Throws when a
/// recorded extension does not make the query a member of the oracle set.
RunOutcome replay_nu(const Machine& m, const Tuple& x, const NuWitness& w, std::size_t max_steps);

enum class Verdict { agree, m1_only, m2_only, both_unknown };
std::string_view verdict_name(Verdict v);

struct ComparisonRow {
    Tuple input;
    bool accepted1 = false;
    bool accepted2 = false;
    Verdict verdict = Verdict::both_unknown;
};

/// Both machines must be over the same structure. No row ever claims
/// rejection; an input either is accepted within budget or is not.
std::vector<ComparisonRow> compare_halting(const Machine& m1, Engine e1, const Machine& m2, Engine e2,
                                           const std::vector<Tuple>& inputs, std::size_t budget);

} // namespace bssram
