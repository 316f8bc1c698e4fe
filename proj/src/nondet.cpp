#include "bssram/nondet.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "bssram/error.hpp"

namespace bssram {

GuessEnumerator::GuessEnumerator(std::optional<std::uint64_t> alphabet_size) : size_(alphabet_size) {
    if (size_ && *size_ == 0) throw Error("guess alphabet is empty");
}

void GuessEnumerator::advance() {
    ++pos_;
    if (size_) {
        if (!next_odometer()) cur_.assign(cur_.size() + 1, 1);
        return;
    }
    if (next_composition()) return;
    const std::size_t len = cur_.size();
    if (len < weight_) {
        cur_.assign(len + 1, 1);
        cur_.back() = weight_ - len;
    } else {
        ++weight_;
        cur_.assign(1, weight_);
    }
}

bool GuessEnumerator::next_odometer() {
    for (std::size_t j = cur_.size(); j-- > 0;) {
        if (cur_[j] < *size_) {
            ++cur_[j];
            std::fill(cur_.begin() + static_cast<std::ptrdiff_t>(j) + 1, cur_.end(), 1);
            return true;
        }
    }
    return false;
}

// Lexicographic successor among compositions of weight_ into cur_.size() parts.
bool GuessEnumerator::next_composition() {
    const std::size_t len = cur_.size();
    if (len < 2) return false;
    std::uint64_t suffix = cur_[len - 1];
    for (std::size_t j = len - 1; j-- > 0;) {
        const std::uint64_t slots = len - 1 - j;
        if (suffix > slots) {
            ++cur_[j];
            const std::uint64_t rest = suffix - 1;
            std::fill(cur_.begin() + static_cast<std::ptrdiff_t>(j) + 1, cur_.end() - 1, 1);
            cur_.back() = rest - (slots - 1);
            return true;
        }
        suffix += cur_[j];
    }
    return false;
}

std::string_view engine_name(Engine e) {
    switch (e) {
    case Engine::deterministic: return "deterministic";
    case Engine::nd: return "nd";
    case Engine::dnd: return "dnd";
    case Engine::branch: return "branch";
    case Engine::nu: return "nu";
    }
    return "?";
}

std::optional<Engine> parse_engine(std::string_view name) {
    for (Engine e : {Engine::deterministic, Engine::nd, Engine::dnd, Engine::branch, Engine::nu}) {
        if (engine_name(e) == name) return e;
    }
    return std::nullopt;
}

void check_engine(const Machine& m, Engine e) {
    const auto& u = m.report().uses;
    auto reject = [&](const char* what) {
        throw Error("engine '" + std::string(engine_name(e)) + "' cannot execute " + what);
    };
    switch (e) {
    case Engine::deterministic:
    case Engine::nd:
    case Engine::dnd:
        if (u.nu) reject("nu assignments");
        if (u.branch) reject("nondeterministic gotos");
        if (e == Engine::nd && !m.structure().has_enumerator()) {
            throw Error("structure '" + m.structure().name() + "' has no enumerator to draw guesses from");
        }
        if (e == Engine::dnd && !m.structure().designated_pair()) {
            throw Error("structure '" + m.structure().name() + "' has no designated constant pair for digital guesses");
        }
        break;
    case Engine::branch:
        if (u.oracle) reject("oracle branches");
        if (u.nu) reject("nu assignments");
        break;
    case Engine::nu:
        if (u.oracle) reject("oracle branches");
        if (u.branch) reject("nondeterministic gotos");
        break;
    }
}

Configuration input_i2(const Tuple& x, const Tuple& guesses, std::size_t k) {
    Configuration c = input_i1(x, k);
    for (std::size_t i = 0; i < guesses.size(); ++i) c.tape.set(x.size() + 1 + i, guesses[i]);
    return c;
}

namespace {

// Lazily materialized enumerator values, 1-based.
class Letters {
public:
    explicit Letters(std::function<Element(std::uint64_t)> f) : f_(std::move(f)) {}
    const Element& operator[](std::uint64_t i) {
        while (cache_.size() < i) cache_.push_back(f_(cache_.size() + 1));
        return cache_[i - 1];
    }

private:
    std::function<Element(std::uint64_t)> f_;
    std::vector<Element> cache_;
};

} // namespace

SearchOutcome search_nd(const Machine& m, const Tuple& x, std::size_t budget, GuessMode mode) {
    check_engine(m, mode == GuessMode::nd ? Engine::nd : Engine::dnd);
    const Structure& s = m.structure();
    std::optional<std::uint64_t> alphabet;
    std::function<Element(std::uint64_t)> letter;
    if (mode == GuessMode::nd) {
        alphabet = s.universe_size();
        letter = [&s](std::uint64_t i) { return s.enumerate(i); };
    } else {
        const auto pair = s.designated_pair();
        alphabet = 2;
        letter = [&s, pair](std::uint64_t i) { return s.constant(i == 1 ? pair->first : pair->second); };
    }
    Letters letters(std::move(letter));

    std::optional<Accepted> best;
    std::size_t best_round = std::numeric_limits<std::size_t>::max();
    for (GuessEnumerator gen(alphabet); gen.position() <= budget && gen.position() < best_round; gen.advance()) {
        const auto pos = static_cast<std::size_t>(gen.position());
        Tuple guesses;
        guesses.reserve(gen.current().size());
        for (auto i : gen.current()) guesses.push_back(letters[i]);
        const std::size_t limit = best ? best_round - 1 : budget;
        auto out = run_from(m, input_i2(x, guesses, m.k()), limit);
        if (auto* h = std::get_if<Halted>(&out)) {
            const std::size_t round = std::max(pos, h->steps);
            if (round < best_round) {
                best_round = round;
                best = Accepted{NdWitness{std::move(guesses), gen.position()}, h->steps, std::move(h->output)};
            }
        }
    }
    if (best) return *std::move(best);
    return NotWithinBudget{budget, false};
}

SearchOutcome search_branch(const Machine& m, const Tuple& x, std::size_t depth_budget) {
    check_engine(m, Engine::branch);
    struct Node {
        Configuration c;
        std::string path;
        std::size_t depth;
    };
    const Program& p = m.program();
    const Label stop = p.stop_label();
    std::deque<Node> queue;
    queue.push_back({input_i1(x, m.k()), {}, 0});
    std::size_t expanded = 0;
    while (!queue.empty()) {
        Node n = std::move(queue.front());
        queue.pop_front();
        if (n.c.label == stop) {
            Tuple out = machine_output(m, n.c);
            return Accepted{BranchWitness{std::move(n.path)}, n.depth, std::move(out)};
        }
        if (n.depth == depth_budget) continue;
        if (++expanded > kMaxSearchNodes || queue.size() >= kMaxSearchNodes) return NotWithinBudget{depth_budget, true};
        if (const auto* g = std::get_if<instr::NdGoto>(&p.at(n.c.label))) {
            Node second{n.c, n.path + '1', n.depth + 1};
            second.c.label = g->second;
            n.c.label = g->first;
            n.path += '0';
            ++n.depth;
            queue.push_back(std::move(n));
            queue.push_back(std::move(second));
            continue;
        }
        // A deterministic fixed point never reaches stop.
        if (step_in_place(m, n.c) == StepEffect::fixed_point) continue;
        ++n.depth;
        queue.push_back(std::move(n));
    }
    return NotWithinBudget{depth_budget, false};
}

SearchOutcome search_nu(const Machine& m, const Tuple& x, std::size_t budget) {
    check_engine(m, Engine::nu);
    struct Node {
        Configuration c;
        std::vector<NuChoice> choices;
        std::size_t depth;
        std::size_t bound = 1;
        std::size_t spawned = 0;
    };
    const Program& p = m.program();
    const Label stop = p.stop_label();
    std::deque<Node> queue;
    queue.push_back({input_i1(x, m.k()), {}, 0});
    std::size_t expanded = 0;
    bool truncated = false;
    while (!queue.empty()) {
        Node n = std::move(queue.front());
        queue.pop_front();
        if (n.c.label == stop) {
            Tuple out = machine_output(m, n.c);
            return Accepted{NuWitness{std::move(n.choices)}, n.depth, std::move(out)};
        }
        if (n.depth == budget) continue;
        if (++expanded > kMaxSearchNodes || queue.size() >= kMaxSearchNodes) {
            truncated = true;
            break;
        }
        if (const auto* nu = std::get_if<instr::NuAssign>(&p.at(n.c.label))) {
            Tuple query = query_prefix(n.c);
            auto cands = eval_nu(*m.oracle(), m.structure(), query, n.bound);
            for (std::size_t j = n.spawned; j < cands.size(); ++j) {
                Node child{n.c, n.choices, n.depth + 1};
                child.c.tape.set(nu->dst, cands[j].value);
                ++child.c.label;
                child.choices.push_back({n.c.label, query, std::move(cands[j])});
                queue.push_back(std::move(child));
            }
            if (n.bound < budget) {
                n.spawned = std::max(n.spawned, cands.size());
                ++n.bound;
                queue.push_back(std::move(n));
            }
            continue;
        }
        if (step_in_place(m, n.c) == StepEffect::fixed_point) continue;
        ++n.depth;
        queue.push_back(std::move(n));
    }
    return NotWithinBudget{budget, truncated};
}

std::vector<NuCandidate> eval_nu(const OracleSet& q, const Structure& s, const Tuple& prefix, std::size_t bound) {
    if (bound == 0) throw Error("nu evaluation bound must be at least 1");
    if (q.witnesses) return q.witnesses(prefix, bound);
    if (!s.has_enumerator()) {
        throw Error("oracle '" + q.name + "' has no witness procedure and structure '" + s.name() +
                    "' has no enumerator");
    }
    const std::uint64_t universe = s.universe_size().value_or(std::numeric_limits<std::uint64_t>::max());
    Letters letters([&s](std::uint64_t i) { return s.enumerate(i); });
    std::vector<NuCandidate> out;
    std::set<std::uint64_t> found;
    std::uint64_t work = 0;
    Tuple probe = prefix;
    std::vector<std::uint64_t> idx;
    // Bound b adds the tuples of length b or with some index equal to b.
    for (std::uint64_t b = 1; b <= bound; ++b) {
        const std::uint64_t cap = std::min<std::uint64_t>(b, universe);
        for (std::uint64_t len = 1; len <= b; ++len) {
            if (len < b && cap < b) continue;
            idx.assign(len, 1);
            for (;;) {
                const bool fresh = len == b || std::find(idx.begin(), idx.end(), b) != idx.end();
                if (fresh && !found.count(idx[0])) {
                    if (++work > kMaxNuWork) throw Error("nu evaluation exceeded its work limit");
                    probe.resize(prefix.size());
                    for (auto i : idx) probe.push_back(letters[i]);
                    if (q.member(probe)) {
                        found.insert(idx[0]);
                        out.push_back({probe[prefix.size()], Tuple(probe.begin() + static_cast<std::ptrdiff_t>(prefix.size()), probe.end())});
                    }
                }
                std::size_t j = len;
                while (j > 0 && idx[j - 1] == cap) idx[--j] = 1;
                if (j == 0) break;
                ++idx[j - 1];
            }
        }
    }
    return out;
}

SearchOutcome search(const Machine& m, Engine e, const Tuple& x, std::size_t budget) {
    switch (e) {
    case Engine::deterministic: {
        check_engine(m, e);
        auto out = run(m, x, budget);
        if (auto* h = std::get_if<Halted>(&out)) return Accepted{std::monostate{}, h->steps, std::move(h->output)};
        return NotWithinBudget{budget, false};
    }
    case Engine::nd: return search_nd(m, x, budget, GuessMode::nd);
    case Engine::dnd: return search_nd(m, x, budget, GuessMode::dnd);
    case Engine::branch: return search_branch(m, x, budget);
    case Engine::nu: return search_nu(m, x, budget);
    }
    throw Error("unknown engine");
}

RunOutcome replay_nd(const Machine& m, const Tuple& x, const NdWitness& w, std::size_t max_steps) {
    check_engine(m, Engine::nd);
    return run_from(m, input_i2(x, w.guesses, m.k()), max_steps);
}

namespace {

// Runs from input_i1, handing NdGoto and NuAssign instructions to `choose`,
// which returns false when no recorded choice is left.
RunOutcome replay_with(const Machine& m, const Tuple& x, std::size_t max_steps,
                       const std::function<bool(Configuration&)>& choose) {
    const Program& p = m.program();
    const Label stop = p.stop_label();
    Configuration c = input_i1(x, m.k());
    std::size_t steps = 0;
    while (c.label != stop) {
        if (steps == max_steps) return BudgetExhausted{std::move(c), steps};
        const auto& ins = p.at(c.label);
        if (std::holds_alternative<instr::NdGoto>(ins) || std::holds_alternative<instr::NuAssign>(ins)) {
            if (!choose(c)) return BudgetExhausted{std::move(c), steps};
        } else if (step_in_place(m, c) == StepEffect::fixed_point) {
            return BudgetExhausted{std::move(c), max_steps};
        }
        ++steps;
    }
    Tuple out = machine_output(m, c);
    return Halted{std::move(out), steps, std::move(c)};
}

} // namespace

RunOutcome replay_branch(const Machine& m, const Tuple& x, const BranchWitness& w, std::size_t max_steps) {
    check_engine(m, Engine::branch);
    std::size_t next = 0;
    return replay_with(m, x, max_steps, [&](Configuration& c) {
        if (next == w.choices.size()) return false;
        const auto& g = std::get<instr::NdGoto>(m.program().at(c.label));
        const char bit = w.choices[next++];
        if (bit != '0' && bit != '1') throw Error("branch choices must be 0 or 1");
        c.label = bit == '0' ? g.first : g.second;
        return true;
    });
}

RunOutcome replay_nu(const Machine& m, const Tuple& x, const NuWitness& w, std::size_t max_steps) {
    check_engine(m, Engine::nu);
    std::size_t next = 0;
    return replay_with(m, x, max_steps, [&](Configuration& c) {
        if (next == w.choices.size()) return false;
        const auto& nu = std::get<instr::NuAssign>(m.program().at(c.label));
        const NuCandidate& cand = w.choices[next++].candidate;
        Tuple full = query_prefix(c);
        full.insert(full.end(), cand.extension.begin(), cand.extension.end());
        if (cand.extension.empty() || !m.oracle()->member(full)) {
            throw Error("recorded nu choice at label " + std::to_string(c.label) + " has no valid extension");
        }
        c.tape.set(nu.dst, cand.value);
        ++c.label;
        return true;
    });
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::agree: return "agree";
    case Verdict::m1_only: return "M1-only";
    case Verdict::m2_only: return "M2-only";
    case Verdict::both_unknown: return "both-unknown";
    }
    return "?";
}

std::vector<ComparisonRow> compare_halting(const Machine& m1, Engine e1, const Machine& m2, Engine e2,
                                           const std::vector<Tuple>& inputs, std::size_t budget) {
    const Structure& s1 = m1.structure();
    const Structure& s2 = m2.structure();
    if (&s1 != &s2 && (s1.name() != s2.name() || !(s1.signature() == s2.signature()))) {
        throw Error("machines are over different structures ('" + s1.name() + "' and '" + s2.name() + "')");
    }
    check_engine(m1, e1);
    check_engine(m2, e2);
    std::vector<ComparisonRow> rows;
    rows.reserve(inputs.size());
    for (const auto& x : inputs) {
        ComparisonRow r{x};
        r.accepted1 = std::holds_alternative<Accepted>(search(m1, e1, x, budget));
        r.accepted2 = std::holds_alternative<Accepted>(search(m2, e2, x, budget));
        r.verdict = r.accepted1 ? (r.accepted2 ? Verdict::agree : Verdict::m1_only)
                                : (r.accepted2 ? Verdict::m2_only : Verdict::both_unknown);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace bssram
