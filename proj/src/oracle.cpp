#include "bssram/oracle.hpp"

#include <boost/multiprecision/integer.hpp>
#include <set>
#include <sstream>

#include "bssram/error.hpp"

namespace bssram {

namespace {

const Rational* rational_of(const Element& e) { return std::get_if<Rational>(&e); }

// Exact square root of a non-negative integer, if it exists.
std::optional<Integer> exact_sqrt(const Integer& n) {
    if (n < 0) return std::nullopt;
    Integer r = boost::multiprecision::sqrt(n);
    if (r * r != n) return std::nullopt;
    return r;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    auto num = exact_sqrt(boost::multiprecision::numerator(q));
    auto den = exact_sqrt(boost::multiprecision::denominator(q));
    if (!num || !den) return std::nullopt;
    return Rational(*num, *den);
}

void require_rationals(std::string_view oracle, const StructurePtr& s) {
    if (!s->has_enumerator() || s->signature().constants == 0 ||
        !std::holds_alternative<Rational>(s->constant(1))) {
        throw Error("oracle '" + std::string(oracle) + "' needs the rational-field-eq structure");
    }
}

} // namespace

std::vector<std::string> builtin_oracle_names() { return {"nonneg-singletons", "squares-pairs", "universal", "empty"}; }

OraclePtr make_builtin_oracle(std::string_view name, const StructurePtr& structure) {
    auto q = std::make_shared<OracleSet>();
    q->name = std::string(name);
    if (name == "nonneg-singletons") {
        require_rationals(name, structure);
        q->member = [](std::span<const Element> xs) {
            if (xs.size() != 1) return false;
            const auto* x = rational_of(xs[0]);
            return x && *x >= 0;
        };
        // Members have length 1, so no proper extension of a prefix is a member.
        q->witnesses = [](std::span<const Element>, std::size_t) { return std::vector<NuCandidate>{}; };
    } else if (name == "squares-pairs") {
        require_rationals(name, structure);
        q->member = [](std::span<const Element> xs) {
            if (xs.size() != 2) return false;
            const auto* x = rational_of(xs[0]);
            const auto* y = rational_of(xs[1]);
            return x && y && *x == *y * *y;
        };
        q->witnesses = [](std::span<const Element> prefix, std::size_t) {
            std::vector<NuCandidate> out;
            if (prefix.size() != 1) return out;
            const auto* x = rational_of(prefix[0]);
            if (!x) return out;
            auto root = rational_sqrt(*x);
            if (!root) return out;
            out.push_back({*root, {*root}});
            if (*root != 0) {
                Rational neg = -*root;
                out.push_back({neg, {neg}});
            }
            return out;
        };
    } else if (name == "universal") {
        q->member = [](std::span<const Element>) { return true; };
        if (structure->has_enumerator()) {
            q->witnesses = [structure](std::span<const Element>, std::size_t bound) {
                std::vector<NuCandidate> out;
                std::uint64_t limit = bound;
                if (auto size = structure->universe_size()) limit = std::min<std::uint64_t>(limit, *size);
                for (std::uint64_t n = 1; n <= limit; ++n) {
                    Element y = structure->enumerate(n);
                    out.push_back({y, {y}});
                }
                return out;
            };
        }
    } else if (name == "empty") {
        q->member = [](std::span<const Element>) { return false; };
        q->witnesses = [](std::span<const Element>, std::size_t) { return std::vector<NuCandidate>{}; };
    } else {
        throw Error("unknown oracle '" + std::string(name) + "'");
    }
    return q;
}

OraclePtr load_finite_oracle(std::string_view text, const StructurePtr& structure) {
    // Tuples are kept both parsed (for witnesses) and rendered (for lookup).
    auto tuples = std::make_shared<std::vector<Tuple>>();
    auto rendered = std::make_shared<std::set<std::vector<std::string>>>();
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line.compare(first, 2, "//") == 0) continue;
        Tuple t;
        try {
            t = structure->parse_tuple(line);
        } catch (const Error& e) {
            throw Error("oracle file line " + std::to_string(lineno) + ": " + e.what());
        }
        std::vector<std::string> r;
        for (const auto& e : t) r.push_back(structure->render(e));
        if (rendered->insert(r).second) tuples->push_back(std::move(t));
    }

    auto q = std::make_shared<OracleSet>();
    q->name = "file";
    q->member = [structure, rendered](std::span<const Element> xs) {
        std::vector<std::string> r;
        r.reserve(xs.size());
        for (const auto& e : xs) r.push_back(structure->render(e));
        return rendered->count(r) > 0;
    };
    q->witnesses = [structure, tuples](std::span<const Element> prefix, std::size_t) {
        std::vector<NuCandidate> out;
        std::set<std::string> seen;
        for (const auto& t : *tuples) {
            if (t.size() <= prefix.size()) continue;
            bool match = true;
            for (std::size_t i = 0; i < prefix.size() && match; ++i) {
                match = structure->render(t[i]) == structure->render(prefix[i]);
            }
            if (!match) continue;
            if (!seen.insert(structure->render(t[prefix.size()])).second) continue;
            out.push_back({t[prefix.size()], Tuple(t.begin() + static_cast<std::ptrdiff_t>(prefix.size()), t.end())});
        }
        return out;
    };
    return q;
}

} // namespace bssram
