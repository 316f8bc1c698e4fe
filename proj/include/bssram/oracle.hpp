#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bssram/structure.hpp"

namespace bssram {

/// A value y1 for a nu-query together with the tuple (y1,...,ym) that shows
/// prefix.(y1,...,ym) is a member of the oracle set.
struct NuCandidate {
    Element value;
    Tuple extension;
};

/// An oracle set Q over U^infinity.
///
/// `member` must be total and deterministic. `witnesses`, when present,
/// answers nu-queries directly: for a prefix and a search bound it returns
/// candidates in a fixed order, and the list for bound b must be a prefix of
/// the list for any larger bound.
struct OracleSet {
    std::string name;
    std::function<bool(std::span<const Element>)> member;
    std::function<std::vector<NuCandidate>(std::span<const Element>, std::size_t)> witnesses;
};

using OraclePtr = std::shared_ptr<const OracleSet>;

/// nonneg-singletons: {(x) | x >= 0} over the rationals.
/// squares-pairs: {(x, y) | x = y*y} over the rationals.
/// universal: every tuple; empty: no tuple.
OraclePtr make_builtin_oracle(std::string_view name, const StructurePtr& structure);
std::vector<std::string> builtin_oracle_names();

/// Finite oracle: one member tuple per non-empty line, elements in the
/// structure's comma-separated syntax. Lines starting with '//' are comments.
/// Membership compares canonical renderings.
OraclePtr load_finite_oracle(std::string_view text, const StructurePtr& structure);

} // namespace bssram
