#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bssram {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Gaussian {
    Rational re;
    Rational im;
};

// Index into the owning structure's symbol table.
struct Symbol {
    std::uint32_t id;
};

// An individual of some structure. Engine code treats it as opaque: the only
// comparisons it performs go through relations the structure declares.
using Element = std::variant<Symbol, Integer, Rational, Gaussian>;
using Tuple = std::vector<Element>;

/// Arity profile (n1; m1..m_n2; k1..k_n3).
struct Signature {
    std::size_t constants = 0;
    std::vector<std::size_t> op_arities;
    std::vector<std::size_t> rel_arities;

    bool operator==(const Signature&) const = default;
};

/// Renders as "(n1;m1,m2;k1)".
std::string format_signature(const Signature& sig);

struct Operation {
    std::string name;
    std::size_t arity = 0;
    std::function<Element(std::span<const Element>)> apply;
};

struct Relation {
    std::string name;
    std::size_t arity = 0;
    std::function<bool(std::span<const Element>)> test;
    // Set when the relation is the identity on the universe.
    bool is_identity = false;
};

/// Canonical enumeration n -> element, 1-based. `size` is set for finite
/// universes; `at` is then only defined on 1..size.
struct Enumerator {
    std::optional<std::uint64_t> size;
    std::function<Element(std::uint64_t)> at;
};

struct ElementCodec {
    std::function<std::string(const Element&)> render;
    std::function<Element(std::string_view)> parse;
};

/// A first-order structure (U; constants; operations; relations). Immutable
/// after construction and safe to share between concurrent runs.
class Structure {
public:
    struct Parts {
        std::string name;
        std::vector<Element> constants;
        std::vector<Operation> ops;
        std::vector<Relation> rels;
        ElementCodec codec;
        std::optional<Enumerator> enumerator;
        // 1-based constant indices; defaults to (1,2) when there are >= 2 constants.
        std::optional<std::pair<std::size_t, std::size_t>> designated_pair;
    };

    explicit Structure(Parts parts);

    const std::string& name() const noexcept { return parts_.name; }
    const Signature& signature() const noexcept { return signature_; }

    const Element& constant(std::size_t i) const;
    const Operation& operation(std::size_t i) const;
    const Relation& relation(std::size_t i) const;

    Element apply(std::size_t op, std::span<const Element> args) const;
    bool test(std::size_t rel, std::span<const Element> args) const;

    bool has_enumerator() const noexcept { return parts_.enumerator.has_value(); }
    std::optional<std::uint64_t> universe_size() const;
    Element enumerate(std::uint64_t n) const;

    std::optional<std::pair<std::size_t, std::size_t>> designated_pair() const noexcept {
        return parts_.designated_pair;
    }

    /// 1-based index of a declared identity relation, if any.
    std::optional<std::size_t> identity_relation() const;

    std::string render(const Element& e) const { return parts_.codec.render(e); }
    Element parse_element(std::string_view text) const { return parts_.codec.parse(text); }

    std::string render_tuple(std::span<const Element> xs) const;
    /// Comma-separated canonical renderings; empty text yields an empty tuple.
    Tuple parse_tuple(std::string_view text) const;

private:
    Parts parts_;
    Signature signature_;
};

using StructurePtr = std::shared_ptr<const Structure>;
using Params = std::vector<std::pair<std::string, std::string>>;

/// Names: bit, peano, rational-field-eq, gaussian-rational-field-eq, bool-symbols.
/// Accepted param: pair=i,j (designated constants for digital guessing).
StructurePtr get_builtin_structure(std::string_view name, const Params& params = {});
std::vector<std::string> builtin_structure_names();

/// Line-oriented finite structure description; see README for the format.
StructurePtr load_finite_structure(std::string_view config_text);

Element apply_operation(const Structure& s, std::size_t i, std::span<const Element> args);
bool test_relation(const Structure& s, std::size_t i, std::span<const Element> args);
Element enumerate_universe(const Structure& s, std::uint64_t n);

/// n-th rational of the canonical zig-zag (0, 1, -1, 2, -2, 1/2, -1/2, 3, ...):
/// ordered by |p|+q, then by ascending denominator, positive before negative.
Rational nth_rational(std::uint64_t n);

// Element text forms shared by the built-ins and the CLI.
std::string render_rational(const Rational& q);
Rational parse_rational(std::string_view text);
std::string render_gaussian(const Gaussian& z);
Gaussian parse_gaussian(std::string_view text);

/// The symbols of the boolean-formula universe, in constant order.
inline constexpr std::string_view kBoolSymbols[] = {
    "0", "1", "not", "and", "or", "iff", "and0", "or0", "iff0",
    "and1", "or1", "iff1", "Lambda", "#", "q0"};

} // namespace bssram
