#include "bssram/structure.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "bssram/error.hpp"

namespace bssram {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

void check_arity(std::string_view what, std::size_t expected, std::size_t got) {
    if (expected != got) {
        throw Error(std::string(what) + " arity mismatch: expected " + std::to_string(expected) +
                    " arguments, got " + std::to_string(got));
    }
}

// Symbol-table codec used by every finite universe.
ElementCodec symbol_codec(std::vector<std::string> names) {
    auto table = std::make_shared<const std::vector<std::string>>(std::move(names));
    std::unordered_map<std::string, std::uint32_t> lookup;
    for (std::uint32_t i = 0; i < table->size(); ++i) lookup.emplace((*table)[i], i);
    auto index = std::make_shared<const std::unordered_map<std::string, std::uint32_t>>(std::move(lookup));
    return ElementCodec{
        [table](const Element& e) -> std::string {
            const auto* s = std::get_if<Symbol>(&e);
            if (!s || s->id >= table->size()) return "<foreign>";
            return (*table)[s->id];
        },
        [index](std::string_view text) -> Element {
            auto it = index->find(std::string(trim(text)));
            if (it == index->end()) throw Error("unknown element '" + std::string(text) + "'");
            return Symbol{it->second};
        }};
}

Relation symbol_identity(std::string name = "=") {
    return Relation{std::move(name), 2,
                    [](std::span<const Element> a) {
                        return std::get<Symbol>(a[0]).id == std::get<Symbol>(a[1]).id;
                    },
                    true};
}

std::optional<std::pair<std::size_t, std::size_t>> parse_pair_param(const Params& params,
                                                                    std::size_t n_constants) {
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    for (const auto& [key, value] : params) {
        if (key != "pair") throw Error("invalid structure parameter '" + key + "'");
        auto comma = value.find(',');
        std::size_t a = 0, b = 0;
        if (comma == std::string::npos ||
            std::from_chars(value.data(), value.data() + comma, a).ec != std::errc{} ||
            std::from_chars(value.data() + comma + 1, value.data() + value.size(), b).ec != std::errc{}) {
            throw Error("invalid structure parameter pair='" + value + "' (expected i,j)");
        }
        if (a == 0 || b == 0 || a > n_constants || b > n_constants || a == b) {
            throw Error("invalid structure parameter pair='" + value + "'");
        }
        pair = std::pair{a, b};
    }
    return pair;
}

StructurePtr make_symbol_structure(std::string name, std::vector<std::string> symbols,
                                   std::vector<std::size_t> constant_ids, const Params& params) {
    Structure::Parts parts;
    parts.name = std::move(name);
    for (auto id : constant_ids) parts.constants.push_back(Symbol{static_cast<std::uint32_t>(id)});
    parts.rels.push_back(symbol_identity());
    const auto size = static_cast<std::uint64_t>(symbols.size());
    parts.enumerator = Enumerator{size, [](std::uint64_t n) -> Element {
                                      return Symbol{static_cast<std::uint32_t>(n - 1)};
                                  }};
    parts.codec = symbol_codec(std::move(symbols));
    parts.designated_pair = parse_pair_param(params, parts.constants.size());
    return std::make_shared<const Structure>(std::move(parts));
}

const Rational& as_rational(const Element& e) { return std::get<Rational>(e); }
const Gaussian& as_gaussian(const Element& e) { return std::get<Gaussian>(e); }

} // namespace

std::string format_signature(const Signature& sig) {
    return "(" + std::to_string(sig.constants) + ";" + join_sizes(sig.op_arities) + ";" +
           join_sizes(sig.rel_arities) + ")";
}

// --- Structure -------------------------------------------------------------

Structure::Structure(Parts parts) : parts_(std::move(parts)) {
    signature_.constants = parts_.constants.size();
    for (const auto& op : parts_.ops) {
        if (op.arity == 0) throw Error("operation '" + op.name + "' must have arity >= 1");
        signature_.op_arities.push_back(op.arity);
    }
    for (const auto& rel : parts_.rels) {
        if (rel.arity == 0) throw Error("relation '" + rel.name + "' must have arity >= 1");
        signature_.rel_arities.push_back(rel.arity);
    }
    if (parts_.designated_pair) {
        auto [a, b] = *parts_.designated_pair;
        if (a == 0 || b == 0 || a > signature_.constants || b > signature_.constants || a == b) {
            throw Error("designated pair must name two distinct constants");
        }
    } else if (signature_.constants >= 2) {
        parts_.designated_pair = std::pair<std::size_t, std::size_t>{1, 2};
    }
}

const Element& Structure::constant(std::size_t i) const {
    if (i == 0 || i > parts_.constants.size()) {
        throw Error("constant index " + std::to_string(i) + " out of range");
    }
    return parts_.constants[i - 1];
}

const Operation& Structure::operation(std::size_t i) const {
    if (i == 0 || i > parts_.ops.size()) {
        throw Error("op index " + std::to_string(i) + " out of range");
    }
    return parts_.ops[i - 1];
}

const Relation& Structure::relation(std::size_t i) const {
    if (i == 0 || i > parts_.rels.size()) {
        throw Error("relation index " + std::to_string(i) + " out of range");
    }
    return parts_.rels[i - 1];
}

Element Structure::apply(std::size_t op, std::span<const Element> args) const {
    const auto& f = operation(op);
    check_arity("operation", f.arity, args.size());
    return f.apply(args);
}

bool Structure::test(std::size_t rel, std::span<const Element> args) const {
    const auto& r = relation(rel);
    check_arity("relation", r.arity, args.size());
    return r.test(args);
}

std::optional<std::uint64_t> Structure::universe_size() const {
    if (!parts_.enumerator) return std::nullopt;
    return parts_.enumerator->size;
}

Element Structure::enumerate(std::uint64_t n) const {
    if (!parts_.enumerator) throw Error("structure '" + parts_.name + "' has no enumerator");
    if (n == 0) throw Error("enumeration index must be >= 1");
    if (parts_.enumerator->size && n > *parts_.enumerator->size) {
        throw Error("enumeration index " + std::to_string(n) + " exceeds universe size " +
                    std::to_string(*parts_.enumerator->size));
    }
    return parts_.enumerator->at(n);
}

std::optional<std::size_t> Structure::identity_relation() const {
    for (std::size_t i = 0; i < parts_.rels.size(); ++i) {
        if (parts_.rels[i].is_identity) return i + 1;
    }
    return std::nullopt;
}

std::string Structure::render_tuple(std::span<const Element> xs) const {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += render(xs[i]);
    }
    return out;
}

Tuple Structure::parse_tuple(std::string_view text) const {
    Tuple out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto comma = text.find(',', start);
        auto piece = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        if (piece.empty()) throw Error("empty element in tuple '" + std::string(text) + "'");
        out.push_back(parse_element(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Element apply_operation(const Structure& s, std::size_t i, std::span<const Element> args) {
    return s.apply(i, args);
}

bool test_relation(const Structure& s, std::size_t i, std::span<const Element> args) {
    return s.test(i, args);
}

Element enumerate_universe(const Structure& s, std::uint64_t n) { return s.enumerate(n); }

// --- element text forms ----------------------------------------------------

std::string render_rational(const Rational& q) { return q.str(); }

Rational parse_rational(std::string_view text) {
    text = trim(text);
    static const std::regex re(R"(^([+-]?)(\d+)(?:/(\d+))?$)");
    std::cmatch m;
    if (!std::regex_match(text.begin(), text.end(), m, re)) {
        throw Error("malformed rational '" + std::string(text) + "'");
    }
    Integer num(m[2].str());
    Integer den = m[3].matched ? Integer(m[3].str()) : Integer(1);
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    if (m[1].str() == "-") num = -num;
    return Rational(num, den);
}

std::string render_gaussian(const Gaussian& z) {
    if (z.im == 0) return render_rational(z.re);
    std::string imag;
    if (z.im == 1) imag = "i";
    else if (z.im == -1) imag = "-i";
    else imag = render_rational(z.im) + "*i";
    if (z.re == 0) return imag;
    return render_rational(z.re) + (z.im > 0 ? "+" : "") + imag;
}

Gaussian parse_gaussian(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw Error("empty complex literal");
    if (s.back() != 'i') return Gaussian{parse_rational(s), Rational(0)};
    s.pop_back();
    if (!s.empty() && s.back() == '*') s.pop_back();
    // The imaginary part starts at the last sign that is not the leading one.
    std::size_t split = 0;
    for (std::size_t i = s.size(); i-- > 1;) {
        if (s[i] == '+' || s[i] == '-') {
            split = i;
            break;
        }
    }
    std::string real_part = s.substr(0, split);
    std::string imag_part = s.substr(split);
    Rational im;
    if (imag_part.empty() || imag_part == "+") im = 1;
    else if (imag_part == "-") im = -1;
    else im = parse_rational(imag_part);
    Rational re = real_part.empty() ? Rational(0) : parse_rational(real_part);
    return Gaussian{re, im};
}

// --- enumerations ----------------------------------------------------------

Rational nth_rational(std::uint64_t n) {
    if (n == 0) throw Error("enumeration index must be >= 1");
    if (n == 1) return Rational(0);
    std::uint64_t seen = 1;
    for (std::uint64_t height = 2;; ++height) {
        for (std::uint64_t den = 1; den < height; ++den) {
            const std::uint64_t num = height - den;
            if (std::gcd(num, den) != 1) continue;
            if (seen + 1 == n) return Rational(Integer(num), Integer(den));
            if (seen + 2 == n) return Rational(-Integer(num), Integer(den));
            seen += 2;
        }
    }
}

namespace {

// Diagonal bijection N+ -> N+ x N+: (1,1), (1,2), (2,1), (1,3), ...
std::pair<std::uint64_t, std::uint64_t> nth_pair(std::uint64_t n) {
    std::uint64_t diag = 1;
    std::uint64_t before = 0;
    while (before + diag < n) {
        before += diag;
        ++diag;
    }
    const std::uint64_t a = n - before;
    return {a, diag + 1 - a};
}

StructurePtr make_rational_field() {
    Structure::Parts parts;
    parts.name = "rational-field-eq";
    parts.constants = {Rational(1), Rational(0)};
    parts.ops.push_back({"+", 2, [](std::span<const Element> a) -> Element {
                             return Rational(as_rational(a[0]) + as_rational(a[1]));
                         }});
    parts.ops.push_back({"-", 2, [](std::span<const Element> a) -> Element {
                             return Rational(as_rational(a[0]) - as_rational(a[1]));
                         }});
    parts.ops.push_back({"*", 2, [](std::span<const Element> a) -> Element {
                             return Rational(as_rational(a[0]) * as_rational(a[1]));
                         }});
    parts.rels.push_back({"=", 2,
                          [](std::span<const Element> a) { return as_rational(a[0]) == as_rational(a[1]); },
                          true});
    parts.codec = ElementCodec{
        [](const Element& e) -> std::string {
            const auto* q = std::get_if<Rational>(&e);
            return q ? render_rational(*q) : "<foreign>";
        },
        [](std::string_view text) -> Element { return parse_rational(text); }};
    parts.enumerator = Enumerator{std::nullopt, [](std::uint64_t n) -> Element { return nth_rational(n); }};
    return std::make_shared<const Structure>(std::move(parts));
}

StructurePtr make_gaussian_field() {
    Structure::Parts parts;
    parts.name = "gaussian-rational-field-eq";
    parts.constants = {Gaussian{1, 0}, Gaussian{0, 0}, Gaussian{0, 1}};
    parts.ops.push_back({"+", 2, [](std::span<const Element> a) -> Element {
                             const auto& x = as_gaussian(a[0]);
                             const auto& y = as_gaussian(a[1]);
                             return Gaussian{x.re + y.re, x.im + y.im};
                         }});
    parts.ops.push_back({"-", 2, [](std::span<const Element> a) -> Element {
                             const auto& x = as_gaussian(a[0]);
                             const auto& y = as_gaussian(a[1]);
                             return Gaussian{x.re - y.re, x.im - y.im};
                         }});
    parts.ops.push_back({"*", 2, [](std::span<const Element> a) -> Element {
                             const auto& x = as_gaussian(a[0]);
                             const auto& y = as_gaussian(a[1]);
                             return Gaussian{x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
                         }});
    parts.rels.push_back({"=", 2,
                          [](std::span<const Element> a) {
                              const auto& x = as_gaussian(a[0]);
                              const auto& y = as_gaussian(a[1]);
                              return x.re == y.re && x.im == y.im;
                          },
                          true});
    parts.codec = ElementCodec{
        [](const Element& e) -> std::string {
            const auto* z = std::get_if<Gaussian>(&e);
            return z ? render_gaussian(*z) : "<foreign>";
        },
        [](std::string_view text) -> Element { return parse_gaussian(text); }};
    parts.enumerator = Enumerator{std::nullopt, [](std::uint64_t n) -> Element {
                                      auto [a, b] = nth_pair(n);
                                      return Gaussian{nth_rational(a), nth_rational(b)};
                                  }};
    return std::make_shared<const Structure>(std::move(parts));
}

StructurePtr make_peano(const Params& params) {
    Structure::Parts parts;
    parts.name = "peano";
    parts.constants = {Integer(1)};
    parts.ops.push_back({"succ", 1, [](std::span<const Element> a) -> Element {
                             return Integer(std::get<Integer>(a[0]) + 1);
                         }});
    parts.rels.push_back({"=", 2,
                          [](std::span<const Element> a) {
                              return std::get<Integer>(a[0]) == std::get<Integer>(a[1]);
                          },
                          true});
    parts.codec = ElementCodec{
        [](const Element& e) -> std::string {
            const auto* n = std::get_if<Integer>(&e);
            return n ? n->str() : "<foreign>";
        },
        [](std::string_view text) -> Element {
            auto t = trim(text);
            static const std::regex re(R"(^\+?\d+$)");
            if (!std::regex_match(t.begin(), t.end(), re)) {
                throw Error("malformed positive integer '" + std::string(t) + "'");
            }
            Integer n(std::string(t.front() == '+' ? t.substr(1) : t));
            if (n < 1) throw Error("peano universe starts at 1");
            return n;
        }};
    parts.enumerator = Enumerator{std::nullopt, [](std::uint64_t n) -> Element { return Integer(n); }};
    parts.designated_pair = parse_pair_param(params, parts.constants.size());
    return std::make_shared<const Structure>(std::move(parts));
}

} // namespace

std::vector<std::string> builtin_structure_names() {
    return {"bit", "peano", "rational-field-eq", "gaussian-rational-field-eq", "bool-symbols"};
}

StructurePtr get_builtin_structure(std::string_view name, const Params& params) {
    if (name == "bit") return make_symbol_structure("bit", {"0", "1"}, {0, 1}, params);
    if (name == "peano") return make_peano(params);
    if (name == "bool-symbols") {
        std::vector<std::string> symbols(std::begin(kBoolSymbols), std::end(kBoolSymbols));
        std::vector<std::size_t> ids(symbols.size());
        std::iota(ids.begin(), ids.end(), 0);
        return make_symbol_structure("bool-symbols", std::move(symbols), std::move(ids), params);
    }
    if (name == "rational-field-eq" || name == "gaussian-rational-field-eq") {
        auto base = name == "rational-field-eq" ? make_rational_field() : make_gaussian_field();
        if (params.empty()) return base;
        // Rebuild with the requested pair; the parts are cheap to recreate.
        auto pair = parse_pair_param(params, base->signature().constants);
        Structure::Parts parts;
        parts.name = base->name();
        for (std::size_t i = 1; i <= base->signature().constants; ++i) parts.constants.push_back(base->constant(i));
        for (std::size_t i = 1; i <= base->signature().op_arities.size(); ++i) parts.ops.push_back(base->operation(i));
        for (std::size_t i = 1; i <= base->signature().rel_arities.size(); ++i) parts.rels.push_back(base->relation(i));
        parts.codec = ElementCodec{[base](const Element& e) { return base->render(e); },
                                   [base](std::string_view t) { return base->parse_element(t); }};
        parts.enumerator = Enumerator{std::nullopt, [base](std::uint64_t n) { return base->enumerate(n); }};
        parts.designated_pair = pair;
        return std::make_shared<const Structure>(std::move(parts));
    }
    throw Error("unknown structure '" + std::string(name) + "'");
}

// --- finite structures -----------------------------------------------------

namespace {

struct TableSection {
    bool is_op = false;
    std::string name;
    std::size_t arity = 0;
    std::size_t header_line = 0;
    bool identity = false;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line, tokens)
};

[[noreturn]] void config_error(std::size_t line, const std::string& msg) {
    throw Error("structure config line " + std::to_string(line) + ": " + msg);
}

std::size_t flat_index(std::span<const std::uint32_t> ids, std::size_t base) {
    std::size_t idx = 0;
    for (auto id : ids) idx = idx * base + id;
    return idx;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
}

} // namespace

StructurePtr load_finite_structure(std::string_view config_text) {
    static const std::regex table_header(R"(^(op|rel)\s+(\S+)/(\d+)\s*:(.*)$)");

    std::vector<std::string> universe;
    std::vector<std::string> constant_names;
    std::vector<TableSection> sections;
    enum class Where { None, Universe, Constants, Table } where = Where::None;
    bool saw_universe = false;

    std::istringstream in{std::string(config_text)};
    std::size_t lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        std::string line(trim(raw));
        if (line.empty() || line.rfind("//", 0) == 0) continue;

        std::smatch m;
        if (line.rfind("universe:", 0) == 0) {
            if (saw_universe) config_error(lineno, "duplicate universe section");
            saw_universe = true;
            where = Where::Universe;
            for (auto& t : split_ws(line.substr(9))) universe.push_back(t);
        } else if (line.rfind("constants:", 0) == 0) {
            where = Where::Constants;
            for (auto& t : split_ws(line.substr(10))) constant_names.push_back(t);
        } else if (std::regex_match(line, m, table_header)) {
            TableSection sec;
            sec.is_op = m[1] == "op";
            sec.name = m[2];
            sec.arity = std::stoul(m[3]);
            sec.header_line = lineno;
            if (sec.arity == 0) config_error(lineno, "arity must be >= 1");
            auto rest = trim(std::string_view(m[4].first, m[4].second));
            if (rest == "@identity") {
                if (sec.is_op || sec.arity != 2) config_error(lineno, "@identity needs a binary relation");
                sec.identity = true;
            } else if (!rest.empty()) {
                sec.rows.emplace_back(lineno, split_ws(rest));
            }
            sections.push_back(std::move(sec));
            where = Where::Table;
        } else {
            switch (where) {
            case Where::Universe:
                for (auto& t : split_ws(line)) universe.push_back(t);
                break;
            case Where::Constants:
                for (auto& t : split_ws(line)) constant_names.push_back(t);
                break;
            case Where::Table:
                if (sections.back().identity) config_error(lineno, "rows after @identity");
                sections.back().rows.emplace_back(lineno, split_ws(line));
                break;
            case Where::None:
                config_error(lineno, "content before any section header");
            }
        }
    }

    if (universe.empty()) throw Error("structure config: universe is empty or missing");
    std::unordered_map<std::string, std::uint32_t> ids;
    for (std::uint32_t i = 0; i < universe.size(); ++i) {
        if (!ids.emplace(universe[i], i).second) {
            throw Error("structure config: duplicate element '" + universe[i] + "'");
        }
    }
    auto lookup = [&](std::size_t line, const std::string& name) {
        auto it = ids.find(name);
        if (it == ids.end()) config_error(line, "unknown element '" + name + "'");
        return it->second;
    };

    const std::size_t n = universe.size();
    Structure::Parts parts;
    parts.name = "finite";
    for (const auto& c : constant_names) parts.constants.push_back(Symbol{lookup(0, c)});

    for (const auto& sec : sections) {
        const std::size_t cells = ipow(n, sec.arity);
        if (sec.is_op) {
            auto table = std::make_shared<std::vector<std::uint32_t>>(cells, UINT32_MAX);
            for (const auto& [line, toks] : sec.rows) {
                if (toks.size() != sec.arity + 2 || toks[sec.arity] != "->") {
                    config_error(line, "op row must read '<args> -> <result>' with " +
                                           std::to_string(sec.arity) + " arguments");
                }
                std::vector<std::uint32_t> args;
                for (std::size_t k = 0; k < sec.arity; ++k) args.push_back(lookup(line, toks[k]));
                auto& cell = (*table)[flat_index(args, n)];
                if (cell != UINT32_MAX) config_error(line, "duplicate row for op '" + sec.name + "'");
                cell = lookup(line, toks.back());
            }
            for (std::size_t idx = 0; idx < cells; ++idx) {
                if ((*table)[idx] != UINT32_MAX) continue;
                std::string args;
                for (std::size_t k = 0, rem = idx; k < sec.arity; ++k) {
                    std::size_t digit = (rem / ipow(n, sec.arity - 1 - k)) % n;
                    args += (k ? " " : "") + universe[digit];
                }
                config_error(sec.header_line, "op '" + sec.name + "' is not total: missing row for (" + args + ")");
            }
            const std::size_t arity = sec.arity;
            parts.ops.push_back({sec.name, arity,
                                 [table = std::shared_ptr<const std::vector<std::uint32_t>>(table), n,
                                  arity](std::span<const Element> a) -> Element {
                                     std::vector<std::uint32_t> args(arity);
                                     for (std::size_t k = 0; k < arity; ++k) args[k] = std::get<Symbol>(a[k]).id;
                                     return Symbol{(*table)[flat_index(args, n)]};
                                 }});
        } else if (sec.identity) {
            parts.rels.push_back(symbol_identity(sec.name));
        } else {
            auto members = std::make_shared<std::vector<bool>>(cells, false);
            for (const auto& [line, toks] : sec.rows) {
                if (toks.size() != sec.arity) {
                    config_error(line, "rel row must list " + std::to_string(sec.arity) + " elements");
                }
                std::vector<std::uint32_t> args;
                for (const auto& t : toks) args.push_back(lookup(line, t));
                (*members)[flat_index(args, n)] = true;
            }
            const std::size_t arity = sec.arity;
            parts.rels.push_back({sec.name, arity,
                                  [members = std::shared_ptr<const std::vector<bool>>(members), n,
                                   arity](std::span<const Element> a) {
                                      std::vector<std::uint32_t> args(arity);
                                      for (std::size_t k = 0; k < arity; ++k) args[k] = std::get<Symbol>(a[k]).id;
                                      return static_cast<bool>((*members)[flat_index(args, n)]);
                                  },
                                  false});
        }
    }

    parts.enumerator = Enumerator{static_cast<std::uint64_t>(n), [](std::uint64_t k) -> Element {
                                      return Symbol{static_cast<std::uint32_t>(k - 1)};
                                  }};
    parts.codec = symbol_codec(std::move(universe));
    return std::make_shared<const Structure>(std::move(parts));
}

} // namespace bssram
