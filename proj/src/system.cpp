#include "cadkit/system.hpp"

#include <cctype>
#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cadkit
{

std::string_view to_string(Relation r)
{
    switch (r) {
        case Relation::eq:
            return "=";
        case Relation::gt:
            return ">";
        case Relation::ge:
            return ">=";
        case Relation::lt:
            return "<";
        case Relation::le:
            return "<=";
        case Relation::ne:
            return "!=";
        case Relation::none:
            return "none";
    }
    return "none";
}

Relation parse_relation(std::string_view s)
{
    static constexpr std::array<std::pair<std::string_view, Relation>, 12> table{{
        {"=", Relation::eq},
        {">", Relation::gt},
        {">=", Relation::ge},
        {"≥", Relation::ge},
        {"<", Relation::lt},
        {"<=", Relation::le},
        {"≤", Relation::le},
        {"!=", Relation::ne},
        {"<>", Relation::ne},
        {"≠", Relation::ne},
        {"none", Relation::none},
        {"", Relation::none},
    }};
    for (const auto &[text, rel] : table) {
        if (s == text) {
            return rel;
        }
    }
    throw std::invalid_argument("unknown relation '" + std::string(s) + "'");
}

PolynomialSystem::PolynomialSystem(std::size_t nvars, std::vector<Constraint> constraints)
    : m_nvars(nvars), m_constraints(std::move(constraints))
{
    if (m_constraints.empty()) {
        throw std::invalid_argument("a polynomial system needs at least one constraint");
    }
    for (const auto &c : m_constraints) {
        if (c.poly.nvars() != nvars) {
            throw std::invalid_argument("constraint polynomial has the wrong number of variables");
        }
    }
}

std::vector<Polynomial> PolynomialSystem::polynomials() const
{
    std::vector<Polynomial> out;
    out.reserve(m_constraints.size());
    for (const auto &c : m_constraints) {
        out.push_back(c.poly);
    }
    return out;
}

bool operator==(const PolynomialSystem &a, const PolynomialSystem &b)
{
    if (a.m_nvars != b.m_nvars || a.m_constraints.size() != b.m_constraints.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.m_constraints.size(); ++i) {
        if (a.m_constraints[i].relation != b.m_constraints[i].relation
            || !(a.m_constraints[i].poly == b.m_constraints[i].poly)) {
            return false;
        }
    }
    return true;
}

namespace
{

// Finds the first relation operator outside parentheses.
std::pair<std::size_t, std::size_t> find_relation(std::string_view s)
{
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        } else if (depth == 0) {
            if (c == '<' || c == '>' || c == '!') {
                const bool two = i + 1 < s.size() && (s[i + 1] == '=' || (c == '<' && s[i + 1] == '>'));
                return {i, two ? 2 : 1};
            }
            if (c == '=') {
                return {i, 1};
            }
            // UTF-8 encodings of the unicode relations start with 0xE2.
            if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size()) {
                return {i, 3};
            }
        }
    }
    return {std::string_view::npos, 0};
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

PolynomialSystem parse_system(std::string_view text, std::size_t nvars)
{
    std::vector<Constraint> constraints;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(';', start), text.size());
        const auto piece = trim(text.substr(start, end - start));
        if (!piece.empty()) {
            const auto [at, len] = find_relation(piece);
            if (at == std::string_view::npos) {
                constraints.push_back({parse_polynomial(piece, nvars), Relation::none});
            } else {
                const auto rel = parse_relation(piece.substr(at, len));
                auto lhs = parse_polynomial(piece.substr(0, at), nvars);
                auto rhs = parse_polynomial(piece.substr(at + len), nvars);
                constraints.push_back({lhs - rhs, rel});
            }
        }
        start = end + 1;
    }
    return PolynomialSystem(nvars, std::move(constraints));
}

std::string to_string(const PolynomialSystem &sys)
{
    std::ostringstream os;
    bool first = true;
    for (const auto &c : sys.constraints()) {
        if (!first) {
            os << "; ";
        }
        first = false;
        os << to_string(c.poly);
        if (c.relation != Relation::none) {
            os << ' ' << to_string(c.relation) << " 0";
        }
    }
    return os.str();
}

PolynomialSystem permute_variables(const PolynomialSystem &sys, std::span<const Var> perm)
{
    std::vector<Constraint> cs;
    cs.reserve(sys.size());
    for (const auto &c : sys.constraints()) {
        cs.push_back({permute_variables(c.poly, perm), c.relation});
    }
    return PolynomialSystem(sys.nvars(), std::move(cs));
}

// VariableOrdering ---------------------------------------------------------

VariableOrdering::VariableOrdering(std::vector<Var> order) : m_order(std::move(order))
{
    std::vector<bool> seen(m_order.size(), false);
    for (const auto v : m_order) {
        if (v >= m_order.size() || seen[v]) {
            throw std::invalid_argument("variable ordering is not a permutation");
        }
        seen[v] = true;
    }
    if (m_order.empty()) {
        throw std::invalid_argument("variable ordering is empty");
    }
}

VariableOrdering VariableOrdering::identity(std::size_t n)
{
    std::vector<Var> o(n);
    std::iota(o.begin(), o.end(), Var{0});
    return VariableOrdering(std::move(o));
}

std::string to_string(const VariableOrdering &o)
{
    std::string s = "[";
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (i > 0) {
            s += ", ";
        }
        s += "x" + std::to_string(o[i] + 1);
    }
    return s + "]";
}

std::vector<std::string> variable_names(const VariableOrdering &o)
{
    std::vector<std::string> out;
    out.reserve(o.size());
    for (const auto v : o.order()) {
        out.push_back("x" + std::to_string(v + 1));
    }
    return out;
}

VariableOrdering parse_ordering(std::string_view text, std::size_t nvars)
{
    std::vector<Var> order;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == 'x') {
            std::size_t j = i + 1;
            std::size_t idx = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                idx = idx * 10 + static_cast<std::size_t>(text[j] - '0');
                ++j;
            }
            if (j == i + 1 || idx == 0 || idx > nvars) {
                throw std::invalid_argument("bad variable in ordering '" + std::string(text) + "'");
            }
            order.push_back(idx - 1);
            i = j;
        } else if (c == '[' || c == ']' || c == ',' || c == '>' || std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else {
            throw std::invalid_argument("unexpected character in ordering '" + std::string(text) + "'");
        }
    }
    if (order.size() != nvars) {
        throw std::invalid_argument("ordering '" + std::string(text) + "' does not list all "
                                    + std::to_string(nvars) + " variables");
    }
    return VariableOrdering(std::move(order));
}

std::vector<VariableOrdering> all_orderings(std::size_t n)
{
    std::vector<Var> o(n);
    std::iota(o.begin(), o.end(), Var{0});
    std::vector<VariableOrdering> out;
    do {
        out.emplace_back(o);
    } while (std::next_permutation(o.begin(), o.end()));
    return out;
}

VariableOrdering permute(const VariableOrdering &o, std::span<const Var> perm)
{
    std::vector<Var> mapped;
    mapped.reserve(o.size());
    for (const auto v : o.order()) {
        mapped.push_back(perm[v]);
    }
    return VariableOrdering(std::move(mapped));
}

} // namespace cadkit
