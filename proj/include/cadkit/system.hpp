#ifndef CADKIT_SYSTEM_HPP
#define CADKIT_SYSTEM_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/polynomial.hpp"

namespace cadkit
{

// none marks a member of a pure polynomial set.
enum class Relation { eq, gt, ge, lt, le, ne, none };

std::string_view to_string(Relation r);
// Accepts "=", ">", ">=", "<", "<=", "!=", "none" (and the unicode forms).
Relation parse_relation(std::string_view s);

struct Constraint {
    Polynomial poly;
    Relation relation = Relation::none;
};

class PolynomialSystem
{
public:
    PolynomialSystem(std::size_t nvars, std::vector<Constraint> constraints);

    std::size_t nvars() const noexcept { return m_nvars; }
    std::span<const Constraint> constraints() const noexcept { return m_constraints; }
    std::size_t size() const noexcept { return m_constraints.size(); }
    std::vector<Polynomial> polynomials() const;

    friend bool operator==(const PolynomialSystem &, const PolynomialSystem &);

private:
    std::size_t m_nvars;
    std::vector<Constraint> m_constraints;
};

// Text form: constraints separated by ';', each "<expr> [<rel> <expr>]".
// A right-hand side is moved to the left, so "x1 = 1" becomes "x1 - 1 = 0".
PolynomialSystem parse_system(std::string_view text, std::size_t nvars);
std::string to_string(const PolynomialSystem &sys);

PolynomialSystem permute_variables(const PolynomialSystem &sys, std::span<const Var> perm);

// A permutation of the variables listed from the first-projected (greatest)
// variable to the last, matching the bracket notation [x2, x1, x3].
class VariableOrdering
{
public:
    explicit VariableOrdering(std::vector<Var> order);

    static VariableOrdering identity(std::size_t n);

    std::size_t size() const noexcept { return m_order.size(); }
    std::span<const Var> order() const noexcept { return m_order; }
    Var operator[](std::size_t i) const { return m_order[i]; }

    friend auto operator<=>(const VariableOrdering &, const VariableOrdering &) = default;
    friend bool operator==(const VariableOrdering &, const VariableOrdering &) = default;

private:
    std::vector<Var> m_order;
};

// "[x2, x1, x3]"
std::string to_string(const VariableOrdering &o);
VariableOrdering parse_ordering(std::string_view text, std::size_t nvars);
std::vector<std::string> variable_names(const VariableOrdering &o);

// All n! orderings in lexicographic order of the bracket form.
std::vector<VariableOrdering> all_orderings(std::size_t n);

// Maps the ordering through a variable renaming i -> perm[i].
VariableOrdering permute(const VariableOrdering &o, std::span<const Var> perm);

} // namespace cadkit

#endif
