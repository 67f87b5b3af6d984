#ifndef CADKIT_POLYNOMIAL_HPP
#define CADKIT_POLYNOMIAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "cadkit/deadline.hpp"

namespace cadkit
{

using Integer = mpz_class;
using Rational = mpq_class;
using Exponent = std::uint32_t;

// Variables are addressed by 0-based index; x1 in text is index 0.
using Var = std::size_t;

using ExponentVector = std::vector<Exponent>;

std::uint64_t total_degree(const ExponentVector &e);

// Graded-lexicographic comparison with x1 as the most significant variable.
// Returns true when a sorts strictly before b in the descending canonical order.
bool grlex_greater(const ExponentVector &a, const ExponentVector &b);

struct Term {
    ExponentVector exponents;
    Integer coefficient;
};

class parse_error : public std::runtime_error
{
public:
    parse_error(const std::string &what, std::size_t position);
    std::size_t position() const noexcept { return m_position; }

private:
    std::size_t m_position;
};

// Sparse multivariate polynomial with integer coefficients.
//
// Terms are kept sorted in descending graded-lex order and no stored
// coefficient is zero, so structural equality is polynomial equality.
class Polynomial
{
public:
    explicit Polynomial(std::size_t nvars = 1);

    static Polynomial constant(std::size_t nvars, const Integer &c);
    static Polynomial variable(std::size_t nvars, Var v, Exponent power = 1);
    // Combines like terms and drops zero coefficients.
    static Polynomial from_terms(std::size_t nvars, std::vector<Term> terms);

    std::size_t nvars() const noexcept { return m_nvars; }
    std::span<const Term> terms() const noexcept { return m_terms; }
    std::size_t size() const noexcept { return m_terms.size(); }
    bool is_zero() const noexcept { return m_terms.empty(); }
    bool is_constant() const noexcept;
    // Zero for the zero polynomial.
    Integer constant_value() const;

    const Term &leading_term() const;
    const Integer &leading_coefficient() const { return leading_term().coefficient; }

    Polynomial operator-() const;
    Polynomial &operator+=(const Polynomial &other);
    Polynomial &operator-=(const Polynomial &other);
    Polynomial &operator*=(const Polynomial &other);
    Polynomial &operator*=(const Integer &c);

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    friend Polynomial operator*(Polynomial a, const Integer &c) { return a *= c; }
    friend Polynomial operator*(const Integer &c, Polynomial a) { return a *= c; }

    friend bool operator==(const Polynomial &a, const Polynomial &b);

    // Divides every coefficient by c; throws if any division is inexact.
    Polynomial divided_by(const Integer &c) const;

private:
    Polynomial(std::size_t nvars, std::vector<Term> sorted_terms, bool);

    std::size_t m_nvars;
    std::vector<Term> m_terms;
};

// Text form --------------------------------------------------------------

// Grammar:
//   expr   := ['+'|'-'] term { ('+'|'-') term }
//   term   := factor { '*' factor }
//   factor := atom [ '^' uint ]
//   atom   := uint | 'x' uint | '(' expr ')'
// Whitespace is ignored. Variable indices run from 1 to nvars.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars);

// Canonical rendering, e.g. "-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1".
std::string to_string(const Polynomial &f);

// Degree queries ---------------------------------------------------------

// Both return 0 for the zero polynomial.
Exponent partial_degree(const Polynomial &f, Var v);
std::uint64_t total_degree(const Polynomial &f);
bool involves(const Polynomial &f, Var v);

// Coefficients of f viewed as a univariate polynomial in v; entry k is the
// coefficient of v^k, embedded with the same nvars. Empty for f = 0.
std::vector<Polynomial> coefficients_in(const Polynomial &f, Var v);
Polynomial from_coefficients(std::span<const Polynomial> coeffs, Var v, std::size_t nvars);

Polynomial leading_coefficient(const Polynomial &f, Var v);
Polynomial derivative(const Polynomial &f, Var v);
Polynomial pow(const Polynomial &f, unsigned k);
// Replaces v by the integer c.
Polynomial substitute(const Polynomial &f, Var v, const Integer &c);
// Renames variable i to perm[i].
Polynomial permute_variables(const Polynomial &f, std::span<const Var> perm);

// Content and normalization ----------------------------------------------

// Non-negative gcd of the integer coefficients; 0 for the zero polynomial.
Integer content(const Polynomial &f);
// f divided by its content, with a positive leading coefficient.
// The zero polynomial maps to itself.
Polynomial normalized(const Polynomial &f);

// Division ---------------------------------------------------------------

// Returns q with f = q*g if such a q exists over the integers.
std::optional<Polynomial> try_exact_divide(const Polynomial &f, const Polynomial &g,
                                           const Deadline &deadline = Deadline::unbounded());
// Throws std::domain_error when g does not divide f.
Polynomial exact_divide(const Polynomial &f, const Polynomial &g,
                        const Deadline &deadline = Deadline::unbounded());
// lc_v(g)^(deg_v f - deg_v g + 1) * f mod g, computed in v.
Polynomial pseudo_remainder(const Polynomial &f, const Polynomial &g, Var v,
                            const Deadline &deadline = Deadline::unbounded());

// Eliminants -------------------------------------------------------------

// Resultant with respect to v via the subresultant PRS. Both inputs need
// positive degree in v, otherwise std::domain_error.
Polynomial resultant(const Polynomial &f, const Polynomial &g, Var v,
                     const Deadline &deadline = Deadline::unbounded());

// (-1)^(d(d-1)/2) * res(f, df/dv, v) / lc_v(f), d = deg_v f >= 2.
Polynomial discriminant(const Polynomial &f, Var v, const Deadline &deadline = Deadline::unbounded());

// GCD and squarefree part ------------------------------------------------

// Primitive, positive-leading gcd. gcd(a, 0) = normalized(a); gcd(0, 0) = 0.
Polynomial gcd(const Polynomial &a, const Polynomial &b, const Deadline &deadline = Deadline::unbounded());

// Product of the distinct irreducible factors of f, content removed and
// leading coefficient positive. Throws std::domain_error for f = 0.
Polynomial squarefree_part(const Polynomial &f, const Deadline &deadline = Deadline::unbounded());

} // namespace cadkit

#endif
