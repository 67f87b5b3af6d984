#ifndef CADKIT_TESTS_ORACLES_HPP
#define CADKIT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cadkit/polynomial.hpp"
#include "cadkit/system.hpp"

namespace oracle
{

using cadkit::Exponent;
using cadkit::Integer;
using cadkit::Polynomial;
using cadkit::Rational;
using cadkit::Term;
using cadkit::Var;

// Determinant by cofactor expansion along the first row. Uses only ring
// operations, so it shares no code path with the library eliminants.
inline Polynomial determinant(const std::vector<std::vector<Polynomial>> &m, std::size_t nvars)
{
    const std::size_t n = m.size();
    if (n == 0) {
        return Polynomial::constant(nvars, 1);
    }
    if (n == 1) {
        return m[0][0];
    }
    Polynomial det(nvars);
    for (std::size_t col = 0; col < n; ++col) {
        if (m[0][col].is_zero()) {
            continue;
        }
        std::vector<std::vector<Polynomial>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != col) {
                    row.push_back(m[r][c]);
                }
            }
            minor.push_back(std::move(row));
        }
        Polynomial t = m[0][col] * determinant(minor, nvars);
        if (col % 2 == 1) {
            det -= t;
        } else {
            det += t;
        }
    }
    return det;
}

// Coefficient of v^k in f, rebuilt term by term.
inline Polynomial coefficient(const Polynomial &f, Var v, Exponent k)
{
    std::vector<Term> out;
    for (const auto &t : f.terms()) {
        if (t.exponents[v] == k) {
            Term s = t;
            s.exponents[v] = 0;
            out.push_back(std::move(s));
        }
    }
    return Polynomial::from_terms(f.nvars(), std::move(out));
}

inline Exponent degree_in(const Polynomial &f, Var v)
{
    Exponent d = 0;
    for (const auto &t : f.terms()) {
        d = std::max(d, t.exponents[v]);
    }
    return d;
}

// Sylvester matrix determinant: deg_v(g) rows of f, then deg_v(f) rows of g.
inline Polynomial sylvester_resultant(const Polynomial &f, const Polynomial &g, Var v)
{
    const std::size_t nv = f.nvars();
    const Exponent m = degree_in(f, v);
    const Exponent n = degree_in(g, v);
    const std::size_t size = m + n;
    std::vector<std::vector<Polynomial>> mat(size, std::vector<Polynomial>(size, Polynomial(nv)));
    for (std::size_t r = 0; r < n; ++r) {
        for (Exponent k = 0; k <= m; ++k) {
            mat[r][r + k] = coefficient(f, v, m - k);
        }
    }
    for (std::size_t r = 0; r < m; ++r) {
        for (Exponent k = 0; k <= n; ++k) {
            mat[n + r][r + k] = coefficient(g, v, n - k);
        }
    }
    return determinant(mat, nv);
}

// Dense univariate polynomials over Q, lowest degree first.
using QPoly = std::vector<Rational>;

inline void trim(QPoly &p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

inline QPoly to_qpoly(const Polynomial &f, Var v)
{
    QPoly p(degree_in(f, v) + 1, Rational(0));
    for (const auto &t : f.terms()) {
        p[t.exponents[v]] += Rational(t.coefficient);
    }
    trim(p);
    return p;
}

inline QPoly qrem(QPoly a, const QPoly &b)
{
    while (a.size() >= b.size()) {
        const Rational q = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[i + shift] -= q * b[i];
        }
        trim(a);
        if (a.empty()) {
            break;
        }
    }
    return a;
}

// Monic gcd over Q by the schoolbook Euclidean algorithm.
inline QPoly qgcd(QPoly a, QPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = qrem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lc = a.back();
        for (auto &c : a) {
            c /= lc;
        }
    }
    return a;
}

// Monic rescaling of a univariate integer polynomial.
inline QPoly monic(const Polynomial &f, Var v)
{
    return qgcd(to_qpoly(f, v), {});
}

inline Polynomial random_polynomial(std::mt19937_64 &rng, std::size_t nvars, unsigned max_degree, unsigned max_terms,
                                    int coeff_bound = 9)
{
    std::uniform_int_distribution<unsigned> terms(1, max_terms);
    std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    std::vector<Term> out;
    const unsigned count = terms(rng);
    for (unsigned i = 0; i < count; ++i) {
        cadkit::ExponentVector e(nvars, 0);
        unsigned budget = deg(rng);
        for (unsigned k = 0; k < budget; ++k) {
            e[std::uniform_int_distribution<std::size_t>(0, nvars - 1)(rng)] += 1;
        }
        int c = 0;
        while (c == 0) {
            c = coeff(rng);
        }
        out.push_back(Term{std::move(e), Integer(c)});
    }
    return Polynomial::from_terms(nvars, std::move(out));
}

// Random polynomial with positive degree in v.
inline Polynomial random_in(std::mt19937_64 &rng, std::size_t nvars, Var v, unsigned max_degree, unsigned max_terms)
{
    while (true) {
        Polynomial f = random_polynomial(rng, nvars, max_degree, max_terms);
        if (degree_in(f, v) > 0) {
            return f;
        }
    }
}

inline cadkit::PolynomialSystem random_system(std::mt19937_64 &rng, std::size_t nvars, std::size_t count,
                                              unsigned max_degree = 3, unsigned max_terms = 4)
{
    std::vector<cadkit::Constraint> cs;
    while (cs.size() < count) {
        Polynomial f = random_polynomial(rng, nvars, max_degree, max_terms);
        if (f.is_constant()) {
            continue;
        }
        cs.push_back({std::move(f), cadkit::Relation::none});
    }
    return cadkit::PolynomialSystem(nvars, std::move(cs));
}

// Decimal digit count of a non-negative value.
inline std::size_t digits(std::uint64_t v)
{
    return std::to_string(v).size();
}

} // namespace oracle

#endif
