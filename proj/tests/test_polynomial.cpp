#include <doctest.h>

#include <random>

#include "cadkit/polynomial.hpp"
#include "cadkit/projection.hpp"
#include "cadkit/system.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace
{

const char *f1_text = "-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1";
const char *f2_text = "-5*x3^4 + x3^3 - 7";

Polynomial P(const char *text, std::size_t n = 3)
{
    return parse_polynomial(text, n);
}

} // namespace

TEST_SUITE("polynomial")
{
    TEST_CASE("parse and print")
    {
        const auto f1 = P(f1_text);
        CHECK(f1.size() == 4);
        CHECK(to_string(f1) == f1_text);
        CHECK(P("0").is_zero());
        const auto sq = P("x1*x1", 2);
        REQUIRE(sq.size() == 1);
        CHECK(sq.leading_term().exponents == ExponentVector{2, 0});
        CHECK(sq.leading_coefficient() == 1);
        CHECK(P("(x1+1)*(x1-1)", 1) == P("x1^2 - 1", 1));
        CHECK(to_string(P("3 - x2 + x1^2*x2", 2)) == "x1^2*x2 - x2 + 3");
        CHECK(P("09*x1 + 010", 1) == P("9*x1 + 10", 1));
    }

    TEST_CASE("parse errors carry positions")
    {
        CHECK_THROWS_AS(P("x4 + 1"), parse_error);
        CHECK_THROWS_AS(P("x1 +"), parse_error);
        CHECK_THROWS_AS(P("2**x1"), parse_error);
        try {
            P("x1 + $");
            FAIL("expected a parse error");
        } catch (const parse_error &e) {
            CHECK(e.position() == 5);
        }
    }

    TEST_CASE("print then parse is a fixed point")
    {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 1000; ++i) {
            const auto f = oracle::random_polynomial(rng, 1 + i % 4, 5, 7, 1000);
            const auto text = to_string(f);
            CHECK(P(text.c_str(), f.nvars()) == f);
        }
    }

    TEST_CASE("multiplication")
    {
        const auto prod = P(f1_text) * P(f2_text);
        std::vector<ExponentVector> support;
        for (const auto &t : prod.terms()) {
            if (t.exponents != ExponentVector{0, 0, 0}) {
                support.push_back(t.exponents);
            }
        }
        const std::vector<ExponentVector> expected{{3, 1, 4}, {1, 1, 6}, {3, 1, 3}, {1, 1, 5}, {0, 2, 5}, {0, 2, 4},
                                                   {3, 1, 0}, {1, 1, 2}, {0, 0, 4}, {0, 2, 1}, {0, 0, 3}};
        CHECK(support == expected);
        CHECK((P(f1_text) * Polynomial(3)).is_zero());
        CHECK(P("(x1+1)", 1) * P("x1-1", 1) == P("x1^2-1", 1));
        CHECK_THROWS_AS(P("x1", 1) * P("x1", 2), std::invalid_argument);
    }

    TEST_CASE("degrees and leading coefficients")
    {
        const auto f1 = P(f1_text);
        const auto f2 = P(f2_text);
        CHECK(partial_degree(f1, 2) == 2);
        CHECK(partial_degree(Polynomial(3), 1) == 0);
        CHECK(partial_degree(f2, 0) == 0);
        CHECK(total_degree(Polynomial(3)) == 0);
        CHECK(leading_coefficient(f1, 0) == P("-6*x2"));
        CHECK(leading_coefficient(f2, 2) == P("-5"));
        CHECK(leading_coefficient(f2, 0) == f2);
    }

    TEST_CASE("derivatives")
    {
        CHECK(derivative(P(f2_text), 2) == P("-20*x3^3 + 3*x3^2"));
        CHECK(derivative(P("17"), 1).is_zero());
        CHECK(derivative(P("x1^2*x2", 2), 1) == P("x1^2", 2));
    }

    TEST_CASE("resultant examples")
    {
        CHECK(resultant(P("x1^2-1", 1), P("x1-2", 1), 0) == P("3", 1));
        CHECK_THROWS_AS(resultant(P("x1", 2), P("x2", 2), 0), std::domain_error);
        const auto f = P(f1_text);
        const auto g = P(f2_text);
        const auto p = squarefree_product(PolynomialSystem(3, {{f, Relation::eq}, {g, Relation::eq}}));
        CHECK(total_degree(resultant(p, derivative(p, 0), 0)) == 31);
    }

    TEST_CASE("resultant agrees with the Sylvester determinant")
    {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 60; ++i) {
            const std::size_t n = 1 + i % 3;
            const Var v = static_cast<Var>(i % n);
            const auto f = oracle::random_in(rng, n, v, 3, 4);
            const auto g = oracle::random_in(rng, n, v, 3, 4);
            CHECK(resultant(f, g, v) == oracle::sylvester_resultant(f, g, v));
        }
    }

    TEST_CASE("resultant with linear factor evaluates the other argument")
    {
        std::mt19937_64 rng(9);
        for (int i = 0; i < 40; ++i) {
            const auto f = oracle::random_in(rng, 1, 0, 6, 5);
            const Integer c = i - 20;
            const auto d = partial_degree(f, 0);
            const auto lin = P("x1", 1) - Polynomial::constant(1, c);
            // res(f, x - c) = (-1)^deg f * f(c) for monic linear g.
            Integer expected = substitute(f, 0, c).constant_value();
            if (d % 2 == 1) {
                expected = -expected;
            }
            CHECK(resultant(f, lin, 0) == Polynomial::constant(1, expected));
        }
    }

    TEST_CASE("discriminant convention")
    {
        // Standard discriminant: b^2 - 4c for x^2 + b x + c.
        CHECK(discriminant(P("x3^2 + x1*x3 + x2"), 2) == P("x1^2 - 4*x2"));
        CHECK(discriminant(P("x1^2 - 1", 1), 0) == P("4", 1));
        CHECK_THROWS_AS(discriminant(P("x1 + 1", 1), 0), std::domain_error);
        const auto disc = discriminant(P(f1_text), 0);
        CHECK(disc == P("-1536*x2^4*x3^6 - 3888*x2^6*x3^2 - 3888*x2^4*x3 - 972*x2^2"));
        CHECK(total_degree(disc) == 10);
        CHECK(content(disc) == 12);
    }

    TEST_CASE("gcd examples")
    {
        const auto a = P("(x1+1)*(x1-1)", 1);
        const auto b = P("(x1+1)^2", 1);
        CHECK(gcd(a, b) == P("x1+1", 1));
        const auto f = P(f1_text) * Polynomial::constant(3, -4);
        CHECK(gcd(f, f) == normalized(f));
        CHECK(gcd(f, Polynomial(3)) == normalized(f));
        CHECK(gcd(Polynomial(3), Polynomial(3)).is_zero());
        CHECK(gcd(P("6*x1 + 6", 1), P("4*x1 + 4", 1)) == P("x1 + 1", 1));
    }

    TEST_CASE("univariate gcd agrees with Euclid over Q")
    {
        std::mt19937_64 rng(21);
        for (int i = 0; i < 300; ++i) {
            auto a = oracle::random_in(rng, 1, 0, 4, 4);
            auto b = oracle::random_in(rng, 1, 0, 4, 4);
            if (i % 2 == 0) {
                const auto c = oracle::random_in(rng, 1, 0, 2, 3);
                a *= c;
                b *= c;
            }
            const auto g = gcd(a, b);
            CHECK(oracle::monic(g, 0) == oracle::qgcd(oracle::to_qpoly(a, 0), oracle::to_qpoly(b, 0)));
            CHECK(content(g) == 1);
            CHECK(g.leading_coefficient() > 0);
        }
    }

    TEST_CASE("gcd of constructed multivariate products")
    {
        std::mt19937_64 rng(33);
        for (int i = 0; i < 60; ++i) {
            const auto a = oracle::random_in(rng, 3, 0, 3, 4);
            const auto b = oracle::random_in(rng, 3, 1, 3, 4);
            const auto c = oracle::random_in(rng, 3, 2, 2, 3);
            const auto g0 = gcd(a, b);
            const auto g = gcd(a * c, b * c);
            const auto expected = normalized(g0 * c);
            // Equal up to the integer content shared by a and b.
            CHECK(normalized(g) == expected);
            CHECK(try_exact_divide(a * c, g).has_value());
            CHECK(try_exact_divide(b * c, g).has_value());
        }
    }

    TEST_CASE("exact division")
    {
        const auto f = P(f1_text);
        const auto g = P(f2_text);
        CHECK(exact_divide(f * g, g) == f);
        CHECK_FALSE(try_exact_divide(f * g + P("1"), g).has_value());
        CHECK_FALSE(try_exact_divide(P("x1"), P("x2")).has_value());
        CHECK(exact_divide(P("6*x1"), P("3")) == P("2*x1"));
        CHECK_THROWS_AS(exact_divide(P("x1"), P("2")), std::domain_error);
        CHECK_THROWS_AS(exact_divide(P("x1"), Polynomial(3)), std::domain_error);
    }

    TEST_CASE("squarefree part")
    {
        CHECK(squarefree_part(P("(x1+1)^2*(x1-1)", 1)) == P("x1^2 - 1", 1));
        CHECK(squarefree_part(P("-4*x1^3*x2^2", 2)) == P("x1*x2", 2));
        CHECK_THROWS_AS(squarefree_part(Polynomial(2)), std::domain_error);
        const auto f = P(f1_text);
        const auto g = P(f2_text);
        const auto p = squarefree_product(PolynomialSystem(3, {{f, Relation::eq}, {g, Relation::eq}}));
        const auto r = resultant(p, derivative(p, 0), 0);
        CHECK(total_degree(squarefree_part(r)) == 13);
    }

    TEST_CASE("ring laws")
    {
        std::mt19937_64 rng(1);
        for (int i = 0; i < 200; ++i) {
            const std::size_t n = 1 + i % 4;
            const auto a = oracle::random_polynomial(rng, n, 4, 6);
            const auto b = oracle::random_polynomial(rng, n, 4, 6);
            const auto c = oracle::random_polynomial(rng, n, 4, 6);
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a - a).is_zero());
            CHECK(a * Polynomial::constant(n, 1) == a);
        }
    }

    TEST_CASE("resultant antisymmetry and multiplicativity")
    {
        std::mt19937_64 rng(2);
        for (int i = 0; i < 60; ++i) {
            const std::size_t n = 1 + i % 3;
            const Var v = static_cast<Var>(i % n);
            const auto f = oracle::random_in(rng, n, v, 3, 4);
            const auto g = oracle::random_in(rng, n, v, 3, 4);
            const auto h = oracle::random_in(rng, n, v, 3, 4);
            const auto df = partial_degree(f, v);
            const auto dg = partial_degree(g, v);
            const auto rfg = resultant(f, g, v);
            const auto rgf = resultant(g, f, v);
            CHECK(rfg == ((df * dg) % 2 == 1 ? -rgf : rgf));
            CHECK(resultant(f * g, h, v) == resultant(f, h, v) * resultant(g, h, v));
            CHECK_FALSE(involves(rfg, v));
        }
    }

    TEST_CASE("squarefree idempotence and derivative coprimality")
    {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 80; ++i) {
            const std::size_t n = 1 + i % 3;
            auto f = oracle::random_polynomial(rng, n, 3, 4);
            if (f.is_constant()) {
                continue;
            }
            if (i % 2 == 0) {
                f *= f;
            }
            const auto s = squarefree_part(f);
            CHECK(squarefree_part(s) == s);
            CHECK(try_exact_divide(f, s).has_value());
            for (Var v = 0; v < n; ++v) {
                if (involves(s, v)) {
                    // Factors free of v divide the derivative too.
                    CHECK_FALSE(involves(gcd(s, derivative(s, v)), v));
                }
            }
        }
    }

    TEST_CASE("budget is enforced")
    {
        const auto f = P("(x1 + x2 + x3 + 1)^9");
        const auto g = derivative(f, 0) + P("x2^5 + 1");
        CHECK_THROWS_AS(resultant(f, g, 0, Deadline::after(std::chrono::duration<double>(-1.0))), budget_exceeded);
    }
}
