#include "cadkit/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace cadkit
{

std::uint64_t total_degree(const ExponentVector &e)
{
    return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

bool grlex_greater(const ExponentVector &a, const ExponentVector &b)
{
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

parse_error::parse_error(const std::string &what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)), m_position(position)
{
}

namespace
{

struct TermOrder {
    bool operator()(const Term &a, const Term &b) const { return grlex_greater(a.exponents, b.exponents); }
};

void check_same_ring(const Polynomial &a, const Polynomial &b)
{
    if (a.nvars() != b.nvars()) {
        throw std::invalid_argument("polynomials live in rings with different numbers of variables ("
                                    + std::to_string(a.nvars()) + " vs " + std::to_string(b.nvars()) + ")");
    }
}

void check_var(const Polynomial &f, Var v)
{
    if (v >= f.nvars()) {
        throw std::out_of_range("variable index " + std::to_string(v) + " out of range for "
                                + std::to_string(f.nvars()) + " variables");
    }
}

// Sorts and merges like terms in place, removing zero coefficients.
std::vector<Term> canonicalize(std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end(), TermOrder{});
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto &t : terms) {
        if (!out.empty() && out.back().exponents == t.exponents) {
            out.back().coefficient += t.coefficient;
        } else {
            if (!out.empty() && out.back().coefficient == 0) {
                out.pop_back();
            }
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().coefficient == 0) {
        out.pop_back();
    }
    return out;
}

// Merge of two sorted term lists, b scaled by sign.
std::vector<Term> merge_terms(const std::vector<Term> &a, std::span<const Term> b, bool subtract)
{
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && grlex_greater(a[i].exponents, b[j].exponents))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || grlex_greater(b[j].exponents, a[i].exponents)) {
            out.push_back(b[j]);
            if (subtract) {
                out.back().coefficient = -out.back().coefficient;
            }
            ++j;
        } else {
            Integer c = subtract ? Integer(a[i].coefficient - b[j].coefficient)
                                 : Integer(a[i].coefficient + b[j].coefficient);
            if (c != 0) {
                out.push_back(Term{a[i].exponents, std::move(c)});
            }
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace

// Polynomial ---------------------------------------------------------------

Polynomial::Polynomial(std::size_t nvars) : m_nvars(nvars)
{
    if (nvars == 0) {
        throw std::invalid_argument("a polynomial ring needs at least one variable");
    }
}

Polynomial::Polynomial(std::size_t nvars, std::vector<Term> sorted_terms, bool)
    : m_nvars(nvars), m_terms(std::move(sorted_terms))
{
}

Polynomial Polynomial::constant(std::size_t nvars, const Integer &c)
{
    Polynomial p(nvars);
    if (c != 0) {
        p.m_terms.push_back(Term{ExponentVector(nvars, 0), c});
    }
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, Var v, Exponent power)
{
    Polynomial p(nvars);
    check_var(p, v);
    ExponentVector e(nvars, 0);
    e[v] = power;
    p.m_terms.push_back(Term{std::move(e), Integer(1)});
    return p;
}

Polynomial Polynomial::from_terms(std::size_t nvars, std::vector<Term> terms)
{
    Polynomial p(nvars);
    for (const auto &t : terms) {
        if (t.exponents.size() != nvars) {
            throw std::invalid_argument("exponent vector length does not match the number of variables");
        }
    }
    p.m_terms = canonicalize(std::move(terms));
    return p;
}

bool Polynomial::is_constant() const noexcept
{
    return m_terms.empty() || (m_terms.size() == 1 && total_degree(m_terms[0].exponents) == 0);
}

Integer Polynomial::constant_value() const
{
    if (m_terms.empty()) {
        return 0;
    }
    const auto &last = m_terms.back();
    return total_degree(last.exponents) == 0 ? last.coefficient : Integer(0);
}

const Term &Polynomial::leading_term() const
{
    if (m_terms.empty()) {
        throw std::domain_error("the zero polynomial has no leading term");
    }
    return m_terms.front();
}

Polynomial Polynomial::operator-() const
{
    Polynomial r = *this;
    for (auto &t : r.m_terms) {
        t.coefficient = -t.coefficient;
    }
    return r;
}

Polynomial &Polynomial::operator+=(const Polynomial &other)
{
    check_same_ring(*this, other);
    m_terms = merge_terms(m_terms, other.m_terms, false);
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &other)
{
    check_same_ring(*this, other);
    m_terms = merge_terms(m_terms, other.m_terms, true);
    return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b)
{
    check_same_ring(a, b);
    if (a.is_zero() || b.is_zero()) {
        return Polynomial(a.nvars());
    }
    std::vector<Term> products;
    products.reserve(a.size() * b.size());
    const auto n = a.nvars();
    for (const auto &ta : a.m_terms) {
        for (const auto &tb : b.m_terms) {
            ExponentVector e(n);
            for (std::size_t k = 0; k < n; ++k) {
                e[k] = ta.exponents[k] + tb.exponents[k];
            }
            products.push_back(Term{std::move(e), ta.coefficient * tb.coefficient});
        }
    }
    return Polynomial(n, canonicalize(std::move(products)), true);
}

Polynomial &Polynomial::operator*=(const Polynomial &other)
{
    *this = *this * other;
    return *this;
}

Polynomial &Polynomial::operator*=(const Integer &c)
{
    if (c == 0) {
        m_terms.clear();
        return *this;
    }
    for (auto &t : m_terms) {
        t.coefficient *= c;
    }
    return *this;
}

bool operator==(const Polynomial &a, const Polynomial &b)
{
    if (a.m_nvars != b.m_nvars || a.m_terms.size() != b.m_terms.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.m_terms.size(); ++i) {
        if (a.m_terms[i].exponents != b.m_terms[i].exponents
            || a.m_terms[i].coefficient != b.m_terms[i].coefficient) {
            return false;
        }
    }
    return true;
}

Polynomial Polynomial::divided_by(const Integer &c) const
{
    if (c == 0) {
        throw std::domain_error("division by zero");
    }
    Polynomial r = *this;
    for (auto &t : r.m_terms) {
        if (!mpz_divisible_p(t.coefficient.get_mpz_t(), c.get_mpz_t())) {
            throw std::domain_error("inexact integer division of a polynomial");
        }
        mpz_divexact(t.coefficient.get_mpz_t(), t.coefficient.get_mpz_t(), c.get_mpz_t());
    }
    return r;
}

// Parsing ------------------------------------------------------------------

namespace
{

// Intermediate value num/den used to clear rational literals.
struct Fraction {
    Polynomial num;
    Integer den{1};
};

class Parser
{
public:
    Parser(std::string_view text, std::size_t nvars) : m_text(text), m_nvars(nvars) {}

    Polynomial run()
    {
        skip_ws();
        if (m_pos == m_text.size()) {
            throw parse_error("empty expression", m_pos);
        }
        Fraction f = expr();
        skip_ws();
        if (m_pos != m_text.size()) {
            throw parse_error(std::string("unexpected character '") + m_text[m_pos] + "'", m_pos);
        }
        if (f.den == 1) {
            return f.num;
        }
        Integer g;
        const Integer c = content(f.num);
        mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), f.den.get_mpz_t());
        return g == 0 ? f.num : f.num.divided_by(g);
    }

private:
    void skip_ws()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) {
            ++m_pos;
        }
    }

    bool peek(char c)
    {
        skip_ws();
        return m_pos < m_text.size() && m_text[m_pos] == c;
    }

    Integer number()
    {
        skip_ws();
        const auto start = m_pos;
        while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
            ++m_pos;
        }
        if (start == m_pos) {
            throw parse_error("expected a number", start);
        }
        return Integer(std::string(m_text.substr(start, m_pos - start)), 10);
    }

    static Fraction add(const Fraction &a, const Fraction &b, bool subtract)
    {
        Polynomial lhs = a.num * b.den;
        Polynomial rhs = b.num * a.den;
        Fraction r{subtract ? lhs - rhs : lhs + rhs, a.den * b.den};
        return reduce(std::move(r));
    }

    static Fraction reduce(Fraction f)
    {
        if (f.den == 1) {
            return f;
        }
        Integer g;
        const Integer c = content(f.num);
        mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), f.den.get_mpz_t());
        if (f.num.is_zero()) {
            return Fraction{f.num, 1};
        }
        if (g > 1) {
            f.num = f.num.divided_by(g);
            f.den /= g;
        }
        return f;
    }

    Fraction expr()
    {
        bool negate = false;
        if (peek('+')) {
            ++m_pos;
        } else if (peek('-')) {
            ++m_pos;
            negate = true;
        }
        Fraction acc = term();
        if (negate) {
            acc.num = -acc.num;
        }
        while (true) {
            if (peek('+')) {
                ++m_pos;
                acc = add(acc, term(), false);
            } else if (peek('-')) {
                ++m_pos;
                acc = add(acc, term(), true);
            } else {
                return acc;
            }
        }
    }

    Fraction term()
    {
        Fraction acc = factor();
        while (true) {
            if (peek('*')) {
                ++m_pos;
                Fraction rhs = factor();
                acc = reduce(Fraction{acc.num * rhs.num, acc.den * rhs.den});
            } else if (peek('/')) {
                ++m_pos;
                const auto at = m_pos;
                Integer d = number();
                if (d == 0) {
                    throw parse_error("division by zero", at);
                }
                acc = reduce(Fraction{acc.num, acc.den * d});
            } else {
                return acc;
            }
        }
    }

    Fraction factor()
    {
        Fraction base = atom();
        if (peek('^')) {
            ++m_pos;
            const auto at = m_pos;
            Integer e = number();
            if (!e.fits_uint_p() || e > 100000) {
                throw parse_error("exponent too large", at);
            }
            const auto k = static_cast<unsigned>(e.get_ui());
            Integer den;
            mpz_pow_ui(den.get_mpz_t(), base.den.get_mpz_t(), k);
            base = Fraction{cadkit::pow(base.num, k), den};
        }
        return base;
    }

    Fraction atom()
    {
        skip_ws();
        if (m_pos == m_text.size()) {
            throw parse_error("unexpected end of expression", m_pos);
        }
        const char c = m_text[m_pos];
        if (c == '(') {
            ++m_pos;
            Fraction inner = expr();
            if (!peek(')')) {
                throw parse_error("expected ')'", m_pos);
            }
            ++m_pos;
            return inner;
        }
        if (c == 'x') {
            const auto at = m_pos;
            ++m_pos;
            Integer idx = number();
            if (idx < 1 || idx > m_nvars) {
                throw parse_error("variable x" + idx.get_str() + " out of range 1.."
                                      + std::to_string(m_nvars),
                                  at);
            }
            return Fraction{Polynomial::variable(m_nvars, idx.get_ui() - 1), 1};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return Fraction{Polynomial::constant(m_nvars, number()), 1};
        }
        throw parse_error(std::string("unexpected character '") + c + "'", m_pos);
    }

    std::string_view m_text;
    std::size_t m_nvars;
    std::size_t m_pos = 0;
};

} // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars)
{
    if (nvars == 0) {
        throw std::invalid_argument("nvars must be positive");
    }
    return Parser(text, nvars).run();
}

std::string to_string(const Polynomial &f)
{
    if (f.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &t : f.terms()) {
        const bool negative = t.coefficient < 0;
        if (first) {
            if (negative) {
                os << '-';
            }
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        const Integer mag = abs(t.coefficient);
        bool wrote = false;
        if (mag != 1 || total_degree(t.exponents) == 0) {
            os << mag.get_str();
            wrote = true;
        }
        for (std::size_t j = 0; j < t.exponents.size(); ++j) {
            const auto e = t.exponents[j];
            if (e == 0) {
                continue;
            }
            if (wrote) {
                os << '*';
            }
            os << 'x' << (j + 1);
            if (e != 1) {
                os << '^' << e;
            }
            wrote = true;
        }
    }
    return os.str();
}

// Degrees and univariate views ---------------------------------------------

Exponent partial_degree(const Polynomial &f, Var v)
{
    check_var(f, v);
    Exponent d = 0;
    for (const auto &t : f.terms()) {
        d = std::max(d, t.exponents[v]);
    }
    return d;
}

std::uint64_t total_degree(const Polynomial &f)
{
    // Canonical order puts the highest total degree first.
    return f.is_zero() ? 0 : total_degree(f.terms().front().exponents);
}

bool involves(const Polynomial &f, Var v)
{
    return partial_degree(f, v) > 0;
}

std::vector<Polynomial> coefficients_in(const Polynomial &f, Var v)
{
    check_var(f, v);
    if (f.is_zero()) {
        return {};
    }
    const auto d = partial_degree(f, v);
    std::vector<std::vector<Term>> buckets(d + 1);
    for (const auto &t : f.terms()) {
        Term stripped = t;
        const auto k = stripped.exponents[v];
        stripped.exponents[v] = 0;
        buckets[k].push_back(std::move(stripped));
    }
    std::vector<Polynomial> out;
    out.reserve(d + 1);
    for (auto &b : buckets) {
        out.push_back(Polynomial::from_terms(f.nvars(), std::move(b)));
    }
    return out;
}

Polynomial from_coefficients(std::span<const Polynomial> coeffs, Var v, std::size_t nvars)
{
    std::vector<Term> terms;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        for (const auto &t : coeffs[k].terms()) {
            Term shifted = t;
            shifted.exponents[v] += static_cast<Exponent>(k);
            terms.push_back(std::move(shifted));
        }
    }
    return Polynomial::from_terms(nvars, std::move(terms));
}

Polynomial leading_coefficient(const Polynomial &f, Var v)
{
    auto c = coefficients_in(f, v);
    return c.empty() ? Polynomial(f.nvars()) : c.back();
}

Polynomial derivative(const Polynomial &f, Var v)
{
    check_var(f, v);
    std::vector<Term> terms;
    for (const auto &t : f.terms()) {
        if (t.exponents[v] == 0) {
            continue;
        }
        Term d = t;
        d.coefficient *= d.exponents[v];
        d.exponents[v] -= 1;
        terms.push_back(std::move(d));
    }
    return Polynomial::from_terms(f.nvars(), std::move(terms));
}

Polynomial pow(const Polynomial &f, unsigned k)
{
    Polynomial result = Polynomial::constant(f.nvars(), 1);
    Polynomial base = f;
    while (k > 0) {
        if (k & 1U) {
            result *= base;
        }
        k >>= 1U;
        if (k > 0) {
            base *= base;
        }
    }
    return result;
}

Polynomial substitute(const Polynomial &f, Var v, const Integer &c)
{
    check_var(f, v);
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const auto &t : f.terms()) {
        Term s = t;
        Integer p;
        mpz_pow_ui(p.get_mpz_t(), c.get_mpz_t(), s.exponents[v]);
        s.coefficient *= p;
        s.exponents[v] = 0;
        terms.push_back(std::move(s));
    }
    return Polynomial::from_terms(f.nvars(), std::move(terms));
}

Polynomial permute_variables(const Polynomial &f, std::span<const Var> perm)
{
    if (perm.size() != f.nvars()) {
        throw std::invalid_argument("permutation length does not match the number of variables");
    }
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const auto &t : f.terms()) {
        ExponentVector e(f.nvars(), 0);
        for (std::size_t i = 0; i < f.nvars(); ++i) {
            e[perm[i]] = t.exponents[i];
        }
        terms.push_back(Term{std::move(e), t.coefficient});
    }
    return Polynomial::from_terms(f.nvars(), std::move(terms));
}

// Content ------------------------------------------------------------------

Integer content(const Polynomial &f)
{
    Integer g = 0;
    for (const auto &t : f.terms()) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coefficient.get_mpz_t());
        if (g == 1) {
            break;
        }
    }
    return g;
}

Polynomial normalized(const Polynomial &f)
{
    if (f.is_zero()) {
        return f;
    }
    Integer c = content(f);
    if (f.leading_coefficient() < 0) {
        c = -c;
    }
    return c == 1 ? f : f.divided_by(c);
}

// Division -----------------------------------------------------------------

namespace
{

// Value of f with every variable set to a fixed small prime.
Integer probe_value(const Polynomial &f)
{
    static constexpr unsigned long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59};
    Integer sum = 0;
    Integer power;
    for (const auto &t : f.terms()) {
        Integer v = t.coefficient;
        for (std::size_t k = 0; k < t.exponents.size(); ++k) {
            if (t.exponents[k] != 0) {
                mpz_ui_pow_ui(power.get_mpz_t(), primes[k % 16] + 64 * (k / 16), t.exponents[k]);
                v *= power;
            }
        }
        sum += v;
    }
    return sum;
}

} // namespace

std::optional<Polynomial> try_exact_divide(const Polynomial &f, const Polynomial &g, const Deadline &deadline)
{
    check_same_ring(f, g);
    if (g.is_zero()) {
        throw std::domain_error("division by the zero polynomial");
    }
    const auto n = f.nvars();
    if (g.is_constant()) {
        const Integer c = g.constant_value();
        for (const auto &t : f.terms()) {
            if (!mpz_divisible_p(t.coefficient.get_mpz_t(), c.get_mpz_t())) {
                return std::nullopt;
            }
        }
        return f.divided_by(c);
    }
    if (f.is_zero()) {
        return f;
    }
    for (Var v = 0; v < n; ++v) {
        if (partial_degree(g, v) > partial_degree(f, v)) {
            return std::nullopt;
        }
    }
    if (const Integer pg = probe_value(g); pg != 0) {
        if (!mpz_divisible_p(probe_value(f).get_mpz_t(), pg.get_mpz_t())) {
            return std::nullopt;
        }
    }

    const auto greater = [](const ExponentVector &a, const ExponentVector &b) { return grlex_greater(a, b); };
    std::map<ExponentVector, Integer, decltype(greater)> rem(greater);
    for (const auto &t : f.terms()) {
        rem.emplace_hint(rem.end(), t.exponents, t.coefficient);
    }
    const Term &lg = g.leading_term();
    const auto tail = g.terms().subspan(1);
    std::vector<Term> quotient;
    ExponentVector e(n);
    ExponentVector shifted(n);
    Integer c;
    std::size_t steps = 0;
    while (!rem.empty()) {
        if (++steps % 64 == 0) {
            deadline.check();
        }
        const auto lead = rem.begin();
        for (std::size_t k = 0; k < n; ++k) {
            if (lead->first[k] < lg.exponents[k]) {
                return std::nullopt;
            }
            e[k] = lead->first[k] - lg.exponents[k];
        }
        if (!mpz_divisible_p(lead->second.get_mpz_t(), lg.coefficient.get_mpz_t())) {
            return std::nullopt;
        }
        mpz_divexact(c.get_mpz_t(), lead->second.get_mpz_t(), lg.coefficient.get_mpz_t());
        rem.erase(lead);
        for (const auto &t : tail) {
            for (std::size_t k = 0; k < n; ++k) {
                shifted[k] = e[k] + t.exponents[k];
            }
            auto [it, fresh] = rem.try_emplace(shifted);
            mpz_submul(it->second.get_mpz_t(), c.get_mpz_t(), t.coefficient.get_mpz_t());
            if (it->second == 0) {
                rem.erase(it);
            }
        }
        quotient.push_back(Term{e, c});
    }
    return Polynomial::from_terms(n, std::move(quotient));
}

Polynomial exact_divide(const Polynomial &f, const Polynomial &g, const Deadline &deadline)
{
    auto q = try_exact_divide(f, g, deadline);
    if (!q) {
        throw std::domain_error("polynomial division is not exact");
    }
    return std::move(*q);
}

namespace
{

// Dense univariate view in one variable with polynomial coefficients that do
// not involve that variable. The top entry is nonzero unless empty.
using UPoly = std::vector<Polynomial>;

long degree(const UPoly &p)
{
    return static_cast<long>(p.size()) - 1;
}

void trim(UPoly &p)
{
    while (!p.empty() && p.back().is_zero()) {
        p.pop_back();
    }
}

UPoly prem(UPoly r, const UPoly &b, const Deadline &deadline)
{
    const long db = degree(b);
    assert(db >= 0);
    const Polynomial &lb = b.back();
    long e = degree(r) - db + 1;
    if (e <= 0) {
        return r;
    }
    while (!r.empty() && degree(r) >= db) {
        deadline.check();
        const long dr = degree(r);
        const Polynomial lr = r.back();
        const long shift = dr - db;
        for (auto &c : r) {
            c *= lb;
        }
        for (long j = 0; j <= db; ++j) {
            r[static_cast<std::size_t>(j + shift)] -= lr * b[static_cast<std::size_t>(j)];
        }
        trim(r);
        --e;
    }
    if (e > 0) {
        const Polynomial scale = pow(lb, static_cast<unsigned>(e));
        for (auto &c : r) {
            c *= scale;
        }
    }
    return r;
}

UPoly divide_coefficients(const UPoly &p, const Polynomial &d, const Deadline &deadline)
{
    UPoly out;
    out.reserve(p.size());
    for (const auto &c : p) {
        out.push_back(exact_divide(c, d, deadline));
    }
    return out;
}

Polynomial content_in(const Polynomial &f, Var v, const Deadline &deadline)
{
    Polynomial g(f.nvars());
    for (const auto &c : coefficients_in(f, v)) {
        if (c.is_zero()) {
            continue;
        }
        g = gcd(g, c, deadline);
        if (g.is_constant()) {
            break;
        }
    }
    return g;
}

} // namespace

Polynomial pseudo_remainder(const Polynomial &f, const Polynomial &g, Var v, const Deadline &deadline)
{
    check_same_ring(f, g);
    if (g.is_zero()) {
        throw std::domain_error("pseudo-division by the zero polynomial");
    }
    UPoly r = prem(coefficients_in(f, v), coefficients_in(g, v), deadline);
    return from_coefficients(r, v, f.nvars());
}

namespace
{

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 p)
{
    return static_cast<u64>(static_cast<u128>(a) * b % p);
}

u64 pow_mod(u64 a, u64 e, u64 p)
{
    u64 r = 1;
    while (e > 0) {
        if (e & 1U) {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1U;
    }
    return r;
}

u64 inv_mod(u64 a, u64 p)
{
    return pow_mod(a, p - 2, p);
}

// Determinant of a square matrix over Z/p, destroying the input.
u64 det_mod(std::vector<u64> &a, std::size_t n, u64 p)
{
    u64 det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot * n + col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return 0;
        }
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(a[pivot * n + k], a[col * n + k]);
            }
            det = p - det;
        }
        const u64 d = a[col * n + col];
        det = mul_mod(det, d, p);
        const u64 inv = inv_mod(d, p);
        for (std::size_t row = col + 1; row < n; ++row) {
            const u64 factor = mul_mod(a[row * n + col], inv, p);
            if (factor == 0) {
                continue;
            }
            for (std::size_t k = col; k < n; ++k) {
                a[row * n + k] = (a[row * n + k] + p - mul_mod(factor, a[col * n + k], p)) % p;
            }
        }
    }
    return det % p;
}

// Newton interpolation at the nodes 0..d, in place: values become monomial
// coefficients. Entries are read with the given stride.
void interpolate_line(u64 *y, std::size_t d, std::size_t stride, const std::vector<u64> &inverses, u64 p,
                      std::vector<u64> &scratch)
{
    scratch.assign(d + 1, 0);
    for (std::size_t i = 0; i <= d; ++i) {
        scratch[i] = y[i * stride];
    }
    for (std::size_t j = 1; j <= d; ++j) {
        for (std::size_t i = d; i >= j; --i) {
            scratch[i] = mul_mod((scratch[i] + p - scratch[i - 1]) % p, inverses[j], p);
        }
    }
    std::vector<u64> poly(d + 1, 0);
    poly[0] = scratch[d];
    for (std::size_t i = d; i-- > 0;) {
        // poly = poly * (x - i) + c_i
        const u64 shift = static_cast<u64>(i) % p;
        for (std::size_t k = d; k > 0; --k) {
            poly[k] = (poly[k - 1] + p - mul_mod(poly[k], shift, p)) % p;
        }
        poly[0] = (p - mul_mod(poly[0], shift, p) + scratch[i]) % p;
    }
    for (std::size_t i = 0; i <= d; ++i) {
        y[i * stride] = poly[i];
    }
}

constexpr std::size_t max_grid_points = std::size_t{1} << 18;

// Resultant by evaluation on a grid modulo word-size primes. Every grid value
// is the Sylvester determinant of the specialized coefficients, which is the
// specialization of the resultant, so no evaluation point is unlucky. Enough
// primes are taken to exceed twice the bound |f|_1^deg_v(g) * |g|_1^deg_v(f).
std::optional<Polynomial> modular_resultant(const Polynomial &f, const Polynomial &g, Var v,
                                            const Deadline &deadline)
{
    const auto nv = f.nvars();
    const std::size_t m = partial_degree(f, v);
    const std::size_t n = partial_degree(g, v);
    std::vector<Var> vars;
    std::vector<std::size_t> bound;
    std::size_t points = 1;
    for (Var u = 0; u < nv; ++u) {
        if (u == v || (!involves(f, u) && !involves(g, u))) {
            continue;
        }
        const std::size_t d = n * partial_degree(f, u) + m * partial_degree(g, u);
        vars.push_back(u);
        bound.push_back(d);
        points *= d + 1;
        if (points > max_grid_points) {
            return std::nullopt;
        }
    }
    if (vars.empty()) {
        return std::nullopt;
    }
    const std::size_t dims = vars.size();
    std::vector<std::size_t> stride(dims);
    for (std::size_t k = dims, s = 1; k-- > 0;) {
        stride[k] = s;
        s *= bound[k] + 1;
    }

    Integer norm_f = 0;
    Integer norm_g = 0;
    for (const auto &t : f.terms()) {
        norm_f += abs(t.coefficient);
    }
    for (const auto &t : g.terms()) {
        norm_g += abs(t.coefficient);
    }
    Integer limit;
    {
        Integer a;
        Integer b;
        mpz_pow_ui(a.get_mpz_t(), norm_f.get_mpz_t(), n);
        mpz_pow_ui(b.get_mpz_t(), norm_g.get_mpz_t(), m);
        limit = 2 * a * b;
    }

    std::size_t max_degree = 0;
    for (const auto d : bound) {
        max_degree = std::max(max_degree, d);
    }
    const std::size_t size = m + n;
    std::vector<Integer> combined(points, 0);
    Integer modulus = 1;
    Integer prime_z = Integer(1) << 62;
    std::vector<u64> values(points);
    std::vector<u64> matrix(size * size);
    std::vector<u64> fc(m + 1);
    std::vector<u64> gc(n + 1);
    std::vector<std::vector<u64>> powers(dims);
    std::vector<u64> scratch;
    std::vector<std::size_t> index(dims);

    while (modulus <= limit) {
        mpz_nextprime(prime_z.get_mpz_t(), prime_z.get_mpz_t());
        const u64 p = prime_z.get_ui();
        std::vector<u64> inverses(max_degree + 1, 0);
        for (std::size_t j = 1; j <= max_degree; ++j) {
            inverses[j] = inv_mod(j, p);
        }
        const auto reduce = [&](const Polynomial &h) {
            std::vector<std::pair<const ExponentVector *, u64>> out;
            for (const auto &t : h.terms()) {
                Integer r;
                mpz_fdiv_r_ui(r.get_mpz_t(), t.coefficient.get_mpz_t(), p);
                out.emplace_back(&t.exponents, r.get_ui());
            }
            return out;
        };
        const auto fr = reduce(f);
        const auto gr = reduce(g);
        std::fill(index.begin(), index.end(), 0);
        for (std::size_t pt = 0; pt < points; ++pt) {
            if (pt % 256 == 0) {
                deadline.check();
            }
            const auto eval = [&](const auto &terms, std::vector<u64> &coeffs) {
                std::fill(coeffs.begin(), coeffs.end(), 0);
                for (const auto &[e, c] : terms) {
                    u64 value = c;
                    for (std::size_t k = 0; k < dims && value != 0; ++k) {
                        const auto x = (*e)[vars[k]];
                        if (x != 0) {
                            value = mul_mod(value, pow_mod(index[k], x, p), p);
                        }
                    }
                    auto &slot = coeffs[(*e)[v]];
                    slot = (slot + value) % p;
                }
            };
            eval(fr, fc);
            eval(gr, gc);
            std::fill(matrix.begin(), matrix.end(), 0);
            for (std::size_t row = 0; row < n; ++row) {
                for (std::size_t k = 0; k <= m; ++k) {
                    matrix[row * size + row + k] = fc[m - k];
                }
            }
            for (std::size_t row = 0; row < m; ++row) {
                for (std::size_t k = 0; k <= n; ++k) {
                    matrix[(n + row) * size + row + k] = gc[n - k];
                }
            }
            values[pt] = det_mod(matrix, size, p);
            for (std::size_t k = dims; k-- > 0;) {
                if (++index[k] <= bound[k]) {
                    break;
                }
                index[k] = 0;
            }
        }
        for (std::size_t k = 0; k < dims; ++k) {
            const std::size_t outer = points / (bound[k] + 1);
            for (std::size_t line = 0; line < outer; ++line) {
                // Offset of the line start: skip axis k in the mixed-radix index.
                const std::size_t low = line % stride[k];
                const std::size_t high = line / stride[k];
                const std::size_t start = high * stride[k] * (bound[k] + 1) + low;
                interpolate_line(values.data() + start, bound[k], stride[k], inverses, p, scratch);
            }
        }
        // Chinese remaindering into the running combination.
        Integer mod_p;
        mpz_fdiv_r_ui(mod_p.get_mpz_t(), modulus.get_mpz_t(), p);
        const u64 inv_m = inv_mod(mod_p.get_ui(), p);
        for (std::size_t pt = 0; pt < points; ++pt) {
            Integer cur;
            mpz_fdiv_r_ui(cur.get_mpz_t(), combined[pt].get_mpz_t(), p);
            const u64 delta = mul_mod((values[pt] + p - cur.get_ui()) % p, inv_m, p);
            if (delta != 0) {
                mpz_addmul_ui(combined[pt].get_mpz_t(), modulus.get_mpz_t(), delta);
            }
        }
        modulus *= prime_z;
    }

    const Integer half = modulus / 2;
    std::vector<Term> terms;
    std::fill(index.begin(), index.end(), 0);
    for (std::size_t pt = 0; pt < points; ++pt) {
        Integer c = combined[pt];
        if (c > half) {
            c -= modulus;
        }
        if (c != 0) {
            ExponentVector e(nv, 0);
            for (std::size_t k = 0; k < dims; ++k) {
                e[vars[k]] = static_cast<Exponent>(index[k]);
            }
            terms.push_back(Term{std::move(e), std::move(c)});
        }
        for (std::size_t k = dims; k-- > 0;) {
            if (++index[k] <= bound[k]) {
                break;
            }
            index[k] = 0;
        }
    }
    return Polynomial::from_terms(nv, std::move(terms));
}

} // namespace

Polynomial resultant(const Polynomial &f, const Polynomial &g, Var v, const Deadline &deadline)
{
    check_same_ring(f, g);
    check_var(f, v);
    if (partial_degree(f, v) == 0 || partial_degree(g, v) == 0) {
        throw std::domain_error("resultant requires positive degree in the eliminated variable");
    }
    if (auto r = modular_resultant(f, g, v, deadline)) {
        return std::move(*r);
    }
    const auto n = f.nvars();
    UPoly a = coefficients_in(f, v);
    UPoly b = coefficients_in(g, v);
    int sign = 1;
    if (degree(a) < degree(b)) {
        std::swap(a, b);
        if (degree(a) % 2 == 1 && degree(b) % 2 == 1) {
            sign = -1;
        }
    }
    Polynomial lead = Polynomial::constant(n, 1);
    Polynomial h = Polynomial::constant(n, 1);
    while (true) {
        deadline.check();
        const long da = degree(a);
        const long db = degree(b);
        const long delta = da - db;
        if (da % 2 == 1 && db % 2 == 1) {
            sign = -sign;
        }
        UPoly r = prem(a, b, deadline);
        a = std::move(b);
        if (r.empty()) {
            return Polynomial(n);
        }
        b = divide_coefficients(r, lead * pow(h, static_cast<unsigned>(delta)), deadline);
        lead = a.back();
        if (delta > 0) {
            h = exact_divide(pow(lead, static_cast<unsigned>(delta)), pow(h, static_cast<unsigned>(delta - 1)), deadline);
        }
        if (degree(b) <= 0) {
            break;
        }
    }
    const long da = degree(a);
    Polynomial res = exact_divide(pow(b.back(), static_cast<unsigned>(da)), pow(h, static_cast<unsigned>(da - 1)), deadline);
    return sign < 0 ? -res : res;
}

Polynomial discriminant(const Polynomial &f, Var v, const Deadline &deadline)
{
    const auto d = partial_degree(f, v);
    if (d < 2) {
        throw std::domain_error("discriminant requires degree at least 2 in the variable");
    }
    Polynomial r = resultant(f, derivative(f, v), v, deadline);
    Polynomial disc = exact_divide(r, leading_coefficient(f, v), deadline);
    const auto half = static_cast<std::uint64_t>(d) * (d - 1) / 2;
    return half % 2 == 1 ? -disc : disc;
}

// GCD ----------------------------------------------------------------------

namespace
{

struct HeuristicGcd {
    Polynomial h, cff, cfg;
};

Integer max_norm(const Polynomial &f)
{
    Integer m = 0;
    for (const auto &t : f.terms()) {
        if (mpz_cmpabs(t.coefficient.get_mpz_t(), m.get_mpz_t()) > 0) {
            m = abs(t.coefficient);
        }
    }
    return m;
}

Polynomial ground_primitive(const Polynomial &f)
{
    const Integer c = content(f);
    return c <= 1 ? f : f.divided_by(c);
}

// Inverse of evaluating v at x: reads h as a balanced base-x expansion.
Polynomial interpolate(const Polynomial &h, Var v, const Integer &x)
{
    std::vector<Term> out;
    std::vector<Term> rest(h.terms().begin(), h.terms().end());
    Integer half = x / 2;
    Exponent k = 0;
    while (!rest.empty()) {
        std::vector<Term> next;
        for (auto &t : rest) {
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), t.coefficient.get_mpz_t(), x.get_mpz_t());
            if (r > half) {
                r -= x;
            }
            t.coefficient -= r;
            if (r != 0) {
                Term digit{t.exponents, std::move(r)};
                digit.exponents[v] = k;
                out.push_back(std::move(digit));
            }
            if (t.coefficient != 0) {
                mpz_divexact(t.coefficient.get_mpz_t(), t.coefficient.get_mpz_t(), x.get_mpz_t());
                next.push_back(std::move(t));
            }
        }
        rest = std::move(next);
        ++k;
    }
    return Polynomial::from_terms(h.nvars(), std::move(out));
}

// Heuristic gcd: evaluate one variable at a large integer, recurse, and lift
// the image back by balanced base-x expansion; a lift is accepted only after
// trial division. Returns nullopt when every evaluation point fails.
std::optional<HeuristicGcd> heuristic_gcd(const Polynomial &f0, const Polynomial &g0, const Deadline &deadline)
{
    const auto n = f0.nvars();
    Integer c;
    mpz_gcd(c.get_mpz_t(), content(f0).get_mpz_t(), content(g0).get_mpz_t());
    const Polynomial f = f0.divided_by(c);
    const Polynomial g = g0.divided_by(c);
    if (f.is_constant() || g.is_constant()) {
        return HeuristicGcd{Polynomial::constant(n, c), f, g};
    }
    Var v = n;
    for (Var k = n; k-- > 0;) {
        if (involves(f, k) || involves(g, k)) {
            v = k;
            break;
        }
    }
    deadline.check();

    const Integer nf = max_norm(f);
    const Integer ng = max_norm(g);
    const Integer b = 2 * std::min(nf, ng) + 29;
    Integer x = std::max(Integer(std::min(b, Integer(99 * sqrt(b)))),
                         Integer(2 * std::min(Integer(nf / abs(f.leading_coefficient())),
                                              Integer(ng / abs(g.leading_coefficient())))
                                 + 2));
    for (int attempt = 0; attempt < 6; ++attempt) {
        deadline.check();
        const Polynomial fx = substitute(f, v, x);
        const Polynomial gx = substitute(g, v, x);
        if (!fx.is_zero() && !gx.is_zero()) {
            if (auto image = heuristic_gcd(fx, gx, deadline)) {
                const Polynomial h = ground_primitive(interpolate(image->h, v, x));
                if (auto cff = try_exact_divide(f, h, deadline)) {
                    if (auto cfg = try_exact_divide(g, h, deadline)) {
                        return HeuristicGcd{h * c, std::move(*cff), std::move(*cfg)};
                    }
                }
                const Polynomial cff = interpolate(image->cff, v, x);
                if (!cff.is_zero()) {
                    if (auto h2 = try_exact_divide(f, cff, deadline)) {
                        if (auto cfg = try_exact_divide(g, *h2, deadline)) {
                            return HeuristicGcd{*h2 * c, cff, std::move(*cfg)};
                        }
                    }
                }
                const Polynomial cfg = interpolate(image->cfg, v, x);
                if (!cfg.is_zero()) {
                    if (auto h3 = try_exact_divide(g, cfg, deadline)) {
                        if (auto cff2 = try_exact_divide(f, *h3, deadline)) {
                            return HeuristicGcd{*h3 * c, std::move(*cff2), cfg};
                        }
                    }
                }
            }
        }
        x = 73794 * x * Integer(sqrt(Integer(sqrt(x)))) / 27011;
    }
    return std::nullopt;
}

Polynomial prs_gcd(const Polynomial &a, const Polynomial &b, const Deadline &deadline);

} // namespace

Polynomial gcd(const Polynomial &a, const Polynomial &b, const Deadline &deadline)
{
    check_same_ring(a, b);
    if (a.is_zero()) {
        return normalized(b);
    }
    if (b.is_zero()) {
        return normalized(a);
    }
    if (a.is_constant() || b.is_constant()) {
        return Polynomial::constant(a.nvars(), 1);
    }
    if (auto r = heuristic_gcd(a, b, deadline)) {
        return normalized(r->h);
    }
    return prs_gcd(a, b, deadline);
}

namespace
{

Polynomial prs_gcd(const Polynomial &a, const Polynomial &b, const Deadline &deadline)
{
    const auto n = a.nvars();
    deadline.check();

    // Recurse on the highest-indexed variable present in either input.
    Var v = n;
    for (Var k = n; k-- > 0;) {
        if (involves(a, k) || involves(b, k)) {
            v = k;
            break;
        }
    }
    assert(v < n);
    if (!involves(a, v)) {
        return gcd(a, content_in(b, v, deadline), deadline);
    }
    if (!involves(b, v)) {
        return gcd(content_in(a, v, deadline), b, deadline);
    }

    const Polynomial ca = content_in(a, v, deadline);
    const Polynomial cb = content_in(b, v, deadline);
    const Polynomial c = gcd(ca, cb, deadline);

    UPoly pa = coefficients_in(exact_divide(a, ca, deadline), v);
    UPoly pb = coefficients_in(exact_divide(b, cb, deadline), v);
    if (degree(pa) < degree(pb)) {
        std::swap(pa, pb);
    }
    while (true) {
        deadline.check();
        UPoly r = prem(pa, pb, deadline);
        if (r.empty()) {
            break;
        }
        if (degree(r) == 0) {
            pb = UPoly{Polynomial::constant(n, 1)};
            break;
        }
        pa = std::move(pb);
        const Polynomial rp = from_coefficients(r, v, n);
        pb = coefficients_in(exact_divide(rp, content_in(rp, v, deadline), deadline), v);
    }
    return normalized(c * from_coefficients(pb, v, n));
}

} // namespace

Polynomial squarefree_part(const Polynomial &f, const Deadline &deadline)
{
    if (f.is_zero()) {
        throw std::domain_error("squarefree part of the zero polynomial");
    }
    if (f.is_constant()) {
        return Polynomial::constant(f.nvars(), 1);
    }
    Polynomial g = f;
    for (Var v = 0; v < f.nvars(); ++v) {
        if (!involves(f, v)) {
            continue;
        }
        g = gcd(g, derivative(f, v), deadline);
        if (g.is_constant()) {
            break;
        }
    }
    return normalized(exact_divide(f, g, deadline));
}

} // namespace cadkit
