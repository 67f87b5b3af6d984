#include "cadkit/features.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cadkit/projection.hpp"

namespace cadkit
{

namespace
{

char measure_suffix(TermMeasure m)
{
    switch (m) {
        case TermMeasure::degree:
            return 'd';
        case TermMeasure::appears:
            return 'a';
        case TermMeasure::effective:
            return 'e';
    }
    return '?';
}

std::string_view reduction_name(Reduction r)
{
    switch (r) {
        case Reduction::sum:
            return "sum";
        case Reduction::max:
            return "max";
        case Reduction::min:
            return "min";
        case Reduction::avg:
            return "avg";
    }
    return "?";
}

Reduction parse_reduction(std::string_view s)
{
    for (auto r : {Reduction::sum, Reduction::max, Reduction::min, Reduction::avg}) {
        if (reduction_name(r) == s) {
            return r;
        }
    }
    throw std::invalid_argument("unknown reduction '" + std::string(s) + "'");
}

// Empty collections reduce to 0.
template <typename T>
Rational reduce(Reduction r, const std::vector<T> &xs)
{
    if (xs.empty()) {
        return 0;
    }
    switch (r) {
        case Reduction::sum:
        case Reduction::avg: {
            Rational s = 0;
            for (const auto &x : xs) {
                s += Rational(x);
            }
            if (r == Reduction::avg) {
                s /= Rational(static_cast<unsigned long>(xs.size()));
            }
            return s;
        }
        case Reduction::max:
            return Rational(*std::max_element(xs.begin(), xs.end()));
        case Reduction::min:
            return Rational(*std::min_element(xs.begin(), xs.end()));
    }
    return 0;
}

std::uint64_t to_count(const Rational &q)
{
    if (q.get_den() != 1 || q < 0) {
        throw std::logic_error("feature value is not a non-negative integer");
    }
    return q.get_num().get_ui();
}

std::size_t digit_count(std::uint64_t v)
{
    std::size_t d = 1;
    while (v >= 10) {
        v /= 10;
        ++d;
    }
    return d;
}

} // namespace

std::string name(const FeatureOperator &op)
{
    std::string s(reduction_name(op.outer));
    s += '_';
    s += reduction_name(op.inner);
    s += '_';
    s += measure_suffix(op.measure);
    return s;
}

FeatureOperator parse_feature_operator(std::string_view s)
{
    const auto a = s.find('_');
    const auto b = s.find('_', a == std::string_view::npos ? a : a + 1);
    if (a == std::string_view::npos || b == std::string_view::npos || b + 2 != s.size()) {
        throw std::invalid_argument("malformed feature operator '" + std::string(s) + "'");
    }
    TermMeasure m;
    switch (s.back()) {
        case 'd':
            m = TermMeasure::degree;
            break;
        case 'a':
            m = TermMeasure::appears;
            break;
        case 'e':
            m = TermMeasure::effective;
            break;
        default:
            throw std::invalid_argument("unknown term measure in '" + std::string(s) + "'");
    }
    return {parse_reduction(s.substr(0, a)), parse_reduction(s.substr(a + 1, b - a - 1)), m};
}

std::vector<std::vector<std::uint64_t>> measure_multisets(std::span<const Polynomial> polys, Var v, TermMeasure m)
{
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(polys.size());
    for (const auto &f : polys) {
        std::vector<std::uint64_t> inner;
        inner.reserve(f.size());
        for (const auto &t : f.terms()) {
            const auto dv = t.exponents.at(v);
            switch (m) {
                case TermMeasure::degree:
                    inner.push_back(dv);
                    break;
                case TermMeasure::appears:
                    inner.push_back(dv > 0 ? 1 : 0);
                    break;
                case TermMeasure::effective:
                    inner.push_back(dv > 0 ? total_degree(t.exponents) : 0);
                    break;
            }
        }
        out.push_back(std::move(inner));
    }
    return out;
}

Rational apply_operator(const FeatureOperator &op, std::span<const Polynomial> polys, Var v)
{
    std::vector<Rational> inner;
    for (const auto &s : measure_multisets(polys, v, op.measure)) {
        inner.push_back(reduce(op.inner, s));
    }
    return reduce(op.outer, inner);
}

// FeatureMatrix ------------------------------------------------------------

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_labels, std::size_t cols)
    : m_labels(std::move(row_labels)), m_cols(cols), m_values(m_labels.size() * cols, 0)
{
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_labels, std::size_t cols,
                             std::vector<std::uint64_t> row_major)
    : m_labels(std::move(row_labels)), m_cols(cols), m_values(std::move(row_major))
{
    if (m_values.size() != m_labels.size() * m_cols) {
        throw std::invalid_argument("feature matrix value count does not match its shape");
    }
}

std::vector<std::uint64_t> FeatureMatrix::row(std::size_t r) const
{
    return {m_values.begin() + static_cast<std::ptrdiff_t>(r * m_cols),
            m_values.begin() + static_cast<std::ptrdiff_t>((r + 1) * m_cols)};
}

std::vector<std::uint64_t> FeatureMatrix::column(std::size_t c) const
{
    std::vector<std::uint64_t> out;
    out.reserve(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        out.push_back((*this)(r, c));
    }
    return out;
}

std::string to_string(const FeatureMatrix &m)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r > 0) {
            os << "; ";
        }
        os << '(';
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                os << ' ';
            }
            os << m(r, c);
        }
        os << ')';
    }
    os << ']';
    return os.str();
}

FeatureMatrix ie11(std::span<const Polynomial> polys)
{
    if (polys.empty()) {
        throw std::invalid_argument("ie11 of an empty polynomial list needs an explicit variable count");
    }
    return ie11(polys, polys.front().nvars());
}

FeatureMatrix ie11(std::span<const Polynomial> polys, std::size_t n)
{
    std::vector<std::string> labels;
    for (const auto &op : ie11_operators) {
        labels.push_back(name(op));
    }
    FeatureMatrix m(std::move(labels), n);
    for (std::size_t r = 0; r < ie11_operators.size(); ++r) {
        for (Var v = 0; v < n; ++v) {
            m(r, v) = to_count(apply_operator(ie11_operators[r], polys, v));
        }
    }
    return m;
}

FeatureMatrix ie11(const PolynomialSystem &sys)
{
    const auto polys = sys.polynomials();
    return ie11(polys);
}

FeatureMatrix re4(const PolynomialSystem &sys, const Deadline &deadline)
{
    const Polynomial p = squarefree_product(sys, deadline);
    FeatureMatrix m({"deg_r", "deg_sr", "terms_r", "terms_sr"}, sys.nvars());
    for (Var v = 0; v < sys.nvars(); ++v) {
        const auto prof = resultant_profile_of(p, v, deadline);
        m(0, v) = prof.deg_r;
        m(1, v) = prof.deg_sr;
        m(2, v) = prof.terms_r;
        m(3, v) = prof.terms_sr;
    }
    return m;
}

std::uint64_t max_l(std::span<const Polynomial> polys, Var v)
{
    std::uint64_t best = 0;
    for (const auto &f : polys) {
        if (involves(f, v)) {
            best = std::max(best, total_degree(leading_coefficient(f, v)));
        }
    }
    return best;
}

Rational mean_feature_digit_length(const FeatureMatrix &m)
{
    if (m.values().empty()) {
        throw std::invalid_argument("mean digit length of an empty feature matrix");
    }
    unsigned long digits = 0;
    for (const auto v : m.values()) {
        digits += digit_count(v);
    }
    Rational q(digits, static_cast<unsigned long>(m.values().size()));
    q.canonicalize();
    return q;
}

ExponentListing feature_e(const PolynomialSystem &sys)
{
    ExponentListing out;
    for (const auto &c : sys.constraints()) {
        std::vector<ExponentVector> group;
        for (const auto &t : c.poly.terms()) {
            if (total_degree(t.exponents) > 0) {
                group.push_back(t.exponents);
            }
        }
        out.push_back(std::move(group));
    }
    return out;
}

ExponentListing feature_m(const PolynomialSystem &sys)
{
    Polynomial product = Polynomial::constant(sys.nvars(), 1);
    for (const auto &c : sys.constraints()) {
        product *= c.poly;
    }
    std::vector<ExponentVector> group;
    for (const auto &t : product.terms()) {
        if (total_degree(t.exponents) > 0) {
            group.push_back(t.exponents);
        }
    }
    return {std::move(group)};
}

FeatureMatrix feature_p(const PolynomialSystem &sys, const Deadline &deadline)
{
    const auto polys = sys.polynomials();
    return ie11(projection_union(polys, deadline), sys.nvars());
}

FeatureMatrix feature_s(const PolynomialSystem &sys, const Deadline &deadline)
{
    const std::vector<Polynomial> p{squarefree_product(sys, deadline)};
    return ie11(projection_union(p, deadline), sys.nvars());
}

} // namespace cadkit
