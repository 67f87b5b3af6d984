#ifndef CADKIT_FEATURES_HPP
#define CADKIT_FEATURES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/deadline.hpp"
#include "cadkit/polynomial.hpp"
#include "cadkit/system.hpp"

namespace cadkit
{

// Per-term measures with respect to a variable v:
//   degree    - exponent of v
//   appears   - 1 if v occurs in the term, else 0
//   effective - total degree of the term if v occurs in it, else 0
enum class TermMeasure { degree, appears, effective };
enum class Reduction { sum, max, min, avg };

struct FeatureOperator {
    Reduction outer;
    Reduction inner;
    TermMeasure measure;

    friend bool operator==(const FeatureOperator &, const FeatureOperator &) = default;
};

// "sum_max_d" style names.
std::string name(const FeatureOperator &op);
FeatureOperator parse_feature_operator(std::string_view name);

// Row order of the ie11 matrix.
inline constexpr std::array<FeatureOperator, 11> ie11_operators{{
    {Reduction::sum, Reduction::max, TermMeasure::degree},
    {Reduction::sum, Reduction::max, TermMeasure::effective},
    {Reduction::sum, Reduction::sum, TermMeasure::degree},
    {Reduction::sum, Reduction::sum, TermMeasure::effective},
    {Reduction::sum, Reduction::sum, TermMeasure::appears},
    {Reduction::max, Reduction::max, TermMeasure::degree},
    {Reduction::max, Reduction::sum, TermMeasure::effective},
    {Reduction::max, Reduction::max, TermMeasure::effective},
    {Reduction::sum, Reduction::max, TermMeasure::appears},
    {Reduction::max, Reduction::sum, TermMeasure::degree},
    {Reduction::max, Reduction::sum, TermMeasure::appears},
}};

// One multiset per polynomial, one entry per term (constant terms give 0).
std::vector<std::vector<std::uint64_t>> measure_multisets(std::span<const Polynomial> polys, Var v, TermMeasure m);

// Outer reduction over the per-polynomial inner reductions. Exact; only avg
// can produce a non-integer.
Rational apply_operator(const FeatureOperator &op, std::span<const Polynomial> polys, Var v);

// d x n matrix of non-negative integers, row = feature, column = variable.
class FeatureMatrix
{
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> row_labels, std::size_t cols);
    FeatureMatrix(std::vector<std::string> row_labels, std::size_t cols, std::vector<std::uint64_t> row_major);

    std::size_t rows() const noexcept { return m_labels.size(); }
    std::size_t cols() const noexcept { return m_cols; }
    std::span<const std::string> labels() const noexcept { return m_labels; }
    std::span<const std::uint64_t> values() const noexcept { return m_values; }

    std::uint64_t &operator()(std::size_t r, std::size_t c) { return m_values[r * m_cols + c]; }
    std::uint64_t operator()(std::size_t r, std::size_t c) const { return m_values[r * m_cols + c]; }
    std::vector<std::uint64_t> row(std::size_t r) const;
    std::vector<std::uint64_t> column(std::size_t c) const;

    // Value equality; labels are not compared.
    friend bool operator==(const FeatureMatrix &a, const FeatureMatrix &b)
    {
        return a.m_cols == b.m_cols && a.m_values == b.m_values;
    }

private:
    std::vector<std::string> m_labels;
    std::size_t m_cols = 0;
    std::vector<std::uint64_t> m_values;
};

// "[(3 2 6); (4 4 8); ...]"
std::string to_string(const FeatureMatrix &m);

FeatureMatrix ie11(std::span<const Polynomial> polys);
// An empty list yields an all-zero matrix with n columns.
FeatureMatrix ie11(std::span<const Polynomial> polys, std::size_t n);
FeatureMatrix ie11(const PolynomialSystem &sys);

// Rows deg_r, deg_sr, terms_r, terms_sr; one column per variable.
FeatureMatrix re4(const PolynomialSystem &sys, const Deadline &deadline = Deadline::unbounded());

// Largest total degree of lc(f, v) over the polynomials that involve v.
std::uint64_t max_l(std::span<const Polynomial> polys, Var v);

// Total decimal digits over all entries divided by the entry count.
Rational mean_feature_digit_length(const FeatureMatrix &m);

// Exponent vectors of the non-constant terms, grouped per polynomial.
using ExponentListing = std::vector<std::vector<ExponentVector>>;

ExponentListing feature_e(const PolynomialSystem &sys);
// Single group: the support of the product of all constraint polynomials.
ExponentListing feature_m(const PolynomialSystem &sys);
FeatureMatrix feature_p(const PolynomialSystem &sys, const Deadline &deadline = Deadline::unbounded());
FeatureMatrix feature_s(const PolynomialSystem &sys, const Deadline &deadline = Deadline::unbounded());

} // namespace cadkit

#endif
