#include "cadkit/heuristics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cadkit/deadline.hpp"
#include "cadkit/features.hpp"
#include "cadkit/projection.hpp"

namespace cadkit
{

std::string_view to_string(Heuristic h)
{
    switch (h) {
        case Heuristic::svob:
            return "svob";
        case Heuristic::svoc:
            return "svoc";
        case Heuristic::gmods:
            return "gmods";
        case Heuristic::tone:
            return "tone";
        case Heuristic::slm:
            return "slm";
        case Heuristic::SmSsAa:
            return "SmSsAa";
        case Heuristic::SmAaMl:
            return "SmAaMl";
        case Heuristic::isf:
            return "isf";
        case Heuristic::psf:
            return "psf";
        case Heuristic::ipf:
            return "ipf";
    }
    return "?";
}

Heuristic parse_heuristic(std::string_view s)
{
    for (const auto h : all_heuristics) {
        if (to_string(h) == s) {
            return h;
        }
    }
    throw std::invalid_argument("unknown heuristic '" + std::string(s) + "'");
}

bool uses_projection(Heuristic h)
{
    return h == Heuristic::psf || h == Heuristic::ipf;
}

namespace
{

constexpr FeatureOperator sum_max_d{Reduction::sum, Reduction::max, TermMeasure::degree};
constexpr FeatureOperator sum_sum_d{Reduction::sum, Reduction::sum, TermMeasure::degree};
constexpr FeatureOperator max_max_d{Reduction::max, Reduction::max, TermMeasure::degree};
constexpr FeatureOperator max_max_e{Reduction::max, Reduction::max, TermMeasure::effective};
constexpr FeatureOperator sum_sum_a{Reduction::sum, Reduction::sum, TermMeasure::appears};
constexpr FeatureOperator avg_avg_d{Reduction::avg, Reduction::avg, TermMeasure::degree};

Rational op(const FeatureOperator &o, std::span<const Polynomial> polys, Var v)
{
    return apply_operator(o, polys, v);
}

Rational ml(std::span<const Polynomial> polys, Var v)
{
    return Rational(static_cast<unsigned long>(max_l(polys, v)));
}

void append_column(std::vector<Rational> &out, const FeatureMatrix &m, Var v)
{
    for (const auto x : m.column(v)) {
        out.emplace_back(static_cast<unsigned long>(x));
    }
}

// Tuple for one variable; `projected` carries ie11 of the pf union when the
// heuristic needs it.
std::vector<Rational> tuple_for(Heuristic h, std::span<const Polynomial> polys, Var v, const FeatureMatrix *input,
                                const FeatureMatrix *projected)
{
    switch (h) {
        case Heuristic::svob:
            return {op(max_max_d, polys, v), op(max_max_e, polys, v), op(sum_sum_a, polys, v)};
        case Heuristic::svoc:
            return {op(max_max_d, polys, v), ml(polys, v), op(sum_max_d, polys, v)};
        case Heuristic::gmods:
            return {op(sum_max_d, polys, v)};
        case Heuristic::tone:
            return {op(sum_max_d, polys, v), op(avg_avg_d, polys, v), op(sum_sum_d, polys, v)};
        case Heuristic::slm:
            return {op(sum_max_d, polys, v), ml(polys, v), op(max_max_d, polys, v)};
        case Heuristic::SmSsAa:
            return {op(sum_max_d, polys, v), op(sum_sum_d, polys, v), op(avg_avg_d, polys, v)};
        case Heuristic::SmAaMl:
            return {op(sum_max_d, polys, v), op(avg_avg_d, polys, v), ml(polys, v)};
        case Heuristic::isf: {
            std::vector<Rational> out;
            append_column(out, *input, v);
            return out;
        }
        case Heuristic::psf: {
            std::vector<Rational> out;
            append_column(out, *projected, v);
            return out;
        }
        case Heuristic::ipf: {
            std::vector<Rational> out;
            append_column(out, *input, v);
            append_column(out, *projected, v);
            return out;
        }
    }
    throw std::logic_error("unhandled heuristic");
}

struct SharedFeatures {
    FeatureMatrix input;
    FeatureMatrix projected;
};

SharedFeatures shared_features(Heuristic h, std::span<const Polynomial> polys, const HeuristicOptions &options)
{
    SharedFeatures s;
    const std::size_t n = polys.front().nvars();
    if (h == Heuristic::isf || h == Heuristic::ipf) {
        s.input = ie11(polys, n);
    }
    if (uses_projection(h)) {
        const auto deadline = Deadline::after(options.projection_budget);
        s.projected = ie11(projection_union(polys, deadline), n);
    }
    return s;
}

} // namespace

std::vector<Rational> feature_tuple(Heuristic h, std::span<const Polynomial> polys, Var v,
                                    const HeuristicOptions &options)
{
    if (polys.empty()) {
        throw std::invalid_argument("heuristics need a non-empty polynomial list");
    }
    const auto shared = shared_features(h, polys, options);
    return tuple_for(h, polys, v, &shared.input, &shared.projected);
}

std::vector<ScoredVariable> score_variables(Heuristic h, std::span<const Polynomial> polys,
                                            const HeuristicOptions &options)
{
    if (polys.empty()) {
        throw std::invalid_argument("heuristics need a non-empty polynomial list");
    }
    const auto shared = shared_features(h, polys, options);
    std::vector<ScoredVariable> out;
    for (Var v = 0; v < polys.front().nvars(); ++v) {
        auto key = tuple_for(h, polys, v, &shared.input, &shared.projected);
        key.emplace_back(static_cast<unsigned long>(v + 1));
        out.push_back(ScoredVariable{v, std::move(key)});
    }
    return out;
}

VariableOrdering suggest(Heuristic h, std::span<const Polynomial> polys, const HeuristicOptions &options)
{
    auto scored = score_variables(h, polys, options);
    std::sort(scored.begin(), scored.end(), [](const ScoredVariable &a, const ScoredVariable &b) {
        return std::lexicographical_compare(a.key.begin(), a.key.end(), b.key.begin(), b.key.end());
    });
    std::vector<Var> order;
    order.reserve(scored.size());
    for (const auto &s : scored) {
        order.push_back(s.variable);
    }
    return VariableOrdering(std::move(order));
}

VariableOrdering suggest(Heuristic h, const PolynomialSystem &sys, const HeuristicOptions &options)
{
    const auto polys = sys.polynomials();
    return suggest(h, polys, options);
}

} // namespace cadkit
