#ifndef CADKIT_HEURISTICS_HPP
#define CADKIT_HEURISTICS_HPP

#include <array>
#include <chrono>
#include <span>
#include <string_view>
#include <vector>

#include "cadkit/polynomial.hpp"
#include "cadkit/system.hpp"

namespace cadkit
{

enum class Heuristic { svob, svoc, gmods, tone, slm, SmSsAa, SmAaMl, isf, psf, ipf };

inline constexpr std::array<Heuristic, 10> all_heuristics{Heuristic::svob,   Heuristic::svoc,   Heuristic::gmods,
                                                          Heuristic::tone,   Heuristic::slm,    Heuristic::SmSsAa,
                                                          Heuristic::SmAaMl, Heuristic::isf,    Heuristic::psf,
                                                          Heuristic::ipf};

std::string_view to_string(Heuristic h);
Heuristic parse_heuristic(std::string_view s);

// Whether the heuristic needs projection (resultant) computations.
bool uses_projection(Heuristic h);

struct HeuristicOptions {
    // Per-call budget for psf / ipf; exceeding it throws budget_exceeded.
    std::chrono::duration<double> projection_budget{3.0};
};

// Feature tuple with the variable index appended last, so keys of distinct
// variables never compare equal.
struct ScoredVariable {
    Var variable;
    std::vector<Rational> key;
};

// The feature tuple of one variable, without the index suffix.
std::vector<Rational> feature_tuple(Heuristic h, std::span<const Polynomial> polys, Var v,
                                    const HeuristicOptions &options = {});

// Keys for every variable, in variable order.
std::vector<ScoredVariable> score_variables(Heuristic h, std::span<const Polynomial> polys,
                                            const HeuristicOptions &options = {});

// Sorts keys ascending; the smallest key becomes the greatest variable.
VariableOrdering suggest(Heuristic h, std::span<const Polynomial> polys, const HeuristicOptions &options = {});
VariableOrdering suggest(Heuristic h, const PolynomialSystem &sys, const HeuristicOptions &options = {});

} // namespace cadkit

#endif
