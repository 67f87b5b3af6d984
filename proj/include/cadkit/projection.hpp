#ifndef CADKIT_PROJECTION_HPP
#define CADKIT_PROJECTION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cadkit/deadline.hpp"
#include "cadkit/polynomial.hpp"
#include "cadkit/system.hpp"

namespace cadkit
{

// Content removed, leading coefficient positive. Throws for zero input.
Polynomial normalize_factor(const Polynomial &f);

// First projection factor set of a polynomial list when `variable` is the
// greatest variable: the members free of it, plus leading coefficients,
// discriminants and pairwise resultants of the members that involve it.
// Constants are dropped and members are normalized and deduplicated.
struct ProjectionFactorSet {
    Var variable = 0;
    std::vector<Polynomial> factors;
};

ProjectionFactorSet first_projection_factor_set(std::span<const Polynomial> polys, Var v,
                                                const Deadline &deadline = Deadline::unbounded());
ProjectionFactorSet first_projection_factor_set(const PolynomialSystem &sys, Var v,
                                                const Deadline &deadline = Deadline::unbounded());

// Concatenation of pf(F, x_i) over every variable, in variable order. A
// factor shared by two per-variable sets is kept once per set.
std::vector<Polynomial> projection_union(std::span<const Polynomial> polys,
                                         const Deadline &deadline = Deadline::unbounded());

// Squarefree part of the product of all constraint polynomials.
Polynomial squarefree_product(const PolynomialSystem &sys, const Deadline &deadline = Deadline::unbounded());

struct ResultantProfile {
    std::uint64_t deg_r = 0;
    std::uint64_t deg_sr = 0;
    std::uint64_t terms_r = 0;
    std::uint64_t terms_sr = 0;

    friend bool operator==(const ResultantProfile &, const ResultantProfile &) = default;
};

// r_v = res(p, dp/dv, v) for the squarefree product p, sr_v its squarefree
// part. Throws std::domain_error when v does not occur in p.
ResultantProfile resultant_profile(const PolynomialSystem &sys, Var v,
                                   const Deadline &deadline = Deadline::unbounded());
ResultantProfile resultant_profile_of(const Polynomial &p, Var v, const Deadline &deadline = Deadline::unbounded());

} // namespace cadkit

#endif
