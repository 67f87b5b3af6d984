#include "cadkit/projection.hpp"

#include <algorithm>
#include <stdexcept>

namespace cadkit
{

Polynomial normalize_factor(const Polynomial &f)
{
    if (f.is_zero()) {
        throw std::domain_error("cannot normalize the zero polynomial");
    }
    return normalized(f);
}

namespace
{

void add_unique(std::vector<Polynomial> &set, const Polynomial &f)
{
    if (f.is_constant()) {
        return;
    }
    Polynomial n = normalize_factor(f);
    if (std::find(set.begin(), set.end(), n) == set.end()) {
        set.push_back(std::move(n));
    }
}

} // namespace

ProjectionFactorSet first_projection_factor_set(std::span<const Polynomial> polys, Var v, const Deadline &deadline)
{
    // Squarefree, content-free basis, one member per distinct input.
    std::vector<Polynomial> basis;
    for (const auto &f : polys) {
        if (f.is_zero()) {
            continue;
        }
        deadline.check();
        add_unique(basis, squarefree_part(f, deadline));
    }

    ProjectionFactorSet out;
    out.variable = v;
    std::vector<const Polynomial *> level;
    for (const auto &g : basis) {
        if (involves(g, v)) {
            level.push_back(&g);
        } else {
            add_unique(out.factors, g);
        }
    }
    for (const auto *g : level) {
        add_unique(out.factors, leading_coefficient(*g, v));
    }
    for (const auto *g : level) {
        if (partial_degree(*g, v) >= 2) {
            deadline.check();
            add_unique(out.factors, discriminant(*g, v, deadline));
        }
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
        for (std::size_t j = i + 1; j < level.size(); ++j) {
            deadline.check();
            add_unique(out.factors, resultant(*level[i], *level[j], v, deadline));
        }
    }
    return out;
}

ProjectionFactorSet first_projection_factor_set(const PolynomialSystem &sys, Var v, const Deadline &deadline)
{
    const auto polys = sys.polynomials();
    return first_projection_factor_set(polys, v, deadline);
}

std::vector<Polynomial> projection_union(std::span<const Polynomial> polys, const Deadline &deadline)
{
    std::vector<Polynomial> out;
    if (polys.empty()) {
        return out;
    }
    for (Var v = 0; v < polys.front().nvars(); ++v) {
        auto pf = first_projection_factor_set(polys, v, deadline);
        for (auto &f : pf.factors) {
            out.push_back(std::move(f));
        }
    }
    return out;
}

Polynomial squarefree_product(const PolynomialSystem &sys, const Deadline &deadline)
{
    Polynomial product = Polynomial::constant(sys.nvars(), 1);
    for (const auto &c : sys.constraints()) {
        if (c.poly.is_zero()) {
            throw std::domain_error("squarefree product of a system with a zero constraint");
        }
        product *= c.poly;
    }
    return squarefree_part(product, deadline);
}

ResultantProfile resultant_profile_of(const Polynomial &p, Var v, const Deadline &deadline)
{
    if (p.is_zero() || !involves(p, v)) {
        throw std::domain_error("resultant profile undefined: variable x" + std::to_string(v + 1)
                                + " does not occur in the squarefree product");
    }
    // A linear p has a derivative free of v, and res(p, c) = c.
    const Polynomial dp = derivative(p, v);
    const Polynomial r = partial_degree(p, v) == 1 ? dp : resultant(p, dp, v, deadline);
    ResultantProfile prof;
    prof.deg_r = total_degree(r);
    prof.terms_r = r.size();
    if (!r.is_zero()) {
        const Polynomial sr = squarefree_part(r, deadline);
        prof.deg_sr = total_degree(sr);
        prof.terms_sr = sr.size();
    }
    return prof;
}

ResultantProfile resultant_profile(const PolynomialSystem &sys, Var v, const Deadline &deadline)
{
    return resultant_profile_of(squarefree_product(sys, deadline), v, deadline);
}

} // namespace cadkit
