#ifndef CADKIT_DATAGEN_HPP
#define CADKIT_DATAGEN_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/system.hpp"

namespace cadkit
{

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    friend bool operator==(const IntRange &, const IntRange &) = default;
};

// pure: no relations; equations: "=" everywhere; all_six: uniform over the
// six relations; mixed: equations and inequalities with equal probability.
enum class RelationClass { pure, equations, all_six, mixed };

std::string_view to_string(RelationClass r);
RelationClass parse_relation_class(std::string_view s);

// Name codes after the "RE" prefix, with the presets used here:
//   c<X>  coefficient magnitude bound    E 9, M 99, H 999        (default 9)
//   d<X>  total degree per polynomial    E 1..2, M 1..3, H 2..4  (default 1..3)
//   e<X>  per-variable exponent cap      E 2, M 3, H 4           (default none)
//   n<k>  number of constraints
//   p<k>  p0 forbids constant terms; any other k allows them
//   r<X>  relations: C pure, E equations, H all six, M mixed     (default E)
//   t<X>  terms per polynomial           E 1..3, M 2..6, H 4..10 (default 2..5)
//   v<n>  number of variables
struct GeneratorSpec {
    std::string name;
    std::size_t nvars = 3;
    std::size_t nconstraints = 2;
    IntRange degree{1, 3};
    // 0 means no per-variable cap beyond the degree bound.
    std::uint32_t exponent_cap = 0;
    IntRange term_count{2, 5};
    // Coefficients are drawn from [-bound, bound] without 0.
    std::int64_t coefficient_bound = 9;
    bool constant_terms = true;
    RelationClass relations = RelationClass::equations;
    bool every_variable = true;
    std::uint64_t seed = 0;

    friend bool operator==(const GeneratorSpec &, const GeneratorSpec &) = default;
};

// Throws std::invalid_argument on names outside the grammar.
GeneratorSpec parse_dataset_name(std::string_view name);

// Checks ranges and consistency; throws std::invalid_argument.
void validate(const GeneratorSpec &spec);

// Independent per-instance stream so serial and parallel runs agree.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

// Uniform integer in [lo, hi] by rejection sampling on raw engine output.
std::int64_t uniform_int(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi);

PolynomialSystem generate_one(const GeneratorSpec &spec, std::uint64_t index);
std::vector<PolynomialSystem> generate(const GeneratorSpec &spec, std::size_t count, std::size_t workers = 1);

} // namespace cadkit

#endif
