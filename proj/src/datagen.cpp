#include "cadkit/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

namespace cadkit
{

std::string_view to_string(RelationClass r)
{
    switch (r) {
        case RelationClass::pure:
            return "pure";
        case RelationClass::equations:
            return "equations";
        case RelationClass::all_six:
            return "all_six";
        case RelationClass::mixed:
            return "mixed";
    }
    return "?";
}

RelationClass parse_relation_class(std::string_view s)
{
    for (auto r : {RelationClass::pure, RelationClass::equations, RelationClass::all_six, RelationClass::mixed}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    throw std::invalid_argument("unknown relation class '" + std::string(s) + "'");
}

namespace
{

[[noreturn]] void bad_name(std::string_view name, const std::string &why)
{
    throw std::invalid_argument("dataset name '" + std::string(name) + "': " + why);
}

struct NameReader {
    std::string_view name;
    std::size_t pos = 0;

    bool at(char c) const { return pos < name.size() && name[pos] == c; }

    char level(char code)
    {
        if (pos >= name.size() || (name[pos] != 'E' && name[pos] != 'M' && name[pos] != 'H')) {
            bad_name(name, std::string("code '") + code + "' needs E, M or H");
        }
        return name[pos++];
    }

    std::size_t number(char code)
    {
        std::size_t v = 0;
        const auto start = pos;
        while (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos]))) {
            v = v * 10 + static_cast<std::size_t>(name[pos++] - '0');
            if (v > 1000000) {
                bad_name(name, "number too large");
            }
        }
        if (pos == start) {
            bad_name(name, std::string("code '") + code + "' needs a number");
        }
        return v;
    }
};

template <typename T>
T by_level(char level, T e, T m, T h)
{
    return level == 'E' ? e : level == 'M' ? m : h;
}

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > (1ULL << 40)) {
            return r;
        }
    }
    return r;
}

// Exponent vectors of total degree exactly d, each entry at most cap.
void monomials_of_degree(std::size_t nvars, std::uint32_t d, std::uint32_t cap, std::vector<ExponentVector> &out)
{
    ExponentVector e(nvars, 0);
    auto rec = [&](auto &&self, std::size_t i, std::uint32_t left) -> void {
        if (i + 1 == nvars) {
            if (left <= cap) {
                e[i] = left;
                out.push_back(e);
            }
            return;
        }
        for (std::uint32_t k = std::min(left, cap) + 1; k-- > 0;) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(rec, 0, d);
}

Relation draw_relation(RelationClass rc, std::mt19937_64 &rng)
{
    static constexpr Relation six[] = {Relation::eq, Relation::gt, Relation::ge,
                                       Relation::lt, Relation::le, Relation::ne};
    static constexpr Relation order[] = {Relation::gt, Relation::ge, Relation::lt, Relation::le};
    switch (rc) {
        case RelationClass::pure:
            return Relation::none;
        case RelationClass::equations:
            return Relation::eq;
        case RelationClass::all_six:
            return six[uniform_int(rng, 0, 5)];
        case RelationClass::mixed:
            return uniform_int(rng, 0, 1) == 0 ? Relation::eq : order[uniform_int(rng, 0, 3)];
    }
    return Relation::eq;
}

class PolynomialSampler
{
public:
    explicit PolynomialSampler(const GeneratorSpec &spec) : m_spec(spec)
    {
        const auto cap = spec.exponent_cap == 0 ? static_cast<std::uint32_t>(spec.degree.hi) : spec.exponent_cap;
        m_by_degree.resize(static_cast<std::size_t>(spec.degree.hi) + 1);
        for (std::uint32_t d = 0; d < m_by_degree.size(); ++d) {
            monomials_of_degree(spec.nvars, d, cap, m_by_degree[d]);
        }
    }

    Polynomial draw(std::mt19937_64 &rng) const
    {
        auto d = static_cast<std::uint32_t>(uniform_int(rng, m_spec.degree.lo, m_spec.degree.hi));
        while (m_by_degree[d].empty()) {
            --d;
        }
        std::vector<ExponentVector> lower;
        for (std::uint32_t k = m_spec.constant_terms ? 0 : 1; k < d; ++k) {
            lower.insert(lower.end(), m_by_degree[k].begin(), m_by_degree[k].end());
        }
        const auto &top = m_by_degree[d];
        const auto wanted = static_cast<std::size_t>(uniform_int(rng, m_spec.term_count.lo, m_spec.term_count.hi));

        // One term of the drawn degree, the rest from a partial shuffle of
        // every other admissible monomial.
        std::vector<ExponentVector> pool(top);
        const auto lead = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1));
        std::swap(pool[lead], pool.back());
        std::vector<ExponentVector> chosen{pool.back()};
        pool.pop_back();
        pool.insert(pool.end(), lower.begin(), lower.end());
        const auto extra = std::min(wanted - 1, pool.size());
        for (std::size_t i = 0; i < extra; ++i) {
            const auto j = static_cast<std::size_t>(
                uniform_int(rng, static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size()) - 1));
            std::swap(pool[i], pool[j]);
            chosen.push_back(pool[i]);
        }

        std::vector<Term> terms;
        for (auto &e : chosen) {
            std::int64_t c = uniform_int(rng, 1, m_spec.coefficient_bound);
            if (uniform_int(rng, 0, 1) == 1) {
                c = -c;
            }
            terms.push_back(Term{std::move(e), Integer(static_cast<long>(c))});
        }
        return Polynomial::from_terms(m_spec.nvars, std::move(terms));
    }

private:
    const GeneratorSpec &m_spec;
    std::vector<std::vector<ExponentVector>> m_by_degree;
};

bool mentions_every_variable(const std::vector<Constraint> &cs, std::size_t nvars)
{
    for (Var v = 0; v < nvars; ++v) {
        const bool found = std::any_of(cs.begin(), cs.end(), [v](const Constraint &c) { return involves(c.poly, v); });
        if (!found) {
            return false;
        }
    }
    return true;
}

PolynomialSystem draw_system(const GeneratorSpec &spec, const PolynomialSampler &sampler, std::uint64_t index)
{
    auto rng = instance_rng(spec.seed, index);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Constraint> cs;
        for (std::size_t i = 0; i < spec.nconstraints; ++i) {
            Polynomial p = sampler.draw(rng);
            cs.push_back({std::move(p), draw_relation(spec.relations, rng)});
        }
        if (!spec.every_variable || mentions_every_variable(cs, spec.nvars)) {
            return PolynomialSystem(spec.nvars, std::move(cs));
        }
    }
    throw std::runtime_error("generator could not place every variable; widen the term or degree range");
}

} // namespace

GeneratorSpec parse_dataset_name(std::string_view name)
{
    GeneratorSpec spec;
    spec.name = std::string(name);
    NameReader r{name};
    if (name.substr(0, 2) != "RE") {
        bad_name(name, "must start with RE");
    }
    r.pos = 2;
    if (r.at('c')) {
        ++r.pos;
        spec.coefficient_bound = by_level<std::int64_t>(r.level('c'), 9, 99, 999);
    }
    bool shaped = false;
    if (r.at('d')) {
        ++r.pos;
        const char l = r.level('d');
        spec.degree = by_level(l, IntRange{1, 2}, IntRange{1, 3}, IntRange{2, 4});
        shaped = true;
    }
    if (r.at('e')) {
        ++r.pos;
        spec.exponent_cap = by_level<std::uint32_t>(r.level('e'), 2, 3, 4);
        shaped = true;
    }
    if (!shaped) {
        bad_name(name, "expected a d or e code after RE");
    }
    if (!r.at('n')) {
        bad_name(name, "expected n<k>");
    }
    ++r.pos;
    spec.nconstraints = r.number('n');
    if (r.at('p')) {
        ++r.pos;
        spec.constant_terms = r.number('p') != 0;
    }
    if (r.at('r')) {
        ++r.pos;
        if (r.pos >= name.size()) {
            bad_name(name, "code 'r' needs C, E, H or M");
        }
        switch (name[r.pos++]) {
            case 'C':
                spec.relations = RelationClass::pure;
                break;
            case 'E':
                spec.relations = RelationClass::equations;
                break;
            case 'H':
                spec.relations = RelationClass::all_six;
                break;
            case 'M':
                spec.relations = RelationClass::mixed;
                break;
            default:
                bad_name(name, "code 'r' needs C, E, H or M");
        }
    } else if (r.at('t')) {
        ++r.pos;
        spec.term_count = by_level(r.level('t'), IntRange{1, 3}, IntRange{2, 6}, IntRange{4, 10});
    }
    if (!r.at('v')) {
        bad_name(name, "expected v<n>");
    }
    ++r.pos;
    spec.nvars = r.number('v');
    if (r.pos != name.size()) {
        bad_name(name, "trailing characters");
    }
    if (spec.exponent_cap != 0 && spec.degree.hi < static_cast<std::int64_t>(spec.exponent_cap)) {
        spec.degree.hi = spec.exponent_cap;
    }
    validate(spec);
    return spec;
}

void validate(const GeneratorSpec &spec)
{
    auto fail = [](const std::string &what) { throw std::invalid_argument("generator spec: " + what); };
    if (spec.nvars == 0 || spec.nvars > 64) {
        fail("variable count must be in 1..64");
    }
    if (spec.nconstraints == 0) {
        fail("at least one constraint is required");
    }
    if (spec.degree.lo < 1 || spec.degree.hi < spec.degree.lo || spec.degree.hi > 64) {
        fail("degree range must satisfy 1 <= lo <= hi <= 64");
    }
    if (spec.term_count.lo < 1 || spec.term_count.hi < spec.term_count.lo) {
        fail("term count range must satisfy 1 <= lo <= hi");
    }
    if (spec.coefficient_bound < 1) {
        fail("coefficient bound must be positive");
    }
    if (binomial(spec.nvars + static_cast<std::uint64_t>(spec.degree.hi), spec.nvars) > 2000000) {
        fail("monomial space too large");
    }
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

std::int64_t uniform_int(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi)
{
    if (hi < lo) {
        throw std::invalid_argument("uniform_int: empty range");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) {
        return static_cast<std::int64_t>(rng());
    }
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % range);
}

PolynomialSystem generate_one(const GeneratorSpec &spec, std::uint64_t index)
{
    validate(spec);
    const PolynomialSampler sampler(spec);
    return draw_system(spec, sampler, index);
}

std::vector<PolynomialSystem> generate(const GeneratorSpec &spec, std::size_t count, std::size_t workers)
{
    if (count == 0) {
        throw std::invalid_argument("generate: count must be at least 1");
    }
    validate(spec);
    const PolynomialSampler sampler(spec);
    std::vector<std::optional<PolynomialSystem>> slots(count);
    workers = std::clamp<std::size_t>(workers, 1, count);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](std::size_t w) {
        try {
            for (std::size_t i = w; i < count; i += workers) {
                slots[i] = draw_system(spec, sampler, i);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<PolynomialSystem> out;
    out.reserve(count);
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace cadkit
