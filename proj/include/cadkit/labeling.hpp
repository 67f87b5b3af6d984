#ifndef CADKIT_LABELING_HPP
#define CADKIT_LABELING_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/system.hpp"

namespace cadkit
{

inline constexpr double default_tau = 0.03;
inline constexpr double default_time_limit = 900.0;

enum class Split { train, valid, test_valid, test };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

struct TimingRecord {
    VariableOrdering ordering;
    double seconds = 0.0;
    bool timed_out = false;
    // Set when the backend failed on this ordering; such records take no
    // part in the optimal sets.
    std::optional<std::string> error;
};

struct LabeledInstance {
    std::string id;
    PolynomialSystem system;
    double time_limit = default_time_limit;
    std::vector<TimingRecord> timings;
    std::optional<double> t_star;
    std::vector<VariableOrdering> abs_optimal;
    std::vector<VariableOrdering> rel_optimal;
    std::optional<Split> split;

    // At least one ordering finished and no backend errors occurred.
    bool usable() const;
};

// Seconds charged to a record in aggregates: time_limit for timeouts.
double charged_seconds(const TimingRecord &r, double time_limit);

// Recomputes t_star and both optimal sets from the timings.
// rel_optimal = {o : t(o) <= (1 + tau) t_star}, abs_optimal = {o : t(o) = t_star}.
void derive_optimal_sets(LabeledInstance &inst, double tau = default_tau);

class backend_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class CadBackend
{
public:
    virtual ~CadBackend() = default;
    // Returns the timing of one run; throws backend_error on failure.
    virtual TimingRecord run(const PolynomialSystem &sys, const VariableOrdering &o, double time_limit) const = 0;
};

// Product over projection levels of (1 + sum of total degrees of the level's
// polynomial set), starting from the input set and applying the first
// projection down the ordering.
double surrogate_cost(const PolynomialSystem &sys, const VariableOrdering &o);

// Deterministic stand-in for a CAD solver: seconds = surrogate_cost * unit.
class SurrogateBackend final : public CadBackend
{
public:
    explicit SurrogateBackend(double unit_seconds = 1e-4) : m_unit(unit_seconds) {}
    TimingRecord run(const PolynomialSystem &sys, const VariableOrdering &o, double time_limit) const override;

private:
    double m_unit;
};

// Runs a shell command built from a template with the placeholders
// {input_file}, {ordering} and {time_limit}. The command prints one line,
// "TIME <seconds>" or "TIMEOUT". The input file holds the system in text
// form; the ordering is written as "x2,x1,x3".
class ExternalBackend final : public CadBackend
{
public:
    explicit ExternalBackend(std::string command_template);
    TimingRecord run(const PolynomialSystem &sys, const VariableOrdering &o, double time_limit) const override;

    const std::string &command_template() const noexcept { return m_template; }

private:
    std::string m_template;
};

// Replays fixed timings; orderings mapped to nullopt time out.
class RecordedBackend final : public CadBackend
{
public:
    explicit RecordedBackend(std::map<VariableOrdering, std::optional<double>> table) : m_table(std::move(table)) {}
    TimingRecord run(const PolynomialSystem &sys, const VariableOrdering &o, double time_limit) const override;

private:
    std::map<VariableOrdering, std::optional<double>> m_table;
};

// Parses one line of backend output.
TimingRecord parse_backend_output(std::string_view output, const VariableOrdering &o, double time_limit);

struct LabelOptions {
    double time_limit = default_time_limit;
    double tau = default_tau;
    std::size_t max_vars = 6;
    std::size_t workers = 1;
};

// Runs every ordering (lexicographic order) and derives the optimal sets.
// Backend failures are recorded per ordering. Throws std::invalid_argument
// when the variable count exceeds the cap.
LabeledInstance label(std::string id, const PolynomialSystem &sys, const CadBackend &backend,
                      const LabelOptions &options = {});

// 7:1:1:1 sizes by largest remainder; earlier splits win ties.
std::array<std::size_t, 4> split_sizes(std::size_t count);

// Deterministic assignment of `count` items under the seed.
std::vector<Split> split(std::size_t count, std::uint64_t seed);

struct MultilabelSample {
    std::string id;
    const PolynomialSystem *system;
    VariableOrdering ordering;
};

struct Expansion {
    std::vector<MultilabelSample> samples;
    // Ids of instances without any absolute-optimal ordering.
    std::vector<std::string> dropped;
};

// One sample per absolute-optimal ordering. Instances must be unassigned or
// in train / valid; test splits throw std::invalid_argument.
Expansion expand_multilabel(const std::vector<LabeledInstance> &instances);

} // namespace cadkit

#endif
