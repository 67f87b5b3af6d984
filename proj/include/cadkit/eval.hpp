#ifndef CADKIT_EVAL_HPP
#define CADKIT_EVAL_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cadkit/features.hpp"
#include "cadkit/labeling.hpp"

namespace cadkit
{

struct InstanceResult {
    std::string id;
    VariableOrdering predicted;
    double t_pred = 0.0;
    double t_star = 0.0;
    double ratio = 1.0;
    bool timed_out = false;
    bool abs_hit = false;
    bool rel_hit = false;
};

struct EvalReport {
    std::string name;
    std::size_t count = 0;
    // Percentages.
    double abs_acc = 0.0;
    double rel_acc = 0.0;
    // Mean of per-instance t_pred / t_star, and sum t_pred / sum t_star.
    double time_ratio_mean = 0.0;
    double time_ratio_total = 0.0;
    // Sorted by id.
    std::vector<InstanceResult> per_instance;
};

// Scores predictions against labeled instances. Unusable instances and
// instances without a prediction are skipped. Throws std::invalid_argument
// for predictions naming unknown instances or invalid orderings.
EvalReport evaluate(const std::map<std::string, VariableOrdering> &predictions,
                    std::span<const LabeledInstance> instances, std::string name = {});

// Max time over the relatively optimal orderings divided by the min time
// over the rest, timeouts charged at the time limit. Throws
// std::domain_error when every ordering is relatively optimal.
double gap_ratio(const LabeledInstance &inst);

struct GapStats {
    std::vector<double> ratios;
    // Linear interpolation between order statistics.
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

// Instances with an empty complement or no finishing ordering are skipped.
GapStats gap_stats(std::span<const LabeledInstance> instances);

// Bins the per-instance maximum time. Result has edges.size() + 1 counts:
// below edges[0], [edges[i], edges[i+1]), and at or above the last edge.
std::vector<std::size_t> max_histogram(std::span<const LabeledInstance> instances, std::span<const double> edges);

// Mean of the per-matrix mean digit lengths.
Rational average_digit_length(std::span<const FeatureMatrix> matrices);

std::string report_text(std::span<const EvalReport> reports);
std::string report_csv(std::span<const EvalReport> reports);

} // namespace cadkit

#endif
