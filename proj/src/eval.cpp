#include "cadkit/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cadkit
{

EvalReport evaluate(const std::map<std::string, VariableOrdering> &predictions,
                    std::span<const LabeledInstance> instances, std::string name)
{
    std::map<std::string, const LabeledInstance *> by_id;
    for (const auto &inst : instances) {
        by_id.emplace(inst.id, &inst);
    }
    EvalReport report;
    report.name = std::move(name);
    double sum_pred = 0.0;
    double sum_star = 0.0;
    double sum_ratio = 0.0;
    std::size_t abs_hits = 0;
    std::size_t rel_hits = 0;
    for (const auto &[id, predicted] : predictions) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw std::invalid_argument("prediction for unknown instance " + id);
        }
        const auto &inst = *it->second;
        if (predicted.size() != inst.system.nvars()) {
            throw std::invalid_argument("prediction for " + id + " is not a permutation of its variables");
        }
        if (!inst.usable()) {
            continue;
        }
        const auto rec = std::find_if(inst.timings.begin(), inst.timings.end(),
                                      [&](const TimingRecord &r) { return r.ordering == predicted; });
        if (rec == inst.timings.end()) {
            throw std::invalid_argument("instance " + id + " has no timing for " + to_string(predicted));
        }
        InstanceResult r{id, predicted};
        r.t_pred = charged_seconds(*rec, inst.time_limit);
        r.t_star = *inst.t_star;
        r.ratio = r.t_pred / r.t_star;
        r.timed_out = rec->timed_out;
        r.abs_hit = std::binary_search(inst.abs_optimal.begin(), inst.abs_optimal.end(), predicted);
        r.rel_hit = std::binary_search(inst.rel_optimal.begin(), inst.rel_optimal.end(), predicted);
        abs_hits += r.abs_hit;
        rel_hits += r.rel_hit;
        sum_pred += r.t_pred;
        sum_star += r.t_star;
        sum_ratio += r.ratio;
        report.per_instance.push_back(std::move(r));
    }
    report.count = report.per_instance.size();
    if (report.count > 0) {
        const double n = static_cast<double>(report.count);
        report.abs_acc = 100.0 * static_cast<double>(abs_hits) / n;
        report.rel_acc = 100.0 * static_cast<double>(rel_hits) / n;
        report.time_ratio_mean = sum_ratio / n;
        report.time_ratio_total = sum_pred / sum_star;
    }
    return report;
}

double gap_ratio(const LabeledInstance &inst)
{
    if (!inst.t_star) {
        throw std::domain_error("instance " + inst.id + " has no finishing ordering");
    }
    double inside = 0.0;
    double outside = std::numeric_limits<double>::infinity();
    for (const auto &r : inst.timings) {
        const double t = charged_seconds(r, inst.time_limit);
        if (std::binary_search(inst.rel_optimal.begin(), inst.rel_optimal.end(), r.ordering)) {
            inside = std::max(inside, t);
        } else {
            outside = std::min(outside, t);
        }
    }
    if (outside == std::numeric_limits<double>::infinity()) {
        throw std::domain_error("every ordering of instance " + inst.id + " is relatively optimal");
    }
    return inside / outside;
}

namespace
{

double quantile(const std::vector<double> &sorted, double q)
{
    if (sorted.empty()) {
        return 0.0;
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

GapStats gap_stats(std::span<const LabeledInstance> instances)
{
    GapStats s;
    for (const auto &inst : instances) {
        if (!inst.t_star || inst.rel_optimal.size() == inst.timings.size()) {
            continue;
        }
        s.ratios.push_back(gap_ratio(inst));
    }
    auto sorted = s.ratios;
    std::sort(sorted.begin(), sorted.end());
    s.q1 = quantile(sorted, 0.25);
    s.median = quantile(sorted, 0.5);
    s.q3 = quantile(sorted, 0.75);
    return s;
}

std::vector<std::size_t> max_histogram(std::span<const LabeledInstance> instances, std::span<const double> edges)
{
    if (!std::is_sorted(edges.begin(), edges.end())) {
        throw std::invalid_argument("histogram edges must be ascending");
    }
    std::vector<std::size_t> counts(edges.size() + 1, 0);
    for (const auto &inst : instances) {
        double mx = 0.0;
        for (const auto &r : inst.timings) {
            mx = std::max(mx, charged_seconds(r, inst.time_limit));
        }
        const auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), mx) - edges.begin());
        ++counts[bin];
    }
    return counts;
}

Rational average_digit_length(std::span<const FeatureMatrix> matrices)
{
    if (matrices.empty()) {
        throw std::invalid_argument("average digit length of no matrices");
    }
    Rational sum = 0;
    for (const auto &m : matrices) {
        sum += mean_feature_digit_length(m);
    }
    sum /= Rational(static_cast<unsigned long>(matrices.size()));
    return sum;
}

namespace
{

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

std::string report_text(std::span<const EvalReport> reports)
{
    std::size_t width = 9;
    for (const auto &r : reports) {
        width = std::max(width, r.name.size());
    }
    std::ostringstream os;
    auto pad = [](std::string s, std::size_t w, bool left) {
        return left ? s + std::string(w > s.size() ? w - s.size() : 0, ' ')
                    : std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
    };
    os << pad("Heuristic", width, true) << "  " << pad("N", 7, false) << "  " << pad("Abs_Acc", 8, false) << "  "
       << pad("Rel_Acc", 8, false) << "  " << pad("Time_Ratio", 10, false) << "  " << pad("Total_Ratio", 11, false)
       << '\n';
    for (const auto &r : reports) {
        os << pad(r.name, width, true) << "  " << pad(std::to_string(r.count), 7, false) << "  "
           << pad(fixed(r.abs_acc, 2), 8, false) << "  " << pad(fixed(r.rel_acc, 2), 8, false) << "  "
           << pad(fixed(r.time_ratio_mean, 3), 10, false) << "  " << pad(fixed(r.time_ratio_total, 3), 11, false)
           << '\n';
    }
    return os.str();
}

std::string report_csv(std::span<const EvalReport> reports)
{
    std::ostringstream os;
    os << "heuristic,count,abs_acc,rel_acc,time_ratio_mean,time_ratio_total\n";
    for (const auto &r : reports) {
        os << r.name << ',' << r.count << ',' << fixed(r.abs_acc, 4) << ',' << fixed(r.rel_acc, 4) << ','
           << fixed(r.time_ratio_mean, 6) << ',' << fixed(r.time_ratio_total, 6) << '\n';
    }
    return os.str();
}

} // namespace cadkit
