#include "cadkit/pretrain.hpp"

#include <stdexcept>

#include "cadkit/deadline.hpp"
#include "cadkit/projection.hpp"

namespace cadkit
{

std::string_view to_string(PretrainTask t)
{
    switch (t) {
        case PretrainTask::e:
            return "task_e";
        case PretrainTask::f:
            return "task_f";
        case PretrainTask::m:
            return "task_m";
        case PretrainTask::p:
            return "task_p";
        case PretrainTask::r:
            return "task_r";
        case PretrainTask::s:
            return "task_s";
    }
    return "?";
}

PretrainTask parse_pretrain_task(std::string_view s)
{
    for (const auto t : all_pretrain_tasks) {
        const auto name = to_string(t);
        if (s == name || s == name.substr(5)) {
            return t;
        }
    }
    throw std::invalid_argument("unknown pre-training task '" + std::string(s) + "'");
}

std::string_view to_string(LabelStatus s)
{
    switch (s) {
        case LabelStatus::ok:
            return "ok";
        case LabelStatus::timeout:
            return "timeout";
        case LabelStatus::empty:
            return "empty";
        case LabelStatus::error:
            return "error";
    }
    return "?";
}

LabelStatus parse_label_status(std::string_view s)
{
    for (auto x : {LabelStatus::ok, LabelStatus::timeout, LabelStatus::empty, LabelStatus::error}) {
        if (to_string(x) == s) {
            return x;
        }
    }
    throw std::invalid_argument("unknown label status '" + std::string(s) + "'");
}

namespace
{

void projected(PretrainLabel &out, std::span<const Polynomial> polys, std::size_t n, const Deadline &deadline)
{
    const auto pf = projection_union(polys, deadline);
    if (pf.empty()) {
        out.status = LabelStatus::empty;
        out.message = "empty projection factor set";
        return;
    }
    out.matrix = ie11(pf, n);
}

} // namespace

PretrainLabel pretrain_label(std::string id, const PolynomialSystem &sys, PretrainTask task,
                             const PretrainOptions &options)
{
    PretrainLabel out{std::move(id), task, sys, LabelStatus::ok, std::nullopt, std::nullopt, {}};
    const auto deadline = Deadline::after(options.budget);
    try {
        switch (task) {
            case PretrainTask::e:
                out.listing = feature_e(sys);
                break;
            case PretrainTask::f:
                out.matrix = ie11(sys);
                break;
            case PretrainTask::m:
                out.listing = feature_m(sys);
                break;
            case PretrainTask::p: {
                const auto polys = sys.polynomials();
                projected(out, polys, sys.nvars(), deadline);
                break;
            }
            case PretrainTask::r:
                out.matrix = re4(sys, deadline);
                break;
            case PretrainTask::s: {
                const std::vector<Polynomial> p{squarefree_product(sys, deadline)};
                projected(out, p, sys.nvars(), deadline);
                break;
            }
        }
    } catch (const budget_exceeded &) {
        out.status = LabelStatus::timeout;
        out.matrix.reset();
        out.message = "budget exceeded";
    } catch (const std::exception &e) {
        out.status = LabelStatus::error;
        out.matrix.reset();
        out.listing.reset();
        out.message = e.what();
    }
    return out;
}

TokenSequence label_tokens(const PretrainLabel &label)
{
    if (label.status != LabelStatus::ok) {
        throw std::logic_error("label " + label.id + " has no value (" + std::string(to_string(label.status)) + ")");
    }
    if (label.listing) {
        return encode_exponents(*label.listing);
    }
    return encode_features(*label.matrix);
}

ScreenResult screen(std::vector<PretrainLabel> labels, const ScreenOptions &options)
{
    ScreenResult r;
    for (auto &l : labels) {
        switch (l.status) {
            case LabelStatus::timeout:
                ++r.timed_out;
                continue;
            case LabelStatus::empty:
                ++r.empty;
                continue;
            case LabelStatus::error:
                ++r.failed;
                continue;
            case LabelStatus::ok:
                break;
        }
        if (l.task == PretrainTask::m && label_tokens(l).size() > options.max_product_length) {
            ++r.too_long;
            continue;
        }
        r.kept.push_back(std::move(l));
    }
    return r;
}

} // namespace cadkit
