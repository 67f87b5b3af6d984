#ifndef CADKIT_PRETRAIN_HPP
#define CADKIT_PRETRAIN_HPP

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cadkit/features.hpp"
#include "cadkit/system.hpp"
#include "cadkit/tokenizer.hpp"

namespace cadkit
{

// e: exponent vectors per polynomial; f: ie11 of the input; m: exponent
// vectors of the product; p: ie11 of the projection union; r: re4; s: ie11 of
// the projection union of the squarefree product.
enum class PretrainTask { e, f, m, p, r, s };

inline constexpr std::array<PretrainTask, 6> all_pretrain_tasks{PretrainTask::e, PretrainTask::f, PretrainTask::m,
                                                                 PretrainTask::p, PretrainTask::r, PretrainTask::s};

// "task_e" ... "task_s"; parsing also accepts the bare letter.
std::string_view to_string(PretrainTask t);
PretrainTask parse_pretrain_task(std::string_view s);

enum class LabelStatus { ok, timeout, empty, error };

std::string_view to_string(LabelStatus s);
LabelStatus parse_label_status(std::string_view s);

struct PretrainLabel {
    std::string id;
    PretrainTask task = PretrainTask::f;
    PolynomialSystem system;
    LabelStatus status = LabelStatus::ok;
    // Exactly one of these is set when status is ok: listing for e and m.
    std::optional<FeatureMatrix> matrix;
    std::optional<ExponentListing> listing;
    std::string message;
};

struct PretrainOptions {
    // Per-instance budget for the projection-based tasks p, r and s.
    std::chrono::duration<double> budget{3.0};
};

PretrainLabel pretrain_label(std::string id, const PolynomialSystem &sys, PretrainTask task,
                             const PretrainOptions &options = {});

// Output sequence of a label; throws std::logic_error unless status is ok.
TokenSequence label_tokens(const PretrainLabel &label);

struct ScreenOptions {
    std::size_t max_product_length = 512;
};

struct ScreenResult {
    std::vector<PretrainLabel> kept;
    std::size_t too_long = 0;
    std::size_t empty = 0;
    std::size_t timed_out = 0;
    std::size_t failed = 0;
};

// Drops task_m labels longer than the limit, empty projection sets (p, s),
// budget overruns and failed computations.
ScreenResult screen(std::vector<PretrainLabel> labels, const ScreenOptions &options = {});

} // namespace cadkit

#endif
