#include "cadkit/io.hpp"

#include <algorithm>
#include <string_view>

namespace cadkit
{

namespace
{

const Json &field(const Json &j, const char *key)
{
    if (!j.is_object()) {
        throw data_error("expected a JSON object");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw data_error(std::string("missing field '") + key + "'");
    }
    return *it;
}

// Runs a decoder, folding parse and type errors into data_error.
template <typename F>
auto decoding(const char *what, F &&f) -> decltype(f())
{
    try {
        return f();
    } catch (const data_error &e) {
        throw data_error(std::string(what) + ": " + e.what());
    } catch (const std::exception &e) {
        throw data_error(std::string(what) + ": " + e.what());
    }
}

Json orderings_to_json(const std::vector<VariableOrdering> &os)
{
    Json a = Json::array();
    for (const auto &o : os) {
        a.push_back(ordering_to_json(o));
    }
    return a;
}

std::vector<VariableOrdering> orderings_from_json(const Json &j, std::size_t nvars)
{
    std::vector<VariableOrdering> out;
    for (const auto &o : j) {
        out.push_back(ordering_from_json(o, nvars));
    }
    return out;
}

} // namespace

std::vector<Json> read_jsonl(std::istream &in)
{
    std::vector<Json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(Json::parse(line));
        } catch (const Json::parse_error &e) {
            throw data_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_jsonl(std::ostream &out, const Json &record)
{
    out << record.dump() << '\n';
}

bool is_header(const Json &record)
{
    return record.is_object() && record.contains("header");
}

Json system_to_json(const PolynomialSystem &sys, const std::optional<std::string> &id)
{
    Json j = Json::object();
    if (id) {
        j["id"] = *id;
    }
    j["nvars"] = sys.nvars();
    Json cs = Json::array();
    for (const auto &c : sys.constraints()) {
        cs.push_back(Json{{"poly", to_string(c.poly)}, {"relation", std::string(to_string(c.relation))}});
    }
    j["constraints"] = std::move(cs);
    return j;
}

PolynomialSystem system_from_json(const Json &j)
{
    return decoding("system", [&] {
        const auto nvars = field(j, "nvars").get<std::size_t>();
        std::vector<Constraint> cs;
        for (const auto &c : field(j, "constraints")) {
            const auto rel = c.contains("relation") ? parse_relation(c.at("relation").get<std::string>())
                                                    : Relation::none;
            cs.push_back({parse_polynomial(field(c, "poly").get<std::string>(), nvars), rel});
        }
        return PolynomialSystem(nvars, std::move(cs));
    });
}

Json ordering_to_json(const VariableOrdering &o)
{
    return Json(variable_names(o));
}

VariableOrdering ordering_from_json(const Json &j, std::size_t nvars)
{
    return decoding("ordering", [&] {
        if (j.is_string()) {
            return parse_ordering(j.get<std::string>(), nvars);
        }
        std::string text;
        for (const auto &name : j) {
            text += name.get<std::string>() + ' ';
        }
        return parse_ordering(text, nvars);
    });
}

Json labeled_to_json(const LabeledInstance &inst)
{
    Json j = Json::object();
    j["id"] = inst.id;
    j["system"] = system_to_json(inst.system);
    j["time_limit"] = inst.time_limit;
    Json ts = Json::array();
    for (const auto &r : inst.timings) {
        Json t{{"order", ordering_to_json(r.ordering)}, {"seconds", r.seconds}, {"timed_out", r.timed_out}};
        if (r.error) {
            t["error"] = *r.error;
        }
        ts.push_back(std::move(t));
    }
    j["timings"] = std::move(ts);
    j["t_star"] = inst.t_star ? Json(*inst.t_star) : Json(nullptr);
    j["abs_optimal"] = orderings_to_json(inst.abs_optimal);
    j["rel_optimal"] = orderings_to_json(inst.rel_optimal);
    j["split"] = inst.split ? Json(std::string(to_string(*inst.split))) : Json(nullptr);
    return j;
}

LabeledInstance labeled_from_json(const Json &j)
{
    return decoding("labeled instance", [&] {
        LabeledInstance inst{field(j, "id").get<std::string>(), system_from_json(field(j, "system")),
                             j.value("time_limit", default_time_limit), {}, std::nullopt, {}, {}, std::nullopt};
        const auto n = inst.system.nvars();
        for (const auto &t : field(j, "timings")) {
            TimingRecord r{ordering_from_json(field(t, "order"), n), field(t, "seconds").get<double>(),
                           field(t, "timed_out").get<bool>(), std::nullopt};
            if (t.contains("error")) {
                r.error = t.at("error").get<std::string>();
            }
            inst.timings.push_back(std::move(r));
        }
        if (const auto &ts = field(j, "t_star"); !ts.is_null()) {
            inst.t_star = ts.get<double>();
        }
        inst.abs_optimal = orderings_from_json(field(j, "abs_optimal"), n);
        inst.rel_optimal = orderings_from_json(field(j, "rel_optimal"), n);
        std::sort(inst.abs_optimal.begin(), inst.abs_optimal.end());
        std::sort(inst.rel_optimal.begin(), inst.rel_optimal.end());
        if (j.contains("split") && !j.at("split").is_null()) {
            inst.split = parse_split(j.at("split").get<std::string>());
        }
        return inst;
    });
}

Json matrix_to_json(const FeatureMatrix &m)
{
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows.push_back(m.row(r));
    }
    return Json{{"rows", m.labels()}, {"values", std::move(rows)}};
}

FeatureMatrix matrix_from_json(const Json &j)
{
    return decoding("feature matrix", [&] {
        auto labels = field(j, "rows").get<std::vector<std::string>>();
        const auto rows = field(j, "values").get<std::vector<std::vector<std::uint64_t>>>();
        if (rows.size() != labels.size()) {
            throw data_error("row label count does not match the values");
        }
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        std::vector<std::uint64_t> flat;
        for (const auto &r : rows) {
            if (r.size() != cols) {
                throw data_error("ragged feature matrix");
            }
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return FeatureMatrix(std::move(labels), cols, std::move(flat));
    });
}

Json listing_to_json(const ExponentListing &l)
{
    return Json(l);
}

ExponentListing listing_from_json(const Json &j)
{
    return decoding("exponent listing", [&] { return j.get<ExponentListing>(); });
}

Json pretrain_to_json(const PretrainLabel &label)
{
    Json j = Json::object();
    j["id"] = label.id;
    j["task"] = std::string(to_string(label.task));
    j["status"] = std::string(to_string(label.status));
    j["system"] = system_to_json(label.system);
    if (label.matrix) {
        j["label"] = matrix_to_json(*label.matrix);
    } else if (label.listing) {
        j["label"] = listing_to_json(*label.listing);
    } else {
        j["label"] = nullptr;
    }
    if (label.status == LabelStatus::ok) {
        j["output_length"] = label_tokens(label).size();
    }
    if (!label.message.empty()) {
        j["message"] = label.message;
    }
    return j;
}

PretrainLabel pretrain_from_json(const Json &j)
{
    return decoding("pre-training label", [&] {
        PretrainLabel l{field(j, "id").get<std::string>(), parse_pretrain_task(field(j, "task").get<std::string>()),
                        system_from_json(field(j, "system")), parse_label_status(field(j, "status").get<std::string>()),
                        std::nullopt, std::nullopt, j.value("message", std::string{})};
        const auto &value = field(j, "label");
        if (l.status == LabelStatus::ok) {
            if (l.task == PretrainTask::e || l.task == PretrainTask::m) {
                l.listing = listing_from_json(value);
            } else {
                l.matrix = matrix_from_json(value);
            }
        }
        return l;
    });
}

Json spec_to_json(const GeneratorSpec &spec)
{
    return Json{{"name", spec.name},
                {"nvars", spec.nvars},
                {"nconstraints", spec.nconstraints},
                {"degree", {spec.degree.lo, spec.degree.hi}},
                {"exponent_cap", spec.exponent_cap},
                {"term_count", {spec.term_count.lo, spec.term_count.hi}},
                {"coefficient_bound", spec.coefficient_bound},
                {"constant_terms", spec.constant_terms},
                {"relations", std::string(to_string(spec.relations))},
                {"every_variable", spec.every_variable},
                {"seed", spec.seed}};
}

Json report_to_json(const EvalReport &r, bool per_instance)
{
    Json j{{"name", r.name},
           {"count", r.count},
           {"abs_acc", r.abs_acc},
           {"rel_acc", r.rel_acc},
           {"time_ratio_mean", r.time_ratio_mean},
           {"time_ratio_total", r.time_ratio_total}};
    if (per_instance) {
        Json rows = Json::array();
        for (const auto &x : r.per_instance) {
            rows.push_back(Json{{"id", x.id},
                                {"predicted", ordering_to_json(x.predicted)},
                                {"t_pred", x.t_pred},
                                {"t_star", x.t_star},
                                {"ratio", x.ratio},
                                {"timed_out", x.timed_out},
                                {"abs_hit", x.abs_hit},
                                {"rel_hit", x.rel_hit}});
        }
        j["per_instance"] = std::move(rows);
    }
    return j;
}

Json corpus_to_json(const CorpusRecord &r)
{
    Json j{{"id", r.id},
           {"input_tokens", join_tokens(r.input)},
           {"output_tokens", join_tokens(r.output)},
           {"task", r.task}};
    if (r.split) {
        j["split"] = std::string(to_string(*r.split));
    }
    return j;
}

CorpusRecord corpus_from_json(const Json &j)
{
    return decoding("corpus record", [&] {
        const auto task = field(j, "task").get<std::string>();
        const auto out_kind = task == "task_c" ? SequenceKind::ordering : SequenceKind::features;
        CorpusRecord r{field(j, "id").get<std::string>(), task,
                       split_tokens(field(j, "input_tokens").get<std::string>(), SequenceKind::system),
                       split_tokens(field(j, "output_tokens").get<std::string>(), out_kind), std::nullopt};
        if (j.contains("split") && !j.at("split").is_null()) {
            r.split = parse_split(j.at("split").get<std::string>());
        }
        return r;
    });
}

Json vocabulary_to_json(const Vocabulary &v)
{
    return Json(std::vector<std::string>(v.tokens().begin(), v.tokens().end()));
}

Vocabulary vocabulary_from_json(const Json &j)
{
    return decoding("vocabulary", [&] { return Vocabulary::from_tokens(j.get<std::vector<std::string>>()); });
}

} // namespace cadkit
