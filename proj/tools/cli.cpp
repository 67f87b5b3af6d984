#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cadkit/datagen.hpp"
#include "cadkit/eval.hpp"
#include "cadkit/features.hpp"
#include "cadkit/heuristics.hpp"
#include "cadkit/io.hpp"
#include "cadkit/labeling.hpp"
#include "cadkit/pretrain.hpp"
#include "cadkit/projection.hpp"
#include "cadkit/tokenizer.hpp"

namespace cadkit::cli
{

namespace
{

struct Globals {
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    // Empty means the subcommand's natural format.
    std::string format;
    std::string in = "-";
    std::string out;
};

class Input
{
public:
    Input(const std::string &path, std::istream &fallback)
    {
        if (path.empty() || path == "-") {
            m_stream = &fallback;
            return;
        }
        m_file.open(path);
        if (!m_file) {
            throw data_error("cannot open " + path);
        }
        m_stream = &m_file;
    }
    std::istream &stream() { return *m_stream; }

private:
    std::ifstream m_file;
    std::istream *m_stream = nullptr;
};

class Output
{
public:
    Output(const std::string &path, std::ostream &fallback)
    {
        if (path.empty() || path == "-") {
            m_stream = &fallback;
            return;
        }
        m_file.open(path, std::ios::binary);
        if (!m_file) {
            throw data_error("cannot write " + path);
        }
        m_stream = &m_file;
    }
    std::ostream &stream() { return *m_stream; }

private:
    std::ofstream m_file;
    std::ostream *m_stream = nullptr;
};

std::vector<Json> read_records(const std::string &path, std::istream &fallback)
{
    Input input(path, fallback);
    auto all = read_jsonl(input.stream());
    std::erase_if(all, is_header);
    return all;
}

std::size_t default_workers()
{
    if (const char *env = std::getenv("CADKIT_WORKERS")) {
        try {
            return std::max<std::size_t>(1, std::stoul(env));
        } catch (const std::exception &) {
            throw data_error("CADKIT_WORKERS must be a positive integer");
        }
    }
    return 1;
}

// Applies f to 0..n-1 on up to `workers` threads; results keep input order.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, std::size_t workers, F &&f)
{
    std::vector<std::optional<T>> slots(n);
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(workers);
    auto body = [&](std::size_t w) {
        try {
            for (std::size_t i = w; i < n; i += workers) {
                slots[i] = f(i);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(body, w);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

std::string record_id(const Json &j, std::size_t index)
{
    if (j.contains("id")) {
        const auto &id = j.at("id");
        return id.is_string() ? id.get<std::string>() : id.dump();
    }
    return std::to_string(index);
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// gen ------------------------------------------------------------------------

struct GenArgs {
    std::string name;
    std::size_t count = 100;
};

int cmd_gen(const Globals &g, const GenArgs &a, std::ostream &out)
{
    GeneratorSpec spec = parse_dataset_name(a.name);
    spec.seed = g.seed;
    const auto systems = generate(spec, a.count, g.workers);
    Output o(g.out, out);
    write_jsonl(o.stream(), Json{{"header", {{"kind", "systems"}, {"count", a.count}, {"spec", spec_to_json(spec)}}}});
    for (std::size_t i = 0; i < systems.size(); ++i) {
        write_jsonl(o.stream(), system_to_json(systems[i], a.name + "-" + std::to_string(i)));
    }
    return exit_ok;
}

// label ----------------------------------------------------------------------

struct LabelArgs {
    std::string backend = "surrogate";
    std::string command;
    double time_limit = default_time_limit;
    double tau = default_tau;
    double unit = 1e-4;
    std::size_t max_vars = 6;
};

int cmd_label(const Globals &g, const LabelArgs &a, std::istream &in, std::ostream &out, std::ostream &err)
{
    std::unique_ptr<CadBackend> backend;
    if (a.backend == "surrogate") {
        backend = std::make_unique<SurrogateBackend>(a.unit);
    } else if (a.backend == "external") {
        std::string cmd = a.command;
        if (cmd.empty()) {
            if (const char *env = std::getenv("CADKIT_BACKEND_CMD")) {
                cmd = env;
            }
        }
        if (cmd.empty()) {
            throw backend_error("external backend needs --cmd or CADKIT_BACKEND_CMD");
        }
        backend = std::make_unique<ExternalBackend>(cmd);
    } else {
        throw CLI::ValidationError("--backend", "must be surrogate or external");
    }

    const auto records = read_records(g.in, in);
    LabelOptions options{a.time_limit, a.tau, a.max_vars, g.workers};
    Output o(g.out, out);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto id = record_id(records[i], i);
        const auto sys = system_from_json(records[i]);
        const auto inst = label(id, sys, *backend, options);
        const auto bad = std::find_if(inst.timings.begin(), inst.timings.end(),
                                      [](const TimingRecord &r) { return r.error.has_value(); });
        if (bad != inst.timings.end()) {
            ++failures;
            err << "label: " << id << ": backend failed on " << to_string(bad->ordering) << ": " << *bad->error
                << '\n';
            continue;
        }
        if (!inst.t_star) {
            err << "label: " << id << ": every ordering timed out; instance is unusable\n";
        }
        write_jsonl(o.stream(), labeled_to_json(inst));
    }
    return failures > 0 ? exit_backend : exit_ok;
}

// pretrain-labels ------------------------------------------------------------

struct PretrainArgs {
    std::string tasks = "e,f,m,p,r,s";
    double budget = 3.0;
};

int cmd_pretrain(const Globals &g, const PretrainArgs &a, std::istream &in, std::ostream &out)
{
    std::vector<PretrainTask> tasks;
    for (const auto &t : split_list(a.tasks)) {
        tasks.push_back(parse_pretrain_task(t));
    }
    const auto records = read_records(g.in, in);
    const PretrainOptions options{std::chrono::duration<double>(a.budget)};
    const auto labels = parallel_map<std::vector<Json>>(records.size(), g.workers, [&](std::size_t i) {
        const auto id = record_id(records[i], i);
        const auto sys = system_from_json(records[i]);
        std::vector<Json> rows;
        for (const auto t : tasks) {
            rows.push_back(pretrain_to_json(pretrain_label(id, sys, t, options)));
        }
        return rows;
    });
    Output o(g.out, out);
    for (const auto &rows : labels) {
        for (const auto &r : rows) {
            write_jsonl(o.stream(), r);
        }
    }
    return exit_ok;
}

// tokenize -------------------------------------------------------------------

struct TokenizeArgs {
    std::string scheme = "A";
    std::string vocab;
    bool no_screen = false;
    std::size_t max_length = 512;
};

std::optional<Split> split_of(const Json &j)
{
    if (j.contains("split") && !j.at("split").is_null()) {
        return parse_split(j.at("split").get<std::string>());
    }
    return std::nullopt;
}

int cmd_tokenize(const Globals &g, const TokenizeArgs &a, std::istream &in, std::ostream &out, std::ostream &err)
{
    const Scheme scheme = parse_scheme(a.scheme);
    const auto records = read_records(g.in, in);
    std::vector<CorpusRecord> corpus;
    std::size_t nvars = 1;

    std::vector<PretrainLabel> labels;
    std::vector<std::optional<Split>> label_splits;
    std::vector<LabeledInstance> instances;
    for (const auto &r : records) {
        if (r.contains("timings")) {
            instances.push_back(labeled_from_json(r));
        } else if (r.contains("task") && r.contains("status")) {
            labels.push_back(pretrain_from_json(r));
            label_splits.push_back(split_of(r));
        } else {
            throw data_error("tokenize expects labeled instances or pre-training labels");
        }
    }

    if (!labels.empty()) {
        std::map<std::string, std::optional<Split>> split_by_key;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            split_by_key[labels[i].id + "\n" + std::string(to_string(labels[i].task))] = label_splits[i];
        }
        std::vector<PretrainLabel> kept;
        if (a.no_screen) {
            for (auto &l : labels) {
                if (l.status == LabelStatus::ok) {
                    kept.push_back(std::move(l));
                }
            }
        } else {
            auto result = screen(std::move(labels), ScreenOptions{a.max_length});
            err << "screen: kept " << result.kept.size() << ", dropped " << result.too_long << " too long, "
                << result.empty << " empty, " << result.timed_out << " timed out, " << result.failed << " failed\n";
            kept = std::move(result.kept);
        }
        for (const auto &l : kept) {
            nvars = std::max(nvars, l.system.nvars());
            const auto key = l.id + "\n" + std::string(to_string(l.task));
            corpus.push_back({l.id, std::string(to_string(l.task)), encode_system(l.system, scheme), label_tokens(l),
                              split_by_key[key]});
        }
    }

    if (!instances.empty()) {
        std::vector<LabeledInstance> expandable;
        for (auto &inst : instances) {
            nvars = std::max(nvars, inst.system.nvars());
            if (!inst.split || *inst.split == Split::train || *inst.split == Split::valid) {
                expandable.push_back(std::move(inst));
            } else if (inst.abs_optimal.empty()) {
                err << "tokenize: " << inst.id << ": no optimal ordering; dropped\n";
            } else {
                corpus.push_back({inst.id, "task_c", encode_system(inst.system, scheme),
                                  encode_ordering(inst.abs_optimal.front()), inst.split});
            }
        }
        const auto expansion = expand_multilabel(expandable);
        for (const auto &id : expansion.dropped) {
            err << "tokenize: " << id << ": no optimal ordering; dropped\n";
        }
        std::map<std::string, std::optional<Split>> split_by_id;
        for (const auto &inst : expandable) {
            split_by_id[inst.id] = inst.split;
        }
        for (const auto &s : expansion.samples) {
            corpus.push_back(
                {s.id, "task_c", encode_system(*s.system, scheme), encode_ordering(s.ordering), split_by_id[s.id]});
        }
    }

    Output o(g.out, out);
    for (const auto &c : corpus) {
        write_jsonl(o.stream(), corpus_to_json(c));
    }
    if (!a.vocab.empty()) {
        Output v(a.vocab, out);
        v.stream() << vocabulary_to_json(Vocabulary(nvars)).dump() << '\n';
    }
    return exit_ok;
}

// split ----------------------------------------------------------------------

struct SplitArgs {
    std::string out_dir;
};

int cmd_split(const Globals &g, const SplitArgs &a, std::istream &in, std::ostream &out)
{
    auto records = read_records(g.in, in);
    if (records.empty()) {
        throw data_error("split: no records");
    }
    const auto assignment = split(records.size(), g.seed);
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i]["split"] = std::string(to_string(assignment[i]));
    }
    if (a.out_dir.empty()) {
        Output o(g.out, out);
        for (const auto &r : records) {
            write_jsonl(o.stream(), r);
        }
        return exit_ok;
    }
    std::filesystem::create_directories(a.out_dir);
    for (auto s : {Split::train, Split::valid, Split::test_valid, Split::test}) {
        std::ofstream f(std::filesystem::path(a.out_dir) / (std::string(to_string(s)) + ".jsonl"), std::ios::binary);
        if (!f) {
            throw data_error("cannot write into " + a.out_dir);
        }
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (assignment[i] == s) {
                write_jsonl(f, records[i]);
            }
        }
    }
    return exit_ok;
}

// suggest / features / inspect ------------------------------------------------

struct SystemSource {
    std::string text;
    std::size_t nvars = 0;
};

std::vector<std::pair<std::string, PolynomialSystem>> load_systems(const Globals &g, const SystemSource &src,
                                                                   std::istream &in)
{
    std::vector<std::pair<std::string, PolynomialSystem>> out;
    if (!src.text.empty()) {
        if (src.nvars == 0) {
            throw CLI::ValidationError("--nvars", "is required with --system");
        }
        out.emplace_back("system", parse_system(src.text, src.nvars));
        return out;
    }
    const auto records = read_records(g.in, in);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        out.emplace_back(record_id(r, i), system_from_json(r.contains("system") ? r.at("system") : r));
    }
    return out;
}

struct SuggestArgs {
    SystemSource source;
    std::string heuristic = "gmods";
    double budget = 3.0;
};

int cmd_suggest(const Globals &g, const SuggestArgs &a, std::istream &in, std::ostream &out, std::ostream &err)
{
    std::vector<Heuristic> hs;
    if (a.heuristic == "all") {
        hs.assign(all_heuristics.begin(), all_heuristics.end());
    } else {
        for (const auto &h : split_list(a.heuristic)) {
            hs.push_back(parse_heuristic(h));
        }
    }
    const auto systems = load_systems(g, a.source, in);
    const HeuristicOptions options{std::chrono::duration<double>(a.budget)};
    using Row = std::vector<std::optional<VariableOrdering>>;
    const auto rows = parallel_map<Row>(systems.size(), g.workers, [&](std::size_t i) {
        Row row;
        for (const auto h : hs) {
            try {
                row.push_back(suggest(h, systems[i].second, options));
            } catch (const budget_exceeded &) {
                row.push_back(std::nullopt);
            }
        }
        return row;
    });
    Output o(g.out, out);
    const bool plain = g.format == "text" || (g.format.empty() && !a.source.text.empty());
    for (std::size_t i = 0; i < systems.size(); ++i) {
        for (std::size_t k = 0; k < hs.size(); ++k) {
            const auto name = std::string(to_string(hs[k]));
            if (!rows[i][k]) {
                err << "suggest: " << systems[i].first << ": " << name << " exceeded its budget\n";
                continue;
            }
            if (plain) {
                o.stream() << (hs.size() > 1 ? name + " " : std::string()) << to_string(*rows[i][k]) << '\n';
                continue;
            }
            Json j{{"id", systems[i].first}};
            if (hs.size() > 1) {
                j["heuristic"] = name;
            }
            j["ordering"] = ordering_to_json(*rows[i][k]);
            write_jsonl(o.stream(), j);
        }
    }
    return exit_ok;
}

struct FeaturesArgs {
    SystemSource source;
    std::string kind = "f";
    double budget = 3.0;
};

Json feature_value(const std::string &kind, const PolynomialSystem &sys, const Deadline &deadline)
{
    if (kind == "e") {
        return listing_to_json(feature_e(sys));
    }
    if (kind == "m") {
        return listing_to_json(feature_m(sys));
    }
    if (kind == "f" || kind == "ie11") {
        return matrix_to_json(ie11(sys));
    }
    if (kind == "p") {
        return matrix_to_json(feature_p(sys, deadline));
    }
    if (kind == "r" || kind == "re4") {
        return matrix_to_json(re4(sys, deadline));
    }
    if (kind == "s") {
        return matrix_to_json(feature_s(sys, deadline));
    }
    if (kind == "max_l") {
        const auto polys = sys.polynomials();
        Json a = Json::array();
        for (Var v = 0; v < sys.nvars(); ++v) {
            a.push_back(max_l(polys, v));
        }
        return a;
    }
    throw CLI::ValidationError("--kind", "must be one of e, f, m, p, r, s, ie11, re4, max_l");
}

std::string feature_text(const std::string &kind, const Json &value)
{
    if (value.is_object()) {
        return to_string(matrix_from_json(value));
    }
    if (kind == "max_l") {
        return value.dump();
    }
    std::ostringstream os;
    os << '{';
    bool first_group = true;
    for (const auto &group : value) {
        os << (first_group ? "[" : ", [");
        first_group = false;
        bool first = true;
        for (const auto &e : group) {
            os << (first ? "(" : "; (");
            first = false;
            for (std::size_t i = 0; i < e.size(); ++i) {
                os << (i ? " " : "") << e[i].get<std::uint64_t>();
            }
            os << ')';
        }
        os << ']';
    }
    os << '}';
    return os.str();
}

int cmd_features(const Globals &g, const FeaturesArgs &a, std::istream &in, std::ostream &out, std::ostream &err)
{
    const auto systems = load_systems(g, a.source, in);
    const auto budget = std::chrono::duration<double>(a.budget);
    using Row = std::optional<Json>;
    const auto values = parallel_map<Row>(systems.size(), g.workers, [&](std::size_t i) -> Row {
        try {
            return feature_value(a.kind, systems[i].second, Deadline::after(budget));
        } catch (const budget_exceeded &) {
            return std::nullopt;
        }
    });
    Output o(g.out, out);
    for (std::size_t i = 0; i < systems.size(); ++i) {
        if (!values[i]) {
            err << "features: " << systems[i].first << ": budget exceeded\n";
            continue;
        }
        if (g.format == "text") {
            o.stream() << feature_text(a.kind, *values[i]) << '\n';
        } else {
            write_jsonl(o.stream(), Json{{"id", systems[i].first}, {"kind", a.kind}, {"value", *values[i]}});
        }
    }
    return exit_ok;
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
    std::string pred;
    std::string labels;
    std::string split;
    bool per_instance = false;
    std::string edges = "1,10,100,1000";
};

int cmd_eval(const Globals &g, const EvalArgs &a, std::istream &in, std::ostream &out)
{
    std::vector<LabeledInstance> instances;
    for (const auto &r : read_records(a.labels, in)) {
        auto inst = labeled_from_json(r);
        if (a.split.empty() || (inst.split && to_string(*inst.split) == a.split)) {
            instances.push_back(std::move(inst));
        }
    }
    std::map<std::string, std::size_t> nvars_of;
    for (const auto &inst : instances) {
        nvars_of[inst.id] = inst.system.nvars();
    }
    std::map<std::string, std::map<std::string, VariableOrdering>> by_heuristic;
    for (const auto &r : read_records(a.pred, in)) {
        const auto id = record_id(r, 0);
        const auto it = nvars_of.find(id);
        if (it == nvars_of.end()) {
            if (a.split.empty()) {
                throw data_error("prediction for unknown instance " + id);
            }
            continue;
        }
        const auto name = r.value("heuristic", std::string("prediction"));
        if (!r.contains("ordering")) {
            throw data_error("prediction record " + id + " lacks 'ordering'");
        }
        by_heuristic[name].insert_or_assign(id, ordering_from_json(r.at("ordering"), it->second));
    }
    std::vector<EvalReport> reports;
    for (const auto &[name, preds] : by_heuristic) {
        reports.push_back(evaluate(preds, instances, name));
    }

    Output o(g.out, out);
    if (g.format == "text" || g.format.empty()) {
        o.stream() << report_text(reports);
        return exit_ok;
    }
    if (g.format == "csv") {
        o.stream() << report_csv(reports);
        return exit_ok;
    }
    std::vector<double> edges;
    for (const auto &e : split_list(a.edges)) {
        edges.push_back(std::stod(e));
    }
    const auto gaps = gap_stats(instances);
    Json summary{{"instances", instances.size()},
                 {"gap_ratio", {{"count", gaps.ratios.size()}, {"q1", gaps.q1}, {"median", gaps.median}, {"q3", gaps.q3}}},
                 {"max_histogram", {{"edges", edges}, {"counts", max_histogram(instances, edges)}}}};
    Json rs = Json::array();
    for (const auto &r : reports) {
        rs.push_back(report_to_json(r, a.per_instance));
    }
    summary["reports"] = std::move(rs);
    o.stream() << summary.dump() << '\n';
    return exit_ok;
}

// inspect --------------------------------------------------------------------

struct InspectArgs {
    SystemSource source;
};

Json inspect_system(const PolynomialSystem &sys)
{
    Json suggestions = Json::object();
    for (const auto h : all_heuristics) {
        if (!uses_projection(h)) {
            suggestions[std::string(to_string(h))] = to_string(suggest(h, sys));
        }
    }
    return Json{{"system", to_string(sys)},
                {"nvars", sys.nvars()},
                {"constraints", sys.size()},
                {"feature_f", to_string(ie11(sys))},
                {"suggestions", std::move(suggestions)}};
}

Json inspect_records(const std::vector<Json> &records)
{
    std::map<std::string, std::size_t> kinds;
    std::map<std::string, std::size_t> splits;
    std::map<std::string, std::size_t> tasks;
    std::map<std::string, std::size_t> statuses;
    std::vector<LabeledInstance> labeled;
    std::size_t max_input = 0;
    std::size_t max_output = 0;
    for (const auto &r : records) {
        std::string kind = "unknown";
        if (r.contains("timings")) {
            kind = "labeled";
            labeled.push_back(labeled_from_json(r));
        } else if (r.contains("status")) {
            kind = "pretrain_label";
            ++statuses[r.at("task").get<std::string>() + ":" + r.at("status").get<std::string>()];
        } else if (r.contains("input_tokens")) {
            kind = "corpus";
            ++tasks[r.value("task", std::string("?"))];
            max_input = std::max(max_input, split_tokens(r.at("input_tokens").get<std::string>(), SequenceKind::system).size());
            max_output =
                std::max(max_output, split_tokens(r.at("output_tokens").get<std::string>(), SequenceKind::system).size());
        } else if (r.contains("constraints")) {
            kind = "system";
        }
        ++kinds[kind];
        if (r.contains("split") && r.at("split").is_string()) {
            ++splits[r.at("split").get<std::string>()];
        }
    }
    Json j{{"records", records.size()}, {"kinds", kinds}};
    if (!splits.empty()) {
        j["splits"] = splits;
    }
    if (!statuses.empty()) {
        j["labels"] = statuses;
    }
    if (!tasks.empty()) {
        j["tasks"] = tasks;
        j["max_input_length"] = max_input;
        j["max_output_length"] = max_output;
    }
    if (!labeled.empty()) {
        std::size_t usable = 0;
        std::size_t abs_total = 0;
        std::size_t rel_total = 0;
        for (const auto &inst : labeled) {
            usable += inst.usable();
            abs_total += inst.abs_optimal.size();
            rel_total += inst.rel_optimal.size();
        }
        const auto gaps = gap_stats(labeled);
        j["usable"] = usable;
        j["mean_abs_optimal"] = static_cast<double>(abs_total) / static_cast<double>(labeled.size());
        j["mean_rel_optimal"] = static_cast<double>(rel_total) / static_cast<double>(labeled.size());
        j["gap_ratio"] = {{"count", gaps.ratios.size()}, {"q1", gaps.q1}, {"median", gaps.median}, {"q3", gaps.q3}};
    }
    return j;
}

int cmd_inspect(const Globals &g, const InspectArgs &a, std::istream &in, std::ostream &out)
{
    Output o(g.out, out);
    const Json j = a.source.text.empty() ? inspect_records(read_records(g.in, in))
                                         : inspect_system(load_systems(g, a.source, in).front().second);
    if (g.format == "text") {
        for (const auto &[k, v] : j.items()) {
            o.stream() << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        }
    } else {
        o.stream() << j.dump() << '\n';
    }
    return exit_ok;
}

void add_source(CLI::App *cmd, SystemSource &src)
{
    cmd->add_option("--system", src.text, "System text, constraints separated by ';'");
    cmd->add_option("--nvars", src.nvars, "Variable count for --system");
}

} // namespace

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err)
{
    CLI::App app{"cadkit: polynomial-system features, variable-ordering heuristics and CAD dataset tools", "cadkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::optional<std::size_t> workers;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--workers", workers, "Thread limit (default: CADKIT_WORKERS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Output format: json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_option("--in", g.in, "Input JSONL file ('-' for stdin)");
    app.add_option("--out", g.out, "Output file (default stdout)");

    GenArgs gen;
    auto *c_gen = app.add_subcommand("gen", "Generate random polynomial systems from a dataset name");
    c_gen->add_option("--name", gen.name, "Dataset name, e.g. REdEn4rCv3")->required();
    c_gen->add_option("--count", gen.count, "Number of systems")->check(CLI::PositiveNumber)->capture_default_str();

    LabelArgs lab;
    auto *c_label = app.add_subcommand("label", "Time every variable ordering and derive optimal sets");
    c_label->add_option("--backend", lab.backend, "surrogate or external")->capture_default_str();
    c_label->add_option("--cmd", lab.command, "External command template (default: CADKIT_BACKEND_CMD)");
    c_label->add_option("--time-limit", lab.time_limit, "Seconds per ordering")->capture_default_str();
    c_label->add_option("--tau", lab.tau, "Relative optimality tolerance")->capture_default_str();
    c_label->add_option("--unit", lab.unit, "Surrogate seconds per cost unit")->capture_default_str();
    c_label->add_option("--max-vars", lab.max_vars, "Largest variable count to label")->capture_default_str();

    PretrainArgs pre;
    auto *c_pre = app.add_subcommand("pretrain-labels", "Compute pre-training labels");
    c_pre->add_option("--tasks", pre.tasks, "Comma-separated tasks among e,f,m,p,r,s")->capture_default_str();
    c_pre->add_option("--budget", pre.budget, "Seconds per projection-based label")->capture_default_str();

    TokenizeArgs tk;
    auto *c_tok = app.add_subcommand("tokenize", "Screen labels and emit a token corpus");
    c_tok->add_option("--scheme", tk.scheme, "A (completed) or B (sparse)")->capture_default_str();
    c_tok->add_option("--vocab", tk.vocab, "Write the vocabulary JSON here");
    c_tok->add_flag("--no-screen", tk.no_screen, "Keep over-long task_m labels");
    c_tok->add_option("--max-length", tk.max_length, "task_m length limit")->capture_default_str();

    SplitArgs sp;
    auto *c_split = app.add_subcommand("split", "Assign train/valid/test_valid/test in 7:1:1:1");
    c_split->add_option("--out-dir", sp.out_dir, "Write one file per split into this directory");

    SuggestArgs sug;
    auto *c_sug = app.add_subcommand("suggest", "Suggest a variable ordering with a heuristic");
    c_sug->add_option("--heuristic", sug.heuristic, "Heuristic id, comma list, or 'all'")->capture_default_str();
    c_sug->add_option("--budget", sug.budget, "Seconds for psf/ipf projections")->capture_default_str();
    add_source(c_sug, sug.source);

    FeaturesArgs feat;
    auto *c_feat = app.add_subcommand("features", "Compute feature matrices");
    c_feat->add_option("--kind", feat.kind, "e, f, m, p, r, s, ie11, re4 or max_l")->capture_default_str();
    c_feat->add_option("--budget", feat.budget, "Seconds per system for p, r, s")->capture_default_str();
    add_source(c_feat, feat.source);

    EvalArgs ev;
    auto *c_eval = app.add_subcommand("eval", "Score ordering predictions against labels");
    c_eval->add_option("--pred", ev.pred, "Predictions JSONL {id, ordering[, heuristic]}")->required();
    c_eval->add_option("--labels", ev.labels, "Labeled JSONL")->required();
    c_eval->add_option("--split", ev.split, "Only instances of this split");
    c_eval->add_flag("--per-instance", ev.per_instance, "Include per-instance rows in JSON output");
    c_eval->add_option("--edges", ev.edges, "Max-time histogram edges in seconds")->capture_default_str();

    InspectArgs ins;
    auto *c_ins = app.add_subcommand("inspect", "Summarize a JSONL file or a single system");
    add_source(c_ins, ins.source);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    g.workers = workers ? *workers : default_workers();

    try {
        if (c_gen->parsed()) {
            return cmd_gen(g, gen, out);
        }
        if (c_label->parsed()) {
            return cmd_label(g, lab, in, out, err);
        }
        if (c_pre->parsed()) {
            return cmd_pretrain(g, pre, in, out);
        }
        if (c_tok->parsed()) {
            return cmd_tokenize(g, tk, in, out, err);
        }
        if (c_split->parsed()) {
            return cmd_split(g, sp, in, out);
        }
        if (c_sug->parsed()) {
            return cmd_suggest(g, sug, in, out, err);
        }
        if (c_feat->parsed()) {
            return cmd_features(g, feat, in, out, err);
        }
        if (c_eval->parsed()) {
            return cmd_eval(g, ev, in, out);
        }
        if (c_ins->parsed()) {
            return cmd_inspect(g, ins, in, out);
        }
    } catch (const CLI::ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const backend_error &e) {
        err << "backend error: " << e.what() << '\n';
        return exit_backend;
    } catch (const budget_exceeded &e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception &e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}

} // namespace cadkit::cli
