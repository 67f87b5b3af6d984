#include "cadkit/labeling.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "cadkit/datagen.hpp"
#include "cadkit/projection.hpp"

namespace cadkit
{

std::string_view to_string(Split s)
{
    switch (s) {
        case Split::train:
            return "train";
        case Split::valid:
            return "valid";
        case Split::test_valid:
            return "test_valid";
        case Split::test:
            return "test";
    }
    return "?";
}

Split parse_split(std::string_view s)
{
    for (auto x : {Split::train, Split::valid, Split::test_valid, Split::test}) {
        if (to_string(x) == s) {
            return x;
        }
    }
    throw std::invalid_argument("unknown split '" + std::string(s) + "'");
}

bool LabeledInstance::usable() const
{
    const bool errors = std::any_of(timings.begin(), timings.end(), [](const TimingRecord &r) { return r.error; });
    return t_star.has_value() && !errors;
}

double charged_seconds(const TimingRecord &r, double time_limit)
{
    return r.timed_out ? time_limit : r.seconds;
}

void derive_optimal_sets(LabeledInstance &inst, double tau)
{
    inst.t_star.reset();
    inst.abs_optimal.clear();
    inst.rel_optimal.clear();
    for (const auto &r : inst.timings) {
        if (!r.timed_out && !r.error && (!inst.t_star || r.seconds < *inst.t_star)) {
            inst.t_star = r.seconds;
        }
    }
    if (!inst.t_star) {
        return;
    }
    const double threshold = (1.0 + tau) * *inst.t_star;
    for (const auto &r : inst.timings) {
        if (r.timed_out || r.error) {
            continue;
        }
        if (r.seconds == *inst.t_star) {
            inst.abs_optimal.push_back(r.ordering);
        }
        if (r.seconds <= threshold) {
            inst.rel_optimal.push_back(r.ordering);
        }
    }
    std::sort(inst.abs_optimal.begin(), inst.abs_optimal.end());
    std::sort(inst.rel_optimal.begin(), inst.rel_optimal.end());
}

// Backends -------------------------------------------------------------------

double surrogate_cost(const PolynomialSystem &sys, const VariableOrdering &o)
{
    if (o.size() != sys.nvars()) {
        throw std::invalid_argument("ordering size does not match the system");
    }
    std::vector<Polynomial> level = sys.polynomials();
    double cost = 1.0;
    for (std::size_t i = 0;; ++i) {
        std::uint64_t degrees = 0;
        for (const auto &f : level) {
            degrees += total_degree(f);
        }
        cost *= 1.0 + static_cast<double>(degrees);
        if (i == o.size() || level.empty()) {
            break;
        }
        level = first_projection_factor_set(level, o[i]).factors;
    }
    return cost;
}

TimingRecord SurrogateBackend::run(const PolynomialSystem &sys, const VariableOrdering &o, double time_limit) const
{
    const double seconds = surrogate_cost(sys, o) * m_unit;
    if (seconds > time_limit) {
        return {o, time_limit, true, std::nullopt};
    }
    return {o, seconds, false, std::nullopt};
}

TimingRecord parse_backend_output(std::string_view output, const VariableOrdering &o, double time_limit)
{
    std::istringstream is{std::string(output)};
    std::string word;
    if (!(is >> word)) {
        throw backend_error("backend printed nothing");
    }
    if (word == "TIMEOUT") {
        return {o, time_limit, true, std::nullopt};
    }
    double seconds = 0;
    if (word != "TIME" || !(is >> seconds) || !(seconds >= 0)) {
        throw backend_error("unrecognized backend output '" + std::string(output.substr(0, 80)) + "'");
    }
    if (seconds > time_limit) {
        return {o, time_limit, true, std::nullopt};
    }
    return {o, seconds, false, std::nullopt};
}

ExternalBackend::ExternalBackend(std::string command_template) : m_template(std::move(command_template))
{
    if (m_template.find("{input_file}") == std::string::npos) {
        throw std::invalid_argument("backend command template lacks {input_file}");
    }
}

namespace
{

std::string replace_all(std::string s, std::string_view from, const std::string &to)
{
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

std::string ordering_argument(const VariableOrdering &o)
{
    std::string s;
    for (const auto &name : variable_names(o)) {
        if (!s.empty()) {
            s += ',';
        }
        s += name;
    }
    return s;
}

class TempFile
{
public:
    explicit TempFile(const std::string &content)
    {
        const char *dir = std::getenv("TMPDIR");
        std::string pattern = std::string(dir && *dir ? dir : "/tmp") + "/cadkit-XXXXXX";
        std::vector<char> buf(pattern.begin(), pattern.end());
        buf.push_back('\0');
        const int fd = ::mkstemp(buf.data());
        if (fd < 0) {
            throw backend_error(std::string("cannot create input file: ") + std::strerror(errno));
        }
        m_path = buf.data();
        const auto written = ::write(fd, content.data(), content.size());
        ::close(fd);
        if (written != static_cast<ssize_t>(content.size())) {
            std::remove(m_path.c_str());
            throw backend_error("cannot write input file");
        }
    }
    ~TempFile() { std::remove(m_path.c_str()); }
    TempFile(const TempFile &) = delete;
    TempFile &operator=(const TempFile &) = delete;

    const std::string &path() const { return m_path; }

private:
    std::string m_path;
};

} // namespace

TimingRecord ExternalBackend::run(const PolynomialSystem &sys, const VariableOrdering &o, double time_limit) const
{
    const TempFile input(to_string(sys) + "\n");
    std::ostringstream limit;
    limit << time_limit;
    std::string cmd = replace_all(m_template, "{input_file}", input.path());
    cmd = replace_all(cmd, "{ordering}", ordering_argument(o));
    cmd = replace_all(cmd, "{time_limit}", limit.str());

    FILE *pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        throw backend_error("cannot launch backend command");
    }
    std::string output;
    char buf[512];
    while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) {
        output.append(buf, n);
    }
    const int status = ::pclose(pipe);
    if (status != 0) {
        throw backend_error("backend command exited with status " + std::to_string(status));
    }
    return parse_backend_output(output, o, time_limit);
}

TimingRecord RecordedBackend::run(const PolynomialSystem &, const VariableOrdering &o, double time_limit) const
{
    const auto it = m_table.find(o);
    if (it == m_table.end()) {
        throw backend_error("no recorded timing for " + to_string(o));
    }
    if (!it->second || *it->second > time_limit) {
        return {o, time_limit, true, std::nullopt};
    }
    return {o, *it->second, false, std::nullopt};
}

// Labeling -------------------------------------------------------------------

LabeledInstance label(std::string id, const PolynomialSystem &sys, const CadBackend &backend,
                      const LabelOptions &options)
{
    if (sys.nvars() > options.max_vars) {
        throw std::invalid_argument("system has " + std::to_string(sys.nvars()) + " variables; the ordering cap is " +
                                    std::to_string(options.max_vars));
    }
    const auto orders = all_orderings(sys.nvars());
    std::vector<std::optional<TimingRecord>> slots(orders.size());
    auto run_one = [&](std::size_t i) {
        try {
            slots[i] = backend.run(sys, orders[i], options.time_limit);
        } catch (const std::exception &e) {
            slots[i] = TimingRecord{orders[i], 0.0, false, std::string(e.what())};
        }
    };
    const auto workers = std::clamp<std::size_t>(options.workers, 1, orders.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < orders.size(); ++i) {
            run_one(i);
        }
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < orders.size(); i += workers) {
                    run_one(i);
                }
            });
        }
    }

    LabeledInstance inst{std::move(id), sys, options.time_limit, {}, std::nullopt, {}, {}, std::nullopt};
    for (auto &s : slots) {
        inst.timings.push_back(std::move(*s));
    }
    derive_optimal_sets(inst, options.tau);
    return inst;
}

std::array<std::size_t, 4> split_sizes(std::size_t count)
{
    constexpr std::array<std::size_t, 4> weights{7, 1, 1, 1};
    std::array<std::size_t, 4> sizes{};
    std::array<std::size_t, 4> remainders{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        sizes[i] = count * weights[i] / 10;
        remainders[i] = count * weights[i] % 10;
        assigned += sizes[i];
    }
    std::array<std::size_t, 4> rank{0, 1, 2, 3};
    std::stable_sort(rank.begin(), rank.end(), [&](auto a, auto b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; assigned < count; ++k, ++assigned) {
        ++sizes[rank[k]];
    }
    return sizes;
}

std::vector<Split> split(std::size_t count, std::uint64_t seed)
{
    const auto sizes = split_sizes(count);
    std::vector<Split> out;
    out.reserve(count);
    constexpr std::array<Split, 4> kinds{Split::train, Split::valid, Split::test_valid, Split::test};
    for (std::size_t i = 0; i < 4; ++i) {
        out.insert(out.end(), sizes[i], kinds[i]);
    }
    auto rng = instance_rng(seed, ~std::uint64_t{0});
    for (std::size_t i = count; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
        std::swap(out[i - 1], out[j]);
    }
    return out;
}

Expansion expand_multilabel(const std::vector<LabeledInstance> &instances)
{
    Expansion out;
    for (const auto &inst : instances) {
        if (inst.split && *inst.split != Split::train && *inst.split != Split::valid) {
            throw std::invalid_argument("multi-label expansion applies to train/valid only; instance " + inst.id +
                                        " is in " + std::string(to_string(*inst.split)));
        }
        if (inst.abs_optimal.empty()) {
            out.dropped.push_back(inst.id);
            continue;
        }
        for (const auto &o : inst.abs_optimal) {
            out.samples.push_back({inst.id, &inst.system, o});
        }
    }
    return out;
}

} // namespace cadkit
