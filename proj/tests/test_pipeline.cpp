#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "cadkit/datagen.hpp"
#include "cadkit/eval.hpp"
#include "cadkit/io.hpp"
#include "cadkit/labeling.hpp"
#include "cadkit/pretrain.hpp"
#include "cadkit/projection.hpp"
#include "oracles.hpp"

using namespace cadkit;

namespace
{

PolynomialSystem example2()
{
    return parse_system("-6*x1^3*x2 - 4*x1*x2*x3^2 + 2*x2^2*x3 + 1; -5*x3^4 + x3^3 - 7", 3);
}

VariableOrdering O(const char *text, std::size_t n = 3)
{
    return parse_ordering(text, n);
}

// Example 2 timings in lexicographic ordering order; nullopt is a timeout.
std::map<VariableOrdering, std::optional<double>> example2_table()
{
    const auto orders = all_orderings(3);
    const std::optional<double> t[] = {0.035, 0.080, 0.034, 0.048, std::nullopt, std::nullopt};
    std::map<VariableOrdering, std::optional<double>> table;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        table.emplace(orders[i], t[i]);
    }
    return table;
}

LabeledInstance example2_labeled()
{
    return label("ex2", example2(), RecordedBackend(example2_table()));
}

LabeledInstance with_timings(const std::string &id, const std::vector<std::optional<double>> &t, double limit = 900)
{
    const auto orders = all_orderings(3);
    std::map<VariableOrdering, std::optional<double>> table;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        table.emplace(orders[i], t[i]);
    }
    LabelOptions opts;
    opts.time_limit = limit;
    return label(id, example2(), RecordedBackend(table), opts);
}

LabeledInstance random_instance(std::mt19937_64 &rng, const std::string &id)
{
    std::vector<std::optional<double>> t;
    for (int k = 0; k < 6; ++k) {
        if (rng() % 7 == 0) {
            t.push_back(std::nullopt);
        } else {
            // Coarse grid so ties and near-ties both occur.
            t.push_back(0.01 * static_cast<double>(1 + rng() % 40));
        }
    }
    t[rng() % 6] = 0.5;
    return with_timings(id, t);
}

} // namespace

TEST_SUITE("datagen")
{
    TEST_CASE("dataset names")
    {
        const auto spec = parse_dataset_name("REdEn4rCv3");
        CHECK(spec.nvars == 3);
        CHECK(spec.nconstraints == 4);
        CHECK(spec.degree == IntRange{1, 2});
        CHECK(spec.relations == RelationClass::pure);
        const auto plain = parse_dataset_name("REdEn2v3");
        CHECK(plain.nvars == 3);
        CHECK(plain.nconstraints == 2);
        CHECK(plain.relations == RelationClass::equations);
        CHECK(plain.term_count == IntRange{2, 5});
        CHECK(plain.coefficient_bound == 9);
        CHECK_THROWS_AS(parse_dataset_name("XYZ"), std::invalid_argument);
        CHECK_THROWS_AS(parse_dataset_name("REdEn4rCv3x"), std::invalid_argument);
        CHECK_THROWS_AS(parse_dataset_name("REn4v3"), std::invalid_argument);
    }

    TEST_CASE("generated systems respect the spec")
    {
        const auto spec = parse_dataset_name("REdEn4rCv3");
        const auto systems = generate(spec, 200);
        REQUIRE(systems.size() == 200);
        for (const auto &sys : systems) {
            CHECK(sys.nvars() == 3);
            CHECK(sys.size() == 4);
            std::vector<bool> seen(3, false);
            for (const auto &c : sys.constraints()) {
                CHECK(c.relation == Relation::none);
                CHECK_FALSE(c.poly.is_constant());
                CHECK(total_degree(c.poly) <= 2);
                CHECK(c.poly.size() <= static_cast<std::size_t>(spec.term_count.hi));
                for (const auto &t : c.poly.terms()) {
                    CHECK(abs(t.coefficient) <= spec.coefficient_bound);
                }
                for (Var v = 0; v < 3; ++v) {
                    seen[v] = seen[v] || involves(c.poly, v);
                }
            }
            CHECK(std::count(seen.begin(), seen.end(), true) == 3);
        }
    }

    TEST_CASE("generation is deterministic and worker independent")
    {
        const auto spec = parse_dataset_name("REdMn3rMv4");
        const auto a = generate(spec, 60, 1);
        CHECK(a == generate(spec, 60, 1));
        CHECK(a == generate(spec, 60, 4));
        CHECK(a[7] == generate_one(spec, 7));
        auto reseeded = spec;
        reseeded.seed = 99;
        CHECK(generate(reseeded, 60) != a);
    }

    TEST_CASE("degenerate term range gives monomials")
    {
        auto spec = parse_dataset_name("REdEn2v3");
        spec.term_count = {1, 1};
        spec.every_variable = false;
        for (const auto &sys : generate(spec, 20)) {
            for (const auto &c : sys.constraints()) {
                CHECK(c.poly.size() == 1);
            }
        }
    }

    TEST_CASE("rng helpers")
    {
        auto a = instance_rng(1, 2);
        auto b = instance_rng(1, 2);
        CHECK(a() == b());
        for (int i = 0; i < 1000; ++i) {
            const auto x = uniform_int(a, -3, 3);
            CHECK(x >= -3);
            CHECK(x <= 3);
        }
        auto bad = parse_dataset_name("REdEn2v3");
        bad.nvars = 0;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    }
}

TEST_SUITE("labeling")
{
    TEST_CASE("optimal sets of the worked example")
    {
        const auto inst = example2_labeled();
        REQUIRE(inst.t_star.has_value());
        CHECK(*inst.t_star == doctest::Approx(0.034).epsilon(1e-12));
        CHECK(inst.abs_optimal == std::vector<VariableOrdering>{O("x2 x1 x3")});
        CHECK(inst.rel_optimal == std::vector<VariableOrdering>{O("x1 x2 x3"), O("x2 x1 x3")});
        CHECK(inst.timings.size() == 6);
        CHECK(inst.timings[4].timed_out);
        CHECK(inst.timings[4].seconds == 900);
        CHECK(inst.usable());
    }

    TEST_CASE("degenerate timing patterns")
    {
        const auto equal = with_timings("eq", {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
        CHECK(equal.rel_optimal.size() == 6);
        CHECK(equal.abs_optimal.size() == 6);
        const auto single = with_timings("one", {std::nullopt, std::nullopt, 2.5, std::nullopt, std::nullopt, std::nullopt});
        CHECK(single.abs_optimal == std::vector<VariableOrdering>{O("x2 x1 x3")});
        CHECK(single.rel_optimal == single.abs_optimal);
        const auto none = with_timings("none", std::vector<std::optional<double>>(6, std::nullopt));
        CHECK_FALSE(none.usable());
        CHECK(none.abs_optimal.empty());
        CHECK_FALSE(none.t_star.has_value());
        const auto over = with_timings("over", {1000.0, 1.0, 1.0, 1.0, 1.0, 1.0});
        CHECK(over.timings[0].timed_out);
    }

    TEST_CASE("optimal sets nest and scale")
    {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 300; ++i) {
            auto inst = random_instance(rng, "r" + std::to_string(i));
            for (const auto &o : inst.abs_optimal) {
                CHECK(std::binary_search(inst.rel_optimal.begin(), inst.rel_optimal.end(), o));
            }
            auto scaled = inst;
            for (auto &r : scaled.timings) {
                r.seconds *= 4;
            }
            scaled.time_limit *= 4;
            derive_optimal_sets(scaled);
            CHECK(scaled.abs_optimal == inst.abs_optimal);
            CHECK(scaled.rel_optimal == inst.rel_optimal);
        }
    }

    TEST_CASE("multilabel expansion")
    {
        auto two = with_timings("two", {0.5, 0.5, 0.7, 0.9, 1.0, 1.0});
        auto one = example2_labeled();
        auto dead = with_timings("dead", std::vector<std::optional<double>>(6, std::nullopt));
        two.split = Split::train;
        one.split = Split::valid;
        const std::vector<LabeledInstance> batch{two, one, dead};
        const auto ex = expand_multilabel(batch);
        CHECK(ex.samples.size() == 3);
        CHECK(ex.dropped == std::vector<std::string>{"dead"});
        CHECK(ex.samples[0].ordering == O("x1 x2 x3"));
        CHECK(ex.samples[1].ordering == O("x1 x3 x2"));
        auto test = one;
        test.split = Split::test;
        CHECK_THROWS_AS(expand_multilabel({test}), std::invalid_argument);

        std::mt19937_64 rng(8);
        std::vector<LabeledInstance> many;
        std::size_t expected = 0;
        for (int i = 0; i < 100; ++i) {
            auto inst = random_instance(rng, std::to_string(i));
            inst.split = i % 2 ? Split::train : Split::valid;
            expected += inst.abs_optimal.size();
            many.push_back(std::move(inst));
        }
        CHECK(expand_multilabel(many).samples.size() == expected);
    }

    TEST_CASE("splits")
    {
        CHECK(split_sizes(10) == std::array<std::size_t, 4>{7, 1, 1, 1});
        CHECK(split_sizes(200000) == std::array<std::size_t, 4>{140000, 20000, 20000, 20000});
        for (std::size_t n : {1u, 2u, 3u, 9u, 11u, 57u, 1001u}) {
            const auto sizes = split_sizes(n);
            CHECK(sizes[0] + sizes[1] + sizes[2] + sizes[3] == n);
            for (std::size_t k = 0; k < 4; ++k) {
                const double share = (k == 0 ? 0.7 : 0.1) * static_cast<double>(n);
                CHECK(std::abs(static_cast<double>(sizes[k]) - share) < 1.0);
            }
            const auto assignment = split(n, 3);
            CHECK(assignment == split(n, 3));
            std::array<std::size_t, 4> counts{};
            for (const auto s : assignment) {
                ++counts[static_cast<std::size_t>(s)];
            }
            CHECK(counts == sizes);
        }
        CHECK(split(1000, 1) != split(1000, 2));
        CHECK(parse_split(to_string(Split::test_valid)) == Split::test_valid);
    }

    TEST_CASE("surrogate backend")
    {
        const auto uni = parse_system("x1^2 - 2; x1 + 3", 1);
        CHECK(surrogate_cost(uni, O("x1", 1)) > 0);
        std::mt19937_64 rng(17);
        for (int i = 0; i < 20; ++i) {
            const auto sys = oracle::random_system(rng, 3, 2, 2, 3);
            std::vector<Var> perm{0, 1, 2};
            std::shuffle(perm.begin(), perm.end(), rng);
            for (const auto &o : all_orderings(3)) {
                const double c = surrogate_cost(sys, o);
                CHECK(c > 0);
                CHECK(c == surrogate_cost(sys, o));
                CHECK(c == surrogate_cost(permute_variables(sys, perm), permute(o, perm)));
            }
        }
        // Regression fixture for the worked example, cost units per ordering.
        // Product over levels of 1 + summed total degrees, rebuilt from pf.
        for (const auto &o : all_orderings(3)) {
            std::vector<Polynomial> level = example2().polynomials();
            double expected = 1;
            for (std::size_t i = 0; i <= 3; ++i) {
                std::uint64_t d = 0;
                for (const auto &f : level) {
                    d += total_degree(f);
                }
                expected *= static_cast<double>(1 + d);
                if (i < 3) {
                    level = first_projection_factor_set(level, o[i]).factors;
                }
            }
            CHECK(surrogate_cost(example2(), o) == expected);
        }
        std::vector<double> costs;
        for (const auto &o : all_orderings(3)) {
            costs.push_back(surrogate_cost(example2(), o));
        }
        CHECK(costs == std::vector<double>{4752, 7920, 2268, 5076, 56250, 28800});
        const SurrogateBackend backend;
        const auto r = backend.run(example2(), O("x2 x1 x3"), 900);
        CHECK(r.seconds == doctest::Approx(0.2268));
        CHECK(backend.run(example2(), O("x3 x1 x2"), 1.0).timed_out);
    }

    TEST_CASE("external backend protocol")
    {
        CHECK(parse_backend_output("TIME 0.25\n", O("x1 x2 x3"), 900).seconds == 0.25);
        const auto t = parse_backend_output("TIMEOUT", O("x1 x2 x3"), 900);
        CHECK(t.timed_out);
        CHECK(t.seconds == 900);
        CHECK_THROWS_AS(parse_backend_output("done", O("x1 x2 x3"), 900), backend_error);
        CHECK_THROWS_AS(ExternalBackend("solver --no-input"), std::invalid_argument);

        const ExternalBackend echo("test -s {input_file} && echo TIME 0.5 # {ordering} {time_limit}");
        const auto r = echo.run(example2(), O("x2 x1 x3"), 900);
        CHECK(r.seconds == 0.5);
        CHECK_FALSE(r.timed_out);

        const ExternalBackend crash("false {input_file}");
        CHECK_THROWS_AS(crash.run(example2(), O("x2 x1 x3"), 900), backend_error);
        const auto inst = label("crash", example2(), crash);
        CHECK(inst.timings.size() == 6);
        for (const auto &rec : inst.timings) {
            CHECK(rec.error.has_value());
        }
        CHECK_FALSE(inst.usable());
    }
}

TEST_SUITE("eval")
{
    TEST_CASE("worked example metrics")
    {
        const std::vector<LabeledInstance> insts{example2_labeled()};
        CHECK(gap_ratio(insts[0]) == doctest::Approx(0.035 / 0.048).epsilon(1e-12));
        const auto report = evaluate({{"ex2", O("x1 x2 x3")}}, insts, "pred");
        REQUIRE(report.per_instance.size() == 1);
        const auto &r = report.per_instance[0];
        CHECK_FALSE(r.abs_hit);
        CHECK(r.rel_hit);
        CHECK(r.ratio == doctest::Approx(0.035 / 0.034).epsilon(1e-12));
        CHECK(report.abs_acc == 0);
        CHECK(report.rel_acc == 100);
        const std::vector<double> edges{1, 10, 100, 600};
        CHECK(max_histogram(insts, edges) == std::vector<std::size_t>{0, 0, 0, 0, 1});
        CHECK_THROWS_AS(evaluate({{"nope", O("x1 x2 x3")}}, insts), std::invalid_argument);
        CHECK_THROWS_AS(evaluate({{"ex2", O("x1 x2", 2)}}, insts), std::invalid_argument);
    }

    TEST_CASE("gap ratio cases")
    {
        const auto twice = with_timings("g", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
        CHECK(gap_ratio(twice) == doctest::Approx(0.5));
        const auto outsider = with_timings("o", {1.0, 1.0, 1.0, 1.0, 1.0, 8.0});
        CHECK(gap_ratio(outsider) == doctest::Approx(1.0 / 8.0));
        const auto all = with_timings("a", std::vector<std::optional<double>>(6, 1.0));
        CHECK_THROWS_AS(gap_ratio(all), std::domain_error);
        auto scaled = twice;
        for (auto &r : scaled.timings) {
            r.seconds *= 8;
        }
        derive_optimal_sets(scaled);
        CHECK(gap_ratio(scaled) == doctest::Approx(gap_ratio(twice)).epsilon(1e-12));
    }

    TEST_CASE("perfect predictions")
    {
        std::mt19937_64 rng(23);
        std::vector<LabeledInstance> insts;
        std::map<std::string, VariableOrdering> preds;
        for (int i = 0; i < 50; ++i) {
            insts.push_back(random_instance(rng, "p" + std::to_string(i)));
            preds.emplace(insts.back().id, insts.back().abs_optimal.front());
        }
        const auto r = evaluate(preds, insts);
        CHECK(r.abs_acc == 100);
        CHECK(r.rel_acc == 100);
        CHECK(r.time_ratio_total == doctest::Approx(1.0));
        CHECK(r.time_ratio_mean == doctest::Approx(1.0));
    }

    TEST_CASE("reports are consistent on random inputs")
    {
        std::mt19937_64 rng(29);
        const auto orders = all_orderings(3);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<LabeledInstance> insts;
            std::map<std::string, VariableOrdering> preds;
            for (int i = 0; i < 30; ++i) {
                insts.push_back(random_instance(rng, std::to_string(i)));
                preds.emplace(insts.back().id, orders[rng() % orders.size()]);
            }
            const auto r = evaluate(preds, insts);
            CHECK(r.rel_acc >= r.abs_acc);
            for (const auto &x : r.per_instance) {
                CHECK(x.ratio >= 1.0);
            }
            std::shuffle(insts.begin(), insts.end(), rng);
            const auto again = evaluate(preds, insts);
            CHECK(again.abs_acc == r.abs_acc);
            CHECK(again.rel_acc == r.rel_acc);
            CHECK(again.time_ratio_mean == r.time_ratio_mean);
            CHECK(again.time_ratio_total == r.time_ratio_total);
            const std::vector<double> edges{0.1, 0.3, 1.0};
            const auto hist = max_histogram(insts, edges);
            std::size_t total = 0;
            for (const auto c : hist) {
                total += c;
            }
            CHECK(total == insts.size());
        }
    }

    TEST_CASE("gap statistics and digit lengths")
    {
        std::vector<LabeledInstance> insts{example2_labeled(), with_timings("g", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0})};
        const auto stats = gap_stats(insts);
        CHECK(stats.ratios.size() == 2);
        CHECK(stats.median == doctest::Approx((0.035 / 0.048 + 0.5) / 2));
        const std::vector<FeatureMatrix> ms{FeatureMatrix({"a"}, 2, {1, 22}), FeatureMatrix({"a"}, 1, {333})};
        CHECK(average_digit_length(ms) == Rational(9, 4));
        const std::vector<EvalReport> reports{evaluate({{"ex2", O("x2 x1 x3")}}, std::vector{insts[0]}, "gmods")};
        const auto text = report_text(reports);
        CHECK(text.find("Abs_Acc") != std::string::npos);
        CHECK(text.find("gmods") != std::string::npos);
        CHECK(report_csv(reports).rfind("heuristic,count", 0) == 0);
    }
}

TEST_SUITE("pretrain")
{
    TEST_CASE("labels for every task")
    {
        for (const auto task : all_pretrain_tasks) {
            const auto l = pretrain_label("ex2", example2(), task);
            CHECK(l.status == LabelStatus::ok);
            CHECK(parse_pretrain_task(to_string(task)) == task);
            const auto tokens = label_tokens(l);
            CHECK(tokens.tokens.front() == "<s>");
            CHECK(tokens.tokens.back() == "</s>");
        }
        CHECK(pretrain_label("ex2", example2(), PretrainTask::r).matrix
              == re4(example2()));
    }

    TEST_CASE("degenerate and slow cases")
    {
        const auto empty = pretrain_label("lin", parse_system("x1 + 1", 1), PretrainTask::p);
        CHECK(empty.status == LabelStatus::empty);
        PretrainOptions tight;
        tight.budget = std::chrono::duration<double>(-1.0);
        CHECK(pretrain_label("ex2", example2(), PretrainTask::s, tight).status == LabelStatus::timeout);
        const auto missing = pretrain_label("x", parse_system("x1 + 1", 2), PretrainTask::r);
        CHECK(missing.status == LabelStatus::error);
    }

    TEST_CASE("screening")
    {
        std::vector<PretrainLabel> labels;
        labels.push_back(pretrain_label("ok", example2(), PretrainTask::m));
        // A product with many terms yields a long task_m sequence.
        labels.push_back(pretrain_label("long", parse_system("(x1 + x2 + x3 + 1)^6; x1 - 2", 3), PretrainTask::m));
        labels.push_back(pretrain_label("empty", parse_system("x1 + 1", 1), PretrainTask::p));
        PretrainOptions tight;
        tight.budget = std::chrono::duration<double>(-1.0);
        labels.push_back(pretrain_label("slow", example2(), PretrainTask::r, tight));
        labels.push_back(pretrain_label("broken", parse_system("x1 + 1", 2), PretrainTask::r));
        CHECK(label_tokens(labels[1]).size() > 512);
        const auto r = screen(labels);
        REQUIRE(r.kept.size() == 1);
        CHECK(r.kept[0].id == "ok");
        CHECK(r.too_long == 1);
        CHECK(r.empty == 1);
        CHECK(r.timed_out == 1);
        CHECK(r.failed == 1);
    }
}

TEST_SUITE("io")
{
    TEST_CASE("record round trips")
    {
        auto inst = example2_labeled();
        inst.split = Split::test;
        const auto back = labeled_from_json(Json::parse(labeled_to_json(inst).dump()));
        CHECK(back.id == inst.id);
        CHECK(back.system == inst.system);
        CHECK(back.t_star == inst.t_star);
        CHECK(back.abs_optimal == inst.abs_optimal);
        CHECK(back.rel_optimal == inst.rel_optimal);
        CHECK(back.split == inst.split);
        CHECK(labeled_to_json(back) == labeled_to_json(inst));

        for (const auto task : all_pretrain_tasks) {
            const auto l = pretrain_label("ex2", example2(), task);
            const auto j = pretrain_to_json(l);
            CHECK(pretrain_to_json(pretrain_from_json(Json::parse(j.dump()))) == j);
        }

        const CorpusRecord rec{"id", "task_c", encode_system(example2(), Scheme::A),
                               encode_ordering(O("x2 x1 x3")), Split::train};
        const auto rj = corpus_to_json(rec);
        const auto rb = corpus_from_json(rj);
        CHECK(rb.input == rec.input);
        CHECK(rb.output == rec.output);
        CHECK(rb.split == rec.split);
        const Vocabulary v(4);
        CHECK(vocabulary_from_json(vocabulary_to_json(v)) == v);
        CHECK(ordering_from_json(Json("x3 x1 x2"), 3) == O("x3 x1 x2"));
    }

    TEST_CASE("malformed input")
    {
        std::istringstream in("{\"a\":1}\n\n{broken\n");
        try {
            read_jsonl(in);
            FAIL("expected a data error");
        } catch (const data_error &e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
        CHECK_THROWS_AS(system_from_json(Json::parse(R"({"nvars":2})")), data_error);
        CHECK_THROWS_AS(system_from_json(Json::parse(R"({"nvars":2,"constraints":[{"poly":"x5"}]})")), data_error);
        CHECK_THROWS_AS(labeled_from_json(Json::parse(R"({"id":"x"})")), data_error);
    }
}
