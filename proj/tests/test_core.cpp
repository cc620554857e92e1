#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hh/core.hpp"
#include "hh/domains/partition.hpp"

using namespace hh;
using hh::partition::PartitionDomain;
using hh::partition::PartitionInstance;

TEST_CASE("select_action picks the nearest rule, ties to first") {
    Selector sel{{Rule{{0.0}, 0}, Rule{{0.5}, 1}}};
    Metric euc = Metric::euclidean();
    CHECK(select_action(sel, {0.22}, euc) == 0);
    CHECK(select_action(sel, {0.43}, euc) == 1);

    Selector tied{{Rule{{0.3}, 7}, Rule{{0.3}, 8}}};
    CHECK(select_action(tied, {0.3}, euc) == 7);

    CHECK_THROWS_AS(select_action(sel, {0.1, 0.2}, euc), std::invalid_argument);
}

TEST_CASE("select_action is invariant under strictly monotone metric rescaling") {
    Rng rng(23);
    Metric euc = Metric::euclidean();
    auto warped = [&](std::span<const double> a, std::span<const double> b) {
        double d = euc(a, b);
        return std::sqrt(d) + 3.0 * d; // strictly increasing in d
    };
    for (int trial = 0; trial < 300; ++trial) {
        Selector sel;
        std::size_t dim = 1 + rng.next_below(5);
        std::size_t n = 1 + rng.next_below(10);
        for (std::size_t i = 0; i < n; ++i) {
            Rule r;
            for (std::size_t k = 0; k < dim; ++k) r.condition.push_back(rng.next_double());
            r.action = static_cast<int>(rng.next_below(5));
            sel.rules.push_back(r);
        }
        FeatureVector q(dim);
        for (auto& v : q) v = rng.next_double();
        int base = select_action(sel, q, euc);
        int best = sel.rules.front().action;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& r : sel.rules) {
            double d = warped(r.condition, q);
            if (d < best_d) {
                best_d = d;
                best = r.action;
            }
        }
        CHECK(base == best);
    }
}

TEST_CASE("single-rule selector equals the standalone heuristic, step for step") {
    PartitionDomain d;
    Rng rng(31);
    TransformSpec ident;
    Metric euc = Metric::euclidean();
    for (int trial = 0; trial < 30; ++trial) {
        PartitionInstance inst;
        std::size_t n = 2 + rng.next_below(10);
        for (std::size_t i = 0; i < n; ++i)
            inst.items.push_back(1 + static_cast<long>(rng.next_below(30)));
        for (int h = 0; h < 2; ++h) {
            Selector sel{{Rule{{0.5}, h}}};
            CHECK(solve_instance(sel, inst, d, ident, euc, 1000) == run_heuristic(h, inst, d, 1000));
        }
    }
}

TEST_CASE("solve_instance is deterministic and rejects a zero budget") {
    PartitionDomain d;
    PartitionInstance inst{{10, 3, 4, 2, 10, 10, 1, 1, 1, 1, 1, 1, 1}};
    Selector sel{{Rule{{0.0}, 0}, Rule{{0.5}, 1}}};
    TransformSpec ident;
    Metric euc = Metric::euclidean();
    auto a = solve_instance(sel, inst, d, ident, euc, 1000);
    auto b = solve_instance(sel, inst, d, ident, euc, 1000);
    CHECK(a == b);
    CHECK_THROWS_AS(solve_instance(sel, inst, d, ident, euc, 0.0), std::invalid_argument);
}

TEST_CASE("budget exhaustion flags timed_out and not solved") {
    PartitionDomain d;
    PartitionInstance inst{{5, 5, 5, 5, 5, 5, 5, 5}};
    auto o = run_heuristic(0, inst, d, 2.0);
    CHECK(o.timed_out);
    CHECK_FALSE(o.solved);
    CHECK(o.cost > 2.0);
}

TEST_CASE("synthetic oracle picks the per-instance best") {
    SolveOutcome h1{true, 5, 10.0, 10.0, false};
    SolveOutcome h2{true, 5, 7.0, 7.0, false};
    auto res = synthetic_oracle({{h1}, {h2}}, false);
    CHECK(res.best_action == std::vector<int>{1});
    CHECK(res.picked[0].cost == 7.0);

    SolveOutcome unsolved{false, 5, 3.0, 3.0, true};
    SolveOutcome slow{true, 9, 99.0, 99.0, false};
    auto res2 = synthetic_oracle({{unsolved}, {slow}}, false);
    CHECK(res2.best_action == std::vector<int>{1});

    CHECK_THROWS_AS(synthetic_oracle({}, false), std::invalid_argument);
    CHECK_THROWS_AS(synthetic_oracle({{h1}, {}}, false), std::invalid_argument);
}

TEST_CASE("oracle dominance over all per-instance choices, brute force") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t heuristics = 2 + rng.next_below(3);
        std::size_t instances = 1 + rng.next_below(5);
        std::vector<std::vector<SolveOutcome>> outcomes(heuristics,
                                                        std::vector<SolveOutcome>(instances));
        for (auto& row : outcomes)
            for (auto& o : row) {
                o.solved = rng.next_double() < 0.8;
                o.timed_out = !o.solved;
                o.cost = 1.0 + std::floor(rng.next_double() * 50.0);
                o.objective = o.cost;
            }
        auto oracle = synthetic_oracle(outcomes, false);
        // per-instance: the oracle pick is at least as good as every heuristic
        for (std::size_t i = 0; i < instances; ++i)
            for (std::size_t h = 0; h < heuristics; ++h)
                CHECK_FALSE(outcome_better(outcomes[h][i], oracle.picked[i], false));
        // aggregate ACC over solved instances never exceeds any single heuristic's
        auto acc_of = [](const std::vector<SolveOutcome>& os) {
            double acc = 0.0;
            for (const auto& o : os)
                if (!o.timed_out) acc += o.cost;
            return acc;
        };
        std::size_t oracle_solved = 0, best_solved = 0;
        for (const auto& o : oracle.picked)
            if (o.solved) ++oracle_solved;
        for (const auto& row : outcomes) {
            std::size_t s = 0;
            for (const auto& o : row)
                if (o.solved) ++s;
            best_solved = std::max(best_solved, s);
        }
        CHECK(oracle_solved >= best_solved);
        (void)acc_of;
    }
}

TEST_CASE("selector JSON round-trip is exact") {
    Selector sel{{Rule{{0.12345678901234567, 1.0 / 3.0}, 2}, Rule{{0.9999999999999999, 0.0}, 0}}};
    nlohmann::json j = sel;
    auto back = j.get<Selector>();
    CHECK(back == sel);
    // via text, 17 significant digits preserved
    auto text_back = nlohmann::json::parse(j.dump()).get<Selector>();
    CHECK(text_back == sel);
}

TEST_CASE("selector validation enforces invariants") {
    CHECK_THROWS_AS(validate(Selector{}, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate(Selector{{Rule{{0.5, 0.5}, 0}}}, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate(Selector{{Rule{{0.5}, 4}}}, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate(Selector{{Rule{{1.5}, 0}}}, 1, 2), std::invalid_argument);
    CHECK_NOTHROW(validate(Selector{{Rule{{0.5}, 1}}}, 1, 2));
}
