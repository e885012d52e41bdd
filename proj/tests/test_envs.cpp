#include <doctest.h>

#include <cmath>

#include "ssp/envs.hpp"
#include "ssp/planning.hpp"

using namespace ssp;

TEST_CASE("hard one-step instance: every action jumps to the goal") {
    LowerBoundSpec spec;
    spec.num_states = 2;
    spec.num_actions = 2;
    spec.b_star = 0.5;
    spec.num_episodes = 64;
    const SspMdp m = lower_bound_instance(spec, 11);

    for (int a = 0; a < 2; ++a)
        for (int s = 0; s < 2; ++s) CHECK(m.transitions[a](s, 2) == 1.0);
    CHECK(m.initial_dist(0) == 0.5);
    CHECK(m.initial_dist(1) == 0.5);
    CHECK(m.cost_model.kind == CostModel::Kind::Bernoulli);
}

TEST_CASE("default epsilon formula") {
    LowerBoundSpec spec;
    spec.num_states = 2;
    spec.num_actions = 2;
    spec.b_star = 0.5;
    spec.num_episodes = 64;
    // (1/8) sqrt(0.5 * 2 * 2 / 64)
    CHECK(spec.effective_epsilon() == doctest::Approx(0.022097086912079608).epsilon(1e-12));
}

TEST_CASE("each state has one cheap special action") {
    LowerBoundSpec spec;
    spec.num_states = 4;
    spec.num_actions = 3;
    spec.b_star = 0.25;
    spec.num_episodes = 10000;
    const double eps = spec.effective_epsilon();
    const SspMdp m = lower_bound_instance(spec, 17);

    for (int s = 0; s < 4; ++s) {
        int cheap = 0;
        for (int a = 0; a < 3; ++a) {
            if (m.mean_costs(s, a) == doctest::Approx(0.25)) ++cheap;
            else CHECK(m.mean_costs(s, a) == doctest::Approx(0.25 + eps));
        }
        CHECK(cheap == 1);
    }
}

TEST_CASE("planner recovers the constructed parameters exactly") {
    LowerBoundSpec spec;
    spec.num_states = 3;
    spec.num_actions = 2;
    spec.b_star = 0.25;
    spec.num_episodes = 10000;
    const auto ip = instance_parameters(lower_bound_instance(spec, 23));
    CHECK(ip.b_star == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ip.t_star == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ip.diameter == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ip.j_opt_init == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("spec violations are rejected") {
    LowerBoundSpec spec;
    spec.num_states = 1; // needs >= 2
    spec.num_actions = 2;
    spec.b_star = 0.25;
    spec.num_episodes = 100;
    CHECK_THROWS_AS(lower_bound_instance(spec, 1), SpecViolationError);

    spec.num_states = 2;
    spec.b_star = 0.7; // needs <= 1/2
    CHECK_THROWS_AS(lower_bound_instance(spec, 1), SpecViolationError);

    spec.b_star = 0.5;
    spec.epsilon = 0.2; // needs < 1/8
    CHECK_THROWS_AS(lower_bound_instance(spec, 1), SpecViolationError);
}

TEST_CASE("random instances always validate") {
    for (int trial = 0; trial < 1000; ++trial) {
        const SspMdp m = random_ssp(1 + trial % 6, 1 + trial % 4, {0.1, 0.7},
                                    {0.0, 1.0}, 1 + trial % 4, trial);
        CHECK(check_mdp(m).empty());
    }
}

TEST_CASE("goal probability floor caps every hitting time at 1/p") {
    const double p_lo = 0.25;
    for (int trial = 0; trial < 20; ++trial) {
        const SspMdp m = random_ssp(4, 2, {p_lo, 0.6}, {0.1, 0.9}, 3, 600 + trial);
        // every row escapes to the goal w.p. >= p_lo, so any policy is
        // dominated by a geometric with success p_lo
        StationaryPolicy pi(4);
        for (int s = 0; s < 4; ++s) pi(s) = (trial + s) % 2;
        const auto eval = policy_values(m, pi);
        REQUIRE(eval.proper);
        CHECK(eval.hitting_time.maxCoeff() <= 1.0 / p_lo + 1e-6);
    }
}

TEST_CASE("fixed seed reproduces the instance bytes") {
    const SspMdp a = random_ssp(5, 3, {0.2, 0.5}, {0.1, 0.4}, 3, 31415);
    const SspMdp b = random_ssp(5, 3, {0.2, 0.5}, {0.1, 0.4}, 3, 31415);
    CHECK(instance_to_json(a) == instance_to_json(b));
    const SspMdp c = random_ssp(5, 3, {0.2, 0.5}, {0.1, 0.4}, 3, 31416);
    CHECK(instance_to_json(a) != instance_to_json(c));
}

TEST_CASE("chain closed forms") {
    {
        const auto ip = instance_parameters(chain_ssp(1, 0.5, 0.5));
        CHECK(ip.b_star == doctest::Approx(1.0).epsilon(1e-9)); // c/p
    }
    {
        const auto ip = instance_parameters(chain_ssp(3, 1.0, 0.2));
        CHECK(ip.optimal_values(0) == doctest::Approx(0.6).epsilon(1e-10));
        CHECK(ip.t_star == doctest::Approx(3.0).epsilon(1e-10));
    }
    {
        // T* = n/p from the first state
        const auto ip = instance_parameters(chain_ssp(4, 0.25, 0.1));
        CHECK(ip.optimal_hitting_times(0) == doctest::Approx(16.0).epsilon(1e-8));
    }
}

TEST_CASE("generator registry by name") {
    const SspMdp chain = make_instance(
        "chain", nlohmann::json{{"length", 2}, {"forward_prob", 1.0}, {"step_cost", 0.25}}, 0);
    CHECK(chain.num_states == 2);
    CHECK(chain.mean_costs(0, 0) == 0.25);

    const SspMdp rnd = make_instance(
        "random", nlohmann::json{{"num_states", 3}, {"num_actions", 2}, {"seed", 5}}, 99);
    const SspMdp rnd_same = make_instance(
        "random", nlohmann::json{{"num_states", 3}, {"num_actions", 2}, {"seed", 5}}, 100);
    CHECK(instance_to_json(rnd) == instance_to_json(rnd_same)); // params seed wins

    const SspMdp lb = make_instance(
        "lower_bound",
        nlohmann::json{{"num_states", 2}, {"num_actions", 2}, {"b_star", 0.25}, {"k", 10000}},
        7);
    CHECK(lb.num_states == 2);

    CHECK_THROWS_AS(make_instance("nope", nlohmann::json::object(), 0), SpecViolationError);
}
