#include <doctest.h>

#include <cmath>

#include "ssp/envs.hpp"
#include "ssp/reduction.hpp"

using namespace ssp;

namespace {

// Records what the reduction hands the learner and plays action 0.
class ProbeLearner final : public FiniteHorizonLearner {
public:
    explicit ProbeLearner(const FhLearnerInit& init)
        : init_(init), policy_(Eigen::MatrixXi::Zero(init.horizon, init.num_states)) {}

    const Eigen::MatrixXi& begin_episode(int initial_state) override {
        start_states.push_back(initial_state);
        return policy_;
    }
    void observe_step(int s, int a, double c, int next) override {
        steps.push_back({s, a, c, next});
    }
    void end_episode(const Trajectory& traj) override { trajectories.push_back(traj); }

    struct Step {
        int s;
        int a;
        double c;
        int next;
    };
    FhLearnerInit init_;
    std::vector<int> start_states;
    std::vector<Step> steps;
    std::vector<Trajectory> trajectories;

private:
    Eigen::MatrixXi policy_;
};

LearnerFactory probe_factory(ProbeLearner** out) {
    return [out](const FhLearnerInit& init) {
        auto learner = std::make_unique<ProbeLearner>(init);
        *out = learner.get();
        return learner;
    };
}

LearnerFactory ulcvi_factory(double bonus_scale) {
    return [bonus_scale](const FhLearnerInit& init) {
        return std::make_unique<Ulcvi>(init, bonus_scale);
    };
}

} // namespace

TEST_CASE("horizon formula: ceil(8 t ln(8K)) with a floor of 1") {
    CHECK(compute_horizon(1.0, 1) == 17);   // ceil(8 ln 8) = ceil(16.6355)
    CHECK(compute_horizon(2.0, 1) == 34);   // ceil(33.2711)
    int prev = 0;
    for (long k = 1; k <= 4096; k *= 4) {
        const int h = compute_horizon(1.5, k);
        CHECK(h >= prev); // nondecreasing in K
        prev = h;
    }
    CHECK_THROWS_AS(compute_horizon(0.0, 1), std::invalid_argument);
}

TEST_CASE("learner wiring: horizon, confidence, terminal costs, cost bound") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3);
    ReductionConfig cfg;
    cfg.num_episodes = 4;
    cfg.delta = 0.2;
    cfg.b_star = 0.5;
    cfg.t_star = 1.0;

    ProbeLearner* probe = nullptr;
    RngStream rng(1, "env");
    std::unique_ptr<FiniteHorizonLearner> keep;
    const RunLog log = run_ssp_reduction(m, probe_factory(&probe), cfg, rng, &keep);

    REQUIRE(probe != nullptr);
    CHECK(probe->init_.horizon == compute_horizon(1.0, 4));
    CHECK(log.horizon == probe->init_.horizon);
    CHECK(probe->init_.delta == 0.05); // delta / 4
    CHECK(probe->init_.num_states == 2);
    CHECK(probe->init_.goal_state == 1);
    CHECK(probe->init_.terminal_costs(0) == 4.0); // 8 * 0.5
    CHECK(probe->init_.terminal_costs(1) == 0.0);
    CHECK(probe->init_.optimal_cost_bound == 4.5); // 9 * 0.5
}

TEST_CASE("immediate-goal instance uses exactly one interval per episode") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3);
    ReductionConfig cfg;
    cfg.num_episodes = 10;
    cfg.delta = 0.1;
    cfg.b_star = 0.3;
    cfg.t_star = 1.0;

    RngStream rng(2, "env");
    const RunLog log = run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng);
    CHECK(log.complete);
    CHECK(log.completed_episodes == 10);
    CHECK(log.total_intervals == 10);
    for (int i : log.episode_intervals) CHECK(i == 1);
    CHECK(log.total_steps == 10);
}

TEST_CASE("deterministic instance realizes exactly the optimal cost") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3); // deterministic cost model
    ReductionConfig cfg;
    cfg.num_episodes = 10;
    cfg.delta = 0.1;
    cfg.b_star = 0.3;
    cfg.t_star = 1.0;

    RngStream rng(3, "env");
    const RunLog log = run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng);
    double total = 0.0;
    for (double c : log.episode_costs) total += c;
    CHECK(total == doctest::Approx(3.0).epsilon(1e-12)); // J* = 0.3 per episode
}

TEST_CASE("padding fills the trajectory after goal arrival") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3);
    ReductionConfig cfg;
    cfg.num_episodes = 3;
    cfg.delta = 0.1;
    cfg.b_star = 0.3;
    cfg.t_star = 1.0;

    ProbeLearner* probe = nullptr;
    RngStream rng(4, "env");
    std::unique_ptr<FiniteHorizonLearner> keep;
    run_ssp_reduction(m, probe_factory(&probe), cfg, rng, &keep);

    REQUIRE(probe->trajectories.size() == 3);
    const int H = probe->init_.horizon;
    for (const auto& traj : probe->trajectories) {
        REQUIRE(traj.goal_step.has_value());
        CHECK(*traj.goal_step == 1);
        CHECK(traj.padded == (H > 1));
        for (int h = *traj.goal_step; h < H; ++h) {
            CHECK(traj.states[h + 1] == 1);
            CHECK(traj.actions[h] == 0);
            CHECK(traj.costs[h] == 0.0);
        }
    }
    // observe_step saw only the real steps
    CHECK(probe->steps.size() == 3);
}

TEST_CASE("learner counters ignore padded steps") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3);
    ReductionConfig cfg;
    cfg.num_episodes = 5;
    cfg.delta = 0.1;
    cfg.b_star = 0.3;
    cfg.t_star = 1.0;

    RngStream rng(5, "env");
    std::unique_ptr<FiniteHorizonLearner> learner;
    run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng, &learner);
    auto* u = dynamic_cast<Ulcvi*>(learner.get());
    REQUIRE(u != nullptr);
    CHECK(u->live_counts()(0, 0) == 5.0); // one real step per episode
    CHECK(u->episode() == 5);
}

TEST_CASE("episode cost equals the sum of its interval step costs") {
    const SspMdp m = random_ssp(3, 2, {0.3, 0.6}, {0.1, 0.5}, 2, 42);
    ReductionConfig cfg;
    cfg.num_episodes = 50;
    cfg.delta = 0.1;
    cfg.b_star = 1.0;
    cfg.t_star = 4.0;

    ProbeLearner* probe = nullptr;
    RngStream rng(6, "env");
    std::unique_ptr<FiniteHorizonLearner> keep;
    const RunLog log = run_ssp_reduction(m, probe_factory(&probe), cfg, rng, &keep);
    REQUIRE(log.complete);

    // Terminal costs never enter the episode cost; sampled step costs do,
    // exactly once each.
    std::size_t traj_index = 0;
    for (long k = 0; k < log.completed_episodes; ++k) {
        double expected = 0.0;
        for (int i = 0; i < log.episode_intervals[k]; ++i, ++traj_index)
            for (double c : probe->trajectories[traj_index].costs) expected += c;
        CHECK(log.episode_costs[k] == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(traj_index == probe->trajectories.size());

    long intervals = 0;
    for (int i : log.episode_intervals) intervals += i;
    CHECK(intervals == log.total_intervals);
}

TEST_CASE("identical seeds reproduce the run log exactly") {
    const SspMdp m = random_ssp(4, 2, {0.25, 0.6}, {0.05, 0.5}, 2, 777);
    ReductionConfig cfg;
    cfg.num_episodes = 40;
    cfg.delta = 0.1;
    cfg.b_star = 1.2;
    cfg.t_star = 4.0;

    RngStream r1(99, "env"), r2(99, "env");
    const RunLog a = run_ssp_reduction(m, ulcvi_factory(0.05), cfg, r1);
    const RunLog b = run_ssp_reduction(m, ulcvi_factory(0.05), cfg, r2);
    REQUIRE(a.completed_episodes == b.completed_episodes);
    for (long k = 0; k < a.completed_episodes; ++k) {
        CHECK(a.episode_costs[k] == b.episode_costs[k]);
        CHECK(a.episode_steps[k] == b.episode_steps[k]);
        CHECK(a.episode_intervals[k] == b.episode_intervals[k]);
    }
    CHECK(a.total_intervals == b.total_intervals);
    CHECK(a.total_steps == b.total_steps);
}

TEST_CASE("interval totals grow with the episode budget under a shared seed") {
    const SspMdp m = chain_ssp(2, 1.0, 0.2);
    long prev = 0;
    for (long k : {10L, 20L, 40L}) {
        ReductionConfig cfg;
        cfg.num_episodes = k;
        cfg.delta = 0.1;
        cfg.b_star = 0.4;
        cfg.t_star = 2.0;
        RngStream rng(12, "env");
        const RunLog log = run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng);
        CHECK(log.total_intervals >= prev);
        prev = log.total_intervals;
    }
}

TEST_CASE("step cap marks the run incomplete") {
    const SspMdp m = chain_ssp(3, 0.5, 0.2);
    ReductionConfig cfg;
    cfg.num_episodes = 1000;
    cfg.delta = 0.1;
    cfg.b_star = 1.2;
    cfg.t_star = 6.0;
    cfg.max_total_steps = 50;

    RngStream rng(7, "env");
    const RunLog log = run_ssp_reduction(m, ulcvi_factory(0.05), cfg, rng);
    CHECK_FALSE(log.complete);
    CHECK(log.completed_episodes < 1000);
}

TEST_CASE("invalid configurations are rejected") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3);
    RngStream rng(8, "env");
    ReductionConfig cfg;
    cfg.num_episodes = 1;
    cfg.delta = 0.1;
    cfg.b_star = 0.0; // needs the explicit acknowledgment
    cfg.t_star = 1.0;
    CHECK_THROWS_AS(run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng), std::invalid_argument);
    cfg.allow_zero_b_star = true;
    CHECK_NOTHROW(run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng));
}

TEST_CASE("interval diagnostics evaluate the bound formula") {
    const SspMdp m = chain_ssp(1, 1.0, 0.3);
    ReductionConfig cfg;
    cfg.num_episodes = 100;
    cfg.delta = 0.1;
    cfg.b_star = 0.3;
    cfg.t_star = 1.0;

    RngStream rng(9, "env");
    std::unique_ptr<FiniteHorizonLearner> learner;
    const RunLog log = run_ssp_reduction(m, ulcvi_factory(1.0), cfg, rng, &learner);
    auto* u = dynamic_cast<Ulcvi*>(learner.get());
    REQUIRE(u != nullptr);

    AdmissibilityProfile profile = admissibility_profile(u->params(), 2, 2);
    profile.omega = 32.0; // pin the arithmetic to a hand-checked value
    const auto diag = interval_diagnostics(log, profile, cfg);

    const double sa = 4.0;
    const double expected_bound =
        4.0 * 100 + 4e4 * sa * 32.0 * std::log(100.0 * 1.0 * sa * 32.0 / 0.1);
    CHECK(diag.interval_bound == doctest::Approx(expected_bound).epsilon(1e-12));
    CHECK(diag.total_intervals == 100); // M = K on the immediate-goal instance
    CHECK(diag.within_bound);
    // every interval reaches the goal, so none are bad
    CHECK(diag.bad_intervals == 0);
}
