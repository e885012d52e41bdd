#include "ssp/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssp {

double LowerBoundSpec::effective_epsilon() const {
    if (epsilon) return *epsilon;
    if (num_episodes < 1)
        throw SpecViolationError("lower_bound_instance: num_episodes required for default epsilon");
    return 0.125 * std::sqrt(b_star * num_actions * num_states /
                             static_cast<double>(num_episodes));
}

SspMdp lower_bound_instance(const LowerBoundSpec& spec, std::uint64_t seed) {
    if (spec.num_states < 2) throw SpecViolationError("lower_bound_instance: need |S| >= 2");
    if (spec.num_actions < 2) throw SpecViolationError("lower_bound_instance: need |A| >= 2");
    if (!(spec.b_star > 0.0 && spec.b_star <= 0.5))
        throw SpecViolationError("lower_bound_instance: b_star must lie in (0, 1/2]");
    const double eps = spec.effective_epsilon();
    if (!(eps > 0.0 && eps < 0.125))
        throw SpecViolationError("lower_bound_instance: epsilon must lie in (0, 1/8)");
    if (spec.b_star + eps > 1.0)
        throw SpecViolationError("lower_bound_instance: b_star + epsilon exceeds 1");

    RngStream rng(seed, "env/lower_bound");
    const int S = spec.num_states;
    const int A = spec.num_actions;

    SspMdp m;
    m.num_states = S;
    m.num_actions = A;
    m.transitions.assign(A, Eigen::MatrixXd::Zero(S, S + 1));
    for (int a = 0; a < A; ++a) m.transitions[a].col(S).setOnes();
    m.mean_costs = Eigen::MatrixXd::Constant(S, A, spec.b_star + eps);
    for (int s = 0; s < S; ++s) m.mean_costs(s, rng.uniform_int(A)) = spec.b_star;
    m.cost_model.kind = CostModel::Kind::Bernoulli;
    m.initial_dist = Eigen::VectorXd::Constant(S, 1.0 / S);
    return validate_mdp(std::move(m));
}

SspMdp random_ssp(int num_states, int num_actions,
                  std::pair<double, double> goal_prob_range,
                  std::pair<double, double> cost_range, int connectivity,
                  std::uint64_t seed) {
    if (num_states < 1 || num_actions < 1)
        throw SpecViolationError("random_ssp: need at least one state and one action");
    if (!(goal_prob_range.first > 0.0) || goal_prob_range.second > 1.0 ||
        goal_prob_range.first > goal_prob_range.second)
        throw SpecViolationError("random_ssp: goal probability range must sit inside (0,1]");
    if (cost_range.first < 0.0 || cost_range.second > 1.0 ||
        cost_range.first > cost_range.second)
        throw SpecViolationError("random_ssp: cost range must sit inside [0,1]");
    if (connectivity < 0) throw SpecViolationError("random_ssp: connectivity must be nonnegative");

    RngStream rng(seed, "env/random_ssp");
    const int S = num_states;
    const int A = num_actions;
    const int fanout = std::min(connectivity, S);

    SspMdp m;
    m.num_states = S;
    m.num_actions = A;
    m.transitions.assign(A, Eigen::MatrixXd::Zero(S, S + 1));
    m.mean_costs.resize(S, A);

    std::vector<int> pool(S);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            const double pg = goal_prob_range.first +
                              rng.uniform() * (goal_prob_range.second - goal_prob_range.first);
            std::iota(pool.begin(), pool.end(), 0);
            // Partial Fisher-Yates for the support set.
            for (int i = 0; i < fanout; ++i)
                std::swap(pool[i], pool[i + rng.uniform_int(S - i)]);

            double total = 0.0;
            std::vector<double> weights(fanout);
            for (int i = 0; i < fanout; ++i) {
                weights[i] = rng.uniform() + 1e-9;
                total += weights[i];
            }
            auto row = m.transitions[a].row(s);
            for (int i = 0; i < fanout && total > 0.0; ++i)
                row(pool[i]) = (1.0 - pg) * weights[i] / total;
            row(S) = 1.0 - row.head(S).sum(); // goal takes the exact remainder

            m.mean_costs(s, a) =
                cost_range.first + rng.uniform() * (cost_range.second - cost_range.first);
        }
    }
    m.cost_model.kind = CostModel::Kind::Bernoulli;
    m.initial_dist = Eigen::VectorXd::Zero(S);
    m.initial_dist(0) = 1.0;
    return validate_mdp(std::move(m));
}

SspMdp chain_ssp(int length, double forward_prob, double step_cost) {
    if (length < 1) throw SpecViolationError("chain_ssp: length must be at least 1");
    if (!(forward_prob > 0.0 && forward_prob <= 1.0))
        throw SpecViolationError("chain_ssp: forward probability must lie in (0,1]");
    if (step_cost < 0.0 || step_cost > 1.0)
        throw SpecViolationError("chain_ssp: step cost must lie in [0,1]");

    const int S = length;
    SspMdp m;
    m.num_states = S;
    m.num_actions = 1;
    m.transitions.assign(1, Eigen::MatrixXd::Zero(S, S + 1));
    for (int s = 0; s < S; ++s) {
        m.transitions[0](s, s) = 1.0 - forward_prob;
        m.transitions[0](s, s + 1) = forward_prob; // state S-1 advances to the goal
    }
    m.mean_costs = Eigen::MatrixXd::Constant(S, 1, step_cost);
    m.cost_model.kind = CostModel::Kind::Deterministic;
    m.initial_dist = Eigen::VectorXd::Zero(S);
    m.initial_dist(0) = 1.0;
    return validate_mdp(std::move(m));
}

SspMdp make_instance(const std::string& name, const nlohmann::json& params,
                     std::uint64_t default_seed) {
    const std::uint64_t seed = params.value("seed", default_seed);
    if (name == "lower_bound") {
        LowerBoundSpec spec;
        spec.num_states = params.value("num_states", 2);
        spec.num_actions = params.value("num_actions", 2);
        spec.b_star = params.value("b_star", 0.25);
        spec.num_episodes = params.value("k", 0L);
        if (params.contains("epsilon")) spec.epsilon = params.at("epsilon").get<double>();
        return lower_bound_instance(spec, seed);
    }
    if (name == "random") {
        auto range = [&](const char* key, double lo, double hi) {
            if (!params.contains(key)) return std::pair<double, double>{lo, hi};
            const auto& arr = params.at(key);
            return std::pair<double, double>{arr.at(0).get<double>(), arr.at(1).get<double>()};
        };
        return random_ssp(params.value("num_states", 5), params.value("num_actions", 2),
                          range("goal_prob", 0.2, 0.6), range("cost", 0.05, 0.4),
                          params.value("connectivity", 3), seed);
    }
    if (name == "chain") {
        return chain_ssp(params.value("length", 3), params.value("forward_prob", 1.0),
                         params.value("step_cost", 0.1));
    }
    throw SpecViolationError("unknown generator: " + name);
}

} // namespace ssp
