#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssp/rng.hpp"

namespace ssp {

/// Distribution of the per-step cost around its stored mean c(s,a).
///
/// Deterministic returns the mean itself. Bernoulli returns 1 with
/// probability c(s,a) and 0 otherwise. BoundedUniform returns a uniform
/// draw on a window centred at the mean and clipped so samples stay in
/// [0,1] with the mean preserved.
struct CostModel {
    enum class Kind { Deterministic, Bernoulli, BoundedUniform };

    Kind kind = Kind::Bernoulli;
    double half_width = 0.0; // BoundedUniform only
};

struct Violation {
    enum class Code {
        EmptyStateOrActionSet,
        BadShape,
        NonStochasticRow,
        CostOutOfRange,
        BadInitialDist,
        GoalUnreachable,
        BadCostModel,
    };

    Code code;
    int state = -1;
    int action = -1;
    double detail = 0.0;
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Tabular stochastic-shortest-path instance.
///
/// States 0..num_states-1 are interior; the goal is the virtual index
/// num_states. It never appears as a row of `transitions` or `mean_costs`:
/// transitions[a] has shape num_states x (num_states+1) with the last
/// column holding the probability of moving to the goal. Instances are
/// immutable after validation and safe to share across concurrent runs.
struct SspMdp {
    int num_states = 0;  // |S|, excludes the goal
    int num_actions = 0; // |A|

    std::vector<Eigen::MatrixXd> transitions; // per action: |S| x (|S|+1)
    Eigen::MatrixXd mean_costs;               // |S| x |A|, entries in [0,1]
    CostModel cost_model;
    Eigen::VectorXd initial_dist;             // over interior states

    int goal_index() const { return num_states; }
};

/// Row-sum tolerance: rows off by more than this are hard errors, rows
/// within it are renormalized.
inline constexpr double kRowSumTolerance = 1e-12;

/// Non-throwing structural check; returns the full list of violations.
std::vector<Violation> check_mdp(const SspMdp& raw);

/// Validates and canonicalizes an instance (rows renormalized within
/// tolerance). Throws ValidationError carrying the violation list.
SspMdp validate_mdp(SspMdp raw);

/// Draws the next state from P(.|s,a) by inverse CDF over the stored row
/// with a single uniform draw. Returns goal_index() for goal arrival.
int sample_transition(const SspMdp& mdp, int s, int a, RngStream& rng);

/// Draws a step cost in [0,1] from the cost model with mean c(s,a).
double sample_cost(const SspMdp& mdp, int s, int a, RngStream& rng);

/// Draws the episode start state from initial_dist.
int sample_initial_state(const SspMdp& mdp, RngStream& rng);

/// Instance file format: JSON with keys `num_states`, `num_actions`,
/// `transitions`, `mean_costs`, `cost_model`, `initial_dist`. Instances
/// round-trip bit-exactly.
std::string instance_to_json(const SspMdp& mdp);
SspMdp instance_from_json(const std::string& text);
void save_instance(const SspMdp& mdp, const std::filesystem::path& path);
SspMdp load_instance(const std::filesystem::path& path);

} // namespace ssp
