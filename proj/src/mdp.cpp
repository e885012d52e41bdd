#include "ssp/mdp.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace ssp {

namespace {

using nlohmann::json;

std::string violation_text(const Violation& v) {
    std::ostringstream os;
    switch (v.code) {
    case Violation::Code::EmptyStateOrActionSet: os << "EmptyStateOrActionSet"; break;
    case Violation::Code::BadShape: os << "BadShape"; break;
    case Violation::Code::NonStochasticRow: os << "NonStochasticRow"; break;
    case Violation::Code::CostOutOfRange: os << "CostOutOfRange"; break;
    case Violation::Code::BadInitialDist: os << "BadInitialDist"; break;
    case Violation::Code::GoalUnreachable: os << "GoalUnreachable"; break;
    case Violation::Code::BadCostModel: os << "BadCostModel"; break;
    }
    if (v.state >= 0) os << " state=" << v.state;
    if (v.action >= 0) os << " action=" << v.action;
    if (!v.message.empty()) os << " (" << v.message << ")";
    return os.str();
}

std::string summary_text(const std::vector<Violation>& vs) {
    std::ostringstream os;
    os << "invalid SSP instance: " << vs.size() << " violation(s)";
    for (const auto& v : vs) os << "; " << violation_text(v);
    return os.str();
}

// States from which the goal is unreachable in the support graph (any action).
std::vector<int> goal_unreachable_states(const SspMdp& m) {
    const int S = m.num_states;
    std::vector<char> reaches(S, 0);
    std::deque<int> queue;
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < m.num_actions && !reaches[s]; ++a) {
            if (m.transitions[a](s, S) > 0.0) {
                reaches[s] = 1;
                queue.push_back(s);
            }
        }
    }
    while (!queue.empty()) {
        const int t = queue.front();
        queue.pop_front();
        for (int s = 0; s < S; ++s) {
            if (reaches[s]) continue;
            for (int a = 0; a < m.num_actions; ++a) {
                if (m.transitions[a](s, t) > 0.0) {
                    reaches[s] = 1;
                    queue.push_back(s);
                    break;
                }
            }
        }
    }
    std::vector<int> bad;
    for (int s = 0; s < S; ++s)
        if (!reaches[s]) bad.push_back(s);
    return bad;
}

json cost_model_to_json(const CostModel& cm) {
    json j;
    switch (cm.kind) {
    case CostModel::Kind::Deterministic: j["kind"] = "deterministic"; break;
    case CostModel::Kind::Bernoulli: j["kind"] = "bernoulli"; break;
    case CostModel::Kind::BoundedUniform:
        j["kind"] = "bounded_uniform";
        j["half_width"] = cm.half_width;
        break;
    }
    return j;
}

CostModel cost_model_from_json(const json& j) {
    CostModel cm;
    if (j.is_null()) return cm; // default Bernoulli
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "deterministic") {
        cm.kind = CostModel::Kind::Deterministic;
    } else if (kind == "bernoulli") {
        cm.kind = CostModel::Kind::Bernoulli;
    } else if (kind == "bounded_uniform") {
        cm.kind = CostModel::Kind::BoundedUniform;
        cm.half_width = j.value("half_width", 0.0);
    } else {
        throw std::invalid_argument("unknown cost model kind: " + kind);
    }
    return cm;
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(summary_text(violations)), violations_(std::move(violations)) {}

std::vector<Violation> check_mdp(const SspMdp& m) {
    std::vector<Violation> out;
    if (m.num_states < 1 || m.num_actions < 1) {
        out.push_back({Violation::Code::EmptyStateOrActionSet, -1, -1, 0.0,
                       "num_states and num_actions must be positive"});
        return out;
    }
    const int S = m.num_states;
    const int A = m.num_actions;

    if (static_cast<int>(m.transitions.size()) != A) {
        out.push_back({Violation::Code::BadShape, -1, -1, 0.0, "one transition matrix per action required"});
        return out;
    }
    for (int a = 0; a < A; ++a) {
        if (m.transitions[a].rows() != S || m.transitions[a].cols() != S + 1) {
            out.push_back({Violation::Code::BadShape, -1, a, 0.0, "transition matrix must be |S| x (|S|+1)"});
            return out;
        }
    }
    if (m.mean_costs.rows() != S || m.mean_costs.cols() != A) {
        out.push_back({Violation::Code::BadShape, -1, -1, 0.0, "mean_costs must be |S| x |A|"});
        return out;
    }
    if (m.initial_dist.size() != S) {
        out.push_back({Violation::Code::BadShape, -1, -1, 0.0, "initial_dist must have |S| entries"});
        return out;
    }

    for (int a = 0; a < A; ++a) {
        for (int s = 0; s < S; ++s) {
            const auto row = m.transitions[a].row(s);
            const double lo = row.minCoeff();
            const double sum = row.sum();
            if (lo < 0.0 || !std::isfinite(sum) || std::abs(sum - 1.0) > kRowSumTolerance) {
                out.push_back({Violation::Code::NonStochasticRow, s, a, sum,
                               lo < 0.0 ? "negative entry" : "row sum outside tolerance"});
            }
        }
    }
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            const double c = m.mean_costs(s, a);
            if (!(c >= 0.0 && c <= 1.0)) {
                out.push_back({Violation::Code::CostOutOfRange, s, a, c, "mean cost outside [0,1]"});
            }
        }
    }
    {
        const double lo = m.initial_dist.minCoeff();
        const double sum = m.initial_dist.sum();
        if (lo < 0.0 || !std::isfinite(sum) || std::abs(sum - 1.0) > kRowSumTolerance) {
            out.push_back({Violation::Code::BadInitialDist, -1, -1, sum, "initial distribution not stochastic"});
        }
    }
    if (m.cost_model.kind == CostModel::Kind::BoundedUniform && m.cost_model.half_width < 0.0) {
        out.push_back({Violation::Code::BadCostModel, -1, -1, m.cost_model.half_width,
                       "half_width must be nonnegative"});
    }

    // Reachability only meaningful once the rows are stochastic.
    if (out.empty()) {
        for (int s : goal_unreachable_states(m)) {
            out.push_back({Violation::Code::GoalUnreachable, s, -1, 0.0, "no path to goal in support graph"});
        }
    }
    return out;
}

SspMdp validate_mdp(SspMdp raw) {
    auto violations = check_mdp(raw);
    if (!violations.empty()) throw ValidationError(std::move(violations));

    // Renormalize rows that are within tolerance but not already exact,
    // so validation is idempotent.
    auto renorm = [](auto&& row) {
        const double sum = row.sum();
        if (std::abs(sum - 1.0) > 1e-15) row /= sum;
    };
    for (int a = 0; a < raw.num_actions; ++a)
        for (int s = 0; s < raw.num_states; ++s) renorm(raw.transitions[a].row(s));
    renorm(raw.initial_dist);
    return raw;
}

namespace {

int sample_index(const Eigen::Ref<const Eigen::RowVectorXd>& row, RngStream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < row.size(); ++i) {
        if (row(i) <= 0.0) continue;
        last_positive = i;
        acc += row(i);
        if (u < acc) return i;
    }
    return last_positive; // u landed in rounding slack at the top
}

} // namespace

int sample_transition(const SspMdp& mdp, int s, int a, RngStream& rng) {
    if (s < 0 || s >= mdp.num_states || a < 0 || a >= mdp.num_actions)
        throw std::out_of_range("sample_transition: state/action out of range");
    return sample_index(mdp.transitions[a].row(s), rng);
}

double sample_cost(const SspMdp& mdp, int s, int a, RngStream& rng) {
    if (s < 0 || s >= mdp.num_states || a < 0 || a >= mdp.num_actions)
        throw std::out_of_range("sample_cost: state/action out of range");
    const double mean = mdp.mean_costs(s, a);
    switch (mdp.cost_model.kind) {
    case CostModel::Kind::Deterministic:
        return mean;
    case CostModel::Kind::Bernoulli:
        return rng.uniform() < mean ? 1.0 : 0.0;
    case CostModel::Kind::BoundedUniform: {
        const double w = std::min({mdp.cost_model.half_width, mean, 1.0 - mean});
        return mean + (2.0 * rng.uniform() - 1.0) * w;
    }
    }
    return mean;
}

int sample_initial_state(const SspMdp& mdp, RngStream& rng) {
    return sample_index(mdp.initial_dist.transpose(), rng);
}

std::string instance_to_json(const SspMdp& m) {
    json j;
    j["num_states"] = m.num_states;
    j["num_actions"] = m.num_actions;
    json trans = json::array();
    for (int a = 0; a < m.num_actions; ++a) {
        json rows = json::array();
        for (int s = 0; s < m.num_states; ++s) {
            json row = json::array();
            for (int t = 0; t <= m.num_states; ++t) row.push_back(m.transitions[a](s, t));
            rows.push_back(std::move(row));
        }
        trans.push_back(std::move(rows));
    }
    j["transitions"] = std::move(trans);
    json costs = json::array();
    for (int s = 0; s < m.num_states; ++s) {
        json row = json::array();
        for (int a = 0; a < m.num_actions; ++a) row.push_back(m.mean_costs(s, a));
        costs.push_back(std::move(row));
    }
    j["mean_costs"] = std::move(costs);
    j["cost_model"] = cost_model_to_json(m.cost_model);
    json init = json::array();
    for (int s = 0; s < m.num_states; ++s) init.push_back(m.initial_dist(s));
    j["initial_dist"] = std::move(init);
    return j.dump(2) + "\n";
}

SspMdp instance_from_json(const std::string& text) {
    const json j = json::parse(text);
    SspMdp m;
    m.num_states = j.at("num_states").get<int>();
    m.num_actions = j.at("num_actions").get<int>();
    if (m.num_states < 1 || m.num_actions < 1)
        throw ValidationError({{Violation::Code::EmptyStateOrActionSet, -1, -1, 0.0, "empty instance"}});

    const auto& trans = j.at("transitions");
    m.transitions.assign(m.num_actions, Eigen::MatrixXd::Zero(m.num_states, m.num_states + 1));
    for (int a = 0; a < m.num_actions; ++a)
        for (int s = 0; s < m.num_states; ++s)
            for (int t = 0; t <= m.num_states; ++t)
                m.transitions[a](s, t) = trans.at(a).at(s).at(t).get<double>();

    const auto& costs = j.at("mean_costs");
    m.mean_costs.resize(m.num_states, m.num_actions);
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions; ++a) m.mean_costs(s, a) = costs.at(s).at(a).get<double>();

    m.cost_model = cost_model_from_json(j.contains("cost_model") ? j.at("cost_model") : json());

    const auto& init = j.at("initial_dist");
    m.initial_dist.resize(m.num_states);
    for (int s = 0; s < m.num_states; ++s) m.initial_dist(s) = init.at(s).get<double>();
    return m;
}

void save_instance(const SspMdp& mdp, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << instance_to_json(mdp);
}

SspMdp load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open instance file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

} // namespace ssp
