#include "rlam/toy/bigram_policy.hpp"

#include <cmath>
#include <stdexcept>

namespace rlam::toy {
namespace {

void check_state(const BigramPolicy& p, int prev) {
    if (prev < 0 || prev >= p.vocab_size())
        throw std::out_of_range("state token out of vocabulary");
}

}  // namespace

Eigen::VectorXd BigramPolicy::row_log_probs(int prev) const {
    check_state(*this, prev);
    Eigen::VectorXd row = logits.row(prev);
    double m = row.maxCoeff();
    Eigen::VectorXd shifted = row.array() - m;
    double lse = std::log(shifted.array().exp().sum());
    return shifted.array() - lse;
}

Eigen::VectorXd BigramPolicy::row_probs(int prev, double temperature) const {
    check_state(*this, prev);
    if (!(temperature > 0.0))
        throw std::invalid_argument("sampling temperature must be positive");
    Eigen::VectorXd row = logits.row(prev) / temperature;
    double m = row.maxCoeff();
    Eigen::VectorXd e = (row.array() - m).exp();
    return e / e.sum();
}

int BigramPolicy::greedy(int prev) const {
    check_state(*this, prev);
    Eigen::Index best = 0;
    double best_val = logits(prev, 0);
    for (Eigen::Index a = 1; a < vocab_size(); ++a) {
        if (logits(prev, a) > best_val) {
            best_val = logits(prev, a);
            best = a;
        }
    }
    return static_cast<int>(best);
}

Eigen::VectorXd log_prob_grad(const Eigen::VectorXd& row_log_probs, int action) {
    if (action < 0 || action >= row_log_probs.size())
        throw std::out_of_range("action out of vocabulary");
    Eigen::VectorXd grad = -row_log_probs.array().exp();
    grad[action] += 1.0;
    return grad;
}

double exact_state_kl(const BigramPolicy& online, const BigramPolicy& reference,
                      int state) {
    if (online.vocab_size() != reference.vocab_size())
        throw std::invalid_argument("policies use different vocabularies");
    const Eigen::VectorXd lp = online.row_log_probs(state);
    const Eigen::VectorXd lq = reference.row_log_probs(state);
    return (lp.array().exp() * (lp - lq).array()).sum();
}

}  // namespace rlam::toy
