#pragma once

#include <Eigen/Dense>

namespace rlam::toy {

// Exactly differentiable toy policy: a V x V table of logits, row indexed by
// the previous token. The gradient of log pi(a | prev) with respect to the
// row is onehot(a) - softmax(row), with no temperature anywhere in the
// gradient path.
struct BigramPolicy {
    Eigen::MatrixXd logits;

    explicit BigramPolicy(int vocab = 0)
        : logits(Eigen::MatrixXd::Zero(vocab, vocab)) {}

    int vocab_size() const { return static_cast<int>(logits.rows()); }

    // log softmax of one row
    Eigen::VectorXd row_log_probs(int prev) const;

    // softmax(row / temperature); temperature must be positive
    Eigen::VectorXd row_probs(int prev, double temperature) const;

    // argmax of the row, ties broken toward the lowest token id
    int greedy(int prev) const;
};

// d log softmax(row)[action] / d row = onehot(action) - softmax(row)
Eigen::VectorXd log_prob_grad(const Eigen::VectorXd& row_log_probs, int action);

// Closed-form KL(online(. | state) || reference(. | state)) over the full
// next-token distribution; always >= 0 up to rounding.
double exact_state_kl(const BigramPolicy& online, const BigramPolicy& reference,
                      int state);

// State value table indexed by the last emitted token (the bigram state).
struct TabularValue {
    Eigen::VectorXd v;

    explicit TabularValue(int vocab = 0) : v(Eigen::VectorXd::Zero(vocab)) {}

    double value(int state) const { return v[state]; }
};

}  // namespace rlam::toy
