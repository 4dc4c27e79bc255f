#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace rlam::rl {

// AdamW with decoupled weight decay over one dense parameter block.
// Moment buffers initialize to zero on the first step.
class AdamW {
  public:
    AdamW(double lr, double beta1, double beta2, double eps, double weight_decay)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), decay_(weight_decay) {}

    // One instance drives one parameter block; vectors bind as V x 1.
    void step(Eigen::Ref<Eigen::MatrixXd> param,
              const Eigen::Ref<const Eigen::MatrixXd>& grad);

    std::int64_t steps_taken() const { return t_; }

  private:
    double lr_, beta1_, beta2_, eps_, decay_;
    Eigen::ArrayXXd m_, v_;
    std::int64_t t_ = 0;
};

}  // namespace rlam::rl
