#include "rlam/rl/adamw.hpp"

#include <cmath>
#include <stdexcept>

namespace rlam::rl {

void AdamW::step(Eigen::Ref<Eigen::MatrixXd> param,
                 const Eigen::Ref<const Eigen::MatrixXd>& grad) {
    if (param.rows() != grad.rows() || param.cols() != grad.cols())
        throw std::invalid_argument("gradient shape does not match parameters");
    if (m_.size() == 0) {
        m_ = Eigen::ArrayXXd::Zero(param.rows(), param.cols());
        v_ = Eigen::ArrayXXd::Zero(param.rows(), param.cols());
    } else if (m_.rows() != param.rows() || m_.cols() != param.cols()) {
        throw std::invalid_argument("optimizer bound to a different parameter block");
    }
    ++t_;
    const Eigen::ArrayXXd g = grad.array();
    m_ = beta1_ * m_ + (1.0 - beta1_) * g;
    v_ = beta2_ * v_ + (1.0 - beta2_) * g.square();
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    Eigen::ArrayXXd update = (m_ / c1) / ((v_ / c2).sqrt() + eps_);
    if (decay_ != 0.0) update += decay_ * param.array();
    param.array() -= lr_ * update;
}

}  // namespace rlam::rl
