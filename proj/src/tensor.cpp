#include "gridpath/tensor.hpp"

#include <stdexcept>

namespace gridpath {

namespace {

Eigen::Index product(const std::vector<Eigen::Index>& dims) {
    Eigen::Index n = 1;
    for (const Eigen::Index d : dims) {
        if (d < 1) throw std::invalid_argument("Tensor: extents must be >= 1");
        n *= d;
    }
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<Eigen::Index> extents) : dims(std::move(extents)) {
    data = Eigen::ArrayXd::Zero(product(dims));
}

Tensor Tensor::zeros(std::vector<Eigen::Index> extents) { return Tensor(std::move(extents)); }

Tensor& ModelParams::find(const std::string& name) {
    for (auto& [n, t] : tensors) {
        if (n == name) return t;
    }
    throw std::out_of_range("ModelParams: no tensor named " + name);
}

const Tensor& ModelParams::find(const std::string& name) const {
    for (const auto& [n, t] : tensors) {
        if (n == name) return t;
    }
    throw std::out_of_range("ModelParams: no tensor named " + name);
}

bool ModelParams::has(const std::string& name) const {
    for (const auto& [n, t] : tensors) {
        if (n == name) return true;
    }
    return false;
}

double ModelParams::l1_norm() const {
    double total = 0.0;
    for (const auto& [n, t] : tensors) total += t.data.abs().sum();
    return total;
}

ModelParams ModelParams::zeros_like() const {
    ModelParams out;
    out.tensors.reserve(tensors.size());
    for (const auto& [n, t] : tensors) {
        Tensor z(t.dims);
        out.tensors.emplace_back(n, std::move(z));
    }
    return out;
}

}  // namespace gridpath
