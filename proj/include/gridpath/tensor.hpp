#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gridpath {

/// Dense row-major tensor of doubles. dims are outer-to-inner extents;
/// data is the flat row-major buffer.
struct Tensor {
    std::vector<Eigen::Index> dims;
    Eigen::ArrayXd data;

    Tensor() = default;
    explicit Tensor(std::vector<Eigen::Index> extents);

    static Tensor zeros(std::vector<Eigen::Index> extents);

    Eigen::Index numel() const { return data.size(); }
    Eigen::Index rank() const { return static_cast<Eigen::Index>(dims.size()); }

    // Flat accessors for the common ranks; callers keep their own strides
    // for hot loops.
    double& at(Eigen::Index i) { return data[i]; }
    double at(Eigen::Index i) const { return data[i]; }
    double& at3(Eigen::Index c, Eigen::Index y, Eigen::Index x) {
        return data[(c * dims[1] + y) * dims[2] + x];
    }
    double at3(Eigen::Index c, Eigen::Index y, Eigen::Index x) const {
        return data[(c * dims[1] + y) * dims[2] + x];
    }

    bool same_shape(const Tensor& other) const { return dims == other.dims; }
};

/// Ordered collection of named parameter tensors. Order is the serialization
/// and update order; version increments on every in-place update so stale
/// backprop tapes can be detected.
struct ModelParams {
    std::vector<std::pair<std::string, Tensor>> tensors;
    std::uint64_t version = 0;

    Tensor& find(const std::string& name);
    const Tensor& find(const std::string& name) const;
    bool has(const std::string& name) const;

    /// Sum of |w| over every parameter entry.
    double l1_norm() const;

    /// Grads-shaped zero copy of this parameter set.
    ModelParams zeros_like() const;
};

}  // namespace gridpath
