#pragma once

#include "gridpath/tensor.hpp"

namespace gridpath::ops {

/// 2D convolution over a {C,H,W} tensor with same zero padding, stride 1.
/// kernel is {OC,IC,K,K}, bias {OC}, out {OC,H,W}.
void conv_forward(const Tensor& in, const Tensor& kernel, const Tensor& bias, Tensor& out);

/// Accumulates into dkernel/dbias/din (callers zero them first).
void conv_backward(const Tensor& in, const Tensor& kernel, const Tensor& dout, Tensor& dkernel,
                   Tensor& dbias, Tensor& din);

/// Average pooling by an integer factor. Averaging (rather than max) keeps
/// the op smooth and attenuates per-pixel noise by the window size.
void pool_forward(const Tensor& in, Eigen::Index factor, Tensor& out);

/// Accumulates into din.
void pool_backward(const Tensor& dout, Eigen::Index factor, Tensor& din);

}  // namespace gridpath::ops
