/*
 * Copyright 2026 The outpaint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef OUTPAINT_KERNELS_HPP
#define OUTPAINT_KERNELS_HPP

#include <vector>

#include "outpaint/tensor.hpp"

// Numeric kernels exist twice with identical signatures and identical
// bit-level results:
//
//   outpaint::kernels    OpenMP production path. Parallel only across
//                        independent output elements; the accumulation
//                        order within each output element is fixed, so
//                        results do not depend on the thread count.
//   outpaint::reference  Plain serial loops written for clarity, kept as
//                        the test oracle and the benchmark baseline.
//
// Both obey one ordering contract: per-output reductions run
// input-channel, then kernel-row, then kernel-column (plain spatial
// reductions run row, then column), out-of-range taps are skipped rather
// than padded, and FMA contraction is disabled project-wide. Under those
// rules the two namespaces agree bitwise; tests/test_kernels.cpp enforces
// that on random inputs, and the gradient entry points are checked against
// finite differences.

namespace outpaint {

/// Geometry of a convolution. Weights for the forward direction are laid
/// out [out_ch][in_ch][ky][kx]; transposed convolutions use
/// [in_ch][out_ch][ky][kx], matching the shapes their gradients swap into.
struct ConvSpec {
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 0;
    int stride = 1;
    int pad = 0;

    std::size_t weight_count() const {
        return static_cast<std::size_t>(in_channels) * out_channels * kernel *
               kernel;
    }
    /// Output extent of a strided convolution over `in` samples.
    int conv_extent(int in) const {
        return (in + 2 * pad - kernel) / stride + 1;
    }
    /// Output extent of the transposed convolution; inverts conv_extent.
    int tconv_extent(int in) const {
        return (in - 1) * stride - 2 * pad + kernel;
    }

    void validate() const;
};

/// Per-channel normalization statistics over one H x W plane.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> inv_std;
};

namespace kernels {

/// out[oc] = bias[oc] + sum_ic corr(in[ic], w[oc][ic]); zero padding.
Tensor3 conv2d_forward(const Tensor3& in, const std::vector<double>& w,
                       const std::vector<double>& bias, const ConvSpec& spec);

/// Gradient of conv2d_forward with respect to its input.
Tensor3 conv2d_backward_input(const Tensor3& grad_out,
                              const std::vector<double>& w,
                              const ConvSpec& spec, int in_h, int in_w);

/// Gradient of conv2d_forward with respect to weights and bias.
void conv2d_backward_params(const Tensor3& grad_out, const Tensor3& in,
                            const ConvSpec& spec, std::vector<double>& grad_w,
                            std::vector<double>& grad_b);

/// Fractionally strided (transposed) convolution; upsamples by spec.stride.
Tensor3 tconv2d_forward(const Tensor3& in, const std::vector<double>& w,
                        const std::vector<double>& bias, const ConvSpec& spec);

Tensor3 tconv2d_backward_input(const Tensor3& grad_out,
                               const std::vector<double>& w,
                               const ConvSpec& spec, int in_h, int in_w);

void tconv2d_backward_params(const Tensor3& grad_out, const Tensor3& in,
                             const ConvSpec& spec, std::vector<double>& grad_w,
                             std::vector<double>& grad_b);

/// Two-pass mean and variance per channel; inv_std = 1/sqrt(var + eps).
NormStats instance_norm_stats(const Tensor3& in, double eps);

Tensor3 instance_norm_forward(const Tensor3& in, const NormStats& stats);

Tensor3 instance_norm_backward(const Tensor3& in, const NormStats& stats,
                               const Tensor3& grad_out);

/// Separable Gaussian with symmetric border reflection, channel by channel.
/// radius < 0 selects ceil(3*sigma).
Tensor3 gaussian_blur(const Tensor3& in, double sigma, int radius);

/// 3x3 Sobel correlation with symmetric border reflection. gx responds to
/// left-to-right intensity increase, gy to top-to-bottom.
void sobel_gradients(const Tensor3& gray, Tensor3& gx, Tensor3& gy);

/// 2x2 average pooling; an odd trailing row or column is dropped.
Tensor3 mean_pool2(const Tensor3& in);

} // namespace kernels

namespace reference {

// Serial twins of outpaint::kernels; see the contract at the top of the file.

Tensor3 conv2d_forward(const Tensor3& in, const std::vector<double>& w,
                       const std::vector<double>& bias, const ConvSpec& spec);
Tensor3 conv2d_backward_input(const Tensor3& grad_out,
                              const std::vector<double>& w,
                              const ConvSpec& spec, int in_h, int in_w);
void conv2d_backward_params(const Tensor3& grad_out, const Tensor3& in,
                            const ConvSpec& spec, std::vector<double>& grad_w,
                            std::vector<double>& grad_b);
Tensor3 tconv2d_forward(const Tensor3& in, const std::vector<double>& w,
                        const std::vector<double>& bias, const ConvSpec& spec);
Tensor3 tconv2d_backward_input(const Tensor3& grad_out,
                               const std::vector<double>& w,
                               const ConvSpec& spec, int in_h, int in_w);
void tconv2d_backward_params(const Tensor3& grad_out, const Tensor3& in,
                             const ConvSpec& spec, std::vector<double>& grad_w,
                             std::vector<double>& grad_b);
NormStats instance_norm_stats(const Tensor3& in, double eps);
Tensor3 instance_norm_forward(const Tensor3& in, const NormStats& stats);
Tensor3 instance_norm_backward(const Tensor3& in, const NormStats& stats,
                               const Tensor3& grad_out);
Tensor3 gaussian_blur(const Tensor3& in, double sigma, int radius);
void sobel_gradients(const Tensor3& gray, Tensor3& gx, Tensor3& gy);
Tensor3 mean_pool2(const Tensor3& in);

} // namespace reference

/// Normalized 1-D Gaussian taps (2*radius+1 values); shared by both
/// backends so the blurs can only differ in loop structure.
std::vector<double> gaussian_taps(double sigma, int radius);

/// Symmetric reflection of a coordinate into [0, n): -1 maps to 0,
/// n maps to n-1. Total size must be at least 1.
int reflect_index(int i, int n);

} // namespace outpaint

#endif
