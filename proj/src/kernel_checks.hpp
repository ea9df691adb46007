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
#ifndef OUTPAINT_SRC_KERNEL_CHECKS_HPP
#define OUTPAINT_SRC_KERNEL_CHECKS_HPP

// Shape checks and weight indexing shared by the OpenMP and the reference
// kernel backends. Internal to src/.

#include <cstddef>
#include <vector>

#include "outpaint/errors.hpp"
#include "outpaint/kernels.hpp"
#include "outpaint/tensor.hpp"

namespace outpaint {
namespace detail {

// Forward weights: [oc][ic][ky][kx].
inline std::size_t conv_widx(const ConvSpec& s, int oc, int ic, int ky,
                             int kx) {
    return ((static_cast<std::size_t>(oc) * s.in_channels + ic) * s.kernel +
            ky) * s.kernel + kx;
}

// Transposed weights: [ic][oc][ky][kx].
inline std::size_t tconv_widx(const ConvSpec& s, int ic, int oc, int ky,
                              int kx) {
    return ((static_cast<std::size_t>(ic) * s.out_channels + oc) * s.kernel +
            ky) * s.kernel + kx;
}

inline void check_input_channels(const Tensor3& in, const ConvSpec& spec) {
    spec.validate();
    if (in.channels != spec.in_channels)
        throw ShapeError("input channels do not match the convolution");
}

inline void check_weights(const std::vector<double>& w, const ConvSpec& spec) {
    spec.validate();
    if (w.size() != spec.weight_count())
        throw ShapeError("weight buffer does not match the convolution");
}

inline void check_conv_args(const Tensor3& in, const std::vector<double>& w,
                            const std::vector<double>& bias,
                            const ConvSpec& spec) {
    check_input_channels(in, spec);
    if (w.size() != spec.weight_count())
        throw ShapeError("weight buffer does not match the convolution");
    if (bias.size() != static_cast<std::size_t>(spec.out_channels))
        throw ShapeError("bias length does not match output channels");
}

inline void check_conv_extent(const ConvSpec& spec, int h, int w) {
    if (spec.conv_extent(h) < 1 || spec.conv_extent(w) < 1)
        throw ShapeError("input too small for this convolution");
}

inline void check_tconv_extent(const ConvSpec& spec, int h, int w) {
    if (spec.tconv_extent(h) < 1 || spec.tconv_extent(w) < 1)
        throw ShapeError("input too small for this transposed convolution");
}

inline void check_grad_shape(const Tensor3& grad_out, int channels, int h,
                             int w) {
    if (grad_out.channels != channels || grad_out.height != h ||
        grad_out.width != w)
        throw ShapeError("output gradient shape mismatch");
}

inline void check_plane(const Tensor3& t) {
    if (t.channels != 1)
        throw ShapeError("expected a single-channel tensor");
}

inline void check_stats(const Tensor3& in, const NormStats& stats) {
    if (stats.mean.size() != static_cast<std::size_t>(in.channels) ||
        stats.inv_std.size() != static_cast<std::size_t>(in.channels))
        throw ShapeError("normalization stats do not match channel count");
}

} // namespace detail
} // namespace outpaint

#endif
