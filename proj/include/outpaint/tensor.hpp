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
#ifndef OUTPAINT_TENSOR_HPP
#define OUTPAINT_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "outpaint/image.hpp"

namespace outpaint {

/// C x H x W tensor, planar row-major (channel planes are contiguous).
/// Unlike ImageTensor the values are unconstrained; this is the working
/// type for network activations, gradients, and filter responses.
struct Tensor3 {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(int c, int h, int w, double fill = 0.0);

    double& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    /// Pointer to the start of one channel plane.
    double* plane(int c) {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
    const double* plane(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor3& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

/// Stacks b's channels after a's. Spatial dims must agree.
Tensor3 concat_channels(const Tensor3& a, const Tensor3& b);

/// Copies `count` channels starting at `from` into a new tensor.
Tensor3 slice_channels(const Tensor3& t, int from, int count);

/// Interleaved HWC image to planar CHW tensor, values copied as-is.
Tensor3 tensor_from_image(const ImageTensor& img);

/// Planar CHW tensor back to an interleaved image. Values are clamped to
/// [0,1] so that downstream image invariants hold; network outputs pass
/// through a sigmoid and are only clamped at the epsilon level.
ImageTensor image_from_tensor(const Tensor3& t);

} // namespace outpaint

#endif
