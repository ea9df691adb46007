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
#ifndef OUTPAINT_EDGEMAP_HPP
#define OUTPAINT_EDGEMAP_HPP

#include "outpaint/image.hpp"
#include "outpaint/tensor.hpp"

namespace outpaint {

/// Canny detector settings. Thresholds are ratios of the maximum gradient
/// magnitude in the image, not absolute values, so they transfer across
/// differently scaled inputs.
struct CannyParams {
    double gaussian_sigma = 2.0;
    double low_threshold = 0.1;
    double high_threshold = 0.2;

    /// Requires sigma > 0 and 0 < low <= high <= 1.
    void validate() const;
};

/// Separable Gaussian blur of a single-channel image; kernel radius
/// ceil(3*sigma), normalized taps, symmetric reflection at the borders.
ImageTensor gaussian_smooth(const ImageTensor& gray, double sigma);

/// First-order image derivatives and their polar form.
struct GradientField {
    Tensor3 gx;
    Tensor3 gy;
    Tensor3 magnitude;   // sqrt(gx^2 + gy^2)
    Tensor3 orientation; // atan2(gy, gx), radians in (-pi, pi]
};

/// 3x3 Sobel derivatives of a single-channel image, reflected borders.
GradientField sobel_gradients(const ImageTensor& gray);

/// Classic Canny chain: smooth, Sobel, non-maximum suppression with
/// orientations quantized to {0, 45, 90, 135} degrees, then double-threshold
/// hysteresis with 8-connected linking. Output values are exactly 0 or 1.
ImageTensor canny_edges(const ImageTensor& gray, const CannyParams& params = {});

/// e_gt where the mask is 0, e_pred where it is 1. The training-time join
/// of known edges with generated ones.
ImageTensor composite_edge_map(const ImageTensor& e_gt,
                               const ImageTensor& e_pred, const BinaryMask& m);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Pixel-exact F1 between two edge maps, both binarized at `threshold`
/// (value >= threshold counts as edge). Empty-against-empty scores 1,
/// empty-against-nonempty scores 0.
F1Score edge_f1(const ImageTensor& pred, const ImageTensor& gt,
                double threshold = 0.5);

} // namespace outpaint

#endif
