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
#include "outpaint/edgemap.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "outpaint/errors.hpp"
#include "outpaint/kernels.hpp"

namespace outpaint {

void CannyParams::validate() const {
    if (!(gaussian_sigma > 0.0))
        throw ValueError("canny sigma must be positive");
    if (!(low_threshold > 0.0) || low_threshold > high_threshold ||
        high_threshold > 1.0)
        throw ValueError("canny thresholds must satisfy 0 < low <= high <= 1");
}

ImageTensor gaussian_smooth(const ImageTensor& gray, double sigma) {
    if (gray.channels != 1)
        throw ShapeError("gaussian_smooth expects a single-channel image");
    // image_from_tensor clamps; blurring [0,1] data stays in [0,1] up to
    // rounding, so the clamp only strips float noise at the boundaries.
    return image_from_tensor(
        kernels::gaussian_blur(tensor_from_image(gray), sigma, -1));
}

GradientField sobel_gradients(const ImageTensor& gray) {
    if (gray.channels != 1)
        throw ShapeError("sobel_gradients expects a single-channel image");
    GradientField f;
    kernels::sobel_gradients(tensor_from_image(gray), f.gx, f.gy);
    f.magnitude = Tensor3(1, gray.height, gray.width);
    f.orientation = Tensor3(1, gray.height, gray.width);
    for (std::size_t i = 0; i < f.magnitude.data.size(); ++i) {
        f.magnitude.data[i] = std::hypot(f.gx.data[i], f.gy.data[i]);
        f.orientation.data[i] = std::atan2(f.gy.data[i], f.gx.data[i]);
    }
    return f;
}

namespace {

// Neighbor step for each quantized gradient direction; y grows downward.
// Sector 0 is east-west, 1 is the down-right diagonal, 2 is north-south,
// 3 is the down-left diagonal.
std::pair<int, int> sector_step(double orientation_rad) {
    double deg = orientation_rad * (180.0 / 3.14159265358979323846);
    if (deg < 0.0) deg += 180.0;
    if (deg < 22.5 || deg >= 157.5) return {1, 0};
    if (deg < 67.5) return {1, 1};
    if (deg < 112.5) return {0, 1};
    return {-1, 1};
}

double mag_at(const Tensor3& mag, int y, int x) {
    if (y < 0 || y >= mag.height || x < 0 || x >= mag.width) return 0.0;
    return mag.at(0, y, x);
}

// Thin ridges to single-pixel width. On an exact two-pixel magnitude tie
// along the gradient direction the asymmetric comparison (>= forward,
// > backward) keeps exactly one of the pair instead of both or neither.
Tensor3 non_max_suppress(const Tensor3& mag, const Tensor3& orient) {
    Tensor3 out(1, mag.height, mag.width);
    for (int y = 0; y < mag.height; ++y)
        for (int x = 0; x < mag.width; ++x) {
            const double m = mag.at(0, y, x);
            if (m <= 0.0) continue;
            const auto [dx, dy] = sector_step(orient.at(0, y, x));
            if (m >= mag_at(mag, y + dy, x + dx) &&
                m > mag_at(mag, y - dy, x - dx))
                out.at(0, y, x) = m;
        }
    return out;
}

} // namespace

ImageTensor canny_edges(const ImageTensor& gray, const CannyParams& params) {
    params.validate();
    GradientField grad = sobel_gradients(gaussian_smooth(gray, params.gaussian_sigma));

    double max_mag = 0.0;
    for (double v : grad.magnitude.data)
        if (v > max_mag) max_mag = v;

    ImageTensor edges(gray.height, gray.width, 1);
    if (max_mag <= 0.0) return edges;

    const Tensor3 ridge = non_max_suppress(grad.magnitude, grad.orientation);
    const double low = params.low_threshold * max_mag;
    const double high = params.high_threshold * max_mag;

    // Hysteresis: strong pixels seed a flood fill that claims weak pixels
    // through 8-connected chains.
    const int h = gray.height;
    const int w = gray.width;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (ridge.at(0, y, x) >= high) {
                edges.at(y, x, 0) = 1.0;
                stack.emplace_back(y, x);
            }
    while (!stack.empty()) {
        const auto [y, x] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int ny = y + dy;
                const int nx = x + dx;
                if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                if (edges.at(ny, nx, 0) != 0.0) continue;
                if (ridge.at(0, ny, nx) >= low) {
                    edges.at(ny, nx, 0) = 1.0;
                    stack.emplace_back(ny, nx);
                }
            }
    }
    return edges;
}

ImageTensor composite_edge_map(const ImageTensor& e_gt,
                               const ImageTensor& e_pred, const BinaryMask& m) {
    return compose_masked(e_gt, e_pred, m);
}

F1Score edge_f1(const ImageTensor& pred, const ImageTensor& gt,
                double threshold) {
    if (!pred.same_shape(gt))
        throw ShapeError("edge maps must have the same shape");

    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const bool p = pred.data[i] >= threshold;
        const bool t = gt.data[i] >= threshold;
        if (p && t) ++tp;
        else if (p) ++fp;
        else if (t) ++fn;
    }

    F1Score score;
    if (tp + fp + fn == 0) {
        // Both maps empty: a perfect (if vacuous) match.
        score.precision = score.recall = score.f1 = 1.0;
        return score;
    }
    score.precision =
        (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    score.recall =
        (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    const double denom = score.precision + score.recall;
    score.f1 = denom > 0.0 ? 2.0 * score.precision * score.recall / denom : 0.0;
    return score;
}

} // namespace outpaint
