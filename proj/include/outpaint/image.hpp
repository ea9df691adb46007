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
#ifndef OUTPAINT_IMAGE_HPP
#define OUTPAINT_IMAGE_HPP

#include <cstdint>
#include <vector>

namespace outpaint {

/// H x W x C image with interleaved row-major doubles in [0, 1].
/// Channels is 1 (grayscale) or 3 (RGB). Also used for edge maps,
/// which are single-channel: binary for ground truth, soft for predictions.
struct ImageTensor {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    ImageTensor() = default;
    ImageTensor(int h, int w, int c, double fill = 0.0);

    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t size() const { return data.size(); }

    /// Throws ValueError/ShapeError if the invariants do not hold
    /// (size = h*w*c, every value in [0,1], c in {1,3}).
    void validate() const;

    bool same_shape(const ImageTensor& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

/// H x W map with values in {0, 1}: 1 marks the missing region, 0 background.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int h, int w, std::uint8_t fill = 0);

    std::uint8_t& at(int y, int x) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(int y, int x) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    /// Number of pixels set to 1.
    std::size_t sum() const;

    void validate() const;
};

/// BT.601 luminance: Y = 0.299 R + 0.587 G + 0.114 B. Input must be 3-channel.
ImageTensor to_grayscale(const ImageTensor& img);

/// img * (1 - M) elementwise: keeps background pixels, zeroes the missing
/// region. The mask broadcasts over channels.
ImageTensor apply_mask(const ImageTensor& img, const BinaryMask& m);

/// img * M elementwise: the complement of apply_mask.
ImageTensor apply_mask_complement(const ImageTensor& img, const BinaryMask& m);

/// a * (1-M) + b * M elementwise. Exact in floating point since M is 0/1.
ImageTensor compose_masked(const ImageTensor& a, const ImageTensor& b,
                           const BinaryMask& m);

} // namespace outpaint

#endif
