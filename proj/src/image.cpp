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
#include "outpaint/image.hpp"

#include <cstddef>

#include "outpaint/errors.hpp"

namespace outpaint {

namespace {

// Validates before the data vector is sized, so bad dimensions surface as
// ValueError instead of a length_error from an overflowed size_t.
std::size_t checked_size(int h, int w, int c) {
    if (h < 1 || w < 1) throw ValueError("image dimensions must be positive");
    if (c != 1 && c != 3) throw ValueError("channel count must be 1 or 3");
    return static_cast<std::size_t>(h) * w * c;
}

std::size_t checked_mask_size(int h, int w, std::uint8_t fill) {
    if (h < 1 || w < 1) throw ValueError("mask dimensions must be positive");
    if (fill > 1) throw ValueError("mask values must be 0 or 1");
    return static_cast<std::size_t>(h) * w;
}

} // namespace

ImageTensor::ImageTensor(int h, int w, int c, double fill)
    : height(h), width(w), channels(c), data(checked_size(h, w, c), fill) {}

void ImageTensor::validate() const {
    if (height < 1 || width < 1)
        throw ValueError("image dimensions must be positive");
    if (channels != 1 && channels != 3)
        throw ValueError("channel count must be 1 or 3");
    if (data.size() != static_cast<std::size_t>(height) * width * channels)
        throw ShapeError("image data length does not match height*width*channels");
    for (double v : data)
        if (!(v >= 0.0 && v <= 1.0))
            throw ValueError("image intensity outside [0,1]");
}

BinaryMask::BinaryMask(int h, int w, std::uint8_t fill)
    : height(h), width(w), data(checked_mask_size(h, w, fill), fill) {}

std::size_t BinaryMask::sum() const {
    std::size_t s = 0;
    for (std::uint8_t v : data) s += v;
    return s;
}

void BinaryMask::validate() const {
    if (height < 1 || width < 1)
        throw ValueError("mask dimensions must be positive");
    if (data.size() != static_cast<std::size_t>(height) * width)
        throw ShapeError("mask data length does not match height*width");
    for (std::uint8_t v : data)
        if (v > 1) throw ValueError("mask values must be 0 or 1");
}

static void require_spatial_match(const ImageTensor& img, const BinaryMask& m) {
    if (img.height != m.height || img.width != m.width)
        throw ShapeError("mask and image spatial shapes differ");
}

ImageTensor to_grayscale(const ImageTensor& img) {
    if (img.channels != 3)
        throw ShapeError("to_grayscale expects a 3-channel image");
    ImageTensor out(img.height, img.width, 1);
    const std::size_t n = static_cast<std::size_t>(img.height) * img.width;
    for (std::size_t i = 0; i < n; ++i) {
        const double* px = &img.data[i * 3];
        out.data[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    }
    return out;
}

// M is exactly 0 or 1, so masking is a select; this keeps the partition
// identity img*(1-M) + img*M == img bit-exact.
ImageTensor apply_mask(const ImageTensor& img, const BinaryMask& m) {
    require_spatial_match(img, m);
    ImageTensor out = img;
    const int c = img.channels;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (m.data[i])
            for (int k = 0; k < c; ++k) out.data[i * c + k] = 0.0;
    return out;
}

ImageTensor apply_mask_complement(const ImageTensor& img, const BinaryMask& m) {
    require_spatial_match(img, m);
    ImageTensor out = img;
    const int c = img.channels;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (!m.data[i])
            for (int k = 0; k < c; ++k) out.data[i * c + k] = 0.0;
    return out;
}

ImageTensor compose_masked(const ImageTensor& a, const ImageTensor& b,
                           const BinaryMask& m) {
    if (!a.same_shape(b)) throw ShapeError("compose_masked shapes differ");
    require_spatial_match(a, m);
    ImageTensor out = a;
    const int c = a.channels;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (m.data[i])
            for (int k = 0; k < c; ++k) out.data[i * c + k] = b.data[i * c + k];
    return out;
}

} // namespace outpaint
