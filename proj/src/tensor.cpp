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
#include "outpaint/tensor.hpp"

#include <algorithm>

#include "outpaint/errors.hpp"

namespace outpaint {

Tensor3::Tensor3(int c, int h, int w, double fill)
    : channels(c), height(h), width(w) {
    if (c < 1 || h < 1 || w < 1)
        throw ValueError("tensor dimensions must be positive");
    data.assign(static_cast<std::size_t>(c) * h * w, fill);
}

Tensor3 concat_channels(const Tensor3& a, const Tensor3& b) {
    if (a.height != b.height || a.width != b.width)
        throw ShapeError("cannot concatenate tensors of different extents");
    Tensor3 out(a.channels + b.channels, a.height, a.width);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
    return out;
}

Tensor3 slice_channels(const Tensor3& t, int from, int count) {
    if (from < 0 || count < 1 || from + count > t.channels)
        throw ShapeError("channel slice out of range");
    Tensor3 out(count, t.height, t.width);
    const std::size_t plane = static_cast<std::size_t>(t.height) * t.width;
    std::copy(t.data.begin() + static_cast<std::ptrdiff_t>(from * plane),
              t.data.begin() +
                  static_cast<std::ptrdiff_t>((from + count) * plane),
              out.data.begin());
    return out;
}

Tensor3 tensor_from_image(const ImageTensor& img) {
    Tensor3 t(img.channels, img.height, img.width);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                t.at(c, y, x) = img.at(y, x, c);
    return t;
}

ImageTensor image_from_tensor(const Tensor3& t) {
    if (t.channels != 1 && t.channels != 3)
        throw ShapeError("images need 1 or 3 channels");
    ImageTensor img(t.height, t.width, t.channels);
    for (int c = 0; c < t.channels; ++c)
        for (int y = 0; y < t.height; ++y)
            for (int x = 0; x < t.width; ++x) {
                double v = t.at(c, y, x);
                if (v < 0.0) v = 0.0;
                if (v > 1.0) v = 1.0;
                img.at(y, x, c) = v;
            }
    return img;
}

} // namespace outpaint
