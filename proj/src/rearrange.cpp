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
#include "outpaint/rearrange.hpp"

#include "outpaint/errors.hpp"

namespace outpaint {

namespace {

// out[., x] = in[., (x + shift) mod W], image and mask together.
OutpaintCanvas circular_shift(const OutpaintCanvas& canvas, int shift) {
    const ImageTensor& img = canvas.image;
    const int w = img.width;
    OutpaintCanvas out;
    out.image = ImageTensor(img.height, w, img.channels);
    out.mask = BinaryMask(img.height, w);
    out.known_width = canvas.known_width;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < w; ++x) {
            const int sx = (x + shift) % w;
            for (int c = 0; c < img.channels; ++c)
                out.image.at(y, x, c) = img.at(y, sx, c);
            out.mask.at(y, x) = canvas.mask.at(y, sx);
        }
    }
    return out;
}

} // namespace

OutpaintCanvas make_outpaint_canvas(const ImageTensor& input, int out_width) {
    if (out_width < input.width)
        throw ValueError("out_width must be >= input width");
    OutpaintCanvas canvas;
    canvas.image = ImageTensor(input.height, out_width, input.channels);
    canvas.mask = BinaryMask(input.height, out_width, 1);
    canvas.known_width = input.width;
    const int offset = (out_width - input.width) / 2;
    for (int y = 0; y < input.height; ++y)
        for (int x = 0; x < input.width; ++x) {
            for (int c = 0; c < input.channels; ++c)
                canvas.image.at(y, offset + x, c) = input.at(y, x, c);
            canvas.mask.at(y, offset + x) = 0;
        }
    return canvas;
}

OutpaintCanvas rearrange_forward(const OutpaintCanvas& canvas) {
    return circular_shift(canvas, canvas.image.width / 2);
}

OutpaintCanvas rearrange_inverse(const OutpaintCanvas& canvas) {
    const int w = canvas.image.width;
    return circular_shift(canvas, w - w / 2);
}

} // namespace outpaint
