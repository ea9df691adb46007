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
#ifndef OUTPAINT_REARRANGE_HPP
#define OUTPAINT_REARRANGE_HPP

#include "outpaint/image.hpp"

namespace outpaint {

/// An outpainting canvas: the input image embedded horizontally centered in a
/// wider frame, with the mask set to 1 exactly on the columns to generate.
struct OutpaintCanvas {
    ImageTensor image;
    BinaryMask mask;
    int known_width = 0;

    /// Left column of the embedded known region: floor((W_out - W_in)/2).
    int known_offset() const { return (image.width - known_width) / 2; }
};

/// Embeds `input` centered in a canvas of width out_width. The unknown
/// columns are zero-filled and the mask is 1 exactly there.
/// Throws ValueError if out_width < input.width.
OutpaintCanvas make_outpaint_canvas(const ImageTensor& input, int out_width);

/// Boundary region rearrangement: circular horizontal shift by floor(W/2),
/// applied identically to image and mask. Turns the two outer unknown flanks
/// into one centered unknown block flanked on both sides by known pixels, so
/// the outpainting task becomes an inpainting task.
OutpaintCanvas rearrange_forward(const OutpaintCanvas& canvas);

/// Circular shift by W - floor(W/2); exact inverse of rearrange_forward for
/// every width, odd or even.
OutpaintCanvas rearrange_inverse(const OutpaintCanvas& canvas);

} // namespace outpaint

#endif
