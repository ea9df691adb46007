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
#include "outpaint/mask_schedule.hpp"

#include <cmath>
#include <string>

#include "outpaint/errors.hpp"

namespace outpaint {

void ScheduleSpec::validate() const {
    if (total_steps < 1)
        throw ValueError("schedule needs at least one step");
    if (image_width < 1 || image_height < 1)
        throw ValueError("schedule image dimensions must be positive");
    if (!(start_fraction > 0.0) || !(end_fraction > 0.0))
        throw ValueError("schedule fractions must be positive");
    if (start_fraction > end_fraction)
        throw ValueError("schedule start fraction exceeds end fraction");
    if (end_fraction > 1.0)
        throw ValueError("schedule end fraction exceeds 1");
}

int mask_width_at_step(const ScheduleSpec& spec, int step) {
    spec.validate();
    if (step < 1 || step > spec.total_steps)
        throw ValueError("schedule step " + std::to_string(step) +
                         " outside [1, " + std::to_string(spec.total_steps) + "]");

    double fraction = spec.end_fraction;
    if (spec.total_steps > 1) {
        const double slope =
            (spec.end_fraction - spec.start_fraction) / (spec.total_steps - 1);
        fraction = spec.start_fraction + (step - 1) * slope;
    }
    // Round half up, and never let rounding produce a zero-width mask.
    int w = static_cast<int>(std::floor(spec.image_width * fraction + 0.5));
    if (w < 1)
        w = 1;
    if (w > spec.image_width)
        w = spec.image_width;
    return w;
}

BinaryMask build_center_mask(const ScheduleSpec& spec, int step) {
    const int w = mask_width_at_step(spec, step);
    const int offset = (spec.image_width - w) / 2;

    BinaryMask mask(spec.image_height, spec.image_width);
    for (int y = 0; y < spec.image_height; ++y)
        for (int x = offset; x < offset + w; ++x)
            mask.data[static_cast<size_t>(y) * spec.image_width + x] = 1;
    return mask;
}

std::vector<BinaryMask> schedule(const ScheduleSpec& spec) {
    spec.validate();
    std::vector<BinaryMask> masks;
    masks.reserve(static_cast<size_t>(spec.total_steps));
    for (int step = 1; step <= spec.total_steps; ++step)
        masks.push_back(build_center_mask(spec, step));
    return masks;
}

} // namespace outpaint
