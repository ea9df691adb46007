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
#ifndef OUTPAINT_MASK_SCHEDULE_HPP
#define OUTPAINT_MASK_SCHEDULE_HPP

#include <vector>

#include "outpaint/image.hpp"

namespace outpaint {

/// The horizontally progressive training curriculum: a centered, full-height
/// mask whose width grows linearly in fraction-of-width from start_fraction
/// to end_fraction over total_steps steps.
struct ScheduleSpec {
    int total_steps = 32;
    double start_fraction = 1.0 / 32.0; // 3.125%
    double end_fraction = 0.5;          // 50%
    int image_width = 256;
    int image_height = 128;

    void validate() const;
};

/// Mask width in pixels at a 1-based step:
/// round(W * (f_start + (step-1) * (f_end-f_start)/(total_steps-1))),
/// round-half-up. For total_steps == 1 the width is round(W * f_end).
/// Throws ValueError when step is out of [1, total_steps].
int mask_width_at_step(const ScheduleSpec& spec, int step);

/// Full-height centered mask of width mask_width_at_step(spec, step);
/// left offset floor((W - w)/2), 1 inside, 0 outside.
BinaryMask build_center_mask(const ScheduleSpec& spec, int step);

/// Masks for steps 1..total_steps; widths are non-decreasing.
std::vector<BinaryMask> schedule(const ScheduleSpec& spec);

} // namespace outpaint

#endif
