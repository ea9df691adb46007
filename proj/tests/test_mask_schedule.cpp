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
#include "doctest.h"

#include "outpaint/errors.hpp"
#include "outpaint/mask_schedule.hpp"

using namespace outpaint;

TEST_CASE("default 32-step curriculum on width 256") {
    ScheduleSpec spec;
    CHECK(mask_width_at_step(spec, 1) == 8);
    CHECK(mask_width_at_step(spec, 2) == 12);
    CHECK(mask_width_at_step(spec, 32) == 128);
}

TEST_CASE("widths are non-decreasing and bounded by the endpoints") {
    ScheduleSpec spec;
    int prev = 0;
    for (int step = 1; step <= spec.total_steps; ++step) {
        const int w = mask_width_at_step(spec, step);
        CHECK(w >= prev);
        CHECK(w >= 8);
        CHECK(w <= 128);
        prev = w;
    }
}

TEST_CASE("a single-step schedule jumps straight to the end fraction") {
    ScheduleSpec spec;
    spec.total_steps = 1;
    CHECK(mask_width_at_step(spec, 1) == 128);
}

TEST_CASE("step bounds and spec validation") {
    ScheduleSpec spec;
    CHECK_THROWS_AS(mask_width_at_step(spec, 0), ValueError);
    CHECK_THROWS_AS(mask_width_at_step(spec, 33), ValueError);

    ScheduleSpec bad = spec;
    bad.total_steps = 0;
    CHECK_THROWS_AS(bad.validate(), ValueError);
    bad = spec;
    bad.start_fraction = 0.6;
    CHECK_THROWS_AS(bad.validate(), ValueError);
    bad = spec;
    bad.end_fraction = 1.25;
    CHECK_THROWS_AS(bad.validate(), ValueError);
    bad = spec;
    bad.start_fraction = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValueError);
}

TEST_CASE("center masks are centered, full height, and the right size") {
    ScheduleSpec spec;
    spec.image_width = 31;
    spec.image_height = 5;
    spec.total_steps = 4;

    for (int step = 1; step <= 4; ++step) {
        BinaryMask m = build_center_mask(spec, step);
        const int w = mask_width_at_step(spec, step);
        const int offset = (31 - w) / 2;
        CHECK(m.sum() == static_cast<std::size_t>(w) * 5);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 31; ++x) {
                const bool inside = x >= offset && x < offset + w;
                CHECK(m.at(y, x) == (inside ? 1 : 0));
            }
    }
}

TEST_CASE("each step's mask contains the previous one") {
    // Centered masks with floor offsets nest as the width grows; the
    // curriculum never un-hides a pixel it already asked the model to fill.
    ScheduleSpec spec;
    spec.image_width = 97;
    spec.image_height = 2;
    spec.total_steps = 16;

    std::vector<BinaryMask> masks = schedule(spec);
    REQUIRE(masks.size() == 16);
    for (std::size_t s = 1; s < masks.size(); ++s)
        for (std::size_t i = 0; i < masks[s].data.size(); ++i)
            if (masks[s - 1].data[i]) CHECK(masks[s].data[i] == 1);
}

TEST_CASE("rounding never collapses a mask to zero width") {
    ScheduleSpec spec;
    spec.image_width = 8;
    spec.image_height = 1;
    spec.total_steps = 3;
    spec.start_fraction = 0.01;
    spec.end_fraction = 0.5;
    CHECK(mask_width_at_step(spec, 1) == 1);
    CHECK(build_center_mask(spec, 1).sum() == 1);
}
