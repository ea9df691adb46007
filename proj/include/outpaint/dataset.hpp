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
#ifndef OUTPAINT_DATASET_HPP
#define OUTPAINT_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "outpaint/image.hpp"

namespace outpaint {

// Seeded synthetic corpus for desk-scale training: odd indices are
// vertical stripe patterns (period a divisor of the width, contrast
// >= 0.3, so the edge detector finds clean vertical lines and the pattern
// tiles when wrapped), even indices are smooth cosine-eased sweeps whose
// only detector response is their single steepest column. The last image
// of an even-sized dataset is therefore always a stripe pattern, which
// keeps the held-out edge metric meaningful.
std::vector<ImageTensor> make_synthetic_dataset(int count, int width,
                                                int height,
                                                std::uint64_t seed);

// Loads every .png/.ppm/.pgm file in a directory, sorted by filename so
// runs are reproducible. When expect_w/expect_h are positive, images of
// any other size are rejected.
std::vector<ImageTensor> load_image_directory(const std::string& dir,
                                              int expect_w = -1,
                                              int expect_h = -1);

} // namespace outpaint

#endif // OUTPAINT_DATASET_HPP
