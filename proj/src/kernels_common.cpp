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
#include <cmath>

#include "outpaint/errors.hpp"
#include "outpaint/kernels.hpp"

namespace outpaint {

void ConvSpec::validate() const {
    if (in_channels < 1 || out_channels < 1)
        throw ValueError("convolution channel counts must be positive");
    if (kernel < 1) throw ValueError("kernel size must be positive");
    if (stride < 1) throw ValueError("stride must be positive");
    if (pad < 0) throw ValueError("padding must be non-negative");
}

std::vector<double> gaussian_taps(double sigma, int radius) {
    if (!(sigma > 0.0)) throw ValueError("gaussian sigma must be positive");
    if (radius < 0) radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * static_cast<std::size_t>(radius) + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v =
            std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : taps) v /= sum;
    return taps;
}

int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0)
            i = -i - 1;
        else
            i = 2 * n - 1 - i;
    }
    return i;
}

} // namespace outpaint
