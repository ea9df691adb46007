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
#ifndef OUTPAINT_RNG_HPP
#define OUTPAINT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace outpaint {

// Deterministic random source. std::*_distribution is implementation-defined,
// so the transforms are spelled out here; same seed gives the same stream on
// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) { return eng_() % n; }

    /// Normal deviate via Box-Muller; one spare value is cached.
    double normal(double mean = 0.0, double stddev = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return mean + stddev * r * std::cos(t);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace outpaint

#endif
