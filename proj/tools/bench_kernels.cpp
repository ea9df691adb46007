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

// Times every compute kernel in both backends and checks that their
// outputs are bit-identical, which the library's determinism contract
// requires. Usage: bench_kernels [repeats] [height] [width].

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "outpaint/kernels.hpp"
#include "outpaint/rng.hpp"
#include "outpaint/tensor.hpp"

using namespace outpaint;
using Clock = std::chrono::steady_clock;

namespace {

Tensor3 random_tensor(int c, int h, int w, Rng& rng) {
    Tensor3 t(c, h, w);
    for (double& v : t.data) v = rng.normal();
    return t;
}

std::vector<double> random_vector(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal() * 0.1;
    return v;
}

double time_best_ms(const std::function<void()>& fn, int repeats) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

bool bench_pair(const char* name, int repeats,
                const std::function<Tensor3()>& serial,
                const std::function<Tensor3()>& parallel) {
    const Tensor3 a = serial();
    const Tensor3 b = parallel();
    const bool identical = a.same_shape(b) && a.data == b.data;
    const double ms_serial = time_best_ms([&] { serial(); }, repeats);
    const double ms_parallel = time_best_ms([&] { parallel(); }, repeats);
    std::printf("%-24s %10.3f %10.3f %8.2fx   %s\n", name, ms_serial,
                ms_parallel, ms_serial / ms_parallel,
                identical ? "bit-identical" : "MISMATCH");
    return identical;
}

} // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
    const int height = argc > 2 ? std::atoi(argv[2]) : 128;
    const int width = argc > 3 ? std::atoi(argv[3]) : 256;

    Rng rng(1234);
    ConvSpec spec;
    spec.in_channels = 8;
    spec.out_channels = 16;
    spec.kernel = 3;
    spec.stride = 1;
    spec.pad = 1;

    const Tensor3 input = random_tensor(spec.in_channels, height, width, rng);
    const std::vector<double> w = random_vector(spec.weight_count(), rng);
    const std::vector<double> bias =
        random_vector(static_cast<std::size_t>(spec.out_channels), rng);
    const Tensor3 grad_out =
        random_tensor(spec.out_channels, height, width, rng);

    ConvSpec tspec = spec; // transposed direction swaps the channel roles
    tspec.in_channels = spec.out_channels;
    tspec.out_channels = spec.in_channels;
    const std::vector<double> tw = random_vector(tspec.weight_count(), rng);
    const std::vector<double> tbias =
        random_vector(static_cast<std::size_t>(tspec.out_channels), rng);

    std::printf("threads: %d, image: %dx%d, repeats: %d (best-of)\n",
                omp_get_max_threads(), height, width, repeats);
    std::printf("%-24s %10s %10s %9s\n", "kernel", "serial ms", "openmp ms",
                "speedup");

    bool all_ok = true;
    all_ok &= bench_pair(
        "conv2d_forward", repeats,
        [&] { return reference::conv2d_forward(input, w, bias, spec); },
        [&] { return kernels::conv2d_forward(input, w, bias, spec); });
    all_ok &= bench_pair(
        "conv2d_backward_input", repeats,
        [&] {
            return reference::conv2d_backward_input(grad_out, w, spec, height,
                                                    width);
        },
        [&] {
            return kernels::conv2d_backward_input(grad_out, w, spec, height,
                                                  width);
        });
    all_ok &= bench_pair(
        "conv2d_backward_params", repeats,
        [&] {
            std::vector<double> gw, gb;
            reference::conv2d_backward_params(grad_out, input, spec, gw, gb);
            Tensor3 packed(1, 1, static_cast<int>(gw.size() + gb.size()));
            std::copy(gw.begin(), gw.end(), packed.data.begin());
            std::copy(gb.begin(), gb.end(),
                      packed.data.begin() + static_cast<std::ptrdiff_t>(gw.size()));
            return packed;
        },
        [&] {
            std::vector<double> gw, gb;
            kernels::conv2d_backward_params(grad_out, input, spec, gw, gb);
            Tensor3 packed(1, 1, static_cast<int>(gw.size() + gb.size()));
            std::copy(gw.begin(), gw.end(), packed.data.begin());
            std::copy(gb.begin(), gb.end(),
                      packed.data.begin() + static_cast<std::ptrdiff_t>(gw.size()));
            return packed;
        });
    all_ok &= bench_pair(
        "tconv2d_forward", repeats,
        [&] { return reference::tconv2d_forward(grad_out, tw, tbias, tspec); },
        [&] { return kernels::tconv2d_forward(grad_out, tw, tbias, tspec); });
    all_ok &= bench_pair(
        "instance_norm_forward", repeats,
        [&] {
            return reference::instance_norm_forward(
                input, reference::instance_norm_stats(input, 1e-5));
        },
        [&] {
            return kernels::instance_norm_forward(
                input, kernels::instance_norm_stats(input, 1e-5));
        });
    all_ok &= bench_pair(
        "gaussian_blur", repeats,
        [&] { return reference::gaussian_blur(input, 2.0, -1); },
        [&] { return kernels::gaussian_blur(input, 2.0, -1); });
    const Tensor3 gray = random_tensor(1, height, width, rng);
    all_ok &= bench_pair(
        "sobel_gradients", repeats,
        [&] {
            Tensor3 gx, gy;
            reference::sobel_gradients(gray, gx, gy);
            return concat_channels(gx, gy);
        },
        [&] {
            Tensor3 gx, gy;
            kernels::sobel_gradients(gray, gx, gy);
            return concat_channels(gx, gy);
        });
    all_ok &= bench_pair(
        "mean_pool2", repeats,
        [&] { return reference::mean_pool2(input); },
        [&] { return kernels::mean_pool2(input); });

    if (!all_ok) {
        std::printf("FAILURE: backends disagree\n");
        return 1;
    }
    return 0;
}
