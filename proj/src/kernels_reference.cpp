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

// Serial reference backend. These loops favor being obviously correct over
// being fast; the OpenMP backend in kernels_omp.cpp must reproduce their
// results bit for bit. Keep the reduction orders in the two files in sync
// (see the contract in kernels.hpp).

#include <cmath>

#include "kernel_checks.hpp"
#include "outpaint/errors.hpp"
#include "outpaint/kernels.hpp"

namespace outpaint {
namespace reference {

using detail::conv_widx;
using detail::tconv_widx;

Tensor3 conv2d_forward(const Tensor3& in, const std::vector<double>& w,
                       const std::vector<double>& bias, const ConvSpec& spec) {
    detail::check_conv_args(in, w, bias, spec);
    detail::check_conv_extent(spec, in.height, in.width);
    const int oh = spec.conv_extent(in.height);
    const int ow = spec.conv_extent(in.width);

    Tensor3 out(spec.out_channels, oh, ow);
    for (int oc = 0; oc < spec.out_channels; ++oc)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double acc = bias[static_cast<std::size_t>(oc)];
                for (int ic = 0; ic < spec.in_channels; ++ic)
                    for (int ky = 0; ky < spec.kernel; ++ky)
                        for (int kx = 0; kx < spec.kernel; ++kx) {
                            const int iy = oy * spec.stride - spec.pad + ky;
                            const int ix = ox * spec.stride - spec.pad + kx;
                            if (iy < 0 || iy >= in.height || ix < 0 ||
                                ix >= in.width)
                                continue;
                            acc += in.at(ic, iy, ix) *
                                   w[conv_widx(spec, oc, ic, ky, kx)];
                        }
                out.at(oc, oy, ox) = acc;
            }
    return out;
}

Tensor3 conv2d_backward_input(const Tensor3& grad_out,
                              const std::vector<double>& w,
                              const ConvSpec& spec, int in_h, int in_w) {
    detail::check_weights(w, spec);
    detail::check_conv_extent(spec, in_h, in_w);
    detail::check_grad_shape(grad_out, spec.out_channels,
                             spec.conv_extent(in_h), spec.conv_extent(in_w));

    Tensor3 grad_in(spec.in_channels, in_h, in_w);
    for (int ic = 0; ic < spec.in_channels; ++ic)
        for (int iy = 0; iy < in_h; ++iy)
            for (int ix = 0; ix < in_w; ++ix) {
                double acc = 0.0;
                for (int oc = 0; oc < spec.out_channels; ++oc)
                    for (int ky = 0; ky < spec.kernel; ++ky)
                        for (int kx = 0; kx < spec.kernel; ++kx) {
                            const int ty = iy + spec.pad - ky;
                            const int tx = ix + spec.pad - kx;
                            if (ty % spec.stride != 0 || tx % spec.stride != 0)
                                continue;
                            const int oy = ty / spec.stride;
                            const int ox = tx / spec.stride;
                            if (oy < 0 || oy >= grad_out.height || ox < 0 ||
                                ox >= grad_out.width)
                                continue;
                            acc += grad_out.at(oc, oy, ox) *
                                   w[conv_widx(spec, oc, ic, ky, kx)];
                        }
                grad_in.at(ic, iy, ix) = acc;
            }
    return grad_in;
}

void conv2d_backward_params(const Tensor3& grad_out, const Tensor3& in,
                            const ConvSpec& spec, std::vector<double>& grad_w,
                            std::vector<double>& grad_b) {
    detail::check_input_channels(in, spec);
    detail::check_grad_shape(grad_out, spec.out_channels,
                             spec.conv_extent(in.height),
                             spec.conv_extent(in.width));
    grad_w.assign(spec.weight_count(), 0.0);
    grad_b.assign(static_cast<std::size_t>(spec.out_channels), 0.0);

    for (int oc = 0; oc < spec.out_channels; ++oc)
        for (int ic = 0; ic < spec.in_channels; ++ic)
            for (int ky = 0; ky < spec.kernel; ++ky)
                for (int kx = 0; kx < spec.kernel; ++kx) {
                    double acc = 0.0;
                    for (int oy = 0; oy < grad_out.height; ++oy)
                        for (int ox = 0; ox < grad_out.width; ++ox) {
                            const int iy = oy * spec.stride - spec.pad + ky;
                            const int ix = ox * spec.stride - spec.pad + kx;
                            if (iy < 0 || iy >= in.height || ix < 0 ||
                                ix >= in.width)
                                continue;
                            acc += grad_out.at(oc, oy, ox) * in.at(ic, iy, ix);
                        }
                    grad_w[conv_widx(spec, oc, ic, ky, kx)] = acc;
                }

    for (int oc = 0; oc < spec.out_channels; ++oc) {
        double acc = 0.0;
        for (int oy = 0; oy < grad_out.height; ++oy)
            for (int ox = 0; ox < grad_out.width; ++ox)
                acc += grad_out.at(oc, oy, ox);
        grad_b[static_cast<std::size_t>(oc)] = acc;
    }
}

Tensor3 tconv2d_forward(const Tensor3& in, const std::vector<double>& w,
                        const std::vector<double>& bias, const ConvSpec& spec) {
    detail::check_conv_args(in, w, bias, spec);
    detail::check_tconv_extent(spec, in.height, in.width);
    const int oh = spec.tconv_extent(in.height);
    const int ow = spec.tconv_extent(in.width);

    // Gather form: output pixel (oy, ox) collects every input pixel that
    // would scatter onto it, so the loop is race-free and the sum order
    // is fixed regardless of how callers parallelize.
    Tensor3 out(spec.out_channels, oh, ow);
    for (int oc = 0; oc < spec.out_channels; ++oc)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double acc = bias[static_cast<std::size_t>(oc)];
                for (int ic = 0; ic < spec.in_channels; ++ic)
                    for (int ky = 0; ky < spec.kernel; ++ky)
                        for (int kx = 0; kx < spec.kernel; ++kx) {
                            const int ty = oy + spec.pad - ky;
                            const int tx = ox + spec.pad - kx;
                            if (ty % spec.stride != 0 || tx % spec.stride != 0)
                                continue;
                            const int iy = ty / spec.stride;
                            const int ix = tx / spec.stride;
                            if (iy < 0 || iy >= in.height || ix < 0 ||
                                ix >= in.width)
                                continue;
                            acc += in.at(ic, iy, ix) *
                                   w[tconv_widx(spec, ic, oc, ky, kx)];
                        }
                out.at(oc, oy, ox) = acc;
            }
    return out;
}

Tensor3 tconv2d_backward_input(const Tensor3& grad_out,
                               const std::vector<double>& w,
                               const ConvSpec& spec, int in_h, int in_w) {
    detail::check_weights(w, spec);
    detail::check_tconv_extent(spec, in_h, in_w);
    detail::check_grad_shape(grad_out, spec.out_channels,
                             spec.tconv_extent(in_h), spec.tconv_extent(in_w));

    Tensor3 grad_in(spec.in_channels, in_h, in_w);
    for (int ic = 0; ic < spec.in_channels; ++ic)
        for (int iy = 0; iy < in_h; ++iy)
            for (int ix = 0; ix < in_w; ++ix) {
                double acc = 0.0;
                for (int oc = 0; oc < spec.out_channels; ++oc)
                    for (int ky = 0; ky < spec.kernel; ++ky)
                        for (int kx = 0; kx < spec.kernel; ++kx) {
                            const int oy = iy * spec.stride - spec.pad + ky;
                            const int ox = ix * spec.stride - spec.pad + kx;
                            if (oy < 0 || oy >= grad_out.height || ox < 0 ||
                                ox >= grad_out.width)
                                continue;
                            acc += grad_out.at(oc, oy, ox) *
                                   w[tconv_widx(spec, ic, oc, ky, kx)];
                        }
                grad_in.at(ic, iy, ix) = acc;
            }
    return grad_in;
}

void tconv2d_backward_params(const Tensor3& grad_out, const Tensor3& in,
                             const ConvSpec& spec, std::vector<double>& grad_w,
                             std::vector<double>& grad_b) {
    detail::check_input_channels(in, spec);
    detail::check_grad_shape(grad_out, spec.out_channels,
                             spec.tconv_extent(in.height),
                             spec.tconv_extent(in.width));
    grad_w.assign(spec.weight_count(), 0.0);
    grad_b.assign(static_cast<std::size_t>(spec.out_channels), 0.0);

    for (int ic = 0; ic < spec.in_channels; ++ic)
        for (int oc = 0; oc < spec.out_channels; ++oc)
            for (int ky = 0; ky < spec.kernel; ++ky)
                for (int kx = 0; kx < spec.kernel; ++kx) {
                    double acc = 0.0;
                    for (int iy = 0; iy < in.height; ++iy)
                        for (int ix = 0; ix < in.width; ++ix) {
                            const int oy = iy * spec.stride - spec.pad + ky;
                            const int ox = ix * spec.stride - spec.pad + kx;
                            if (oy < 0 || oy >= grad_out.height || ox < 0 ||
                                ox >= grad_out.width)
                                continue;
                            acc += in.at(ic, iy, ix) * grad_out.at(oc, oy, ox);
                        }
                    grad_w[tconv_widx(spec, ic, oc, ky, kx)] = acc;
                }

    for (int oc = 0; oc < spec.out_channels; ++oc) {
        double acc = 0.0;
        for (int oy = 0; oy < grad_out.height; ++oy)
            for (int ox = 0; ox < grad_out.width; ++ox)
                acc += grad_out.at(oc, oy, ox);
        grad_b[static_cast<std::size_t>(oc)] = acc;
    }
}

NormStats instance_norm_stats(const Tensor3& in, double eps) {
    if (!(eps >= 0.0)) throw ValueError("normalization eps must be >= 0");
    const std::size_t n = static_cast<std::size_t>(in.height) * in.width;
    NormStats stats;
    stats.mean.resize(static_cast<std::size_t>(in.channels));
    stats.inv_std.resize(static_cast<std::size_t>(in.channels));
    for (int c = 0; c < in.channels; ++c) {
        const double* p = in.plane(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += p[i];
        const double mean = sum / static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = p[i] - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        stats.mean[static_cast<std::size_t>(c)] = mean;
        stats.inv_std[static_cast<std::size_t>(c)] = 1.0 / std::sqrt(var + eps);
    }
    return stats;
}

Tensor3 instance_norm_forward(const Tensor3& in, const NormStats& stats) {
    detail::check_stats(in, stats);
    const std::size_t n = static_cast<std::size_t>(in.height) * in.width;
    Tensor3 out(in.channels, in.height, in.width);
    for (int c = 0; c < in.channels; ++c) {
        const double* p = in.plane(c);
        double* q = out.plane(c);
        const double mean = stats.mean[static_cast<std::size_t>(c)];
        const double istd = stats.inv_std[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < n; ++i) q[i] = (p[i] - mean) * istd;
    }
    return out;
}

Tensor3 instance_norm_backward(const Tensor3& in, const NormStats& stats,
                               const Tensor3& grad_out) {
    detail::check_stats(in, stats);
    if (!in.same_shape(grad_out))
        throw ShapeError("output gradient shape mismatch");
    const std::size_t n = static_cast<std::size_t>(in.height) * in.width;
    const double inv_n = 1.0 / static_cast<double>(n);

    Tensor3 grad_in(in.channels, in.height, in.width);
    for (int c = 0; c < in.channels; ++c) {
        const double* x = in.plane(c);
        const double* g = grad_out.plane(c);
        double* gi = grad_in.plane(c);
        const double mean = stats.mean[static_cast<std::size_t>(c)];
        const double istd = stats.inv_std[static_cast<std::size_t>(c)];

        // d/dx of (x - mean(x)) * inv_std(x): the mean shift contributes
        // -mean(g), the inv_std term contributes -xhat * mean(g * xhat).
        double g_mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) g_mean += g[i];
        g_mean *= inv_n;
        double gx_mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            gx_mean += g[i] * ((x[i] - mean) * istd);
        gx_mean *= inv_n;

        for (std::size_t i = 0; i < n; ++i) {
            const double xhat = (x[i] - mean) * istd;
            gi[i] = istd * (g[i] - g_mean - xhat * gx_mean);
        }
    }
    return grad_in;
}

Tensor3 gaussian_blur(const Tensor3& in, double sigma, int radius) {
    const std::vector<double> taps = gaussian_taps(sigma, radius);
    const int r = static_cast<int>(taps.size() / 2);

    Tensor3 mid(in.channels, in.height, in.width);
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < in.height; ++y)
            for (int x = 0; x < in.width; ++x) {
                double acc = 0.0;
                for (int t = -r; t <= r; ++t)
                    acc += taps[static_cast<std::size_t>(t + r)] *
                           in.at(c, y, reflect_index(x + t, in.width));
                mid.at(c, y, x) = acc;
            }

    Tensor3 out(in.channels, in.height, in.width);
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < in.height; ++y)
            for (int x = 0; x < in.width; ++x) {
                double acc = 0.0;
                for (int t = -r; t <= r; ++t)
                    acc += taps[static_cast<std::size_t>(t + r)] *
                           mid.at(c, reflect_index(y + t, in.height), x);
                out.at(c, y, x) = acc;
            }
    return out;
}

void sobel_gradients(const Tensor3& gray, Tensor3& gx, Tensor3& gy) {
    detail::check_plane(gray);
    gx = Tensor3(1, gray.height, gray.width);
    gy = Tensor3(1, gray.height, gray.width);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x) {
            const int yt = reflect_index(y - 1, gray.height);
            const int yb = reflect_index(y + 1, gray.height);
            const int xl = reflect_index(x - 1, gray.width);
            const int xr = reflect_index(x + 1, gray.width);
            const double tl = gray.at(0, yt, xl);
            const double tc = gray.at(0, yt, x);
            const double tr = gray.at(0, yt, xr);
            const double ml = gray.at(0, y, xl);
            const double mr = gray.at(0, y, xr);
            const double bl = gray.at(0, yb, xl);
            const double bc = gray.at(0, yb, x);
            const double br = gray.at(0, yb, xr);
            // Each bracket evaluates with the same operation order, so equal
            // columns (or rows) cancel to exactly zero.
            gx.at(0, y, x) = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
            gy.at(0, y, x) = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
        }
}

Tensor3 mean_pool2(const Tensor3& in) {
    if (in.height < 2 || in.width < 2)
        throw ShapeError("mean_pool2 needs at least a 2x2 input");
    const int oh = in.height / 2;
    const int ow = in.width / 2;
    Tensor3 out(in.channels, oh, ow);
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x)
                out.at(c, y, x) =
                    (in.at(c, 2 * y, 2 * x) + in.at(c, 2 * y, 2 * x + 1) +
                     in.at(c, 2 * y + 1, 2 * x) +
                     in.at(c, 2 * y + 1, 2 * x + 1)) *
                    0.25;
    return out;
}

} // namespace reference
} // namespace outpaint
