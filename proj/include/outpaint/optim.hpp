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
#ifndef OUTPAINT_OPTIM_HPP
#define OUTPAINT_OPTIM_HPP

#include <cstdint>
#include <vector>

#include "outpaint/net.hpp"

namespace outpaint {

// Bias-corrected Adam. With beta1 = 0 the first moment is just the current
// gradient, so the update direction is sign-like once v stabilizes.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;
    double beta1 = 0.0;
    double beta2 = 0.99;
    double eps = 1e-8;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// One optimizer step over a flat parameter vector. Gradients are checked
// for finiteness before any state mutates, so a bad step never poisons the
// moments. Throws ShapeError on size mismatch, NumericError on non-finite
// gradients, ValueError on lr <= 0.
void adam_update(AdamState& s, std::vector<double>& params,
                 const std::vector<double>& grads, double lr);

// Gathers the network's parameters and gradients, steps them, and writes
// the parameters back.
void adam_update_network(AdamState& s, ToyNetwork& net, double lr);

} // namespace outpaint

#endif // OUTPAINT_OPTIM_HPP
