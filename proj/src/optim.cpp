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
#include "outpaint/optim.hpp"

#include <cmath>

#include "outpaint/errors.hpp"

namespace outpaint {

void adam_update(AdamState& s, std::vector<double>& params,
                 const std::vector<double>& grads, double lr) {
    if (params.size() != grads.size() || params.size() != s.m.size() ||
        params.size() != s.v.size())
        throw ShapeError("optimizer state, parameters, and gradients must "
                         "all have the same length");
    if (!(lr > 0.0)) throw ValueError("learning rate must be positive");
    for (double g : grads)
        if (!std::isfinite(g))
            throw NumericError("non-finite gradient in optimizer step");

    s.t += 1;
    const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
    const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g;
        s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g * g;
        const double mhat = s.m[i] / bc1;
        const double vhat = s.v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + s.eps);
    }
}

void adam_update_network(AdamState& s, ToyNetwork& net, double lr) {
    std::vector<double> params = gather_params(net);
    adam_update(s, params, gather_grads(net), lr);
    scatter_params(net, params);
}

} // namespace outpaint
