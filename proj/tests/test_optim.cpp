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

#include <cmath>
#include <limits>
#include <vector>

#include "outpaint/errors.hpp"
#include "outpaint/optim.hpp"

using namespace outpaint;

TEST_CASE("zero gradient leaves parameters untouched") {
    AdamState s(3);
    std::vector<double> params = {1.0, -2.0, 0.5};
    const std::vector<double> before = params;
    adam_update(s, params, {0.0, 0.0, 0.0}, 1e-2);
    CHECK(params == before);
    CHECK(s.t == 1);
}

TEST_CASE("first step moves by roughly lr times the gradient sign") {
    // With beta1 = 0 the corrected first moment is the gradient itself and
    // the corrected second moment is its square, so the first step is
    // -lr * g / (|g| + eps).
    AdamState s(1);
    std::vector<double> params = {1.0};
    adam_update(s, params, {0.5}, 1e-2);
    CHECK(params[0] == doctest::Approx(1.0 - 1e-2).epsilon(1e-6));

    AdamState s2(1);
    std::vector<double> neg = {1.0};
    adam_update(s2, neg, {-3.0}, 1e-2);
    CHECK(neg[0] == doctest::Approx(1.0 + 1e-2).epsilon(1e-6));
}

TEST_CASE("constant gradient keeps moving the parameter the same way") {
    AdamState s(1);
    std::vector<double> params = {0.3};
    double prev = params[0];
    for (int i = 0; i < 5; ++i) {
        adam_update(s, params, {0.7}, 1e-3);
        CHECK(params[0] < prev);
        prev = params[0];
    }
    CHECK(s.t == 5);
}

TEST_CASE("optimizer rejects bad inputs without touching state") {
    AdamState s(2);
    std::vector<double> params = {1.0, 2.0};

    CHECK_THROWS_AS(adam_update(s, params, {1.0}, 1e-2), ShapeError);
    CHECK_THROWS_AS(adam_update(s, params, {1.0, 1.0}, 0.0), ValueError);
    CHECK_THROWS_AS(
        adam_update(s, params,
                    {std::numeric_limits<double>::quiet_NaN(), 0.0}, 1e-2),
        NumericError);
    CHECK_THROWS_AS(
        adam_update(s, params,
                    {1.0, std::numeric_limits<double>::infinity()}, 1e-2),
        NumericError);

    CHECK(s.t == 0);
    CHECK(params[0] == 1.0);
    CHECK(params[1] == 2.0);
    CHECK(s.m[0] == 0.0);
    CHECK(s.v[1] == 0.0);
}

TEST_CASE("network update path lowers a simple objective") {
    Rng rng(11);
    ToyNetwork net;
    net.role = NetRole::discriminator;
    net.layers.push_back(make_conv(1, 1, 1, 1, 0));
    net.layers[0].weights[0] = 0.8;
    net.layers[0].bias[0] = 0.1;

    Tensor3 input(1, 2, 2);
    for (double& v : input.data) v = rng.uniform();

    // L = 0.5 * sum(out^2): gradient of the output is the output itself.
    auto eval = [&]() {
        Tensor3 out = forward(net, input);
        double loss = 0.0;
        for (double v : out.data) loss += 0.5 * v * v;
        backward(net, out);
        return loss;
    };

    AdamState s(param_count(net));
    double prev = eval();
    for (int i = 0; i < 50; ++i) {
        adam_update_network(s, net, 1e-2);
        const double cur = eval();
        CHECK(std::isfinite(cur));
        prev = cur;
    }
    CHECK(prev < 0.1);
}
