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
#ifndef OUTPAINT_METRICS_HPP
#define OUTPAINT_METRICS_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "outpaint/image.hpp"

namespace outpaint {

/// Peak signal-to-noise ratio in dB: 10*log10(peak^2 / MSE) over all
/// channels. Identical images return +infinity.
double psnr(const ImageTensor& a, const ImageTensor& b, double peak = 1.0);

/// Structural similarity of two single-channel images on unit range:
/// 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2, averaged
/// over valid (fully interior) window positions only, since padding
/// conventions shift third-decimal results. Requires both sides >= 11.
double ssim(const ImageTensor& a, const ImageTensor& b);

/// One row of image embeddings per image; the source of FID statistics.
struct FeatureSet {
    Eigen::MatrixXd vectors; // N x D
    std::string source_tag;
};

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-1e-9, 0] are treated as rounding and clamped to zero; anything more
/// negative is rejected as genuinely indefinite.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& s);

/// Frechet distance between Gaussian fits of the two embedding clouds:
/// ||mu1-mu2||^2 + Tr(S1 + S2 - 2*sqrt(S1^1/2 S2 S1^1/2)), with unbiased
/// covariances. The symmetrized product keeps the result symmetric in its
/// arguments to within 1e-8. Needs at least two rows per side.
double fid_from_features(const FeatureSet& real, const FeatureSet& gen);

/// exp(mean_n KL(p_n || mean_row)) for an N x K matrix of per-image class
/// probabilities. Rows must be distributions (sum 1 within 1e-6). Always
/// within [1, K].
double inception_score_from_probs(const Eigen::MatrixXd& probs);

/// The 36 no-reference quality features: two scales (full and 2x
/// mean-pooled), each contributing a generalized-Gaussian fit (alpha,
/// sigma^2) of the MSCN map plus asymmetric fits (alpha, mean, sigma_l^2,
/// sigma_r^2) of the four neighbor products (horizontal, vertical, both
/// diagonals). MSCN uses a 7x7 Gaussian (sigma 7/6) with reflected borders
/// and stabilizer 1/255. Shape alphas are clamped to [0.2, 10] and sigma
/// estimates floored at 1e-6, so the vector is finite even for constant
/// images. Requires both sides >= 16.
std::array<double, 36> brisque_features(const ImageTensor& gray);

/// RBF support-vector regression model plus the feature scaling that the
/// score function expects.
struct BrisqueModel {
    Eigen::MatrixXd support_vectors; // M x 36
    Eigen::VectorXd dual_coeffs;     // M
    std::array<std::array<double, 2>, 36> feature_ranges; // {min, max}
    double rbf_gamma = 0.05;
    double intercept = 0.0;

    /// Requires min < max per feature, finite entries, matching M.
    void validate() const;
};

/// Min-max scales the features to [-1, 1] by the model ranges, then
/// evaluates sum_m coeff_m * exp(-gamma * ||x - sv_m||^2) + intercept.
/// Lower scores mean better perceptual quality.
double brisque_score(const std::array<double, 36>& features,
                     const BrisqueModel& model);

/// CSV exchange format for embeddings: header "id,f0,...,fD-1", one row
/// per image. Loading keeps row order; ids are returned through `ids`
/// when non-null.
FeatureSet load_feature_set(const std::string& path,
                            std::vector<std::string>* ids = nullptr);
void save_feature_set(const FeatureSet& set,
                      const std::vector<std::string>& ids,
                      const std::string& path);

/// JSON model file with fields support_vectors, dual_coeffs,
/// feature_ranges, rbf_gamma, intercept.
BrisqueModel load_brisque_model(const std::string& path);

} // namespace outpaint

#endif // OUTPAINT_METRICS_HPP
