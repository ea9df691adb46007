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
#include "outpaint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "outpaint/errors.hpp"
#include "outpaint/kernels.hpp"
#include "outpaint/tensor.hpp"

namespace outpaint {

namespace {

void check_finite_matrix(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw NumericError(std::string(what) + " contains a non-finite value");
    }
}

// Ratio of gamma functions that moment matching inverts to recover the
// shape of a generalized Gaussian: rho(alpha) = Gamma(2/a)^2 /
// (Gamma(1/a) * Gamma(3/a)). Strictly increasing on [0.2, 10], so a
// bisection is exact enough; lgamma keeps the intermediate values sane
// for small alpha.
double shape_ratio(double alpha) {
    return std::exp(2.0 * std::lgamma(2.0 / alpha) - std::lgamma(1.0 / alpha) -
                    std::lgamma(3.0 / alpha));
}

constexpr double kAlphaMin = 0.2;
constexpr double kAlphaMax = 10.0;
constexpr double kSigmaFloor = 1e-6;

double solve_shape(double target) {
    double lo = kAlphaMin;
    double hi = kAlphaMax;
    if (!(target > shape_ratio(lo))) return lo;
    if (!(target < shape_ratio(hi))) return hi;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (shape_ratio(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Symmetric generalized-Gaussian fit: shape alpha by inverting the moment
// ratio (mean|x|)^2 / mean(x^2), spread reported as the raw second moment.
// A (near-)constant signal has no usable moments; it degrades to the
// Gaussian shape with the floored spread rather than an arbitrary clamp
// endpoint.
void fit_ggd(const std::vector<double>& x, double& alpha, double& sigma_sq) {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (double v : x) {
        abs_sum += std::abs(v);
        sq_sum += v * v;
    }
    const double n = static_cast<double>(x.size());
    const double mean_abs = abs_sum / n;
    const double mean_sq = sq_sum / n;
    sigma_sq = std::max(mean_sq, kSigmaFloor * kSigmaFloor);
    if (mean_sq < 1e-12) {
        alpha = 2.0;
        return;
    }
    alpha = solve_shape(mean_abs * mean_abs / mean_sq);
}

// Asymmetric fit of a neighbor-product map: separate left/right spreads
// from the negative and positive halves, shape from the asymmetry-corrected
// moment ratio, and the mean implied by those three.
std::array<double, 4> fit_aggd(const std::vector<double>& x) {
    double sq_l = 0.0, sq_r = 0.0, abs_sum = 0.0;
    std::size_t n_l = 0, n_r = 0;
    for (double v : x) {
        abs_sum += std::abs(v);
        if (v < 0.0) {
            sq_l += v * v;
            ++n_l;
        } else if (v > 0.0) {
            sq_r += v * v;
            ++n_r;
        }
    }
    const double n = static_cast<double>(x.size());
    const double sigma_l =
        std::max(n_l ? std::sqrt(sq_l / static_cast<double>(n_l)) : 0.0,
                 kSigmaFloor);
    const double sigma_r =
        std::max(n_r ? std::sqrt(sq_r / static_cast<double>(n_r)) : 0.0,
                 kSigmaFloor);
    const double gamma_hat = sigma_l / sigma_r;
    const double mean_abs = std::max(abs_sum / n, 1e-12);
    const double mean_sq = std::max((sq_l + sq_r) / n, 1e-12);
    const double r_hat = mean_abs * mean_abs / mean_sq;
    const double g2 = gamma_hat * gamma_hat;
    const double r_norm = r_hat * (gamma_hat * g2 + 1.0) * (gamma_hat + 1.0) /
                          ((g2 + 1.0) * (g2 + 1.0));
    const double alpha = solve_shape(r_norm);
    const double g_1 = std::tgamma(1.0 / alpha);
    const double g_2 = std::tgamma(2.0 / alpha);
    const double g_3 = std::tgamma(3.0 / alpha);
    const double mean = (sigma_r - sigma_l) * (g_2 / g_1) * std::sqrt(g_1 / g_3);
    return {alpha, mean, sigma_l * sigma_l, sigma_r * sigma_r};
}

// Mean-subtracted contrast-normalized map: (I - mu) / (sigma + 1/255) with
// mu and sigma from a 7x7 Gaussian (sigma 7/6, reflected borders).
Tensor3 mscn_map(const Tensor3& plane) {
    const Tensor3 mu = kernels::gaussian_blur(plane, 7.0 / 6.0, 3);
    Tensor3 sq = plane;
    for (double& v : sq.data) v *= v;
    const Tensor3 mu_sq = kernels::gaussian_blur(sq, 7.0 / 6.0, 3);
    Tensor3 out(1, plane.height, plane.width);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double var = std::max(mu_sq.data[i] - mu.data[i] * mu.data[i], 0.0);
        out.data[i] = (plane.data[i] - mu.data[i]) / (std::sqrt(var) + 1.0 / 255.0);
    }
    return out;
}

// The four neighbor-product maps of an MSCN plane, in the fixed order
// horizontal, vertical, main diagonal, anti-diagonal. Mirroring the image
// left-right permutes this list by swapping the last two.
std::array<std::vector<double>, 4> neighbor_products(const Tensor3& m) {
    const int h = m.height;
    const int w = m.width;
    std::array<std::vector<double>, 4> out;
    out[0].reserve(static_cast<std::size_t>(h) * (w - 1));
    out[1].reserve(static_cast<std::size_t>(h - 1) * w);
    out[2].reserve(static_cast<std::size_t>(h - 1) * (w - 1));
    out[3].reserve(static_cast<std::size_t>(h - 1) * (w - 1));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            out[0].push_back(m.at(0, y, x) * m.at(0, y, x + 1));
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x < w; ++x) {
            out[1].push_back(m.at(0, y, x) * m.at(0, y + 1, x));
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            out[2].push_back(m.at(0, y, x) * m.at(0, y + 1, x + 1));
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 1; x < w; ++x) {
            out[3].push_back(m.at(0, y, x) * m.at(0, y + 1, x - 1));
        }
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double_cell(const std::string& cell, const std::string& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ": cell '" + cell + "' is not a number");
    }
}

} // namespace

double psnr(const ImageTensor& a, const ImageTensor& b, double peak) {
    if (!a.same_shape(b)) throw ShapeError("psnr: image shapes differ");
    if (a.size() == 0) throw ValueError("psnr: empty image");
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw ValueError("psnr: peak must be positive and finite");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sq += d * d;
    }
    const double mse = sq / static_cast<double>(a.data.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const ImageTensor& a, const ImageTensor& b) {
    if (!a.same_shape(b)) throw ShapeError("ssim: image shapes differ");
    if (a.channels != 1) throw ShapeError("ssim: expects single-channel images");
    constexpr int kWindow = 11;
    if (a.height < kWindow || a.width < kWindow) {
        throw ValueError("ssim: both sides must be at least 11");
    }
    const std::vector<double> taps = gaussian_taps(1.5, kWindow / 2);
    constexpr double kC1 = 0.01 * 0.01;
    constexpr double kC2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t windows = 0;
    for (int y0 = 0; y0 + kWindow <= a.height; ++y0) {
        for (int x0 = 0; x0 + kWindow <= a.width; ++x0) {
            double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
            for (int dy = 0; dy < kWindow; ++dy) {
                for (int dx = 0; dx < kWindow; ++dx) {
                    const double w = taps[dy] * taps[dx];
                    const double va = a.at(y0 + dy, x0 + dx, 0);
                    const double vb = b.at(y0 + dy, x0 + dx, 0);
                    ma += w * va;
                    mb += w * vb;
                    saa += w * va * va;
                    sbb += w * vb * vb;
                    sab += w * va * vb;
                }
            }
            const double var_a = saa - ma * ma;
            const double var_b = sbb - mb * mb;
            const double cov = sab - ma * mb;
            total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
                     ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

std::array<double, 36> brisque_features(const ImageTensor& gray) {
    if (gray.channels != 1) {
        throw ShapeError("brisque_features: expects a single-channel image");
    }
    if (gray.height < 16 || gray.width < 16) {
        throw ValueError("brisque_features: both sides must be at least 16");
    }
    std::array<double, 36> out{};
    Tensor3 plane = tensor_from_image(gray);
    std::size_t k = 0;
    for (int scale = 0; scale < 2; ++scale) {
        if (scale == 1) plane = kernels::mean_pool2(plane);
        const Tensor3 mscn = mscn_map(plane);
        fit_ggd(mscn.data, out[k], out[k + 1]);
        k += 2;
        for (const auto& prod : neighbor_products(mscn)) {
            const auto f = fit_aggd(prod);
            out[k] = f[0];
            out[k + 1] = f[1];
            out[k + 2] = f[2];
            out[k + 3] = f[3];
            k += 4;
        }
    }
    for (double v : out) {
        if (!std::isfinite(v)) {
            throw NumericError("brisque_features: non-finite feature");
        }
    }
    return out;
}

void BrisqueModel::validate() const {
    const auto m = support_vectors.rows();
    if (m < 1 || support_vectors.cols() != 36) {
        throw ValueError("brisque model: support_vectors must be M x 36, M >= 1");
    }
    if (dual_coeffs.size() != m) {
        throw ValueError("brisque model: dual_coeffs length must match rows");
    }
    check_finite_matrix(support_vectors, "brisque model support_vectors");
    check_finite_matrix(dual_coeffs, "brisque model dual_coeffs");
    if (!(rbf_gamma > 0.0) || !std::isfinite(rbf_gamma)) {
        throw ValueError("brisque model: rbf_gamma must be positive");
    }
    if (!std::isfinite(intercept)) {
        throw ValueError("brisque model: intercept must be finite");
    }
    for (const auto& r : feature_ranges) {
        if (!std::isfinite(r[0]) || !std::isfinite(r[1]) || !(r[0] < r[1])) {
            throw ValueError("brisque model: each feature range needs min < max");
        }
    }
}

double brisque_score(const std::array<double, 36>& features,
                     const BrisqueModel& model) {
    model.validate();
    Eigen::VectorXd x(36);
    for (int i = 0; i < 36; ++i) {
        const auto& r = model.feature_ranges[static_cast<std::size_t>(i)];
        x[i] = -1.0 + 2.0 * (features[static_cast<std::size_t>(i)] - r[0]) /
                          (r[1] - r[0]);
    }
    double score = model.intercept;
    for (Eigen::Index m = 0; m < model.support_vectors.rows(); ++m) {
        const double d2 = (x - model.support_vectors.row(m).transpose()).squaredNorm();
        score += model.dual_coeffs[m] * std::exp(-model.rbf_gamma * d2);
    }
    return score;
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw ShapeError("matrix_sqrt_psd: matrix must be square and non-empty");
    }
    check_finite_matrix(s, "matrix_sqrt_psd input");
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw ValueError("matrix_sqrt_psd: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success) {
        throw NumericError("matrix_sqrt_psd: eigendecomposition failed");
    }
    Eigen::VectorXd lambda = eig.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < -1e-9) {
            throw NumericError("matrix_sqrt_psd: matrix has a negative eigenvalue");
        }
        lambda[i] = std::sqrt(std::max(lambda[i], 0.0));
    }
    return eig.eigenvectors() * lambda.asDiagonal() *
           eig.eigenvectors().transpose();
}

double fid_from_features(const FeatureSet& real, const FeatureSet& gen) {
    const Eigen::MatrixXd& x = real.vectors;
    const Eigen::MatrixXd& y = gen.vectors;
    if (x.cols() != y.cols() || x.cols() == 0) {
        throw ShapeError("fid: feature dimensions differ or are empty");
    }
    if (x.rows() < 2 || y.rows() < 2) {
        throw ValueError("fid: each side needs at least two feature rows");
    }
    check_finite_matrix(x, "fid real features");
    check_finite_matrix(y, "fid generated features");

    const Eigen::RowVectorXd mu_x = x.colwise().mean();
    const Eigen::RowVectorXd mu_y = y.colwise().mean();
    const Eigen::MatrixXd cx = x.rowwise() - mu_x;
    const Eigen::MatrixXd cy = y.rowwise() - mu_y;
    const Eigen::MatrixXd sx =
        cx.transpose() * cx / static_cast<double>(x.rows() - 1);
    const Eigen::MatrixXd sy =
        cy.transpose() * cy / static_cast<double>(y.rows() - 1);

    const Eigen::MatrixXd root_x = matrix_sqrt_psd(sx);
    // Mathematically symmetric; re-symmetrize so rounding noise cannot trip
    // the PSD root's own symmetry gate.
    Eigen::MatrixXd inner = root_x * sy * root_x;
    inner = 0.5 * (inner + inner.transpose());
    const Eigen::MatrixXd cross = matrix_sqrt_psd(inner);

    const double mean_term = (mu_x - mu_y).squaredNorm();
    return mean_term + (sx + sy - 2.0 * cross).trace();
}

double inception_score_from_probs(const Eigen::MatrixXd& probs) {
    const Eigen::Index n = probs.rows();
    const Eigen::Index k = probs.cols();
    if (n < 1 || k < 1) throw ShapeError("inception score: empty matrix");
    check_finite_matrix(probs, "inception score probabilities");
    for (Eigen::Index i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            const double p = probs(i, j);
            if (p < 0.0) {
                throw ValueError("inception score: negative probability");
            }
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > 1e-6) {
            throw ValueError("inception score: row does not sum to 1");
        }
    }
    const Eigen::RowVectorXd marginal = probs.colwise().mean();
    double kl_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const double p = probs(i, j);
            if (p > 0.0) kl_sum += p * std::log(p / marginal[j]);
        }
    }
    return std::exp(kl_sum / static_cast<double>(n));
}

FeatureSet load_feature_set(const std::string& path,
                            std::vector<std::string>* ids) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open feature csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": missing csv header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "id") {
        throw DataError(path + ": header must be id,f0,...");
    }
    const std::size_t dim = header.size() - 1;
    for (std::size_t i = 0; i < dim; ++i) {
        if (header[i + 1] != "f" + std::to_string(i)) {
            throw DataError(path + ": feature columns must be named f0..fD-1");
        }
    }
    std::vector<std::string> row_ids;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != dim + 1) {
            throw DataError(path + ": row has wrong column count");
        }
        row_ids.push_back(cells[0]);
        for (std::size_t i = 0; i < dim; ++i) {
            values.push_back(parse_double_cell(cells[i + 1], path));
        }
    }
    FeatureSet set;
    set.source_tag = path;
    set.vectors.resize(static_cast<Eigen::Index>(row_ids.size()),
                       static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < row_ids.size(); ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            set.vectors(static_cast<Eigen::Index>(r),
                        static_cast<Eigen::Index>(c)) = values[r * dim + c];
        }
    }
    if (ids) *ids = std::move(row_ids);
    return set;
}

void save_feature_set(const FeatureSet& set, const std::vector<std::string>& ids,
                      const std::string& path) {
    if (static_cast<Eigen::Index>(ids.size()) != set.vectors.rows()) {
        throw ValueError("save_feature_set: one id per feature row required");
    }
    for (const auto& id : ids) {
        if (id.find(',') != std::string::npos ||
            id.find('\n') != std::string::npos) {
            throw ValueError("save_feature_set: ids may not contain ',' or newlines");
        }
    }
    std::ofstream out(path);
    if (!out) throw FileError("cannot write feature csv: " + path);
    out << "id";
    for (Eigen::Index c = 0; c < set.vectors.cols(); ++c) out << ",f" << c;
    out << "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < set.vectors.rows(); ++r) {
        out << ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < set.vectors.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", set.vectors(r, c));
            out << ',' << buf;
        }
        out << "\n";
    }
    if (!out) throw FileError("failed writing feature csv: " + path);
}

BrisqueModel load_brisque_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open brisque model: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid json: " + e.what());
    }
    BrisqueModel model;
    try {
        const auto& ranges = j.at("feature_ranges");
        if (ranges.size() != 36) {
            throw DataError(path + ": feature_ranges must have 36 entries");
        }
        for (std::size_t i = 0; i < 36; ++i) {
            model.feature_ranges[i][0] = ranges[i].at(0).get<double>();
            model.feature_ranges[i][1] = ranges[i].at(1).get<double>();
        }
        const auto& svs = j.at("support_vectors");
        model.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), 36);
        for (std::size_t m = 0; m < svs.size(); ++m) {
            if (svs[m].size() != 36) {
                throw DataError(path + ": support vectors must have 36 entries");
            }
            for (std::size_t i = 0; i < 36; ++i) {
                model.support_vectors(static_cast<Eigen::Index>(m),
                                      static_cast<Eigen::Index>(i)) =
                    svs[m][i].get<double>();
            }
        }
        const auto& coeffs = j.at("dual_coeffs");
        model.dual_coeffs.resize(static_cast<Eigen::Index>(coeffs.size()));
        for (std::size_t m = 0; m < coeffs.size(); ++m) {
            model.dual_coeffs[static_cast<Eigen::Index>(m)] = coeffs[m].get<double>();
        }
        model.rbf_gamma = j.at("rbf_gamma").get<double>();
        model.intercept = j.at("intercept").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad model structure: " + e.what());
    }
    model.validate();
    return model;
}

} // namespace outpaint
