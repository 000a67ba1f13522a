/*
 Copyright 2026 The slds Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef SLDS_LDS_CORE_HPP
#define SLDS_LDS_CORE_HPP

#include <optional>

#include <Eigen/Dense>

#include "slds/dataio.hpp"

namespace slds {

inline constexpr double kStabilityTolerance = 1e-9;

/// SVD pseudoinverse; singular values at or below max(rows, cols) * eps * sigma_1
/// are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& M);

/// Minimum-norm solution of min 0.5 ||Y - A X - B U||_F^2. No stability constraint.
LdsModel least_squares_fit(const RegressionData& data);

/// Largest eigenvalue modulus via Hessenberg reduction and shifted QR.
double spectral_radius(const Eigen::MatrixXd& A);

bool is_stable(const Eigen::MatrixXd& A, double tol = kStabilityTolerance);

/**
 * Simulates x_{t+1} = A x_t + B u_t for `horizon` steps.
 *
 * @param controls  M x horizon; may be empty when the model has no inputs.
 * @return N x (horizon + 1), column 0 is x0.
 */
Eigen::MatrixXd rollout(const LdsModel& model, const Eigen::VectorXd& x0,
                        const Eigen::MatrixXd& controls, Eigen::Index horizon);

/// 0.5 ||Y - A X - B U||_F^2.
double frobenius_cost(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const RegressionData& data);

struct ErrorReport {
    double frobenius_cost = 0.0;
    // Percent increase over the reference cost; set only when a reference
    // model was supplied.
    std::optional<double> relative_percent;
    // Reference cost is zero while the candidate's is not: relative_percent
    // holds +infinity.
    bool relative_undefined = false;
};

ErrorReport reconstruction_error(const LdsModel& model, const RegressionData& data,
                                 const LdsModel* reference = nullptr);

}  // namespace slds

#endif  // SLDS_LDS_CORE_HPP
