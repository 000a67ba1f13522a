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
#include "slds/lds_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "slds/errors.hpp"

namespace slds {

Eigen::MatrixXd pinv(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return Eigen::MatrixXd(M.cols(), M.rows());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double threshold = static_cast<double>(std::max(M.rows(), M.cols())) *
                             std::numeric_limits<double>::epsilon() * sigma(0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > threshold) inv(i) = 1.0 / sigma(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

LdsModel least_squares_fit(const RegressionData& data) {
    const auto n = data.state_dim();
    const auto m = data.control_dim();
    Eigen::MatrixXd stacked(n + m, data.pairs());
    stacked.topRows(n) = data.X();
    if (m > 0) stacked.bottomRows(m) = data.U();

    const Eigen::MatrixXd AB = data.Y() * pinv(stacked);
    return LdsModel::make(AB.leftCols(n), AB.rightCols(m), MethodTag::kLs);
}

double spectral_radius(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols())
        throw InputError("spectral_radius: matrix is " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()) + ", not square");
    if (A.size() == 0) return 0.0;
    if (!A.allFinite()) throw InputError("spectral_radius: non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral_radius: eigenvalue iteration did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(const Eigen::MatrixXd& A, double tol) { return spectral_radius(A) <= 1.0 + tol; }

Eigen::MatrixXd rollout(const LdsModel& model, const Eigen::VectorXd& x0,
                        const Eigen::MatrixXd& controls, Eigen::Index horizon) {
    const auto n = model.state_dim();
    if (x0.size() != n)
        throw InputError("rollout: x0 has " + std::to_string(x0.size()) + " entries, model has " +
                         std::to_string(n) + " states");
    if (horizon < 0) throw InputError("rollout: negative horizon");
    const bool driven = model.has_controls() && controls.size() > 0;
    if (model.has_controls() && !driven && horizon > 0)
        throw InputError("rollout: model has inputs but no controls were given");
    if (driven && (controls.rows() != model.control_dim() || controls.cols() < horizon))
        throw InputError("rollout: controls must be " + std::to_string(model.control_dim()) +
                         " x " + std::to_string(horizon));

    Eigen::MatrixXd traj(n, horizon + 1);
    traj.col(0) = x0;
    for (Eigen::Index t = 0; t < horizon; ++t) {
        traj.col(t + 1) = model.A * traj.col(t);
        if (driven) traj.col(t + 1) += model.B * controls.col(t);
    }
    return traj;
}

double frobenius_cost(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const RegressionData& data) {
    if (A.rows() != data.state_dim() || A.cols() != data.state_dim())
        throw InputError("model state dimension does not match the data");
    Eigen::MatrixXd residual = data.Y() - A * data.X();
    if (data.has_controls()) {
        if (B.rows() != data.state_dim() || B.cols() != data.control_dim())
            throw InputError("model control dimension does not match the data");
        residual.noalias() -= B * data.U();
    } else if (B.cols() != 0) {
        throw InputError("model has inputs but the data has no controls");
    }
    return 0.5 * residual.squaredNorm();
}

ErrorReport reconstruction_error(const LdsModel& model, const RegressionData& data,
                                 const LdsModel* reference) {
    ErrorReport report;
    report.frobenius_cost = frobenius_cost(model.A, model.B, data);
    if (reference != nullptr) {
        const double base = frobenius_cost(reference->A, reference->B, data);
        if (base > 0.0) {
            report.relative_percent = (report.frobenius_cost - base) / base * 100.0;
        } else if (report.frobenius_cost == 0.0) {
            report.relative_percent = 0.0;
        } else {
            report.relative_percent = std::numeric_limits<double>::infinity();
            report.relative_undefined = true;
        }
    }
    return report;
}

}  // namespace slds
