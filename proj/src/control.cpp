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
#include "slds/control.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "slds/errors.hpp"
#include "slds/lds_core.hpp"

namespace slds {
namespace {

Eigen::LDLT<Eigen::MatrixXd> factor_gain_matrix(const Eigen::MatrixXd& M) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    const double limit = static_cast<double>(M.rows()) * std::numeric_limits<double>::epsilon();
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > limit))
        throw NumericalError("R + B^T P B is numerically singular");
    return ldlt;
}

}  // namespace

void LqrSpec::validate() const {
    if (Q.rows() != Q.cols()) throw InputError("Q must be square");
    if (R.rows() != R.cols()) throw InputError("R must be square");
    if (!Q.allFinite() || !R.allFinite()) throw InputError("Q and R must be finite");
    if ((Q - Q.transpose()).norm() > 1e-10 * std::max(1.0, Q.norm()))
        throw InputError("Q must be symmetric");
    if ((R - R.transpose()).norm() > 1e-10 * std::max(1.0, R.norm()))
        throw InputError("R must be symmetric");
    if (Q.size() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q.norm()))
            throw InputError("Q must be positive semidefinite");
    }
    if (R.size() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R, Eigen::EigenvaluesOnly);
        if (!(eig.eigenvalues().minCoeff() > 0.0)) throw InputError("R must be positive definite");
    }
}

double dare_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const LqrSpec& spec,
                     const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd BtPA = B.transpose() * P * A;
    const Eigen::MatrixXd gain = (spec.R + B.transpose() * P * B).ldlt().solve(BtPA);
    const Eigen::MatrixXd res = A.transpose() * P * A - P - BtPA.transpose() * gain + spec.Q;
    return res.norm();
}

LqrSolution solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const LqrSpec& spec,
                       const DareOptions& options) {
    spec.validate();
    const auto n = A.rows();
    const auto m = B.cols();
    if (A.cols() != n) throw InputError("A must be square");
    if (B.rows() != n) throw InputError("B must have as many rows as A");
    if (m == 0) throw InputError("LQR needs a model with control inputs");
    if (spec.Q.rows() != n) throw InputError("Q must be " + std::to_string(n) + "x" + std::to_string(n));
    if (spec.R.rows() != m) throw InputError("R must be " + std::to_string(m) + "x" + std::to_string(m));
    if (!(options.tol > 0.0) || options.max_iters < 1) throw InputError("invalid DARE options");

    LqrSolution sol;
    Eigen::MatrixXd P = spec.Q;
    bool converged = false;
    for (int it = 1; it <= options.max_iters; ++it) {
        const Eigen::MatrixXd PB = P * B;
        const auto ldlt = factor_gain_matrix(spec.R + B.transpose() * PB);
        Eigen::MatrixXd inner = P - PB * ldlt.solve(PB.transpose());
        Eigen::MatrixXd next = spec.Q + A.transpose() * inner * A;
        next = (0.5 * (next + next.transpose())).eval();
        if (!next.allFinite())
            throw NumericalError("Riccati recursion diverged; (A, B) is likely not stabilizable");
        const double change = (next - P).stableNorm();
        const double scale = P.stableNorm();
        P = std::move(next);
        sol.iterations = it;
        if (change <= options.tol * scale) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("Riccati recursion did not converge in " +
                             std::to_string(options.max_iters) +
                             " iterations; (A, B) is likely not stabilizable");

    const auto ldlt = factor_gain_matrix(spec.R + B.transpose() * P * B);
    sol.K = ldlt.solve(B.transpose() * P * A);
    sol.P = std::move(P);
    sol.closed_loop_radius = spectral_radius(A - B * sol.K);
    return sol;
}

TrackingResult track_reference(const LdsModel& model, const LqrSolution& solution,
                               const LqrSpec& spec, const Eigen::MatrixXd& reference,
                               const Eigen::VectorXd& x0) {
    const auto n = model.state_dim();
    const auto m = model.control_dim();
    if (m == 0) throw InputError("tracking needs a model with control inputs");
    if (solution.K.rows() != m || solution.K.cols() != n)
        throw InputError("gain K does not match the model dimensions");
    if (reference.rows() != n) throw InputError("reference must have one row per state");
    if (x0.size() != n) throw InputError("x0 must have one entry per state");
    if (spec.Q.rows() != n || spec.R.rows() != m) throw InputError("Q/R do not match the model");

    const auto steps = reference.cols();
    TrackingResult out;
    out.states.resize(n, steps + 1);
    out.controls.resize(m, steps);
    out.errors.resize(steps);
    out.stage_costs.resize(steps);
    out.states.col(0) = x0;
    for (Eigen::Index t = 0; t < steps; ++t) {
        const Eigen::VectorXd e = out.states.col(t) - reference.col(t);
        const Eigen::VectorXd u = -solution.K * e;
        out.controls.col(t) = u;
        out.errors(t) = e.norm();
        out.stage_costs(t) = e.dot(spec.Q * e) + u.dot(spec.R * u);
        out.total_cost += out.stage_costs(t);
        out.states.col(t + 1) = model.A * out.states.col(t) + model.B * u;
    }
    return out;
}

Eigen::MatrixXd make_figure8(double amplitude_y, double amplitude_z, double period,
                             Eigen::Index steps, Eigen::Index i, Eigen::Index j,
                             Eigen::Index state_dim) {
    if (i == j || i < 0 || j < 0 || i >= state_dim || j >= state_dim)
        throw InputError("figure-8 coordinates must be distinct and below the state dimension");
    if (!(period >= 2.0)) throw InputError("figure-8 period must be at least 2");
    if (steps < 0) throw InputError("figure-8 length must be non-negative");
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(state_dim, steps);
    const double w = 2.0 * std::numbers::pi / period;
    for (Eigen::Index t = 0; t < steps; ++t) {
        ref(i, t) = amplitude_y * std::sin(w * static_cast<double>(t));
        ref(j, t) = amplitude_z * std::sin(2.0 * w * static_cast<double>(t));
    }
    return ref;
}

Eigen::MatrixXd diagonal_mask(Eigen::Index state_dim, const std::vector<Eigen::Index>& indices) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(state_dim);
    for (const auto k : indices) {
        if (k < 0 || k >= state_dim)
            throw InputError("Q mask index " + std::to_string(k) + " out of range");
        diag(k) = 1.0;
    }
    return diag.asDiagonal();
}

Eigen::MatrixXd q_preset_pair(Eigen::Index state_dim) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k : {0, 9})
        if (k < state_dim) idx.push_back(k);
    return diagonal_mask(state_dim, idx);
}

Eigen::MatrixXd q_preset_range(Eigen::Index state_dim) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(10, state_dim); ++k) idx.push_back(k);
    return diagonal_mask(state_dim, idx);
}

}  // namespace slds
