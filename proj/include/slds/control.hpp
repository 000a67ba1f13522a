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
#ifndef SLDS_CONTROL_HPP
#define SLDS_CONTROL_HPP

#include <vector>

#include <Eigen/Dense>

#include "slds/dataio.hpp"

namespace slds {

struct LqrSpec {
    Eigen::MatrixXd Q;  // N x N, symmetric PSD
    Eigen::MatrixXd R;  // M x M, symmetric PD

    /// Throws InputError when Q or R violate symmetry / definiteness.
    void validate() const;
};

struct LqrSolution {
    Eigen::MatrixXd P;  // Riccati solution
    Eigen::MatrixXd K;  // u = -K x
    double closed_loop_radius = 0.0;
    int iterations = 0;
};

struct DareOptions {
    double tol = 1e-10;
    int max_iters = 100000;
};

/**
 * Discrete algebraic Riccati equation by fixed-point recursion from P = Q:
 *
 *   P <- Q + A^T (P - P B (R + B^T P B)^{-1} B^T P) A
 *
 * until the relative change drops below `tol`. Throws NumericalError when
 * the recursion does not settle (typically an unstabilizable pair) or when
 * R + B^T P B is singular.
 */
LqrSolution solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const LqrSpec& spec,
                       const DareOptions& options = {});

/// ||A^T P A - P - A^T P B (R + B^T P B)^{-1} B^T P A + Q||_F.
double dare_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const LqrSpec& spec,
                     const Eigen::MatrixXd& P);

struct TrackingResult {
    Eigen::MatrixXd states;      // N x (T + 1)
    Eigen::MatrixXd controls;    // M x T
    Eigen::VectorXd errors;      // ||x_t - ref_t||, t < T
    Eigen::VectorXd stage_costs; // e^T Q e + u^T R u, t < T
    double total_cost = 0.0;

    double mean_error() const { return errors.size() ? errors.mean() : 0.0; }
};

/// Closed loop u_t = -K (x_t - ref_t) on the model's own (A, B).
TrackingResult track_reference(const LdsModel& model, const LqrSolution& solution,
                               const LqrSpec& spec, const Eigen::MatrixXd& reference,
                               const Eigen::VectorXd& x0);

/// 1:2 Lissajous in coordinates (i, j) of an N-dimensional state:
/// ref[i,t] = amp_y sin(2 pi t / period), ref[j,t] = amp_z sin(4 pi t / period).
Eigen::MatrixXd make_figure8(double amplitude_y, double amplitude_z, double period,
                             Eigen::Index steps, Eigen::Index i, Eigen::Index j,
                             Eigen::Index state_dim);

/// diag(c) with c_k = 1 for k in `indices` (zero-based), 0 elsewhere.
Eigen::MatrixXd diagonal_mask(Eigen::Index state_dim, const std::vector<Eigen::Index>& indices);

// The two readings of "c_i = 1 for i in {1, 10}" (one-based):
// only the first and tenth states, or the first ten states.
Eigen::MatrixXd q_preset_pair(Eigen::Index state_dim);
Eigen::MatrixXd q_preset_range(Eigen::Index state_dim);

}  // namespace slds

#endif  // SLDS_CONTROL_HPP
