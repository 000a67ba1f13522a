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
#ifndef SLDS_SOC_HPP
#define SLDS_SOC_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "slds/dataio.hpp"

namespace slds {

/**
 * Stable parameterization A = S^{-1} O C S with S symmetric positive
 * definite, O orthogonal and C a symmetric PSD contraction. Every feasible
 * point assembles to a matrix with spectral radius at most one, because A is
 * similar to O C and ||O C||_2 = ||C||_2 <= 1.
 *
 * B is N x 0 for systems without inputs.
 */
struct SocParams {
    Eigen::MatrixXd S;
    Eigen::MatrixXd O;
    Eigen::MatrixXd C;
    Eigen::MatrixXd B;

    Eigen::Index state_dim() const { return S.rows(); }
    Eigen::Index control_dim() const { return B.cols(); }

    /// Frobenius norm of the stacked (S, O, C, B).
    double norm() const;
};

/// Partial derivatives of the reconstruction cost, laid out like SocParams.
using SocGradient = SocParams;

enum class InitStrategy {
    // S = I; O and C from the polar decomposition of A.
    kPolar,
    // For strictly stable A, S is the square root of the discrete Lyapunov
    // solution of A^T P A - P = -I, which makes S A S^{-1} a strict
    // contraction so the starting point reproduces A. Falls back to kPolar
    // otherwise.
    kLyapunov,
};

/// Starting point from an (unconstrained) model; B is copied as is.
SocParams init_soc(const LdsModel& model, double margin = 0.0,
                   InitStrategy strategy = InitStrategy::kPolar);

/// S^{-1} O C S via an LU solve. Throws NumericalError when S is
/// numerically singular (reciprocal condition below N * eps).
Eigen::MatrixXd assemble_A(const SocParams& params);

/// 0.5 ||Y - S^{-1} O C S X - B U||_F^2.
double objective(const SocParams& params, const RegressionData& data);

SocGradient gradients(const SocParams& params, const RegressionData& data);

// Frobenius-nearest points of the individual feasible sets.
Eigen::MatrixXd project_spd(const Eigen::MatrixXd& S);
Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& O);
Eigen::MatrixXd project_psd_contraction(const Eigen::MatrixXd& C, double margin);

/// Projects S, O and C onto their feasible sets; B is unchanged.
/// Throws InputError on non-finite entries.
SocParams project(const SocParams& params, double margin = 0.0);

/// True when S is SPD, O orthogonal and C a PSD contraction within `tol`.
bool is_feasible(const SocParams& params, double margin = 0.0, double tol = 1e-10);

/// Momentum update of the fast gradient method: returns (alpha_{k+1}, beta_k).
std::pair<double, double> momentum_step(double alpha);

struct IterateInfo {
    int iteration = 0;
    const SocParams& params;  // current stored solution
    double cost = 0.0;
    bool restarted = false;
};

struct FgmOptions {
    int k_max = 500;
    // Defaults to 0.01 * ||Z0||_F / ||grad f(Z0)||_F when unset.
    std::optional<double> gamma0;
    double lambda = 0.5;
    // Defaults to 1e-12 * gamma0 when unset.
    std::optional<double> gamma_min;
    double alpha1 = 0.1;
    // C's eigenvalues are capped at 1 - stability_margin.
    double stability_margin = 0.0;
    std::optional<double> time_budget_seconds;
    // When false, B stays at its initial value and only A is searched.
    bool update_b = true;
    // Called after every outer iteration.
    std::function<void(const IterateInfo&)> observer;

    /// Throws InputError on out-of-range values.
    void validate() const;
};

struct FitReport {
    // Cost of the initial point followed by every accepted step.
    std::vector<double> objective_history;
    int restarts = 0;
    int iterations = 0;
    double final_cost = 0.0;
    double initial_cost = 0.0;
    double gamma0 = 0.0;
    double wall_time = 0.0;
    std::size_t state_bytes = 0;
    // The line search failed from the un-extrapolated point, so no
    // further progress is possible.
    bool stalled = false;
};

struct SocFit {
    LdsModel model;
    SocParams params;
    FitReport report;
};

/**
 * Persistent optimizer memory in bytes: four (S, O, C, B) sets (stored
 * solution, extrapolated point, line-search candidate, gradient), i.e.
 * 8 * 4 * (3 N^2 + N M).
 */
std::size_t optimizer_state_bytes(Eigen::Index state_dim, Eigen::Index control_dim);

/**
 * Projected fast gradient method with restart. Starts from `init` (projected)
 * or, when absent, from init_soc of the least-squares fit. Every stored
 * iterate is feasible, so the returned model is stable regardless of the
 * iteration budget. The fit depends only on the set of pairs: columns are
 * put in a canonical order first.
 */
SocFit fgm_fit(const RegressionData& data, const FgmOptions& options = {},
               const std::optional<SocParams>& init = std::nullopt);

/// Continues from an already stable model. The result never has a higher
/// cost than `model` on `data`. Throws InputError for unstable input.
SocFit refine(const LdsModel& model, const RegressionData& data,
              const FgmOptions& options = {});

}  // namespace slds

#endif  // SLDS_SOC_HPP
