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
#include "slds/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "slds/control.hpp"
#include "slds/dataio.hpp"
#include "slds/errors.hpp"
#include "slds/lds_core.hpp"
#include "slds/random.hpp"
#include "slds/soc.hpp"
#include "slds/subspace.hpp"
#include "slds/synthetic.hpp"

namespace slds {
namespace {

using nlohmann::json;

struct DataArgs {
    std::vector<std::string> states;
    std::vector<std::string> controls;
    std::string pairs_x;
    std::string pairs_y;
    std::string pairs_u;
};

struct FgmArgs {
    int k_max = 500;
    std::optional<double> gamma0;
    double lambda = 0.5;
    std::optional<double> gamma_min;
    double alpha1 = 0.1;
    double margin = 0.0;
    std::optional<double> time_budget;
};

struct LqrArgs {
    std::string q_diag;
    std::string q_preset;
    std::string q_file;
    double r_scale = 0.1;
    std::string r_file;
    double tol = 1e-10;
    int max_iters = 100000;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
    cmd->add_option("--states", args.states, "State matrix file per sequence (N x T)");
    cmd->add_option("--controls", args.controls,
                    "Control matrix file per sequence (M x T-1 or M x T), same order as --states");
    cmd->add_option("--pairs-x", args.pairs_x, "Explicit pairs: predecessor states (N x p)");
    cmd->add_option("--pairs-y", args.pairs_y, "Explicit pairs: successor states (N x p)");
    cmd->add_option("--pairs-u", args.pairs_u, "Explicit pairs: controls (M x p)");
}

void add_fgm_options(CLI::App* cmd, FgmArgs& args) {
    cmd->add_option("--kmax", args.k_max, "Iteration budget")->check(CLI::NonNegativeNumber);
    cmd->add_option("--gamma0", args.gamma0, "Initial step size");
    cmd->add_option("--lambda", args.lambda, "Line-search step decay in (0,1)");
    cmd->add_option("--gamma-min", args.gamma_min, "Line-search floor");
    cmd->add_option("--alpha1", args.alpha1, "Initial momentum parameter in (0,1)");
    cmd->add_option("--margin", args.margin, "Stability margin: caps C's eigenvalues at 1 - margin");
    cmd->add_option("--time-budget", args.time_budget, "Wall-clock cap in seconds");
}

void add_lqr_options(CLI::App* cmd, LqrArgs& args) {
    cmd->add_option("--q-diag", args.q_diag, "Comma-separated diagonal of Q");
    cmd->add_option("--q-preset", args.q_preset, "Q mask preset: pair (states 1 and 10) or range (1..10)")
        ->check(CLI::IsMember({"pair", "range"}));
    cmd->add_option("--q", args.q_file, "Q matrix file");
    cmd->add_option("--r-scale", args.r_scale, "R = r_scale * I (default 0.1)");
    cmd->add_option("--r", args.r_file, "R matrix file");
    cmd->add_option("--tol", args.tol, "Riccati relative convergence tolerance");
    cmd->add_option("--max-iters", args.max_iters, "Riccati iteration cap");
}

FgmOptions to_options(const FgmArgs& args) {
    FgmOptions o;
    o.k_max = args.k_max;
    o.gamma0 = args.gamma0;
    o.lambda = args.lambda;
    o.gamma_min = args.gamma_min;
    o.alpha1 = args.alpha1;
    o.stability_margin = args.margin;
    o.time_budget_seconds = args.time_budget;
    o.validate();
    return o;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw InputError(std::string("cannot parse ") + what + " entry '" + field + "'");
        }
    }
    return values;
}

bool uses_pairs(const DataArgs& args) { return !args.pairs_x.empty() || !args.pairs_y.empty(); }

// Raw snapshots for subspace construction: all state columns, or [X Y] in pair mode.
Eigen::MatrixXd load_snapshots(const DataArgs& args) {
    if (uses_pairs(args)) {
        const Eigen::MatrixXd X = load_matrix(args.pairs_x);
        const Eigen::MatrixXd Y = load_matrix(args.pairs_y);
        if (X.rows() != Y.rows()) throw InputError("--pairs-x and --pairs-y row counts differ");
        Eigen::MatrixXd D(X.rows(), X.cols() + Y.cols());
        D << X, Y;
        return D;
    }
    if (args.states.empty()) throw InputError("no data given: use --states or --pairs-x/--pairs-y");
    std::vector<Eigen::MatrixXd> parts;
    Eigen::Index cols = 0;
    for (const auto& path : args.states) {
        parts.push_back(load_matrix(path));
        if (parts.back().rows() != parts.front().rows())
            throw InputError(path + ": state dimension differs from the first sequence");
        cols += parts.back().cols();
    }
    Eigen::MatrixXd D(parts.front().rows(), cols);
    Eigen::Index offset = 0;
    for (const auto& part : parts) {
        D.middleCols(offset, part.cols()) = part;
        offset += part.cols();
    }
    return D;
}

// Loads the regression data, mapped into the subspace when a basis is given.
RegressionData load_data(const DataArgs& args, const SubspaceBasis* basis) {
    auto to_model_coords = [&](Eigen::MatrixXd m) {
        return basis ? reduce_states(*basis, m) : m;
    };
    if (uses_pairs(args)) {
        if (args.pairs_x.empty() || args.pairs_y.empty())
            throw InputError("pair mode needs both --pairs-x and --pairs-y");
        if (!args.states.empty()) throw InputError("--states cannot be combined with pair mode");
        Eigen::MatrixXd U;
        if (!args.pairs_u.empty()) U = load_matrix(args.pairs_u);
        return RegressionData(to_model_coords(load_matrix(args.pairs_x)),
                              to_model_coords(load_matrix(args.pairs_y)), std::move(U));
    }
    if (args.states.empty()) throw InputError("no data given: use --states or --pairs-x/--pairs-y");
    if (!args.controls.empty() && args.controls.size() != args.states.size())
        throw InputError("give one --controls file per --states file");
    std::vector<Sequence> sequences;
    for (std::size_t i = 0; i < args.states.size(); ++i) {
        Sequence seq;
        seq.states = to_model_coords(load_matrix(args.states[i]));
        if (!args.controls.empty()) seq.controls = load_matrix(args.controls[i]);
        else seq.controls.resize(0, std::max<Eigen::Index>(seq.states.cols() - 1, 0));
        sequences.push_back(std::move(seq));
    }
    return build_pairs_contiguous(TimeSeriesDataset(std::move(sequences)));
}

json report_to_json(const FitReport& r) {
    return json{{"iterations", r.iterations},
                {"restarts", r.restarts},
                {"initial_cost", r.initial_cost},
                {"final_cost", r.final_cost},
                {"gamma0", r.gamma0},
                {"wall_time", r.wall_time},
                {"state_bytes", r.state_bytes},
                {"stalled", r.stalled},
                {"objective_history", r.objective_history}};
}

json error_to_json(const ErrorReport& e) {
    json out{{"frobenius_cost", e.frobenius_cost}};
    if (e.relative_percent) {
        out["relative_percent"] =
            e.relative_undefined ? json(nullptr) : json(*e.relative_percent);
        out["relative_undefined"] = e.relative_undefined;
    }
    return out;
}

void write_matrix_or_csv(const Eigen::MatrixXd& m, const std::string& path, const char* prefix,
                         std::ostream& out) {
    if (!path.empty()) {
        save_matrix(m, path);
        return;
    }
    // One row per column of m (time step), header t,prefix_0,...
    out << "t";
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << ',' << prefix << '_' << i;
    out << '\n' << std::setprecision(17);
    for (Eigen::Index t = 0; t < m.cols(); ++t) {
        out << t;
        for (Eigen::Index i = 0; i < m.rows(); ++i) out << ',' << m(i, t);
        out << '\n';
    }
}

Eigen::VectorXd load_vector(const std::string& path) {
    const Eigen::MatrixXd m = load_matrix(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw InputError(path + ": expected a single row or column");
}

// x0 may be given in model or, with an attached basis, in observation coordinates.
Eigen::VectorXd initial_state(const LdsModel& model, const std::string& path) {
    if (path.empty()) return Eigen::VectorXd::Zero(model.state_dim());
    Eigen::VectorXd x0 = load_vector(path);
    if (model.subspace && x0.size() == model.subspace->original_dim() &&
        x0.size() != model.state_dim())
        x0 = reduce_states(*model.subspace, x0);
    if (x0.size() != model.state_dim())
        throw InputError("x0 has " + std::to_string(x0.size()) + " entries, model expects " +
                         std::to_string(model.state_dim()));
    return x0;
}

LqrSpec build_lqr_spec(const LqrArgs& args, const LdsModel& model) {
    const auto n = model.state_dim();
    const auto m = model.control_dim();
    const int q_sources = !args.q_diag.empty() + !args.q_preset.empty() + !args.q_file.empty();
    if (q_sources > 1) throw InputError("give at most one of --q-diag, --q-preset, --q");

    LqrSpec spec;
    if (!args.q_file.empty()) {
        spec.Q = load_matrix(args.q_file);
    } else if (!args.q_diag.empty()) {
        const auto diag = parse_list(args.q_diag, "--q-diag");
        if (static_cast<Eigen::Index>(diag.size()) != n)
            throw InputError("--q-diag needs " + std::to_string(n) + " entries");
        spec.Q = Eigen::Map<const Eigen::VectorXd>(diag.data(), n).asDiagonal();
    } else if (args.q_preset == "pair") {
        spec.Q = q_preset_pair(n);
    } else if (args.q_preset == "range") {
        spec.Q = q_preset_range(n);
    } else {
        spec.Q = Eigen::MatrixXd::Identity(n, n);
    }
    if (!args.r_file.empty()) spec.R = load_matrix(args.r_file);
    else spec.R = args.r_scale * Eigen::MatrixXd::Identity(m, m);
    spec.validate();
    return spec;
}

void write_json(const json& doc, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << doc.dump(2) << '\n';
        return;
    }
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw InputError(path + ": cannot open for writing");
    file << doc.dump(2) << '\n';
    if (!file.flush()) throw InputError(path + ": write failed");
}

// ---------------------------------------------------------------------------

struct FitArgs {
    DataArgs data;
    FgmArgs fgm;
    std::string method = "soc";
    Eigen::Index rank = 0;
    bool center = false;
    std::string init_model;
    std::string out;
};

int cmd_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
    const MethodTag method = method_from_string(args.method);
    const FgmOptions options = to_options(args.fgm);

    std::optional<SubspaceBasis> basis;
    if (args.rank > 0) {
        basis = svd_reduce(load_snapshots(args.data), args.rank, {args.center}).basis;
        err << "reduced to r = " << args.rank << " (sigma_1 = " << basis->singular_values(0)
            << ", sigma_r = " << basis->singular_values(args.rank - 1) << ")\n";
    }
    const RegressionData data = load_data(args.data, basis ? &*basis : nullptr);

    const LdsModel ls = least_squares_fit(data);
    const double ls_cost = frobenius_cost(ls.A, ls.B, data);
    err << "least squares: cost " << ls_cost << ", spectral radius " << ls.spectral_radius << '\n';

    LdsModel model = ls;
    json doc;
    if (method == MethodTag::kSoc) {
        SocFit fit;
        if (!args.init_model.empty()) {
            LdsModel start = load_model(args.init_model);
            if (start.state_dim() != data.state_dim() || start.control_dim() != data.control_dim())
                throw InputError("--init model dimensions do not match the data");
            fit = refine(start, data, options);
        } else {
            fit = fgm_fit(data, options);
        }
        err << "soc: cost " << fit.report.final_cost << " after " << fit.report.iterations
            << " iterations (" << fit.report.restarts << " restarts), spectral radius "
            << fit.model.spectral_radius << '\n';
        model = std::move(fit.model);
        doc["report"] = report_to_json(fit.report);
    }
    model.subspace = basis;

    const ErrorReport error = reconstruction_error(model, data, &ls);
    doc["method"] = to_string(model.method);
    doc["spectral_radius"] = model.spectral_radius;
    doc["ls_cost"] = ls_cost;
    doc["ls_spectral_radius"] = ls.spectral_radius;
    doc["error"] = error_to_json(error);
    if (args.out.empty()) {
        doc["model"] = model_to_json(model);
    } else {
        save_model(model, args.out);
        doc["model_path"] = args.out;
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
}

struct EvalArgs {
    DataArgs data;
    std::string model;
    std::string reference;
};

int cmd_eval(const EvalArgs& args, std::ostream& out) {
    const LdsModel model = load_model(args.model);
    const RegressionData data =
        load_data(args.data, model.subspace ? &*model.subspace : nullptr);
    std::optional<LdsModel> reference;
    if (!args.reference.empty()) reference = load_model(args.reference);
    const ErrorReport report = reconstruction_error(model, data, reference ? &*reference : nullptr);
    out << error_to_json(report).dump(2) << '\n';
    return kExitOk;
}

struct PredictArgs {
    std::string model;
    std::string x0;
    std::string controls;
    Eigen::Index horizon = 0;
    bool reduced = false;
    std::string out;
};

int cmd_predict(const PredictArgs& args, std::ostream& out) {
    if (args.x0.empty()) throw InputError("--x0 is required");
    const LdsModel model = load_model(args.model);
    const Eigen::VectorXd x0 = initial_state(model, args.x0);
    Eigen::MatrixXd controls;
    if (!args.controls.empty()) controls = load_matrix(args.controls);
    Eigen::MatrixXd traj = rollout(model, x0, controls, args.horizon);
    if (model.subspace && !args.reduced) traj = lift_states(*model.subspace, traj);
    write_matrix_or_csv(traj, args.out, "x", out);
    return kExitOk;
}

struct SvdArgs {
    DataArgs data;
    Eigen::Index rank = 0;
    bool center = false;
    std::string out;
    std::string basis_out;
};

int cmd_svd_reduce(const SvdArgs& args, std::ostream& out) {
    const Eigen::MatrixXd D = load_snapshots(args.data);
    const SvdReduction red = svd_reduce(D, args.rank, {args.center});
    if (!args.out.empty()) save_matrix(red.reduced, args.out);
    if (!args.basis_out.empty()) save_matrix(red.basis.basis, args.basis_out);
    const double truncation = (D - lift_states(red.basis, red.reduced)).norm();
    json doc{{"original_dim", red.basis.original_dim()},
             {"reduced_dim", red.basis.reduced_dim()},
             {"snapshots", D.cols()},
             {"centered", red.basis.centered()},
             {"truncation_error", truncation},
             {"singular_values", std::vector<double>(red.basis.singular_values.data(),
                                                     red.basis.singular_values.data() +
                                                         red.basis.singular_values.size())}};
    out << doc.dump(2) << '\n';
    return kExitOk;
}

struct LqrCmdArgs {
    std::string model;
    LqrArgs lqr;
    std::string out;
};

LqrSolution solve_for_model(const LdsModel& model, const LqrSpec& spec, const LqrArgs& args) {
    return solve_dare(model.A, model.B, spec, DareOptions{args.tol, args.max_iters});
}

int cmd_lqr(const LqrCmdArgs& args, std::ostream& out) {
    const LdsModel model = load_model(args.model);
    const LqrSpec spec = build_lqr_spec(args.lqr, model);
    const LqrSolution sol = solve_for_model(model, spec, args.lqr);
    json doc{{"P", matrix_to_json(sol.P)},
             {"K", matrix_to_json(sol.K)},
             {"closed_loop_radius", sol.closed_loop_radius},
             {"iterations", sol.iterations},
             {"residual", dare_residual(model.A, model.B, spec, sol.P)}};
    write_json(doc, args.out, out);
    return kExitOk;
}

struct TrackArgs {
    std::string model;
    LqrArgs lqr;
    std::string reference;
    bool figure8 = false;
    double amp_y = 1.0;
    double amp_z = 0.5;
    double period = 100.0;
    Eigen::Index steps = 500;
    std::vector<Eigen::Index> coords{0, 1};
    std::string x0;
    std::string out;
};

int cmd_track(const TrackArgs& args, std::ostream& out, std::ostream& err) {
    const LdsModel model = load_model(args.model);
    const LqrSpec spec = build_lqr_spec(args.lqr, model);
    const LqrSolution sol = solve_for_model(model, spec, args.lqr);

    Eigen::MatrixXd reference;
    if (!args.reference.empty() && args.figure8)
        throw InputError("give either --reference or --figure8");
    if (!args.reference.empty()) {
        reference = load_matrix(args.reference);
    } else if (args.figure8) {
        if (args.coords.size() != 2) throw InputError("--coords needs two indices");
        reference = make_figure8(args.amp_y, args.amp_z, args.period, args.steps, args.coords[0],
                                 args.coords[1], model.state_dim());
    } else {
        throw InputError("a reference is required: --reference FILE or --figure8");
    }

    const TrackingResult result =
        track_reference(model, sol, spec, reference, initial_state(model, args.x0));
    if (!args.out.empty()) save_matrix(result.states, args.out);
    err << "closed-loop radius " << sol.closed_loop_radius << ", mean error "
        << result.mean_error() << ", total cost " << result.total_cost << '\n';

    out << "t,error,stage_cost,cumulative_cost\n" << std::setprecision(17);
    double cumulative = 0.0;
    for (Eigen::Index t = 0; t < result.errors.size(); ++t) {
        cumulative += result.stage_costs(t);
        out << t << ',' << result.errors(t) << ',' << result.stage_costs(t) << ',' << cumulative
            << '\n';
    }
    return kExitOk;
}

struct BenchArgs {
    std::vector<Eigen::Index> dims{50, 100, 150, 200, 300};
    int k_max = 10;
    Eigen::Index inputs = 0;
    std::uint64_t seed = 1;
};

int cmd_bench_memory(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    out << "r,bytes,final_cost,seconds\n" << std::setprecision(17);
    for (const auto r : args.dims) {
        if (r < 1) throw InputError("bench dimensions must be positive");
        SplitMix64 rng(args.seed ^ (static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ULL));
        const Eigen::MatrixXd A = random_matrix_with_radius(rng, r, 0.95);
        const Eigen::MatrixXd B = rng.normal_matrix(r, args.inputs);
        const RegressionData data = random_pairs(rng, A, B, 2 * r + args.inputs, 0.01);
        FgmOptions options;
        options.k_max = args.k_max;
        const SocFit fit = fgm_fit(data, options);
        err << "r = " << r << ": " << fit.report.state_bytes << " bytes, "
            << fit.report.iterations << " iterations\n";
        out << r << ',' << fit.report.state_bytes << ',' << fit.report.final_cost << ','
            << fit.report.wall_time << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learn stable linear dynamical systems and design LQR controllers on them", "slds"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a model (least squares or stable SOC)");
    add_data_options(fit_cmd, fit.data);
    add_fgm_options(fit_cmd, fit.fgm);
    fit_cmd->add_option("--method", fit.method, "ls or soc")->check(CLI::IsMember({"ls", "soc"}));
    fit_cmd->add_option("--rank", fit.rank, "Fit in an r-dimensional SVD subspace")
        ->check(CLI::PositiveNumber);
    fit_cmd->add_flag("--center", fit.center, "Subtract the mean snapshot before the SVD");
    fit_cmd->add_option("--init", fit.init_model, "Refine this stable model instead of starting from LS");
    fit_cmd->add_option("--out", fit.out, "Write the model JSON here instead of stdout");
    // --seed is accepted by every command for scripting symmetry.
    std::uint64_t unused_seed = 0;
    fit_cmd->add_option("--seed", unused_seed, "Ignored (fit is deterministic)");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Reconstruction error of a model on data");
    add_data_options(eval_cmd, eval.data);
    eval_cmd->add_option("--model", eval.model, "Model JSON")->required();
    eval_cmd->add_option("--reference", eval.reference, "LS model JSON for the relative error");

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "Roll a model forward from x0");
    predict_cmd->add_option("--model", predict.model, "Model JSON")->required();
    predict_cmd->add_option("--x0", predict.x0, "Initial state file")->required();
    predict_cmd->add_option("--controls", predict.controls, "Controls file (M x horizon)");
    predict_cmd->add_option("--horizon", predict.horizon, "Number of steps")->required()
        ->check(CLI::NonNegativeNumber);
    predict_cmd->add_flag("--reduced", predict.reduced, "Keep subspace coordinates (do not lift)");
    predict_cmd->add_option("--out", predict.out, "Trajectory matrix file (default: CSV on stdout)");

    SvdArgs svd;
    auto* svd_cmd = app.add_subcommand("svd-reduce", "Truncated SVD of snapshot data");
    add_data_options(svd_cmd, svd.data);
    svd_cmd->add_option("--rank", svd.rank, "Subspace dimension")->required()
        ->check(CLI::PositiveNumber);
    svd_cmd->add_flag("--center", svd.center, "Subtract the mean snapshot first");
    svd_cmd->add_option("--out", svd.out, "Reduced snapshot matrix file (r x p)");
    svd_cmd->add_option("--basis-out", svd.basis_out, "Basis matrix file (N x r)");

    LqrCmdArgs lqr;
    auto* lqr_cmd = app.add_subcommand("lqr", "Solve the discrete Riccati equation for a model");
    lqr_cmd->add_option("--model", lqr.model, "Model JSON")->required();
    add_lqr_options(lqr_cmd, lqr.lqr);
    lqr_cmd->add_option("--out", lqr.out, "Solution JSON file (default: stdout)");

    TrackArgs track;
    auto* track_cmd = app.add_subcommand("track", "Closed-loop LQR reference tracking on a model");
    track_cmd->add_option("--model", track.model, "Model JSON")->required();
    add_lqr_options(track_cmd, track.lqr);
    track_cmd->add_option("--reference", track.reference, "Reference matrix file (N x T)");
    track_cmd->add_flag("--figure8", track.figure8, "Use a 1:2 Lissajous reference");
    track_cmd->add_option("--amp-y", track.amp_y, "Figure-8 amplitude in the first coordinate");
    track_cmd->add_option("--amp-z", track.amp_z, "Figure-8 amplitude in the second coordinate");
    track_cmd->add_option("--period", track.period, "Figure-8 period in steps");
    track_cmd->add_option("--steps", track.steps, "Figure-8 length")->check(CLI::NonNegativeNumber);
    track_cmd->add_option("--coords", track.coords, "Figure-8 state indices i,j")->delimiter(',');
    track_cmd->add_option("--x0", track.x0, "Initial state file (default: zero)");
    track_cmd->add_option("--out", track.out, "Trajectory matrix file");

    BenchArgs bench;
    auto* bench_cmd =
        app.add_subcommand("bench-memory", "Optimizer state size of fixed-budget SOC fits");
    bench_cmd->add_option("--dims", bench.dims, "Comma-separated subspace dimensions")
        ->delimiter(',');
    bench_cmd->add_option("--kmax", bench.k_max, "Iterations per fit");
    bench_cmd->add_option("--inputs", bench.inputs, "Control dimension of the synthetic systems");
    bench_cmd->add_option("--seed", bench.seed, "PRNG seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out, err);
        if (*eval_cmd) return cmd_eval(eval, out);
        if (*predict_cmd) return cmd_predict(predict, out);
        if (*svd_cmd) return cmd_svd_reduce(svd, out);
        if (*lqr_cmd) return cmd_lqr(lqr, out);
        if (*track_cmd) return cmd_track(track, out, err);
        if (*bench_cmd) return cmd_bench_memory(bench, out, err);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    }
    return kExitInputError;
}

}  // namespace slds
