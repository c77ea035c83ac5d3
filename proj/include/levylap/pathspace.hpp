#pragma once

#include "levylap/geometry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace levylap {

/// Ambient-coordinate position / velocity as a function of the curve
/// parameter. Attached by constructors that know a closed form.
using CurveOracle = std::function<Eigen::VectorXd(double)>;

/// A discretized H^1 curve: N+1 samples on the uniform grid tau_i = i/N.
struct Curve {
    ManifoldPtr manifold;
    std::vector<Point> samples;  // N+1 entries
    bool closed = false;
    int grid_size = 0;  // N, a power of two

    CurveOracle position_oracle;  // may be empty
    CurveOracle velocity_oracle;  // may be empty

    /// Constructor-recorded resolution constant: max_i d(s_i, s_{i+1}) * N.
    double resolution_constant = 0.0;

    std::string constructor_name;
    std::uint64_t seed = 0;

    /// Homotopy-class metadata on the 2-torus, carried by constructors.
    std::optional<std::array<int, 2>> winding;

    int node_count() const { return grid_size + 1; }
    double tau(int i) const { return static_cast<double>(i) / grid_size; }
    const Point& at(int i) const { return samples.at(static_cast<size_t>(i)); }
};

using CurvePtr = std::shared_ptr<const Curve>;

struct VectorFieldAlongCurve {
    CurvePtr curve;
    std::vector<Tangent> values;  // values[i] based at curve->samples[i]
};

/// Parallel-transported orthonormal frames at every node; frames[0] is the
/// user-fixed initial basis.
struct TransportedFrame {
    CurvePtr curve;
    std::vector<Eigen::MatrixXd> frames;  // ambient_dim x d, columns per node
    double max_orthonormality_drift = 0.0;

    Tangent vector(int node, int mu) const {
        return Tangent{curve->at(node), frames.at(static_cast<size_t>(node)).col(mu)};
    }
};

/// Velocity at a grid node: the analytic oracle when present, otherwise a
/// centered finite difference (periodic when closed, one-sided at open
/// endpoints), projected to the tangent space on the sphere.
Tangent velocity(const Curve& c, int i);

/// Basis vector field sqrt(2) sin(n pi tau) * frame[mu] along the curve.
/// mu is zero-based; requires n <= N/16.
VectorFieldAlongCurve make_basis_field(const TransportedFrame& frame, int mu,
                                       int n);

/// Nodewise exponential map: samples[i] = exp(c_i, s * X_i). Guards
/// |s| * max||X|| against the sphere injectivity margin (pi rho / 2).
CurvePtr path_exp(const CurvePtr& c, const VectorFieldAlongCurve& X, double s);

/// L2 pairing of two fields along the same curve (trapezoid in tau).
double g0_inner(const VectorFieldAlongCurve& X, const VectorFieldAlongCurve& Y);

// --- constructors (test fixtures; all attach analytic oracles) ---

/// Loop with winding numbers (p, q) on a 2-torus, optionally perturbed by
/// `modes` random zero-winding Fourier terms of the given amplitude.
CurvePtr torus_winding(const ManifoldPtr& m, int grid_size, int p, int q,
                       const Eigen::Vector2d& base, double perturbation = 0.0,
                       int modes = 0, std::uint64_t seed = 0);

/// Latitude circle at polar angle theta0 on the sphere.
CurvePtr sphere_latitude(const ManifoldPtr& m, int grid_size, double theta0);

/// Latitude circle with a smooth polar-angle perturbation
/// theta(tau) = theta0 + amplitude * sin(2 pi mode tau).
CurvePtr sphere_perturbed_latitude(const ManifoldPtr& m, int grid_size,
                                   double theta0, double amplitude, int mode);

/// Deterministic random smooth loop built from `mode_count` Fourier modes.
CurvePtr random_smooth_loop(const ManifoldPtr& m, int grid_size,
                            std::uint64_t seed, int mode_count);

/// Geodesic tau |-> exp_p(tau v) on [0, 1]; open unless it happens to close.
CurvePtr geodesic_segment(const Point& p, const Tangent& v, int grid_size);

/// Curve through arbitrary analytic position/velocity oracles.
CurvePtr curve_from_oracle(const ManifoldPtr& m, int grid_size, bool closed,
                           CurveOracle position, CurveOracle vel = {},
                           const std::string& name = "oracle");

/// Deterministic g-orthonormal basis of the tangent space at c(0).
Eigen::MatrixXd default_initial_frame(const Curve& c);

}  // namespace levylap
