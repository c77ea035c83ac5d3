#pragma once

#include "levylap/pathspace.hpp"

namespace levylap {

/// Parallel transport of v0 from c(0) to the grid node `target_node` by a
/// classical 4th-order one-step integrator with fixed step 1/N. Sphere
/// solutions are re-projected to the tangent space after each step.
Tangent parallel_transport(const Curve& c, const Tangent& v0, int target_node);

/// Transport of a g-orthonormal initial basis (ambient_dim x d columns) to
/// every node. Gram-Schmidt renormalization per step is on by default; the
/// worst pre-renormalization drift is recorded on the result.
TransportedFrame transport_frame(const CurvePtr& c,
                                 const Eigen::MatrixXd& initial_basis,
                                 bool renormalize = true);
TransportedFrame transport_frame(const CurvePtr& c, bool renormalize = true);

/// Matrix of Q_{1,0}(c) in the given initial frame; requires a closed curve.
Eigen::MatrixXd holonomy(const Curve& c);
Eigen::MatrixXd holonomy(const Curve& c, const Eigen::MatrixXd& initial_basis);

/// Rotation angle of a 2x2 orthogonal matrix with determinant +1, in (-pi, pi].
double rotation_angle(const Eigen::MatrixXd& h);

/// Derivative of the transported field h2 along the variation field h1,
/// evaluated at the node `target_node` (Levi-Civita transport):
///   -int_0^{tau2} Q_{tau2,tau1} R(gamma(tau1))<Q_{tau1,0} h2(tau2),
///                                h1(tau1), gammadot(tau1)> dtau1
///   - Gamma(gamma(tau2))<h2~(tau2), h1(tau2)>
/// h2 is given by its components in the transported frame at every node.
/// The result is an ambient vector at c(target_node): the Christoffel term
/// carries a normal component on embedded manifolds.
Eigen::VectorXd transport_differential(
    const Curve& c, const TransportedFrame& frame,
    const VectorFieldAlongCurve& h1,
    const std::vector<Eigen::VectorXd>& h2_components, int target_node);

}  // namespace levylap
