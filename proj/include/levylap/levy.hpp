#pragma once

#include "levylap/functionals.hpp"
#include "levylap/transport.hpp"

namespace levylap {

/// Cesaro-mean estimate of the Levy Laplacian: partial sums of second
/// directional differences along the transported sine basis, with a 1/n
/// tail fit for the extrapolated limit.
struct CesaroReport {
    std::vector<double> partial_sums;  // S_n for n = 1..n_max
    std::vector<double> per_mode;      // sum over frame directions, per k
    double h = 0.0;                    // finite-difference step
    int grid_size = 0;                 // curve grid N
    int n_max = 0;
    double limit = 0.0;         // extrapolated S_infinity
    double fit_residual = 0.0;  // RMS misfit of S_n ~ S_inf + A/n on the tail
};

/// Nodewise Levy kernel of a functional along a curve, in the transported
/// frame: K^L symmetric (its metric trace integrates to the Levy
/// divergence), K^S antisymmetric (traceless; kept for diagnostics). The
/// Volterra part K^V is traceless for every supported functional and never
/// materialized.
struct LevyKernelSample {
    CurvePtr curve;
    std::vector<Eigen::MatrixXd> KL;  // (N+1) d x d, symmetric
    std::vector<Eigen::MatrixXd> KS;  // (N+1) d x d, antisymmetric
};

/// H^0-gradient (L2 pairing) of F along c, sampled at the grid nodes.
VectorFieldAlongCurve h0_gradient(const PathFunctional& F, const CurvePtr& c);

LevyKernelSample levy_kernel(const PathFunctional& F, const CurvePtr& c);

/// Trapezoid of tr_g K^L over the parameter.
double levy_divergence(const LevyKernelSample& k);

/// Closed-form Levy Laplacian via the atom formulas, the Leibniz rule on
/// products and the chain rule on compositions.
double levy_analytic(const PathFunctional& F, const Curve& c);

CesaroReport levy_cesaro(const PathFunctional& F, const CurvePtr& c,
                         int n_max = 32, double h = 1e-3);

/// Best-effort variant for opaque curve functionals.
CesaroReport levy_cesaro(const std::function<double(const Curve&)>& F,
                         const CurvePtr& c, int n_max = 32, double h = 1e-3);

/// Levy Laplacian of the phase functional U^a = exp(-i Theta_a), by the
/// chain rule: -i U^a(c) * (Levy Laplacian of Theta_a at c).
std::complex<double> levy_u_laplacian(const OneForm& a, const Curve& c);

/// H^0-gradient of U^a: -i U^a(c) * h0_gradient(Theta_a); returned as the
/// (real, imaginary) pair of vector fields.
std::pair<VectorFieldAlongCurve, VectorFieldAlongCurve> levy_u_gradient(
    const OneForm& a, const CurvePtr& c);

}  // namespace levylap
