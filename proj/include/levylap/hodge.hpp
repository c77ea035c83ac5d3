#pragma once

#include "levylap/pathspace.hpp"

#include <complex>
#include <functional>
#include <map>
#include <utility>

#include "json.hpp"

namespace levylap {

/// Truncated spectral 0-form on a flat 2-torus or round 2-sphere.
///
/// Torus: coefficients over wave vectors k = (k1, k2) with |k_i| <= K, for
/// the basis exp(2 pi i (k1 x1 / P1 + k2 x2 / P2)); real-valuedness is the
/// conjugate symmetry c_{-k} = conj(c_k). Sphere: real coefficients over
/// (l, m) with l <= L for the real spherical harmonics Y_{l,m}(x / rho).
class ScalarForm {
public:
    ScalarForm(ManifoldPtr manifold, int truncation);

    const ManifoldPtr& manifold() const { return manifold_; }
    int truncation() const { return truncation_; }
    const std::map<std::pair<int, int>, std::complex<double>>& coeffs() const {
        return coeffs_;
    }

    /// Adds c * basis(a, b) (+ the conjugate mode on the torus, so the
    /// result stays real). Torus (a, b) = wave vector; sphere (a, b) = (l, m)
    /// with a real coefficient.
    ScalarForm& add_mode(int a, int b, std::complex<double> c);

    /// Torus helpers building real combinations in one call.
    ScalarForm& add_cos(int k1, int k2, double amplitude);
    ScalarForm& add_sin(int k1, int k2, double amplitude);

    std::complex<double> coeff(int a, int b) const;
    bool is_zero(double tol = 0.0) const;

    /// Laplace-Beltrami eigenvalue of the (a, b) basis mode (<= 0).
    double eigenvalue(int a, int b) const;

    /// Checks conjugate symmetry / reality within 1e-14.
    void check_invariants() const;

    /// Copy with every coefficient multiplied by fn(its eigenvalue); the
    /// spectral form of Laplacians, propagators and projections.
    ScalarForm mapped(const std::function<double(double)>& fn) const;

private:
    ManifoldPtr manifold_;
    int truncation_ = 0;
    std::map<std::pair<int, int>, std::complex<double>> coeffs_;
};

/// Hodge-decomposed 1-form a = d(alpha) + harmonic + *d(beta). The scalar
/// potentials have no mean mode; the harmonic part exists only on the torus
/// (components h1 dx1 + h2 dx2).
struct OneForm {
    ScalarForm alpha;
    ScalarForm beta;
    Eigen::Vector2d harmonic = Eigen::Vector2d::Zero();

    const ManifoldPtr& manifold() const { return alpha.manifold(); }
    int truncation() const { return alpha.truncation(); }
};

OneForm zero_oneform(ManifoldPtr manifold, int truncation);

/// +90 degree rotation of a tangent vector: (x, y) -> (-y, x) on flat
/// surfaces, v -> n x v on the embedded sphere (outward normal n).
Eigen::VectorXd rotate90(const Point& p, const Eigen::VectorXd& v);

// --- exterior calculus ---

OneForm exterior_d(const ScalarForm& f);

/// delta a = -(Laplacian of the exact potential); coexact and harmonic
/// parts are annihilated.
ScalarForm codifferential(const OneForm& a);

/// Scalar phi with da = phi * vol (the curl); phi = Laplacian of beta.
ScalarForm curl_scalar(const OneForm& a);

/// delta d a: the coexact 1-form with potential -(Laplacian of beta).
OneForm delta_d(const OneForm& a);

ScalarForm hodge_laplacian(const ScalarForm& f);
OneForm hodge_laplacian(const OneForm& a);

ScalarForm heat_propagate(const ScalarForm& f, double t);
OneForm heat_propagate(const OneForm& a, double t);

ScalarForm harmonic_projection(const ScalarForm& f);
OneForm harmonic_projection(const OneForm& a);

// --- pointwise synthesis ---

double eval_scalar(const ScalarForm& f, const Point& p);

/// Riemannian gradient as an ambient tangent vector.
Eigen::VectorXd scalar_gradient(const ScalarForm& f, const Point& p);

/// Covariant Hessian evaluated on the columns of `frame` (ambient
/// orthonormal tangent vectors): H(mu, nu) = Hess f(E_mu, E_nu).
Eigen::MatrixXd scalar_hessian(const ScalarForm& f, const Point& p,
                               const Eigen::MatrixXd& frame);

double eval_oneform(const OneForm& a, const Tangent& v);

/// Metric-dual vector of a at p (ambient tangent vector).
Eigen::VectorXd oneform_vector(const OneForm& a, const Point& p);

double line_integral(const OneForm& a, const Curve& c);

// --- inner products (spectral Parseval) ---

double g_inner(const ScalarForm& f, const ScalarForm& g);
double g_inner(const OneForm& a, const OneForm& b);
double g_norm(const OneForm& a);

// --- projection of pointwise data onto the truncated basis ---

ScalarForm project_scalar(const ManifoldPtr& m, int truncation,
                          const std::function<double(const Point&)>& f);

/// Projects a pointwise 1-form given by its metric-dual vector field.
OneForm project_oneform(const ManifoldPtr& m, int truncation,
                        const std::function<Eigen::VectorXd(const Point&)>& a);

// --- serialization ---

nlohmann::json manifold_to_json(const ManifoldPtr& m);
ManifoldPtr manifold_from_json(const nlohmann::json& j);
nlohmann::json scalar_to_json(const ScalarForm& f);
ScalarForm scalar_from_json(const nlohmann::json& j);
nlohmann::json oneform_to_json(const OneForm& a);
OneForm oneform_from_json(const nlohmann::json& j);

}  // namespace levylap
