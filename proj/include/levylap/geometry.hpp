#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace levylap {

class ManifoldSpec;
using ManifoldPtr = std::shared_ptr<const ManifoldSpec>;

enum class ManifoldKind { Euclidean, FlatTorus, Sphere2 };

/// Concrete Riemannian manifolds with closed-form metric, Christoffel
/// symbols, curvature and exponential map. The sphere is kept in its
/// ambient unit-vector embedding; the torus reduces coordinates modulo
/// its periods at construction.
class ManifoldSpec {
public:
    static ManifoldPtr euclidean(int dim);
    static ManifoldPtr flat_torus(Eigen::VectorXd periods);
    static ManifoldPtr sphere2(double radius);

    ManifoldKind kind() const { return kind_; }
    bool flat() const { return kind_ != ManifoldKind::Sphere2; }

    /// Intrinsic dimension (always 2 for the sphere).
    int dim() const { return dim_; }
    /// Length of coordinate vectors (3 for the embedded sphere).
    int ambient_dim() const { return kind_ == ManifoldKind::Sphere2 ? 3 : dim_; }

    const Eigen::VectorXd& periods() const;
    double radius() const;

    bool same_as(const ManifoldSpec& other) const;
    std::string describe() const;

    /// Torus: componentwise reduction into [0, period). Identity elsewhere.
    Eigen::VectorXd reduce(Eigen::VectorXd coords) const;

    /// Displacement from -> to; torus uses the minimal-image convention.
    Eigen::VectorXd displacement(const Eigen::VectorXd& from,
                                 const Eigen::VectorXd& to) const;

private:
    ManifoldSpec() = default;

    ManifoldKind kind_ = ManifoldKind::Euclidean;
    int dim_ = 0;
    Eigen::VectorXd periods_;
    double radius_ = 0.0;
};

struct Point {
    ManifoldPtr manifold;
    Eigen::VectorXd coords;
};

struct Tangent {
    Point base;
    Eigen::VectorXd vec;
};

/// Validates the coordinate invariants (torus range, sphere norm) and
/// normalizes away sub-1e-9 drift on the sphere.
Point make_point(ManifoldPtr manifold, Eigen::VectorXd coords);

/// Projects the vector into the tangent space at base (a no-op on flat
/// manifolds) and rejects grossly non-tangential input.
Tangent make_tangent(Point base, Eigen::VectorXd vec);

/// Tangential projection of an ambient vector at p.
Eigen::VectorXd project_tangent(const Point& p, const Eigen::VectorXd& v);

bool same_point(const Point& p, const Point& q, double tol = 1e-9);

double metric_inner(const Tangent& u, const Tangent& v);
double metric_norm(const Tangent& u);

/// Gamma(p)(u, v); symmetric in u and v. For the embedded sphere this is
/// the normal-projection correction (u.v / rho^2) p, so that the covariant
/// derivative along a curve is d/dtau + Gamma(., gammadot).
Tangent christoffel_apply(const Point& p, const Tangent& u, const Tangent& v);

/// R(p)<x, y, z> = R(x, y)z. Zero on flat manifolds; the constant-curvature
/// closed form (g(y,z)x - g(x,z)y) / rho^2 on the sphere.
Tangent curvature_apply(const Point& p, const Tangent& x, const Tangent& y,
                        const Tangent& z);

/// Geodesic endpoint exp_p(v).
Point exp_point(const Point& p, const Tangent& v);

/// Geodesic distance (minimal image on the torus, great circle on the sphere).
double distance(const Point& p, const Point& q);

}  // namespace levylap
