#include "levylap/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace levylap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ManifoldPtr ManifoldSpec::euclidean(int dim) {
    require(dim >= 1, "euclidean: dim must be >= 1");
    auto m = std::shared_ptr<ManifoldSpec>(new ManifoldSpec());
    m->kind_ = ManifoldKind::Euclidean;
    m->dim_ = dim;
    return m;
}

ManifoldPtr ManifoldSpec::flat_torus(Eigen::VectorXd periods) {
    require(periods.size() >= 1, "flat_torus: dim must be >= 1");
    require((periods.array() > 0.0).all(), "flat_torus: periods must be positive");
    auto m = std::shared_ptr<ManifoldSpec>(new ManifoldSpec());
    m->kind_ = ManifoldKind::FlatTorus;
    m->dim_ = static_cast<int>(periods.size());
    m->periods_ = std::move(periods);
    return m;
}

ManifoldPtr ManifoldSpec::sphere2(double radius) {
    require(radius > 0.0, "sphere2: radius must be positive");
    auto m = std::shared_ptr<ManifoldSpec>(new ManifoldSpec());
    m->kind_ = ManifoldKind::Sphere2;
    m->dim_ = 2;
    m->radius_ = radius;
    return m;
}

const Eigen::VectorXd& ManifoldSpec::periods() const {
    require(kind_ == ManifoldKind::FlatTorus, "periods(): not a torus");
    return periods_;
}

double ManifoldSpec::radius() const {
    require(kind_ == ManifoldKind::Sphere2, "radius(): not a sphere");
    return radius_;
}

bool ManifoldSpec::same_as(const ManifoldSpec& other) const {
    if (this == &other) return true;
    if (kind_ != other.kind_ || dim_ != other.dim_) return false;
    switch (kind_) {
        case ManifoldKind::Euclidean: return true;
        case ManifoldKind::FlatTorus: return periods_ == other.periods_;
        case ManifoldKind::Sphere2: return radius_ == other.radius_;
    }
    return false;
}

std::string ManifoldSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case ManifoldKind::Euclidean:
            os << "euclidean(" << dim_ << ")";
            break;
        case ManifoldKind::FlatTorus:
            os << "flat_torus(";
            for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << periods_[i];
            os << ")";
            break;
        case ManifoldKind::Sphere2:
            os << "sphere2(" << radius_ << ")";
            break;
    }
    return os.str();
}

Eigen::VectorXd ManifoldSpec::reduce(Eigen::VectorXd coords) const {
    if (kind_ != ManifoldKind::FlatTorus) return coords;
    for (int i = 0; i < dim_; ++i) {
        double p = periods_[i];
        double r = std::fmod(coords[i], p);
        if (r < 0.0) r += p;
        if (r == p) r = 0.0;
        coords[i] = r;
    }
    return coords;
}

Eigen::VectorXd ManifoldSpec::displacement(const Eigen::VectorXd& from,
                                           const Eigen::VectorXd& to) const {
    Eigen::VectorXd d = to - from;
    if (kind_ == ManifoldKind::FlatTorus) {
        for (int i = 0; i < dim_; ++i) {
            double p = periods_[i];
            d[i] -= p * std::round(d[i] / p);
        }
    }
    return d;
}

Point make_point(ManifoldPtr manifold, Eigen::VectorXd coords) {
    require(manifold != nullptr, "make_point: null manifold");
    require(coords.size() == manifold->ambient_dim(),
            "make_point: coordinate length does not match the manifold");
    if (manifold->kind() == ManifoldKind::Sphere2) {
        double rho = manifold->radius();
        double n = coords.norm();
        require(std::abs(n - rho) <= 1e-9 * rho,
                "make_point: sphere coordinates off the sphere");
        coords *= rho / n;
    } else {
        coords = manifold->reduce(std::move(coords));
    }
    return Point{std::move(manifold), std::move(coords)};
}

Eigen::VectorXd project_tangent(const Point& p, const Eigen::VectorXd& v) {
    if (p.manifold->kind() != ManifoldKind::Sphere2) return v;
    double rho2 = p.manifold->radius() * p.manifold->radius();
    return v - (p.coords.dot(v) / rho2) * p.coords;
}

Tangent make_tangent(Point base, Eigen::VectorXd vec) {
    require(vec.size() == base.manifold->ambient_dim(),
            "make_tangent: vector length does not match the manifold");
    if (base.manifold->kind() == ManifoldKind::Sphere2) {
        double rho = base.manifold->radius();
        double normal = base.coords.dot(vec) / rho;
        require(std::abs(normal) <= 1e-6 * (1.0 + vec.norm()),
                "make_tangent: vector is not tangent to the sphere");
        vec = project_tangent(base, vec);
    }
    return Tangent{std::move(base), std::move(vec)};
}

bool same_point(const Point& p, const Point& q, double tol) {
    if (!p.manifold->same_as(*q.manifold)) return false;
    return p.manifold->displacement(p.coords, q.coords).norm() <= tol;
}

namespace {

void require_same_base(const Tangent& u, const Tangent& v, const char* op) {
    if (!same_point(u.base, v.base))
        throw std::invalid_argument(std::string(op) + ": mismatched base points");
}

}  // namespace

double metric_inner(const Tangent& u, const Tangent& v) {
    require_same_base(u, v, "metric_inner");
    // Flat metrics and the embedded round metric are both the ambient dot.
    return u.vec.dot(v.vec);
}

double metric_norm(const Tangent& u) { return u.vec.norm(); }

Tangent christoffel_apply(const Point& p, const Tangent& u, const Tangent& v) {
    require_same_base(u, v, "christoffel_apply");
    if (!same_point(p, u.base))
        throw std::invalid_argument("christoffel_apply: mismatched base points");
    if (p.manifold->flat())
        return Tangent{p, Eigen::VectorXd::Zero(p.coords.size())};
    double rho2 = p.manifold->radius() * p.manifold->radius();
    return Tangent{p, (u.vec.dot(v.vec) / rho2) * p.coords};
}

Tangent curvature_apply(const Point& p, const Tangent& x, const Tangent& y,
                        const Tangent& z) {
    require_same_base(x, y, "curvature_apply");
    require_same_base(y, z, "curvature_apply");
    if (p.manifold->flat())
        return Tangent{p, Eigen::VectorXd::Zero(p.coords.size())};
    double rho2 = p.manifold->radius() * p.manifold->radius();
    Eigen::VectorXd r =
        (y.vec.dot(z.vec) * x.vec - x.vec.dot(z.vec) * y.vec) / rho2;
    return Tangent{p, std::move(r)};
}

Point exp_point(const Point& p, const Tangent& v) {
    if (!same_point(p, v.base))
        throw std::invalid_argument("exp_point: vector not based at p");
    if (p.manifold->flat())
        return make_point(p.manifold, p.coords + v.vec);
    double rho = p.manifold->radius();
    double len = v.vec.norm();
    if (len == 0.0) return p;
    double angle = len / rho;
    Eigen::VectorXd dir = v.vec / len;
    return make_point(p.manifold,
                      std::cos(angle) * p.coords + rho * std::sin(angle) * dir);
}

double distance(const Point& p, const Point& q) {
    if (!p.manifold->same_as(*q.manifold))
        throw std::invalid_argument("distance: points on different manifolds");
    if (p.manifold->flat())
        return p.manifold->displacement(p.coords, q.coords).norm();
    double rho = p.manifold->radius();
    Eigen::Vector3d a = p.coords.head<3>();
    Eigen::Vector3d b = q.coords.head<3>();
    double c = a.dot(b) / (rho * rho);
    double s = a.cross(b).norm() / (rho * rho);
    return rho * std::atan2(s, c);
}

}  // namespace levylap
