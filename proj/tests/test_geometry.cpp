#include "doctest.h"

#include "levylap/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace levylap;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d rand_vec3(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Eigen::Vector3d(u(rng), u(rng), u(rng));
}

Tangent rand_sphere_tangent(const Point& p, std::mt19937_64& rng) {
    return make_tangent(p, project_tangent(p, rand_vec3(rng)));
}

Point rand_sphere_point(const ManifoldPtr& m, std::mt19937_64& rng) {
    Eigen::Vector3d v = rand_vec3(rng);
    while (v.norm() < 0.1) v = rand_vec3(rng);
    return make_point(m, m->radius() * v.normalized());
}

// Geodesic ODE oracle for the sphere: integrates x'' = -(|x'|^2 / rho^2) x
// with small RK4 steps, independent of the closed-form exponential map.
Eigen::Vector3d geodesic_ode_endpoint(const Point& p, const Eigen::Vector3d& v,
                                      int steps) {
    double rho2 = p.manifold->radius() * p.manifold->radius();
    Eigen::Vector3d x = p.coords.head<3>(), u = v;
    double h = 1.0 / steps;
    auto acc = [&](const Eigen::Vector3d& xx, const Eigen::Vector3d& uu) {
        return Eigen::Vector3d(-(uu.squaredNorm() / rho2) * xx);
    };
    for (int i = 0; i < steps; ++i) {
        Eigen::Vector3d k1x = u, k1u = acc(x, u);
        Eigen::Vector3d k2x = u + 0.5 * h * k1u, k2u = acc(x + 0.5 * h * k1x, u + 0.5 * h * k1u);
        Eigen::Vector3d k3x = u + 0.5 * h * k2u, k3u = acc(x + 0.5 * h * k2x, u + 0.5 * h * k2u);
        Eigen::Vector3d k4x = u + h * k3u, k4u = acc(x + h * k3x, u + h * k3u);
        x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    }
    return x;
}

}  // namespace

TEST_CASE("manifold construction validates its invariants") {
    CHECK_THROWS_AS(ManifoldSpec::euclidean(0), std::invalid_argument);
    CHECK_THROWS_AS(ManifoldSpec::sphere2(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, -1.0)),
                    std::invalid_argument);
    auto sphere = ManifoldSpec::sphere2(2.0);
    CHECK(sphere->dim() == 2);
    CHECK(sphere->ambient_dim() == 3);
    CHECK_THROWS_AS(make_point(sphere, Eigen::Vector3d(1.0, 0.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("torus coordinates reduce into the fundamental cell") {
    auto torus = ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 2.0));
    Point p = make_point(torus, Eigen::Vector2d(1.25, -0.5));
    CHECK(p.coords[0] == doctest::Approx(0.25));
    CHECK(p.coords[1] == doctest::Approx(1.5));
}

TEST_CASE("metric_inner on the worked examples") {
    auto eucl = ManifoldSpec::euclidean(2);
    Point pe = make_point(eucl, Eigen::Vector2d(0.0, 0.0));
    CHECK(metric_inner(make_tangent(pe, Eigen::Vector2d(1, 0)),
                       make_tangent(pe, Eigen::Vector2d(0, 1))) == 0.0);

    auto sphere = ManifoldSpec::sphere2(1.0);
    Point ps = make_point(sphere, Eigen::Vector3d(0, 0, 1));
    Tangent u = make_tangent(ps, Eigen::Vector3d(1, 0, 0));
    CHECK(metric_inner(u, u) == doctest::Approx(1.0));

    auto torus = ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
    Point pt = make_point(torus, Eigen::Vector2d(0.1, 0.2));
    Tangent w = make_tangent(pt, Eigen::Vector2d(3, 4));
    CHECK(metric_inner(w, w) == doctest::Approx(25.0));

    Point other = make_point(torus, Eigen::Vector2d(0.3, 0.2));
    CHECK_THROWS_AS(metric_inner(w, make_tangent(other, Eigen::Vector2d(1, 0))),
                    std::invalid_argument);
}

TEST_CASE("metric is symmetric positive definite on random tangents") {
    auto sphere = ManifoldSpec::sphere2(1.5);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Point p = rand_sphere_point(sphere, rng);
        Tangent u = rand_sphere_tangent(p, rng);
        Tangent v = rand_sphere_tangent(p, rng);
        CHECK(metric_inner(u, v) == doctest::Approx(metric_inner(v, u)));
        if (u.vec.norm() > 0) {
            Tangent unit = make_tangent(p, u.vec.normalized());
            CHECK(metric_inner(unit, unit) > 1.0 - 1e-12);
        }
    }
}

TEST_CASE("christoffel symbols vanish on flat manifolds") {
    auto torus = ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
    Point p = make_point(torus, Eigen::Vector2d(0.3, 0.7));
    Tangent u = make_tangent(p, Eigen::Vector2d(1.0, -2.0));
    CHECK(christoffel_apply(p, u, u).vec.norm() == 0.0);
}

TEST_CASE("sphere christoffel is the normal correction") {
    auto sphere = ManifoldSpec::sphere2(1.0);
    Point p = make_point(sphere, Eigen::Vector3d(0, 0, 1));
    Tangent u = make_tangent(p, Eigen::Vector3d(1, 0, 0));
    Eigen::Vector3d g = christoffel_apply(p, u, u).vec;
    CHECK((g - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);

    // Symmetry and a finite-difference oracle: the normal part of the
    // ambient derivative of the projected field t -> P_{exp_p(tu)} v
    // equals -Gamma(v, u).
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Point q = rand_sphere_point(sphere, rng);
        Tangent a = rand_sphere_tangent(q, rng);
        Tangent b = rand_sphere_tangent(q, rng);
        CHECK((christoffel_apply(q, a, b).vec - christoffel_apply(q, b, a).vec)
                  .norm() == 0.0);

        double h = 1e-5;
        auto project_along = [&](double t) {
            Point moved = exp_point(q, Tangent{q, t * a.vec});
            return project_tangent(moved, b.vec);
        };
        Eigen::VectorXd xdot = (project_along(h) - project_along(-h)) / (2.0 * h);
        Eigen::VectorXd normal_part = (xdot.dot(q.coords)) * q.coords;
        CHECK((normal_part + christoffel_apply(q, b, a).vec).norm() < 1e-7);
    }
}

TEST_CASE("curvature tensor on the worked examples and identities") {
    auto torus = ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
    Point pt = make_point(torus, Eigen::Vector2d(0.1, 0.1));
    Tangent w = make_tangent(pt, Eigen::Vector2d(1.0, 2.0));
    CHECK(curvature_apply(pt, w, w, w).vec.norm() == 0.0);

    auto sphere = ManifoldSpec::sphere2(1.0);
    Point p = make_point(sphere, Eigen::Vector3d(0, 0, 1));
    Tangent x = make_tangent(p, Eigen::Vector3d(1, 0, 0));
    Tangent y = make_tangent(p, Eigen::Vector3d(0, 1, 0));
    CHECK((curvature_apply(p, x, y, y).vec - Eigen::Vector3d(1, 0, 0)).norm() <
          1e-14);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Point q = rand_sphere_point(sphere, rng);
        Tangent a = rand_sphere_tangent(q, rng);
        Tangent b = rand_sphere_tangent(q, rng);
        Tangent c = rand_sphere_tangent(q, rng);
        CHECK((curvature_apply(q, a, b, c).vec + curvature_apply(q, b, a, c).vec)
                  .norm() == 0.0);
        Eigen::VectorXd bianchi = curvature_apply(q, a, b, c).vec +
                                  curvature_apply(q, b, c, a).vec +
                                  curvature_apply(q, c, a, b).vec;
        CHECK(bianchi.norm() < 1e-12);
    }
}

TEST_CASE("exponential map on the worked examples") {
    auto torus = ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
    Point p = make_point(torus, Eigen::Vector2d(0.9, 0.0));
    Point q = exp_point(p, make_tangent(p, Eigen::Vector2d(0.2, 0.0)));
    CHECK(q.coords[0] == doctest::Approx(0.1));
    CHECK(q.coords[1] == doctest::Approx(0.0));

    auto sphere = ManifoldSpec::sphere2(1.0);
    Point pole = make_point(sphere, Eigen::Vector3d(0, 0, 1));
    Point zero = exp_point(pole, make_tangent(pole, Eigen::Vector3d(0, 0, 0)));
    CHECK((zero.coords - pole.coords).norm() == 0.0);
    Point east =
        exp_point(pole, make_tangent(pole, Eigen::Vector3d(kPi / 2.0, 0, 0)));
    CHECK((east.coords - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14);
}

TEST_CASE("sphere exp matches the geodesic ODE oracle") {
    auto sphere = ManifoldSpec::sphere2(1.3);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Point p = rand_sphere_point(sphere, rng);
        Tangent v = rand_sphere_tangent(p, rng);
        Point closed_form = exp_point(p, v);
        Eigen::Vector3d ode = geodesic_ode_endpoint(p, v.vec, 2000);
        CHECK((closed_form.coords - ode).norm() < 1e-9);
        CHECK(std::abs(closed_form.coords.norm() - 1.3) < 1e-12);
        if (v.vec.norm() < kPi * 1.3)
            CHECK(distance(p, closed_form) ==
                  doctest::Approx(v.vec.norm()).epsilon(1e-10));
    }
}

TEST_CASE("torus distance uses the minimal image") {
    auto torus = ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
    Point a = make_point(torus, Eigen::Vector2d(0.05, 0.0));
    Point b = make_point(torus, Eigen::Vector2d(0.95, 0.0));
    CHECK(distance(a, b) == doctest::Approx(0.1));
}
