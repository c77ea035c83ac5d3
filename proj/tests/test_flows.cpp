#include "doctest.h"

#include "levylap/flows.hpp"
#include "levylap/pathspace.hpp"

#include <cmath>
#include <numbers>

using namespace levylap;

namespace {

constexpr double kPi = std::numbers::pi;

ManifoldPtr unit_torus() {
    return ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
}

OneForm sin2pix_dy(const ManifoldPtr& torus) {
    OneForm a = zero_oneform(torus, 8);
    a.beta.add_cos(1, 0, -1.0 / (2.0 * kPi));
    return a;
}

/// a0 = sin(2pi x) dy + dy: coexact mode decaying at rate -4pi^2 plus a
/// frozen harmonic part.
OneForm mixed_form(const ManifoldPtr& torus) {
    OneForm a = sin2pix_dy(torus);
    a.harmonic = Eigen::Vector2d(0.0, 1.0);
    return a;
}

CurvePtr vertical_loop(const ManifoldPtr& torus, int n = 256) {
    return torus_winding(torus, n, 0, 1, Eigen::Vector2d(0.25, 0.0));
}

}  // namespace

TEST_CASE("heat_functional on the worked examples") {
    auto torus = unit_torus();
    auto loop = vertical_loop(torus);

    auto theta = make_theta(mixed_form(torus));
    CHECK(eval(*heat_functional(*theta, 0.0), *loop) ==
          doctest::Approx(eval(*theta, *loop)));

    // Single nonconstant mode scales by e^{-4 pi^2 t}.
    ScalarForm f(torus, 8);
    f.add_cos(1, 0, 1.0);
    f.add_mode(0, 0, 0.5);
    auto lf = make_lf(f);
    Point p = make_point(torus, Eigen::Vector2d(0.1, 0.0));
    auto seg = geodesic_segment(p, make_tangent(p, Eigen::Vector2d(0.0, 1.0)),
                                256);
    double base = eval(*lf, *seg) - 0.5;
    for (double t : {0.01, 0.1}) {
        double flowed = eval(*heat_functional(*lf, t), *seg);
        CHECK(flowed - 0.5 ==
              doctest::Approx(base * std::exp(-4.0 * kPi * kPi * t)));
    }

    // Harmonic leaves are fixed points.
    OneForm dy = zero_oneform(torus, 8);
    dy.harmonic = Eigen::Vector2d(0.0, 1.0);
    auto hdy = make_theta(dy);
    CHECK(eval(*heat_functional(*hdy, 0.3), *loop) ==
          doctest::Approx(eval(*hdy, *loop)));

    CHECK_THROWS_AS(heat_functional(*theta, -0.1), std::invalid_argument);
}

TEST_CASE("levy_heat_residual stays at quadrature accuracy") {
    auto torus = unit_torus();
    auto loop = vertical_loop(torus, 1024);

    // Harmonic leaves: both sides vanish identically.
    OneForm dy = zero_oneform(torus, 8);
    dy.harmonic = Eigen::Vector2d(0.0, 1.0);
    CHECK(levy_heat_residual(*make_theta(dy), *loop, 0.1) <= 1e-12);

    auto theta = make_theta(sin2pix_dy(torus));
    for (double t : {0.01, 0.05, 0.1, 0.5})
        CHECK(levy_heat_residual(*theta, *loop, t) <= 1e-6);

    auto squared = make_compose("square", {theta});
    for (double t : {0.01, 0.1})
        CHECK(levy_heat_residual(*squared, *loop, t) <= 1e-6);

    // Sphere route.
    auto sphere = ManifoldSpec::sphere2(1.0);
    OneForm a = zero_oneform(sphere, 8);
    a.beta.add_mode(2, 1, 0.8);
    auto lat = sphere_latitude(sphere, 1024, kPi / 3.0);
    for (double t : {0.01, 0.1})
        CHECK(levy_heat_residual(*make_theta(a), *lat, t) <= 1e-6);

    CHECK_THROWS_AS(levy_heat_residual(*theta, *loop, 0.1, 0.0),
                    std::invalid_argument);
}

TEST_CASE("long_time_limit on the worked examples") {
    auto torus = unit_torus();
    auto loop = vertical_loop(torus, 512);
    auto theta = make_theta(mixed_form(torus));

    // F(t) = e^{-4 pi^2 t} + 1: limit 1, rate -4 pi^2.
    std::vector<double> grid;
    for (int i = 0; i <= 45; ++i) grid.push_back(0.05 + 0.01 * i);
    auto [limit, rate] = long_time_limit(*theta, *loop, grid);
    CHECK(limit == doctest::Approx(1.0));
    CHECK(std::abs(rate + 4.0 * kPi * kPi) <=
          0.01 * 4.0 * kPi * kPi);

    // Sphere: no harmonic 1-forms, limit 0.
    auto sphere = ManifoldSpec::sphere2(1.0);
    OneForm a = zero_oneform(sphere, 8);
    a.beta.add_mode(2, 1, 0.8);
    auto lat = sphere_latitude(sphere, 512, kPi / 3.0);
    auto [slimit, srate] = long_time_limit(*make_theta(a), *lat, grid);
    CHECK(std::abs(slimit) < 1e-14);

    // Homotopic loops share the limit; winding classes differ by the
    // harmonic period.
    auto straight = torus_winding(torus, 512, 0, 1, Eigen::Vector2d(0.6, 0.0));
    auto wiggled =
        torus_winding(torus, 512, 0, 1, Eigen::Vector2d(0.2, 0.4), 0.12, 3, 5);
    auto twice = torus_winding(torus, 512, 0, 2, Eigen::Vector2d(0.6, 0.0));
    double l1 = long_time_limit(*theta, *straight, grid).first;
    double l2 = long_time_limit(*theta, *wiggled, grid).first;
    double l3 = long_time_limit(*theta, *twice, grid).first;
    CHECK(std::abs(l1 - l2) < 1e-8);
    CHECK(l3 - l1 == doctest::Approx(1.0));
}

TEST_CASE("ym_u1_flow on the worked examples") {
    auto torus = unit_torus();

    // Exact forms are fixed points.
    ScalarForm g(torus, 8);
    g.add_cos(2, 1, 0.7);
    OneForm da = exterior_d(g);
    OneForm flowed = ym_u1_flow(da, 0.4);
    Point probe = make_point(torus, Eigen::Vector2d(0.3, 0.1));
    CHECK((oneform_vector(flowed, probe) - oneform_vector(da, probe)).norm() <
          1e-14);

    // Harmonic forms are fixed points.
    OneForm dy = zero_oneform(torus, 8);
    dy.harmonic = Eigen::Vector2d(0.0, 1.0);
    CHECK((ym_u1_flow(dy, 1.0).harmonic - dy.harmonic).norm() == 0.0);
    CHECK(ym_u1_flow(dy, 1.0).beta.is_zero());

    // Coexact part decays like the Hodge flow.
    OneForm mixed = mixed_form(torus);
    OneForm ym = ym_u1_flow(mixed, 0.03);
    OneForm hodge = heat_propagate(mixed, 0.03);
    auto loop = vertical_loop(torus, 512);
    auto wiggled =
        torus_winding(torus, 512, 0, 1, Eigen::Vector2d(0.7, 0.2), 0.1, 2, 9);
    for (double t : {0.0, 0.01, 0.1, 0.7}) {
        OneForm yt = ym_u1_flow(mixed, t);
        OneForm ht = heat_propagate(mixed, t);
        CHECK(std::abs(line_integral(yt, *loop) - line_integral(ht, *loop)) <
              1e-10);
        CHECK(std::abs(line_integral(yt, *wiggled) -
                       line_integral(ht, *wiggled)) < 1e-10);
    }
    CHECK(std::abs(line_integral(ym, *loop) -
                   (std::exp(-4.0 * kPi * kPi * 0.03) + 1.0)) < 1e-10);
    (void)hodge;

    CHECK_THROWS_AS(ym_u1_flow(mixed, -1.0), std::invalid_argument);
}

TEST_CASE("u1_transport_heat_check residuals") {
    auto torus = unit_torus();
    auto loop = vertical_loop(torus, 1024);
    std::vector<double> grid = {0.01, 0.05, 0.1, 0.5};

    OneForm dy = zero_oneform(torus, 8);
    dy.harmonic = Eigen::Vector2d(0.0, 1.0);
    for (double r : u1_transport_heat_check(dy, *loop, grid))
        CHECK(r <= 1e-12);

    for (double r : u1_transport_heat_check(mixed_form(torus), *loop, grid))
        CHECK(r <= 1e-6);

    auto sphere = ManifoldSpec::sphere2(1.0);
    OneForm a = zero_oneform(sphere, 8);
    a.beta.add_mode(2, 1, 0.8);
    auto lat = sphere_latitude(sphere, 1024, kPi / 3.0);
    for (double r : u1_transport_heat_check(a, *lat, grid))
        CHECK(r <= 1e-6);

    auto open_seg = geodesic_segment(
        make_point(torus, Eigen::Vector2d(0.1, 0.2)),
        make_tangent(make_point(torus, Eigen::Vector2d(0.1, 0.2)),
                     Eigen::Vector2d(0.3, 0.4)),
        128);
    CHECK_THROWS_AS(u1_transport_heat_check(dy, *open_seg, grid),
                    std::invalid_argument);
}
