#include "doctest.h"

#include "levylap/functionals.hpp"
#include "levylap/pathspace.hpp"

#include <cmath>
#include <numbers>

using namespace levylap;

namespace {

constexpr double kPi = std::numbers::pi;

ManifoldPtr unit_torus() {
    return ManifoldSpec::flat_torus(Eigen::Vector2d(1.0, 1.0));
}

OneForm sin2pix_dy(const ManifoldPtr& torus, double amplitude = 1.0) {
    OneForm a = zero_oneform(torus, 8);
    a.beta.add_cos(1, 0, -amplitude / (2.0 * kPi));
    return a;
}

OneForm harmonic_dy(const ManifoldPtr& torus) {
    OneForm a = zero_oneform(torus, 8);
    a.harmonic = Eigen::Vector2d(0.0, 1.0);
    return a;
}

ScalarForm sphere_z(const ManifoldPtr& sphere) {
    ScalarForm f(sphere, 8);
    f.add_mode(1, 0, sphere->radius() * std::sqrt(4.0 * kPi / 3.0));
    return f;
}

CurvePtr vertical_loop(const ManifoldPtr& torus, int n = 128) {
    return torus_winding(torus, n, 0, 1, Eigen::Vector2d(0.25, 0.0));
}

}  // namespace

TEST_CASE("eval on the worked examples") {
    auto torus = unit_torus();
    auto sphere = ManifoldSpec::sphere2(1.0);

    auto c3 = make_constant(3.0);
    CHECK(eval(*c3, *vertical_loop(torus)) == 3.0);

    auto lz = make_lf(sphere_z(sphere));
    auto equator = sphere_latitude(sphere, 128, kPi / 2.0);
    CHECK(std::abs(eval(*lz, *equator)) < 1e-14);

    auto theta = make_theta(sin2pix_dy(torus));
    CHECK(eval(*theta, *vertical_loop(torus)) == doctest::Approx(1.0));

    CHECK_THROWS_AS(eval(*theta, *equator), std::invalid_argument);
    CHECK_THROWS_AS(
        make_product({theta, lz}), std::invalid_argument);
}

TEST_CASE("products and compositions evaluate recursively") {
    auto torus = unit_torus();
    auto loop = vertical_loop(torus);

    auto theta = make_theta(sin2pix_dy(torus));
    auto prod = make_product({theta, theta, make_constant(2.0)});
    double t = eval(*theta, *loop);
    CHECK(eval(*prod, *loop) == t * t * 2.0);

    auto squared = make_compose("square", {theta});
    CHECK(eval(*squared, *loop) == doctest::Approx(t * t));
    auto cosu = make_compose("cos", {theta});
    CHECK(eval(*cosu, *loop) == doctest::Approx(std::cos(t)));

    CHECK_THROWS_AS(make_compose("square", {theta, theta}),
                    std::invalid_argument);
    CHECK_THROWS_AS(smooth_map_registry("nonexistent"), std::invalid_argument);

    auto mapped = map_leaves(
        *prod, [](const ScalarForm& f) { return f; },
        [](const OneForm& a) {
            OneForm out = a;
            out.beta = a.beta.mapped([](double) { return 2.0; });
            return out;
        });
    CHECK(eval(*mapped, *loop) == doctest::Approx(4.0 * t * t * 2.0));
}

TEST_CASE("eval_u on the worked examples") {
    auto torus = unit_torus();
    auto loop = vertical_loop(torus);

    CHECK(eval_u(zero_oneform(torus, 4), *loop) ==
          std::complex<double>(1.0, 0.0));

    // Theta = pi: scaled fixture.
    std::complex<double> u = eval_u(sin2pix_dy(torus, kPi), *loop);
    CHECK(std::abs(u - std::complex<double>(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(std::abs(u) - 1.0) < 1e-15);

    // Concatenation of straight representatives multiplies the values:
    // winding (0,1) twice equals winding (0,2) under dy.
    OneForm dy = harmonic_dy(torus);
    auto once = torus_winding(torus, 128, 0, 1, Eigen::Vector2d(0.1, 0.0));
    auto twice = torus_winding(torus, 256, 0, 2, Eigen::Vector2d(0.1, 0.0));
    std::complex<double> u1 = eval_u(dy, *once);
    std::complex<double> u2 = eval_u(dy, *twice);
    CHECK(std::abs(u1 * u1 - u2) < 1e-12);
}

TEST_CASE("homotopy invariance of closed forms") {
    auto torus = unit_torus();
    OneForm dy = harmonic_dy(torus);

    auto straight = torus_winding(torus, 256, 0, 1, Eigen::Vector2d(0.3, 0.0));
    auto perturbed =
        torus_winding(torus, 256, 0, 1, Eigen::Vector2d(0.7, 0.2), 0.15, 3, 11);
    CHECK(homotopy_invariant_check(dy, *straight, *perturbed) < 1e-8);

    // Exact forms vanish on every loop.
    ScalarForm f(torus, 4);
    f.add_cos(2, 1, 0.7);
    OneForm df = exterior_d(f);
    CHECK(std::abs(line_integral(df, *straight)) < 1e-10);
    CHECK(homotopy_invariant_check(df, *straight, *perturbed) < 1e-10);

    // Negative control: different winding classes differ by 1.
    auto horizontal = torus_winding(torus, 256, 1, 0, Eigen::Vector2d(0.0, 0.4));
    CHECK(homotopy_invariant_check(dy, *horizontal, *straight) ==
          doctest::Approx(1.0));

    // Non-closed form is rejected.
    CHECK_THROWS_AS(homotopy_invariant_check(sin2pix_dy(torus), *straight,
                                             *perturbed),
                    std::invalid_argument);
}

TEST_CASE("build_eigenfunctional on the worked examples") {
    auto sphere = ManifoldSpec::sphere2(1.0);
    auto [lz, lam_z] = build_eigenfunctional({sphere_z(sphere)}, {});
    CHECK(lam_z == doctest::Approx(-2.0));
    CHECK(lz->kind == PathFunctional::Kind::Lf);

    auto torus = unit_torus();
    ScalarForm f(torus, 8);
    f.add_cos(1, 0, 1.0);
    auto [prod, lam] = build_eigenfunctional({f}, {sin2pix_dy(torus)});
    CHECK(lam == doctest::Approx(-8.0 * kPi * kPi));
    CHECK(prod->kind == PathFunctional::Kind::Product);
    CHECK(prod->children.size() == 2);

    auto [one, zero] = build_eigenfunctional({}, {});
    CHECK(zero == 0.0);
    CHECK(eval(*one, *vertical_loop(torus)) == 1.0);

    // Mixed eigenvalues are rejected with the offending form named.
    ScalarForm mixed(torus, 8);
    mixed.add_cos(1, 0, 1.0);
    mixed.add_cos(2, 2, 0.5);
    CHECK_THROWS_WITH_AS(build_eigenfunctional({mixed}, {}),
                         doctest::Contains("scalar form #0"),
                         std::invalid_argument);
    OneForm with_harmonic = sin2pix_dy(torus);
    with_harmonic.harmonic = Eigen::Vector2d(0.0, 1.0);
    CHECK_THROWS_WITH_AS(build_eigenfunctional({}, {with_harmonic}),
                         doctest::Contains("1-form #0"),
                         std::invalid_argument);
}

TEST_CASE("eval converges under refinement on an open fixture") {
    auto torus = unit_torus();
    ScalarForm f(torus, 4);
    f.add_cos(1, 0, 1.0);
    f.add_sin(2, 1, 0.4);
    auto F = make_lf(f);

    // Open diagonal segment: trapezoid error is O(N^-2).
    Point p0 = make_point(torus, Eigen::Vector2d(0.1, 0.35));
    std::vector<double> errors;
    double reference;
    {
        auto fine = geodesic_segment(
            p0, make_tangent(p0, Eigen::Vector2d(0.45, 0.3)), 4096);
        reference = eval(*F, *fine);
    }
    for (int n : {64, 128, 256}) {
        auto seg = geodesic_segment(
            p0, make_tangent(p0, Eigen::Vector2d(0.45, 0.3)), n);
        errors.push_back(std::abs(eval(*F, *seg) - reference));
    }
    for (size_t i = 1; i < errors.size(); ++i) {
        double slope = std::log2(errors[i - 1] / errors[i]);
        CHECK(slope >= 1.9);
    }
}
