#include "levylap/pathspace.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace levylap {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// sin(n pi tau) with exact zeros at integer multiples of the half-period.
double half_wave_sin(int n, double tau) {
    double x = static_cast<double>(n) * tau;
    if (x == std::round(x)) return 0.0;
    return std::sin(kPi * x);
}

CurvePtr finish_curve(std::shared_ptr<Curve> c) {
    const int n = c->grid_size;
    double max_step = 0.0;
    for (int i = 0; i < n; ++i)
        max_step = std::max(max_step, distance(c->at(i), c->at(i + 1)));
    c->resolution_constant = max_step * n;
    return c;
}

std::shared_ptr<Curve> sample_oracle(const ManifoldPtr& m, int grid_size,
                                     bool closed, CurveOracle position,
                                     CurveOracle vel, std::string name,
                                     std::uint64_t seed) {
    require(is_power_of_two(grid_size), "curve grid size must be a power of two");
    auto c = std::make_shared<Curve>();
    c->manifold = m;
    c->grid_size = grid_size;
    c->closed = closed;
    c->constructor_name = std::move(name);
    c->seed = seed;
    c->samples.reserve(static_cast<size_t>(grid_size) + 1);
    for (int i = 0; i <= grid_size; ++i)
        c->samples.push_back(make_point(m, position(c->tau(i))));
    if (closed)
        require(same_point(c->samples.front(), c->samples.back(), 1e-10),
                "closed curve does not close");
    c->position_oracle = std::move(position);
    c->velocity_oracle = std::move(vel);
    return c;
}

}  // namespace

Tangent velocity(const Curve& c, int i) {
    require(i >= 0 && i <= c.grid_size, "velocity: node index out of range");
    const Point& p = c.at(i);
    if (c.velocity_oracle)
        return make_tangent(p, project_tangent(p, c.velocity_oracle(c.tau(i))));
    const double dtau = 1.0 / c.grid_size;
    const int n = c.grid_size;
    Eigen::VectorXd v;
    auto disp = [&](int a, int b) {
        return c.manifold->displacement(c.at(a).coords, c.at(b).coords);
    };
    if (c.closed) {
        // samples[0] == samples[N]; periodic stencil.
        int prev = (i == 0) ? n - 1 : i - 1;
        int next = (i == n) ? 1 : i + 1;
        v = (disp(i, next) + disp(prev, i)) / (2.0 * dtau);
    } else if (i == 0) {
        v = (4.0 * disp(0, 1) - disp(0, 2)) / (2.0 * dtau);
    } else if (i == n) {
        v = (disp(n - 2, n) - 4.0 * disp(n - 1, n)) / (-2.0 * dtau);
    } else {
        v = disp(i - 1, i + 1) / (2.0 * dtau);
    }
    return make_tangent(p, project_tangent(p, v));
}

VectorFieldAlongCurve make_basis_field(const TransportedFrame& frame, int mu,
                                       int n) {
    const Curve& c = *frame.curve;
    require(mu >= 0 && mu < c.manifold->dim(), "make_basis_field: bad mu");
    require(n >= 1, "make_basis_field: n must be positive");
    if (16 * n > c.grid_size) {
        std::ostringstream os;
        os << "make_basis_field: mode " << n << " needs grid size >= " << 16 * n
           << " (have " << c.grid_size << ")";
        throw std::invalid_argument(os.str());
    }
    VectorFieldAlongCurve X;
    X.curve = frame.curve;
    X.values.reserve(static_cast<size_t>(c.grid_size) + 1);
    const double sqrt2 = std::numbers::sqrt2;
    for (int i = 0; i <= c.grid_size; ++i) {
        double amp = sqrt2 * half_wave_sin(n, c.tau(i));
        X.values.push_back(
            Tangent{c.at(i), amp * frame.frames[static_cast<size_t>(i)].col(mu)});
    }
    return X;
}

CurvePtr path_exp(const CurvePtr& c, const VectorFieldAlongCurve& X, double s) {
    require(X.curve.get() == c.get(), "path_exp: field not along this curve");
    require(X.values.size() == c->samples.size(), "path_exp: field size mismatch");
    if (!c->manifold->flat()) {
        double max_norm = 0.0;
        for (const auto& t : X.values) max_norm = std::max(max_norm, t.vec.norm());
        double guard = kPi * c->manifold->radius() / 2.0;
        if (std::abs(s) * max_norm >= guard) {
            std::ostringstream os;
            os << "path_exp: |s| * max||X|| = " << std::abs(s) * max_norm
               << " exceeds the injectivity guard " << guard;
            throw std::invalid_argument(os.str());
        }
    }
    auto out = std::make_shared<Curve>();
    out->manifold = c->manifold;
    out->grid_size = c->grid_size;
    out->constructor_name = "path_exp";
    out->seed = c->seed;
    out->samples.reserve(c->samples.size());
    for (size_t i = 0; i < c->samples.size(); ++i) {
        const Tangent& t = X.values[i];
        out->samples.push_back(
            exp_point(c->samples[i], Tangent{c->samples[i], s * t.vec}));
    }
    out->closed =
        c->closed && same_point(out->samples.front(), out->samples.back(), 1e-10);
    if (out->closed) out->winding = c->winding;
    return finish_curve(std::move(out));
}

double g0_inner(const VectorFieldAlongCurve& X, const VectorFieldAlongCurve& Y) {
    require(X.curve.get() == Y.curve.get(), "g0_inner: fields on different curves");
    const int n = X.curve->grid_size;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * X.values[static_cast<size_t>(i)].vec.dot(
                       Y.values[static_cast<size_t>(i)].vec);
    }
    return sum / n;
}

CurvePtr curve_from_oracle(const ManifoldPtr& m, int grid_size, bool closed,
                           CurveOracle position, CurveOracle vel,
                           const std::string& name) {
    return finish_curve(sample_oracle(m, grid_size, closed, std::move(position),
                                      std::move(vel), name, 0));
}

CurvePtr torus_winding(const ManifoldPtr& m, int grid_size, int p, int q,
                       const Eigen::Vector2d& base, double perturbation,
                       int modes, std::uint64_t seed) {
    require(m->kind() == ManifoldKind::FlatTorus && m->dim() == 2,
            "torus_winding: needs a 2-torus");
    require(p != 0 || q != 0 || (perturbation != 0.0 && modes > 0),
            "torus_winding: degenerate constant-curve request");
    const Eigen::Vector2d periods = m->periods();
    const Eigen::Vector2d slope(p * periods[0], q * periods[1]);

    // Zero-winding Fourier perturbation; amplitudes decay as 1/j^2.
    Eigen::MatrixXd ca = Eigen::MatrixXd::Zero(2, modes);
    Eigen::MatrixXd cb = Eigen::MatrixXd::Zero(2, modes);
    if (perturbation != 0.0 && modes > 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int d = 0; d < 2; ++d)
            for (int j = 0; j < modes; ++j) {
                double decay = perturbation / ((j + 1) * (j + 1));
                ca(d, j) = decay * u(rng);
                cb(d, j) = decay * u(rng);
            }
    }
    auto position = [=](double tau) -> Eigen::VectorXd {
        Eigen::Vector2d x = base + tau * slope;
        for (int j = 0; j < modes; ++j) {
            double w = 2.0 * kPi * (j + 1) * tau;
            x += ca.col(j) * (std::cos(w) - 1.0) + cb.col(j) * std::sin(w);
        }
        return x;
    };
    auto vel = [=](double tau) -> Eigen::VectorXd {
        Eigen::Vector2d v = slope;
        for (int j = 0; j < modes; ++j) {
            double om = 2.0 * kPi * (j + 1);
            double w = om * tau;
            v += om * (-ca.col(j) * std::sin(w) + cb.col(j) * std::cos(w));
        }
        return v;
    };
    auto c = sample_oracle(m, grid_size, true, position, vel, "torus_winding", seed);
    c->winding = {{p, q}};
    return finish_curve(std::move(c));
}

CurvePtr sphere_latitude(const ManifoldPtr& m, int grid_size, double theta0) {
    require(m->kind() == ManifoldKind::Sphere2, "sphere_latitude: needs a sphere");
    require(theta0 > 0.0 && theta0 < kPi, "sphere_latitude: theta0 in (0, pi)");
    double rho = m->radius();
    auto position = [=](double tau) -> Eigen::VectorXd {
        double phi = 2.0 * kPi * tau;
        return Eigen::Vector3d(rho * std::sin(theta0) * std::cos(phi),
                               rho * std::sin(theta0) * std::sin(phi),
                               rho * std::cos(theta0));
    };
    auto vel = [=](double tau) -> Eigen::VectorXd {
        double phi = 2.0 * kPi * tau;
        double w = 2.0 * kPi * rho * std::sin(theta0);
        return Eigen::Vector3d(-w * std::sin(phi), w * std::cos(phi), 0.0);
    };
    return finish_curve(
        sample_oracle(m, grid_size, true, position, vel, "sphere_latitude", 0));
}

CurvePtr sphere_perturbed_latitude(const ManifoldPtr& m, int grid_size,
                                   double theta0, double amplitude, int mode) {
    require(m->kind() == ManifoldKind::Sphere2,
            "sphere_perturbed_latitude: needs a sphere");
    require(mode >= 1, "sphere_perturbed_latitude: mode must be >= 1");
    require(theta0 - std::abs(amplitude) > 0.05 &&
                theta0 + std::abs(amplitude) < kPi - 0.05,
            "sphere_perturbed_latitude: perturbation reaches a pole");
    double rho = m->radius();
    auto position = [=](double tau) -> Eigen::VectorXd {
        double theta = theta0 + amplitude * std::sin(2.0 * kPi * mode * tau);
        double phi = 2.0 * kPi * tau;
        return Eigen::Vector3d(rho * std::sin(theta) * std::cos(phi),
                               rho * std::sin(theta) * std::sin(phi),
                               rho * std::cos(theta));
    };
    auto vel = [=](double tau) -> Eigen::VectorXd {
        double theta = theta0 + amplitude * std::sin(2.0 * kPi * mode * tau);
        double dtheta = 2.0 * kPi * mode * amplitude * std::cos(2.0 * kPi * mode * tau);
        double phi = 2.0 * kPi * tau;
        double dphi = 2.0 * kPi;
        return Eigen::Vector3d(
            rho * (dtheta * std::cos(theta) * std::cos(phi) -
                   dphi * std::sin(theta) * std::sin(phi)),
            rho * (dtheta * std::cos(theta) * std::sin(phi) +
                   dphi * std::sin(theta) * std::cos(phi)),
            -rho * dtheta * std::sin(theta));
    };
    return finish_curve(sample_oracle(m, grid_size, true, position, vel,
                                      "sphere_perturbed_latitude", 0));
}

CurvePtr random_smooth_loop(const ManifoldPtr& m, int grid_size,
                            std::uint64_t seed, int mode_count) {
    require(mode_count >= 1, "random_smooth_loop: needs at least one mode");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    if (m->flat()) {
        const int d = m->dim();
        Eigen::VectorXd base(d);
        if (m->kind() == ManifoldKind::FlatTorus)
            for (int i = 0; i < d; ++i) base[i] = 0.5 * (u(rng) + 1.0) * m->periods()[i];
        else
            for (int i = 0; i < d; ++i) base[i] = u(rng);
        Eigen::MatrixXd ca(d, mode_count), cb(d, mode_count);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < mode_count; ++j) {
                double decay = 0.2 / ((j + 1) * (j + 1));
                ca(i, j) = decay * u(rng);
                cb(i, j) = decay * u(rng);
            }
        auto position = [=](double tau) -> Eigen::VectorXd {
            Eigen::VectorXd x = base;
            for (int j = 0; j < mode_count; ++j) {
                double w = 2.0 * kPi * (j + 1) * tau;
                x += ca.col(j) * std::cos(w) + cb.col(j) * std::sin(w);
            }
            return x;
        };
        auto vel = [=](double tau) -> Eigen::VectorXd {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
            for (int j = 0; j < mode_count; ++j) {
                double om = 2.0 * kPi * (j + 1);
                double w = om * tau;
                v += om * (-ca.col(j) * std::sin(w) + cb.col(j) * std::cos(w));
            }
            return v;
        };
        auto c = sample_oracle(m, grid_size, true, position, vel,
                               "random_smooth_loop", seed);
        if (m->kind() == ManifoldKind::FlatTorus && m->dim() == 2)
            c->winding = {{0, 0}};
        return finish_curve(std::move(c));
    }

    // Sphere: normalized trigonometric ambient curve around a fixed axis.
    double rho = m->radius();
    const Eigen::Vector3d axis = Eigen::Vector3d(1.0, 1.0, 1.0).normalized();
    Eigen::MatrixXd ca(3, mode_count), cb(3, mode_count);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < mode_count; ++j) {
            double decay = 0.15 / ((j + 1) * (j + 1));
            ca(i, j) = decay * u(rng);
            cb(i, j) = decay * u(rng);
        }
    auto ambient = [=](double tau) -> Eigen::Vector3d {
        Eigen::Vector3d x = axis;
        for (int j = 0; j < mode_count; ++j) {
            double w = 2.0 * kPi * (j + 1) * tau;
            x += ca.col(j) * std::cos(w) + cb.col(j) * std::sin(w);
        }
        return x;
    };
    auto ambient_dot = [=](double tau) -> Eigen::Vector3d {
        Eigen::Vector3d v = Eigen::Vector3d::Zero();
        for (int j = 0; j < mode_count; ++j) {
            double om = 2.0 * kPi * (j + 1);
            double w = om * tau;
            v += om * (-ca.col(j) * std::sin(w) + cb.col(j) * std::cos(w));
        }
        return v;
    };
    auto position = [=](double tau) -> Eigen::VectorXd {
        Eigen::Vector3d x = ambient(tau);
        return rho * x.normalized();
    };
    auto vel = [=](double tau) -> Eigen::VectorXd {
        Eigen::Vector3d x = ambient(tau);
        Eigen::Vector3d v = ambient_dot(tau);
        double n = x.norm();
        return rho * (v / n - x * (x.dot(v)) / (n * n * n));
    };
    return finish_curve(sample_oracle(m, grid_size, true, position, vel,
                                      "random_smooth_loop", seed));
}

CurvePtr geodesic_segment(const Point& p, const Tangent& v, int grid_size) {
    require(same_point(p, v.base), "geodesic_segment: vector not based at p");
    const ManifoldPtr m = p.manifold;
    CurveOracle position, vel;
    if (m->flat()) {
        Eigen::VectorXd p0 = p.coords, vv = v.vec;
        position = [=](double tau) -> Eigen::VectorXd { return p0 + tau * vv; };
        vel = [=](double) -> Eigen::VectorXd { return vv; };
    } else {
        double rho = m->radius();
        double len = v.vec.norm();
        Eigen::Vector3d p0 = p.coords.head<3>();
        Eigen::Vector3d dir =
            len > 0.0 ? Eigen::Vector3d(v.vec.head<3>() / len) : Eigen::Vector3d::UnitX();
        double omega = len / rho;
        position = [=](double tau) -> Eigen::VectorXd {
            return std::cos(omega * tau) * p0 + rho * std::sin(omega * tau) * dir;
        };
        vel = [=](double tau) -> Eigen::VectorXd {
            return -omega * std::sin(omega * tau) * p0 +
                   rho * omega * std::cos(omega * tau) * dir;
        };
    }
    auto c = sample_oracle(m, grid_size, false, position, vel, "geodesic_segment", 0);
    c->closed = same_point(c->samples.front(), c->samples.back(), 1e-10);
    return finish_curve(std::move(c));
}

Eigen::MatrixXd default_initial_frame(const Curve& c) {
    const ManifoldPtr& m = c.manifold;
    if (m->flat())
        return Eigen::MatrixXd::Identity(m->dim(), m->dim());
    const Eigen::Vector3d n = c.at(0).coords.head<3>().normalized();
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[axis] = 1.0;
    Eigen::Vector3d e1 = (e - n * n.dot(e)).normalized();
    Eigen::Vector3d e2 = n.cross(e1);
    Eigen::MatrixXd frame(3, 2);
    frame.col(0) = e1;
    frame.col(1) = e2;
    return frame;
}

}  // namespace levylap
