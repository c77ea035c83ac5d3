#include "levylap/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levylap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// Samples positions and velocities between grid nodes: analytic oracles
/// when the constructor attached them, otherwise 4-point interpolation of
/// the node data (which keeps the one-step integrator at 4th order).
class CurveSampler {
public:
    explicit CurveSampler(const Curve& c) : c_(c) {
        if (!c_.velocity_oracle) {
            node_vel_.reserve(c_.samples.size());
            for (int i = 0; i <= c_.grid_size; ++i)
                node_vel_.push_back(velocity(c_, i).vec);
        }
    }

    Eigen::VectorXd pos(int node) const { return c_.at(node).coords; }

    Eigen::VectorXd vel(int node) const {
        if (c_.velocity_oracle) return c_.velocity_oracle(c_.tau(node));
        return node_vel_[static_cast<size_t>(node)];
    }

    /// Value halfway between node and node+1.
    Eigen::VectorXd pos_mid(int node) const {
        if (c_.position_oracle)
            return c_.position_oracle((node + 0.5) / c_.grid_size);
        Eigen::VectorXd x = interp_mid(node, [&](int i) { return pos(i); });
        if (!c_.manifold->flat())
            x *= c_.manifold->radius() / x.norm();
        return x;
    }

    Eigen::VectorXd vel_mid(int node) const {
        if (c_.velocity_oracle)
            return c_.velocity_oracle((node + 0.5) / c_.grid_size);
        return interp_mid(node, [&](int i) { return vel(i); });
    }

private:
    template <typename F>
    Eigen::VectorXd interp_mid(int node, F&& value) const {
        const int n = c_.grid_size;
        auto clampwrap = [&](int i) {
            if (c_.closed) return ((i % n) + n) % n;
            return std::clamp(i, 0, n);
        };
        if (!c_.closed && node == 0) {
            return 0.3125 * value(0) + 0.9375 * value(1) - 0.3125 * value(2) +
                   0.0625 * value(3);
        }
        if (!c_.closed && node == n - 1) {
            return 0.0625 * value(n - 3) - 0.3125 * value(n - 2) +
                   0.9375 * value(n - 1) + 0.3125 * value(n);
        }
        return -0.0625 * value(clampwrap(node - 1)) +
               0.5625 * value(clampwrap(node)) +
               0.5625 * value(clampwrap(node + 1)) -
               0.0625 * value(clampwrap(node + 2));
    }

    const Curve& c_;
    std::vector<Eigen::VectorXd> node_vel_;
};

/// Right side of the transport equation V' = -Gamma(gamma)(V, gammadot),
/// columnwise, for the embedded sphere.
Eigen::MatrixXd sphere_rhs(const Eigen::VectorXd& pos, const Eigen::VectorXd& vel,
                           const Eigen::MatrixXd& v, double rho2) {
    return -(pos * (vel.transpose() * v)) / rho2;
}

/// One classical 4th-order step of the transport equation from node i to
/// node i+1 on the sphere, with nodewise tangent re-projection.
Eigen::MatrixXd transport_step(const Curve& c, const CurveSampler& s, int i,
                               Eigen::MatrixXd v) {
    const double rho = c.manifold->radius();
    const double rho2 = rho * rho;
    const double h = 1.0 / c.grid_size;
    const Eigen::VectorXd p0 = s.pos(i), pm = s.pos_mid(i), p1 = s.pos(i + 1);
    const Eigen::VectorXd u0 = s.vel(i), um = s.vel_mid(i), u1 = s.vel(i + 1);
    Eigen::MatrixXd k1 = sphere_rhs(p0, u0, v, rho2);
    Eigen::MatrixXd k2 = sphere_rhs(pm, um, v + 0.5 * h * k1, rho2);
    Eigen::MatrixXd k3 = sphere_rhs(pm, um, v + 0.5 * h * k2, rho2);
    Eigen::MatrixXd k4 = sphere_rhs(p1, u1, v + h * k3, rho2);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const Eigen::VectorXd n = p1 / rho;
    v -= n * (n.transpose() * v);
    return v;
}

/// Transports the columns of v0 from node 0 through node `last`, invoking
/// `on_node(i, V)` at every node (including node 0).
template <typename OnNode>
void integrate_transport(const Curve& c, Eigen::MatrixXd v, int last,
                         OnNode&& on_node) {
    if (c.manifold->flat()) {
        for (int i = 0; i <= last; ++i) on_node(i, v);
        return;
    }
    CurveSampler s(c);
    on_node(0, v);
    for (int i = 0; i < last; ++i) {
        v = transport_step(c, s, i, std::move(v));
        on_node(i + 1, v);
    }
}

void check_initial_basis(const Curve& c, const Eigen::MatrixXd& basis) {
    const int d = c.manifold->dim();
    require(basis.rows() == c.manifold->ambient_dim() && basis.cols() == d,
            "transport_frame: initial basis has wrong shape");
    Eigen::MatrixXd gram = basis.transpose() * basis;
    require((gram - Eigen::MatrixXd::Identity(d, d)).norm() < 1e-8,
            "transport_frame: initial basis is not g-orthonormal");
    if (!c.manifold->flat())
        require((c.at(0).coords.transpose() * basis).norm() <
                    1e-8 * c.manifold->radius(),
                "transport_frame: initial basis is not tangent at c(0)");
}

}  // namespace

Tangent parallel_transport(const Curve& c, const Tangent& v0, int target_node) {
    require(target_node >= 0 && target_node <= c.grid_size,
            "parallel_transport: target node out of range");
    require(same_point(v0.base, c.at(0)),
            "parallel_transport: v0 is not based at c(0)");
    Eigen::MatrixXd v = v0.vec;
    Eigen::VectorXd out;
    integrate_transport(c, v, target_node, [&](int i, const Eigen::MatrixXd& cur) {
        if (i == target_node) out = cur.col(0);
    });
    return make_tangent(c.at(target_node), std::move(out));
}

TransportedFrame transport_frame(const CurvePtr& c,
                                 const Eigen::MatrixXd& initial_basis,
                                 bool renormalize) {
    check_initial_basis(*c, initial_basis);
    TransportedFrame frame;
    frame.curve = c;
    frame.frames.resize(c->samples.size());
    double drift = 0.0;
    Eigen::MatrixXd v = initial_basis;
    const int d = static_cast<int>(initial_basis.cols());

    if (c->manifold->flat()) {
        for (auto& f : frame.frames) f = initial_basis;
        return frame;
    }

    // Renormalization has to feed back into the integration state, so the
    // frame is advanced one step at a time.
    CurveSampler sampler(*c);
    for (int i = 0; i < c->grid_size; ++i) {
        frame.frames[static_cast<size_t>(i)] = v;
        v = transport_step(*c, sampler, i, std::move(v));
        Eigen::MatrixXd gram = v.transpose() * v;
        drift = std::max(drift,
                         (gram - Eigen::MatrixXd::Identity(d, d)).lpNorm<Eigen::Infinity>());
        if (renormalize) {
            // Modified Gram-Schmidt.
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < a; ++b)
                    v.col(a) -= v.col(b).dot(v.col(a)) * v.col(b);
                v.col(a).normalize();
            }
        }
    }
    frame.frames[static_cast<size_t>(c->grid_size)] = v;
    frame.max_orthonormality_drift = drift;
    return frame;
}

TransportedFrame transport_frame(const CurvePtr& c, bool renormalize) {
    return transport_frame(c, default_initial_frame(*c), renormalize);
}

Eigen::MatrixXd holonomy(const Curve& c) {
    return holonomy(c, default_initial_frame(c));
}

Eigen::MatrixXd holonomy(const Curve& c, const Eigen::MatrixXd& initial_basis) {
    require(c.closed, "holonomy: curve is not closed");
    check_initial_basis(c, initial_basis);
    Eigen::MatrixXd v = initial_basis;
    Eigen::MatrixXd transported;
    integrate_transport(c, v, c.grid_size, [&](int i, const Eigen::MatrixXd& cur) {
        if (i == c.grid_size) transported = cur;
    });
    return initial_basis.transpose() * transported;
}

double rotation_angle(const Eigen::MatrixXd& h) {
    require(h.rows() == 2 && h.cols() == 2, "rotation_angle: needs a 2x2 matrix");
    return std::atan2(h(1, 0) - h(0, 1), h(0, 0) + h(1, 1));
}

Eigen::VectorXd transport_differential(
    const Curve& c, const TransportedFrame& frame,
    const VectorFieldAlongCurve& h1,
    const std::vector<Eigen::VectorXd>& h2_components, int target_node) {
    require(frame.curve.get() == &c || same_point(frame.curve->at(0), c.at(0)),
            "transport_differential: frame along a different curve");
    require(h1.values.size() == c.samples.size(),
            "transport_differential: h1 size mismatch");
    require(h2_components.size() == c.samples.size(),
            "transport_differential: h2 size mismatch");
    require(target_node >= 0 && target_node <= c.grid_size,
            "transport_differential: target node out of range");

    const int i2 = target_node;
    const Point& p2 = c.at(i2);
    const Eigen::MatrixXd& f2 = frame.frames[static_cast<size_t>(i2)];
    const Eigen::VectorXd& comps2 = h2_components[static_cast<size_t>(i2)];
    const Eigen::VectorXd h2_at_target = f2 * comps2;

    Eigen::VectorXd integral = Eigen::VectorXd::Zero(p2.coords.size());
    if (i2 > 0 && !c.manifold->flat()) {
        const double dtau = 1.0 / c.grid_size;
        for (int i = 0; i <= i2; ++i) {
            const Eigen::MatrixXd& f1 = frame.frames[static_cast<size_t>(i)];
            const Point& p1 = c.at(i);
            Tangent a = make_tangent(p1, f1 * comps2);  // Q_{tau1,0} h2(tau2)
            Tangent b = h1.values[static_cast<size_t>(i)];
            Tangent g = velocity(c, i);
            // R^l_{mnk} (Qh2)^m h1^n gdot^k, i.e. R(h1, gdot) acting on Qh2.
            Tangent r = curvature_apply(p1, b, g, a);
            // Carry to tau2 through the parallel frame.
            Eigen::VectorXd carried = f2 * (f1.transpose() * r.vec);
            double w = (i == 0 || i == i2) ? 0.5 : 1.0;
            integral += w * dtau * carried;
        }
    }

    Tangent gamma_term =
        christoffel_apply(p2, make_tangent(p2, h2_at_target),
                          h1.values[static_cast<size_t>(i2)]);
    return -integral - gamma_term.vec;
}

}  // namespace levylap
