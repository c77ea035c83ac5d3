#include "levylap/levy.hpp"

#include <cmath>
#include <stdexcept>

namespace levylap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// J^{-1} v: the -90 degree rotation (vol(u, v) = g(Ju, v)).
Eigen::VectorXd rotate_minus90(const Point& p, const Eigen::VectorXd& v) {
    return -rotate90(p, v);
}

VectorFieldAlongCurve zero_field(const CurvePtr& c) {
    VectorFieldAlongCurve X;
    X.curve = c;
    X.values.reserve(c->samples.size());
    for (int i = 0; i <= c->grid_size; ++i)
        X.values.push_back(make_tangent(
            c->at(i), Eigen::VectorXd::Zero(c->manifold->ambient_dim())));
    return X;
}

VectorFieldAlongCurve scaled_sum(const CurvePtr& c,
                                 const std::vector<double>& weights,
                                 const std::vector<VectorFieldAlongCurve>& fields) {
    VectorFieldAlongCurve out = zero_field(c);
    for (size_t j = 0; j < fields.size(); ++j) {
        if (weights[j] == 0.0) continue;
        for (size_t i = 0; i < out.values.size(); ++i)
            out.values[i].vec += weights[j] * fields[j].values[i].vec;
    }
    return out;
}

}  // namespace

VectorFieldAlongCurve h0_gradient(const PathFunctional& F, const CurvePtr& c) {
    if (F.manifold)
        require(F.manifold->same_as(*c->manifold),
                "h0_gradient: functional and curve manifolds differ");
    switch (F.kind) {
        case PathFunctional::Kind::Constant:
            return zero_field(c);
        case PathFunctional::Kind::Lf: {
            VectorFieldAlongCurve out;
            out.curve = c;
            out.values.reserve(c->samples.size());
            for (int i = 0; i <= c->grid_size; ++i)
                out.values.push_back(
                    make_tangent(c->at(i), scalar_gradient(*F.f, c->at(i))));
            return out;
        }
        case PathFunctional::Kind::Theta: {
            // Metric raise of da(., gammadot) = phi * vol(., gammadot):
            // phi(gamma) J^{-1} gammadot, with da = phi vol.
            ScalarForm phi = curl_scalar(*F.a);
            VectorFieldAlongCurve out;
            out.curve = c;
            out.values.reserve(c->samples.size());
            for (int i = 0; i <= c->grid_size; ++i) {
                double ph = eval_scalar(phi, c->at(i));
                Eigen::VectorXd v =
                    ph * rotate_minus90(c->at(i), velocity(*c, i).vec);
                out.values.push_back(make_tangent(c->at(i), std::move(v)));
            }
            return out;
        }
        case PathFunctional::Kind::Product: {
            // Leibniz: grad(prod) = sum_i (prod_{j != i} phi_j) grad phi_i.
            std::vector<double> values, weights;
            std::vector<VectorFieldAlongCurve> grads;
            for (const auto& child : F.children) {
                values.push_back(eval(*child, *c));
                grads.push_back(h0_gradient(*child, c));
            }
            for (size_t i = 0; i < values.size(); ++i) {
                double w = 1.0;
                for (size_t j = 0; j < values.size(); ++j)
                    if (j != i) w *= values[j];
                weights.push_back(w);
            }
            return scaled_sum(c, weights, grads);
        }
        case PathFunctional::Kind::Compose: {
            Eigen::VectorXd xs(F.children.size());
            std::vector<VectorFieldAlongCurve> grads;
            for (size_t i = 0; i < F.children.size(); ++i) {
                xs[static_cast<long>(i)] = eval(*F.children[i], *c);
                grads.push_back(h0_gradient(*F.children[i], c));
            }
            Eigen::VectorXd g = F.outer.gradient(xs);
            std::vector<double> weights(g.data(), g.data() + g.size());
            return scaled_sum(c, weights, grads);
        }
    }
    throw std::logic_error("h0_gradient: unreachable");
}

LevyKernelSample levy_kernel(const PathFunctional& F, const CurvePtr& c) {
    if (F.manifold)
        require(F.manifold->same_as(*c->manifold),
                "levy_kernel: functional and curve manifolds differ");
    const int d = c->manifold->dim();
    LevyKernelSample out;
    out.curve = c;
    out.KL.assign(c->samples.size(), Eigen::MatrixXd::Zero(d, d));
    out.KS.assign(c->samples.size(), Eigen::MatrixXd::Zero(d, d));

    switch (F.kind) {
        case PathFunctional::Kind::Constant:
            return out;
        case PathFunctional::Kind::Lf: {
            TransportedFrame frame = transport_frame(c);
            for (int i = 0; i <= c->grid_size; ++i)
                out.KL[static_cast<size_t>(i)] = scalar_hessian(
                    *F.f, c->at(i), frame.frames[static_cast<size_t>(i)]);
            return out;
        }
        case PathFunctional::Kind::Theta: {
            TransportedFrame frame = transport_frame(c);
            ScalarForm phi = curl_scalar(*F.a);
            for (int i = 0; i <= c->grid_size; ++i) {
                const Point& p = c->at(i);
                const Eigen::MatrixXd& E = frame.frames[static_cast<size_t>(i)];
                Eigen::VectorXd dphi = scalar_gradient(phi, p);
                Eigen::VectorXd gdot = velocity(*c, i).vec;
                double ph = eval_scalar(phi, p);
                Eigen::VectorXd a(d), b(d);
                for (int mu = 0; mu < d; ++mu) {
                    a[mu] = dphi.dot(E.col(mu));
                    // vol(E_mu, gammadot) = g(J E_mu, gammadot).
                    b[mu] = rotate90(p, E.col(mu)).dot(gdot);
                }
                out.KL[static_cast<size_t>(i)] =
                    0.5 * (a * b.transpose() + b * a.transpose());
                Eigen::MatrixXd vol(d, d);
                for (int mu = 0; mu < d; ++mu)
                    for (int nu = 0; nu < d; ++nu)
                        vol(mu, nu) = rotate90(p, E.col(mu)).dot(E.col(nu));
                out.KS[static_cast<size_t>(i)] = ph * vol;
            }
            return out;
        }
        case PathFunctional::Kind::Product: {
            std::vector<double> values;
            for (const auto& child : F.children) values.push_back(eval(*child, *c));
            for (size_t i = 0; i < F.children.size(); ++i) {
                double w = 1.0;
                for (size_t j = 0; j < values.size(); ++j)
                    if (j != i) w *= values[j];
                if (w == 0.0) continue;
                LevyKernelSample part = levy_kernel(*F.children[i], c);
                for (size_t n = 0; n < out.KL.size(); ++n) {
                    out.KL[n] += w * part.KL[n];
                    out.KS[n] += w * part.KS[n];
                }
            }
            // Gradient cross-terms of the product enter only the traceless
            // Volterra kernel and are dropped.
            return out;
        }
        case PathFunctional::Kind::Compose: {
            Eigen::VectorXd xs(F.children.size());
            for (size_t i = 0; i < F.children.size(); ++i)
                xs[static_cast<long>(i)] = eval(*F.children[i], *c);
            Eigen::VectorXd g = F.outer.gradient(xs);
            for (size_t i = 0; i < F.children.size(); ++i) {
                if (g[static_cast<long>(i)] == 0.0) continue;
                LevyKernelSample part = levy_kernel(*F.children[i], c);
                for (size_t n = 0; n < out.KL.size(); ++n) {
                    out.KL[n] += g[static_cast<long>(i)] * part.KL[n];
                    out.KS[n] += g[static_cast<long>(i)] * part.KS[n];
                }
            }
            return out;
        }
    }
    throw std::logic_error("levy_kernel: unreachable");
}

double levy_divergence(const LevyKernelSample& k) {
    const Curve& c = *k.curve;
    const double dtau = 1.0 / c.grid_size;
    double sum = 0.0;
    for (int i = 0; i <= c.grid_size; ++i) {
        double w = (i == 0 || i == c.grid_size) ? 0.5 : 1.0;
        sum += w * dtau * k.KL[static_cast<size_t>(i)].trace();
    }
    return sum;
}

double levy_analytic(const PathFunctional& F, const Curve& c) {
    if (F.manifold)
        require(F.manifold->same_as(*c.manifold),
                "levy_analytic: functional and curve manifolds differ");
    switch (F.kind) {
        case PathFunctional::Kind::Constant:
            return 0.0;
        case PathFunctional::Kind::Lf: {
            auto lap = make_lf(hodge_laplacian(*F.f));
            return eval(*lap, c);
        }
        case PathFunctional::Kind::Theta:
            return -line_integral(delta_d(*F.a), c);
        case PathFunctional::Kind::Product: {
            std::vector<double> values, laps;
            for (const auto& child : F.children) {
                values.push_back(eval(*child, c));
                laps.push_back(levy_analytic(*child, c));
            }
            double sum = 0.0;
            for (size_t i = 0; i < values.size(); ++i) {
                double term = laps[i];
                for (size_t j = 0; j < values.size(); ++j)
                    if (j != i) term *= values[j];
                sum += term;
            }
            return sum;
        }
        case PathFunctional::Kind::Compose: {
            Eigen::VectorXd xs(F.children.size());
            Eigen::VectorXd laps(F.children.size());
            for (size_t i = 0; i < F.children.size(); ++i) {
                xs[static_cast<long>(i)] = eval(*F.children[i], c);
                laps[static_cast<long>(i)] = levy_analytic(*F.children[i], c);
            }
            return F.outer.gradient(xs).dot(laps);
        }
    }
    throw std::logic_error("levy_analytic: unreachable");
}

CesaroReport levy_cesaro(const std::function<double(const Curve&)>& F,
                         const CurvePtr& c, int n_max, double h) {
    require(n_max >= 1, "levy_cesaro: n_max must be positive");
    require(h > 0.0, "levy_cesaro: h must be positive");
    require(c->grid_size >= 16 * n_max,
            "levy_cesaro: curve grid size must be at least 16 * n_max");

    CesaroReport report;
    report.h = h;
    report.grid_size = c->grid_size;
    report.n_max = n_max;

    const int d = c->manifold->dim();
    TransportedFrame frame = transport_frame(c);
    // The center value is evaluated on an undisplaced path_exp copy so it
    // shares the discretization (no velocity oracle) of the displaced
    // curves; otherwise the oracle-vs-stencil gap is amplified by 1/h^2.
    const double base =
        F(*path_exp(c, make_basis_field(frame, 0, 1), 0.0));
    require(std::isfinite(base), "levy_cesaro: functional is not finite");

    double running = 0.0;
    for (int k = 1; k <= n_max; ++k) {
        double mode_total = 0.0;
        for (int mu = 0; mu < d; ++mu) {
            VectorFieldAlongCurve X = make_basis_field(frame, mu, k);
            double plus = F(*path_exp(c, X, h));
            double minus = F(*path_exp(c, X, -h));
            require(std::isfinite(plus) && std::isfinite(minus),
                    "levy_cesaro: functional is not finite on a displaced "
                    "curve");
            mode_total += (plus - 2.0 * base + minus) / (h * h);
        }
        report.per_mode.push_back(mode_total);
        running += mode_total;
        report.partial_sums.push_back(running / k);
    }

    // Least-squares fit S_n ~ S_inf + A / n over the tail n in
    // [n_max/2, n_max].
    const int lo = std::max(1, n_max / 2);
    double s11 = 0.0, s1x = 0.0, sxx = 0.0, s1y = 0.0, sxy = 0.0;
    for (int n = lo; n <= n_max; ++n) {
        double x = 1.0 / n;
        double y = report.partial_sums[static_cast<size_t>(n - 1)];
        s11 += 1.0;
        s1x += x;
        sxx += x * x;
        s1y += y;
        sxy += x * y;
    }
    const double det = s11 * sxx - s1x * s1x;
    if (std::abs(det) < 1e-300) {
        report.limit = report.partial_sums.back();
        report.fit_residual = 0.0;
        return report;
    }
    const double s_inf = (sxx * s1y - s1x * sxy) / det;
    const double slope = (s11 * sxy - s1x * s1y) / det;
    report.limit = s_inf;
    double rss = 0.0;
    for (int n = lo; n <= n_max; ++n) {
        double pred = s_inf + slope / n;
        double diff = report.partial_sums[static_cast<size_t>(n - 1)] - pred;
        rss += diff * diff;
    }
    report.fit_residual = std::sqrt(rss / s11);
    return report;
}

CesaroReport levy_cesaro(const PathFunctional& F, const CurvePtr& c, int n_max,
                         double h) {
    if (F.manifold)
        require(F.manifold->same_as(*c->manifold),
                "levy_cesaro: functional and curve manifolds differ");
    return levy_cesaro(
        [&F](const Curve& curve) { return eval(F, curve); }, c, n_max, h);
}

std::complex<double> levy_u_laplacian(const OneForm& a, const Curve& c) {
    // Chain rule for U^a = exp(-i Theta_a).
    auto theta = make_theta(a);
    return std::complex<double>(0.0, -1.0) * eval_u(a, c) *
           levy_analytic(*theta, c);
}

std::pair<VectorFieldAlongCurve, VectorFieldAlongCurve> levy_u_gradient(
    const OneForm& a, const CurvePtr& c) {
    auto theta = make_theta(a);
    VectorFieldAlongCurve grad = h0_gradient(*theta, c);
    std::complex<double> factor =
        std::complex<double>(0.0, -1.0) * eval_u(a, *c);
    VectorFieldAlongCurve re = grad, im = grad;
    for (size_t i = 0; i < grad.values.size(); ++i) {
        re.values[i].vec *= factor.real();
        im.values[i].vec *= factor.imag();
    }
    return {re, im};
}

}  // namespace levylap
