#include "levylap/hodge.hpp"

#include "levylap/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levylap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI(0.0, 1.0);

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool is_torus(const ManifoldPtr& m) {
    return m->kind() == ManifoldKind::FlatTorus;
}

struct SphereAngles {
    double theta, phi, sin_theta, cos_theta;
    Eigen::Vector3d e_theta, e_phi;
};

SphereAngles sphere_angles(const Point& p) {
    const double rho = p.manifold->radius();
    SphereAngles s;
    Eigen::Vector3d n = p.coords.head<3>() / rho;
    s.cos_theta = std::clamp(n.z(), -1.0, 1.0);
    s.theta = std::acos(s.cos_theta);
    s.sin_theta = std::sin(s.theta);
    s.phi = std::atan2(n.y(), n.x());
    const double cp = std::cos(s.phi), sp = std::sin(s.phi);
    s.e_theta = Eigen::Vector3d(s.cos_theta * cp, s.cos_theta * sp, -s.sin_theta);
    s.e_phi = Eigen::Vector3d(-sp, cp, 0.0);
    return s;
}

/// 2 pi k / P componentwise: the wave covector of a torus mode.
Eigen::Vector2d wave_vector(const ManifoldPtr& m, int k1, int k2) {
    const Eigen::VectorXd& P = m->periods();
    return Eigen::Vector2d(2.0 * kPi * k1 / P[0], 2.0 * kPi * k2 / P[1]);
}

void require_same_manifold(const ManifoldPtr& a, const ManifoldPtr& b,
                           const std::string& who) {
    require(a->same_as(*b), who + ": manifolds differ");
}

}  // namespace

ScalarForm::ScalarForm(ManifoldPtr manifold, int truncation)
    : manifold_(std::move(manifold)), truncation_(truncation) {
    require(manifold_ != nullptr, "ScalarForm: null manifold");
    require(manifold_->kind() == ManifoldKind::FlatTorus ||
                manifold_->kind() == ManifoldKind::Sphere2,
            "ScalarForm: supported manifolds are the flat torus and the sphere");
    if (manifold_->kind() == ManifoldKind::FlatTorus)
        require(manifold_->dim() == 2, "ScalarForm: torus must be 2-dimensional");
    require(truncation_ >= 0 && truncation_ <= 64,
            "ScalarForm: truncation out of range [0, 64]");
}

ScalarForm& ScalarForm::add_mode(int a, int b, std::complex<double> c) {
    if (c == 0.0) return *this;
    if (is_torus(manifold_)) {
        require(std::abs(a) <= truncation_ && std::abs(b) <= truncation_,
                "ScalarForm: torus mode beyond truncation");
        if (a == 0 && b == 0) {
            require(std::abs(c.imag()) < 1e-14,
                    "ScalarForm: mean mode must be real");
            coeffs_[{0, 0}] += c.real();
        } else {
            coeffs_[{a, b}] += c;
            coeffs_[{-a, -b}] += std::conj(c);
        }
    } else {
        require(a >= 0 && a <= truncation_ && std::abs(b) <= a,
                "ScalarForm: invalid sphere mode (l, m)");
        require(std::abs(c.imag()) < 1e-14,
                "ScalarForm: sphere coefficients are real");
        coeffs_[{a, b}] += c.real();
    }
    return *this;
}

ScalarForm& ScalarForm::add_cos(int k1, int k2, double amplitude) {
    require(is_torus(manifold_), "add_cos: torus-only helper");
    return add_mode(k1, k2, amplitude * ((k1 == 0 && k2 == 0) ? 1.0 : 0.5));
}

ScalarForm& ScalarForm::add_sin(int k1, int k2, double amplitude) {
    require(is_torus(manifold_), "add_sin: torus-only helper");
    require(k1 != 0 || k2 != 0, "add_sin: zero mode has no sine");
    return add_mode(k1, k2, -0.5 * kI * amplitude);
}

std::complex<double> ScalarForm::coeff(int a, int b) const {
    auto it = coeffs_.find({a, b});
    return it == coeffs_.end() ? std::complex<double>(0.0) : it->second;
}

bool ScalarForm::is_zero(double tol) const {
    for (const auto& [key, c] : coeffs_)
        if (std::abs(c) > tol) return false;
    return true;
}

double ScalarForm::eigenvalue(int a, int b) const {
    if (is_torus(manifold_)) return -wave_vector(manifold_, a, b).squaredNorm();
    (void)b;
    const double rho = manifold_->radius();
    return -static_cast<double>(a) * (a + 1) / (rho * rho);
}

void ScalarForm::check_invariants() const {
    for (const auto& [key, c] : coeffs_) {
        if (is_torus(manifold_)) {
            require(std::abs(coeff(-key.first, -key.second) - std::conj(c)) <
                        1e-14,
                    "ScalarForm: conjugate symmetry violated");
        } else {
            require(std::abs(c.imag()) < 1e-14,
                    "ScalarForm: sphere coefficient not real");
        }
    }
}

ScalarForm ScalarForm::mapped(const std::function<double(double)>& fn) const {
    ScalarForm out(manifold_, truncation_);
    for (const auto& [key, c] : coeffs_) {
        std::complex<double> v = fn(eigenvalue(key.first, key.second)) * c;
        if (v != 0.0) out.coeffs_[key] = v;
    }
    return out;
}

OneForm zero_oneform(ManifoldPtr manifold, int truncation) {
    ScalarForm zero(manifold, truncation);
    return OneForm{zero, zero, Eigen::Vector2d::Zero()};
}

Eigen::VectorXd rotate90(const Point& p, const Eigen::VectorXd& v) {
    if (p.manifold->kind() == ManifoldKind::Sphere2) {
        Eigen::Vector3d n = p.coords.head<3>() / p.manifold->radius();
        return n.cross(Eigen::Vector3d(v.head<3>()));
    }
    require(v.size() == 2, "rotate90: flat case needs a 2-vector");
    return Eigen::Vector2d(-v[1], v[0]);
}

OneForm exterior_d(const ScalarForm& f) {
    OneForm out = zero_oneform(f.manifold(), f.truncation());
    // Drop the mean mode: it generates no exact part.
    out.alpha = f.mapped([](double lam) { return lam == 0.0 ? 0.0 : 1.0; });
    return out;
}

ScalarForm codifferential(const OneForm& a) {
    return a.alpha.mapped([](double lam) { return -lam; });
}

ScalarForm curl_scalar(const OneForm& a) {
    return a.beta.mapped([](double lam) { return lam; });
}

OneForm delta_d(const OneForm& a) {
    OneForm out = zero_oneform(a.manifold(), a.truncation());
    out.beta = a.beta.mapped([](double lam) { return -lam; });
    return out;
}

ScalarForm hodge_laplacian(const ScalarForm& f) {
    return f.mapped([](double lam) { return lam; });
}

OneForm hodge_laplacian(const OneForm& a) {
    OneForm out = a;
    out.alpha = a.alpha.mapped([](double lam) { return lam; });
    out.beta = a.beta.mapped([](double lam) { return lam; });
    out.harmonic.setZero();
    return out;
}

ScalarForm heat_propagate(const ScalarForm& f, double t) {
    require(t >= 0.0, "heat_propagate: t must be nonnegative");
    return f.mapped([t](double lam) { return std::exp(lam * t); });
}

OneForm heat_propagate(const OneForm& a, double t) {
    require(t >= 0.0, "heat_propagate: t must be nonnegative");
    OneForm out = a;
    out.alpha = a.alpha.mapped([t](double lam) { return std::exp(lam * t); });
    out.beta = a.beta.mapped([t](double lam) { return std::exp(lam * t); });
    return out;
}

ScalarForm harmonic_projection(const ScalarForm& f) {
    return f.mapped([](double lam) { return lam == 0.0 ? 1.0 : 0.0; });
}

OneForm harmonic_projection(const OneForm& a) {
    OneForm out = zero_oneform(a.manifold(), a.truncation());
    out.harmonic = a.harmonic;
    return out;
}

double eval_scalar(const ScalarForm& f, const Point& p) {
    require_same_manifold(f.manifold(), p.manifold, "eval_scalar");
    if (is_torus(f.manifold())) {
        std::complex<double> sum = 0.0;
        for (const auto& [key, c] : f.coeffs()) {
            Eigen::Vector2d k = wave_vector(f.manifold(), key.first, key.second);
            sum += c * std::exp(kI * k.dot(p.coords.head<2>()));
        }
        return sum.real();
    }
    SphereAngles s = sphere_angles(p);
    double sum = 0.0;
    for (const auto& [key, c] : f.coeffs())
        sum += c.real() * real_sph_harm(key.first, key.second, s.theta, s.phi);
    return sum;
}

Eigen::VectorXd scalar_gradient(const ScalarForm& f, const Point& p) {
    require_same_manifold(f.manifold(), p.manifold, "scalar_gradient");
    if (is_torus(f.manifold())) {
        Eigen::Vector2d grad = Eigen::Vector2d::Zero();
        for (const auto& [key, c] : f.coeffs()) {
            Eigen::Vector2d k = wave_vector(f.manifold(), key.first, key.second);
            std::complex<double> e =
                c * std::exp(kI * k.dot(p.coords.head<2>()));
            grad += (kI * e).real() * k;
        }
        return grad;
    }
    SphereAngles s = sphere_angles(p);
    const double rho = p.manifold->radius();
    double ft = 0.0, fp = 0.0;
    for (const auto& [key, c] : f.coeffs()) {
        SphHarmJet j = real_sph_harm_jet(key.first, key.second, s.theta, s.phi);
        ft += c.real() * j.yt;
        fp += c.real() * j.yp;
    }
    require(s.sin_theta > 1e-9, "scalar_gradient: evaluation at a pole");
    return (ft * s.e_theta + (fp / s.sin_theta) * s.e_phi) / rho;
}

Eigen::MatrixXd scalar_hessian(const ScalarForm& f, const Point& p,
                               const Eigen::MatrixXd& frame) {
    require_same_manifold(f.manifold(), p.manifold, "scalar_hessian");
    const int d = static_cast<int>(frame.cols());
    if (is_torus(f.manifold())) {
        Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
        for (const auto& [key, c] : f.coeffs()) {
            Eigen::Vector2d k = wave_vector(f.manifold(), key.first, key.second);
            std::complex<double> e =
                c * std::exp(kI * k.dot(p.coords.head<2>()));
            H += (-e.real()) * (k * k.transpose());
        }
        return frame.transpose() * H * frame;
    }
    SphereAngles s = sphere_angles(p);
    require(s.sin_theta > 1e-9, "scalar_hessian: evaluation at a pole");
    const double rho2 = p.manifold->radius() * p.manifold->radius();
    const double cot = s.cos_theta / s.sin_theta;
    double ft = 0.0, fp = 0.0, ftt = 0.0, fpp = 0.0, ftp = 0.0;
    for (const auto& [key, c] : f.coeffs()) {
        SphHarmJet j = real_sph_harm_jet(key.first, key.second, s.theta, s.phi);
        ft += c.real() * j.yt;
        fp += c.real() * j.yp;
        ftt += c.real() * j.ytt;
        fpp += c.real() * j.ypp;
        ftp += c.real() * j.ytp;
    }
    // Covariant Hessian in the orthonormal polar frame (e_theta, e_phi).
    Eigen::Matrix2d H;
    H(0, 0) = ftt / rho2;
    H(0, 1) = H(1, 0) = (ftp - cot * fp) / (rho2 * s.sin_theta);
    H(1, 1) = (fpp / (s.sin_theta * s.sin_theta) + cot * ft) / rho2;
    // Express on the requested frame columns.
    Eigen::MatrixXd B(2, d);
    for (int mu = 0; mu < d; ++mu) {
        B(0, mu) = s.e_theta.dot(Eigen::Vector3d(frame.col(mu).head<3>()));
        B(1, mu) = s.e_phi.dot(Eigen::Vector3d(frame.col(mu).head<3>()));
    }
    return B.transpose() * H * B;
}

Eigen::VectorXd oneform_vector(const OneForm& a, const Point& p) {
    Eigen::VectorXd v = scalar_gradient(a.alpha, p);
    v += rotate90(p, scalar_gradient(a.beta, p));
    if (is_torus(a.manifold())) v += a.harmonic;
    return v;
}

double eval_oneform(const OneForm& a, const Tangent& v) {
    return oneform_vector(a, v.base).dot(v.vec);
}

double line_integral(const OneForm& a, const Curve& c) {
    require_same_manifold(a.manifold(), c.manifold, "line_integral");
    const double dtau = 1.0 / c.grid_size;
    double sum = 0.0;
    for (int i = 0; i <= c.grid_size; ++i) {
        double w = (i == 0 || i == c.grid_size) ? 0.5 : 1.0;
        sum += w * dtau * eval_oneform(a, velocity(c, i));
    }
    return sum;
}

double g_inner(const ScalarForm& f, const ScalarForm& g) {
    require_same_manifold(f.manifold(), g.manifold(), "g_inner");
    double volume_factor;
    if (is_torus(f.manifold())) {
        const Eigen::VectorXd& P = f.manifold()->periods();
        volume_factor = P[0] * P[1];
    } else {
        double rho = f.manifold()->radius();
        volume_factor = rho * rho;
    }
    std::complex<double> sum = 0.0;
    for (const auto& [key, c] : f.coeffs())
        sum += std::conj(c) * g.coeff(key.first, key.second);
    return volume_factor * sum.real();
}

double g_inner(const OneForm& a, const OneForm& b) {
    require_same_manifold(a.manifold(), b.manifold(), "g_inner");
    auto dirichlet = [](const ScalarForm& u, const ScalarForm& v) {
        // <du, dv> = <-lap u, v> by Parseval.
        return g_inner(u.mapped([](double lam) { return -lam; }), v);
    };
    double sum = dirichlet(a.alpha, b.alpha) + dirichlet(a.beta, b.beta);
    if (is_torus(a.manifold())) {
        const Eigen::VectorXd& P = a.manifold()->periods();
        sum += P[0] * P[1] * a.harmonic.dot(b.harmonic);
    }
    return sum;
}

double g_norm(const OneForm& a) { return std::sqrt(g_inner(a, a)); }

namespace {

/// Iterates f over a quadrature rule exact for the truncated basis products:
/// callback(point, weight) with weights summing to the manifold volume.
void for_quadrature(const ManifoldPtr& m, int truncation,
                    const std::function<void(const Point&, double)>& cb) {
    if (is_torus(m)) {
        const Eigen::VectorXd& P = m->periods();
        const int n = 4 * truncation + 4;
        const double w = P[0] * P[1] / (n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cb(make_point(m, Eigen::Vector2d(P[0] * i / n, P[1] * j / n)), w);
        return;
    }
    const double rho = m->radius();
    const int ntheta = 2 * truncation + 2;
    const int nphi = 4 * truncation + 4;
    std::vector<double> x, gw;
    gauss_legendre(ntheta, x, gw);
    for (int i = 0; i < ntheta; ++i) {
        double ct = x[static_cast<size_t>(i)];
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < nphi; ++j) {
            double phi = 2.0 * kPi * j / nphi;
            Eigen::Vector3d pos(rho * st * std::cos(phi),
                                rho * st * std::sin(phi), rho * ct);
            double w = gw[static_cast<size_t>(i)] * (2.0 * kPi / nphi) * rho * rho;
            cb(make_point(m, pos), w);
        }
    }
}

}  // namespace

ScalarForm project_scalar(const ManifoldPtr& m, int truncation,
                          const std::function<double(const Point&)>& f) {
    ScalarForm out(m, truncation);
    if (is_torus(m)) {
        const Eigen::VectorXd& P = m->periods();
        const double volume = P[0] * P[1];
        std::map<std::pair<int, int>, std::complex<double>> acc;
        for_quadrature(m, truncation, [&](const Point& p, double w) {
            double v = f(p);
            for (int k1 = -truncation; k1 <= truncation; ++k1)
                for (int k2 = -truncation; k2 <= truncation; ++k2) {
                    Eigen::Vector2d k = wave_vector(m, k1, k2);
                    acc[{k1, k2}] += w * v *
                                     std::exp(-kI * k.dot(p.coords.head<2>()));
                }
        });
        // acc is conjugate-symmetric; add each mode pair once (add_mode
        // writes the mirror itself).
        for (auto& [key, c] : acc) {
            c /= volume;
            if (std::abs(c) <= 1e-13) continue;
            if (key.first > 0 || (key.first == 0 && key.second > 0) ||
                (key.first == 0 && key.second == 0))
                out.add_mode(key.first, key.second, c);
        }
        return out;
    }
    for_quadrature(m, truncation, [&](const Point& p, double w) {
        SphereAngles s = sphere_angles(p);
        double v = f(p);
        for (int l = 0; l <= truncation; ++l)
            for (int mm = -l; mm <= l; ++mm)
                out.add_mode(l, mm,
                             w * v * real_sph_harm(l, mm, s.theta, s.phi) /
                                 (m->radius() * m->radius()));
    });
    // Drop quadrature noise.
    ScalarForm cleaned(m, truncation);
    for (const auto& [key, c] : out.coeffs())
        if (std::abs(c) > 1e-13) cleaned.add_mode(key.first, key.second, c);
    return cleaned;
}

OneForm project_oneform(const ManifoldPtr& m, int truncation,
                        const std::function<Eigen::VectorXd(const Point&)>& a) {
    OneForm out = zero_oneform(m, truncation);
    ScalarForm alpha(m, truncation), beta(m, truncation);
    if (is_torus(m)) {
        const Eigen::VectorXd& P = m->periods();
        const double volume = P[0] * P[1];
        std::map<std::pair<int, int>, std::complex<double>> acc_a, acc_b;
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for_quadrature(m, truncation, [&](const Point& p, double w) {
            Eigen::Vector2d v = a(p);
            mean += w * v;
            for (int k1 = -truncation; k1 <= truncation; ++k1)
                for (int k2 = -truncation; k2 <= truncation; ++k2) {
                    if (k1 == 0 && k2 == 0) continue;
                    Eigen::Vector2d k = wave_vector(m, k1, k2);
                    std::complex<double> conj_e =
                        std::exp(-kI * k.dot(p.coords.head<2>()));
                    // <a, d e_k> and <a, *d e_k> integrands.
                    Eigen::Vector2d jk(-k[1], k[0]);
                    acc_a[{k1, k2}] += w * (-kI) * k.dot(v) * conj_e;
                    acc_b[{k1, k2}] += w * (-kI) * jk.dot(v) * conj_e;
                }
        });
        auto write = [&](ScalarForm& target,
                         std::map<std::pair<int, int>, std::complex<double>>& acc) {
            for (const auto& [key, c] : acc) {
                double lam = target.eigenvalue(key.first, key.second);
                std::complex<double> coeff = c / (-lam) / volume;
                if (std::abs(coeff) <= 1e-13) continue;
                if (key.first > 0 || (key.first == 0 && key.second > 0))
                    target.add_mode(key.first, key.second, coeff);
            }
        };
        write(alpha, acc_a);
        write(beta, acc_b);
        out.alpha = alpha;
        out.beta = beta;
        out.harmonic = mean / volume;
        return out;
    }
    const double rho = m->radius();
    for_quadrature(m, truncation, [&](const Point& p, double w) {
        Eigen::Vector3d v = a(p).head<3>();
        Eigen::Vector3d jv = rotate90(p, v).head<3>();
        SphereAngles s = sphere_angles(p);
        for (int l = 1; l <= truncation; ++l) {
            const double dirichlet = l * (l + 1.0);
            for (int mm = -l; mm <= l; ++mm) {
                SphHarmJet j = real_sph_harm_jet(l, mm, s.theta, s.phi);
                Eigen::Vector3d grad =
                    (j.yt * s.e_theta + (j.yp / s.sin_theta) * s.e_phi) / rho;
                alpha.add_mode(l, mm, w * v.dot(grad) / dirichlet);
                // <a, *dY> = <J^{-1} a, dY> = -<J a, dY>.
                beta.add_mode(l, mm, -w * jv.dot(grad) / dirichlet);
            }
        }
    });
    ScalarForm alpha_c(m, truncation), beta_c(m, truncation);
    for (const auto& [key, c] : alpha.coeffs())
        if (std::abs(c) > 1e-13) alpha_c.add_mode(key.first, key.second, c);
    for (const auto& [key, c] : beta.coeffs())
        if (std::abs(c) > 1e-13) beta_c.add_mode(key.first, key.second, c);
    out.alpha = alpha_c;
    out.beta = beta_c;
    return out;
}

nlohmann::json manifold_to_json(const ManifoldPtr& m) {
    nlohmann::json j;
    switch (m->kind()) {
        case ManifoldKind::Euclidean:
            j["kind"] = "euclidean";
            j["dim"] = m->dim();
            break;
        case ManifoldKind::FlatTorus: {
            j["kind"] = "flat_torus";
            std::vector<double> periods(m->periods().begin(),
                                        m->periods().end());
            j["periods"] = periods;
            break;
        }
        case ManifoldKind::Sphere2:
            j["kind"] = "sphere2";
            j["radius"] = m->radius();
            break;
    }
    return j;
}

ManifoldPtr manifold_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "euclidean") return ManifoldSpec::euclidean(j.at("dim").get<int>());
    if (kind == "flat_torus") {
        std::vector<double> p = j.at("periods").get<std::vector<double>>();
        Eigen::VectorXd periods =
            Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<long>(p.size()));
        return ManifoldSpec::flat_torus(periods);
    }
    if (kind == "sphere2") return ManifoldSpec::sphere2(j.at("radius").get<double>());
    throw std::invalid_argument("manifold_from_json: unknown kind '" + kind + "'");
}

nlohmann::json scalar_to_json(const ScalarForm& f) {
    nlohmann::json j;
    j["manifold"] = manifold_to_json(f.manifold());
    j["truncation"] = f.truncation();
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [key, c] : f.coeffs())
        coeffs.push_back({key.first, key.second, c.real(), c.imag()});
    j["coefficients"] = coeffs;
    return j;
}

ScalarForm scalar_from_json(const nlohmann::json& j) {
    ScalarForm f(manifold_from_json(j.at("manifold")),
                 j.at("truncation").get<int>());
    for (const auto& entry : j.at("coefficients")) {
        int a = entry.at(0).get<int>(), b = entry.at(1).get<int>();
        std::complex<double> c(entry.at(2).get<double>(),
                               entry.at(3).get<double>());
        // Stored lists are conjugate-complete on the torus; add each pair once.
        if (is_torus(f.manifold()) &&
            !(a > 0 || (a == 0 && b > 0) || (a == 0 && b == 0)))
            continue;
        f.add_mode(a, b, c);
    }
    f.check_invariants();
    return f;
}

nlohmann::json oneform_to_json(const OneForm& a) {
    nlohmann::json j;
    j["alpha"] = scalar_to_json(a.alpha);
    j["beta"] = scalar_to_json(a.beta);
    j["harmonic"] = {a.harmonic[0], a.harmonic[1]};
    return j;
}

OneForm oneform_from_json(const nlohmann::json& j) {
    OneForm a{scalar_from_json(j.at("alpha")), scalar_from_json(j.at("beta")),
              Eigen::Vector2d::Zero()};
    const auto& h = j.at("harmonic");
    a.harmonic = Eigen::Vector2d(h.at(0).get<double>(), h.at(1).get<double>());
    require(a.alpha.manifold()->same_as(*a.beta.manifold()),
            "oneform_from_json: potentials on different manifolds");
    return a;
}

}  // namespace levylap
