#include "levylap/functionals.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace levylap {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::map<std::string, SmoothMap> build_registry() {
    auto unary = [](const std::string& name, double (*v)(double),
                    double (*g)(double)) {
        SmoothMap m;
        m.name = name;
        m.arity = 1;
        m.value = [v](const Eigen::VectorXd& x) { return v(x[0]); };
        m.gradient = [g](const Eigen::VectorXd& x) {
            return Eigen::VectorXd::Constant(1, g(x[0]));
        };
        return m;
    };
    std::map<std::string, SmoothMap> reg;
    reg["identity"] = unary(
        "identity", [](double x) { return x; }, [](double) { return 1.0; });
    reg["negate"] = unary(
        "negate", [](double x) { return -x; }, [](double) { return -1.0; });
    reg["square"] = unary(
        "square", [](double x) { return x * x; },
        [](double x) { return 2.0 * x; });
    reg["cube"] = unary(
        "cube", [](double x) { return x * x * x; },
        [](double x) { return 3.0 * x * x; });
    reg["cos"] = unary(
        "cos", [](double x) { return std::cos(x); },
        [](double x) { return -std::sin(x); });
    reg["sin"] = unary(
        "sin", [](double x) { return std::sin(x); },
        [](double x) { return std::cos(x); });
    reg["exp"] = unary(
        "exp", [](double x) { return std::exp(x); },
        [](double x) { return std::exp(x); });

    SmoothMap sum2;
    sum2.name = "sum2";
    sum2.arity = 2;
    sum2.value = [](const Eigen::VectorXd& x) { return x[0] + x[1]; };
    sum2.gradient = [](const Eigen::VectorXd&) {
        return Eigen::VectorXd::Ones(2);
    };
    reg["sum2"] = sum2;

    SmoothMap product2;
    product2.name = "product2";
    product2.arity = 2;
    product2.value = [](const Eigen::VectorXd& x) { return x[0] * x[1]; };
    product2.gradient = [](const Eigen::VectorXd& x) {
        return Eigen::Vector2d(x[1], x[0]);
    };
    reg["product2"] = product2;
    return reg;
}

/// Shared manifold of the children (null when none carries one).
ManifoldPtr common_manifold(const std::vector<FunctionalPtr>& children,
                            const std::string& who) {
    ManifoldPtr m;
    for (const auto& child : children) {
        require(child != nullptr, who + ": null child");
        if (!child->manifold) continue;
        if (!m)
            m = child->manifold;
        else
            require(m->same_as(*child->manifold),
                    who + ": children live on different manifolds");
    }
    return m;
}

}  // namespace

const SmoothMap& smooth_map_registry(const std::string& name) {
    static const std::map<std::string, SmoothMap> registry = build_registry();
    auto it = registry.find(name);
    require(it != registry.end(),
            "smooth_map_registry: unknown map '" + name + "'");
    return it->second;
}

FunctionalPtr make_constant(double value) {
    auto F = std::make_shared<PathFunctional>();
    F->kind = PathFunctional::Kind::Constant;
    F->constant = value;
    return F;
}

FunctionalPtr make_lf(ScalarForm f) {
    auto F = std::make_shared<PathFunctional>();
    F->kind = PathFunctional::Kind::Lf;
    F->manifold = f.manifold();
    F->f = std::move(f);
    return F;
}

FunctionalPtr make_theta(OneForm a) {
    auto F = std::make_shared<PathFunctional>();
    F->kind = PathFunctional::Kind::Theta;
    F->manifold = a.manifold();
    F->a = std::move(a);
    return F;
}

FunctionalPtr make_product(std::vector<FunctionalPtr> children) {
    require(!children.empty(), "make_product: needs at least one child");
    auto F = std::make_shared<PathFunctional>();
    F->kind = PathFunctional::Kind::Product;
    F->manifold = common_manifold(children, "make_product");
    F->children = std::move(children);
    return F;
}

FunctionalPtr make_compose(const SmoothMap& outer,
                           std::vector<FunctionalPtr> children) {
    require(outer.value && outer.gradient,
            "make_compose: outer map lacks value or gradient");
    require(static_cast<int>(children.size()) == outer.arity,
            "make_compose: child count does not match the outer arity");
    auto F = std::make_shared<PathFunctional>();
    F->kind = PathFunctional::Kind::Compose;
    F->manifold = common_manifold(children, "make_compose");
    F->children = std::move(children);
    F->outer = outer;
    return F;
}

FunctionalPtr make_compose(const std::string& registry_name,
                           std::vector<FunctionalPtr> children) {
    return make_compose(smooth_map_registry(registry_name), std::move(children));
}

FunctionalPtr map_leaves(const PathFunctional& F,
                         const std::function<ScalarForm(const ScalarForm&)>& on_f,
                         const std::function<OneForm(const OneForm&)>& on_a) {
    switch (F.kind) {
        case PathFunctional::Kind::Constant:
            return make_constant(F.constant);
        case PathFunctional::Kind::Lf:
            return make_lf(on_f(*F.f));
        case PathFunctional::Kind::Theta:
            return make_theta(on_a(*F.a));
        case PathFunctional::Kind::Product:
        case PathFunctional::Kind::Compose: {
            std::vector<FunctionalPtr> children;
            children.reserve(F.children.size());
            for (const auto& child : F.children)
                children.push_back(map_leaves(*child, on_f, on_a));
            if (F.kind == PathFunctional::Kind::Product)
                return make_product(std::move(children));
            return make_compose(F.outer, std::move(children));
        }
    }
    throw std::logic_error("map_leaves: unreachable");
}

double eval(const PathFunctional& F, const Curve& c) {
    if (F.manifold)
        require(F.manifold->same_as(*c.manifold),
                "eval: functional and curve manifolds differ");
    switch (F.kind) {
        case PathFunctional::Kind::Constant:
            return F.constant;
        case PathFunctional::Kind::Lf: {
            const double dtau = 1.0 / c.grid_size;
            double sum = 0.0;
            for (int i = 0; i <= c.grid_size; ++i) {
                double w = (i == 0 || i == c.grid_size) ? 0.5 : 1.0;
                sum += w * dtau * eval_scalar(*F.f, c.at(i));
            }
            return sum;
        }
        case PathFunctional::Kind::Theta:
            return line_integral(*F.a, c);
        case PathFunctional::Kind::Product: {
            double prod = 1.0;
            for (const auto& child : F.children) prod *= eval(*child, c);
            return prod;
        }
        case PathFunctional::Kind::Compose: {
            Eigen::VectorXd xs(F.children.size());
            for (size_t i = 0; i < F.children.size(); ++i)
                xs[static_cast<long>(i)] = eval(*F.children[i], c);
            return F.outer.value(xs);
        }
    }
    throw std::logic_error("eval: unreachable");
}

std::complex<double> eval_u(const OneForm& a, const Curve& c) {
    return std::exp(std::complex<double>(0.0, -line_integral(a, c)));
}

double homotopy_invariant_check(const OneForm& a, const Curve& c1,
                                const Curve& c2) {
    require(curl_scalar(a).is_zero(1e-12),
            "homotopy_invariant_check: the 1-form is not closed");
    require(c1.closed && c2.closed,
            "homotopy_invariant_check: curves must be closed");
    return std::abs(line_integral(a, c1) - line_integral(a, c2));
}

namespace {

/// Single shared Laplace eigenvalue of a spectral form; throws when the
/// form mixes eigenvalues.
double single_eigenvalue(const ScalarForm& f, const std::string& label) {
    bool found = false;
    double lambda = 0.0;
    for (const auto& [key, c] : f.coeffs()) {
        if (std::abs(c) == 0.0) continue;
        double lam = f.eigenvalue(key.first, key.second);
        if (!found) {
            lambda = lam;
            found = true;
        } else if (std::abs(lam - lambda) > 1e-12) {
            throw std::invalid_argument(
                "build_eigenfunctional: " + label +
                " mixes Laplace eigenvalues " + std::to_string(lambda) +
                " and " + std::to_string(lam));
        }
    }
    require(found, "build_eigenfunctional: " + label + " is the zero form");
    return lambda;
}

}  // namespace

std::pair<FunctionalPtr, double> build_eigenfunctional(
    const std::vector<ScalarForm>& fs, const std::vector<OneForm>& as) {
    if (fs.empty() && as.empty()) return {make_constant(1.0), 0.0};
    std::vector<FunctionalPtr> atoms;
    double total = 0.0;
    for (size_t i = 0; i < fs.size(); ++i) {
        total += single_eigenvalue(fs[i], "scalar form #" + std::to_string(i));
        atoms.push_back(make_lf(fs[i]));
    }
    for (size_t i = 0; i < as.size(); ++i) {
        const std::string label = "1-form #" + std::to_string(i);
        // Theta eigenfunctionals need delta d a = -mu a, so a must be a
        // purely coexact eigenform: exact parts drop out of delta d, and
        // harmonic parts sit in the kernel.
        require(as[i].harmonic.norm() == 0.0,
                "build_eigenfunctional: " + label + " carries a harmonic part");
        require(as[i].alpha.is_zero(),
                "build_eigenfunctional: " + label + " carries an exact part");
        total += single_eigenvalue(as[i].beta, label);
        atoms.push_back(make_theta(as[i]));
    }
    if (atoms.size() == 1) return {atoms.front(), total};
    return {make_product(std::move(atoms)), total};
}

}  // namespace levylap
