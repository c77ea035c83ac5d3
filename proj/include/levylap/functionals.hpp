#pragma once

#include "levylap/hodge.hpp"

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace levylap {

/// Smooth outer map F: R^arity -> R with its gradient, drawn from the
/// registry; no symbolic engine.
struct SmoothMap {
    std::string name;
    int arity = 1;
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// Registered maps: "identity", "square", "cube", "cos", "sin", "exp",
/// "negate", "sum2", "product2".
const SmoothMap& smooth_map_registry(const std::string& name);

struct PathFunctional;
using FunctionalPtr = std::shared_ptr<const PathFunctional>;

/// Immutable expression tree over the functional algebra on path space.
/// Leaves: Constant, Lf (integral of a scalar form along the curve), Theta
/// (line integral of a 1-form). Nodes: Product, Compose (smooth outer map).
struct PathFunctional {
    enum class Kind { Constant, Lf, Theta, Product, Compose };

    Kind kind = Kind::Constant;
    double constant = 0.0;
    std::optional<ScalarForm> f;  // Lf leaves
    std::optional<OneForm> a;     // Theta leaves
    std::vector<FunctionalPtr> children;
    SmoothMap outer;  // Compose nodes

    /// Common manifold of all leaf forms; null for form-free trees.
    ManifoldPtr manifold;
};

FunctionalPtr make_constant(double value);
FunctionalPtr make_lf(ScalarForm f);
FunctionalPtr make_theta(OneForm a);
FunctionalPtr make_product(std::vector<FunctionalPtr> children);
FunctionalPtr make_compose(const SmoothMap& outer,
                           std::vector<FunctionalPtr> children);
FunctionalPtr make_compose(const std::string& registry_name,
                           std::vector<FunctionalPtr> children);

/// Structure-preserving transformation of the leaf forms (heat flows etc.).
FunctionalPtr map_leaves(const PathFunctional& F,
                         const std::function<ScalarForm(const ScalarForm&)>& on_f,
                         const std::function<OneForm(const OneForm&)>& on_a);

double eval(const PathFunctional& F, const Curve& c);

/// U^a(c) = exp(-i Theta_a(c)); unit modulus.
std::complex<double> eval_u(const OneForm& a, const Curve& c);

/// |Theta_a(c1) - Theta_a(c2)| for a closed form a (da = 0, checked
/// spectrally); the difference detects distinct homotopy classes.
double homotopy_invariant_check(const OneForm& a, const Curve& c1,
                                const Curve& c2);

/// Product of L_f / Theta_a atoms over single-eigenvalue spectral forms,
/// with the predicted eigenvalue sum(lambda_j) + sum(mu_k).
std::pair<FunctionalPtr, double> build_eigenfunctional(
    const std::vector<ScalarForm>& fs, const std::vector<OneForm>& as);

}  // namespace levylap
