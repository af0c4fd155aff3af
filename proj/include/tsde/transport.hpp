#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "tsde/timeseries.hpp"

namespace tsde {

/// All multi-indices in `dim` variables with total degree <= degree,
/// ordered by total degree, then lexicographically. Deterministic.
std::vector<std::vector<int>> total_degree_indices(int dim, int degree);

/// Probabilists' Hermite values He_0..He_n at y.
void hermite_values(double y, int n, double* out);

/// Multivariate polynomial in a probabilists' Hermite tensor basis.
struct PolynomialExpansion {
    int dim = 0;
    std::vector<std::vector<int>> multi_indices;  // each of length dim
    Eigen::VectorXd coefficients;

    double evaluate(const double* z) const;
    /// Partial derivative with respect to the last coordinate.
    double partial_last(const double* z) const;

    int max_degree() const;
    void validate() const;
};

/// MLE objective for one triangular component: (1/M) sum [T^2/2 - log dT]
/// plus a ridge term on the non-constant coefficients. Convex on the
/// feasible set {dT/dz_last > 0 at every sample}.
class ComponentObjective {
public:
    ComponentObjective(const Eigen::MatrixXd& samples, int degree, double ridge);

    int n_coeffs() const { return static_cast<int>(indices_.size()); }
    const std::vector<std::vector<int>>& multi_indices() const { return indices_; }

    double value(const Eigen::VectorXd& c) const;  // +inf when infeasible
    Eigen::VectorXd gradient(const Eigen::VectorXd& c) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& c) const;
    bool feasible(const Eigen::VectorXd& c) const;

    /// Coefficients of T(z) = z_last; feasible by construction.
    Eigen::VectorXd identity_coefficients() const;

private:
    int dim_;
    int degree_;
    double ridge_;
    long m_;
    std::vector<std::vector<int>> indices_;
    Eigen::MatrixXd phi_;      // M x K basis values
    Eigen::MatrixXd psi_;      // M x K basis last-coordinate derivatives
    Eigen::MatrixXd phi_gram_; // (Phi^T Phi)/M
    Eigen::VectorXd ridge_mask_;
};

struct ComponentFit {
    double objective = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool monotone_warning = false;  // derivative nonpositive on the scan grid
};

PolynomialExpansion fit_component(const Eigen::MatrixXd& samples, int degree,
                                  double ridge = 1e-4, ComponentFit* info = nullptr);

/// Lower-triangular monotone polynomial map. Row r models original data
/// channel ordering[r]; inputs are standardized before the polynomials.
struct MonotoneTriangularMap {
    int degree = 0;
    std::vector<int> ordering;
    Eigen::VectorXd means;  // per map row (permuted order)
    Eigen::VectorXd stds;
    std::vector<PolynomialExpansion> components;
    std::vector<std::array<double, 2>> monotone_domain;  // standardized coords
    std::vector<ComponentFit> fit_info;

    int dimension() const { return static_cast<int>(components.size()); }
    void validate() const;
};

MonotoneTriangularMap fit_map(const TimeSeries& ts, int degree,
                              const std::vector<int>& ordering = {},
                              double ridge = 1e-4, int threads = 0);

/// q_r = T_r(standardized y), rows in map order.
Eigen::VectorXd forward(const MonotoneTriangularMap& map, const Eigen::VectorXd& y);
TimeSeries forward_all(const MonotoneTriangularMap& map, const TimeSeries& ts);

/// Log density of the pullback of the standard normal under the map,
/// including the standardization Jacobian. -inf outside the
/// orientation-preserving region.
double pullback_log_density(const MonotoneTriangularMap& map, const Eigen::VectorXd& y);

/// Sequential triangular inversion by safeguarded Newton-bisection.
/// Samples that leave the monotone branch are clamped to its endpoint;
/// *clamped (when given) accumulates the count of clamped components.
Eigen::VectorXd inverse(const MonotoneTriangularMap& map, const Eigen::VectorXd& q,
                        long* clamped = nullptr);

/// Monomial coefficients (ascending powers of z) of a 1-D Hermite expansion.
std::vector<double> hermite_to_monomial_1d(const Eigen::VectorXd& hermite_coeffs);
std::vector<double> monomial_to_hermite_1d(const std::vector<double>& monomial_coeffs);

/// Monomial coefficients of map row `row` in the RAW variable, available
/// for 1-D rows only (row 0): composes the Hermite expansion with the
/// standardization shift/scale.
std::vector<double> raw_monomial_coefficients(const MonotoneTriangularMap& map, int row);

/// Builds a 1-D map (no standardization) from raw monomial coefficients;
/// used to seed maps with externally reported polynomials.
MonotoneTriangularMap map_from_monomial_1d(const std::vector<double>& monomial_coeffs);

}  // namespace tsde
