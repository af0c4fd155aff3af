#include "tsde/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsde/util.hpp"

namespace tsde {

namespace {
constexpr int kMaxDegree = 15;
constexpr double kGradTol = 1e-8;
constexpr int kMaxNewtonIters = 200;
constexpr int kScanPoints = 512;
constexpr double kRootTol = 1e-10;
constexpr int kMaxDoublings = 60;
}  // namespace

std::vector<std::vector<int>> total_degree_indices(int dim, int degree) {
    if (dim < 1 || degree < 0) throw std::invalid_argument("total_degree_indices: bad arguments");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    for (int total = 0; total <= degree; ++total) {
        // lexicographic compositions of `total` into dim parts
        std::function<void(int, int)> rec = [&](int pos, int rem) {
            if (pos == dim - 1) {
                cur[static_cast<std::size_t>(pos)] = rem;
                out.push_back(cur);
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                cur[static_cast<std::size_t>(pos)] = v;
                rec(pos + 1, rem - v);
            }
        };
        rec(0, total);
    }
    return out;
}

void hermite_values(double y, int n, double* out) {
    out[0] = 1.0;
    if (n >= 1) out[1] = y;
    for (int k = 1; k < n; ++k) out[k + 1] = y * out[k] - k * out[k - 1];
}

int PolynomialExpansion::max_degree() const {
    int d = 0;
    for (const auto& mi : multi_indices) {
        int t = 0;
        for (int a : mi) t += a;
        d = std::max(d, t);
    }
    return d;
}

void PolynomialExpansion::validate() const {
    if (dim < 1) throw std::invalid_argument("PolynomialExpansion: dim must be >= 1");
    if (static_cast<long>(multi_indices.size()) != coefficients.size()) {
        throw std::invalid_argument("PolynomialExpansion: coefficient count mismatch");
    }
    for (const auto& mi : multi_indices) {
        if (static_cast<int>(mi.size()) != dim) {
            throw std::invalid_argument("PolynomialExpansion: multi-index length mismatch");
        }
        for (int a : mi) {
            if (a < 0 || a > kMaxDegree) {
                throw std::invalid_argument("PolynomialExpansion: degree out of range");
            }
        }
    }
    auto sorted = multi_indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("PolynomialExpansion: duplicate multi-index");
    }
}

namespace {

// Per-call scratch table of Hermite values, dim x (deg+1).
thread_local std::vector<double> g_herm_tab;

const double* herm_table(const PolynomialExpansion& p, const double* z, int deg) {
    g_herm_tab.resize(static_cast<std::size_t>(p.dim) * (deg + 1));
    for (int j = 0; j < p.dim; ++j) {
        hermite_values(z[j], deg, &g_herm_tab[static_cast<std::size_t>(j) * (deg + 1)]);
    }
    return g_herm_tab.data();
}

}  // namespace

double PolynomialExpansion::evaluate(const double* z) const {
    const int deg = max_degree();
    const double* tab = herm_table(*this, z, deg);
    double sum = 0.0;
    for (std::size_t a = 0; a < multi_indices.size(); ++a) {
        double term = coefficients[static_cast<long>(a)];
        const auto& mi = multi_indices[a];
        for (int j = 0; j < dim; ++j) {
            term *= tab[static_cast<std::size_t>(j) * (deg + 1) + mi[static_cast<std::size_t>(j)]];
        }
        sum += term;
    }
    return sum;
}

double PolynomialExpansion::partial_last(const double* z) const {
    const int deg = max_degree();
    const double* tab = herm_table(*this, z, deg);
    const int last = dim - 1;
    double sum = 0.0;
    for (std::size_t a = 0; a < multi_indices.size(); ++a) {
        const auto& mi = multi_indices[a];
        const int al = mi[static_cast<std::size_t>(last)];
        if (al == 0) continue;
        // He_n' = n He_{n-1}
        double term = coefficients[static_cast<long>(a)] * al *
                      tab[static_cast<std::size_t>(last) * (deg + 1) + (al - 1)];
        for (int j = 0; j < last; ++j) {
            term *= tab[static_cast<std::size_t>(j) * (deg + 1) + mi[static_cast<std::size_t>(j)]];
        }
        sum += term;
    }
    return sum;
}

ComponentObjective::ComponentObjective(const Eigen::MatrixXd& samples, int degree, double ridge)
    : dim_(static_cast<int>(samples.cols())),
      degree_(degree),
      ridge_(ridge),
      m_(samples.rows()) {
    if (dim_ < 1) throw std::invalid_argument("ComponentObjective: need >= 1 input column");
    if (degree < 1 || degree > kMaxDegree) {
        throw std::invalid_argument("ComponentObjective: degree must be in [1, 15]");
    }
    indices_ = total_degree_indices(dim_, degree);
    const int k = n_coeffs();
    if (m_ < 10L * k) {
        throw std::invalid_argument("ComponentObjective: need M >= 10x coefficient count (" +
                                    std::to_string(10L * k) + " samples for " + std::to_string(k) +
                                    " coefficients)");
    }

    phi_.resize(m_, k);
    psi_.resize(m_, k);
    std::vector<double> tab(static_cast<std::size_t>(dim_) * (degree + 1));
    for (long mrow = 0; mrow < m_; ++mrow) {
        for (int j = 0; j < dim_; ++j) {
            hermite_values(samples(mrow, j), degree, &tab[static_cast<std::size_t>(j) * (degree + 1)]);
        }
        for (int a = 0; a < k; ++a) {
            const auto& mi = indices_[static_cast<std::size_t>(a)];
            double v = 1.0;
            for (int j = 0; j < dim_; ++j) {
                v *= tab[static_cast<std::size_t>(j) * (degree + 1) + mi[static_cast<std::size_t>(j)]];
            }
            phi_(mrow, a) = v;
            const int al = mi[static_cast<std::size_t>(dim_ - 1)];
            if (al == 0) {
                psi_(mrow, a) = 0.0;
            } else {
                double d = al * tab[static_cast<std::size_t>(dim_ - 1) * (degree + 1) + (al - 1)];
                for (int j = 0; j < dim_ - 1; ++j) {
                    d *= tab[static_cast<std::size_t>(j) * (degree + 1) + mi[static_cast<std::size_t>(j)]];
                }
                psi_(mrow, a) = d;
            }
        }
    }
    phi_gram_ = (phi_.transpose() * phi_) / static_cast<double>(m_);
    ridge_mask_.resize(k);
    for (int a = 0; a < k; ++a) {
        int total = 0;
        for (int v : indices_[static_cast<std::size_t>(a)]) total += v;
        ridge_mask_[a] = total == 0 ? 0.0 : 1.0;
    }
}

bool ComponentObjective::feasible(const Eigen::VectorXd& c) const {
    return ((psi_ * c).array() > 0.0).all();
}

double ComponentObjective::value(const Eigen::VectorXd& c) const {
    Eigen::VectorXd d = psi_ * c;
    if (!(d.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd t = phi_ * c;
    double j = 0.5 * t.squaredNorm() / static_cast<double>(m_);
    j -= d.array().log().sum() / static_cast<double>(m_);
    j += ridge_ * (ridge_mask_.array() * c.array().square()).sum();
    return j;
}

Eigen::VectorXd ComponentObjective::gradient(const Eigen::VectorXd& c) const {
    Eigen::VectorXd d = psi_ * c;
    Eigen::VectorXd g = phi_gram_ * c;
    g -= psi_.transpose() * d.cwiseInverse() / static_cast<double>(m_);
    g += 2.0 * ridge_ * ridge_mask_.cwiseProduct(c);
    return g;
}

Eigen::MatrixXd ComponentObjective::hessian(const Eigen::VectorXd& c) const {
    Eigen::VectorXd d = psi_ * c;
    Eigen::VectorXd w = d.cwiseInverse();  // 1/d, squared below
    Eigen::MatrixXd h = phi_gram_;
    h.noalias() += psi_.transpose() * w.array().square().matrix().asDiagonal() * psi_ /
                   static_cast<double>(m_);
    h += (2.0 * ridge_ * ridge_mask_).asDiagonal();
    return h;
}

Eigen::VectorXd ComponentObjective::identity_coefficients() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_coeffs());
    std::vector<int> want(static_cast<std::size_t>(dim_), 0);
    want[static_cast<std::size_t>(dim_ - 1)] = 1;
    for (int a = 0; a < n_coeffs(); ++a) {
        if (indices_[static_cast<std::size_t>(a)] == want) {
            c[a] = 1.0;
            return c;
        }
    }
    throw std::logic_error("ComponentObjective: linear term missing from basis");
}

PolynomialExpansion fit_component(const Eigen::MatrixXd& samples, int degree, double ridge,
                                  ComponentFit* info) {
    ComponentObjective obj(samples, degree, ridge);
    Eigen::VectorXd c = obj.identity_coefficients();
    if (!obj.feasible(c)) {
        throw std::logic_error("fit_component: identity initialization infeasible");
    }

    double jval = obj.value(c);
    Eigen::VectorXd g = obj.gradient(c);
    int iter = 0;
    for (; iter < kMaxNewtonIters; ++iter) {
        if (g.lpNorm<Eigen::Infinity>() < kGradTol) break;
        Eigen::MatrixXd h = obj.hessian(c);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("fit_component: Hessian factorization failed (conditioning)");
        }
        Eigen::VectorXd p = -ldlt.solve(g);
        if (!p.allFinite()) {
            throw std::runtime_error("fit_component: Newton step not finite (conditioning)");
        }
        double slope = g.dot(p);
        if (slope >= 0.0) p = -g, slope = -g.squaredNorm();  // fall back to steepest descent

        double eta = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 80; ++ls) {
            double jtrial = obj.value(c + eta * p);
            if (jtrial <= jval + 1e-4 * eta * slope) {
                c += eta * p;
                jval = jtrial;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;  // step collapsed; gradient is the verdict
        g = obj.gradient(c);
    }

    PolynomialExpansion out;
    out.dim = static_cast<int>(samples.cols());
    out.multi_indices = obj.multi_indices();
    out.coefficients = c;
    if (!obj.feasible(c)) {
        throw std::runtime_error("fit_component: monotonicity lost at samples after fit");
    }
    if (info) {
        info->objective = jval;
        info->grad_norm = g.lpNorm<Eigen::Infinity>();
        info->iterations = iter;
    }
    return out;
}

void MonotoneTriangularMap::validate() const {
    const int n = dimension();
    if (n < 1) throw std::invalid_argument("MonotoneTriangularMap: empty map");
    if (static_cast<int>(ordering.size()) != n || means.size() != n || stds.size() != n ||
        static_cast<int>(monotone_domain.size()) != n) {
        throw std::invalid_argument("MonotoneTriangularMap: field sizes disagree");
    }
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int v : ordering) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]++) {
            throw std::invalid_argument("MonotoneTriangularMap: ordering is not a permutation");
        }
    }
    for (int r = 0; r < n; ++r) {
        if (components[static_cast<std::size_t>(r)].dim != r + 1) {
            throw std::invalid_argument("MonotoneTriangularMap: component " + std::to_string(r) +
                                        " must depend on exactly " + std::to_string(r + 1) +
                                        " variables");
        }
        components[static_cast<std::size_t>(r)].validate();
        if (!(stds[r] > 0.0)) throw std::invalid_argument("MonotoneTriangularMap: std must be > 0");
        if (!(monotone_domain[static_cast<std::size_t>(r)][0] <
              monotone_domain[static_cast<std::size_t>(r)][1])) {
            throw std::invalid_argument("MonotoneTriangularMap: empty monotone domain");
        }
    }
}

namespace {

double column_median(Eigen::VectorXd v) {
    std::sort(v.begin(), v.end());
    const long n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Scans dT/dz_last over [lo, hi] with preceding coordinates fixed, returning
// the maximal positive run containing `anchor` (or the widest run).
std::array<double, 2> scan_monotone_domain(const PolynomialExpansion& comp,
                                           const Eigen::VectorXd& preceding, double lo, double hi,
                                           double anchor, bool* warning) {
    std::vector<double> z(static_cast<std::size_t>(comp.dim));
    for (int j = 0; j + 1 < comp.dim; ++j) z[static_cast<std::size_t>(j)] = preceding[j];
    std::vector<char> pos(kScanPoints);
    std::vector<double> grid(kScanPoints);
    bool any_nonpos = false;
    for (int i = 0; i < kScanPoints; ++i) {
        double t = lo + (hi - lo) * i / (kScanPoints - 1);
        grid[static_cast<std::size_t>(i)] = t;
        z[static_cast<std::size_t>(comp.dim - 1)] = t;
        bool p = comp.partial_last(z.data()) > 0.0;
        pos[static_cast<std::size_t>(i)] = p;
        if (!p) any_nonpos = true;
    }
    if (warning) *warning = any_nonpos;
    if (!any_nonpos) return {lo, hi};

    int anchor_idx = static_cast<int>(std::lround((anchor - lo) / (hi - lo) * (kScanPoints - 1)));
    anchor_idx = std::clamp(anchor_idx, 0, kScanPoints - 1);

    // positive runs
    int best_a = -1, best_b = -1;
    int run_a = -1;
    int hold_a = -1, hold_b = -1;
    for (int i = 0; i <= kScanPoints; ++i) {
        bool p = i < kScanPoints && pos[static_cast<std::size_t>(i)];
        if (p && run_a < 0) run_a = i;
        if (!p && run_a >= 0) {
            int run_b = i - 1;
            if (anchor_idx >= run_a && anchor_idx <= run_b) {
                best_a = run_a;
                best_b = run_b;
            }
            if (hold_a < 0 || run_b - run_a > hold_b - hold_a) {
                hold_a = run_a;
                hold_b = run_b;
            }
            run_a = -1;
        }
    }
    if (best_a < 0) {
        best_a = hold_a;
        best_b = hold_b;
    }
    if (best_a < 0 || best_b <= best_a) {
        throw std::runtime_error("fit_map: no monotone interval found on the scan grid");
    }
    return {grid[static_cast<std::size_t>(best_a)], grid[static_cast<std::size_t>(best_b)]};
}

}  // namespace

MonotoneTriangularMap fit_map(const TimeSeries& ts, int degree, const std::vector<int>& ordering,
                              double ridge, int threads) {
    ts.validate();
    const int n = ts.channels();
    std::vector<int> ord = ordering;
    if (ord.empty()) {
        ord.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) ord[static_cast<std::size_t>(i)] = i;
    }
    if (static_cast<int>(ord.size()) != n) {
        throw std::invalid_argument("fit_map: ordering length must equal channel count");
    }

    // permute, then standardize
    TimeSeries permuted;
    permuted.dt = ts.dt;
    permuted.values.resize(ts.samples(), n);
    for (int r = 0; r < n; ++r) {
        if (ord[static_cast<std::size_t>(r)] < 0 || ord[static_cast<std::size_t>(r)] >= n) {
            throw std::invalid_argument("fit_map: ordering entry out of range");
        }
        permuted.values.col(r) = ts.values.col(ord[static_cast<std::size_t>(r)]);
        permuted.names.push_back(ts.names.empty() ? "ch" + std::to_string(ord[static_cast<std::size_t>(r)])
                                                  : ts.names[static_cast<std::size_t>(ord[static_cast<std::size_t>(r)])]);
    }
    Standardized std_data = standardize(permuted);

    MonotoneTriangularMap map;
    map.degree = degree;
    map.ordering = ord;
    map.means = std_data.means;
    map.stds = std_data.stds;
    map.components.resize(static_cast<std::size_t>(n));
    map.monotone_domain.resize(static_cast<std::size_t>(n));
    map.fit_info.resize(static_cast<std::size_t>(n));

    const Eigen::MatrixXd& z = std_data.ts.values;
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    parallel_for(n, threads, [&](int r) {
        try {
            Eigen::MatrixXd cols = z.leftCols(r + 1);
            map.components[static_cast<std::size_t>(r)] =
                fit_component(cols, degree, ridge, &map.fit_info[static_cast<std::size_t>(r)]);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(r)] = e.what();
        }
    });
    for (int r = 0; r < n; ++r) {
        if (!errors[static_cast<std::size_t>(r)].empty()) {
            throw std::runtime_error("fit_map: component " + std::to_string(r) + ": " +
                                     errors[static_cast<std::size_t>(r)]);
        }
    }

    // verification scan per component, preceding coordinates at their medians
    Eigen::VectorXd medians(n);
    for (int j = 0; j < n; ++j) medians[j] = column_median(z.col(j));
    for (int r = 0; r < n; ++r) {
        double lo = z.col(r).minCoeff() - 3.0;
        double hi = z.col(r).maxCoeff() + 3.0;
        bool warning = false;
        map.monotone_domain[static_cast<std::size_t>(r)] =
            scan_monotone_domain(map.components[static_cast<std::size_t>(r)], medians.head(r),
                                 lo, hi, medians[r], &warning);
        map.fit_info[static_cast<std::size_t>(r)].monotone_warning = warning;
    }
    map.validate();
    return map;
}

Eigen::VectorXd forward(const MonotoneTriangularMap& map, const Eigen::VectorXd& y) {
    const int n = map.dimension();
    if (y.size() != n) throw std::invalid_argument("forward: dimension mismatch");
    Eigen::VectorXd z(n), q(n);
    for (int r = 0; r < n; ++r) {
        z[r] = (y[map.ordering[static_cast<std::size_t>(r)]] - map.means[r]) / map.stds[r];
        q[r] = map.components[static_cast<std::size_t>(r)].evaluate(z.data());
    }
    return q;
}

TimeSeries forward_all(const MonotoneTriangularMap& map, const TimeSeries& ts) {
    const int n = map.dimension();
    if (ts.channels() != n) throw std::invalid_argument("forward_all: dimension mismatch");
    TimeSeries out;
    out.dt = ts.dt;
    out.values.resize(ts.samples(), n);
    for (int r = 0; r < n; ++r) {
        out.names.push_back("q" + std::to_string(r));
    }
    Eigen::VectorXd y(n);
    for (long m = 0; m < ts.samples(); ++m) {
        y = ts.values.row(m).transpose();
        out.values.row(m) = forward(map, y).transpose();
    }
    return out;
}

double pullback_log_density(const MonotoneTriangularMap& map, const Eigen::VectorXd& y) {
    const int n = map.dimension();
    if (y.size() != n) throw std::invalid_argument("pullback_log_density: dimension mismatch");
    constexpr double kLog2Pi = 1.8378770664093454836;
    Eigen::VectorXd z(n);
    double logdens = 0.0;
    for (int r = 0; r < n; ++r) {
        z[r] = (y[map.ordering[static_cast<std::size_t>(r)]] - map.means[r]) / map.stds[r];
        const auto& comp = map.components[static_cast<std::size_t>(r)];
        double t = comp.evaluate(z.data());
        double d = comp.partial_last(z.data());
        if (!(d > 0.0)) return -std::numeric_limits<double>::infinity();
        logdens += -0.5 * kLog2Pi - 0.5 * t * t + std::log(d) - std::log(map.stds[r]);
    }
    return logdens;
}

namespace {

struct ComponentRoot {
    double t = 0.0;
    bool clamped = false;
};

// Solves comp(z_prev, t) = target for t on the monotone branch.
ComponentRoot solve_component(const PolynomialExpansion& comp, std::vector<double>& z,
                              double target, double dom_lo, double dom_hi) {
    const std::size_t last = static_cast<std::size_t>(comp.dim - 1);
    auto f = [&](double t) {
        z[last] = t;
        return comp.evaluate(z.data()) - target;
    };
    auto deriv = [&](double t) {
        z[last] = t;
        return comp.partial_last(z.data());
    };

    double a = dom_lo, b = dom_hi;
    double fa = f(a), fb = f(b);

    int doublings = 0;
    while (fa > 0.0 && doublings < kMaxDoublings) {
        double na = a - (b - a);
        if (!(deriv(na) > 0.0)) break;  // leaving the monotone branch
        b = a;
        fb = fa;
        a = na;
        fa = f(a);
        ++doublings;
    }
    while (fb < 0.0 && doublings < kMaxDoublings) {
        double nb = b + (b - a);
        if (!(deriv(nb) > 0.0)) break;
        a = b;
        fa = fb;
        b = nb;
        fb = f(b);
        ++doublings;
    }
    if (fa > 0.0) return {a, true};
    if (fb < 0.0) return {b, true};

    // safeguarded Newton-bisection on [a, b]
    double t = 0.5 * (a + b);
    double ft = f(t);
    for (int it = 0; it < 200; ++it) {
        if (ft == 0.0 || (b - a) < kRootTol) break;
        double d = deriv(t);
        double tn = d > 0.0 ? t - ft / d : a - 1.0;  // forces bisection when flat
        if (!(tn > a && tn < b)) tn = 0.5 * (a + b);
        if (ft > 0.0) b = t;
        else a = t;
        if (!(tn > a && tn < b)) tn = 0.5 * (a + b);
        if (std::abs(tn - t) < kRootTol && (b - a) < 16.0 * kRootTol) {
            t = tn;
            break;
        }
        t = tn;
        ft = f(t);
    }
    return {t, false};
}

}  // namespace

Eigen::VectorXd inverse(const MonotoneTriangularMap& map, const Eigen::VectorXd& q, long* clamped) {
    const int n = map.dimension();
    if (q.size() != n) throw std::invalid_argument("inverse: dimension mismatch");
    Eigen::VectorXd y(n);
    std::vector<double> z(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        const auto& dom = map.monotone_domain[static_cast<std::size_t>(r)];
        std::vector<double> zr(z.begin(), z.begin() + r + 1);
        ComponentRoot root = solve_component(map.components[static_cast<std::size_t>(r)], zr, q[r],
                                             dom[0], dom[1]);
        z[static_cast<std::size_t>(r)] = root.t;
        if (root.clamped && clamped) ++(*clamped);
        y[map.ordering[static_cast<std::size_t>(r)]] = root.t * map.stds[r] + map.means[r];
    }
    return y;
}

std::vector<double> hermite_to_monomial_1d(const Eigen::VectorXd& hermite_coeffs) {
    const int n = static_cast<int>(hermite_coeffs.size());
    // rows: monomial coefficient vectors of He_k
    std::vector<std::vector<double>> he(static_cast<std::size_t>(std::max(n, 2)));
    he[0] = {1.0};
    he[1] = {0.0, 1.0};
    for (int k = 1; k + 1 < n; ++k) {
        std::vector<double> next(static_cast<std::size_t>(k + 2), 0.0);
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k)].size(); ++j) {
            next[j + 1] += he[static_cast<std::size_t>(k)][j];
        }
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k - 1)].size(); ++j) {
            next[j] -= k * he[static_cast<std::size_t>(k - 1)][j];
        }
        he[static_cast<std::size_t>(k + 1)] = std::move(next);
    }
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k)].size(); ++j) {
            out[j] += hermite_coeffs[k] * he[static_cast<std::size_t>(k)][j];
        }
    }
    return out;
}

std::vector<double> monomial_to_hermite_1d(const std::vector<double>& monomial_coeffs) {
    const int n = static_cast<int>(monomial_coeffs.size());
    // z^k in the Hermite basis via back-substitution against He_k = z^k + lower
    std::vector<double> work = monomial_coeffs;
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int k = n - 1; k >= 0; --k) {
        double c = work[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k)] = c;
        if (c == 0.0) continue;
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(k + 1);
        unit[k] = 1.0;
        auto he_mono = hermite_to_monomial_1d(unit);
        for (int j = 0; j <= k; ++j) work[static_cast<std::size_t>(j)] -= c * he_mono[static_cast<std::size_t>(j)];
    }
    return out;
}

std::vector<double> raw_monomial_coefficients(const MonotoneTriangularMap& map, int row) {
    if (row != 0) {
        throw std::invalid_argument("raw_monomial_coefficients: only the first (1-D) row is supported");
    }
    const auto& comp = map.components[0];
    Eigen::VectorXd hc = Eigen::VectorXd::Zero(comp.max_degree() + 1);
    for (std::size_t a = 0; a < comp.multi_indices.size(); ++a) {
        hc[comp.multi_indices[a][0]] += comp.coefficients[static_cast<long>(a)];
    }
    auto in_z = hermite_to_monomial_1d(hc);
    // substitute z = (y - mu)/sigma
    const double c1 = 1.0 / map.stds[0];
    const double c0 = -map.means[0] / map.stds[0];
    std::vector<double> out(in_z.size(), 0.0);
    std::vector<double> zpow = {1.0};  // (c0 + c1 y)^j, ascending in y
    for (std::size_t j = 0; j < in_z.size(); ++j) {
        for (std::size_t p = 0; p < zpow.size(); ++p) out[p] += in_z[j] * zpow[p];
        std::vector<double> next(zpow.size() + 1, 0.0);
        for (std::size_t p = 0; p < zpow.size(); ++p) {
            next[p] += zpow[p] * c0;
            next[p + 1] += zpow[p] * c1;
        }
        zpow = std::move(next);
    }
    return out;
}

MonotoneTriangularMap map_from_monomial_1d(const std::vector<double>& monomial_coeffs) {
    if (monomial_coeffs.size() < 2) {
        throw std::invalid_argument("map_from_monomial_1d: need degree >= 1");
    }
    MonotoneTriangularMap map;
    map.degree = static_cast<int>(monomial_coeffs.size()) - 1;
    map.ordering = {0};
    map.means = Eigen::VectorXd::Zero(1);
    map.stds = Eigen::VectorXd::Ones(1);
    PolynomialExpansion comp;
    comp.dim = 1;
    auto hc = monomial_to_hermite_1d(monomial_coeffs);
    comp.multi_indices.clear();
    comp.coefficients.resize(static_cast<long>(hc.size()));
    for (std::size_t k = 0; k < hc.size(); ++k) {
        comp.multi_indices.push_back({static_cast<int>(k)});
        comp.coefficients[static_cast<long>(k)] = hc[k];
    }
    map.components.push_back(comp);
    // monotone domain from a direct scan around the origin
    bool warning = false;
    map.monotone_domain.push_back(
        scan_monotone_domain(comp, Eigen::VectorXd(), -8.0, 8.0, 0.0, &warning));
    ComponentFit info;
    info.monotone_warning = warning;
    map.fit_info.push_back(info);
    map.validate();
    return map;
}

}  // namespace tsde
