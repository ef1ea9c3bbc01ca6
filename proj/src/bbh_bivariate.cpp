#include "pqbbh/bbh_bivariate.hpp"

#include <cmath>
#include <string>

#include "pqbbh/detail/kahan.hpp"

namespace pqbbh {

namespace {

double ratio_t(double x) { return x / (1.0 + x); }

double eval_lattice(const ScalarFunction2& f, double u, double v, int k1, int k2) {
    if (!std::isfinite(u) || !std::isfinite(v))
        throw EvaluationError("non-finite node at lattice point (k1=" + std::to_string(k1) +
                              ", k2=" + std::to_string(k2) + ")");
    const double val = f(u, v);
    if (!std::isfinite(val))
        throw EvaluationError("f returned non-finite value at lattice point (k1=" +
                              std::to_string(k1) + ", k2=" + std::to_string(k2) + ")");
    return val;
}

}  // namespace

OperatorSpec::OperatorSpec(int n1_, int n2_, PqParams p1, PqParams p2)
    : n1(n1_), n2(n2_), params1(p1), params2(p2) {
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("OperatorSpec: degrees must be >= 1");
}

GeneralizedSpec::GeneralizedSpec(OperatorSpec base_, double g1, double g2, double b1, double b2)
    : base(base_), gamma1(g1), gamma2(g2), beta1(b1), beta2(b2) {
    if (!(beta1 >= 0.0) || !(beta2 >= 0.0))
        throw std::invalid_argument("GeneralizedSpec: requires beta >= 0");
    if (!std::isfinite(gamma1) || !std::isfinite(gamma2))
        throw std::invalid_argument("GeneralizedSpec: gamma must be finite");
}

BivariateOperator::BivariateOperator(const OperatorSpec& spec) : spec_(spec) {
    nodes1_.resize(static_cast<size_t>(spec.n1) + 1);
    nodes2_.resize(static_cast<size_t>(spec.n2) + 1);
    for (int k = 0; k <= spec.n1; ++k)
        nodes1_[static_cast<size_t>(k)] = node(spec.n1, k, spec.params1);
    for (int k = 0; k <= spec.n2; ++k)
        nodes2_[static_cast<size_t>(k)] = node(spec.n2, k, spec.params2);
}

double BivariateOperator::apply(const ScalarFunction2& f, double x, double y) const {
    const NodeWeightTable t1 = weight_table(spec_.n1, spec_.params1, x);
    const NodeWeightTable t2 = weight_table(spec_.n2, spec_.params2, y);
    detail::KahanAccumulator acc;
    for (int k1 = 0; k1 <= spec_.n1; ++k1) {
        const double w1 = t1.weights[static_cast<size_t>(k1)];
        if (w1 == 0.0) continue;
        for (int k2 = 0; k2 <= spec_.n2; ++k2) {
            const double w2 = t2.weights[static_cast<size_t>(k2)];
            if (w2 == 0.0) continue;
            acc.add(eval_lattice(f, nodes1_[static_cast<size_t>(k1)],
                                 nodes2_[static_cast<size_t>(k2)], k1, k2) *
                    w1 * w2);
        }
    }
    return acc.sum();
}

double apply2(const ScalarFunction2& f, const OperatorSpec& spec, double x, double y) {
    return BivariateOperator(spec).apply(f, x, y);
}

double apply2_composed(const ScalarFunction2& f, const OperatorSpec& spec,
                       double x, double y, ComposeOrder order) {
    if (order == ComposeOrder::x_then_y) {
        const NodeWeightTable inner = weight_table(spec.n2, spec.params2, y);
        return pq_apply([&](double u) { return pq_apply([&](double v) { return f(u, v); }, inner); },
                        spec.n1, spec.params1, x);
    }
    const NodeWeightTable inner = weight_table(spec.n1, spec.params1, x);
    return pq_apply([&](double v) { return pq_apply([&](double u) { return f(u, v); }, inner); },
                    spec.n2, spec.params2, y);
}

namespace {

// One-axis closed forms of the first three moments.
double axis_moment_closed(int i, int n, const PqParams& params, double x) {
    switch (i) {
        case 0:
            return 1.0;
        case 1:
            return params.p() * pq_integer(n, params) / pq_integer(n + 1, params) * ratio_t(x);
        case 2: {
            // Leading coefficient is (pq)^2 [n][n-1]/[n+1]^2; the exact
            // oracle rejects the p q^2 variant for p < 1.
            const double nn = pq_integer(n, params);
            const double nn1 = pq_integer(n + 1, params);
            const double nm1 = pq_integer(n - 1, params);
            const double pq = params.p() * params.q();
            const double lead = pq * pq * nn * nm1 / (nn1 * nn1);
            const double tail = std::pow(params.p(), n + 1) * nn / (nn1 * nn1);
            return lead * x * x / ((1.0 + x) * (params.p() + params.q() * x)) +
                   tail * ratio_t(x);
        }
        default:
            throw std::domain_error("axis_moment_closed: unsupported order");
    }
}

}  // namespace

double moment_closed(const OperatorSpec& spec, int i, int j, double x, double y) {
    const bool supported = (i == 0 && j == 0) || (i == 1 && j == 0) || (i == 0 && j == 1) ||
                           (i == 2 && j == 0) || (i == 0 && j == 2);
    if (!supported)
        throw std::domain_error("moment_closed: (i,j) must be one of (0,0),(1,0),(0,1),(2,0),(0,2)");
    if (!(x >= 0.0) || !(y >= 0.0))
        throw std::domain_error("moment_closed: requires x, y >= 0");
    if (i > 0) return axis_moment_closed(i, spec.n1, spec.params1, x);
    if (j > 0) return axis_moment_closed(j, spec.n2, spec.params2, y);
    return 1.0;
}

double moment_direct(const OperatorSpec& spec, int i, int j, double x, double y) {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::domain_error("moment_direct: requires i, j in {0,1,2}");
    return apply2([i, j](double u, double v) {
        return std::pow(ratio_t(u), i) * std::pow(ratio_t(v), j);
    }, spec, x, y);
}

namespace {

// Generalized nodes (p^{n+1-k}[k] + gamma) / (q^k [n-k+1] + beta).
std::vector<double> generalized_nodes(int n, const PqParams& params, double gamma, double beta) {
    std::vector<double> nodes(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double num = std::pow(params.p(), n + 1 - k) * pq_integer(k, params) + gamma;
        const double den = std::pow(params.q(), k) * pq_integer(n - k + 1, params) + beta;
        if (den == 0.0)
            throw std::domain_error("generalized_apply2: degenerate b rule, b_{n,k} = 0 at k=" +
                                    std::to_string(k));
        nodes[static_cast<size_t>(k)] = num / den;
    }
    return nodes;
}

}  // namespace

double generalized_apply2(const ScalarFunction2& f, const GeneralizedSpec& gspec,
                          double x, double y) {
    const OperatorSpec& spec = gspec.base;
    const std::vector<double> nodes1 =
        generalized_nodes(spec.n1, spec.params1, gspec.gamma1, gspec.beta1);
    const std::vector<double> nodes2 =
        generalized_nodes(spec.n2, spec.params2, gspec.gamma2, gspec.beta2);
    const NodeWeightTable t1 = weight_table(spec.n1, spec.params1, x);
    const NodeWeightTable t2 = weight_table(spec.n2, spec.params2, y);
    detail::KahanAccumulator acc;
    for (int k1 = 0; k1 <= spec.n1; ++k1) {
        const double w1 = t1.weights[static_cast<size_t>(k1)];
        if (w1 == 0.0) continue;
        for (int k2 = 0; k2 <= spec.n2; ++k2) {
            const double w2 = t2.weights[static_cast<size_t>(k2)];
            if (w2 == 0.0) continue;
            acc.add(eval_lattice(f, nodes1[static_cast<size_t>(k1)],
                                 nodes2[static_cast<size_t>(k2)], k1, k2) *
                    w1 * w2);
        }
    }
    return acc.sum();
}

CnReport c_n_consistency(double beta, const std::function<PqParams(int)>& params_at,
                         const std::vector<int>& n_list) {
    if (!(beta >= 0.0)) throw std::domain_error("c_n_consistency: requires beta >= 0");
    CnReport report;
    double prev_ratio = -1.0;
    for (int n : n_list) {
        const PqParams params = params_at(n);
        const double c_n = pq_integer(n + 1, params) + beta;
        double max_residual = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double lhs = std::pow(params.p(), n - k + 1) * pq_integer(k, params) +
                               std::pow(params.q(), k) * pq_integer(n - k + 1, params) + beta;
            max_residual = std::max(max_residual, std::abs(lhs - c_n));
        }
        const double ratio = pq_integer(n, params) / c_n;
        report.rows.push_back(CnRow{n, params.p(), params.q(), c_n, max_residual, ratio});
        report.max_relative_residual =
            std::max(report.max_relative_residual, max_residual / c_n);
        if (prev_ratio >= 0.0 && !(ratio > prev_ratio)) report.ratios_increasing = false;
        prev_ratio = ratio;
    }
    return report;
}

}  // namespace pqbbh
