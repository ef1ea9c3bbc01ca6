#include "pqbbh/bbh_univariate.hpp"

#include <cmath>
#include <string>

#include "pqbbh/detail/kahan.hpp"

namespace pqbbh {

namespace {

void require_point(double x, const char* who) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(who) + ": x must be finite and >= 0");
}

double apply_at_node(const ScalarFunction& f, double u, int k) {
    if (!std::isfinite(u))
        throw EvaluationError("non-finite node u_{k=" + std::to_string(k) + "}");
    const double v = f(u);
    if (!std::isfinite(v))
        throw EvaluationError("f returned non-finite value at node k=" + std::to_string(k) +
                              ", u=" + std::to_string(u));
    return v;
}

}  // namespace

double node(int n, int k, const PqParams& params) {
    if (k < 0 || k > n) throw std::domain_error("node: requires 0 <= k <= n");
    if (k == 0) return 0.0;
    const double lg = (n - k + 1) * std::log(params.p()) + pq_integer_log(k, params) -
                      pq_integer_log(n - k + 1, params) - k * std::log(params.q());
    return std::exp(lg);
}

NodeWeightTable weight_table(int n, const PqParams& params, double x) {
    require_point(x, "weight_table");
    if (n < 0) throw std::domain_error("weight_table: n must be >= 0");
    NodeWeightTable table{n, params, x, {}, {}};
    table.nodes.resize(static_cast<size_t>(n) + 1);
    table.weights.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        table.nodes[static_cast<size_t>(k)] = node(n, k, params);
    if (x == 0.0) {
        table.weights[0] = 1.0;  // x^k kills every k >= 1
        return table;
    }
    const double lx = std::log(x);
    const double lnorm = euler_product_log(n, params, x);
    for (int k = 0; k <= n; ++k) {
        const double lw = euler_weight_log(n, k, params).log_value + k * lx - lnorm;
        table.weights[static_cast<size_t>(k)] = std::exp(lw);
    }
    return table;
}

double pq_apply(const ScalarFunction& f, const NodeWeightTable& table) {
    detail::KahanAccumulator acc;
    for (int k = 0; k <= table.n; ++k) {
        const size_t i = static_cast<size_t>(k);
        const double w = table.weights[i];
        if (w == 0.0) continue;
        acc.add(apply_at_node(f, table.nodes[i], k) * w);
    }
    return acc.sum();
}

double pq_apply(const ScalarFunction& f, int n, const PqParams& params, double x) {
    return pq_apply(f, weight_table(n, params, x));
}

double q_apply(const ScalarFunction& f, int n, double q, double x) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q_apply: requires 0 < q < 1");
    if (n < 0) throw std::domain_error("q_apply: n must be >= 0");
    require_point(x, "q_apply");

    // q-integers [j]_q = 1 + q + ... + q^{j-1}, tabulated once.
    std::vector<double> qint(static_cast<size_t>(n) + 2, 0.0);
    double qpow = 1.0;
    for (int j = 1; j <= n + 1; ++j) {
        qint[static_cast<size_t>(j)] = qint[static_cast<size_t>(j - 1)] + qpow;
        qpow *= q;
    }

    double norm = 1.0;  // prod_{s=0}^{n-1} (1 + q^s x)
    qpow = 1.0;
    for (int s = 0; s < n; ++s) {
        norm *= 1.0 + qpow * x;
        qpow *= q;
    }

    detail::KahanAccumulator acc;
    double binom = 1.0;      // [n choose k]_q by the ratio recurrence
    double qtri = 1.0;       // q^{k(k-1)/2}
    double xpow = 1.0;       // x^k
    double qk = 1.0;         // q^k
    for (int k = 0; k <= n; ++k) {
        const double u =
            (k == 0) ? 0.0
                     : qint[static_cast<size_t>(k)] /
                           (qint[static_cast<size_t>(n - k + 1)] * qk);
        acc.add(apply_at_node(f, u, k) * qtri * binom * xpow);
        if (k < n) {
            binom *= qint[static_cast<size_t>(n - k)] / qint[static_cast<size_t>(k + 1)];
            qtri *= qk;
            qk *= q;
            xpow *= x;
        }
    }
    return acc.sum() / norm;
}

double classical_apply(const ScalarFunction& f, int n, double x) {
    if (n < 0) throw std::domain_error("classical_apply: n must be >= 0");
    require_point(x, "classical_apply");
    // w_k = C(n,k) x^k / (1+x)^n, built by the ratio recurrence from
    // w_0 = (1+x)^{-n}.
    double w = std::exp(-n * std::log1p(x));
    detail::KahanAccumulator acc;
    for (int k = 0; k <= n; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(n - k + 1);
        acc.add(apply_at_node(f, u, k) * w);
        if (k < n) w *= x * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    return acc.sum();
}

}  // namespace pqbbh
