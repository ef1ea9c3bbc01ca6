#include "pqbbh/pq_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pqbbh/detail/kahan.hpp"

namespace pqbbh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(q/p) computed without losing absolute precision when q is close
// to p: (p - q) is exact in that regime (Sterbenz), so log1p keeps
// full accuracy of the small argument.
double log_ratio(const PqParams& params) {
    return std::log1p(-(params.p() - params.q()) / params.p());
}

}  // namespace

PqParams::PqParams(double p, double q) : p_(p), q_(q) {
    if (!std::isfinite(p) || !std::isfinite(q))
        throw std::invalid_argument("PqParams: p and q must be finite");
    if (!(p <= 1.0))
        throw std::invalid_argument("PqParams: requires p <= 1");
    if (!(q > 0.0))
        throw std::invalid_argument("PqParams: requires q > 0");
    if (!(q < p))
        throw std::invalid_argument("PqParams: requires q < p (strictly)");
}

double LogWeight::value() const { return std::exp(log_value); }

double pq_integer(int n, const PqParams& params) {
    if (n < 0) throw std::domain_error("pq_integer: n must be >= 0");
    if (n == 0) return 0.0;
    if (n == 1) return 1.0;
    // [n] = p^{n-1} (1 - r^n)/(1 - r) with r = q/p in (0,1).  The two
    // expm1/log1p factors avoid cancellation both for r near 1 and for
    // r^n near 0.
    const double lr = log_ratio(params);
    const double one_minus_rn = -std::expm1(static_cast<double>(n) * lr);
    const double one_minus_r = (params.p() - params.q()) / params.p();
    return std::pow(params.p(), n - 1) * one_minus_rn / one_minus_r;
}

double pq_integer_log(int n, const PqParams& params) {
    if (n < 0) throw std::domain_error("pq_integer_log: n must be >= 0");
    if (n == 0) return kNegInf;
    if (n == 1) return 0.0;
    const double lr = log_ratio(params);
    const double one_minus_rn = -std::expm1(static_cast<double>(n) * lr);
    const double one_minus_r = (params.p() - params.q()) / params.p();
    return (n - 1) * std::log(params.p()) + std::log(one_minus_rn) - std::log(one_minus_r);
}

double pq_factorial(int n, const PqParams& params) {
    if (n < 0) throw std::domain_error("pq_factorial: n must be >= 0");
    double acc = 1.0;
    for (int j = 1; j <= n; ++j) {
        acc *= pq_integer(j, params);
        if (!std::isfinite(acc))
            throw std::overflow_error("pq_factorial: overflow at n = " + std::to_string(j) +
                                      "; use pq_factorial_log");
    }
    return acc;
}

double pq_factorial_log(int n, const PqParams& params) {
    if (n < 0) throw std::domain_error("pq_factorial_log: n must be >= 0");
    detail::KahanAccumulator acc;
    for (int j = 2; j <= n; ++j) acc.add(pq_integer_log(j, params));
    return acc.sum();
}

double pq_binomial_log(int n, int k, const PqParams& params) {
    if (k < 0 || k > n)
        throw std::domain_error("pq_binomial_log: requires 0 <= k <= n");
    const int kk = std::min(k, n - k);
    detail::KahanAccumulator acc;
    for (int j = 1; j <= kk; ++j)
        acc.add(pq_integer_log(n - kk + j, params) - pq_integer_log(j, params));
    return acc.sum();
}

double pq_binomial(int n, int k, const PqParams& params) {
    return std::exp(pq_binomial_log(n, k, params));
}

LogWeight euler_weight_log(int n, int k, const PqParams& params) {
    if (k < 0 || k > n)
        throw std::domain_error("euler_weight_log: requires 0 <= k <= n");
    const double ep = 0.5 * static_cast<double>(n - k) * static_cast<double>(n - k - 1);
    const double eq = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    return LogWeight{ep * std::log(params.p()) + eq * std::log(params.q()) +
                     pq_binomial_log(n, k, params)};
}

double euler_product(int n, const PqParams& params, double x) {
    if (n < 0) throw std::domain_error("euler_product: n must be >= 0");
    if (x < 0.0) throw std::domain_error("euler_product: x must be >= 0");
    double acc = 1.0, pp = 1.0, qp = 1.0;
    for (int s = 0; s < n; ++s) {
        acc *= pp + qp * x;
        pp *= params.p();
        qp *= params.q();
    }
    return acc;
}

double euler_product_log(int n, const PqParams& params, double x) {
    if (n < 0) throw std::domain_error("euler_product_log: n must be >= 0");
    if (x < 0.0) throw std::domain_error("euler_product_log: x must be >= 0");
    // log(p^s + q^s x) = s log p + log1p(r^s x); never underflows.
    const double lp = std::log(params.p());
    const double lr = log_ratio(params);
    detail::KahanAccumulator acc;
    for (int s = 0; s < n; ++s)
        acc.add(s * lp + std::log1p(std::exp(s * lr) * x));
    return acc.sum();
}

namespace {

// Log-magnitudes of the terms of the Euler sum at x > 0.
std::vector<double> euler_term_logs(int n, const PqParams& params, double x) {
    const double lx = std::log(x);
    std::vector<double> logs(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k)
        logs[static_cast<size_t>(k)] = euler_weight_log(n, k, params).log_value + k * lx;
    std::sort(logs.begin(), logs.end(), std::greater<double>());
    return logs;
}

}  // namespace

double euler_sum(int n, const PqParams& params, double x) {
    if (n < 0) throw std::domain_error("euler_sum: n must be >= 0");
    if (x < 0.0) throw std::domain_error("euler_sum: x must be >= 0");
    if (n == 0) return 1.0;
    if (x == 0.0) return euler_weight_log(n, 0, params).value();
    const std::vector<double> logs = euler_term_logs(n, params, x);
    detail::KahanAccumulator acc;
    for (double t : logs) acc.add(std::exp(t));
    return acc.sum();
}

double euler_sum_log(int n, const PqParams& params, double x) {
    if (n < 0) throw std::domain_error("euler_sum_log: n must be >= 0");
    if (x < 0.0) throw std::domain_error("euler_sum_log: x must be >= 0");
    if (n == 0) return 0.0;
    if (x == 0.0) return euler_weight_log(n, 0, params).log_value;
    const std::vector<double> logs = euler_term_logs(n, params, x);
    const double top = logs.front();
    detail::KahanAccumulator acc;
    for (double t : logs) acc.add(std::exp(t - top));
    return top + std::log(acc.sum());
}

double split_identity_residual(int n, int k, const PqParams& params) {
    if (k < 0 || k > n)
        throw std::domain_error("split_identity_residual: requires 0 <= k <= n");
    const double lhs = std::pow(params.q(), k) * pq_integer(n - k + 1, params);
    const double rhs = pq_integer(n + 1, params) -
                       std::pow(params.p(), n - k + 1) * pq_integer(k, params);
    return lhs - rhs;
}

PowerProductForms pq_power_product_forms(int n, const PqParams& params,
                                         double a, double b, double x, double y) {
    if (n < 0) throw std::domain_error("pq_power_product_forms: n must be >= 0");
    double product = 1.0, pp = 1.0, qp = 1.0;
    for (int s = 0; s < n; ++s) {
        product *= pp * a * x + qp * b * y;
        pp *= params.p();
        qp *= params.q();
    }
    // Signed expansion: terms may cancel, so this stays in linear domain.
    detail::KahanAccumulator acc;
    for (int k = 0; k <= n; ++k) {
        const double w = euler_weight_log(n, k, params).value();
        acc.add(w * std::pow(a * x, n - k) * std::pow(b * y, k));
    }
    return PowerProductForms{product, acc.sum()};
}

double pq_power_product(int n, const PqParams& params,
                        double a, double b, double x, double y) {
    return pq_power_product_forms(n, params, a, b, x, y).product_form;
}

}  // namespace pqbbh
