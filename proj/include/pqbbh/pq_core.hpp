#ifndef PQBBH_PQ_CORE_HPP
#define PQBBH_PQ_CORE_HPP

#include <stdexcept>
#include <string>

namespace pqbbh {

/// Parameter pair (p, q) with 0 < q < p <= 1.
///
/// Every (p,q)-quantity in this library is parameterized by a PqParams.
/// The constraint is strict: q == p is rejected, because the defining
/// fraction of the (p,q)-integers divides by p - q.  The classical
/// operator (p = q = 1) has its own code path in bbh_univariate.
class PqParams {
public:
    PqParams(double p, double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }

    /// q/p, in (0, 1).
    double ratio() const noexcept { return q_ / p_; }

private:
    double p_;
    double q_;
};

/// Natural log of a strictly positive weight.  The represented weight is
/// exp(log_value); the log stays finite even where the weight itself
/// underflows double precision (large n, small p or q).
struct LogWeight {
    double log_value;

    double value() const;
};

/// [n]_{p,q} = (p^n - q^n)/(p - q).  [0] = 0, [1] = 1.
double pq_integer(int n, const PqParams& params);

/// log([n]_{p,q}); -infinity for n = 0.
double pq_integer_log(int n, const PqParams& params);

/// [n]_{p,q}! = [n][n-1]...[1], 1 for n = 0.
/// Throws std::overflow_error if the product leaves double range.
double pq_factorial(int n, const PqParams& params);

/// log([n]_{p,q}!), finite for all n >= 0.
double pq_factorial_log(int n, const PqParams& params);

/// Gaussian-style (p,q)-binomial coefficient [nchoose k]_{p,q}.
/// Computed through the multiplicative recurrence over (p,q)-integer
/// ratios in log domain, not through three factorials.
double pq_binomial(int n, int k, const PqParams& params);

/// log of the (p,q)-binomial coefficient.  Throws std::domain_error for
/// k < 0 or k > n.
double pq_binomial_log(int n, int k, const PqParams& params);

/// log of the Euler weight p^{(n-k)(n-k-1)/2} q^{k(k-1)/2} [n choose k]_{p,q}.
LogWeight euler_weight_log(int n, int k, const PqParams& params);

/// prod_{s=0}^{n-1} (p^s + q^s x), the normalizer of the (p,q)-BBH
/// operator; 1 for n = 0.
double euler_product(int n, const PqParams& params, double x);

/// log of euler_product, finite for every n >= 0 and x >= 0.
double euler_product_log(int n, const PqParams& params, double x);

/// sum_k exp(euler_weight_log(n,k)) x^k, accumulated from the largest
/// term downward with compensated summation.  Equals euler_product by
/// the (p,q)-Euler identity; that equality is the module's flagship
/// property and is asserted in the test suite, never assumed here.
double euler_sum(int n, const PqParams& params, double x);

/// log of euler_sum via log-sum-exp; robust where the sum underflows.
double euler_sum_log(int n, const PqParams& params, double x);

/// Floating-point residual of the splitting identity
///   q^k [n-k+1] = [n+1] - p^{n-k+1} [k],
/// which partitions [n+1] into the node numerator and denominator of the
/// (p,q)-BBH operator.  Analytically zero.
double split_identity_residual(int n, int k, const PqParams& params);

/// Both evaluations of the (p,q)-binomial expansion (ax + by)^n_{p,q}.
struct PowerProductForms {
    double product_form;  ///< prod_{s=0}^{n-1} (p^s a x + q^s b y)
    double sum_form;      ///< weighted power sum over k
};

PowerProductForms pq_power_product_forms(int n, const PqParams& params,
                                         double a, double b, double x, double y);

/// Product-form value of (ax + by)^n_{p,q}.
double pq_power_product(int n, const PqParams& params,
                        double a, double b, double x, double y);

}  // namespace pqbbh

#endif
