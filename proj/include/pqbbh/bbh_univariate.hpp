#ifndef PQBBH_BBH_UNIVARIATE_HPP
#define PQBBH_BBH_UNIVARIATE_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "pqbbh/pq_core.hpp"

namespace pqbbh {

using ScalarFunction = std::function<double(double)>;
using ScalarFunction2 = std::function<double(double, double)>;

/// Thrown when a function under an operator returns a non-finite value
/// (or a node itself is not representable); the message names the node.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nodes and normalized weights of one univariate (p,q)-BBH operator at
/// a fixed evaluation point x.
///
/// Invariants: weights are nonnegative and sum to 1 (to rounding),
/// nodes[0] == 0, and nodes[k] = p^{n-k+1}[k] / ([n-k+1] q^k).
struct NodeWeightTable {
    int n;
    PqParams params;
    double x;
    std::vector<double> nodes;    // size n+1
    std::vector<double> weights;  // size n+1
};

/// Node u_{n,k} = p^{n-k+1} [k]_{p,q} / ([n-k+1]_{p,q} q^k); 0 at k = 0.
/// Evaluated in log domain: the q^k denominator makes nodes near k = n
/// genuinely huge.
double node(int n, int k, const PqParams& params);

/// Weight table at x >= 0.  Weights are computed in log domain and
/// normalized by explicit division by the Euler product.
NodeWeightTable weight_table(int n, const PqParams& params, double x);

/// (p,q)-BBH operator: sum_k f(u_{n,k}) w_k(x).
double pq_apply(const ScalarFunction& f, int n, const PqParams& params, double x);

/// Same, reusing a prepared weight table.
double pq_apply(const ScalarFunction& f, const NodeWeightTable& table);

/// q-BBH operator (independent code path, not a p = 1 call into
/// pq_apply): nodes [k]_q/([n-k+1]_q q^k), weights
/// q^{k(k-1)/2} [n choose k]_q x^k / prod_s (1 + q^s x).
double q_apply(const ScalarFunction& f, int n, double q, double x);

/// Classical BBH operator
///   (1+x)^{-n} sum_k f(k/(n-k+1)) C(n,k) x^k.
/// Separate code path; not a limit of the (p,q) form.
double classical_apply(const ScalarFunction& f, int n, double x);

}  // namespace pqbbh

#endif
