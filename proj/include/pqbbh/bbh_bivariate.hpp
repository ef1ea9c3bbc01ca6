#ifndef PQBBH_BBH_BIVARIATE_HPP
#define PQBBH_BBH_BIVARIATE_HPP

#include <functional>
#include <vector>

#include "pqbbh/bbh_univariate.hpp"
#include "pqbbh/pq_core.hpp"

namespace pqbbh {

/// One bivariate (p,q)-BBH operator instance: per-axis degree and
/// parameters.
struct OperatorSpec {
    int n1;
    int n2;
    PqParams params1;
    PqParams params2;

    OperatorSpec(int n1_, int n2_, PqParams p1, PqParams p2);
};

/// The generalized family: node shifts gamma per axis and the default
/// b-rule b_{n,k} = q^k [n-k+1] + beta, for which
/// p^{n-k+1}[k] + b_{n,k} = c_n = [n+1] + beta holds for every k.
struct GeneralizedSpec {
    OperatorSpec base;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;

    GeneralizedSpec(OperatorSpec base_, double g1, double g2, double b1, double b2);
};

/// Materialized node lattice for one OperatorSpec.  Nodes depend only on
/// (n, params) per axis, so they are computed once; weights depend on the
/// evaluation point and are built per call.
class BivariateOperator {
public:
    explicit BivariateOperator(const OperatorSpec& spec);

    const OperatorSpec& spec() const { return spec_; }
    const std::vector<double>& nodes1() const { return nodes1_; }
    const std::vector<double>& nodes2() const { return nodes2_; }

    /// The double sum: sum_{k1,k2} f(u_{k1}, v_{k2}) w1_{k1}(x) w2_{k2}(y).
    double apply(const ScalarFunction2& f, double x, double y) const;

private:
    OperatorSpec spec_;
    std::vector<double> nodes1_;
    std::vector<double> nodes2_;
};

/// One-shot evaluation of the bivariate operator.
double apply2(const ScalarFunction2& f, const OperatorSpec& spec, double x, double y);

enum class ComposeOrder {
    x_then_y,  ///< A_{n1} in x applied to (u -> B_{n2}(f(u,.); y))
    y_then_x,  ///< B_{n2} in y applied to (v -> A_{n1}(f(.,v); x))
};

/// Bivariate value obtained by composing the two univariate partial
/// operators; equals apply2 in either order (tensor decomposition).
double apply2_composed(const ScalarFunction2& f, const OperatorSpec& spec,
                       double x, double y, ComposeOrder order);

/// Closed-form moments of the test functions e_ij = (u/(1+u))^i (v/(1+v))^j
/// for (i,j) in {(0,0),(1,0),(0,1),(2,0),(0,2)}:
///   (0,0): 1
///   (1,0): p1 [n1]/[n1+1] . x/(1+x)
///   (0,1): p2 [n2]/[n2+1] . y/(1+y)
///   (2,0): p1 q1^2 [n1][n1-1]/[n1+1]^2 . x^2/((1+x)(p1+q1 x))
///          + p1^{n1+1} [n1]/[n1+1]^2 . x/(1+x)
///   (0,2): the y-axis mirror of (2,0)
double moment_closed(const OperatorSpec& spec, int i, int j, double x, double y);

/// Brute-force moment: apply2 with f = e_ij, i,j in {0,1,2}.  The oracle
/// for moment_closed, and the only route for mixed moments such as e11.
double moment_direct(const OperatorSpec& spec, int i, int j, double x, double y);

/// Generalized operator: same weights as apply2, nodes
/// (p^{n+1-k}[k] + gamma) / (q^k [n-k+1] + beta) per axis.
double generalized_apply2(const ScalarFunction2& f, const GeneralizedSpec& gspec,
                          double x, double y);

struct CnRow {
    int n;
    double p;
    double q;
    double c_n;           ///< [n+1] + beta
    double max_residual;  ///< max_k |p^{n-k+1}[k] + b_{n,k} - c_n|
    double ratio;         ///< [n]/c_n
};

struct CnReport {
    std::vector<CnRow> rows;
    double max_relative_residual = 0.0;  ///< max of max_residual / c_n
    bool ratios_increasing = true;       ///< [n]/c_n monotone up the n_list
};

/// Checks the b-rule identity p^{n-k+1}[k] + b_{n,k} = c_n for every
/// k <= n and reports the [n]/c_n sequence; params per n come from the
/// given rule (typically a convergence schedule).
CnReport c_n_consistency(double beta, const std::function<PqParams(int)>& params_at,
                         const std::vector<int>& n_list);

}  // namespace pqbbh

#endif
