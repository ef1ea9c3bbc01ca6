#ifndef PQBBH_ANALYSIS_HPP
#define PQBBH_ANALYSIS_HPP

#include <functional>
#include <string>
#include <vector>

#include "pqbbh/bbh_bivariate.hpp"

namespace pqbbh {

/// x -> x/(1+x), the transform under which the BBH test functions and
/// moduli of continuity are measured.
double ratio_transform(double x);

/// Inverse transform t -> t/(1-t), t in [0,1).
double inverse_ratio_transform(double t);

/// Test function e_ij(u,v) = (u/(1+u))^i (v/(1+v))^j, i,j in {0,1,2}.
double test_function(int i, int j, double u, double v);

/// A rule n -> (p_n, q_n) with p_n, q_n -> 1, validated at construction:
/// valid parameters for every n >= min_n, strictly increasing sequences
/// within 1e-3 of 1 by n = 1000, and [n+1]_{p_n,q_n} unbounded (checked
/// as strictly increasing over n in {8,16,...,1024} and > 100 at 1024).
class ParamSchedule {
public:
    ParamSchedule(std::string id, int min_n, std::function<PqParams(int)> rule);

    const std::string& id() const { return id_; }
    int min_n() const { return min_n_; }
    PqParams at(int n) const;

    /// p_n = 1 - 1/(2(n+1)), q_n = 1 - 1/(n+1).
    static ParamSchedule default_schedule();

    /// p_n = 1 - n^{-2}, q_n = 1 - 2 n^{-2}; valid from n = 2.
    static ParamSchedule inverse_square();

    /// Lookup by id: "default" or "invsq".
    static ParamSchedule by_id(const std::string& id);

private:
    std::string id_;
    int min_n_;
    std::function<PqParams(int)> rule_;
};

/// Per-n parameters of the default schedule.
PqParams default_schedule(int n);

/// Finite sampling of [0, inf)^2 in transformed coordinates: per axis,
/// t = x/(1+x) uniform on [0, t_max], t_max < 1.
struct Grid2D {
    std::vector<double> t1, t2;  // strictly increasing, within [0, 1)
    std::vector<double> x1, x2;  // untransformed coordinates

    static Grid2D uniform(int points_per_axis = 33, double t_max = 0.96);
    static Grid2D uniform(int nx, int ny, double t_max);
};

/// A corpus entry: a bounded continuous function together with an
/// analytic upper bound for its bivariate modulus of continuity in the
/// transformed metric.
struct CorpusFunction {
    std::string name;
    ScalarFunction2 f;
    std::function<double(double, double)> modulus;  // (delta1, delta2) -> bound
};

/// The registered corpus: e10, e01, e20, e02, e11, f_sum_ratios,
/// f_exp_decay, f_sin_ratio.
const std::vector<CorpusFunction>& corpus();

/// Lookup by name; throws std::domain_error for unknown names.
const CorpusFunction& corpus_function(const std::string& name);

/// Operator values on the full grid (row index over x1, column over x2).
/// Equivalent to calling apply2 per point, organized so f is evaluated
/// once per lattice node.
std::vector<std::vector<double>> apply2_on_grid(const OperatorSpec& spec,
                                                const ScalarFunction2& f, const Grid2D& grid);
std::vector<std::vector<double>> apply2_on_grid(const GeneralizedSpec& gspec,
                                                const ScalarFunction2& f, const Grid2D& grid);

/// max over the grid of |apply2(f)(x,y) - f(x,y)|.
double sup_error(const OperatorSpec& spec, const ScalarFunction2& f, const Grid2D& grid);
double sup_error(const GeneralizedSpec& gspec, const ScalarFunction2& f, const Grid2D& grid);

struct KorovkinRow {
    int n;
    double p, q;
    std::string func;  // e00, e10, e01, e20, e02
    double sup_err;
};

/// sup_error of the five Korovkin test functions for each n in n_list
/// under the given schedule (n1 = n2 = n per row).
std::vector<KorovkinRow> korovkin_suite(const ParamSchedule& schedule,
                                        const std::vector<int>& n_list, const Grid2D& grid);

/// delta_n(x): the operator's second central moment of u/(1+u) at x,
///   t^2 (p q^2 [n][n-1]/[n+1]^2 (1+x)/(p+qx) - 2 p[n]/[n+1] + 1)
///   + p^{n+1}[n]/[n+1]^2 t,        t = x/(1+x).
double delta_n(int n, const PqParams& params, double x);

/// Grid estimate of the bivariate modulus of continuity: sup of
/// |f(u,v) - f(x,y)| over grid pairs within delta1/delta2 per
/// transformed axis.  A lower bound of the true modulus.
double modulus_bivariate(const ScalarFunction2& f, double delta1, double delta2,
                         const Grid2D& grid);

struct RatePoint {
    double x, y;
    double lhs;           ///< |apply2(f) - f|
    double delta1, delta2;
    double bound;         ///< 4 w(f; sqrt(delta1), sqrt(delta2)), the asserted form
    double bound_literal; ///< 4 w(f; delta1, delta2), reported only
    double slack;         ///< bound - lhs
};

struct RateReport {
    std::vector<RatePoint> points;
    double max_violation = 0.0;  ///< max(lhs - bound), <= 0 when the bound holds
    long violations = 0;
};

/// Checks |apply2(f) - f| <= 4 w(f; sqrt(delta_n1(x)), sqrt(delta_n2(y)))
/// at every grid point, using the corpus function's analytic modulus
/// bound.  The unrooted form is evaluated and reported alongside.
RateReport rate_bound_check(const CorpusFunction& cf, const OperatorSpec& spec,
                            const Grid2D& grid);

/// Closed interval [lo, hi] of the semiaxis; hi may be +infinity.
struct Interval {
    double lo;
    double hi;
};

/// Finite nonempty union of closed intervals of [0, inf).
class IntervalUnion {
public:
    explicit IntervalUnion(std::vector<Interval> parts);

    /// The whole semiaxis [0, inf).
    static IntervalUnion semiaxis();

    bool contains(double x) const;
    double distance(double x) const;
    bool is_semiaxis() const;
    const std::vector<Interval>& parts() const { return parts_; }

private:
    std::vector<Interval> parts_;
};

/// Exact infimum distance d(x, E); domain error for empty unions is
/// raised at IntervalUnion construction.
double distance_to_set(double x, const IntervalUnion& E);

/// Lipschitz-type maximal function class parameters.
struct LipschitzParams {
    double alpha1;
    double alpha2;
    double M;
    IntervalUnion E;
};

/// Thrown when the membership pre-check of lipschitz_bound_check fails;
/// the message carries the violating point pair.
class LipschitzMembershipError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct LipschitzPoint {
    double x, y;
    double lhs;
    double delta1, delta2;
    double d1, d2;  ///< d(x,E), d(y,E)
    double bound;
    double slack;
};

struct LipschitzReport {
    std::vector<LipschitzPoint> points;
    double max_violation = 0.0;
    long violations = 0;
    bool membership_checked = false;
};

struct LipschitzOptions {
    /// Verify on the grid that f satisfies
    ///   |f(u,v) - f(x,y)| <= M |tu-tx|^a1 |tv-ty|^a2   for (u,v) in E^2
    /// before evaluating the bound; throws LipschitzMembershipError on
    /// the first violating pair.
    bool check_membership = true;
};

/// Checks, at every grid point,
///   |apply2(f) - f| <= M (d1^{a1/2} d2^{a2/2} + d1^{a1/2} d(x,E)^{a1}
///                         + d2^{a2/2} d(y,E)^{a2} + 2 d(x,E)^{a1} d(y,E)^{a2})
/// with d_i = delta_n per axis.  For E = [0, inf) the distance terms
/// vanish and the bound collapses to M d1^{a1/2} d2^{a2/2}.
LipschitzReport lipschitz_bound_check(const ScalarFunction2& f, const LipschitzParams& lip,
                                      const OperatorSpec& spec, const Grid2D& grid,
                                      const LipschitzOptions& opts = {});

struct GeneralizedComponentsRow {
    int n;
    double p, q;
    double comp1;  ///< prod_axes ([n]/(c_n+gamma))^alpha (gamma/[n])^alpha
    double comp2;  ///< prod_axes |1 - [n+1]/(c_n+gamma)|^alpha (p[n]/[n+1])^alpha
    double comp3;  ///< prod_axes (1 - 2p[n]/[n+1] + q[n][n-1]/[n+1]^2)
};

struct GeneralizedBoundCheck {
    std::string func;
    bool in_class = false;
    long violations = 0;
};

struct GeneralizedComponentsReport {
    std::vector<GeneralizedComponentsRow> rows;
    /// Corpus functions that pass the class membership pre-check are
    /// additionally checked against 3 M max(components) on the grid.
    std::vector<GeneralizedBoundCheck> bound_checks;
};

GeneralizedComponentsReport generalized_rate_components(
    double gamma1, double gamma2, double beta1, double beta2, const LipschitzParams& lip,
    const ParamSchedule& schedule, const std::vector<int>& n_list, const Grid2D& grid);

}  // namespace pqbbh

#endif
