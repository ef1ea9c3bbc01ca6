#include "pqbbh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pqbbh/detail/kahan.hpp"

namespace pqbbh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double ratio_transform(double x) { return x / (1.0 + x); }

double inverse_ratio_transform(double t) {
    if (!(t >= 0.0 && t < 1.0))
        throw std::domain_error("inverse_ratio_transform: requires t in [0, 1)");
    return t / (1.0 - t);
}

double test_function(int i, int j, double u, double v) {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::domain_error("test_function: requires i, j in {0,1,2}");
    if (!(u >= 0.0) || !(v >= 0.0))
        throw std::domain_error("test_function: requires u, v >= 0");
    return std::pow(ratio_transform(u), i) * std::pow(ratio_transform(v), j);
}

ParamSchedule::ParamSchedule(std::string id, int min_n, std::function<PqParams(int)> rule)
    : id_(std::move(id)), min_n_(min_n), rule_(std::move(rule)) {
    if (min_n_ < 1) throw std::invalid_argument("ParamSchedule: min_n must be >= 1");
    // Valid parameters and strictly increasing p_n, q_n over a dense
    // prefix plus spot checks further out.
    std::vector<int> sample;
    for (int n = min_n_; n <= 64; ++n) sample.push_back(n);
    for (int n : {128, 256, 512, 1000, 1024}) sample.push_back(n);
    double prev_p = 0.0, prev_q = 0.0;
    for (int n : sample) {
        PqParams params = rule_(n);  // PqParams enforces 0 < q_n < p_n <= 1
        if (!(params.p() > prev_p) || !(params.q() > prev_q))
            throw std::invalid_argument("ParamSchedule '" + id_ +
                                        "': p_n, q_n must be strictly increasing (n=" +
                                        std::to_string(n) + ")");
        prev_p = params.p();
        prev_q = params.q();
    }
    const PqParams at1000 = rule_(1000);
    if (1.0 - at1000.p() > 1e-3 || 1.0 - at1000.q() > 1e-3)
        throw std::invalid_argument("ParamSchedule '" + id_ +
                                    "': p_n, q_n must be within 1e-3 of 1 by n = 1000");
    double prev_len = 0.0;
    for (int n = 8; n <= 1024; n *= 2) {
        const double len = pq_integer(n + 1, rule_(n));
        if (!(len > prev_len))
            throw std::invalid_argument("ParamSchedule '" + id_ +
                                        "': [n+1]_{p_n,q_n} must be strictly increasing");
        prev_len = len;
    }
    if (!(prev_len > 100.0))
        throw std::invalid_argument("ParamSchedule '" + id_ +
                                    "': [n+1]_{p_n,q_n} must exceed 100 by n = 1024");
}

PqParams ParamSchedule::at(int n) const {
    if (n < min_n_)
        throw std::domain_error("ParamSchedule '" + id_ + "': defined for n >= " +
                                std::to_string(min_n_));
    return rule_(n);
}

ParamSchedule ParamSchedule::default_schedule() {
    return ParamSchedule("default", 1, [](int n) {
        return PqParams(1.0 - 1.0 / (2.0 * (n + 1)), 1.0 - 1.0 / (n + 1.0));
    });
}

ParamSchedule ParamSchedule::inverse_square() {
    return ParamSchedule("invsq", 2, [](int n) {
        const double nn = static_cast<double>(n) * n;
        return PqParams(1.0 - 1.0 / nn, 1.0 - 2.0 / nn);
    });
}

ParamSchedule ParamSchedule::by_id(const std::string& id) {
    if (id == "default") return default_schedule();
    if (id == "invsq") return inverse_square();
    throw std::domain_error("unknown schedule id: " + id);
}

PqParams default_schedule(int n) {
    if (n < 1) throw std::domain_error("default_schedule: n must be >= 1");
    return PqParams(1.0 - 1.0 / (2.0 * (n + 1)), 1.0 - 1.0 / (n + 1.0));
}

Grid2D Grid2D::uniform(int points_per_axis, double t_max) {
    return uniform(points_per_axis, points_per_axis, t_max);
}

Grid2D Grid2D::uniform(int nx, int ny, double t_max) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("Grid2D: need >= 2 points per axis");
    if (!(t_max > 0.0 && t_max < 1.0))
        throw std::invalid_argument("Grid2D: requires 0 < t_max < 1");
    Grid2D grid;
    auto fill = [t_max](std::vector<double>& ts, std::vector<double>& xs, int count) {
        ts.resize(static_cast<size_t>(count));
        xs.resize(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double t = t_max * i / (count - 1);
            ts[static_cast<size_t>(i)] = t;
            xs[static_cast<size_t>(i)] = t / (1.0 - t);
        }
    };
    fill(grid.t1, grid.x1, nx);
    fill(grid.t2, grid.x2, ny);
    return grid;
}

const std::vector<CorpusFunction>& corpus() {
    // Modulus bounds are per-axis Lipschitz constants in the transformed
    // metric, capped by the function's range spread.
    static const std::vector<CorpusFunction> kCorpus = {
        {"e10", [](double u, double v) { return test_function(1, 0, u, v); },
         [](double d1, double) { return std::min(d1, 1.0); }},
        {"e01", [](double u, double v) { return test_function(0, 1, u, v); },
         [](double, double d2) { return std::min(d2, 1.0); }},
        {"e20", [](double u, double v) { return test_function(2, 0, u, v); },
         [](double d1, double) { return std::min(2.0 * d1, 1.0); }},
        {"e02", [](double u, double v) { return test_function(0, 2, u, v); },
         [](double, double d2) { return std::min(2.0 * d2, 1.0); }},
        {"e11", [](double u, double v) { return test_function(1, 1, u, v); },
         [](double d1, double d2) { return std::min(d1 + d2, 1.0); }},
        {"f_sum_ratios",
         [](double u, double v) { return ratio_transform(u) + ratio_transform(v); },
         [](double d1, double d2) { return std::min(d1 + d2, 2.0); }},
        {"f_exp_decay", [](double u, double v) { return std::exp(-u - v); },
         [](double d1, double d2) { return std::min(4.0 / M_E * (d1 + d2), 1.0); }},
        {"f_sin_ratio",
         [](double u, double v) {
             return std::sin(M_PI * ratio_transform(u)) * std::sin(M_PI * ratio_transform(v));
         },
         [](double d1, double d2) { return std::min(M_PI * (d1 + d2), 2.0); }},
    };
    return kCorpus;
}

const CorpusFunction& corpus_function(const std::string& name) {
    for (const CorpusFunction& cf : corpus())
        if (cf.name == name) return cf;
    throw std::domain_error("unknown corpus function: " + name);
}

namespace {

// Weight tables for every grid coordinate of one axis.
std::vector<std::vector<double>> axis_weights(int n, const PqParams& params,
                                              const std::vector<double>& xs) {
    std::vector<std::vector<double>> w;
    w.reserve(xs.size());
    for (double x : xs) w.push_back(weight_table(n, params, x).weights);
    return w;
}

std::vector<std::vector<double>> lattice_values(const ScalarFunction2& f,
                                                const std::vector<double>& nodes1,
                                                const std::vector<double>& nodes2) {
    std::vector<std::vector<double>> F(nodes1.size(), std::vector<double>(nodes2.size()));
    for (size_t k1 = 0; k1 < nodes1.size(); ++k1)
        for (size_t k2 = 0; k2 < nodes2.size(); ++k2) {
            const double val = f(nodes1[k1], nodes2[k2]);
            if (!std::isfinite(val))
                throw EvaluationError("f returned non-finite value at lattice point (k1=" +
                                      std::to_string(k1) + ", k2=" + std::to_string(k2) + ")");
            F[k1][k2] = val;
        }
    return F;
}

std::vector<std::vector<double>> grid_values(const std::vector<double>& nodes1,
                                             const std::vector<double>& nodes2,
                                             const ScalarFunction2& f, int n1, int n2,
                                             const PqParams& par1, const PqParams& par2,
                                             const Grid2D& grid) {
    const auto W1 = axis_weights(n1, par1, grid.x1);
    const auto W2 = axis_weights(n2, par2, grid.x2);
    const auto F = lattice_values(f, nodes1, nodes2);
    std::vector<std::vector<double>> out(grid.x1.size(), std::vector<double>(grid.x2.size()));
    std::vector<double> tmp(nodes1.size());
    for (size_t iy = 0; iy < grid.x2.size(); ++iy) {
        for (size_t k1 = 0; k1 < nodes1.size(); ++k1) {
            detail::KahanAccumulator row;
            for (size_t k2 = 0; k2 < nodes2.size(); ++k2) row.add(F[k1][k2] * W2[iy][k2]);
            tmp[k1] = row.sum();
        }
        for (size_t ix = 0; ix < grid.x1.size(); ++ix) {
            detail::KahanAccumulator acc;
            for (size_t k1 = 0; k1 < nodes1.size(); ++k1) acc.add(W1[ix][k1] * tmp[k1]);
            out[ix][iy] = acc.sum();
        }
    }
    return out;
}

std::vector<double> generalized_axis_nodes(int n, const PqParams& params, double gamma,
                                           double beta) {
    std::vector<double> nodes(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double num = std::pow(params.p(), n + 1 - k) * pq_integer(k, params) + gamma;
        const double den = std::pow(params.q(), k) * pq_integer(n - k + 1, params) + beta;
        nodes[static_cast<size_t>(k)] = num / den;
    }
    return nodes;
}

}  // namespace

std::vector<std::vector<double>> apply2_on_grid(const OperatorSpec& spec,
                                                const ScalarFunction2& f, const Grid2D& grid) {
    const BivariateOperator op(spec);
    return grid_values(op.nodes1(), op.nodes2(), f, spec.n1, spec.n2, spec.params1,
                       spec.params2, grid);
}

std::vector<std::vector<double>> apply2_on_grid(const GeneralizedSpec& gspec,
                                                const ScalarFunction2& f, const Grid2D& grid) {
    const OperatorSpec& spec = gspec.base;
    return grid_values(generalized_axis_nodes(spec.n1, spec.params1, gspec.gamma1, gspec.beta1),
                       generalized_axis_nodes(spec.n2, spec.params2, gspec.gamma2, gspec.beta2),
                       f, spec.n1, spec.n2, spec.params1, spec.params2, grid);
}

namespace {

template <typename SpecT>
double sup_error_impl(const SpecT& spec, const ScalarFunction2& f, const Grid2D& grid) {
    const auto values = apply2_on_grid(spec, f, grid);
    double sup = 0.0;
    for (size_t ix = 0; ix < grid.x1.size(); ++ix)
        for (size_t iy = 0; iy < grid.x2.size(); ++iy)
            sup = std::max(sup, std::abs(values[ix][iy] - f(grid.x1[ix], grid.x2[iy])));
    return sup;
}

}  // namespace

double sup_error(const OperatorSpec& spec, const ScalarFunction2& f, const Grid2D& grid) {
    return sup_error_impl(spec, f, grid);
}

double sup_error(const GeneralizedSpec& gspec, const ScalarFunction2& f, const Grid2D& grid) {
    return sup_error_impl(gspec, f, grid);
}

std::vector<KorovkinRow> korovkin_suite(const ParamSchedule& schedule,
                                        const std::vector<int>& n_list, const Grid2D& grid) {
    static const std::pair<const char*, std::pair<int, int>> kTestFns[] = {
        {"e00", {0, 0}}, {"e10", {1, 0}}, {"e01", {0, 1}}, {"e20", {2, 0}}, {"e02", {0, 2}}};
    std::vector<KorovkinRow> rows;
    for (int n : n_list) {
        const PqParams params = schedule.at(n);
        const OperatorSpec spec(n, n, params, params);
        for (const auto& [name, ij] : kTestFns) {
            const auto [i, j] = ij;
            const double err = sup_error(
                spec, [i, j](double u, double v) { return test_function(i, j, u, v); }, grid);
            rows.push_back(KorovkinRow{n, params.p(), params.q(), name, err});
        }
    }
    return rows;
}

double delta_n(int n, const PqParams& params, double x) {
    if (!(x >= 0.0)) throw std::domain_error("delta_n: requires x >= 0");
    const double t = ratio_transform(x);
    const double nn = pq_integer(n, params);
    const double nn1 = pq_integer(n + 1, params);
    const double nm1 = pq_integer(n - 1, params);
    const double pq = params.p() * params.q();
    const double lead = pq * pq * nn * nm1 / (nn1 * nn1);
    const double rho = params.p() * nn / nn1;
    const double tail = std::pow(params.p(), n + 1) * nn / (nn1 * nn1);
    return t * t * (lead * (1.0 + x) / (params.p() + params.q() * x) - 2.0 * rho + 1.0) +
           tail * t;
}

double modulus_bivariate(const ScalarFunction2& f, double delta1, double delta2,
                         const Grid2D& grid) {
    if (!(delta1 >= 0.0) || !(delta2 >= 0.0))
        throw std::domain_error("modulus_bivariate: requires delta1, delta2 >= 0");
    const size_t n1 = grid.t1.size(), n2 = grid.t2.size();
    std::vector<std::vector<double>> F(n1, std::vector<double>(n2));
    for (size_t i = 0; i < n1; ++i)
        for (size_t j = 0; j < n2; ++j) F[i][j] = f(grid.x1[i], grid.x2[j]);
    double sup = 0.0;
    for (size_t i1 = 0; i1 < n1; ++i1)
        for (size_t i2 = 0; i2 < n1; ++i2) {
            if (std::abs(grid.t1[i1] - grid.t1[i2]) > delta1) continue;
            for (size_t j1 = 0; j1 < n2; ++j1)
                for (size_t j2 = 0; j2 < n2; ++j2) {
                    if (std::abs(grid.t2[j1] - grid.t2[j2]) > delta2) continue;
                    sup = std::max(sup, std::abs(F[i1][j1] - F[i2][j2]));
                }
        }
    return sup;
}

RateReport rate_bound_check(const CorpusFunction& cf, const OperatorSpec& spec,
                            const Grid2D& grid) {
    const auto values = apply2_on_grid(spec, cf.f, grid);
    std::vector<double> d1(grid.x1.size()), d2(grid.x2.size());
    for (size_t i = 0; i < grid.x1.size(); ++i) d1[i] = delta_n(spec.n1, spec.params1, grid.x1[i]);
    for (size_t j = 0; j < grid.x2.size(); ++j) d2[j] = delta_n(spec.n2, spec.params2, grid.x2[j]);

    RateReport report;
    report.max_violation = -kInf;
    for (size_t ix = 0; ix < grid.x1.size(); ++ix)
        for (size_t iy = 0; iy < grid.x2.size(); ++iy) {
            const double x = grid.x1[ix], y = grid.x2[iy];
            const double lhs = std::abs(values[ix][iy] - cf.f(x, y));
            const double bound = 4.0 * cf.modulus(std::sqrt(d1[ix]), std::sqrt(d2[iy]));
            const double literal = 4.0 * cf.modulus(d1[ix], d2[iy]);
            report.points.push_back(
                RatePoint{x, y, lhs, d1[ix], d2[iy], bound, literal, bound - lhs});
            report.max_violation = std::max(report.max_violation, lhs - bound);
            if (lhs > bound + 1e-12 * std::max(1.0, bound)) ++report.violations;
        }
    return report;
}

IntervalUnion::IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::domain_error("IntervalUnion: empty set");
    for (const Interval& iv : parts_) {
        if (!(iv.lo >= 0.0)) throw std::domain_error("IntervalUnion: intervals must lie in [0, inf)");
        if (!(iv.hi >= iv.lo)) throw std::domain_error("IntervalUnion: requires lo <= hi");
    }
}

IntervalUnion IntervalUnion::semiaxis() { return IntervalUnion({Interval{0.0, kInf}}); }

bool IntervalUnion::contains(double x) const {
    for (const Interval& iv : parts_)
        if (x >= iv.lo && x <= iv.hi) return true;
    return false;
}

double IntervalUnion::distance(double x) const {
    double best = kInf;
    for (const Interval& iv : parts_) {
        if (x < iv.lo)
            best = std::min(best, iv.lo - x);
        else if (x > iv.hi)
            best = std::min(best, x - iv.hi);
        else
            return 0.0;
    }
    return best;
}

bool IntervalUnion::is_semiaxis() const {
    return parts_.size() == 1 && parts_[0].lo == 0.0 && parts_[0].hi == kInf;
}

double distance_to_set(double x, const IntervalUnion& E) { return E.distance(x); }

namespace {

void check_lipschitz_membership(const ScalarFunction2& f, const LipschitzParams& lip,
                                const Grid2D& grid) {
    std::vector<std::vector<double>> F(grid.x1.size(), std::vector<double>(grid.x2.size()));
    for (size_t i = 0; i < grid.x1.size(); ++i)
        for (size_t j = 0; j < grid.x2.size(); ++j) F[i][j] = f(grid.x1[i], grid.x2[j]);
    for (size_t i1 = 0; i1 < grid.x1.size(); ++i1) {
        if (!lip.E.contains(grid.x1[i1])) continue;
        for (size_t j1 = 0; j1 < grid.x2.size(); ++j1) {
            if (!lip.E.contains(grid.x2[j1])) continue;
            for (size_t i2 = 0; i2 < grid.x1.size(); ++i2)
                for (size_t j2 = 0; j2 < grid.x2.size(); ++j2) {
                    const double lhs = std::abs(F[i1][j1] - F[i2][j2]);
                    const double rhs =
                        lip.M *
                        std::pow(std::abs(grid.t1[i1] - grid.t1[i2]), lip.alpha1) *
                        std::pow(std::abs(grid.t2[j1] - grid.t2[j2]), lip.alpha2);
                    if (lhs > rhs * (1.0 + 1e-12) + 1e-15) {
                        std::ostringstream msg;
                        msg << "function is not in the Lipschitz class (M=" << lip.M
                            << ", alpha1=" << lip.alpha1 << ", alpha2=" << lip.alpha2
                            << "): |f(u,v)-f(x,y)| = " << lhs << " > " << rhs
                            << " at (u,v)=(" << grid.x1[i1] << "," << grid.x2[j1] << ") in E^2"
                            << ", (x,y)=(" << grid.x1[i2] << "," << grid.x2[j2] << ")";
                        throw LipschitzMembershipError(msg.str());
                    }
                }
        }
    }
}

}  // namespace

LipschitzReport lipschitz_bound_check(const ScalarFunction2& f, const LipschitzParams& lip,
                                      const OperatorSpec& spec, const Grid2D& grid,
                                      const LipschitzOptions& opts) {
    if (!(lip.alpha1 > 0.0 && lip.alpha1 <= 1.0) || !(lip.alpha2 > 0.0 && lip.alpha2 <= 1.0))
        throw std::domain_error("lipschitz_bound_check: requires 0 < alpha <= 1");
    if (!(lip.M > 0.0)) throw std::domain_error("lipschitz_bound_check: requires M > 0");

    LipschitzReport report;
    if (opts.check_membership) {
        check_lipschitz_membership(f, lip, grid);
        report.membership_checked = true;
    }

    const auto values = apply2_on_grid(spec, f, grid);
    std::vector<double> del1(grid.x1.size()), del2(grid.x2.size());
    std::vector<double> dist1(grid.x1.size()), dist2(grid.x2.size());
    for (size_t i = 0; i < grid.x1.size(); ++i) {
        del1[i] = delta_n(spec.n1, spec.params1, grid.x1[i]);
        dist1[i] = lip.E.distance(grid.x1[i]);
    }
    for (size_t j = 0; j < grid.x2.size(); ++j) {
        del2[j] = delta_n(spec.n2, spec.params2, grid.x2[j]);
        dist2[j] = lip.E.distance(grid.x2[j]);
    }

    report.max_violation = -kInf;
    for (size_t ix = 0; ix < grid.x1.size(); ++ix)
        for (size_t iy = 0; iy < grid.x2.size(); ++iy) {
            const double x = grid.x1[ix], y = grid.x2[iy];
            const double lhs = std::abs(values[ix][iy] - f(x, y));
            const double da = std::pow(del1[ix], 0.5 * lip.alpha1);
            const double db = std::pow(del2[iy], 0.5 * lip.alpha2);
            const double ea = std::pow(dist1[ix], lip.alpha1);
            const double eb = std::pow(dist2[iy], lip.alpha2);
            const double bound = lip.M * (da * db + da * ea + db * eb + 2.0 * ea * eb);
            report.points.push_back(
                LipschitzPoint{x, y, lhs, del1[ix], del2[iy], dist1[ix], dist2[iy], bound,
                               bound - lhs});
            report.max_violation = std::max(report.max_violation, lhs - bound);
            if (lhs > bound + 1e-12 * std::max(1.0, bound)) ++report.violations;
        }
    return report;
}

GeneralizedComponentsReport generalized_rate_components(
    double gamma1, double gamma2, double beta1, double beta2, const LipschitzParams& lip,
    const ParamSchedule& schedule, const std::vector<int>& n_list, const Grid2D& grid) {
    GeneralizedComponentsReport report;

    auto axis_comp = [](int n, const PqParams& params, double gamma, double beta, double alpha,
                        double out[3]) {
        const double nn = pq_integer(n, params);
        const double nn1 = pq_integer(n + 1, params);
        const double nm1 = pq_integer(n - 1, params);
        const double c_n = nn1 + beta;
        const double rho = params.p() * nn / nn1;
        out[0] = std::pow(nn / (c_n + gamma), alpha) *
                 std::pow(std::abs(gamma) / nn, alpha);
        out[1] = std::pow(std::abs(1.0 - nn1 / (c_n + gamma)), alpha) *
                 std::pow(rho, alpha);
        out[2] = 1.0 - 2.0 * rho + params.q() * nn * nm1 / (nn1 * nn1);
    };

    for (int n : n_list) {
        const PqParams params = schedule.at(n);
        double a1[3], a2[3];
        axis_comp(n, params, gamma1, beta1, lip.alpha1, a1);
        axis_comp(n, params, gamma2, beta2, lip.alpha2, a2);
        report.rows.push_back(GeneralizedComponentsRow{
            n, params.p(), params.q(), a1[0] * a2[0], a1[1] * a2[1], a1[2] * a2[2]});
    }

    // Corpus functions that actually lie in the class get the
    // 3 M max(components) bound checked on the grid.
    for (const CorpusFunction& cf : corpus()) {
        GeneralizedBoundCheck check{cf.name, false, 0};
        try {
            check_lipschitz_membership(cf.f, lip, grid);
            check.in_class = true;
        } catch (const LipschitzMembershipError&) {
            report.bound_checks.push_back(check);
            continue;
        }
        for (const GeneralizedComponentsRow& row : report.rows) {
            const PqParams params = schedule.at(row.n);
            const GeneralizedSpec gspec(OperatorSpec(row.n, row.n, params, params), gamma1,
                                        gamma2, beta1, beta2);
            const double bound =
                3.0 * lip.M * std::max({row.comp1, row.comp2, row.comp3});
            const auto values = apply2_on_grid(gspec, cf.f, grid);
            for (size_t ix = 0; ix < grid.x1.size(); ++ix)
                for (size_t iy = 0; iy < grid.x2.size(); ++iy) {
                    const double lhs =
                        std::abs(values[ix][iy] - cf.f(grid.x1[ix], grid.x2[iy]));
                    if (lhs > bound + 1e-12 * std::max(1.0, bound)) ++check.violations;
                }
        }
        report.bound_checks.push_back(check);
    }
    return report;
}

}  // namespace pqbbh
