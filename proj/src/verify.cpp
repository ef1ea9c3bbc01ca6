#include "pqbbh/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "pqbbh/analysis.hpp"
#include "pqbbh/bbh_bivariate.hpp"
#include "pqbbh/exact.hpp"
#include "pqbbh/pq_core.hpp"

namespace pqbbh {

namespace {

// Seeded generator with a fixed mapping to doubles, so suites are
// reproducible independent of the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

exact::ExactParams random_exact_params(Rng& rng) {
    const long b = rng.uniform_int(2, 40);
    const long a = rng.uniform_int(1, b);
    const exact::Rational p = exact::make_rational(a, b);
    const long f = rng.uniform_int(2, 40);
    const long e = rng.uniform_int(1, f - 1);
    return exact::ExactParams(p, p * exact::make_rational(e, f));
}

exact::Rational random_exact_point(Rng& rng) {
    return exact::make_rational(rng.uniform_int(0, 48), rng.uniform_int(1, 12));
}

PqParams random_params(Rng& rng) {
    const double p = rng.uniform(0.3, 1.0);
    return PqParams(p, p * rng.uniform(0.05, 0.995));
}

// Parameters for which the raw Euler product stays inside normal double
// range up to degree 64, so the linear-domain comparison is meaningful.
PqParams random_params_normal_range(Rng& rng) {
    const double p = rng.uniform(0.76, 1.0);
    return PqParams(p, p * rng.uniform(0.05, 0.995));
}

double tol_for_degree(int n) { return n <= 32 ? 1e-12 : 1e-9; }

std::string format_params(const PqParams& params) {
    std::ostringstream os;
    os << "p=" << params.p() << ", q=" << params.q();
    return os.str();
}

void record(IdentityReport& report, double residual, const std::string& context, double tol) {
    report.max_residual = std::max(report.max_residual, residual);
    if (residual > tol && report.witness.empty()) {
        ++report.failures;
        std::ostringstream os;
        os << context << ": residual " << residual << " exceeds " << tol;
        report.witness = os.str();
    } else if (residual > tol) {
        ++report.failures;
    }
}

}  // namespace

std::vector<IdentityReport> run_exact_identity_suite(const ExactSuiteOptions& opts) {
    using exact::ExactSpec;
    using exact::Rational;
    std::vector<IdentityReport> out;
    Rng rng(opts.seed);

    auto run = [&](exact::IdentityId id) {
        Stopwatch timer;
        IdentityReport report;
        report.identity = exact::to_string(id);
        for (long t = 0; t < opts.trials; ++t) {
            const bool univariate =
                id == exact::IdentityId::euler || id == exact::IdentityId::split;
            const int limit = univariate ? opts.max_univariate_degree : opts.max_bivariate_degree;
            const int lo = univariate ? 0 : 1;
            const int n1 = static_cast<int>(rng.uniform_int(lo, limit));
            const int n2 = static_cast<int>(rng.uniform_int(1, opts.max_bivariate_degree));
            const ExactSpec spec{n1, n2, random_exact_params(rng), random_exact_params(rng)};
            const Rational x = random_exact_point(rng);
            const Rational y = random_exact_point(rng);
            const exact::ExactCheck check = exact::exact_identity_check(id, spec, x, y);
            ++report.trials;
            if (!check.ok) {
                ++report.failures;
                if (report.witness.empty()) {
                    std::ostringstream os;
                    os << "n1=" << n1 << ", n2=" << n2 << ", " << check.context
                       << ": lhs=" << check.lhs << " rhs=" << check.rhs;
                    report.witness = os.str();
                }
            }
        }
        report.seconds = timer.seconds();
        out.push_back(std::move(report));
    };

    run(exact::IdentityId::euler);
    run(exact::IdentityId::split);
    run(exact::IdentityId::moments);
    run(exact::IdentityId::tensor);
    return out;
}

std::vector<IdentityReport> run_float_identity_suite(const FloatSuiteOptions& opts) {
    std::vector<IdentityReport> out;
    Rng rng(opts.seed);

    {  // Euler identity: product form against the weighted power sum.
        Stopwatch timer;
        IdentityReport report;
        report.identity = "euler";
        for (long t = 0; t < opts.draws; ++t) {
            const int n = static_cast<int>(rng.uniform_int(1, opts.max_univariate_degree));
            const double tol = tol_for_degree(n);
            const double x = rng.uniform(0.0, 16.0);
            {
                // Log-domain comparison covers every parameter regime,
                // including products far below double range.
                const PqParams params = random_params(rng);
                const double rel = std::abs(std::expm1(euler_sum_log(n, params, x) -
                                                       euler_product_log(n, params, x)));
                ++report.trials;
                std::ostringstream ctx;
                ctx << "log domain, n=" << n << ", " << format_params(params) << ", x=" << x;
                record(report, rel, ctx.str(), tol);
            }
            {
                const PqParams params = random_params_normal_range(rng);
                const double prod = euler_product(n, params, x);
                const double rel = std::abs(euler_sum(n, params, x) - prod) / prod;
                ++report.trials;
                std::ostringstream ctx;
                ctx << "linear domain, n=" << n << ", " << format_params(params) << ", x=" << x;
                record(report, rel, ctx.str(), tol);
            }
        }
        report.seconds = timer.seconds();
        out.push_back(std::move(report));
    }

    {  // Splitting identity, exhaustive in k per draw.
        Stopwatch timer;
        IdentityReport report;
        report.identity = "split";
        for (long t = 0; t < opts.draws; ++t) {
            const int n = static_cast<int>(rng.uniform_int(1, opts.max_univariate_degree));
            const PqParams params = random_params(rng);
            const double scale = pq_integer(n + 1, params);
            for (int k = 0; k <= n; ++k) {
                double residual = split_identity_residual(n, k, params);
                if (opts.inject_split_sign_flip) {
                    const double lhs = std::pow(params.q(), k) * pq_integer(n - k + 1, params);
                    const double rhs = pq_integer(n + 1, params) +
                                       std::pow(params.p(), n - k + 1) * pq_integer(k, params);
                    residual = lhs - rhs;
                }
                ++report.trials;
                std::ostringstream ctx;
                ctx << "n=" << n << ", k=" << k << ", " << format_params(params);
                record(report, std::abs(residual) / scale, ctx.str(), 1e-12);
            }
        }
        report.seconds = timer.seconds();
        out.push_back(std::move(report));
    }

    {  // Closed-form moments against the brute-force double sum.
        Stopwatch timer;
        IdentityReport report;
        report.identity = "moments";
        constexpr int pairs[5][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}};
        for (long t = 0; t < opts.draws; ++t) {
            const int n = static_cast<int>(rng.uniform_int(1, opts.max_bivariate_degree));
            const OperatorSpec spec(n, n, random_params(rng), random_params(rng));
            const double x = rng.uniform(0.0, 24.0);
            const double y = rng.uniform(0.0, 24.0);
            for (const auto& ij : pairs) {
                const double closed = moment_closed(spec, ij[0], ij[1], x, y);
                const double direct = moment_direct(spec, ij[0], ij[1], x, y);
                const double denom = std::max(std::abs(closed), std::abs(direct));
                const double rel = denom == 0.0 ? 0.0 : std::abs(closed - direct) / denom;
                ++report.trials;
                std::ostringstream ctx;
                ctx << "(i,j)=(" << ij[0] << "," << ij[1] << "), n=" << n << ", x=" << x
                    << ", y=" << y;
                record(report, rel, ctx.str(), tol_for_degree(n));
            }
        }
        report.seconds = timer.seconds();
        out.push_back(std::move(report));
    }

    {  // Tensor decomposition for corpus functions, both orders.
        Stopwatch timer;
        IdentityReport report;
        report.identity = "tensor";
        const auto& fns = corpus();
        for (long t = 0; t < opts.draws; ++t) {
            const int n = static_cast<int>(rng.uniform_int(2, opts.max_bivariate_degree));
            const OperatorSpec spec(n, n, random_params(rng), random_params(rng));
            const double x = rng.uniform(0.0, 24.0);
            const double y = rng.uniform(0.0, 24.0);
            const CorpusFunction& cf = fns[static_cast<size_t>(rng.uniform_int(
                0, static_cast<long>(fns.size()) - 1))];
            const double direct = apply2(cf.f, spec, x, y);
            const double scale = std::max(1.0, std::abs(direct));
            for (ComposeOrder order : {ComposeOrder::x_then_y, ComposeOrder::y_then_x}) {
                const double composed = apply2_composed(cf.f, spec, x, y, order);
                ++report.trials;
                std::ostringstream ctx;
                ctx << cf.name << ", n=" << n << ", x=" << x << ", y=" << y << ", order="
                    << (order == ComposeOrder::x_then_y ? "x_then_y" : "y_then_x");
                record(report, std::abs(composed - direct) / scale, ctx.str(), 1e-12);
            }
        }
        report.seconds = timer.seconds();
        out.push_back(std::move(report));
    }

    return out;
}

bool all_clean(const std::vector<IdentityReport>& reports) {
    for (const IdentityReport& r : reports)
        if (r.failures > 0) return false;
    return true;
}

}  // namespace pqbbh
