#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "pqbbh/bbh_univariate.hpp"
#include "testutil.hpp"

using namespace pqbbh;
using testutil::Rng;
using testutil::rel_err;

namespace {

double transform(double u) { return u / (1.0 + u); }

// Independent classical evaluation: plain powers and an additive
// binomial recurrence, no shared code with classical_apply.
double classical_oracle(const ScalarFunction& f, int n, double x) {
    double sum = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        sum += f(static_cast<double>(k) / (n - k + 1)) * binom * std::pow(x, k);
        binom = binom * (n - k) / (k + 1);
    }
    return sum / std::pow(1.0 + x, n);
}

}  // namespace

TEST_SUITE_BEGIN("bbh_univariate");

TEST_CASE("node pinned values") {
    CHECK(node(9, 0, PqParams(0.95, 0.9)) == 0.0);  // [0] = 0
    CHECK(node(1, 1, PqParams(1.0, 0.999)) == doctest::Approx(1.0 / 0.999).epsilon(1e-12));
    // [3]_q / ([1]_q q^3) = 1.75/0.125 at p = 1, q = 1/2
    CHECK(node(3, 3, PqParams(1.0, 0.5)) == doctest::Approx(14.0).epsilon(1e-12));
    CHECK_THROWS_AS(node(3, 4, PqParams(0.9, 0.8)), std::domain_error);
}

TEST_CASE("transformed nodes collapse to p^{n-k+1}[k]/[n+1]") {
    Rng rng(9001);
    for (int n : {1, 2, 3, 5, 8, 13, 21, 32, 64, 128}) {
        const PqParams params = rng.params(0.4);
        const double scale = pq_integer(n + 1, params);
        for (int k = 0; k <= n; ++k) {
            const double u = node(n, k, params);
            const double expected = std::pow(params.p(), n - k + 1) * pq_integer(k, params) / scale;
            CHECK(rel_err(transform(u), expected) <= 1e-12);
        }
    }
}

TEST_CASE("weight tables: pinned example, partition of unity, positivity") {
    const PqParams a(0.9, 0.8);
    SUBCASE("x = 0 concentrates on k = 0") {
        const NodeWeightTable t = weight_table(6, a, 0.0);
        CHECK(t.weights[0] == 1.0);
        for (int k = 1; k <= 6; ++k) CHECK(t.weights[static_cast<size_t>(k)] == 0.0);
    }
    SUBCASE("n = 2 at x = 1 gives (0.9, 1.7, 0.8)/3.4") {
        const NodeWeightTable t = weight_table(2, a, 1.0);
        CHECK(t.weights[0] == doctest::Approx(0.9 / 3.4).epsilon(1e-13));
        CHECK(t.weights[1] == doctest::Approx(1.7 / 3.4).epsilon(1e-13));
        CHECK(t.weights[2] == doctest::Approx(0.8 / 3.4).epsilon(1e-13));
    }
    SUBCASE("sum to one within 1e-12 up to n = 128") {
        Rng rng(9002);
        for (int n : {1, 4, 16, 64, 128}) {
            for (int rep = 0; rep < 10; ++rep) {
                const PqParams params = rng.params(0.4);
                const double x = rng.uniform(0.0, 24.0);
                const NodeWeightTable t = weight_table(n, params, x);
                double sum = 0.0;
                for (double w : t.weights) {
                    CHECK(w >= 0.0);
                    sum += w;
                }
                CHECK(std::abs(sum - 1.0) <= 1e-12);
                CHECK(t.nodes[0] == 0.0);
            }
        }
    }
}

TEST_CASE("pq_apply: constants, endpoint, moments") {
    const PqParams a(0.95, 0.9);
    SUBCASE("constants reproduce exactly up to rounding") {
        Rng rng(9003);
        for (int rep = 0; rep < 10; ++rep) {
            const double c = rng.uniform(-3.0, 3.0);
            const double x = rng.uniform(0.0, 20.0);
            CHECK(pq_apply([c](double) { return c; }, 12, a, x) ==
                  doctest::Approx(c).epsilon(1e-13));
        }
    }
    SUBCASE("x = 0 evaluates f at the origin exactly") {
        const auto f = [](double u) { return std::cos(u) + u; };
        CHECK(pq_apply(f, 9, a, 0.0) == f(0.0));
    }
    SUBCASE("first moment matches p[n]/[n+1] x/(1+x) on a grid") {
        Rng rng(9004);
        for (int n : {1, 2, 4, 8, 16, 32}) {
            const PqParams params = rng.params(0.4);
            const double rho =
                params.p() * pq_integer(n, params) / pq_integer(n + 1, params);
            for (double x : {0.0, 0.25, 1.0, 3.0, 10.0, 24.0}) {
                const double lhs = pq_apply([](double u) { return transform(u); }, n, params, x);
                CHECK(std::abs(lhs - rho * transform(x)) <= 1e-10 * std::max(1.0, rho));
            }
        }
    }
    SUBCASE("second moment brute force is the oracle for the closed form") {
        // n = 8, p = 0.95, q = 0.9, x = 2: one-axis closed form.
        const int n = 8;
        const double x = 2.0;
        const double brute =
            pq_apply([](double u) { return transform(u) * transform(u); }, n, a, x);
        const double nn = pq_integer(n, a), nn1 = pq_integer(n + 1, a),
                     nm1 = pq_integer(n - 1, a);
        const double pq = a.p() * a.q();
        const double closed = pq * pq * nn * nm1 / (nn1 * nn1) * x * x /
                                  ((1.0 + x) * (a.p() + a.q() * x)) +
                              std::pow(a.p(), n + 1) * nn / (nn1 * nn1) * transform(x);
        CHECK(rel_err(brute, closed) <= 1e-12);
    }
}

TEST_CASE("pq_apply: positivity, monotonicity, linearity") {
    Rng rng(9005);
    const auto f = [](double u) { return transform(u) * transform(u) + 0.3; };
    const auto g = [&](double u) { return f(u) + 0.25 / (1.0 + u); };  // g >= f >= 0
    for (int rep = 0; rep < 25; ++rep) {
        const PqParams params = rng.params(0.4);
        const int n = static_cast<int>(rng.uniform_int(1, 32));
        const double x = rng.uniform(0.0, 24.0);
        const double lf = pq_apply(f, n, params, x);
        const double lg = pq_apply(g, n, params, x);
        CHECK(lf >= 0.0);
        CHECK(lg >= lf);
        const double combo =
            pq_apply([&](double u) { return 2.0 * f(u) - 3.0 * g(u); }, n, params, x);
        CHECK(std::abs(combo - (2.0 * lf - 3.0 * lg)) <= 1e-12 * std::max(1.0, std::abs(combo)));
    }
}

TEST_CASE("q_apply is an independent path equal to pq_apply at p = 1") {
    Rng rng(9006);
    const ScalarFunction funcs[] = {
        [](double u) { return transform(u); },
        [](double u) { return std::exp(-u); },
        [](double u) { return std::sin(M_PI * transform(u)); },
    };
    CHECK(q_apply([](double) { return 1.0; }, 10, 0.6, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    for (int rep = 0; rep < 30; ++rep) {
        const double q = rng.uniform(0.05, 0.995);
        const int n = static_cast<int>(rng.uniform_int(1, 32));
        const double x = rng.uniform(0.0, 16.0);
        for (const ScalarFunction& f : funcs) {
            const double via_q = q_apply(f, n, q, x);
            const double via_pq = pq_apply(f, n, PqParams(1.0, q), x);
            CHECK(rel_err(via_q, via_pq) <= 1e-12);
        }
    }
    // Parameter continuity toward the classical operator.
    const double via_q = q_apply([](double u) { return transform(u); }, 16, 0.999, 1.0);
    const double classical = classical_apply([](double u) { return transform(u); }, 16, 1.0);
    CHECK(std::abs(via_q - classical) <= 1e-2);
}

TEST_CASE("classical operator") {
    CHECK(classical_apply([](double) { return 1.0; }, 24, 3.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // n = 1, x = 1: equal weights at nodes 0 and 1.
    const auto f = [](double u) { return std::cos(3.0 * u) + u * u; };
    CHECK(classical_apply(f, 1, 1.0) ==
          doctest::Approx(0.5 * (f(0.0) + f(1.0))).epsilon(1e-14));
    // First moment closed form (n/(n+1)) x/(1+x), brute-forced independently.
    Rng rng(9007);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = static_cast<int>(rng.uniform_int(1, 48));
        const double x = rng.uniform(0.0, 12.0);
        const auto e1 = [](double u) { return transform(u); };
        const double expected = static_cast<double>(n) / (n + 1) * transform(x);
        CHECK(std::abs(classical_apply(e1, n, x) - expected) <= 1e-12);
        CHECK(std::abs(classical_oracle(e1, n, x) - expected) <= 1e-10);
    }
}

TEST_CASE("non-finite function values are reported with the node") {
    const PqParams a(0.9, 0.8);
    const auto bad = [](double u) {
        return u > 5.0 ? std::numeric_limits<double>::quiet_NaN() : u;
    };
    try {
        pq_apply(bad, 12, a, 4.0);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(std::string(e.what()).find("k=") != std::string::npos);
    }
}

TEST_SUITE_END();
