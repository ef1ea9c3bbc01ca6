#include <cmath>
#include <limits>

#include "doctest.h"
#include "pqbbh/pq_core.hpp"
#include "testutil.hpp"

using namespace pqbbh;
using testutil::Rng;
using testutil::rel_err;

TEST_SUITE_BEGIN("pq_core");

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(PqParams(1.0, 0.5));
    CHECK_NOTHROW(PqParams(0.9, 0.8999999));
    CHECK_THROWS_AS(PqParams(0.9, 0.9), std::invalid_argument);   // q = p rejected
    CHECK_THROWS_AS(PqParams(0.8, 0.9), std::invalid_argument);   // q > p
    CHECK_THROWS_AS(PqParams(1.1, 0.5), std::invalid_argument);   // p > 1
    CHECK_THROWS_AS(PqParams(0.9, 0.0), std::invalid_argument);   // q = 0
    CHECK_THROWS_AS(PqParams(0.9, -0.1), std::invalid_argument);  // q < 0
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(PqParams(nan, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PqParams(0.9, nan), std::invalid_argument);
}

TEST_CASE("pq_integer pinned values") {
    const PqParams a(0.9, 0.8);
    CHECK(pq_integer(0, a) == 0.0);                           // empty sum
    CHECK(pq_integer(1, a) == doctest::Approx(1.0).epsilon(1e-14));
    // (0.9^4 - 0.8^4)/0.1 = 2.465 by hand
    CHECK(pq_integer(4, a) == doctest::Approx(2.465).epsilon(1e-13));
    // p = 1 specializes to the q-integer 1 + q + q^2 = 1.75
    CHECK(pq_integer(3, PqParams(1.0, 0.5)) == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("specialization at p = 1 equals the q-integer sum") {
    Rng rng(7001);
    for (int rep = 0; rep < 50; ++rep) {
        const double q = rng.uniform(0.01, 0.999);
        const PqParams params(1.0, q);
        for (int n = 0; n <= 64; ++n) {
            double sum = 0.0, qpow = 1.0;  // 1 + q + ... + q^{n-1}
            for (int i = 0; i < n; ++i) {
                sum += qpow;
                qpow *= q;
            }
            CHECK(rel_err(pq_integer(n, params), sum) <= 1e-13);
        }
    }
}

TEST_CASE("q-integers are strictly increasing in n") {
    Rng rng(7002);
    for (int rep = 0; rep < 20; ++rep) {
        const double q = rng.uniform(0.05, 0.999);
        const PqParams params(1.0, q);
        double prev = pq_integer(0, params);
        double qpow = 1.0;  // q^n, the exact increment [n+1] - [n]
        for (int n = 1; n <= 64; ++n) {
            const double cur = pq_integer(n, params);
            // Strict growth while the increment is representable; never
            // a decrease once q^n drops below one ulp of the value.
            if (qpow > 8.0 * std::numeric_limits<double>::epsilon() * cur)
                CHECK(cur > prev);
            else
                CHECK(cur >= prev);
            qpow *= q;
            prev = cur;
        }
    }
}

TEST_CASE("pq_integer positivity and log consistency") {
    Rng rng(7003);
    for (int rep = 0; rep < 40; ++rep) {
        const PqParams params = rng.params();
        for (int n : {1, 2, 3, 5, 8, 13, 21, 34, 55, 64}) {
            const double value = pq_integer(n, params);
            CHECK(value > 0.0);
            CHECK(rel_err(value, std::exp(pq_integer_log(n, params))) <= 1e-12);
        }
    }
    CHECK(pq_integer_log(0, rng.params()) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("pq_factorial pinned values and overflow signaling") {
    CHECK(pq_factorial(0, PqParams(0.9, 0.8)) == 1.0);  // empty product
    CHECK(pq_factorial(2, PqParams(0.9, 0.8)) == doctest::Approx(1.7).epsilon(1e-13));
    CHECK(pq_factorial(3, PqParams(1.0, 0.5)) == doctest::Approx(2.625).epsilon(1e-13));
    CHECK_THROWS_AS(pq_factorial(400, PqParams(1.0, 0.9999)), std::overflow_error);
    // The log route stays finite where the plain product overflows.
    CHECK(std::isfinite(pq_factorial_log(400, PqParams(1.0, 0.9999))));
}

TEST_CASE("pq_binomial pinned values, domain errors, symmetry") {
    const PqParams a(0.9, 0.8);
    CHECK(pq_binomial(5, 0, a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pq_binomial(5, 5, a) == doctest::Approx(1.0).epsilon(1e-14));
    // [3 choose 1] = [3] = (0.729-0.512)/0.1 = 2.17
    CHECK(pq_binomial(3, 1, a) == doctest::Approx(2.17).epsilon(1e-13));
    CHECK_THROWS_AS(pq_binomial(4, -1, a), std::domain_error);
    CHECK_THROWS_AS(pq_binomial(4, 5, a), std::domain_error);

    Rng rng(7004);
    for (int rep = 0; rep < 25; ++rep) {
        const PqParams params = rng.params();
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        for (int k = 0; k <= n; ++k) {
            const double via_recurrence = pq_binomial(n, k, params);
            CHECK(via_recurrence > 0.0);
            CHECK(rel_err(via_recurrence, pq_binomial(n, n - k, params)) <= 1e-12);
            // Three-factorial route as the independent oracle.
            const double via_factorials =
                pq_factorial(n, params) /
                (pq_factorial(k, params) * pq_factorial(n - k, params));
            CHECK(rel_err(via_recurrence, via_factorials) <= 1e-12);
        }
    }
}

TEST_CASE("euler_weight_log pinned values and direct-product consistency") {
    const PqParams a(0.9, 0.8);
    CHECK(euler_weight_log(2, 1, a).log_value ==
          doctest::Approx(std::log(pq_integer(2, a))).epsilon(1e-13));
    CHECK(euler_weight_log(2, 0, a).log_value == doctest::Approx(std::log(0.9)).epsilon(1e-13));
    CHECK(euler_weight_log(2, 2, a).log_value == doctest::Approx(std::log(0.8)).epsilon(1e-13));

    Rng rng(7005);
    for (int rep = 0; rep < 25; ++rep) {
        const PqParams params = rng.params(0.5);
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        for (int k = 0; k <= n; ++k) {
            const double direct = std::pow(params.p(), (n - k) * (n - k - 1) / 2.0) *
                                  std::pow(params.q(), k * (k - 1) / 2.0) *
                                  (pq_factorial(n, params) /
                                   (pq_factorial(k, params) * pq_factorial(n - k, params)));
            CHECK(rel_err(euler_weight_log(n, k, params).value(), direct) <= 1e-12);
        }
    }
}

TEST_CASE("euler weight logs stay finite at extreme degrees") {
    const PqParams params(0.9, 0.5);
    for (int k : {0, 1, 1024, 2048, 4095, 4096})
        CHECK(std::isfinite(euler_weight_log(4096, k, params).log_value));
}

TEST_CASE("euler_product pinned values") {
    const PqParams a(0.9, 0.8);
    CHECK(euler_product(0, a, 3.7) == 1.0);  // empty product
    CHECK(euler_product(1, a, 0.0) == 1.0);  // p^0 + q^0 * 0
    CHECK(euler_product(2, a, 1.0) == doctest::Approx(3.4).epsilon(1e-14));
}

TEST_CASE("euler_sum pinned values and termwise example") {
    const PqParams a(0.9, 0.8);
    CHECK(euler_sum(0, a, 2.5) == 1.0);
    // Terms at n=2, x=1: p, [2], q = 0.9 + 1.7 + 0.8
    CHECK(euler_sum(2, a, 1.0) == doctest::Approx(3.4).epsilon(1e-13));
}

TEST_CASE("Euler identity: sum equals product") {
    Rng rng(7006);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = static_cast<int>(rng.uniform_int(1, 64));
        const double tol = n <= 32 ? 1e-12 : 1e-9;
        const double x = rng.uniform(0.0, 16.0);
        {
            // Full parameter range: compare in log domain.
            const PqParams params = rng.params();
            const double rel =
                std::abs(std::expm1(euler_sum_log(n, params, x) - euler_product_log(n, params, x)));
            CHECK(rel <= tol);
        }
        {
            // Parameters keeping the raw product inside normal range.
            const PqParams params = rng.params(0.76);
            const double prod = euler_product(n, params, x);
            CHECK(std::abs(euler_sum(n, params, x) - prod) <= tol * prod);
        }
    }
    // n = 12 against the product oracle, as a fixed spot check.
    Rng rng2(7007);
    for (int rep = 0; rep < 50; ++rep) {
        const PqParams params = rng2.params(0.76);
        const double x = rng2.uniform(0.0, 8.0);
        CHECK(rel_err(euler_sum(12, params, x), euler_product(12, params, x)) <= 1e-12);
    }
}

TEST_CASE("splitting identity residual") {
    Rng rng(7008);
    const PqParams fixed(0.95, 0.9);
    CHECK(split_identity_residual(7, 0, fixed) == 0.0);  // [0] = 0 and [n+1] - [n+1]
    CHECK(std::abs(split_identity_residual(5, 2, fixed)) <= 1e-13 * pq_integer(6, fixed));
    for (int rep = 0; rep < 60; ++rep) {
        const PqParams params = rng.params();
        const int n = static_cast<int>(rng.uniform_int(1, 64));
        const double scale = pq_integer(n + 1, params);
        for (int k = 0; k <= n; ++k)
            CHECK(std::abs(split_identity_residual(n, k, params)) <= 1e-12 * scale);
    }
}

TEST_CASE("binomial expansion: product and sum forms") {
    const PqParams a(0.9, 0.8);
    SUBCASE("n = 1 is a x + b y") {
        const PowerProductForms f = pq_power_product_forms(1, a, 2.0, 3.0, 0.5, 0.25);
        CHECK(f.product_form == doctest::Approx(2.0 * 0.5 + 3.0 * 0.25).epsilon(1e-14));
        CHECK(f.sum_form == doctest::Approx(f.product_form).epsilon(1e-13));
    }
    SUBCASE("vanishing first factor") {
        CHECK(pq_power_product(3, a, 1.0, -1.0, 1.0, 1.0) == 0.0);
    }
    SUBCASE("x-swapped Euler product mapping") {
        for (double x : {0.5, 1.0, 2.0, 5.0})
            for (int n : {1, 2, 5, 12, 32}) {
                const double lhs = pq_power_product(n, a, 1.0, 1.0, x, 1.0);
                const double rhs = std::pow(x, n) * euler_product(n, a, 1.0 / x);
                CHECK(rel_err(lhs, rhs) <= 1e-12);
            }
    }
    SUBCASE("forms agree against the term-magnitude scale") {
        Rng rng(7009);
        for (int rep = 0; rep < 100; ++rep) {
            const PqParams params = rng.params(0.5);
            const int n = static_cast<int>(rng.uniform_int(0, 16));
            const double aa = rng.uniform(-2.0, 2.0), bb = rng.uniform(-2.0, 2.0);
            const double x = rng.uniform(-2.0, 2.0), y = rng.uniform(-2.0, 2.0);
            const PowerProductForms f = pq_power_product_forms(n, params, aa, bb, x, y);
            double scale = 0.0;
            for (int k = 0; k <= n; ++k)
                scale += euler_weight_log(n, k, params).value() *
                         std::abs(std::pow(aa * x, n - k) * std::pow(bb * y, k));
            CHECK(std::abs(f.product_form - f.sum_form) <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_SUITE_END();
