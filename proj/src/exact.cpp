#include "pqbbh/exact.hpp"

#include <vector>

namespace pqbbh::exact {

namespace {

Rational ratio_t(const Rational& x) { return x / (1 + x); }

std::string str(const Rational& r) { return r.get_str(); }

ExactCheck fail(std::string context, const Rational& lhs, const Rational& rhs) {
    return ExactCheck{false, std::move(context), str(lhs), str(rhs)};
}

void require_degree(int n, int limit, const char* who) {
    if (n < 0 || n > limit)
        throw std::domain_error(std::string(who) + ": degree out of range [0, " +
                                std::to_string(limit) + "]");
}

}  // namespace

Rational make_rational(long num, long den) {
    if (den == 0) throw std::domain_error("make_rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

ExactParams::ExactParams(Rational p, Rational q) : p_(std::move(p)), q_(std::move(q)) {
    p_.canonicalize();
    q_.canonicalize();
    if (!(q_ > 0)) throw std::invalid_argument("ExactParams: requires q > 0");
    if (!(q_ < p_)) throw std::invalid_argument("ExactParams: requires q < p (strictly)");
    if (!(p_ <= 1)) throw std::invalid_argument("ExactParams: requires p <= 1");
}

Rational rational_pow(const Rational& base, long exponent) {
    if (exponent < 0) throw std::domain_error("rational_pow: negative exponent");
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    out.canonicalize();
    return out;
}

Rational exact_pq_integer(int n, const ExactParams& params) {
    if (n < 0) throw std::domain_error("exact_pq_integer: n must be >= 0");
    if (n == 0) return Rational(0);
    return (rational_pow(params.p(), n) - rational_pow(params.q(), n)) /
           (params.p() - params.q());
}

Rational exact_pq_factorial(int n, const ExactParams& params) {
    Rational acc(1);
    for (int j = 1; j <= n; ++j) acc *= exact_pq_integer(j, params);
    return acc;
}

Rational exact_pq_binomial(int n, int k, const ExactParams& params) {
    if (k < 0 || k > n) throw std::domain_error("exact_pq_binomial: requires 0 <= k <= n");
    return exact_pq_factorial(n, params) /
           (exact_pq_factorial(k, params) * exact_pq_factorial(n - k, params));
}

Rational exact_euler_weight(int n, int k, const ExactParams& params) {
    const long ep = static_cast<long>(n - k) * (n - k - 1) / 2;
    const long eq = static_cast<long>(k) * (k - 1) / 2;
    return rational_pow(params.p(), ep) * rational_pow(params.q(), eq) *
           exact_pq_binomial(n, k, params);
}

Rational exact_euler_product(int n, const ExactParams& params, const Rational& x) {
    Rational acc(1);
    for (int s = 0; s < n; ++s)
        acc *= rational_pow(params.p(), s) + rational_pow(params.q(), s) * x;
    return acc;
}

Rational exact_euler_sum(int n, const ExactParams& params, const Rational& x) {
    Rational acc(0);
    for (int k = 0; k <= n; ++k)
        acc += exact_euler_weight(n, k, params) * rational_pow(x, k);
    return acc;
}

Rational exact_node(int n, int k, const ExactParams& params) {
    if (k < 0 || k > n) throw std::domain_error("exact_node: requires 0 <= k <= n");
    if (k == 0) return Rational(0);
    return rational_pow(params.p(), n - k + 1) * exact_pq_integer(k, params) /
           (exact_pq_integer(n - k + 1, params) * rational_pow(params.q(), k));
}

Rational exact_apply(const std::function<Rational(const Rational&)>& f, int n,
                     const ExactParams& params, const Rational& x) {
    Rational acc(0);
    for (int k = 0; k <= n; ++k)
        acc += f(exact_node(n, k, params)) * exact_euler_weight(n, k, params) *
               rational_pow(x, k);
    return acc / exact_euler_product(n, params, x);
}

Rational exact_apply2(const RationalFunction2& f, const ExactSpec& spec,
                      const Rational& x, const Rational& y) {
    std::vector<Rational> nodes1, nodes2, w1, w2;
    for (int k = 0; k <= spec.n1; ++k) {
        nodes1.push_back(exact_node(spec.n1, k, spec.par1));
        w1.push_back(exact_euler_weight(spec.n1, k, spec.par1) * rational_pow(x, k));
    }
    for (int k = 0; k <= spec.n2; ++k) {
        nodes2.push_back(exact_node(spec.n2, k, spec.par2));
        w2.push_back(exact_euler_weight(spec.n2, k, spec.par2) * rational_pow(y, k));
    }
    Rational acc(0);
    for (int k1 = 0; k1 <= spec.n1; ++k1)
        for (int k2 = 0; k2 <= spec.n2; ++k2)
            acc += f(nodes1[static_cast<size_t>(k1)], nodes2[static_cast<size_t>(k2)]) *
                   w1[static_cast<size_t>(k1)] * w2[static_cast<size_t>(k2)];
    return acc / (exact_euler_product(spec.n1, spec.par1, x) *
                  exact_euler_product(spec.n2, spec.par2, y));
}

namespace {

Rational exact_axis_moment_closed(int i, int n, const ExactParams& params, const Rational& x) {
    if (i == 0) return Rational(1);
    const Rational nn = exact_pq_integer(n, params);
    const Rational nn1 = exact_pq_integer(n + 1, params);
    if (i == 1) return params.p() * nn / nn1 * ratio_t(x);
    const Rational nm1 = exact_pq_integer(n - 1, params);
    const Rational lead =
        params.p() * params.p() * params.q() * params.q() * nn * nm1 / (nn1 * nn1);
    const Rational tail = rational_pow(params.p(), n + 1) * nn / (nn1 * nn1);
    return lead * x * x / ((1 + x) * (params.p() + params.q() * x)) + tail * ratio_t(x);
}

}  // namespace

Rational exact_moment_closed(const ExactSpec& spec, int i, int j,
                             const Rational& x, const Rational& y) {
    const bool supported = (i == 0 && j == 0) || (i == 1 && j == 0) || (i == 0 && j == 1) ||
                           (i == 2 && j == 0) || (i == 0 && j == 2);
    if (!supported)
        throw std::domain_error("exact_moment_closed: unsupported (i,j)");
    if (i > 0) return exact_axis_moment_closed(i, spec.n1, spec.par1, x);
    if (j > 0) return exact_axis_moment_closed(j, spec.n2, spec.par2, y);
    return Rational(1);
}

Rational exact_moment_direct(const ExactSpec& spec, int i, int j,
                             const Rational& x, const Rational& y) {
    // Explicit return type: gmpxx expressions must materialize before
    // their operand temporaries go out of scope.
    return exact_apply2(
        [i, j](const Rational& u, const Rational& v) -> Rational {
            return rational_pow(ratio_t(u), i) * rational_pow(ratio_t(v), j);
        },
        spec, x, y);
}

IdentityId identity_from_string(const std::string& id) {
    if (id == "euler") return IdentityId::euler;
    if (id == "split") return IdentityId::split;
    if (id == "moments") return IdentityId::moments;
    if (id == "tensor") return IdentityId::tensor;
    throw std::domain_error("unknown identity id: " + id);
}

std::string to_string(IdentityId id) {
    switch (id) {
        case IdentityId::euler: return "euler";
        case IdentityId::split: return "split";
        case IdentityId::moments: return "moments";
        case IdentityId::tensor: return "tensor";
    }
    return "?";
}

ExactCheck exact_euler_identity_check(int n, const ExactParams& params, const Rational& x) {
    require_degree(n, kMaxExactUnivariateDegree, "exact_euler_identity_check");
    const Rational lhs = exact_euler_sum(n, params, x);
    const Rational rhs = exact_euler_product(n, params, x);
    if (lhs != rhs) return fail("n=" + std::to_string(n), lhs, rhs);
    return ExactCheck{true, "", str(lhs), str(rhs)};
}

ExactCheck exact_split_identity_check(int n, const ExactParams& params) {
    require_degree(n, kMaxExactUnivariateDegree, "exact_split_identity_check");
    for (int k = 0; k <= n; ++k) {
        const Rational lhs = rational_pow(params.q(), k) * exact_pq_integer(n - k + 1, params);
        const Rational rhs = exact_pq_integer(n + 1, params) -
                             rational_pow(params.p(), n - k + 1) * exact_pq_integer(k, params);
        if (lhs != rhs) return fail("n=" + std::to_string(n) + ", k=" + std::to_string(k), lhs, rhs);
    }
    return ExactCheck{};
}

ExactCheck exact_moment_check(const ExactSpec& spec, const Rational& x, const Rational& y) {
    require_degree(spec.n1, kMaxExactBivariateDegree, "exact_moment_check");
    require_degree(spec.n2, kMaxExactBivariateDegree, "exact_moment_check");
    constexpr int pairs[5][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}};
    for (const auto& ij : pairs) {
        const Rational closed = exact_moment_closed(spec, ij[0], ij[1], x, y);
        const Rational direct = exact_moment_direct(spec, ij[0], ij[1], x, y);
        if (closed != direct)
            return fail("(i,j)=(" + std::to_string(ij[0]) + "," + std::to_string(ij[1]) + ")",
                        closed, direct);
    }
    return ExactCheck{};
}

ExactCheck exact_tensor_check(const ExactSpec& spec, const RationalFunction2& f,
                              const Rational& x, const Rational& y) {
    require_degree(spec.n1, kMaxExactBivariateDegree, "exact_tensor_check");
    require_degree(spec.n2, kMaxExactBivariateDegree, "exact_tensor_check");
    const Rational direct = exact_apply2(f, spec, x, y);
    const Rational x_first = exact_apply(
        [&](const Rational& u) {
            return exact_apply([&](const Rational& v) { return f(u, v); }, spec.n2, spec.par2, y);
        },
        spec.n1, spec.par1, x);
    if (x_first != direct) return fail("x_then_y", x_first, direct);
    const Rational y_first = exact_apply(
        [&](const Rational& v) {
            return exact_apply([&](const Rational& u) { return f(u, v); }, spec.n1, spec.par1, x);
        },
        spec.n2, spec.par2, y);
    if (y_first != direct) return fail("y_then_x", y_first, direct);
    return ExactCheck{};
}

ExactCheck exact_identity_check(IdentityId id, const ExactSpec& spec,
                                const Rational& x, const Rational& y) {
    switch (id) {
        case IdentityId::euler:
            return exact_euler_identity_check(spec.n1, spec.par1, x);
        case IdentityId::split:
            return exact_split_identity_check(spec.n1, spec.par1);
        case IdentityId::moments:
            return exact_moment_check(spec, x, y);
        case IdentityId::tensor:
            // e11 plus a non-separable rational function exercise both
            // the product structure and genuine mixing.
            if (ExactCheck c = exact_tensor_check(
                    spec,
                    [](const Rational& u, const Rational& v) -> Rational {
                        return ratio_t(u) * ratio_t(v);
                    },
                    x, y);
                !c.ok)
                return c;
            return exact_tensor_check(
                spec,
                [](const Rational& u, const Rational& v) -> Rational {
                    return (1 + 2 * u + 3 * v) / ((1 + u) * (1 + v));
                },
                x, y);
    }
    throw std::domain_error("exact_identity_check: unknown identity id");
}

}  // namespace pqbbh::exact
