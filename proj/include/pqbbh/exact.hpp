#ifndef PQBBH_EXACT_HPP
#define PQBBH_EXACT_HPP

#include <gmpxx.h>

#include <functional>
#include <stdexcept>
#include <string>

namespace pqbbh::exact {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (GMP canonical form).
using Rational = mpq_class;

/// Canonicalized construction from an integer pair.  The raw
/// mpq_class(num, den) constructor does not reduce to lowest terms, and
/// GMP comparisons assume canonical operands.
Rational make_rational(long num, long den);

/// Exact mirror of PqParams: 0 < q < p <= 1 over the rationals.
class ExactParams {
public:
    ExactParams(Rational p, Rational q);

    const Rational& p() const { return p_; }
    const Rational& q() const { return q_; }

private:
    Rational p_;
    Rational q_;
};

/// Exact mirror of OperatorSpec.
struct ExactSpec {
    int n1;
    int n2;
    ExactParams par1;
    ExactParams par2;
};

using RationalFunction2 = std::function<Rational(const Rational&, const Rational&)>;

Rational rational_pow(const Rational& base, long exponent);

/// Exact (p^n - q^n)/(p - q); 0 for n = 0.
Rational exact_pq_integer(int n, const ExactParams& params);

Rational exact_pq_factorial(int n, const ExactParams& params);

Rational exact_pq_binomial(int n, int k, const ExactParams& params);

/// p^{(n-k)(n-k-1)/2} q^{k(k-1)/2} [n choose k]_{p,q}, exactly.
Rational exact_euler_weight(int n, int k, const ExactParams& params);

Rational exact_euler_product(int n, const ExactParams& params, const Rational& x);

Rational exact_euler_sum(int n, const ExactParams& params, const Rational& x);

/// Exact node p^{n-k+1}[k] / ([n-k+1] q^k).
Rational exact_node(int n, int k, const ExactParams& params);

/// Exact univariate (p,q)-BBH application of a rational-valued f.
Rational exact_apply(const std::function<Rational(const Rational&)>& f, int n,
                     const ExactParams& params, const Rational& x);

/// Exact bivariate (p,q)-BBH application (the double sum).
Rational exact_apply2(const RationalFunction2& f, const ExactSpec& spec,
                      const Rational& x, const Rational& y);

/// Exact closed-form moments for (i,j) in {(0,0),(1,0),(0,1),(2,0),(0,2)}.
Rational exact_moment_closed(const ExactSpec& spec, int i, int j,
                             const Rational& x, const Rational& y);

/// Exact brute-force moment via exact_apply2 with e_ij.
Rational exact_moment_direct(const ExactSpec& spec, int i, int j,
                             const Rational& x, const Rational& y);

/// The identities the exact oracle can certify.
enum class IdentityId {
    euler,    ///< Euler product/sum identity
    split,    ///< q^k [n-k+1] = [n+1] - p^{n-k+1} [k], all k
    moments,  ///< closed-form moments against the exact double sum
    tensor,   ///< tensor decomposition, both composition orders
};

IdentityId identity_from_string(const std::string& id);
std::string to_string(IdentityId id);

/// Outcome of one exact identity check.  On failure the witness carries
/// both exact sides as decimal-free rational strings.
struct ExactCheck {
    bool ok = true;
    std::string context;  ///< which sub-case failed (k, (i,j), order, ...)
    std::string lhs;
    std::string rhs;
};

// Degree limits: exact bivariate sums have O(n1*n2) rational terms with
// large numerators, so the oracle stays at desk scale.
inline constexpr int kMaxExactUnivariateDegree = 10;
inline constexpr int kMaxExactBivariateDegree = 6;

ExactCheck exact_euler_identity_check(int n, const ExactParams& params, const Rational& x);

ExactCheck exact_split_identity_check(int n, const ExactParams& params);

/// All five closed-form moment identities at one point.
ExactCheck exact_moment_check(const ExactSpec& spec, const Rational& x, const Rational& y);

/// Tensor decomposition for a rational test function, both orders.
ExactCheck exact_tensor_check(const ExactSpec& spec, const RationalFunction2& f,
                              const Rational& x, const Rational& y);

/// Dispatcher over IdentityId, enforcing the degree limits above.
/// Univariate identities use (spec.n1, spec.par1) and the point x.
ExactCheck exact_identity_check(IdentityId id, const ExactSpec& spec,
                                const Rational& x, const Rational& y);

}  // namespace pqbbh::exact

#endif
