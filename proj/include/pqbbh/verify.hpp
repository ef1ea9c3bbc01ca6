#ifndef PQBBH_VERIFY_HPP
#define PQBBH_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace pqbbh {

/// Summary of one identity's run inside a verification suite.
struct IdentityReport {
    std::string identity;
    long trials = 0;
    long failures = 0;
    double max_residual = 0.0;  ///< max relative residual seen (0 for exact runs)
    std::string witness;        ///< first failing case, empty when clean
    double seconds = 0.0;
};

struct ExactSuiteOptions {
    std::uint64_t seed = 20160901;
    long trials = 500;                 ///< pseudo-random inputs per identity
    int max_univariate_degree = 10;
    int max_bivariate_degree = 6;
};

/// Zero-tolerance identity suite over pseudo-random rational inputs:
/// Euler product/sum, the [n+1] splitting identity, the five closed-form
/// moments, and the tensor decomposition.
std::vector<IdentityReport> run_exact_identity_suite(const ExactSuiteOptions& opts);

struct FloatSuiteOptions {
    std::uint64_t seed = 20160901;
    long draws = 200;              ///< random draws per identity
    int max_univariate_degree = 64;
    int max_bivariate_degree = 32;
    /// Test-harness hook: evaluates the splitting identity with a wrong
    /// sign so the suite must fail with a witness.
    bool inject_split_sign_flip = false;
};

/// Floating-point identity suite; relative tolerance 1e-12 for degrees
/// <= 32 and 1e-9 beyond, exhaustive k sweeps where an identity is
/// k-indexed.
std::vector<IdentityReport> run_float_identity_suite(const FloatSuiteOptions& opts);

/// True iff no identity in the report list failed.
bool all_clean(const std::vector<IdentityReport>& reports);

}  // namespace pqbbh

#endif
