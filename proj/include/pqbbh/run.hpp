#ifndef PQBBH_RUN_HPP
#define PQBBH_RUN_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqbbh {

/// Thrown when a RunConfig violates a module constraint; the message
/// names the violated constraint.  Raised before any computation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fully reproducible experiment record: one of these (plus the binary
/// version) determines every output byte.
struct RunConfig {
    std::string command;  // verify | moments | converge | rate

    int n = 16;                  // degree, n1 = n2 = n unless overridden
    std::optional<int> n1, n2;   // per-axis degrees (config file only)
    std::vector<int> n_list = {8, 16, 32, 64, 128};

    std::string schedule = "default";        // default | invsq
    std::optional<double> p1, q1, p2, q2;    // per-axis parameter overrides

    int grid_points = 33;
    double t_max = 0.96;

    std::vector<std::string> funcs;  // corpus names; command-specific default

    bool lipschitz = false;  // rate: use the Lipschitz-class bound
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double M = 2.0;
    std::string E = "all";  // "all" or comma-separated lo:hi intervals

    double gamma1 = 0.0, gamma2 = 0.0;
    double beta1 = 0.0, beta2 = 0.0;

    std::string out;  // output path; empty selects "<command>.csv"/"verify.json"
    std::uint64_t seed = 20160901;
    bool surfaces = false;
    int threads = 1;

    long exact_trials = 500;
    long float_draws = 200;
    bool inject_split_sign_flip = false;  // test-harness hook for cmd_verify
};

/// Validates every numeric field against the constraints of the modules
/// it feeds; throws ConfigError naming the violated constraint.
void validate(const RunConfig& config);

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyViolation = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitIoError = 3;

int run_verify(const RunConfig& config);
int run_moments(const RunConfig& config);
int run_converge(const RunConfig& config);
int run_rate(const RunConfig& config);

/// Validates, dispatches on config.command, and maps exceptions onto the
/// exit codes above (messages go to stderr).
int run_command(const RunConfig& config);

}  // namespace pqbbh

#endif
