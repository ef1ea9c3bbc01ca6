// Acceptance suite: every release-gating property of the library, one
// pass/fail line each.  Run with no arguments for the full gate, or
// --criterion N for a single one; --cli PATH points at the command-line
// binary for the determinism check.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pqbbh/analysis.hpp"
#include "pqbbh/bbh_bivariate.hpp"
#include "pqbbh/verify.hpp"

using namespace pqbbh;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

std::string cli_path;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string describe(const std::vector<IdentityReport>& reports) {
    std::ostringstream os;
    for (const IdentityReport& r : reports) {
        os << r.identity << ": trials=" << r.trials << " failures=" << r.failures;
        if (r.max_residual > 0.0) os << " max_residual=" << r.max_residual;
        if (!r.witness.empty()) os << " [" << r.witness << "]";
        os << "; ";
    }
    return os.str();
}

bool exact_identity_suite(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    ExactSuiteOptions opts;
    opts.trials = 500;
    const auto reports = run_exact_identity_suite(opts);
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << describe(reports) << "elapsed=" << elapsed << "s";
    detail = os.str();
    return all_clean(reports) && elapsed <= 60.0;
}

bool float_identity_suite(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    FloatSuiteOptions opts;
    opts.draws = 200;
    const auto reports = run_float_identity_suite(opts);
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << describe(reports) << "elapsed=" << elapsed << "s";
    detail = os.str();
    return all_clean(reports) && elapsed <= 120.0;
}

std::vector<OperatorSpec> tested_specs() {
    std::vector<OperatorSpec> specs;
    for (int n : {4, 8, 16, 32}) {
        const PqParams params = default_schedule(n);
        specs.emplace_back(n, n, params, params);
    }
    const ParamSchedule invsq = ParamSchedule::inverse_square();
    for (int n : {8, 16}) specs.emplace_back(n, n, invsq.at(n), invsq.at(n));
    specs.emplace_back(8, 16, PqParams(0.9, 0.8), PqParams(0.95, 0.9));
    return specs;
}

bool partition_of_unity(std::string& detail) {
    const Grid2D grid = Grid2D::uniform();
    const ScalarFunction2 one = [](double, double) { return 1.0; };
    double worst = 0.0;
    for (const OperatorSpec& spec : tested_specs()) {
        const auto values = apply2_on_grid(spec, one, grid);
        for (const auto& row : values)
            for (double v : row) worst = std::max(worst, std::abs(v - 1.0));
    }
    std::ostringstream os;
    os << "max |L(e00) - 1| = " << worst << " over " << tested_specs().size()
       << " specs on the 33x33 grid";
    detail = os.str();
    return worst <= 1e-12;
}

bool tensor_decomposition(std::string& detail) {
    const Grid2D grid = Grid2D::uniform();
    double worst = 0.0;
    for (int n : {4, 8, 16}) {
        const PqParams params = default_schedule(n);
        const OperatorSpec spec(n, n, params, params);
        for (const CorpusFunction& cf : corpus()) {
            const auto direct = apply2_on_grid(spec, cf.f, grid);
            for (size_t ix = 0; ix < grid.x1.size(); ++ix)
                for (size_t iy = 0; iy < grid.x2.size(); ++iy) {
                    const double x = grid.x1[ix], y = grid.x2[iy];
                    const double base = direct[ix][iy];
                    const double scale = std::max(1.0, std::abs(base));
                    for (ComposeOrder order :
                         {ComposeOrder::x_then_y, ComposeOrder::y_then_x}) {
                        const double composed = apply2_composed(cf.f, spec, x, y, order);
                        worst = std::max(worst, std::abs(composed - base) / scale);
                    }
                }
        }
    }
    std::ostringstream os;
    os << "max order discrepancy = " << worst
       << " over 8 corpus functions, n in {4,8,16}, 33x33 grid";
    detail = os.str();
    return worst <= 1e-12;
}

bool korovkin_decay(std::string& detail) {
    const Grid2D grid = Grid2D::uniform();
    const std::vector<int> n_list = {8, 16, 32, 64, 128};
    const auto rows = korovkin_suite(ParamSchedule::default_schedule(), n_list, grid);
    bool ok = true;
    std::ostringstream os;
    for (const std::string& func : {"e10", "e01", "e20", "e02"}) {
        double prev = 1e300;
        for (const KorovkinRow& row : rows)
            if (row.func == func) {
                if (!(row.sup_err < prev)) {
                    ok = false;
                    os << func << " not decreasing at n=" << row.n << "; ";
                }
                prev = row.sup_err;
            }
    }
    double worst_gap = 0.0;
    double e10_at_128 = 1.0;
    for (const KorovkinRow& row : rows) {
        if (row.func != "e10") continue;
        const PqParams params = default_schedule(row.n);
        const double closed = std::abs(params.p() * pq_integer(row.n, params) /
                                           pq_integer(row.n + 1, params) -
                                       1.0) *
                              0.96;
        worst_gap = std::max(worst_gap, std::abs(row.sup_err - closed));
        if (row.n == 128) e10_at_128 = row.sup_err;
    }
    if (worst_gap > 1e-10) {
        ok = false;
        os << "e10 closed-form gap " << worst_gap << "; ";
    }
    if (!(e10_at_128 < 0.01)) {
        ok = false;
        os << "e10 at n=128 is " << e10_at_128 << " >= 0.01; ";
    }
    os << "e10(n=128)=" << e10_at_128 << ", closed-form gap=" << worst_gap;
    detail = os.str();
    return ok;
}

bool modulus_rate_bound(std::string& detail) {
    const Grid2D grid = Grid2D::uniform();
    long violations = 0;
    double worst = -1e300;
    for (int n : {8, 16, 32}) {
        const PqParams params = default_schedule(n);
        const OperatorSpec spec(n, n, params, params);
        for (const CorpusFunction& cf : corpus()) {
            const RateReport report = rate_bound_check(cf, spec, grid);
            violations += report.violations;
            worst = std::max(worst, report.max_violation);
        }
    }
    std::ostringstream os;
    os << "violations=" << violations << ", max(lhs - bound)=" << worst;
    detail = os.str();
    return violations == 0;
}

bool lipschitz_rate_bounds(std::string& detail) {
    const Grid2D grid = Grid2D::uniform();
    const CorpusFunction& cf = corpus_function("f_sum_ratios");
    std::ostringstream os;
    bool ok = true;
    for (const auto& [label, set] :
         std::vector<std::pair<std::string, IntervalUnion>>{
             {"E=[0,inf)", IntervalUnion::semiaxis()},
             {"E=[1,2]", IntervalUnion({Interval{1.0, 2.0}})}}) {
        const LipschitzParams lip{1.0, 1.0, 2.0, set};
        for (int n : {8, 16, 32}) {
            const PqParams params = default_schedule(n);
            const OperatorSpec spec(n, n, params, params);
            try {
                const LipschitzReport report = lipschitz_bound_check(cf.f, lip, spec, grid);
                if (report.violations != 0) {
                    ok = false;
                    os << label << " n=" << n << ": violations=" << report.violations
                       << " max(lhs-bound)=" << report.max_violation << "; ";
                }
            } catch (const LipschitzMembershipError& e) {
                ok = false;
                os << label << " n=" << n << ": membership pre-check failed [" << e.what()
                   << "]; ";
                LipschitzOptions skip;
                skip.check_membership = false;
                const LipschitzReport report =
                    lipschitz_bound_check(cf.f, lip, spec, grid, skip);
                os << "bound itself: violations=" << report.violations
                   << " max(lhs-bound)=" << report.max_violation << "; ";
            }
        }
    }
    if (ok) os << "zero violations for f_sum_ratios, both sets, n in {8,16,32}";
    detail = os.str();
    return ok;
}

bool generalized_operators(std::string& detail) {
    const Grid2D grid = Grid2D::uniform();
    std::ostringstream os;
    bool ok = true;

    // Zero-shift reduction against the plain operator.
    double worst_reduction = 0.0;
    for (int n : {4, 8, 16}) {
        const PqParams params = default_schedule(n);
        const OperatorSpec spec(n, n, params, params);
        const GeneralizedSpec gspec(spec, 0.0, 0.0, 0.0, 0.0);
        for (const CorpusFunction& cf : corpus()) {
            const auto plain = apply2_on_grid(spec, cf.f, grid);
            const auto shifted = apply2_on_grid(gspec, cf.f, grid);
            for (size_t ix = 0; ix < grid.x1.size(); ++ix)
                for (size_t iy = 0; iy < grid.x2.size(); ++iy)
                    worst_reduction = std::max(
                        worst_reduction,
                        std::abs(plain[ix][iy] - shifted[ix][iy]) /
                            std::max(1.0, std::abs(plain[ix][iy])));
        }
    }
    if (worst_reduction > 1e-12) {
        ok = false;
        os << "zero-shift reduction off by " << worst_reduction << "; ";
    }

    // b-rule consistency for beta in {0, 1, 2} up to n = 64.
    const ParamSchedule schedule = ParamSchedule::default_schedule();
    std::vector<int> all_n;
    for (int n = 1; n <= 64; ++n) all_n.push_back(n);
    double worst_cn = 0.0;
    for (double beta : {0.0, 1.0, 2.0}) {
        const CnReport report =
            c_n_consistency(beta, [&](int n) { return schedule.at(n); }, all_n);
        worst_cn = std::max(worst_cn, report.max_relative_residual);
    }
    if (worst_cn > 1e-12) {
        ok = false;
        os << "c_n residual " << worst_cn << " exceeds 1e-12; ";
    }

    // The three bound components decay over {8, 16, 32} at gamma = beta = 1.
    const LipschitzParams lip{1.0, 1.0, 2.0, IntervalUnion::semiaxis()};
    const auto components =
        generalized_rate_components(1.0, 1.0, 1.0, 1.0, lip, schedule, {8, 16, 32}, grid);
    for (int c = 0; c < 3; ++c) {
        double prev = 1e300;
        for (const GeneralizedComponentsRow& row : components.rows) {
            const double v = c == 0 ? row.comp1 : c == 1 ? row.comp2 : row.comp3;
            if (!(v < prev)) {
                ok = false;
                os << "component " << (c + 1) << " not decreasing at n=" << row.n << "; ";
            }
            prev = v;
        }
    }

    os << "reduction gap=" << worst_reduction << ", max c_n residual=" << worst_cn;
    detail = os.str();
    return ok;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool deterministic_output(std::string& detail) {
    if (cli_path.empty()) {
        detail = "no --cli path given";
        return false;
    }
    const fs::path dir = fs::temp_directory_path() / "pqbbh_acceptance";
    fs::create_directories(dir);
    const fs::path a = dir / "conv_a.csv", b = dir / "conv_b.csv", c = dir / "conv_c.csv";
    auto run = [&](const fs::path& out, int threads) {
        std::ostringstream cmd;
        cmd << '"' << cli_path << '"'
            << " converge --n-list 8,16 --grid 17 --seed 4242 --threads " << threads
            << " --out " << '"' << out.string() << '"';
        return std::system(cmd.str().c_str());
    };
    if (run(a, 1) != 0 || run(b, 1) != 0 || run(c, 8) != 0) {
        detail = "cli invocation failed";
        return false;
    }
    const std::string sa = read_file(a), sb = read_file(b), sc = read_file(c);
    const bool repeat_ok = !sa.empty() && sa == sb;
    const bool threads_ok = sa == sc;
    std::ostringstream os;
    os << "bytes=" << sa.size() << ", repeat run identical=" << (repeat_ok ? "yes" : "no")
       << ", 1-thread vs 8-thread identical=" << (threads_ok ? "yes" : "no");
    detail = os.str();
    return repeat_ok && threads_ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
        if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
    }

    const std::vector<Criterion> criteria = {
        {1, "exact identity suite (zero tolerance, 500 inputs each)", exact_identity_suite},
        {2, "floating-point identity suite (1e-12/1e-9)", float_identity_suite},
        {3, "partition of unity on the default grid", partition_of_unity},
        {4, "tensor decomposition, both orders", tensor_decomposition},
        {5, "korovkin decay along the default schedule", korovkin_decay},
        {6, "modulus rate bound with square-root arguments", modulus_rate_bound},
        {7, "lipschitz-class rate bounds", lipschitz_rate_bounds},
        {8, "generalized operators", generalized_operators},
        {9, "deterministic CSV output", deterministic_output},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << criterion.id << ": "
                  << criterion.name << " (" << detail << ")" << std::endl;
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
