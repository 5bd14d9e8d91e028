#ifndef TORLAB_GENERICITY_HPP
#define TORLAB_GENERICITY_HPP

#include <string>
#include <vector>

#include "torlab/fourier.hpp"

namespace torlab {

/// Mode-size threshold splitting the finitely many low generators (checked
/// through the profile conditions) from the high tail (checked through the
/// coefficient floor):  ceil( c * max{1, 1/s, (1/s) log(1/(s delta))} ).
int threshold_K(double s, double delta, double c_universal = 2.0);

enum class CheckStatus { pass, fail, inconclusive };

struct GenericityIssue {
    Mode gen;
    double margin = 0.0;    // signed distance to the failed condition
    std::string detail;
};

/// Outcome of the potential-class membership tests.  Empty failure lists
/// (and no inconclusive entries) mean the potential passed every examined
/// condition up to the cutoff.
struct GenericityReport {
    double s = 0.0;
    double delta = 0.0;
    int threshold = 0;      // generators with |k|_1 <= threshold get the
                            // profile checks, the rest the coefficient floor
    int kmax = 0;
    std::vector<GenericityIssue> p1_failures;
    std::vector<GenericityIssue> p2_failures;
    std::vector<GenericityIssue> p3_failures;
    std::vector<GenericityIssue> inconclusive;
    double p1_worst_margin = 0.0;  // min over examined generators

    bool passed() const {
        return p1_failures.empty() && p2_failures.empty() && p3_failures.empty() &&
               inconclusive.empty();
    }
    CheckStatus status() const {
        if (!p1_failures.empty() || !p2_failures.empty() || !p3_failures.empty())
            return CheckStatus::fail;
        return inconclusive.empty() ? CheckStatus::pass : CheckStatus::inconclusive;
    }
};

struct GenericityOptions {
    double c_universal = 2.0;
    int grid_points = 4096;      // uniform theta grid for the profile checks
    double polish_tol = 1e-12;   // Newton tolerance for critical points
};

/// Coefficient floor |f_k| >= delta |k|_1^{-2} e^{-|k|_1 s} on generators
/// with threshold < |k|_1 <= kmax.  Margin is |f_k| - floor.
GenericityReport check_P1(const FourierSeries2& f, double s, double delta, int kmax,
                          const GenericityOptions& opt = {});

/// min over theta of |F'| + |F''| > 0 on generators with |k|_1 <= threshold,
/// certified from the grid minimum and a Lipschitz bound on |F''| + |F'''|.
/// Grid minima that cannot be separated from zero are reported inconclusive.
GenericityReport check_P2(const FourierSeries2& f, double s, double delta,
                          const GenericityOptions& opt = {});

/// Distinctness of the critical values of each low profile: the critical
/// points of F are located by sign changes of F' plus Newton polish, and the
/// values compared pairwise.
GenericityReport check_P3(const FourierSeries2& f, double s, double delta,
                          const GenericityOptions& opt = {});

/// All three checks merged into one report.
GenericityReport check_class_membership(const FourierSeries2& f, double delta, int kmax,
                                        const GenericityOptions& opt = {});

/// Critical points of a profile (polished roots of F'), ascending in theta.
std::vector<double> profile_critical_points(const OneDimProfile& F, int grid_points,
                                            double polish_tol);

}  // namespace torlab

#endif
