#ifndef TORLAB_KAM_HPP
#define TORLAB_KAM_HPP

namespace torlab {

/// Inputs of the quantitative KAM smallness test for H = h(y) + f(y,x):
/// Hessian bounds of h, sup of the perturbation, analyticity widths, the
/// Diophantine exponent and the domain diameter.
struct KamInput {
    int n = 2;              // degrees of freedom
    double M = 0.0;         // sup |h_yy|
    double d = 0.0;         // inf |det h_yy|
    double eps0 = 0.0;      // sup |f|
    double r = 0.0;         // action width
    double s = 0.0;         // angle width
    double tau = 1.5;       // Diophantine exponent, tau > n - 1
    double diamD = 0.0;     // diameter of the action domain
    double c_kam = 1e-3;    // the theorem constant; a placeholder, see below
};

/// Derived scales and the measure bound.  c_kam is not pinned by theory,
/// so `condition_ratio` = epsilon / (mu^8 s^{4 tau + 8}) is reported and
/// any preferred constant can be applied after the fact.
struct KamCertificate {
    double epsilon = 0.0;          // eps0 / (M r^2)
    double mu = 0.0;               // d / M^n
    double condition_ratio = 0.0;  // epsilon / (mu^8 s^{4 tau + 8})
    bool condition_ok = false;     // condition_ratio <= c_kam
    double alpha = 0.0;            // Diophantine threshold of surviving tori
    double r_hat = 0.0;            // domain shrink mu^2 r
    double r_eps = 0.0;            // graph distance scale
    double C = 0.0;                // measure constant
    double measure_bound = 0.0;    // C sqrt(epsilon)
};

/// Evaluates the certificate.  Throws on inconsistent input (mu > 1,
/// nonpositive widths, tau <= n-1).
KamCertificate evaluate_kam(const KamInput& in);

/// Relative non-torus budget of the fully non-resonant region,
/// exp(-s / (6 eps^a)).  Requires 0 < a < 1/6.
double budget_D0(double s, double eps, double a);

/// Combined relative budget: the non-resonant piece plus twice the
/// per-resonance admissibility scale theta = exp(-c2 / eps^a).
double budget_total(double eps, double a, double r, double R, double s, double c2);

}  // namespace torlab

#endif
