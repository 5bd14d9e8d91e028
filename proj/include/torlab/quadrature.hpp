#ifndef TORLAB_QUADRATURE_HPP
#define TORLAB_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace torlab {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

/// Gauss-Legendre rule of order n (nodes by Newton iteration, cached).
const GaussRule& gauss_legendre(int n);

/// Adaptive quadrature with a nested G15/G31 error estimate and interval
/// bisection.  tol is an absolute tolerance for the whole interval.
/// noise_rel is the assumed relative noise level of the integrand values;
/// refinement stops once interval estimates disagree below that floor.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double noise_rel = 1e-13, int max_depth = 52);

/// Integral of g over [a,b] where g vanishes like sqrt(distance) (or
/// diverges like 1/sqrt) at the `left` (or right) endpoint: the square-root
/// substitution restores a smooth integrand.  The first head_cut_rel
/// fraction of the substituted variable is handled by a fixed rule exact
/// for even integrands through u^6, keeping evaluations away from the
/// endpoint cancellation zone.
double integrate_sqrt_endpoint(const std::function<double(double)>& g, double a, double b,
                               bool singular_at_left, double tol,
                               double head_cut_rel = 1e-4, double noise_rel = 1e-13);

/// Bracketed root of a continuous function: bisection with a secant
/// speedup.  Requires a sign change on [a,b].
double find_root(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-14);

}  // namespace torlab

#endif
