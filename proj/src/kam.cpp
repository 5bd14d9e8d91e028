#include "torlab/kam.hpp"

#include <cmath>
#include <stdexcept>

namespace torlab {

KamCertificate evaluate_kam(const KamInput& in) {
    if (in.n < 2) throw std::invalid_argument("evaluate_kam: n must be >= 2");
    if (!(in.M > 0.0) || !(in.d > 0.0))
        throw std::invalid_argument("evaluate_kam: Hessian bounds must be positive");
    if (!(in.r > 0.0) || !(in.s > 0.0))
        throw std::invalid_argument("evaluate_kam: widths must be positive");
    if (!(in.tau > in.n - 1))
        throw std::invalid_argument("evaluate_kam: tau must exceed n - 1");
    if (in.eps0 < 0.0) throw std::invalid_argument("evaluate_kam: eps0 must be >= 0");

    KamCertificate c;
    c.mu = in.d / std::pow(in.M, in.n);
    if (c.mu > 1.0 + 1e-12)
        throw std::invalid_argument("evaluate_kam: mu = d/M^n exceeds 1, inconsistent input");
    c.mu = std::min(c.mu, 1.0);
    c.epsilon = in.eps0 / (in.M * in.r * in.r);
    double rhs = std::pow(c.mu, 8) * std::pow(in.s, 4.0 * in.tau + 8.0);
    c.condition_ratio = c.epsilon / rhs;
    c.condition_ok = c.condition_ratio <= in.c_kam;
    double s_pow = std::pow(in.s, 3.0 * in.tau + 6.0);
    c.alpha = in.M * in.r * std::sqrt(c.epsilon) / (c.mu * s_pow);
    c.r_hat = c.mu * c.mu * in.r;
    c.r_eps = std::sqrt(c.epsilon) * in.r / (in.c_kam * c.mu);
    c.C = std::pow(std::max(c.mu * c.mu * in.r, in.diamD), in.n) /
          (in.c_kam * std::pow(c.mu, in.n + 5) * s_pow);
    c.measure_bound = c.C * std::sqrt(c.epsilon);
    return c;
}

double budget_D0(double s, double eps, double a) {
    if (!(a > 0.0 && a < 1.0 / 6.0))
        throw std::invalid_argument("budget_D0: a must lie in (0, 1/6)");
    return std::exp(-s / (6.0 * std::pow(eps, a)));
}

double budget_total(double eps, double a, double r, double R, double s, double c2) {
    if (!(0.0 < r && r < R)) throw std::invalid_argument("budget_total: need 0 < r < R");
    if (!(c2 > 0.0)) throw std::invalid_argument("budget_total: c2 must be positive");
    double theta = std::exp(-c2 / std::pow(eps, a));
    return budget_D0(s, eps, a) + 2.0 * theta;
}

}  // namespace torlab
