#include "torlab/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace torlab {

namespace {

std::mutex rule_mutex;
std::map<int, GaussRule> rule_cache;

GaussRule make_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

double apply_rule(const GaussRule& r, const std::function<double(double)>& f, double a,
                  double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             double noise_per_len, int depth, const GaussRule& lo, const GaussRule& hi) {
    double q1 = apply_rule(lo, f, a, b);
    double q2 = apply_rule(hi, f, a, b);
    // refining below the roundoff/cancellation floor of the integrand only
    // grows the tree, never the accuracy; the floor scales with interval
    // length so the total noise budget stays bounded
    double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(q2) +
                   noise_per_len * (b - a);
    if (std::abs(q2 - q1) <= std::max(tol, floor) || depth <= 0) return q2;
    double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, noise_per_len, depth - 1, lo, hi) +
           adapt(f, mid, b, 0.5 * tol, noise_per_len, depth - 1, lo, hi);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: n must be >= 2");
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto it = rule_cache.find(n);
    if (it == rule_cache.end()) it = rule_cache.emplace(n, make_rule(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double noise_rel, int max_depth) {
    if (a == b) return 0.0;
    const GaussRule& lo = gauss_legendre(15);
    const GaussRule& hi = gauss_legendre(31);
    // L1 magnitude estimate sets the per-length cancellation floor
    double mag = 0.0;
    {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < hi.x.size(); ++i)
            mag += hi.w[i] * std::abs(f(mid + half * hi.x[i]));
        mag *= std::abs(half);
    }
    double noise_per_len = noise_rel * mag / std::abs(b - a);
    return adapt(f, a, b, tol, noise_per_len, max_depth, lo, hi);
}

double integrate_sqrt_endpoint(const std::function<double(double)>& g, double a, double b,
                               bool singular_at_left, double tol, double head_cut_rel,
                               double noise_rel) {
    if (b <= a) return 0.0;
    double len = b - a;
    double umax = std::sqrt(len);
    auto sub = singular_at_left
                   ? std::function<double(double)>([&g, a](double u) { return 2.0 * u * g(a + u * u); })
                   : std::function<double(double)>([&g, b](double u) { return 2.0 * u * g(b - u * u); });
    // the substituted integrand is even in u: the head [0, cut] uses a
    // two-point Gauss-Jacobi rule in u^2 (exact through u^6), whose nodes
    // sit at 0.34 cut and 0.86 cut, clear of the endpoint cancellation
    double cut = head_cut_rel * umax;
    const double s30 = std::sqrt(30.0);
    const double tau1 = (15.0 - 2.0 * s30) / 35.0, tau2 = (15.0 + 2.0 * s30) / 35.0;
    const double w1 = 1.0 + s30 / 18.0, w2 = 1.0 - s30 / 18.0;
    double head = 0.5 * cut *
                  (w1 * sub(cut * std::sqrt(tau1)) + w2 * sub(cut * std::sqrt(tau2)));
    return head + integrate(sub, cut, umax, tol, noise_rel);
}

double find_root(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw std::invalid_argument("find_root: no sign change on the bracket");
    // Illinois rule: the stale endpoint's value is halved when the same
    // side updates twice, which prevents false-position stagnation
    int side = 0;
    double m = 0.5 * (a + b);
    for (int it = 0; it < 300; ++it) {
        m = (a * fb - b * fa) / (fb - fa);
        double lo = std::min(a, b), hi = std::max(a, b);
        if (!std::isfinite(m) || !(m > lo && m < hi)) m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0 || std::abs(b - a) < tol * (1.0 + std::abs(m))) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = m;
            fb = fm;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return m;
}

}  // namespace torlab
