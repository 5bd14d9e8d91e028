#include "torlab/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torlab {

int threshold_K(double s, double delta, double c_universal) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("threshold_K: delta must lie in (0, 1]");
    if (!(s > 0.0)) throw std::invalid_argument("threshold_K: s must be positive");
    if (!(c_universal > 1.0)) throw std::invalid_argument("threshold_K: c must exceed 1");
    double m = std::max({1.0, 1.0 / s, std::log(1.0 / (s * delta)) / s});
    return int(std::ceil(c_universal * m));
}

GenericityReport check_P1(const FourierSeries2& f, double s, double delta, int kmax,
                          const GenericityOptions& opt) {
    GenericityReport rep;
    rep.s = s;
    rep.delta = delta;
    rep.kmax = kmax;
    rep.threshold = threshold_K(s, delta, opt.c_universal);
    rep.p1_worst_margin = std::numeric_limits<double>::infinity();
    for (const Mode& k : enumerate_generators(kmax)) {
        if (k.norm1() <= rep.threshold) continue;
        double margin = std::abs(f.coeff(k)) - p1_floor(k.norm1(), s, delta);
        rep.p1_worst_margin = std::min(rep.p1_worst_margin, margin);
        if (margin < 0.0) rep.p1_failures.push_back({k, margin, "coefficient below floor"});
    }
    if (!std::isfinite(rep.p1_worst_margin)) rep.p1_worst_margin = 0.0;
    return rep;
}

std::vector<double> profile_critical_points(const OneDimProfile& F, int n,
                                            double polish_tol) {
    std::vector<double> roots;
    if (F.empty()) return roots;
    const double h = 2.0 * M_PI / n;
    std::vector<double> d1 = F.sample(n, 1);
    for (int i = 0; i < n; ++i) {
        double a = d1[i], b = d1[(i + 1) % n];
        double ta = i * h;
        if (a == 0.0) {
            roots.push_back(ta);
            continue;
        }
        if ((a < 0.0) == (b < 0.0)) continue;
        // bisect then Newton-polish inside [ta, ta+h]
        double lo = ta, hi = ta + h, flo = a;
        for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = F.deriv(mid, 1);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        double t = 0.5 * (lo + hi);
        for (int it = 0; it < 8; ++it) {
            double g = F.deriv(t, 1), gp = F.deriv(t, 2);
            if (gp == 0.0) break;
            double step = g / gp;
            t -= step;
            if (std::abs(step) < polish_tol) break;
        }
        // keep within [0, 2pi)
        t = std::fmod(t, 2.0 * M_PI);
        if (t < 0.0) t += 2.0 * M_PI;
        roots.push_back(t);
    }
    std::sort(roots.begin(), roots.end());
    // drop duplicates produced by polishing across a grid cell
    std::vector<double> uniq;
    for (double t : roots) {
        if (uniq.empty() || std::abs(t - uniq.back()) > 1e-9) uniq.push_back(t);
    }
    if (uniq.size() > 1 && std::abs(uniq.front() + 2.0 * M_PI - uniq.back()) < 1e-9)
        uniq.pop_back();
    return uniq;
}

GenericityReport check_P2(const FourierSeries2& f, double s, double delta,
                          const GenericityOptions& opt) {
    GenericityReport rep;
    rep.s = s;
    rep.delta = delta;
    rep.threshold = threshold_K(s, delta, opt.c_universal);
    rep.kmax = rep.threshold;
    for (const Mode& k : enumerate_generators(rep.threshold)) {
        OneDimProfile F = project_to_lattice(f, k);
        if (F.empty()) {
            rep.p2_failures.push_back({k, 0.0, "profile vanishes identically"});
            continue;
        }
        std::vector<double> d1 = F.sample(opt.grid_points, 1);
        std::vector<double> d2 = F.sample(opt.grid_points, 2);
        double grid_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < opt.grid_points; ++i)
            grid_min = std::min(grid_min, std::abs(d1[i]) + std::abs(d2[i]));
        // |F'| + |F''| has Lipschitz constant at most sup|F''| + sup|F'''|
        double lip = F.deriv_sup_bound(2) + F.deriv_sup_bound(3);
        double half_cell = M_PI / opt.grid_points;
        double certified = grid_min - lip * half_cell;
        if (certified > 0.0) continue;
        if (grid_min <= 0.0)
            rep.p2_failures.push_back({k, grid_min, "grid minimum is zero"});
        else
            rep.inconclusive.push_back(
                {k, certified, "P2 minimum not separable from zero at this resolution"});
    }
    return rep;
}

GenericityReport check_P3(const FourierSeries2& f, double s, double delta,
                          const GenericityOptions& opt) {
    GenericityReport rep;
    rep.s = s;
    rep.delta = delta;
    rep.threshold = threshold_K(s, delta, opt.c_universal);
    rep.kmax = rep.threshold;
    for (const Mode& k : enumerate_generators(rep.threshold)) {
        OneDimProfile F = project_to_lattice(f, k);
        if (F.empty()) {
            rep.p3_failures.push_back({k, 0.0, "profile vanishes identically"});
            continue;
        }
        std::vector<double> crit = profile_critical_points(F, opt.grid_points, opt.polish_tol);
        if (crit.size() < 2) continue;
        std::vector<double> vals(crit.size());
        for (std::size_t i = 0; i < crit.size(); ++i) vals[i] = F.eval(crit[i]);
        double scale = F.deriv_sup_bound(0);
        double gap = std::numeric_limits<double>::infinity();
        std::size_t gi = 0, gj = 1;
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i + 1; j < vals.size(); ++j)
                if (std::abs(vals[i] - vals[j]) < gap) {
                    gap = std::abs(vals[i] - vals[j]);
                    gi = i;
                    gj = j;
                }
        // critical values are accurate to roughly machine precision once
        // the points are polished; separate pass/fail/inconclusive bands
        double fail_band = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
        double pass_band = 1e3 * fail_band;
        if (gap > pass_band) continue;
        char buf[160];
        std::snprintf(buf, sizeof buf, "critical values at theta=%.6f and %.6f differ by %.3e",
                      crit[gi], crit[gj], gap);
        if (gap <= fail_band)
            rep.p3_failures.push_back({k, gap, buf});
        else
            rep.inconclusive.push_back({k, gap, std::string("P3 near-coincidence: ") + buf});
    }
    return rep;
}

GenericityReport check_class_membership(const FourierSeries2& f, double delta, int kmax,
                                        const GenericityOptions& opt) {
    const double s = f.width();
    GenericityReport rep = check_P1(f, s, delta, kmax, opt);
    GenericityReport p2 = check_P2(f, s, delta, opt);
    GenericityReport p3 = check_P3(f, s, delta, opt);
    rep.p2_failures = std::move(p2.p2_failures);
    rep.p3_failures = std::move(p3.p3_failures);
    for (auto& e : p2.inconclusive) rep.inconclusive.push_back(std::move(e));
    for (auto& e : p3.inconclusive) rep.inconclusive.push_back(std::move(e));
    return rep;
}

}  // namespace torlab
