#include "torlab/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <Eigen/Dense>

#include "torlab/quadrature.hpp"

namespace torlab {

namespace {

// extended Euclid: u a + v b = gcd(a, b), a,b >= 0
void xgcd(long long a, long long b, long long& u, long long& v) {
    long long u0 = 1, v0 = 0, u1 = 0, v1 = 1;
    while (b != 0) {
        long long q = a / b;
        long long t = a - q * b;
        a = b;
        b = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
        t = v0 - q * v1;
        v0 = v1;
        v1 = t;
    }
    u = u0;
    v = v0;
}

}  // namespace

Mode bezout_complement(const Mode& k) {
    if (!is_generator(k)) throw std::invalid_argument("bezout_complement: k is not a generator");
    Mode kbar;
    if (k.k1 == 0) {
        kbar = {1, 0};  // k = (0,1)
    } else {
        long long u, v;
        xgcd(k.k1, std::abs(k.k2), u, v);
        if (k.k2 >= 0)
            kbar = {int(v), int(-u)};
        else
            kbar = {int(-v), int(-u)};
    }
    // reduce modulo k to the smallest sup-norm representative; ties keep
    // the plain extended-Euclid answer
    long long best = -1;
    Mode best_k = kbar;
    for (int t : {0, -1, 1, -2, 2, -3, 3}) {
        Mode c{kbar.k1 + t * k.k1, kbar.k2 + t * k.k2};
        long long n = c.norm_inf();
        if (best < 0 || n < best) {
            best = n;
            best_k = c;
        }
    }
    kbar = best_k;
    long long det = (long long)kbar.k1 * k.k2 - (long long)kbar.k2 * k.k1;
    if (det != 1 || kbar.norm_inf() > k.norm_inf())
        throw std::logic_error("bezout_complement: reduction failed");
    return kbar;
}

BezoutFrame make_frame(const Mode& k) {
    BezoutFrame f;
    f.k = k;
    f.kbar = bezout_complement(k);
    f.knorm2 = double(k.dot(k));
    f.beta = double(f.kbar.dot(k)) / f.knorm2;
    f.perp = {f.kbar.k1 - f.beta * k.k1, f.kbar.k2 - f.beta * k.k2};
    f.perp_norm2 = f.perp[0] * f.perp[0] + f.perp[1] * f.perp[1];
    return f;
}

double PendulumChart::momentum(double q2, double p1, double E, int branch) const {
    auto estimate = [&](double p2) {
        double rad = 2.0 * (E - potential(q2, p1, p2));
        return rad <= 0.0 ? 0.0 : branch * std::sqrt(rad) / knorm;
    };
    double p2 = estimate(0.0);
    if (exact()) return p2;
    for (int it = 0; it < 60; ++it) {
        double next = estimate(p2);
        if (std::abs(next - p2) <= 1e-15 * (1.0 + std::abs(next))) return next;
        p2 = next;
    }
    return p2;
}

double PendulumChart::momentum_anchored(double q2, double p1, int branch, double q_anchor,
                                        double E_offset) const {
    auto rad = [&](double p2) {
        double d = E_offset + (potential(q_anchor, p1, 0.0) - potential(q2, p1, 0.0));
        if (!exact())
            d -= (Wval(p1, p2) - Wval(p1, 0.0)) + (Vval(p1, p2, q2) - Vval(p1, 0.0, q2));
        return 2.0 * std::max(d, 0.0);
    };
    double p2 = branch * std::sqrt(rad(0.0)) / knorm;
    if (exact()) return p2;
    for (int it = 0; it < 60; ++it) {
        double next = branch * std::sqrt(rad(p2)) / knorm;
        if (std::abs(next - p2) <= 1e-15 * (1.0 + std::abs(next))) return next;
        p2 = next;
    }
    return p2;
}

PendulumChart PendulumChart::exact_pendulum(const Mode& k, double theta_k) {
    PendulumChart c;
    c.k = k;
    c.knorm = k.norm();
    c.knorm2 = double(k.dot(k));
    c.theta_k = theta_k;
    c.frame = make_frame(k);
    return c;
}

SeparatrixInfo separatrix(const PendulumChart& chart, double p1) {
    SeparatrixInfo info;
    double w0 = chart.Wval(p1, 0.0);
    if (chart.exact()) {
        info.q_hyp = -chart.theta_k;
        info.q_ell = M_PI - chart.theta_k;
        info.E0 = w0 + 1.0;
        info.E_min = w0 - 1.0;
        return info;
    }
    auto g = [&](double th) { return std::cos(th + chart.theta_k) + chart.Vval(p1, 0.0, th); };
    auto gp = [&](double th) {
        const double h = 1e-6;
        return (g(th + h) - g(th - h)) / (2.0 * h);
    };
    const int n = 2048;
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = gp(2.0 * M_PI * i / n);
    double best_max = -std::numeric_limits<double>::infinity();
    double best_min = std::numeric_limits<double>::infinity();
    bool found = false;
    auto record = [&](double th) {
        double val = g(th);
        found = true;
        if (val > best_max) {
            best_max = val;
            info.q_hyp = th;
        }
        if (val < best_min) {
            best_min = val;
            info.q_ell = th;
        }
    };
    for (int i = 0; i < n; ++i) {
        double a = d[i], b = d[(i + 1) % n];
        if (a == 0.0) {
            record(2.0 * M_PI * i / n);  // critical point on the grid itself
            continue;
        }
        if ((a < 0.0) == (b < 0.0)) continue;
        double lo = 2.0 * M_PI * i / n, hi = 2.0 * M_PI * (i + 1) / n;
        record(find_root(gp, lo, hi, 1e-14));
    }
    if (!found)
        throw std::runtime_error("separatrix: no critical point of the effective potential");
    info.E0 = w0 + best_max;
    info.E_min = w0 + best_min;
    return info;
}

double separatrix_energy(const PendulumChart& chart, double p1) {
    return separatrix(chart, p1).E0;
}

namespace {

struct Turning {
    double q_lo = 0.0, q_hi = 0.0;
};

Turning turning_points(const PendulumChart& chart, const SeparatrixInfo& sep, double E,
                       double p1) {
    auto u0 = [&](double q) { return chart.potential(q, p1, 0.0); };
    double qh = sep.q_hyp, qe = sep.q_ell;
    if (qe < qh) qe += 2.0 * M_PI;
    Turning t;
    t.q_lo = find_root([&](double q) { return u0(q) - E; }, qh, qe, 1e-14);
    t.q_hi = find_root([&](double q) { return u0(q) - E; }, qe, qh + 2.0 * M_PI, 1e-14);
    return t;
}

double range_guard(const PendulumChart& chart, const SeparatrixInfo& sep, double E) {
    double gap = sep.E0 - sep.E_min;
    double z = std::abs(E - sep.E0);
    if (z < chart.z_min_rel * gap)
        throw std::domain_error("pendulum chart: energy too close to the separatrix");
    return gap;
}

double dH_dp2(const PendulumChart& chart, double q, double p1, double p2) {
    double v = chart.knorm2 * p2;
    if (!chart.exact()) {
        const double h = 1e-6 * (1.0 + std::abs(p2));
        v += (chart.Wval(p1, p2 + h) - chart.Wval(p1, p2 - h)) / (2.0 * h);
        v += (chart.Vval(p1, p2 + h, q) - chart.Vval(p1, p2 - h, q)) / (2.0 * h);
    }
    return v;
}

// finite reciprocal for the time integrands: below the cancellation floor
// of the radicand the momentum reads as exactly zero
double inv_speed(const PendulumChart& chart, double q, double p1, double p2) {
    double v = std::abs(dH_dp2(chart, q, p1, p2));
    double floor_v = 1e-9 * (1.0 + chart.knorm2);
    return 1.0 / std::max(v, floor_v);
}

}  // namespace

double action_of_energy(const PendulumChart& chart, PendulumChart::Region region, double E,
                        double p1, double quad_tol) {
    SeparatrixInfo sep = separatrix(chart, p1);
    range_guard(chart, sep, E);
    using R = PendulumChart::Region;
    if (region == R::upper || region == R::lower) {
        if (E <= sep.E0)
            throw std::domain_error("action_of_energy: rotational region needs E > E0");
        int branch = region == R::upper ? 1 : -1;
        double z = E - sep.E0;
        double I = integrate(
            [&](double q) {
                return std::abs(chart.momentum_anchored(q, p1, branch, sep.q_hyp, z));
            },
            0.0, 2.0 * M_PI, quad_tol);
        return I / (2.0 * M_PI);
    }
    if (E >= sep.E0 || E <= sep.E_min)
        throw std::domain_error("action_of_energy: librational region needs E_min < E < E0");
    Turning t = turning_points(chart, sep, E, p1);
    double mid = sep.q_ell;
    if (mid < t.q_lo) mid += 2.0 * M_PI;
    double loop = 0.0;
    for (int branch : {1, -1}) {
        auto f_lo = [&](double q) {
            return std::abs(chart.momentum_anchored(q, p1, branch, t.q_lo, 0.0));
        };
        auto f_hi = [&](double q) {
            return std::abs(chart.momentum_anchored(q, p1, branch, t.q_hi, 0.0));
        };
        loop += integrate_sqrt_endpoint(f_lo, t.q_lo, mid, true, quad_tol);
        loop += integrate_sqrt_endpoint(f_hi, mid, t.q_hi, false, quad_tol);
    }
    return loop / (2.0 * M_PI);
}

double period(const PendulumChart& chart, PendulumChart::Region region, double E, double p1,
              double quad_tol) {
    SeparatrixInfo sep = separatrix(chart, p1);
    range_guard(chart, sep, E);
    using R = PendulumChart::Region;
    if (region == R::upper || region == R::lower) {
        if (E <= sep.E0)
            throw std::domain_error("period: rotational region needs E > E0");
        int branch = region == R::upper ? 1 : -1;
        double z = E - sep.E0;
        return integrate(
            [&](double q) {
                double p2 = chart.momentum_anchored(q, p1, branch, sep.q_hyp, z);
                return 1.0 / std::abs(dH_dp2(chart, q, p1, p2));
            },
            0.0, 2.0 * M_PI, quad_tol * 100.0, 1e-9);
    }
    if (E >= sep.E0 || E <= sep.E_min)
        throw std::domain_error("period: librational region needs E_min < E < E0");
    Turning t = turning_points(chart, sep, E, p1);
    double mid = sep.q_ell;
    if (mid < t.q_lo) mid += 2.0 * M_PI;
    double T = 0.0;
    for (int branch : {1, -1}) {
        auto f_lo = [&](double q) {
            return inv_speed(chart, q, p1, chart.momentum_anchored(q, p1, branch, t.q_lo, 0.0));
        };
        auto f_hi = [&](double q) {
            return inv_speed(chart, q, p1, chart.momentum_anchored(q, p1, branch, t.q_hi, 0.0));
        };
        T += integrate_sqrt_endpoint(f_lo, t.q_lo, mid, true, quad_tol * 100.0, 1e-2, 1e-9);
        T += integrate_sqrt_endpoint(f_hi, mid, t.q_hi, false, quad_tol * 100.0, 1e-2, 1e-9);
    }
    return T;
}

double energy_of_action(const PendulumChart& chart, PendulumChart::Region region, double I2,
                        double p1, double quad_tol) {
    SeparatrixInfo sep = separatrix(chart, p1);
    double gap = sep.E0 - sep.E_min;
    using R = PendulumChart::Region;
    auto act = [&](double E) { return action_of_energy(chart, region, E, p1, quad_tol); };
    if (region == R::inner) {
        double lo = sep.E_min + 1e-12 * gap;
        double hi = sep.E0 - chart.z_min_rel * gap * 1.0000001;
        if (I2 <= 0.0 || act(hi) < I2)
            throw std::domain_error("energy_of_action: action out of the librational range");
        return find_root([&](double E) { return act(E) - I2; }, lo, hi, 1e-14);
    }
    double lo = sep.E0 + chart.z_min_rel * gap * 1.0000001;
    if (act(lo) > I2)
        throw std::domain_error("energy_of_action: action below the rotational range");
    double z = gap;
    int guard = 0;
    while (act(sep.E0 + z) < I2) {
        z *= 2.0;
        if (++guard > 60)
            throw std::domain_error("energy_of_action: action out of reach");
    }
    return find_root([&](double E) { return act(E) - I2; }, lo, sep.E0 + z, 1e-14);
}

double LogSplitFit::chi0() const { return chi.empty() ? 0.0 : chi[0] / z_scale; }

double LogSplitFit::value(double z) const {
    double u = z / z_scale, L = std::log(u);
    double v = 0.0, um = 1.0;
    for (double a : phi) {
        v += a * um;
        um *= u;
    }
    um = u;
    for (double b : chi) {
        v += b * um * L;
        um *= u;
    }
    return v;
}

double LogSplitFit::d1(double z) const {
    double u = z / z_scale, L = std::log(u);
    double v = 0.0;
    for (std::size_t m = 1; m < phi.size(); ++m) v += phi[m] * m * std::pow(u, double(m - 1));
    for (std::size_t m = 0; m < chi.size(); ++m)
        v += chi[m] * std::pow(u, double(m)) * ((m + 1.0) * L + 1.0);
    return v / z_scale;
}

double LogSplitFit::d2(double z) const {
    double u = z / z_scale, L = std::log(u);
    double v = 0.0;
    for (std::size_t m = 2; m < phi.size(); ++m)
        v += phi[m] * m * (m - 1.0) * std::pow(u, double(m - 2));
    for (std::size_t m = 0; m < chi.size(); ++m)
        v += chi[m] * std::pow(u, double(m) - 1.0) * ((m + 1.0) * m * L + 2.0 * m + 1.0);
    return v / (z_scale * z_scale);
}

LogSplitFit log_split_fit(const PendulumChart& chart, PendulumChart::Region region, double p1,
                          const std::vector<double>& zgrid, int deg_phi, int deg_chi,
                          double quad_tol) {
    if (zgrid.size() < std::size_t(deg_phi + deg_chi + 3))
        throw std::invalid_argument("log_split_fit: grid too small for the degrees");
    SeparatrixInfo sep = separatrix(chart, p1);
    double sz = region == PendulumChart::Region::inner ? -1.0 : 1.0;
    const int n = int(zgrid.size());
    std::vector<double> I(n);
    for (int i = 0; i < n; ++i)
        I[i] = action_of_energy(chart, region, sep.E0 + sz * zgrid[i], p1, quad_tol);

    LogSplitFit fit;
    fit.z_scale = *std::max_element(zgrid.begin(), zgrid.end());
    const int cols = (deg_phi + 1) + (deg_chi + 1);
    Eigen::MatrixXd A(n, cols);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double u = zgrid[i] / fit.z_scale, L = std::log(u);
        double um = 1.0;
        for (int m = 0; m <= deg_phi; ++m) {
            A(i, m) = um;
            um *= u;
        }
        um = u;
        for (int m = 0; m <= deg_chi; ++m) {
            A(i, deg_phi + 1 + m) = um * L;
            um *= u;
        }
        b(i) = I[i];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    fit.phi.assign(c.data(), c.data() + deg_phi + 1);
    fit.chi.assign(c.data() + deg_phi + 1, c.data() + cols);
    for (int i = 0; i < n; ++i)
        fit.residual = std::max(fit.residual, std::abs(fit.value(zgrid[i]) - I[i]));
    return fit;
}

namespace {

TwistFitResult fit_power_log(const std::vector<double>& zs, const std::vector<double>& vals,
                             double z_lo, double z_hi, double* offset_io = nullptr) {
    // ln v = c + p ln z + b ln(log_offset + ln(1/z)) on the window; the
    // additive offset inside the logarithm is profiled over a small grid
    // (it is not pinned by theory and biases p when forced to zero)
    std::vector<double> lz, lv;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        double z = zs[i], v = std::abs(vals[i]);
        if (z < z_lo || z > z_hi || v <= 0.0 || z >= 1.0) continue;
        lz.push_back(std::log(z));
        lv.push_back(std::log(v));
    }
    TwistFitResult out;
    if (lz.size() < 5) return out;
    Eigen::VectorXd b(lv.size());
    for (std::size_t i = 0; i < lv.size(); ++i) b(i) = lv[i];
    double mean = b.mean();
    double ss_tot = (b.array() - mean).square().sum();

    auto solve_at = [&](double off, TwistFitResult& r) {
        Eigen::MatrixXd A(lz.size(), 3);
        for (std::size_t i = 0; i < lz.size(); ++i) {
            A(i, 0) = 1.0;
            A(i, 1) = lz[i];
            A(i, 2) = std::log(off - lz[i]);
        }
        Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
        r.amplitude = std::exp(c(0));
        r.z_exponent = c(1);
        r.log_exponent = c(2);
        Eigen::VectorXd res = A * c - b;
        r.r2 = ss_tot > 0 ? 1.0 - res.squaredNorm() / ss_tot : 1.0;
    };
    if (offset_io && *offset_io > 0.0) {
        solve_at(*offset_io, out);
        return out;
    }
    double best_off = 0.0;
    for (double off = 0.0; off <= 6.01; off += 0.25) {
        TwistFitResult cand;
        solve_at(off, cand);
        if (cand.r2 > out.r2) {
            out = cand;
            best_off = off;
        }
    }
    if (offset_io) *offset_io = best_off;
    return out;
}

}  // namespace

TwistReport twist_hessian(const PendulumChart& chart, const std::vector<double>& p1grid,
                          const std::vector<double>& zgrid,
                          const std::vector<PendulumChart::Region>& regions, double fit_z_lo,
                          double fit_z_hi, double quad_tol) {
    TwistReport rep;
    rep.fit_z_lo = fit_z_lo;
    rep.fit_z_hi = fit_z_hi;
    // the blow-up fits pool one region only; amplitudes differ across the
    // separatrix and would skew a joint fit
    std::vector<double> det_z, det_v, e22_z, e22_v;
    const double h1 = p1grid.size() > 1 ? (p1grid[1] - p1grid[0]) : 0.0;

    for (auto region : regions) {
        const bool fit_region = region == regions.front();
        double sz = region == PendulumChart::Region::inner ? -1.0 : 1.0;
        std::vector<LogSplitFit> fits(p1grid.size());
        std::vector<SeparatrixInfo> seps(p1grid.size());
        for (std::size_t a = 0; a < p1grid.size(); ++a) {
            fits[a] = log_split_fit(chart, region, p1grid[a], zgrid, 4, 3, quad_tol);
            seps[a] = separatrix(chart, p1grid[a]);
        }
        for (std::size_t a = 0; a < p1grid.size(); ++a) {
            for (double z : zgrid) {
                TwistSample smp;
                smp.region = region;
                smp.p1 = p1grid[a];
                smp.z = z;
                smp.I2 = fits[a].value(z);
                double Ip = fits[a].d1(z), Ipp = fits[a].d2(z);
                double E22 = -sz * Ipp / (Ip * Ip * Ip);
                double E11 = 0.0, E12 = 0.0;
                if (!chart.exact() && p1grid.size() >= 3 && a > 0 && a + 1 < p1grid.size()) {
                    // invert the neighbouring fits at the same action
                    auto invert = [&](std::size_t idx) {
                        const LogSplitFit& f = fits[idx];
                        double target = smp.I2;
                        double lo = zgrid.front(), hi = zgrid.back();
                        return find_root([&](double zz) { return f.value(zz) - target; },
                                         lo, hi, 1e-13);
                    };
                    double zp = invert(a + 1), zm = invert(a - 1);
                    double E0c = seps[a].E0;
                    double Ep = seps[a + 1].E0 + sz * zp;
                    double Em = seps[a - 1].E0 + sz * zm;
                    double Ec = E0c + sz * z;
                    E11 = (Ep + Em - 2.0 * Ec) / (h1 * h1);
                    double dE2p = 1.0 / (sz * fits[a + 1].d1(zp));
                    double dE2m = 1.0 / (sz * fits[a - 1].d1(zm));
                    E12 = (dE2p - dE2m) / (2.0 * h1);
                }
                smp.h11 = chart.frame.perp_norm2 + E11;
                smp.h12 = E12;
                smp.h22 = E22;
                smp.det = smp.h11 * smp.h22 - smp.h12 * smp.h12;
                double m = 0.5 * (smp.h11 + smp.h22);
                double r = std::hypot(0.5 * (smp.h11 - smp.h22), smp.h12);
                smp.opnorm = std::abs(m) + r;
                rep.samples.push_back(smp);
                if (fit_region) {
                    det_z.push_back(z);
                    det_v.push_back(smp.det);
                    e22_z.push_back(z);
                    e22_v.push_back(E22);
                }
            }
        }
    }
    double log_off = -1.0;
    rep.e22_fit = fit_power_log(e22_z, e22_v, fit_z_lo, fit_z_hi, &log_off);
    rep.det_fit = fit_power_log(det_z, det_v, fit_z_lo, fit_z_hi,
                                log_off > 0.0 ? &log_off : nullptr);
    rep.amp_ratio = rep.e22_fit.amplitude > 0 ? rep.det_fit.amplitude / rep.e22_fit.amplitude
                                              : 0.0;
    return rep;
}

AdmissibleRegion admissible_region(const TwistReport& report, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("admissible_region: theta must lie in (0,1)");
    AdmissibleRegion out;
    out.theta = theta;
    out.admissible.resize(report.samples.size());

    // cell widths in z within runs of constant (region, p1); p1 weight from
    // the number of distinct p1 values of the run's region
    const auto& S = report.samples;
    std::size_t i = 0;
    while (i < S.size()) {
        std::size_t j = i;
        while (j < S.size() && S[j].region == S[i].region && S[j].p1 == S[i].p1) ++j;
        for (std::size_t t = i; t < j; ++t) {
            double z_prev = t > i ? S[t - 1].z : S[t].z;
            double z_next = t + 1 < j ? S[t + 1].z : S[t].z;
            double dz = 0.5 * (std::abs(S[t].z - z_prev) + std::abs(z_next - S[t].z));
            if (dz == 0.0) dz = std::abs(S[t].z);
            bool ok = S[t].opnorm <= 1.0 / theta && std::abs(S[t].det) >= theta;
            out.admissible[t] = ok;
            out.total_measure += dz;
            if (!ok) out.excluded_measure += dz;
        }
        i = j;
    }
    return out;
}

double theta_from_eps(double eps, double a, double c2) {
    if (!(a > 0.0 && a < 1.0 / 6.0))
        throw std::invalid_argument("theta_from_eps: a must lie in (0, 1/6)");
    return std::exp(-c2 / std::pow(eps, a));
}

double orbit_time(const PendulumChart& chart, PendulumChart::Region region, double E,
                  double p1, double q2, double quad_tol) {
    SeparatrixInfo sep = separatrix(chart, p1);
    using R = PendulumChart::Region;
    if (region == R::upper || region == R::lower) {
        int branch = region == R::upper ? 1 : -1;
        double z = E - sep.E0;
        double q_ref = sep.q_hyp + M_PI;  // fastest point of the circle
        return integrate(
            [&](double q) {
                double p2 = chart.momentum_anchored(q, p1, branch, sep.q_hyp, z);
                return 1.0 / dH_dp2(chart, q, p1, p2);
            },
            q_ref, q2, quad_tol, 1e-9);
    }
    // librational: time from the left turning point along the + branch,
    // continuing on the - branch after the right turning point
    Turning t = turning_points(chart, sep, E, p1);
    double mid = sep.q_ell;
    if (mid < t.q_lo) mid += 2.0 * M_PI;
    auto leg = [&](int branch, double a, double b, bool sing_left) {
        double anchor = sing_left ? t.q_lo : t.q_hi;
        auto f = [&](double q) {
            return inv_speed(chart, q, p1, chart.momentum_anchored(q, p1, branch, anchor, 0.0));
        };
        return integrate_sqrt_endpoint(f, a, b, sing_left, quad_tol, 1e-2, 1e-9);
    };
    double qq = q2;
    while (qq < t.q_lo) qq += 2.0 * M_PI;
    while (qq > t.q_lo + 2.0 * M_PI) qq -= 2.0 * M_PI;
    if (qq > t.q_hi) throw std::domain_error("orbit_time: angle outside the librational band");
    if (qq <= mid) return leg(1, t.q_lo, qq, true);
    return leg(1, t.q_lo, mid, true) + leg(1, mid, qq, false);
}

AngleCoords aa_angles(const PendulumChart& chart, PendulumChart::Region region, double p1,
                      double p2, double q2, double quad_tol) {
    AngleCoords out;
    double E = 0.5 * chart.knorm2 * p2 * p2 + chart.potential(q2, p1, p2);
    out.I2 = action_of_energy(chart, region, E, p1, quad_tol);
    double T = period(chart, region, E, p1, quad_tol);
    double omega = 2.0 * M_PI / T;
    double t = orbit_time(chart, region, E, p1, q2, quad_tol);
    using R = PendulumChart::Region;
    if (region == R::inner && p2 < 0.0) t = T - t;  // returning branch
    out.phi2 = omega * t;
    if (!chart.exact()) {
        const double h = 1e-4 * (1.0 + std::abs(p1));
        auto S_of = [&](double pp1) {
            double Ep = energy_of_action(chart, region, out.I2, pp1, quad_tol);
            SeparatrixInfo sp = separatrix(chart, pp1);
            int branch = region == R::lower ? -1 : 1;
            double q_ref = region == R::inner ? 0.0 : sp.q_hyp + M_PI;
            if (region == R::inner)
                q_ref = turning_points(chart, sp, Ep, pp1).q_lo;
            return integrate(
                [&](double q) { return chart.momentum(q, pp1, Ep, branch); }, q_ref, q2,
                quad_tol);
        };
        out.dSdI1 = (S_of(p1 + h) - S_of(p1 - h)) / (2.0 * h);
    }
    return out;
}

std::array<double, 2> aa_point(const PendulumChart& chart, PendulumChart::Region region,
                               double I2, double phi2, double p1, double quad_tol) {
    double E = energy_of_action(chart, region, I2, p1, quad_tol);
    double T = period(chart, region, E, p1, quad_tol);
    double t = std::fmod(phi2 / (2.0 * M_PI) * T, T);
    if (t < 0.0) t += T;
    SeparatrixInfo sep = separatrix(chart, p1);
    using R = PendulumChart::Region;
    if (region == R::upper || region == R::lower) {
        int branch = region == R::upper ? 1 : -1;
        double q_ref = sep.q_hyp + M_PI;
        // orbit_time is monotone in q for a fixed branch
        double lo = branch > 0 ? q_ref : q_ref - 2.0 * M_PI;
        double hi = branch > 0 ? q_ref + 2.0 * M_PI : q_ref;
        double tt = branch > 0 ? t : t - T;
        double q2 = find_root(
            [&](double q) { return orbit_time(chart, region, E, p1, q, quad_tol) - tt; },
            lo + 1e-12, hi - 1e-12, 1e-13);
        return {chart.momentum(q2, p1, E, branch), q2};
    }
    Turning tp = turning_points(chart, sep, E, p1);
    double half = 0.5 * T;
    if (t <= half) {
        double q2 = find_root(
            [&](double q) { return orbit_time(chart, region, E, p1, q, quad_tol) - t; },
            tp.q_lo + 1e-13, tp.q_hi - 1e-13, 1e-13);
        return {chart.momentum(q2, p1, E, 1), q2};
    }
    double q2 = find_root(
        [&](double q) { return (T - orbit_time(chart, region, E, p1, q, quad_tol)) - t; },
        tp.q_lo + 1e-13, tp.q_hi - 1e-13, 1e-13);
    return {chart.momentum(q2, p1, E, -1), q2};
}

std::array<Vec2, 2> straightened_chart(const PendulumChart& chart, const Vec2& P,
                                       const Vec2& Q, double quad_tol) {
    const double beta = chart.frame.beta;
    double p1 = P[0];
    double p2 = beta * P[0] + P[1];
    double q1 = Q[0] - beta * Q[1];
    double q2 = Q[1];
    double E = 0.5 * chart.knorm2 * p2 * p2 + chart.potential(q2, p1, p2);
    SeparatrixInfo sep = separatrix(chart, p1);
    using R = PendulumChart::Region;
    R region = E > sep.E0 ? (p2 >= 0.0 ? R::upper : R::lower) : R::inner;
    AngleCoords ang = aa_angles(chart, region, p1, p2, q2, quad_tol);
    double phi1 = q1 - ang.dSdI1;
    Vec2 J{p1, ang.I2 - beta * p1};
    Vec2 Theta{phi1 + beta * ang.phi2, ang.phi2};
    return {J, Theta};
}

PendulumChart build_chart(const ResonantAverage& ra, const FourierSeries2& f, double eps,
                          const ZoneDecomposition& zones, double delta) {
    const Mode k = ra.k;
    Complex fk = f.coeff(k);
    const double s = f.width();
    double floor = p1_floor(k.norm1(), s, delta);
    if (std::abs(fk) < floor)
        throw std::invalid_argument(
            "build_chart: resonant coefficient below the class floor");

    PendulumChart c;
    c.k = k;
    c.knorm = k.norm();
    c.knorm2 = double(k.dot(k));
    c.theta_k = std::arg(fk);
    c.frame = make_frame(k);
    c.eps = eps;
    c.lambda = std::sqrt(2.0 * std::abs(fk) * eps);
    c.rk_bold = ra.r_k / (4.0 * c.lambda * c.knorm);
    if (c.rk_bold < 1.0)
        throw std::runtime_error("build_chart: rescaled width below 1; eps too large");

    // p-domain inscribed in the averaged action box
    double perp_norm = std::sqrt(c.frame.perp_norm2);
    Vec2 pc = c.frame.p_of_y(ra.base);
    c.p1_center = pc[0] / c.lambda;
    c.p1_halfwidth = ra.r_k / (2.0 * c.lambda * perp_norm);

    struct Tables {
        GridFn G0;
        std::map<int, GridFn> Gj;
        Complex fk;
        double lambda;
        BezoutFrame frame;
    };
    auto tab = std::make_shared<Tables>();
    tab->G0 = ra.G0_over_eps;
    tab->Gj = ra.G_over_eps;
    tab->fk = fk;
    tab->lambda = c.lambda;
    tab->frame = c.frame;
    const double inv2fk = 1.0 / (2.0 * std::abs(fk));
    const double theta_k = c.theta_k;

    c.W = [tab, inv2fk](double p1, double p2) {
        Vec2 y = tab->frame.y_of_p({tab->lambda * p1, tab->lambda * p2});
        return tab->G0.eval(y[0], y[1]).real() * inv2fk;
    };
    c.V = [tab, inv2fk, theta_k](double p1, double p2, double th) {
        Vec2 y = tab->frame.y_of_p({tab->lambda * p1, tab->lambda * p2});
        double v = 0.0;
        for (const auto& [j, g] : tab->Gj) {
            Complex w = g.eval(y[0], y[1]) * std::exp(Complex{0.0, j * th});
            v += 2.0 * w.real();
        }
        return v * inv2fk - std::cos(th + theta_k);
    };

    // perturbation size: Hessian of W by finite differences over the
    // p-rectangle, theta-weighted norm of V from the coefficient tables
    double eta_w = 0.0;
    const double p2span = ra.r_k / (2.0 * c.lambda * c.knorm);
    const double hp = 1e-2 * std::min(c.p1_halfwidth, p2span);
    for (int i = -2; i <= 2; ++i) {
        double p1 = c.p1_center + 0.45 * i * c.p1_halfwidth;
        for (int j = -2; j <= 2; ++j) {
            double p2 = 0.45 * j * p2span;
            double w11 = (c.W(p1 + hp, p2) + c.W(p1 - hp, p2) - 2 * c.W(p1, p2)) / (hp * hp);
            double w22 = (c.W(p1, p2 + hp) + c.W(p1, p2 - hp) - 2 * c.W(p1, p2)) / (hp * hp);
            double w12 = (c.W(p1 + hp, p2 + hp) - c.W(p1 + hp, p2 - hp) -
                          c.W(p1 - hp, p2 + hp) + c.W(p1 - hp, p2 - hp)) /
                         (4.0 * hp * hp);
            double m = 0.5 * (w11 + w22), r = std::hypot(0.5 * (w11 - w22), w12);
            eta_w = std::max(eta_w, std::abs(m) + r);
        }
    }
    double eta_v = 0.0;
    {
        double acc = 0.0;
        for (const auto& [j, g] : ra.G_over_eps) {
            GridFn d = g;
            if (j == 1)
                for (auto& z : d.values()) z -= fk;
            acc += 2.0 * d.max_abs() * std::exp(2.0 * j) * inv2fk;
        }
        eta_v = acc;
    }
    c.eta = std::max(eta_w, eta_v);
    (void)zones;
    return c;
}

}  // namespace torlab
