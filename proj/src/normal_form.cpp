#include "torlab/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace torlab {

AAHamiltonian make_mechanical(const FourierSeries2& f, double eps, const Box& box,
                              int grid_n) {
    AAHamiltonian ham;
    ham.r = std::min(box.half[0], box.half[1]);
    ham.s = f.width();
    ham.H = ModeFunction(box, grid_n);
    ham.H.set_mode({0, 0}, GridFn::sample(box, grid_n, [](double y1, double y2) {
                       return Complex{0.5 * (y1 * y1 + y2 * y2), 0.0};
                   }));
    for (const auto& [k, c] : f.canonical()) {
        ham.H.set_mode(k, GridFn::constant(box, grid_n, eps * c));
        ham.H.set_mode(-k, GridFn::constant(box, grid_n, eps * std::conj(c)));
    }
    return ham;
}

NonresCertificate nonresonance_certificate(
    const std::function<Vec2(const Vec2&)>& grad_h, const std::vector<Vec2>& sample,
    const Lambda& lambda, double alpha, int K) {
    if (sample.empty())
        throw std::invalid_argument("nonresonance_certificate: empty sample");
    NonresCertificate cert;
    cert.worst_margin = std::numeric_limits<double>::infinity();
    // checking the generators suffices: along a line the divisor is smallest
    // at the generator itself
    for (const Mode& g : enumerate_generators(K)) {
        if (lambda.contains(g)) continue;
        for (const Vec2& y : sample) {
            Vec2 w = grad_h(y);
            double margin = std::abs(g.dot(w[0], w[1])) - alpha;
            if (margin < cert.worst_margin) {
                cert.worst_margin = margin;
                cert.worst_mode = g;
            }
        }
    }
    if (!std::isfinite(cert.worst_margin)) cert.worst_margin = 0.0;  // nothing examined
    cert.ok = cert.worst_margin >= 0.0;
    return cert;
}

NonresCertificate nonresonance_certificate(const GridFn& h, const Lambda& lambda,
                                           double alpha, int K) {
    GridFn g1 = h.d1(), g2 = h.d2();
    std::vector<Vec2> grads;
    const int n = h.n();
    grads.reserve(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grads.push_back({g1.values()[i * n + j].real(), g2.values()[i * n + j].real()});
    NonresCertificate cert;
    cert.worst_margin = std::numeric_limits<double>::infinity();
    for (const Mode& g : enumerate_generators(K)) {
        if (lambda.contains(g)) continue;
        for (const Vec2& w : grads) {
            double margin = std::abs(g.dot(w[0], w[1])) - alpha;
            if (margin < cert.worst_margin) {
                cert.worst_margin = margin;
                cert.worst_mode = g;
            }
        }
    }
    if (!std::isfinite(cert.worst_margin)) cert.worst_margin = 0.0;
    cert.ok = cert.worst_margin >= 0.0;
    return cert;
}

namespace {

struct LieCounters {
    double slop = 0.0;
    int orders = 0;
    bool converged = true;
};

ModeFunction lie_transform(const ModeFunction& H, const ModeFunction& chi, double s,
                           double drop_abs, double stop_abs, int order_max, int work_cutoff,
                           LieCounters& ctr) {
    ModeFunction total = H;
    ModeFunction term = H;
    bool converged = false;
    double prev_norm = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= order_max; ++n) {
        term = ModeFunction::poisson_bracket(term, chi, s, drop_abs, &ctr.slop);
        term.scale(Complex{1.0 / n, 0.0});
        if (work_cutoff > 0) {
            ModeFunction dropped = term.tail(work_cutoff);
            ctr.slop += dropped.weighted_l1(s);
            term = term.cutoff(work_cutoff);
        }
        term.prune(s, drop_abs, &ctr.slop);
        double norm = term.weighted_l1(s);
        // grid differentiation amplifies roundoff order by order; once the
        // terms stop shrinking the series is numerically exhausted
        if (n > 1 && norm >= prev_norm) {
            ctr.slop += norm;
            converged = true;
            break;
        }
        total += term;
        ctr.orders = n;
        prev_norm = norm;
        if (norm < stop_abs) {
            converged = true;
            break;
        }
    }
    if (!converged) ctr.converged = false;
    return total;
}

}  // namespace

NormalFormResult normalize(const AAHamiltonian& ham, const Lambda& lambda, double alpha,
                           int K, const NormalFormOptions& opt) {
    if (K < 2) throw std::invalid_argument("normalize: K must be >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("normalize: alpha must be positive");

    NormalFormResult res;
    res.lambda = lambda;
    res.alpha = alpha;
    res.K = K;
    res.r_in = ham.r;
    res.s_in = ham.s;
    res.h0 = ham.H.mode_or_zero({0, 0});

    const double s = ham.s;
    ModeFunction f_in = ham.H.angle_part();
    res.norm_f_in = f_in.weighted_l1(s);
    res.theta_star = std::pow(2.0, 11) * double(K) * double(K) /
                     (alpha * ham.r * s) * res.norm_f_in;
    res.smallness_ok = res.theta_star < 1.0;
    if (opt.strict_smallness && !res.smallness_ok)
        throw std::runtime_error("normalize: smallness condition failed, theta_* = " +
                                 std::to_string(res.theta_star));
    res.s_bar = std::min(s / 2.0, std::log(8.0 / res.theta_star));

    const double drop_abs = opt.drop_rel * std::max(res.norm_f_in, 1e-300);
    const double stop_abs = opt.lie_stop_rel * std::max(res.norm_f_in, 1e-300);
    const int fmax = [&] {
        int m = 0;
        for (const auto& [k, g] : ham.H.modes()) m = std::max(m, k.norm1());
        return m;
    }();
    const int work_cutoff = K + fmax + 10;

    ModeFunction H = ham.H;
    LieCounters ctr;
    for (int step = 0; step < opt.steps; ++step) {
        // divisors from the current integrable part
        GridFn h_cur = H.mode_or_zero({0, 0});
        GridFn g1 = h_cur.d1(), g2 = h_cur.d2();

        ModeFunction chi(H.box(), H.grid_n());
        for (const auto& [m, g] : H.modes()) {
            if (m.is_zero() || lambda.contains(m) || m.norm1() > K) continue;
            GridFn cg(H.box(), H.grid_n());
            auto& cv = cg.values();
            const auto& sv = g.values();
            const auto& a1 = g1.values();
            const auto& a2 = g2.values();
            for (std::size_t i = 0; i < cv.size(); ++i) {
                double div = m.k1 * a1[i].real() + m.k2 * a2[i].real();
                if (div == 0.0)
                    throw std::runtime_error("normalize: exact resonance in homological divisor");
                cv[i] = sv[i] / Complex{0.0, div};
            }
            chi.set_mode(m, std::move(cg));
        }
        if (chi.mode_count() == 0) break;  // already in normal form

        H = lie_transform(H, chi, s, drop_abs, stop_abs, opt.lie_order_max, work_cutoff, ctr);
        H.symmetrize();
        res.generators_used.push_back(std::move(chi));
    }
    res.truncation_slop = ctr.slop;
    res.lie_orders_used = ctr.orders;
    res.lie_converged = ctr.converged;

    // exact coefficient-level split
    ModeFunction lat = H.lattice_part(lambda);
    res.remainder = H.lattice_complement(lambda);
    res.g = ModeFunction(H.box(), H.grid_n());
    for (const auto& [k, g] : lat.modes()) {
        if (k.is_zero()) {
            GridFn corr = g;
            corr -= res.h0;
            res.g.set_mode(k, std::move(corr));
        } else {
            res.g.set_mode(k, g);
        }
    }

    // recorded norms at the shrunk widths
    Box half_box = H.box().shrunk(0.5);
    double s_out = s * (1.0 - 1.0 / K);
    ModeFunction g_minus_pf = res.g;
    ModeFunction pf = f_in.lattice_part(lambda);
    pf.scale(Complex{-1.0, 0.0});
    g_minus_pf += pf;
    res.norm_g_minus_pf = g_minus_pf.restricted(half_box).weighted_l1(s_out);
    res.norm_remainder = res.remainder.restricted(half_box).weighted_l1(s / 2.0);
    res.bound_g = res.theta_star / K * res.norm_f_in;
    res.bound_remainder = 2.0 * std::exp(-(K - 2.0) * res.s_bar) * res.norm_f_in;
    res.bound_g_ok = res.norm_g_minus_pf <= res.bound_g + res.truncation_slop;
    res.bound_remainder_ok = res.norm_remainder <= res.bound_remainder + res.truncation_slop;
    return res;
}

std::array<Vec2, 2> NormalFormResult::transform(const Vec2& y0, const Vec2& x0,
                                                int rk_steps) const {
    // time-1 flows of the step generators, composed first-step-outermost
    struct Prepared {
        std::vector<Mode> k;
        std::vector<const GridFn*> v;
        std::vector<GridFn> d1, d2;
    };
    std::vector<Prepared> preps;
    for (const ModeFunction& chi : generators_used) {
        Prepared p;
        for (const auto& [k, g] : chi.modes()) {
            p.k.push_back(k);
            p.v.push_back(&g);
            p.d1.push_back(g.d1());
            p.d2.push_back(g.d2());
        }
        preps.push_back(std::move(p));
    }

    auto vector_field = [&](const Prepared& p, const Vec2& y, const Vec2& x,
                            Vec2& dy, Vec2& dx) {
        dy = {0.0, 0.0};
        dx = {0.0, 0.0};
        for (std::size_t t = 0; t < p.k.size(); ++t) {
            const Mode& m = p.k[t];
            Complex e = std::exp(Complex{0.0, m.k1 * x[0] + m.k2 * x[1]});
            Complex cv = p.v[t]->eval(y[0], y[1]) * e;
            Complex c1 = p.d1[t].eval(y[0], y[1]) * e;
            Complex c2 = p.d2[t].eval(y[0], y[1]) * e;
            // ydot = -chi_x, xdot = chi_y
            dy[0] -= (Complex{0.0, double(m.k1)} * cv).real();
            dy[1] -= (Complex{0.0, double(m.k2)} * cv).real();
            dx[0] += c1.real();
            dx[1] += c2.real();
        }
    };

    Vec2 y = y0, x = x0;
    for (auto it = preps.rbegin(); it != preps.rend(); ++it) {
        const Prepared& p = *it;
        double h = 1.0 / rk_steps;
        for (int n = 0; n < rk_steps; ++n) {
            Vec2 k1y, k1x, k2y, k2x, k3y, k3x, k4y, k4x, ty, tx;
            vector_field(p, y, x, k1y, k1x);
            ty = {y[0] + 0.5 * h * k1y[0], y[1] + 0.5 * h * k1y[1]};
            tx = {x[0] + 0.5 * h * k1x[0], x[1] + 0.5 * h * k1x[1]};
            vector_field(p, ty, tx, k2y, k2x);
            ty = {y[0] + 0.5 * h * k2y[0], y[1] + 0.5 * h * k2y[1]};
            tx = {x[0] + 0.5 * h * k2x[0], x[1] + 0.5 * h * k2x[1]};
            vector_field(p, ty, tx, k3y, k3x);
            ty = {y[0] + h * k3y[0], y[1] + h * k3y[1]};
            tx = {x[0] + h * k3x[0], x[1] + h * k3x[1]};
            vector_field(p, ty, tx, k4y, k4x);
            y[0] += h / 6.0 * (k1y[0] + 2.0 * k2y[0] + 2.0 * k3y[0] + k4y[0]);
            y[1] += h / 6.0 * (k1y[1] + 2.0 * k2y[1] + 2.0 * k3y[1] + k4y[1]);
            x[0] += h / 6.0 * (k1x[0] + 2.0 * k2x[0] + 2.0 * k3x[0] + k4x[0]);
            x[1] += h / 6.0 * (k1x[1] + 2.0 * k2x[1] + 2.0 * k3x[1] + k4x[1]);
        }
    }
    return {y, x};
}

Vec2 pick_nonresonant_point(const ZoneDecomposition& zones, int n_dirs) {
    const Annulus& an = zones.annulus();
    const double rho_lo = an.r_inner * 1.05;
    const double rho_hi = an.r_outer * 0.95;
    double best_score = -1.0;
    Vec2 best{0.5 * (rho_lo + rho_hi), 0.0};
    for (int ir = 0; ir < 5; ++ir) {
        double rho = rho_lo + (rho_hi - rho_lo) * (ir + 0.5) / 5.0;
        for (int i = 0; i < n_dirs; ++i) {
            double phi = 2.0 * M_PI * i / n_dirs;
            Vec2 y{rho * std::cos(phi), rho * std::sin(phi)};
            double score = std::numeric_limits<double>::infinity();
            for (const Mode& k : zones.generators())
                score = std::min(score, std::abs(k.dot(y[0], y[1])) * k.norm());
            if (score > best_score) {
                best_score = score;
                best = y;
            }
        }
    }
    return best;
}

NonresonantAverage average_nonresonant(const FourierSeries2& f, double eps,
                                       const ZoneDecomposition& zones,
                                       const NormalFormOptions& opt, const Vec2* base_point,
                                       int grid_n) {
    NonresonantAverage out;
    const double alpha = zones.alpha();
    const int K = zones.cutoff();
    out.r0 = alpha / (2.0 * K);
    out.base = base_point ? *base_point : pick_nonresonant_point(zones);
    if (!zones.classify(out.base).nonresonant)
        throw std::domain_error("average_nonresonant: base point is not non-resonant");

    Box box = Box::square(out.base, out.r0);
    AAHamiltonian ham = make_mechanical(f, eps, box, grid_n);
    auto cert = nonresonance_certificate(ham.H.mode_or_zero({0, 0}), Lambda{}, alpha / 2.0, K);
    if (!cert.ok)
        throw std::runtime_error("average_nonresonant: non-resonance certificate failed");

    out.nf = normalize(ham, Lambda{}, alpha / 2.0, K, opt);

    const double s = f.width();
    GridFn g0 = out.nf.g.mode_or_zero({0, 0});
    out.sup_g0_over_eps = g0.max_abs() / eps;
    out.bound_g0_rel = eps * double(K) * double(K) / (alpha * alpha);
    Box half_box = box.shrunk(0.5);
    double s_rem = s * (1.0 - 2.0 / K) / 2.0;
    out.rem_sup_over_eps = out.nf.remainder.restricted(half_box).sup_fourier(s_rem) / eps;
    out.bound_rem = std::exp(-K * s / 3.0);
    return out;
}

ResonantAverage average_simple_resonance(const FourierSeries2& f, double eps, const Mode& k,
                                         const ZoneDecomposition& zones,
                                         const NormalFormOptions& opt, double radius,
                                         int grid_n) {
    if (!is_generator(k))
        throw std::invalid_argument("average_simple_resonance: k must be a generator");
    if (k.norm1() > zones.cutoff())
        throw std::invalid_argument("average_simple_resonance: |k|_1 exceeds the cutoff");
    ResonantAverage out;
    out.k = k;
    const Annulus& an = zones.annulus();
    const double r = an.r_inner;
    const int K = zones.cutoff();
    const double kn = k.norm();
    out.r_k = r / (32.0 * kn * K);
    double rho = radius > 0.0 ? radius : 0.5 * (an.r_inner + an.r_outer);
    out.base = {rho * k.k2 / kn, -rho * k.k1 / kn};  // on the resonance line

    Box box = Box::square(out.base, out.r_k);
    AAHamiltonian ham = make_mechanical(f, eps, box, grid_n);
    Lambda lam{k};
    const double a_k = r / (4.0 * kn);
    auto cert = nonresonance_certificate(ham.H.mode_or_zero({0, 0}), lam, a_k, 8 * K);
    if (!cert.ok)
        throw std::runtime_error("average_simple_resonance: non-resonance certificate failed");

    out.nf = normalize(ham, lam, a_k, 8 * K, opt);

    // split the lattice part into the angle average and the profile
    const double s = f.width();
    const double s_star = s * (1.0 - 1.0 / K);
    out.G0_over_eps = out.nf.g.mode_or_zero({0, 0});
    out.G0_over_eps *= Complex{1.0 / eps, 0.0};
    out.sup_G0_over_eps = out.G0_over_eps.max_abs();

    Box half_box = box.shrunk(0.5);
    OneDimProfile F = project_to_lattice(f, k);
    double dist = 0.0;
    for (const auto& [m, g] : out.nf.g.modes()) {
        if (m.is_zero()) continue;
        LinePoint lp = generator_line(m);
        int j = lp.j;
        GridFn gj = g;
        gj *= Complex{1.0 / eps, 0.0};
        if (j >= 1) out.G_over_eps.emplace(j, gj);
        GridFn diff = gj.resampled(half_box);
        Complex fk = F.coeff(j);
        for (auto& z : diff.values()) z -= fk;
        dist = std::max(dist, diff.max_abs() * std::exp(std::abs(j) * k.norm1() * s_star));
    }
    // profile coefficients with no counterpart in g count in full
    for (const auto& [j, c] : F.canonical()) {
        if (out.G_over_eps.count(j)) continue;
        dist = std::max(dist, std::abs(c) * std::exp(j * k.norm1() * s_star));
    }
    out.dist_G_profile_over_eps = dist;
    out.bound_G = eps * double(k.norm1()) * double(k.norm1()) * double(K) * double(K);

    out.rem_norm_over_eps =
        out.nf.remainder.restricted(half_box).sup_fourier(s_star / 2.0) / eps;
    out.bound_rem = 2.0 * std::exp(-(4.0 * K - 1.0) * s);

    out.lattice_projection_zero = true;
    for (const auto& [m, g] : out.nf.remainder.modes())
        if (lam.contains(m)) out.lattice_projection_zero = false;
    return out;
}

namespace {

nlohmann::ordered_json grid_to_json(const GridFn& g) {
    nlohmann::ordered_json j;
    j["box"] = {{"center", {g.box().center[0], g.box().center[1]}},
                {"half", {g.box().half[0], g.box().half[1]}}};
    j["n"] = g.n();
    auto re = nlohmann::ordered_json::array();
    auto im = nlohmann::ordered_json::array();
    for (const auto& z : g.values()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

nlohmann::ordered_json mode_function_to_json(const ModeFunction& m) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [k, g] : m.modes()) {
        nlohmann::ordered_json e;
        e["k"] = {k.k1, k.k2};
        e["grid"] = grid_to_json(g);
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

std::string normal_form_to_json(const NormalFormResult& nf) {
    nlohmann::ordered_json j;
    j["lattice"] = nf.lambda.gen ? nlohmann::ordered_json{nf.lambda.gen->k1, nf.lambda.gen->k2}
                                 : nlohmann::ordered_json(nullptr);
    j["alpha"] = nf.alpha;
    j["K"] = nf.K;
    j["widths"] = {{"r", nf.r_in}, {"s", nf.s_in}};
    j["theta_star"] = nf.theta_star;
    j["smallness_ok"] = nf.smallness_ok;
    j["s_bar"] = nf.s_bar;
    j["norms"] = {{"f_in", nf.norm_f_in},
                  {"g_minus_pf", nf.norm_g_minus_pf},
                  {"remainder", nf.norm_remainder}};
    j["bounds"] = {{"g", nf.bound_g},
                   {"remainder", nf.bound_remainder},
                   {"g_ok", nf.bound_g_ok},
                   {"remainder_ok", nf.bound_remainder_ok}};
    j["truncation_slop"] = nf.truncation_slop;
    j["steps"] = nf.generators_used.size();
    j["lie_orders_used"] = nf.lie_orders_used;
    j["lie_converged"] = nf.lie_converged;
    j["h0"] = grid_to_json(nf.h0);
    j["g"] = mode_function_to_json(nf.g);
    j["remainder"] = mode_function_to_json(nf.remainder);
    return j.dump(1);
}

}  // namespace torlab
