#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "torlab/normal_form.hpp"

using namespace torlab;

namespace {

FourierSeries2 random_series(double s, int n_modes, int kmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ki(-kmax, kmax);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    FourierSeries2 f(s);
    int placed = 0;
    while (placed < n_modes) {
        Mode k{ki(rng), ki(rng)};
        if (k.is_zero()) continue;
        f.set_coeff(k, Complex{amp(rng), amp(rng)} * std::exp(-k.norm1() * s));
        ++placed;
    }
    return f;
}

ModeFunction constant_modes(const FourierSeries2& f, const Box& box, int n) {
    ModeFunction m(box, n);
    for (const auto& [k, c] : f.canonical()) {
        m.set_mode(k, GridFn::constant(box, n, c));
        m.set_mode(-k, GridFn::constant(box, n, std::conj(c)));
    }
    return m;
}

}  // namespace

TEST_CASE("weighted l1 norm on simple mode sets") {
    Box box = Box::square({1.0, 1.0}, 0.1);
    ModeFunction m(box, 8);
    m.set_mode({2, 1}, GridFn::constant(box, 8, Complex{0.25, 0.0}));
    CHECK(m.weighted_l1(0.7) == doctest::Approx(0.25 * std::exp(3 * 0.7)).epsilon(1e-14));

    m.set_mode({0, 1}, GridFn::constant(box, 8, Complex{0.0, 0.5}));
    CHECK(m.weighted_l1(0.7) ==
          doctest::Approx(0.25 * std::exp(3 * 0.7) + 0.5 * std::exp(0.7)).epsilon(1e-14));
}

TEST_CASE("sum norm vs sup norm sandwich") {
    // ||f||_{r,s} <= |||f|||_{r,s} <= (coth^2(sigma/2) - 1) ||f||_{r,s+sigma}
    Box box = Box::square({1.0, 0.5}, 0.05);
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        FourierSeries2 f = random_series(1.0, 30, 6, seed);
        ModeFunction m = constant_modes(f, box, 6);
        for (double sigma : {0.3, 0.8}) {
            double s = 0.6;
            double sum_norm = m.weighted_l1(s);
            double sup_norm_s = m.sup_fourier(s);
            double sup_norm_wide = m.sup_fourier(s + sigma);
            double coth = 1.0 / std::tanh(sigma / 2.0);
            CHECK(sup_norm_s <= sum_norm * (1 + 1e-13));
            CHECK(sum_norm <= (coth * coth - 1.0) * sup_norm_wide * (1 + 1e-13));
        }
    }
}

TEST_CASE("grid calculus: derivatives and interpolation") {
    Box box{{0.4, -0.2}, {0.3, 0.5}};
    GridFn g = GridFn::sample(box, 16, [](double a, double b) {
        return Complex{std::sin(2 * a) * b + a * a, 0.0};
    });
    GridFn ga = g.d1(), gb = g.d2();
    for (double a : {0.2, 0.4, 0.6}) {
        for (double b : {-0.5, 0.0, 0.2}) {
            CHECK(g.eval(a, b).real() ==
                  doctest::Approx(std::sin(2 * a) * b + a * a).epsilon(1e-11));
            CHECK(ga.eval(a, b).real() ==
                  doctest::Approx(2 * std::cos(2 * a) * b + 2 * a).epsilon(1e-9));
            CHECK(gb.eval(a, b).real() == doctest::Approx(std::sin(2 * a)).epsilon(1e-9));
        }
    }
    CHECK(g.sup_bound() >= g.max_abs() * (1 - 1e-12));
}

TEST_CASE("poisson bracket against the flow derivative") {
    // {F, G} with F = y1^2/2 + cos(x1), G = y2 sin(x1+x2):
    // analytic bracket check at sample points
    Box box = Box::square({0.8, 0.6}, 0.2);
    int n = 12;
    ModeFunction F(box, n);
    F.set_mode({0, 0}, GridFn::sample(box, n, [](double a, double) {
                    return Complex{0.5 * a * a, 0.0};
                }));
    F.set_mode({1, 0}, GridFn::constant(box, n, Complex{0.5, 0.0}));
    F.set_mode({-1, 0}, GridFn::constant(box, n, Complex{0.5, 0.0}));
    ModeFunction G(box, n);
    // y2 sin(x1+x2) = y2 (e^{i(x1+x2)} - e^{-i(x1+x2)}) / (2i)
    G.set_mode({1, 1}, GridFn::sample(box, n, [](double, double b) {
                    return Complex{0.0, -0.5} * b;
                }));
    G.set_mode({-1, -1}, GridFn::sample(box, n, [](double, double b) {
                    return Complex{0.0, 0.5} * b;
                }));

    ModeFunction br = ModeFunction::poisson_bracket(F, G, 1.0, 0.0);
    // {F,G} = F_x.G_y - F_y.G_x
    // F_x = (-sin x1, 0), F_y = (y1, 0), G_y = (0, sin(x1+x2)),
    // G_x = (y2 cos(x1+x2), y2 cos(x1+x2))
    auto analytic = [](const Vec2& y, const Vec2& x) {
        return -y[0] * y[1] * std::cos(x[0] + x[1]);
    };
    for (double x1 : {0.3, 2.0}) {
        for (double x2 : {0.0, 1.2}) {
            Vec2 y{0.85, 0.55};
            Vec2 x{x1, x2};
            CHECK(br.eval(y, x).real() == doctest::Approx(analytic(y, x)).epsilon(1e-10));
            CHECK(std::abs(br.eval(y, x).imag()) < 1e-12);
        }
    }
}

TEST_CASE("non-resonance certificates") {
    // fully non-resonant box: h = |y|^2/2, gradient = y
    Box box = Box::square({1.7552, 0.9589}, 0.01);  // direction far from low lines
    GridFn h = GridFn::sample(box, 8, [](double a, double b) {
        return Complex{0.5 * (a * a + b * b), 0.0};
    });
    auto cert = nonresonance_certificate(h, Lambda{}, 0.05, 4);
    CHECK(cert.ok);
    CHECK(cert.worst_margin >= 0.0);

    // resonant strip of k = (1,0): excluded from the minimum via the lattice
    Box rbox = Box::square({0.0, 1.5}, 0.005);
    GridFn h2 = GridFn::sample(rbox, 8, [](double a, double b) {
        return Complex{0.5 * (a * a + b * b), 0.0};
    });
    auto cert_bad = nonresonance_certificate(h2, Lambda{}, 0.05, 4);
    CHECK(!cert_bad.ok);
    CHECK(cert_bad.worst_mode == Mode{1, 0});
    auto cert_mod = nonresonance_certificate(h2, Lambda{Mode{1, 0}}, 0.3, 8);
    CHECK(cert_mod.ok);

    std::vector<Vec2> empty;
    CHECK_THROWS_AS(
        nonresonance_certificate([](const Vec2& y) { return y; }, empty, Lambda{}, 0.1, 3),
        std::invalid_argument);
}

TEST_CASE("normalize is the identity on lattice-supported input") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    f.set_coeff({2, 0}, Complex{0.1, 0.05});
    Box box = Box::square({0.0, 1.5}, 0.01);
    AAHamiltonian ham = make_mechanical(f, 1e-3, box, 8);
    NormalFormResult nf = normalize(ham, Lambda{Mode{1, 0}}, 0.3, 6, {});
    CHECK(nf.generators_used.empty());
    CHECK(nf.remainder.mode_count() == 0);
    CHECK(nf.norm_remainder == 0.0);
    // g reproduces the lattice part exactly
    CHECK(nf.g.find({1, 0}) != nullptr);
    CHECK(nf.g.find({1, 0})->max_abs() == doctest::Approx(0.5e-3).epsilon(1e-14));
}

TEST_CASE("pendulum-rotator resonant normal form is exact") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    Annulus an(1.0, 3.0);
    int K = 4;
    ZoneDecomposition zones(an, 1.0 / (32.0 * K), K);
    ResonantAverage ra = average_simple_resonance(f, 1e-3, {1, 0}, zones);
    CHECK(ra.nf.generators_used.empty());
    CHECK(ra.lattice_projection_zero);
    CHECK(ra.rem_norm_over_eps == 0.0);
    CHECK(ra.sup_G0_over_eps == doctest::Approx(0.0));
    REQUIRE(ra.G_over_eps.count(1) == 1);
    CHECK(ra.G_over_eps.at(1).max_abs() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ra.dist_G_profile_over_eps == doctest::Approx(0.0));
}

TEST_CASE("non-resonant averaging: remainder decays with steps and meets the bound") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    f.set_coeff({1, 1}, Complex{0.5, 0.0});
    Annulus an(1.0, 3.0);
    int K = 6;
    ZoneDecomposition zones(an, 1.0 / 32.0 / K, K);
    double eps = 1e-3;

    NormalFormOptions o1;
    o1.steps = 1;
    NormalFormOptions o2;
    o2.steps = 3;
    NonresonantAverage a1 = average_nonresonant(f, eps, zones, o1);
    NonresonantAverage a2 = average_nonresonant(f, eps, zones, o2);
    CHECK(a2.nf.norm_remainder <= a1.nf.norm_remainder * (1 + 1e-12));
    // the potential has no tail above K, so iteration drives the
    // remainder far below the exponential target
    CHECK(a2.rem_sup_over_eps <= a2.bound_rem);
    // the angle-average correction is second order
    CHECK(a1.sup_g0_over_eps <= 10.0 * a1.bound_g0_rel);
}

TEST_CASE("smallness condition bookkeeping") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 1}, Complex{1e-9, 0.0});
    Box box = Box::square({1.7552, 0.9589}, 0.01);
    AAHamiltonian ham = make_mechanical(f, 1.0, box, 8);
    NormalFormOptions opt;
    opt.strict_smallness = true;
    NormalFormResult nf = normalize(ham, Lambda{}, 0.2, 4, opt);
    CHECK(nf.smallness_ok);
    CHECK(nf.theta_star < 1.0);
    CHECK(nf.bound_g_ok);
    CHECK(nf.bound_remainder_ok);

    // a large perturbation violates the precondition in strict mode
    FourierSeries2 big(1.0);
    big.set_coeff({1, 1}, Complex{0.5, 0.0});
    AAHamiltonian ham2 = make_mechanical(big, 1.0, box, 8);
    CHECK_THROWS_AS(normalize(ham2, Lambda{}, 0.2, 4, opt), std::runtime_error);
}

TEST_CASE("energy conservation under the realized transformation") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    f.set_coeff({1, 1}, Complex{0.3, 0.1});
    Annulus an(1.0, 3.0);
    int K = 5;
    ZoneDecomposition zones(an, 1.0 / 32.0 / K, K);
    double eps = 1e-4;
    NormalFormOptions opt;
    opt.steps = 2;
    NonresonantAverage av = average_nonresonant(f, eps, zones, opt);
    const NormalFormResult& nf = av.nf;

    // H(Psi(z)) vs (h + g + remainder)(z) at interior sample points
    ModeFunction total(nf.g.box(), nf.g.grid_n());
    total.set_mode({0, 0}, nf.h0);
    total += nf.g;
    total += nf.remainder;

    Box box = nf.g.box();
    AAHamiltonian ham = make_mechanical(f, eps, box, 16);
    for (double fx : {-0.4, 0.1, 0.5}) {
        Vec2 y{box.center[0] + fx * box.half[0], box.center[1] - fx * box.half[1]};
        Vec2 x{0.7 + fx, 1.9 - fx};
        auto img = nf.transform(y, x, 64);
        double lhs = ham.H.eval(img[0], img[1]).real();
        double rhs = total.eval(y, x).real();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("transformation is symplectic to discretization tolerance") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    f.set_coeff({1, 1}, Complex{0.3, 0.0});
    Annulus an(1.0, 3.0);
    int K = 5;
    ZoneDecomposition zones(an, 1.0 / 32.0 / K, K);
    NormalFormOptions opt;
    opt.steps = 1;
    NonresonantAverage av = average_nonresonant(f, 1e-4, zones, opt);
    const NormalFormResult& nf = av.nf;
    Box box = nf.g.box();

    Vec2 y0{box.center[0], box.center[1]};
    Vec2 x0{1.1, 0.4};
    const double hy = 1e-3 * box.half[0], hx = 1e-4;
    double J[4][4];
    for (int c = 0; c < 4; ++c) {
        Vec2 yp = y0, xp = x0, ym = y0, xm = x0;
        double h = c < 2 ? hy : hx;
        (c < 2 ? (c == 0 ? yp[0] : yp[1]) : (c == 2 ? xp[0] : xp[1])) += h;
        (c < 2 ? (c == 0 ? ym[0] : ym[1]) : (c == 2 ? xm[0] : xm[1])) -= h;
        auto ip = nf.transform(yp, xp, 64);
        auto im = nf.transform(ym, xm, 64);
        J[0][c] = (ip[0][0] - im[0][0]) / (2 * h);
        J[1][c] = (ip[0][1] - im[0][1]) / (2 * h);
        J[2][c] = (ip[1][0] - im[1][0]) / (2 * h);
        J[3][c] = (ip[1][1] - im[1][1]) / (2 * h);
    }
    // 4x4 determinant by cofactor expansion
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return J[r0][c0] * (J[r1][c1] * J[r2][c2] - J[r1][c2] * J[r2][c1]) -
               J[r0][c1] * (J[r1][c0] * J[r2][c2] - J[r1][c2] * J[r2][c0]) +
               J[r0][c2] * (J[r1][c0] * J[r2][c1] - J[r1][c1] * J[r2][c0]);
    };
    double det = J[0][0] * det3(1, 2, 3, 1, 2, 3) - J[0][1] * det3(1, 2, 3, 0, 2, 3) +
                 J[0][2] * det3(1, 2, 3, 0, 1, 3) - J[0][3] * det3(1, 2, 3, 0, 1, 2);
    CHECK(det == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("projection algebra") {
    Box box = Box::square({1.0, 1.0}, 0.1);
    FourierSeries2 f = random_series(1.0, 20, 5, 31);
    ModeFunction m = constant_modes(f, box, 6);
    Lambda lam{Mode{1, -1}};
    ModeFunction a = m.lattice_part(lam);
    ModeFunction b = m.lattice_complement(lam);
    // P + P^perp = identity (mode sets partition)
    CHECK(a.mode_count() + b.mode_count() == m.mode_count());
    // idempotence
    CHECK(a.lattice_part(lam).mode_count() == a.mode_count());
    CHECK(b.lattice_complement(lam).mode_count() == b.mode_count());
    // orthogonality
    CHECK(a.lattice_complement(lam).mode_count() == 0);
    CHECK(b.lattice_part(lam).mode_count() == 0);
    for (const auto& [k, g] : a.modes()) CHECK(lam.contains(k));
}
