#include <cmath>
#include <stdexcept>
#include <complex>
#include <random>

#include "doctest.h"
#include "torlab/fourier.hpp"
#include "torlab/genericity.hpp"

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

}  // namespace

TEST_CASE("generator enumeration and line decomposition") {
    auto g1 = enumerate_generators(1);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0] == Mode{0, 1});
    CHECK(g1[1] == Mode{1, 0});

    auto g2 = enumerate_generators(2);
    REQUIRE(g2.size() == 4);
    CHECK(g2[1] == Mode{1, -1});
    CHECK(g2[2] == Mode{1, 0});
    CHECK(g2[3] == Mode{1, 1});

    // brute-force count over the |k|_1 <= 10 box
    int count = 0;
    for (int a = -10; a <= 10; ++a)
        for (int b = -10; b <= 10; ++b) {
            Mode k{a, b};
            if (!k.is_zero() && k.norm1() <= 10 && is_generator(k)) ++count;
        }
    CHECK(int(enumerate_generators(10).size()) == count);

    // every nonzero vector lies on exactly one generator line
    for (int a = -20; a <= 20; ++a)
        for (int b = -20; b <= 20; ++b) {
            if (a == 0 && b == 0) continue;
            LinePoint lp = generator_line({a, b});
            CHECK(is_generator(lp.gen));
            CHECK(lp.gen * lp.j == Mode{a, b});
        }
}

TEST_CASE("norm_s on simple series") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});  // cos x1
    CHECK(norm_s(f, 1.0) == doctest::Approx(0.5 * std::exp(1.0)).epsilon(1e-15));

    FourierSeries2 zero(1.0);
    CHECK(norm_s(zero, 1.0) == 0.0);

    // floor-saturated potential: the sup is delta, attained at |k|_1 = 1
    double s = 0.7, delta = 0.3;
    FourierSeries2 ex = example_potential(s, delta, 8);
    double expected = 0.0;
    for (const Mode& k : enumerate_generators(8))
        expected = std::max(expected, p1_floor(k.norm1(), s, delta) * std::exp(k.norm1() * s));
    CHECK(norm_s(ex, s) == doctest::Approx(delta).epsilon(1e-15));
    CHECK(expected == doctest::Approx(delta).epsilon(1e-15));

    CHECK_THROWS_AS(norm_s(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FourierSeries2(1.0).set_coeff({0, 0}, Complex{1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("reality of stored coefficients") {
    FourierSeries2 f(1.0);
    f.set_coeff({-2, 1}, Complex{0.3, -0.4});
    CHECK(f.coeff({-2, 1}) == Complex{0.3, -0.4});
    CHECK(f.coeff({2, -1}) == std::conj(Complex{0.3, -0.4}));
    // pointwise values are real
    CHECK(std::abs(f.eval(0.3, 1.1) -
                   2.0 * (0.3 * std::cos(-2 * 0.3 + 1.1) + 0.4 * std::sin(-2 * 0.3 + 1.1))) <
          1e-15);
}

TEST_CASE("project_to_lattice") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 1}, Complex{0.5, 0.0});  // cos(x1 + x2)
    OneDimProfile p = project_to_lattice(f, {1, 1});
    CHECK(p.coeff(1) == Complex{0.5, 0.0});
    CHECK(p.eval(0.0) == doctest::Approx(1.0));          // cos 0
    CHECK(p.eval(M_PI / 2) == doctest::Approx(0.0).epsilon(1e-12));

    FourierSeries2 g(1.0);
    g.set_coeff({1, 0}, Complex{0.5, 0.0});
    g.set_coeff({2, 0}, Complex{0.5, 0.0});  // cos x1 + cos 2x1
    OneDimProfile q = project_to_lattice(g, {1, 0});
    CHECK(q.coeff(1) == Complex{0.5, 0.0});
    CHECK(q.coeff(2) == Complex{0.5, 0.0});
    for (double th : {0.1, 1.7, 4.0})
        CHECK(q.eval(th) == doctest::Approx(std::cos(th) + std::cos(2 * th)).epsilon(1e-13));

    // the stock potential projects to a pure cosine on every line
    double s = 1.0, delta = 0.4;
    FourierSeries2 ex = example_potential(s, delta, 6);
    for (const Mode& k : enumerate_generators(4)) {
        OneDimProfile pr = project_to_lattice(ex, k);
        double a = p1_floor(k.norm1(), s, delta);
        CHECK(pr.coeff(1) == Complex{a, 0.0});
        CHECK(pr.eval(0.3) == doctest::Approx(2 * a * std::cos(0.3)).epsilon(1e-13));
    }

    CHECK_THROWS_AS(project_to_lattice(f, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(project_to_lattice(f, {-1, 0}), std::invalid_argument);
}

TEST_CASE("decompose and exact resummation") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.2, 0.1});
    f.set_coeff({2, 0}, Complex{-0.3, 0.0});
    auto d = decompose(f, 5);
    REQUIRE(d.size() == 1);
    CHECK(d.begin()->first == Mode{1, 0});
    CHECK(d.begin()->second.coeff(1) == Complex{0.2, 0.1});
    CHECK(d.begin()->second.coeff(2) == Complex{-0.3, 0.0});

    FourierSeries2 g(1.0);
    g.set_coeff({1, 1}, Complex{0.2, 0.0});
    g.set_coeff({1, -1}, Complex{0.4, 0.0});
    CHECK(decompose(g, 5).size() == 2);

    // oracle: resumming the profiles reproduces every coefficient exactly
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        FourierSeries2 h = random_series(0.8, 20, 7, seed);
        auto parts = decompose(h, h.max_norm1());
        FourierSeries2 back(0.8);
        for (const auto& [gen, prof] : parts)
            for (const auto& [j, c] : prof.canonical()) back.set_coeff(gen * j, c);
        CHECK(back.canonical().size() == h.canonical().size());
        for (const auto& [k, c] : h.canonical()) CHECK(back.coeff(k) == c);
    }
}

TEST_CASE("norm monotonicity in the width") {
    FourierSeries2 f = random_series(1.0, 25, 6, 99);
    double n1 = norm_s(f, 0.4), n2 = norm_s(f, 0.9);
    CHECK(n1 <= n2 * (1 + 1e-15));
}

TEST_CASE("threshold_K") {
    CHECK(threshold_K(1.0, 1.0, 2.0) == 2);
    CHECK(threshold_K(0.1, 0.1, 2.0) == 93);  // 2 * 10 * log(100) = 92.10...
    CHECK(threshold_K(10.0, 1.0, 2.0) == 2);  // max term is 1
    CHECK_THROWS_AS(threshold_K(1.0, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_K(1.0, 1.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_K(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("class membership of the stock potential") {
    double s = 1.0, delta = 0.5;
    FourierSeries2 f = example_potential(s, delta, 8);
    GenericityReport rep = check_class_membership(f, delta, 8);
    CHECK(rep.passed());
    CHECK(rep.status() == CheckStatus::pass);
    // equality case: the coefficient floor margin is exactly zero
    CHECK(rep.p1_worst_margin == 0.0);
}

TEST_CASE("single-cosine potential fails the coefficient floor") {
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    GenericityReport rep = check_P1(f, 1.0, 0.5, 6);
    // every generator above the threshold except (1,0) has a zero coefficient
    int above = 0;
    for (const Mode& k : enumerate_generators(6))
        if (k.norm1() > rep.threshold) ++above;
    CHECK(int(rep.p1_failures.size()) == above);  // (1,0) is below the threshold
    for (const auto& e : rep.p1_failures) CHECK(e.gen != Mode{1, 0});
}

TEST_CASE("profile check P2 pass and fail") {
    double s = 1.0, delta = 0.5;
    FourierSeries2 f = example_potential(s, delta, 4);
    GenericityReport rep = check_P2(f, s, delta);
    CHECK(rep.p2_failures.empty());
    CHECK(rep.inconclusive.empty());

    // a potential missing a low line fails there
    FourierSeries2 g(1.0);
    g.set_coeff({1, 0}, Complex{0.5, 0.0});
    GenericityReport rep2 = check_P2(g, 1.0, 0.5);
    CHECK(!rep2.p2_failures.empty());
}

TEST_CASE("critical-value distinctness P3") {
    // cos t + cos 2t has two symmetric interior critical points at the same
    // value; a small odd term separates them
    FourierSeries2 f(1.0);
    f.set_coeff({1, 0}, Complex{0.5, 0.0});
    f.set_coeff({2, 0}, Complex{0.5, 0.0});
    f.set_coeff({0, 1}, Complex{0.5, 0.0});
    f.set_coeff({1, 1}, Complex{0.25, 0.0});
    f.set_coeff({1, -1}, Complex{0.25, 0.0});
    GenericityReport rep = check_P3(f, 1.0, 0.5);
    bool found = false;
    for (const auto& e : rep.p3_failures) found |= (e.gen == Mode{1, 0});
    CHECK(found);

    FourierSeries2 g(1.0);
    g.set_coeff({1, 0}, Complex{0.5, 0.0});
    g.set_coeff({2, 0}, Complex{0.5, 0.0});
    g.set_coeff({3, 0}, Complex{0.0, 0.02});  // odd component breaks the symmetry
    g.set_coeff({0, 1}, Complex{0.5, 0.0});
    g.set_coeff({1, 1}, Complex{0.25, 0.0});
    g.set_coeff({1, -1}, Complex{0.25, 0.0});
    GenericityReport rep2 = check_P3(g, 1.0, 0.5);
    for (const auto& e : rep2.p3_failures) CHECK(e.gen != Mode{1, 0});
}

TEST_CASE("profile critical points against a dense-scan oracle") {
    FourierSeries2 g(1.0);
    g.set_coeff({1, 0}, Complex{0.5, 0.0});
    g.set_coeff({2, 0}, Complex{0.5, 0.0});
    OneDimProfile F = project_to_lattice(g, {1, 0});
    auto crit = profile_critical_points(F, 4096, 1e-12);
    // oracle: dense scan for local extrema of F
    int n = 1 << 16;
    int extrema = 0;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = F.eval(2 * M_PI * i / n);
    for (int i = 0; i < n; ++i) {
        double a = vals[(i + n - 1) % n], b = vals[i], c = vals[(i + 1) % n];
        if ((b - a) * (c - b) < 0) ++extrema;
    }
    CHECK(int(crit.size()) == extrema);
    for (double t : crit) CHECK(std::abs(F.deriv(t, 1)) < 1e-9);
}

TEST_CASE("stock potential coefficients and pointwise value") {
    double s = 1.0, delta = 0.5;
    FourierSeries2 f = example_potential(s, delta, 1);
    CHECK(f.canonical_count() == 2);  // (0,1) and (1,0)
    CHECK(f.coeff({1, 0}) == Complex{delta * std::exp(-1.0), 0.0});
    CHECK(f.coeff({0, 1}) == Complex{delta * std::exp(-1.0), 0.0});
    // f(0,0) = 2 delta e^{-s} * 2, both cosines at 1
    CHECK(f.eval(0.0, 0.0) == doctest::Approx(4.0 * delta * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("potential JSON round trip") {
    FourierSeries2 f = random_series(0.9, 12, 5, 7);
    std::string text = potential_to_json_text(f);
    FourierSeries2 g = potential_from_json_text(text);
    CHECK(g.width() == f.width());
    CHECK(g.canonical().size() == f.canonical().size());
    for (const auto& [k, c] : f.canonical()) CHECK(g.coeff(k) == c);

    CHECK_THROWS(potential_from_json_text(
        R"({"s":1.0,"coeffs":[[1,0,0.5,0.0],[-1,0,0.5,0.0]]})"));
    CHECK_THROWS(potential_from_json_text(R"({"s":1.0,"coeffs":[[0,0,0.5,0.0]]})"));
}
