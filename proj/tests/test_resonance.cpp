#include <cmath>
#include <stdexcept>
#include <random>
#include <sstream>

#include "doctest.h"
#include "torlab/resonance.hpp"

using namespace torlab;

TEST_CASE("projections onto a lattice line") {
    Vec2 y{1.0, 0.0};
    Vec2 p = proj_parallel(y, {0, 1});
    Vec2 q = proj_perp(y, {0, 1});
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(0.0));

    Vec2 y2{1.0, 1.0};
    Vec2 p2 = proj_parallel(y2, {1, 1});
    Vec2 q2 = proj_perp(y2, {1, 1});
    CHECK(p2[0] == doctest::Approx(1.0));
    CHECK(p2[1] == doctest::Approx(1.0));
    CHECK(std::abs(q2[0]) < 1e-15);
    CHECK(std::abs(q2[1]) < 1e-15);

    Vec2 q3 = proj_perp({2.0, 1.0}, {1, -1});
    CHECK(q3[0] == doctest::Approx(1.5));
    CHECK(q3[1] == doctest::Approx(1.5));

    CHECK_THROWS_AS(proj_parallel(y, {0, 0}), std::invalid_argument);

    // parallel + perpendicular = identity, both idempotent, perp kills k
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> ki(-9, 9);
    for (int t = 0; t < 200; ++t) {
        Mode k{ki(rng), ki(rng)};
        if (k.is_zero()) continue;
        Vec2 v{u(rng), u(rng)};
        Vec2 a = proj_parallel(v, k), b = proj_perp(v, k);
        CHECK(a[0] + b[0] == doctest::Approx(v[0]).epsilon(1e-12));
        CHECK(a[1] + b[1] == doctest::Approx(v[1]).epsilon(1e-12));
        Vec2 aa = proj_parallel(a, k);
        Vec2 bb = proj_perp(b, k);
        CHECK(aa[0] == doctest::Approx(a[0]).epsilon(1e-12));
        CHECK(bb[1] == doctest::Approx(b[1]).epsilon(1e-12));
        Vec2 pk = proj_perp({double(k.k1), double(k.k2)}, k);
        CHECK(std::abs(pk[0]) < 1e-12);
        CHECK(std::abs(pk[1]) < 1e-12);
    }
}

TEST_CASE("parameter choice") {
    ZoneParams p = choose_parameters(1.0, 1e-6, 0.1);
    CHECK(p.K == 4);  // ceil(10^0.6) = ceil(3.98...)
    CHECK(p.alpha == doctest::Approx(1.0 / 128.0));
    CHECK(p.alpha * 32.0 * p.K <= 1.0 + 1e-12);

    // K nondecreasing as eps decreases
    int lastK = 0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        ZoneParams q = choose_parameters(1.0, eps, 0.12);
        CHECK(q.K >= lastK);
        lastK = q.K;
    }

    ZoneParams h = choose_parameters(1.0, 1e-4, 0.1, AlphaRule::half_radius);
    CHECK(h.alpha == doctest::Approx(0.5));

    CHECK_THROWS_AS(choose_parameters(1.0, 1e-6, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(choose_parameters(1.0, 1e-6, 0.0), std::invalid_argument);
}

TEST_CASE("zone classification") {
    Annulus an(0.5, 2.0);
    ZoneDecomposition zones(an, 0.02, 4);

    // exact resonance with (0,1)
    auto lab = zones.classify({1.0, 0.0});
    CHECK(!lab.nonresonant);
    bool has01 = false;
    for (const Mode& k : lab.resonant) has01 |= (k == Mode{0, 1});
    CHECK(has01);

    CHECK_THROWS_AS(zones.classify({0.1, 0.1}), std::domain_error);
    CHECK_THROWS_AS(zones.classify({3.0, 0.0}), std::domain_error);

    // coverage: every annulus grid point gets a label
    int labeled = 0, total = 0;
    for (int i = 0; i < 80; ++i)
        for (int j = 0; j < 80; ++j) {
            Vec2 y{-2.0 + 4.0 * (i + 0.5) / 80, -2.0 + 4.0 * (j + 0.5) / 80};
            if (!an.contains(y)) continue;
            ++total;
            auto l = zones.classify(y);
            if (l.nonresonant || !l.resonant.empty()) ++labeled;
        }
    CHECK(labeled == total);
    CHECK(total > 1000);
}

TEST_CASE("no-double-resonance margin") {
    Annulus an(1.0, 3.0);
    int K = 4;
    ZoneDecomposition zones(an, 1.0 / (32.0 * K), K);

    double m = zones.double_resonance_gap({1.0 / 256.0, 1.0}, {1, 0}, {0, 1});
    CHECK(m == doctest::Approx(0.75));

    CHECK_THROWS_AS(zones.double_resonance_gap({1.0 / 256.0, 1.0}, {1, 0}, {2, 0}),
                    std::invalid_argument);  // ell on the line of k
    CHECK_THROWS_AS(zones.double_resonance_gap({1.0 / 256.0, 1.0}, {1, 0}, {40, 1}),
                    std::invalid_argument);  // |ell| > 8K
    ZoneDecomposition bad(an, 0.5, K);
    CHECK_THROWS_AS(bad.double_resonance_gap({0.01, 1.0}, {1, 0}, {0, 1}),
                    std::invalid_argument);  // alpha too large

    // randomized sweep: margin is never negative on admissible samples
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto gens = zones.generators();
    int tested = 0;
    while (tested < 20000) {
        const Mode& k = gens[std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng)];
        if (k.norm() > double(K)) continue;
        // sample y in the resonant strip of k inside the annulus
        double t = zones.alpha() * (2.0 * u01(rng) - 1.0);      // y.k / |k|
        double rho = 1.05 + 1.85 * u01(rng);                     // along the line
        double sgn = u01(rng) < 0.5 ? -1.0 : 1.0;
        double kn = k.norm();
        Vec2 along{sgn * rho * k.k2 / kn, -sgn * rho * k.k1 / kn};
        Vec2 y{along[0] + t * k.k1 / (kn * kn), along[1] + t * k.k2 / (kn * kn)};
        if (!an.contains(y)) continue;
        if (std::abs(k.dot(y[0], y[1])) > zones.alpha()) continue;
        Mode ell{std::uniform_int_distribution<int>(-8 * K, 8 * K)(rng),
                 std::uniform_int_distribution<int>(-8 * K, 8 * K)(rng)};
        if (ell.is_zero() || ell.norm() > 8.0 * K) continue;
        if ((long long)k.k2 * ell.k1 - (long long)k.k1 * ell.k2 == 0) continue;
        double margin = zones.double_resonance_gap(y, k, ell);
        CHECK(margin >= 0.0);
        ++tested;
    }
}

TEST_CASE("zone CSV export") {
    Annulus an(0.5, 1.5);
    ZoneDecomposition zones(an, 0.05, 3);
    std::ostringstream os;
    write_zone_csv(os, zones, 20);
    std::string text = os.str();
    CHECK(text.rfind("y1,y2,label\n", 0) == 0);
    CHECK(text.find("D0") != std::string::npos);
    CHECK(text.find("D1:") != std::string::npos);
}
