#include "torlab/resonance.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace torlab {

Annulus::Annulus(double r, double R) : r_inner(r), r_outer(R) {
    if (!(0.0 < r && r < R))
        throw std::invalid_argument("Annulus: need 0 < r_inner < r_outer");
}

bool Annulus::contains(const Vec2& y) const {
    double n = std::hypot(y[0], y[1]);
    return n >= r_inner * (1.0 - 1e-12) && n <= r_outer * (1.0 + 1e-12);
}

Vec2 proj_parallel(const Vec2& y, const Mode& k) {
    if (k.is_zero()) throw std::invalid_argument("proj_parallel: k = 0");
    double n2 = double(k.dot(k));
    double t = k.dot(y[0], y[1]) / n2;
    return {t * k.k1, t * k.k2};
}

Vec2 proj_perp(const Vec2& y, const Mode& k) {
    if (k.is_zero()) throw std::invalid_argument("proj_perp: k = 0");
    double n2 = double(k.dot(k));
    double t = (y[0] * k.k2 - y[1] * k.k1) / n2;
    return {t * k.k2, -t * k.k1};
}

ZoneParams choose_parameters(double r, double eps, double a, AlphaRule rule) {
    if (!(a > 0.0 && a < 1.0 / 6.0))
        throw std::invalid_argument("choose_parameters: a must lie in (0, 1/6)");
    if (!(eps > 0.0)) throw std::invalid_argument("choose_parameters: eps must be positive");
    ZoneParams p;
    p.K = int(std::ceil(std::pow(eps, -a)));
    p.alpha = rule == AlphaRule::lemma ? r / (32.0 * p.K) : r / 2.0;
    return p;
}

ZoneDecomposition::ZoneDecomposition(const Annulus& annulus, double alpha, int K)
    : annulus_(annulus), alpha_(alpha), K_(K) {
    if (!(alpha > 0.0)) throw std::invalid_argument("ZoneDecomposition: alpha must be positive");
    if (K < 1) throw std::invalid_argument("ZoneDecomposition: K must be >= 1");
    generators_ = enumerate_generators(K);
}

ZoneDecomposition::Label ZoneDecomposition::classify(const Vec2& y) const {
    if (!annulus_.contains(y))
        throw std::domain_error("classify: point outside the annulus");
    Label lab;
    for (const Mode& k : generators_)
        if (std::abs(k.dot(y[0], y[1])) <= alpha_) lab.resonant.push_back(k);
    lab.nonresonant = lab.resonant.empty();
    return lab;
}

double ZoneDecomposition::double_resonance_gap(const Vec2& y, const Mode& k,
                                               const Mode& ell) const {
    const double r = annulus_.r_inner;
    if (alpha_ > r / (32.0 * K_))
        throw std::invalid_argument("double_resonance_gap: alpha exceeds r/(32K)");
    if (!is_generator(k) || k.norm() > double(K_))
        throw std::invalid_argument("double_resonance_gap: k must be a generator with |k| <= K");
    // ell on the line through k is excluded
    long long cross = (long long)k.k2 * ell.k1 - (long long)k.k1 * ell.k2;
    if (cross == 0)
        throw std::invalid_argument("double_resonance_gap: ell is parallel to k");
    if (ell.norm() > 8.0 * K_)
        throw std::invalid_argument("double_resonance_gap: |ell| exceeds 8K");
    if (!annulus_.contains(y) || std::abs(k.dot(y[0], y[1])) > alpha_)
        throw std::domain_error("double_resonance_gap: y is not in the resonant zone of k");
    return std::abs(ell.dot(y[0], y[1])) - r / (4.0 * k.norm());
}

void write_zone_csv(std::ostream& os, const ZoneDecomposition& zones, int n) {
    os << "y1,y2,label\n";
    const double R = zones.annulus().r_outer;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec2 y{-R + 2.0 * R * (i + 0.5) / n, -R + 2.0 * R * (j + 0.5) / n};
            if (!zones.annulus().contains(y)) continue;
            auto lab = zones.classify(y);
            os << y[0] << ',' << y[1] << ',';
            if (lab.nonresonant) {
                os << "D0";
            } else {
                os << "D1:";
                for (std::size_t t = 0; t < lab.resonant.size(); ++t) {
                    if (t) os << ';';
                    os << lab.resonant[t].k1 << ':' << lab.resonant[t].k2;
                }
            }
            os << '\n';
        }
    }
}

}  // namespace torlab
