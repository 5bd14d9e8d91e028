#include "torlab/lattice.hpp"

#include <numeric>
#include <stdexcept>

namespace torlab {

int gcd_nonneg(int a, int b) {
    return std::gcd(std::abs(a), std::abs(b));
}

bool is_generator(const Mode& k) {
    if (k.k1 == 0) return k.k2 == 1;
    return k.k1 > 0 && gcd_nonneg(k.k1, k.k2) == 1;
}

std::vector<Mode> enumerate_generators(int kmax) {
    if (kmax < 1) throw std::invalid_argument("enumerate_generators: kmax must be >= 1");
    std::vector<Mode> out;
    out.push_back({0, 1});
    for (int k1 = 1; k1 <= kmax; ++k1) {
        for (int k2 = -(kmax - k1); k2 <= kmax - k1; ++k2) {
            if (gcd_nonneg(k1, k2) == 1) out.push_back({k1, k2});
        }
    }
    // already lexicographic by construction except (0,1) is first
    return out;
}

LinePoint generator_line(const Mode& m) {
    if (m.is_zero()) throw std::invalid_argument("generator_line: zero vector");
    int g = gcd_nonneg(m.k1, m.k2);
    Mode dir{m.k1 / g, m.k2 / g};
    int j = g;
    if (!is_generator(dir)) {
        dir = -dir;
        j = -g;
    }
    return {dir, j};
}

}  // namespace torlab
