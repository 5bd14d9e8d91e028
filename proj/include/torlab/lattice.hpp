#ifndef TORLAB_LATTICE_HPP
#define TORLAB_LATTICE_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace torlab {

/// Integer vector in Z^2, used both as a Fourier mode index and as a
/// lattice direction in action space.
struct Mode {
    int k1 = 0;
    int k2 = 0;

    friend constexpr auto operator<=>(const Mode&, const Mode&) = default;

    constexpr Mode operator-() const { return {-k1, -k2}; }
    constexpr Mode operator+(const Mode& o) const { return {k1 + o.k1, k2 + o.k2}; }
    constexpr Mode operator*(int j) const { return {j * k1, j * k2}; }

    constexpr bool is_zero() const { return k1 == 0 && k2 == 0; }
    int norm1() const { return std::abs(k1) + std::abs(k2); }
    int norm_inf() const { return std::max(std::abs(k1), std::abs(k2)); }
    double norm() const { return std::hypot(double(k1), double(k2)); }
    double dot(double y1, double y2) const { return k1 * y1 + k2 * y2; }
    long long dot(const Mode& o) const {
        return (long long)k1 * o.k1 + (long long)k2 * o.k2;
    }
};

int gcd_nonneg(int a, int b);

/// Generators of the maximal one-dimensional sublattices of Z^2:
/// k1 > 0 with gcd(k1,k2) = 1, together with (0,1).  Every nonzero
/// integer vector lies on exactly one line Z*g with g a generator.
bool is_generator(const Mode& k);

/// All generators with |k|_1 <= kmax, sorted lexicographically.
std::vector<Mode> enumerate_generators(int kmax);

/// The generator line through a nonzero m:  m = j * gen with j != 0.
struct LinePoint {
    Mode gen;
    int j = 0;
};
LinePoint generator_line(const Mode& m);

/// Canonical representative of the pair {m, -m}: the one with m1 > 0,
/// or (0, m2) with m2 > 0.  Used for half storage of real series.
inline bool is_canonical(const Mode& m) {
    return m.k1 > 0 || (m.k1 == 0 && m.k2 > 0);
}

}  // namespace torlab

#endif
