#ifndef TORLAB_MODE_FUNCTION_HPP
#define TORLAB_MODE_FUNCTION_HPP

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>

#include "torlab/lattice.hpp"

namespace torlab {

using Complex = std::complex<double>;
using Vec2 = std::array<double, 2>;

/// Rectangle in action space.
struct Box {
    Vec2 center{0.0, 0.0};
    Vec2 half{1.0, 1.0};

    static Box square(const Vec2& c, double halfwidth) { return {c, {halfwidth, halfwidth}}; }
    Box shrunk(double factor) const { return {center, {half[0] * factor, half[1] * factor}}; }
};

/// Complex-valued function of the action y sampled on a tensor
/// Chebyshev-Lobatto grid over a Box.  Values are stored row-major,
/// v[i*n + j] at (node_i in y1, node_j in y2).
class GridFn {
  public:
    GridFn() = default;
    GridFn(const Box& box, int n);
    static GridFn sample(const Box& box, int n, const std::function<Complex(double, double)>& f);
    static GridFn constant(const Box& box, int n, Complex v);

    const Box& box() const { return box_; }
    int n() const { return n_; }
    const std::vector<Complex>& values() const { return v_; }
    std::vector<Complex>& values() { return v_; }

    Vec2 node(int i, int j) const;

    Complex eval(double y1, double y2) const;  // barycentric, inside the box
    GridFn d1() const;                         // d/dy1
    GridFn d2() const;                         // d/dy2

    double max_abs() const;                    // over nodes
    /// sum of |Chebyshev coefficients|, a sup bound over the whole box
    double sup_bound() const;
    GridFn resampled(const Box& newbox) const;

    GridFn& operator+=(const GridFn& o);
    GridFn& operator-=(const GridFn& o);
    GridFn& operator*=(Complex w);
    GridFn conjugated() const;

    /// out += w * a * b, pointwise on shared nodes
    static void add_product(GridFn& out, Complex w, const GridFn& a, const GridFn& b);

  private:
    Box box_;
    int n_ = 0;
    std::vector<Complex> v_;
};

/// A sublattice of Z^2: either {0} or the line through a generator.
struct Lambda {
    std::optional<Mode> gen;  // empty: the trivial lattice {0}

    bool contains(const Mode& m) const {
        if (m.is_zero()) return true;
        if (!gen) return false;
        return (long long)gen->k1 * m.k2 == (long long)gen->k2 * m.k1;
    }
};

/// Function of (y, x) held as a sparse Fourier series in the angles with
/// grid-valued coefficients:  H(y,x) = sum_k H_k(y) e^{i k.x}.  The k = 0
/// entry carries the integrable part.  Real-valued functions keep
/// H_{-k} = conj(H_k).
class ModeFunction {
  public:
    ModeFunction() = default;
    ModeFunction(const Box& box, int n) : box_(box), n_(n) {}

    const Box& box() const { return box_; }
    int grid_n() const { return n_; }
    const std::map<Mode, GridFn>& modes() const { return modes_; }
    std::size_t mode_count() const { return modes_.size(); }

    const GridFn* find(const Mode& k) const;
    GridFn mode_or_zero(const Mode& k) const;
    void set_mode(const Mode& k, GridFn g);
    void add_mode(const Mode& k, const GridFn& g);
    void scale(Complex w);

    ModeFunction& operator+=(const ModeFunction& o);

    /// Drops modes whose nodal max times e^{|k|_1 s} is below drop_abs; the
    /// dropped mass (same metric) is accumulated into *slop if given.
    void prune(double s, double drop_abs, double* slop = nullptr);

    /// Enforces the reality pairing by conjugate averaging.
    void symmetrize();

    /// Lattice projections (coefficient-level, exact).
    ModeFunction lattice_part(const Lambda& lambda) const;
    ModeFunction lattice_complement(const Lambda& lambda) const;
    ModeFunction angle_part() const;  // everything except k = 0
    ModeFunction cutoff(int K) const;          // |k|_1 <= K
    ModeFunction tail(int K) const;            // |k|_1 > K

    /// Norms: sup over nodes of sum_k |H_k(y)| e^{|k|_1 s}, and the
    /// mode-wise sup variant sup_k sup_y |H_k(y)| e^{|k|_1 s}.
    double weighted_l1(double s) const;
    double sup_fourier(double s) const;

    ModeFunction restricted(const Box& newbox) const;

    /// Pointwise value sum_k H_k(y) e^{i k.x}.
    Complex eval(const Vec2& y, const Vec2& x) const;

    /// Canonical Poisson bracket {F, G} = F_x . G_y - F_y . G_x.
    /// Mode pairs whose estimated contribution (weighted at width s) falls
    /// below drop_abs are skipped and accounted into *slop.
    static ModeFunction poisson_bracket(const ModeFunction& F, const ModeFunction& G,
                                        double s, double drop_abs, double* slop = nullptr);

  private:
    Box box_;
    int n_ = 0;
    std::map<Mode, GridFn> modes_;
};

}  // namespace torlab

#endif
