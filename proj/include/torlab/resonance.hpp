#ifndef TORLAB_RESONANCE_HPP
#define TORLAB_RESONANCE_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "torlab/lattice.hpp"

namespace torlab {

using Vec2 = std::array<double, 2>;

/// Closed action annulus r_inner <= |y| <= r_outer.
struct Annulus {
    double r_inner = 0.0;
    double r_outer = 0.0;

    Annulus(double r, double R);
    bool contains(const Vec2& y) const;
};

/// Orthogonal projection of y onto the line through k.
Vec2 proj_parallel(const Vec2& y, const Mode& k);
/// Orthogonal projection onto the perpendicular line, spanned by (k2,-k1).
Vec2 proj_perp(const Vec2& y, const Mode& k);

/// Rule for the small-divisor threshold alpha.  `lemma` keeps the
/// no-double-resonance hypothesis alpha <= r/(32K) valid; `half_radius`
/// is the alternative alpha = r/2, usable only for small K (the
/// fully non-resonant set becomes empty once K >~ 2R/r).
enum class AlphaRule { lemma, half_radius };

struct ZoneParams {
    double alpha = 0.0;
    int K = 0;
};

/// K = ceil(eps^{-a}) and alpha per the chosen rule.  Requires 0 < a < 1/6.
ZoneParams choose_parameters(double r, double eps, double a,
                             AlphaRule rule = AlphaRule::lemma);

/// The resonance-zone decomposition of an annulus at threshold alpha and
/// Fourier cutoff K.  A point is resonant with generator k when
/// |y.k| <= alpha (closed zones), and fully non-resonant otherwise.
class ZoneDecomposition {
  public:
    ZoneDecomposition(const Annulus& annulus, double alpha, int K);

    const Annulus& annulus() const { return annulus_; }
    double alpha() const { return alpha_; }
    int cutoff() const { return K_; }
    const std::vector<Mode>& generators() const { return generators_; }

    struct Label {
        bool nonresonant = false;
        std::vector<Mode> resonant;  // all k with |y.k| <= alpha
    };

    /// Throws if y lies outside the closed annulus.
    Label classify(const Vec2& y) const;

    /// Margin |y.ell| - r/(4|k|) of the no-double-resonance bound.  The
    /// hypotheses are checked and violations reported distinctly.
    double double_resonance_gap(const Vec2& y, const Mode& k, const Mode& ell) const;

  private:
    Annulus annulus_;
    double alpha_;
    int K_;
    std::vector<Mode> generators_;
};

/// Writes "y1,y2,label" rows for an n x n grid over the annulus bounding
/// box (points outside the annulus are skipped).  Labels are "D0" or
/// "D1:k1:k2[;k1:k2...]".
void write_zone_csv(std::ostream& os, const ZoneDecomposition& zones, int n);

}  // namespace torlab

#endif
