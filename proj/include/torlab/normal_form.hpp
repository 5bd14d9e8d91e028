#ifndef TORLAB_NORMAL_FORM_HPP
#define TORLAB_NORMAL_FORM_HPP

#include <functional>
#include <string>
#include <vector>

#include "torlab/fourier.hpp"
#include "torlab/mode_function.hpp"
#include "torlab/resonance.hpp"

namespace torlab {

/// Hamiltonian h(y) + f(y,x) sampled over a widened action box.  The box of
/// H is the widened domain itself: center +- r per direction.
struct AAHamiltonian {
    ModeFunction H;  // k = 0 carries h
    double r = 0.0;  // action widening (box halfwidth)
    double s = 0.0;  // angle analyticity width
};

/// Builds |y|^2/2 + eps f(x) over the box (f coefficients are constant in y).
AAHamiltonian make_mechanical(const FourierSeries2& f, double eps, const Box& box, int grid_n);

struct NonresCertificate {
    bool ok = false;
    double worst_margin = 0.0;  // min over sample and modes of |h'(y).k| - alpha
    Mode worst_mode{0, 0};
};

/// Checks |grad_h(y).k| >= alpha over the sample for every k outside the
/// lattice with |k|_1 <= K.  Throws on an empty sample.
NonresCertificate nonresonance_certificate(
    const std::function<Vec2(const Vec2&)>& grad_h, const std::vector<Vec2>& sample,
    const Lambda& lambda, double alpha, int K);

/// Same check with the sample taken from the nodal grid of h.
NonresCertificate nonresonance_certificate(const GridFn& h, const Lambda& lambda,
                                           double alpha, int K);

struct NormalFormOptions {
    int steps = 2;
    int lie_order_max = 12;
    double lie_stop_rel = 1e-13;   // stop the Lie series at this relative size
    double drop_rel = 1e-18;       // pair/mode drop threshold, relative
    bool strict_smallness = false; // enforce the theta_* < 1 precondition
};

/// Outcome of the finite-order averaging.  The split H o Psi = h + g + rem
/// is exact at coefficient level: g is supported on the lattice,
/// the remainder has no lattice modes at all.
struct NormalFormResult {
    Lambda lambda;
    double alpha = 0.0;
    int K = 0;
    double r_in = 0.0, s_in = 0.0;

    GridFn h0;               // original integrable part
    ModeFunction g;          // lattice part minus h0 (includes k = 0 corrections)
    ModeFunction remainder;  // lattice-free part
    std::vector<ModeFunction> generators_used;  // one Lie generator per step

    double theta_star = 0.0;  // 2^11 K^2 / (alpha r s) * |||f|||_{r,s}
    bool smallness_ok = false;
    double s_bar = 0.0;       // min(s/2, ln(8/theta_*))

    double norm_f_in = 0.0;           // |||f|||_{r,s}
    double norm_g_minus_pf = 0.0;     // |||g - P_L f|||_{r/2, s(1-1/K)}
    double norm_remainder = 0.0;      // |||rem|||_{r/2, s/2}
    double bound_g = 0.0;             // (theta_*/K) |||f|||
    double bound_remainder = 0.0;     // 2 e^{-(K-2) s_bar} |||f|||
    bool bound_g_ok = false;
    bool bound_remainder_ok = false;

    double truncation_slop = 0.0;  // accumulated dropped mass
    int lie_orders_used = 0;
    bool lie_converged = true;

    /// Evaluates the realized change of variables at a phase point by
    /// integrating the generator flows (time-1 maps, composed in order).
    std::array<Vec2, 2> transform(const Vec2& y, const Vec2& x, int rk_steps = 64) const;
};

/// Finite-order Lie-series normalization: each step solves the homological
/// equation for the cutoff non-lattice part against the current integrable
/// part and applies the time-1 flow by bracket expansion.
NormalFormResult normalize(const AAHamiltonian& ham, const Lambda& lambda, double alpha,
                           int K, const NormalFormOptions& opt = {});

/// Fully non-resonant averaging on a box around a base point of the
/// non-resonant zone; widths r0 = alpha/(2K).  Bounds are recorded in the
/// eps-normalized units of H = |y|^2/2 + eps g0 + eps f0.
struct NonresonantAverage {
    Vec2 base{0.0, 0.0};
    double r0 = 0.0;
    NormalFormResult nf;
    double sup_g0_over_eps = 0.0;     // sup |g0 - <f>| / eps
    double bound_g0_rel = 0.0;        // K^2 / alpha^2  (times eps, times c)
    double rem_sup_over_eps = 0.0;    // sup-Fourier norm of f0 at the shrunk widths
    double bound_rem = 0.0;           // e^{-K s / 3}
};

NonresonantAverage average_nonresonant(const FourierSeries2& f, double eps,
                                       const ZoneDecomposition& zones,
                                       const NormalFormOptions& opt = {},
                                       const Vec2* base_point = nullptr, int grid_n = 16);

/// Picks an annulus point maximizing the scaled divisor min |y.k| |k| over
/// the generators with |k|_1 <= K (a strongly non-resonant direction).
Vec2 pick_nonresonant_point(const ZoneDecomposition& zones, int n_dirs = 4096);

/// Simply-resonant averaging on a box centered on the resonance line of k,
/// widths r_k = r/(32 |k| K), thresholds (r/(4|k|), 8K).  The lattice part
/// splits into the angle-average G0(y) and the effective potential
/// G(y, theta), theta = k.x, with zero theta-average.
struct ResonantAverage {
    Mode k;
    Vec2 base{0.0, 0.0};
    double r_k = 0.0;
    NormalFormResult nf;
    GridFn G0_over_eps;                 // j = 0 coefficient (over eps)
    std::map<int, GridFn> G_over_eps;   // j != 0 profile grids (over eps), j >= 1
    double sup_G0_over_eps = 0.0;
    double dist_G_profile_over_eps = 0.0;  // || G - F ||_{r_k/2, s_* |k|_1} / eps
    double bound_G = 0.0;                  // |k|_1^2 K^2 (times eps, times c)
    double rem_norm_over_eps = 0.0;        // sup-Fourier at (r_k/2, s_*/2)
    double bound_rem = 0.0;                // 2 e^{-(4K-1) s}
    bool lattice_projection_zero = false;  // P_L remainder == 0, exact
};

ResonantAverage average_simple_resonance(const FourierSeries2& f, double eps, const Mode& k,
                                         const ZoneDecomposition& zones,
                                         const NormalFormOptions& opt = {},
                                         double radius = 0.0, int grid_n = 16);

/// JSON serialization of a normal-form record (coefficient tables as
/// Chebyshev node values, norms and step metadata).
std::string normal_form_to_json(const NormalFormResult& nf);

}  // namespace torlab

#endif
