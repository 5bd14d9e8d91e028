#ifndef TORLAB_PENDULUM_HPP
#define TORLAB_PENDULUM_HPP

#include <functional>
#include <limits>
#include <vector>

#include "torlab/normal_form.hpp"

namespace torlab {

/// Integer complement of a generator k: det [[kbar],[k]] = kbar1 k2 - kbar2 k1 = 1
/// with |kbar|_inf <= |k|_inf.  Always solvable by the extended Euclid run.
Mode bezout_complement(const Mode& k);

/// Unimodular frame splitting the actions along and across the resonance:
/// the combined map p -> A^T U p has orthogonal columns (pi_k^perp kbar, k),
/// so the kinetic form diagonalizes as |perp|^2 p1^2 / 2 + |k|^2 p2^2 / 2.
struct BezoutFrame {
    Mode k{1, 0};
    Mode kbar{0, -1};
    double beta = 0.0;        // kbar.k / |k|^2
    Vec2 perp{0.0, 0.0};      // pi_k^perp kbar
    double perp_norm2 = 0.0;
    double knorm2 = 1.0;

    Vec2 y_of_p(const Vec2& p) const {
        return {p[0] * perp[0] + p[1] * k.k1, p[0] * perp[1] + p[1] * k.k2};
    }
    Vec2 p_of_y(const Vec2& y) const {
        return {(y[0] * perp[0] + y[1] * perp[1]) / perp_norm2,
                (y[0] * k.k1 + y[1] * k.k2) / knorm2};
    }
};

BezoutFrame make_frame(const Mode& k);

/// The effective one-degree-of-freedom system near a simple resonance after
/// rescaling:  H = |k|^2 p2^2 / 2 + W(p) + cos(q2 + theta_k) + V(p, q2),
/// with p1 a parameter.  W and V are empty for the exact pendulum.
struct PendulumChart {
    enum class Region { upper, lower, inner };  // above / below / inside the separatrix

    Mode k{1, 0};
    double knorm = 1.0;
    double knorm2 = 1.0;
    double theta_k = 0.0;
    BezoutFrame frame;

    double eps = 0.0;
    double lambda = 0.0;   // action rescaling sqrt(2 |f_k| eps)
    double eta = 0.0;      // perturbation size: max(sup |W_pp|, ||V||)
    double rk_bold = std::numeric_limits<double>::infinity();  // rescaled half width
    double p1_center = 0.0;
    double p1_halfwidth = 1.0;
    double z_min_rel = 1e-8;  // closest relative approach to the separatrix

    std::function<double(double, double)> W;          // W(p1, p2), may be empty
    std::function<double(double, double, double)> V;  // V(p1, p2, theta), may be empty

    bool exact() const { return !W && !V; }
    double Wval(double p1, double p2) const { return W ? W(p1, p2) : 0.0; }
    double Vval(double p1, double p2, double th) const { return V ? V(p1, p2, th) : 0.0; }
    /// Potential part of the effective Hamiltonian.
    double potential(double q2, double p1, double p2) const {
        return Wval(p1, p2) + std::cos(q2 + theta_k) + Vval(p1, p2, q2);
    }
    /// Momentum on the given branch at angle q2 and energy E (implicit in
    /// p2 when W or V carry p2 dependence).
    double momentum(double q2, double p1, double E, int branch) const;

    /// Same momentum with the radicand anchored at a reference angle:
    /// E = E_offset + potential(q_anchor, p1, 0).  Near turning points this
    /// form avoids the cancellation of E against the potential.
    double momentum_anchored(double q2, double p1, int branch, double q_anchor,
                             double E_offset) const;

    static PendulumChart exact_pendulum(const Mode& k, double theta_k = 0.0);
};

/// Chart from a simply-resonant normal form: factors out 2 |f_k| eps,
/// rescales the action box and wraps the averaged tables as W and V.
/// Throws when |f_k| is below the coefficient floor (potential outside the
/// class) or when the rescaled width drops below 1.
PendulumChart build_chart(const ResonantAverage& ra, const FourierSeries2& f, double eps,
                          const ZoneDecomposition& zones, double delta);

struct SeparatrixInfo {
    double E0 = 0.0;     // hyperbolic critical energy (separatrix)
    double q_hyp = 0.0;  // hyperbolic angle
    double E_min = 0.0;  // elliptic bottom
    double q_ell = 0.0;  // elliptic angle
};

/// Critical points of theta -> cos(theta + theta_k) + V(p1, 0, theta) by
/// root-finding on the derivative; the separatrix is the top critical value
/// (plus W), the bottom is the librational energy floor.
SeparatrixInfo separatrix(const PendulumChart& chart, double p1);
double separatrix_energy(const PendulumChart& chart, double p1);

/// Action I2 = (2 pi)^{-1} closed integral of p2 dq2 on the level set of E.
/// Rotational regions integrate over the full circle; the inner region
/// closes the librational loop between the turning points (square-root
/// substitution at both ends).
double action_of_energy(const PendulumChart& chart, PendulumChart::Region region, double E,
                        double p1, double quad_tol = 1e-12);

/// Inverse of action_of_energy on its region (monotone in E).
double energy_of_action(const PendulumChart& chart, PendulumChart::Region region, double I2,
                        double p1, double quad_tol = 1e-12);

/// Orbit period at energy E.
double period(const PendulumChart& chart, PendulumChart::Region region, double E, double p1,
              double quad_tol = 1e-12);

/// Least-squares split  I2(z) = phi(z) + chi(z) z log z  on a z-grid of
/// distances from the separatrix energy (z = |E - E0|); phi and chi are low
/// degree polynomials in the scaled variable z / z_scale.
struct LogSplitFit {
    std::vector<double> phi;  // coefficients of (z/z_scale)^m
    std::vector<double> chi;  // coefficients of (z/z_scale)^{m+1} log(z/z_scale)
    double z_scale = 1.0;
    double residual = 0.0;    // sup-norm over the fitted grid

    double chi0() const;          // z log z coefficient at z = 0
    double value(double z) const;
    double d1(double z) const;
    double d2(double z) const;
};

LogSplitFit log_split_fit(const PendulumChart& chart, PendulumChart::Region region, double p1,
                          const std::vector<double>& zgrid, int deg_phi = 4, int deg_chi = 3,
                          double quad_tol = 1e-12);

/// Hessian of  h(I) = |perp|^2 I1^2 / 2 + E(I1, I2)  on a (p1, z) grid,
/// with the I2 derivatives taken analytically from the log-split fit and
/// the I1 derivatives by finite differences across the p1 grid.
struct TwistSample {
    PendulumChart::Region region;
    double p1 = 0.0, z = 0.0, I2 = 0.0;
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;
    double det = 0.0, opnorm = 0.0;
};

struct TwistFitResult {
    double z_exponent = 0.0;    // p in |det| ~ amp * z^p * log(1/z)^b
    double log_exponent = 0.0;  // b
    double amplitude = 0.0;
    double r2 = 0.0;
};

struct TwistReport {
    std::vector<TwistSample> samples;
    TwistFitResult det_fit;   // on |det h''|
    TwistFitResult e22_fit;   // on |E_{I2 I2}|
    double amp_ratio = 0.0;   // amplitude(det) / amplitude(E22), ~ |perp|^2
    double fit_z_lo = 1e-6, fit_z_hi = 1e-2;
};

TwistReport twist_hessian(const PendulumChart& chart, const std::vector<double>& p1grid,
                          const std::vector<double>& zgrid,
                          const std::vector<PendulumChart::Region>& regions,
                          double fit_z_lo = 1e-6, double fit_z_hi = 1e-2,
                          double quad_tol = 1e-12);

/// Where the twist bounds ||h''|| <= 1/theta and |det h''| >= theta hold;
/// measures the excluded complement over the sampled (p1, z) cells.
struct AdmissibleRegion {
    double theta = 0.0;
    std::vector<bool> admissible;  // aligned with report.samples
    double excluded_measure = 0.0;
    double total_measure = 0.0;
};

AdmissibleRegion admissible_region(const TwistReport& report, double theta);

/// Admissibility scale driven from the perturbation size.
double theta_from_eps(double eps, double a, double c2);

/// Angle-side machinery of the action-angle chart, used to check that the
/// frame-conjugated chart is single-valued on the torus.
struct AngleCoords {
    double I2 = 0.0;
    double phi2 = 0.0;
    double dSdI1 = 0.0;  // generating-function shift entering phi1
};

/// Time along the orbit from the reference angle to q2.
double orbit_time(const PendulumChart& chart, PendulumChart::Region region, double E,
                  double p1, double q2, double quad_tol = 1e-12);

AngleCoords aa_angles(const PendulumChart& chart, PendulumChart::Region region, double p1,
                      double p2, double q2, double quad_tol = 1e-12);

/// Forward map (I2, phi2) -> (p2, q2) at fixed p1.
std::array<double, 2> aa_point(const PendulumChart& chart, PendulumChart::Region region,
                               double I2, double phi2, double p1, double quad_tol = 1e-12);

/// The straightened chart after conjugating the action-angle map with the
/// kinetic-decoupling frame: (P, Q) -> (J, Theta).  Angle shifts of Q by
/// 2 pi produce exact 2 pi integer shifts of Theta.
std::array<Vec2, 2> straightened_chart(const PendulumChart& chart, const Vec2& P,
                                       const Vec2& Q, double quad_tol = 1e-12);

}  // namespace torlab

#endif
