#ifndef TORLAB_FOURIER_HPP
#define TORLAB_FOURIER_HPP

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "torlab/lattice.hpp"

namespace torlab {

using Complex = std::complex<double>;

/// Zero-average real-analytic potential on the 2-torus, stored as a sparse
/// map of Fourier coefficients.  Only the canonical half of each +-k pair
/// is stored; the coefficient at -k is the complex conjugate.  The declared
/// analyticity width s is part of the object.
class FourierSeries2 {
  public:
    explicit FourierSeries2(double width_s);

    double width() const { return s_; }

    /// Sets f_k (and implicitly f_{-k} = conj f_k).  k = 0 is rejected.
    void set_coeff(const Mode& k, Complex v);
    void add_coeff(const Mode& k, Complex v);

    /// Coefficient at any k != 0 (conjugated for the non-canonical half).
    Complex coeff(const Mode& k) const;

    const std::map<Mode, Complex>& canonical() const { return coeffs_; }
    std::size_t canonical_count() const { return coeffs_.size(); }
    int max_norm1() const;

    /// Pointwise value f(x) = sum_k f_k e^{i k.x}  (real by construction).
    double eval(double x1, double x2) const;
    /// Gradient (f_x1, f_x2).
    std::array<double, 2> grad(double x1, double x2) const;

    /// sup_x |grad f| bound:  sum_k |f_k| |k|.
    double grad_sup_bound() const;

  private:
    double s_;
    std::map<Mode, Complex> coeffs_;  // canonical half only
};

/// Restriction of a potential to one generator line: the function
/// F(theta) = sum_{j != 0} c_j e^{i j theta} with c_j = f_{j k}.
/// Canonical half storage in j (j >= 1).
class OneDimProfile {
  public:
    OneDimProfile() = default;
    OneDimProfile(const Mode& gen, std::map<int, Complex> cj);

    const Mode& generator() const { return gen_; }
    const std::map<int, Complex>& canonical() const { return cj_; }
    bool empty() const { return cj_.empty(); }
    int max_order() const;

    Complex coeff(int j) const;

    /// Value of the m-th derivative at theta (m = 0 is the function itself).
    double deriv(double theta, int m) const;
    double eval(double theta) const { return deriv(theta, 0); }

    /// sum_j 2 |c_j| j^m, a sup bound for the m-th derivative.
    double deriv_sup_bound(int m) const;

    /// Dense evaluations of the m-th derivative on n uniform grid points.
    std::vector<double> sample(int n, int m = 0) const;

  private:
    Mode gen_{0, 1};
    std::map<int, Complex> cj_;  // j >= 1
};

/// Weighted sup-norm  sup_k |f_k| e^{|k|_1 s}.  Exact for sparse series.
double norm_s(const FourierSeries2& f, double s);

/// Line projection: profile with c_j = f_{j k}.  k must be a generator.
OneDimProfile project_to_lattice(const FourierSeries2& f, const Mode& k);

/// Splits all modes with |k|_1 <= kmax into per-generator profiles.
/// Resumming the profiles reproduces the coefficients exactly.
std::map<Mode, OneDimProfile> decompose(const FourierSeries2& f, int kmax);

/// Coefficient floor  delta |k|_1^{-2} e^{-|k|_1 s}  used both by the
/// genericity test and by the example potential (equality case).
double p1_floor(int norm1, double s, double delta);

/// The stock potential with f_k exactly at the floor for every generator
/// with |k|_1 <= kmax:  f = 2 delta sum |k|_1^{-2} e^{-|k|_1 s} cos(k.x).
FourierSeries2 example_potential(double s, double delta, int kmax);

/// JSON file format: {"s": w, "coeffs": [[k1,k2,re,im], ...]} with only one
/// of each +-k pair listed.
FourierSeries2 load_potential(const std::string& path);
void save_potential(const FourierSeries2& f, const std::string& path);
FourierSeries2 potential_from_json_text(const std::string& text);
std::string potential_to_json_text(const FourierSeries2& f);

}  // namespace torlab

#endif
