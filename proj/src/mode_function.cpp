#include "torlab/mode_function.hpp"

#include <cmath>
#include <stdexcept>

#include "torlab/cheb.hpp"

namespace torlab {

GridFn::GridFn(const Box& box, int n) : box_(box), n_(n), v_(n * n, Complex{0.0, 0.0}) {
    if (n < 2) throw std::invalid_argument("GridFn: need n >= 2");
}

GridFn GridFn::sample(const Box& box, int n, const std::function<Complex(double, double)>& f) {
    GridFn g(box, n);
    const auto& x = cheb::lobatto_nodes(n);
    for (int i = 0; i < n; ++i) {
        double y1 = box.center[0] + box.half[0] * x[i];
        for (int j = 0; j < n; ++j) {
            double y2 = box.center[1] + box.half[1] * x[j];
            g.v_[i * n + j] = f(y1, y2);
        }
    }
    return g;
}

GridFn GridFn::constant(const Box& box, int n, Complex v) {
    GridFn g(box, n);
    for (auto& z : g.v_) z = v;
    return g;
}

Vec2 GridFn::node(int i, int j) const {
    const auto& x = cheb::lobatto_nodes(n_);
    return {box_.center[0] + box_.half[0] * x[i], box_.center[1] + box_.half[1] * x[j]};
}

Complex GridFn::eval(double y1, double y2) const {
    const auto& x = cheb::lobatto_nodes(n_);
    const auto& w = cheb::bary_weights(n_);
    const double t1 = (y1 - box_.center[0]) / box_.half[0];
    const double t2 = (y2 - box_.center[1]) / box_.half[1];

    // first interpolate along y2 at each y1 node, then along y1
    std::vector<Complex> line(n_);
    for (int i = 0; i < n_; ++i) {
        Complex num{0.0, 0.0};
        double den = 0.0;
        bool exact = false;
        for (int j = 0; j < n_; ++j) {
            double d = t2 - x[j];
            if (d == 0.0) {
                line[i] = v_[i * n_ + j];
                exact = true;
                break;
            }
            double q = w[j] / d;
            num += q * v_[i * n_ + j];
            den += q;
        }
        if (!exact) line[i] = num / den;
    }
    Complex num{0.0, 0.0};
    double den = 0.0;
    for (int i = 0; i < n_; ++i) {
        double d = t1 - x[i];
        if (d == 0.0) return line[i];
        double q = w[i] / d;
        num += q * line[i];
        den += q;
    }
    return num / den;
}

GridFn GridFn::d1() const {
    const auto& D = cheb::diff_matrix(n_);
    GridFn g(box_, n_);
    const double scale = 1.0 / box_.half[0];
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            Complex acc{0.0, 0.0};
            for (int m = 0; m < n_; ++m) acc += D[i * n_ + m] * v_[m * n_ + j];
            g.v_[i * n_ + j] = acc * scale;
        }
    return g;
}

GridFn GridFn::d2() const {
    const auto& D = cheb::diff_matrix(n_);
    GridFn g(box_, n_);
    const double scale = 1.0 / box_.half[1];
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            Complex acc{0.0, 0.0};
            for (int m = 0; m < n_; ++m) acc += D[j * n_ + m] * v_[i * n_ + m];
            g.v_[i * n_ + j] = acc * scale;
        }
    return g;
}

double GridFn::max_abs() const {
    double m = 0.0;
    for (const auto& z : v_) m = std::max(m, std::abs(z));
    return m;
}

double GridFn::sup_bound() const {
    // |Chebyshev coefficient| sums of real and imaginary parts
    std::vector<double> re(n_), im(n_);
    double total = 0.0;
    // transform rows then columns; accumulate |a_{m1,m2}| by two passes
    std::vector<double> buf_re(n_ * n_), buf_im(n_ * n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            re[j] = v_[i * n_ + j].real();
            im[j] = v_[i * n_ + j].imag();
        }
        auto cre = cheb::coefficients(re);
        auto cim = cheb::coefficients(im);
        for (int j = 0; j < n_; ++j) {
            buf_re[i * n_ + j] = cre[j];
            buf_im[i * n_ + j] = cim[j];
        }
    }
    for (int j = 0; j < n_; ++j) {
        std::vector<double> colr(n_), coli(n_);
        for (int i = 0; i < n_; ++i) {
            colr[i] = buf_re[i * n_ + j];
            coli[i] = buf_im[i * n_ + j];
        }
        auto cr = cheb::coefficients(colr);
        auto ci = cheb::coefficients(coli);
        for (int i = 0; i < n_; ++i) total += std::hypot(cr[i], ci[i]);
    }
    return total;
}

GridFn GridFn::resampled(const Box& newbox) const {
    GridFn g(newbox, n_);
    const auto& x = cheb::lobatto_nodes(n_);
    for (int i = 0; i < n_; ++i) {
        double y1 = newbox.center[0] + newbox.half[0] * x[i];
        for (int j = 0; j < n_; ++j) {
            double y2 = newbox.center[1] + newbox.half[1] * x[j];
            g.v_[i * n_ + j] = eval(y1, y2);
        }
    }
    return g;
}

GridFn& GridFn::operator+=(const GridFn& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

GridFn& GridFn::operator-=(const GridFn& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

GridFn& GridFn::operator*=(Complex w) {
    for (auto& z : v_) z *= w;
    return *this;
}

GridFn GridFn::conjugated() const {
    GridFn g = *this;
    for (auto& z : g.v_) z = std::conj(z);
    return g;
}

void GridFn::add_product(GridFn& out, Complex w, const GridFn& a, const GridFn& b) {
    auto& ov = out.v_;
    const auto& av = a.v_;
    const auto& bv = b.v_;
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += w * av[i] * bv[i];
}

const GridFn* ModeFunction::find(const Mode& k) const {
    auto it = modes_.find(k);
    return it == modes_.end() ? nullptr : &it->second;
}

GridFn ModeFunction::mode_or_zero(const Mode& k) const {
    const GridFn* g = find(k);
    return g ? *g : GridFn(box_, n_);
}

void ModeFunction::set_mode(const Mode& k, GridFn g) { modes_[k] = std::move(g); }

void ModeFunction::add_mode(const Mode& k, const GridFn& g) {
    auto it = modes_.find(k);
    if (it == modes_.end())
        modes_.emplace(k, g);
    else
        it->second += g;
}

void ModeFunction::scale(Complex w) {
    for (auto& [k, g] : modes_) g *= w;
}

ModeFunction& ModeFunction::operator+=(const ModeFunction& o) {
    for (const auto& [k, g] : o.modes_) add_mode(k, g);
    return *this;
}

void ModeFunction::prune(double s, double drop_abs, double* slop) {
    for (auto it = modes_.begin(); it != modes_.end();) {
        double w = it->second.max_abs() * std::exp(it->first.norm1() * s);
        if (w < drop_abs && !it->first.is_zero()) {
            if (slop) *slop += w;
            it = modes_.erase(it);
        } else {
            ++it;
        }
    }
}

void ModeFunction::symmetrize() {
    for (auto& [k, g] : modes_) {
        if (!is_canonical(k)) continue;
        auto it = modes_.find(-k);
        if (it == modes_.end()) continue;
        GridFn avg = g;
        avg += it->second.conjugated();
        avg *= Complex{0.5, 0.0};
        g = avg;
        it->second = avg.conjugated();
    }
}

ModeFunction ModeFunction::lattice_part(const Lambda& lambda) const {
    ModeFunction out(box_, n_);
    for (const auto& [k, g] : modes_)
        if (lambda.contains(k)) out.modes_.emplace(k, g);
    return out;
}

ModeFunction ModeFunction::lattice_complement(const Lambda& lambda) const {
    ModeFunction out(box_, n_);
    for (const auto& [k, g] : modes_)
        if (!lambda.contains(k)) out.modes_.emplace(k, g);
    return out;
}

ModeFunction ModeFunction::angle_part() const {
    ModeFunction out(box_, n_);
    for (const auto& [k, g] : modes_)
        if (!k.is_zero()) out.modes_.emplace(k, g);
    return out;
}

ModeFunction ModeFunction::cutoff(int K) const {
    ModeFunction out(box_, n_);
    for (const auto& [k, g] : modes_)
        if (k.norm1() <= K) out.modes_.emplace(k, g);
    return out;
}

ModeFunction ModeFunction::tail(int K) const {
    ModeFunction out(box_, n_);
    for (const auto& [k, g] : modes_)
        if (k.norm1() > K) out.modes_.emplace(k, g);
    return out;
}

double ModeFunction::weighted_l1(double s) const {
    if (modes_.empty()) return 0.0;
    std::vector<double> acc(n_ * n_, 0.0);
    for (const auto& [k, g] : modes_) {
        double w = std::exp(k.norm1() * s);
        const auto& v = g.values();
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * std::abs(v[i]);
    }
    double m = 0.0;
    for (double a : acc) m = std::max(m, a);
    return m;
}

double ModeFunction::sup_fourier(double s) const {
    double m = 0.0;
    for (const auto& [k, g] : modes_)
        m = std::max(m, g.max_abs() * std::exp(k.norm1() * s));
    return m;
}

ModeFunction ModeFunction::restricted(const Box& newbox) const {
    ModeFunction out(newbox, n_);
    for (const auto& [k, g] : modes_) out.modes_.emplace(k, g.resampled(newbox));
    return out;
}

Complex ModeFunction::eval(const Vec2& y, const Vec2& x) const {
    Complex v{0.0, 0.0};
    for (const auto& [k, g] : modes_) {
        double ph = k.k1 * x[0] + k.k2 * x[1];
        v += g.eval(y[0], y[1]) * std::exp(Complex{0.0, ph});
    }
    return v;
}

ModeFunction ModeFunction::poisson_bracket(const ModeFunction& F, const ModeFunction& G,
                                           double s, double drop_abs, double* slop) {
    ModeFunction out(F.box_, F.n_);

    struct Entry {
        Mode k;
        const GridFn* v;
        GridFn g1, g2;  // action gradients
        double w;       // nodal sup
        double wg;      // gradient sup
    };
    auto collect = [](const ModeFunction& M) {
        std::vector<Entry> es;
        es.reserve(M.modes_.size());
        for (const auto& [k, g] : M.modes_) {
            Entry e{k, &g, g.d1(), g.d2(), g.max_abs(), 0.0};
            e.wg = std::max(e.g1.max_abs(), e.g2.max_abs());
            es.push_back(std::move(e));
        }
        return es;
    };
    std::vector<Entry> fe = collect(F), ge = collect(G);

    const Complex I{0.0, 1.0};
    for (const auto& a : fe) {
        for (const auto& b : ge) {
            Mode k = a.k + b.k;
            // crude pair bound: |F_a| |a| |dG_b| + |G_b| |b| |dF_a|
            double est = a.w * b.wg * a.k.norm1() + b.w * a.wg * b.k.norm1();
            if (est == 0.0) continue;
            if (est * std::exp(k.norm1() * s) < drop_abs) {
                if (slop) *slop += est * std::exp(k.norm1() * s);
                continue;
            }
            auto it = out.modes_.find(k);
            if (it == out.modes_.end())
                it = out.modes_.emplace(k, GridFn(F.box_, F.n_)).first;
            GridFn& dst = it->second;
            // F_x . G_y : i a.k . grad(G_b) weighted by F_a
            if (a.k.k1 != 0) GridFn::add_product(dst, I * double(a.k.k1), *a.v, b.g1);
            if (a.k.k2 != 0) GridFn::add_product(dst, I * double(a.k.k2), *a.v, b.g2);
            // - F_y . G_x : -i b.k . grad(F_a) weighted by G_b
            if (b.k.k1 != 0) GridFn::add_product(dst, -I * double(b.k.k1), a.g1, *b.v);
            if (b.k.k2 != 0) GridFn::add_product(dst, -I * double(b.k.k2), a.g2, *b.v);
        }
    }
    return out;
}

}  // namespace torlab
