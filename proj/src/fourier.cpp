#include "torlab/fourier.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace torlab {

FourierSeries2::FourierSeries2(double width_s) : s_(width_s) {
    if (!(s_ > 0)) throw std::invalid_argument("FourierSeries2: width s must be positive");
}

void FourierSeries2::set_coeff(const Mode& k, Complex v) {
    if (k.is_zero()) throw std::invalid_argument("FourierSeries2: no coefficient at k = 0");
    if (is_canonical(k)) {
        if (v == Complex{0.0, 0.0})
            coeffs_.erase(k);
        else
            coeffs_[k] = v;
    } else {
        set_coeff(-k, std::conj(v));
    }
}

void FourierSeries2::add_coeff(const Mode& k, Complex v) {
    Complex cur = coeff(k);
    set_coeff(k, cur + v);
}

Complex FourierSeries2::coeff(const Mode& k) const {
    if (k.is_zero()) throw std::invalid_argument("FourierSeries2: no coefficient at k = 0");
    if (is_canonical(k)) {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Complex{0.0, 0.0} : it->second;
    }
    auto it = coeffs_.find(-k);
    return it == coeffs_.end() ? Complex{0.0, 0.0} : std::conj(it->second);
}

int FourierSeries2::max_norm1() const {
    int m = 0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, k.norm1());
    return m;
}

double FourierSeries2::eval(double x1, double x2) const {
    // f_k e^{ik.x} + c.c. = 2 (Re f_k cos(k.x) - Im f_k sin(k.x))
    double v = 0.0;
    for (const auto& [k, c] : coeffs_) {
        double ph = k.k1 * x1 + k.k2 * x2;
        v += 2.0 * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
    }
    return v;
}

std::array<double, 2> FourierSeries2::grad(double x1, double x2) const {
    double g1 = 0.0, g2 = 0.0;
    for (const auto& [k, c] : coeffs_) {
        double ph = k.k1 * x1 + k.k2 * x2;
        // d/dx of 2(a cos - b sin) = -2(a sin + b cos) k
        double t = -2.0 * (c.real() * std::sin(ph) + c.imag() * std::cos(ph));
        g1 += t * k.k1;
        g2 += t * k.k2;
    }
    return {g1, g2};
}

double FourierSeries2::grad_sup_bound() const {
    double b = 0.0;
    for (const auto& [k, c] : coeffs_) b += 2.0 * std::abs(c) * k.norm();
    return b;
}

OneDimProfile::OneDimProfile(const Mode& gen, std::map<int, Complex> cj)
    : gen_(gen), cj_(std::move(cj)) {
    for (const auto& [j, c] : cj_)
        if (j < 1) throw std::invalid_argument("OneDimProfile: canonical orders are j >= 1");
}

int OneDimProfile::max_order() const {
    return cj_.empty() ? 0 : cj_.rbegin()->first;
}

Complex OneDimProfile::coeff(int j) const {
    if (j == 0) return {0.0, 0.0};
    auto it = cj_.find(std::abs(j));
    if (it == cj_.end()) return {0.0, 0.0};
    return j > 0 ? it->second : std::conj(it->second);
}

double OneDimProfile::deriv(double theta, int m) const {
    // (ij)^m c_j e^{ij theta} + c.c.
    double v = 0.0;
    for (const auto& [j, c] : cj_) {
        Complex w = c * std::pow(Complex{0.0, double(j)}, m) *
                    std::exp(Complex{0.0, j * theta});
        v += 2.0 * w.real();
    }
    return v;
}

double OneDimProfile::deriv_sup_bound(int m) const {
    double b = 0.0;
    for (const auto& [j, c] : cj_) b += 2.0 * std::abs(c) * std::pow(double(j), m);
    return b;
}

std::vector<double> OneDimProfile::sample(int n, int m) const {
    std::vector<double> out(n);
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) out[i] = deriv(i * h, m);
    return out;
}

double norm_s(const FourierSeries2& f, double s) {
    if (!(s > 0)) throw std::invalid_argument("norm_s: s must be positive");
    double v = 0.0;
    for (const auto& [k, c] : f.canonical())
        v = std::max(v, std::abs(c) * std::exp(k.norm1() * s));
    return v;
}

OneDimProfile project_to_lattice(const FourierSeries2& f, const Mode& k) {
    if (!is_generator(k))
        throw std::invalid_argument("project_to_lattice: k is not a generator");
    std::map<int, Complex> cj;
    for (const auto& [m, c] : f.canonical()) {
        LinePoint lp = generator_line(m);
        if (lp.gen == k) cj[lp.j] = c;  // canonical m has j >= 1 on its line
    }
    return OneDimProfile(k, std::move(cj));
}

std::map<Mode, OneDimProfile> decompose(const FourierSeries2& f, int kmax) {
    if (kmax < 1) throw std::invalid_argument("decompose: kmax must be >= 1");
    std::map<Mode, std::map<int, Complex>> lines;
    for (const auto& [m, c] : f.canonical()) {
        if (m.norm1() > kmax) continue;
        LinePoint lp = generator_line(m);
        lines[lp.gen][lp.j] = c;
    }
    std::map<Mode, OneDimProfile> out;
    for (auto& [g, cj] : lines) out.emplace(g, OneDimProfile(g, std::move(cj)));
    return out;
}

double p1_floor(int norm1, double s, double delta) {
    return delta * std::exp(-norm1 * s) / (double(norm1) * double(norm1));
}

FourierSeries2 example_potential(double s, double delta, int kmax) {
    if (kmax < 1) throw std::invalid_argument("example_potential: kmax must be >= 1");
    FourierSeries2 f(s);
    for (const Mode& k : enumerate_generators(kmax))
        f.set_coeff(k, Complex{p1_floor(k.norm1(), s, delta), 0.0});
    return f;
}

FourierSeries2 potential_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("s")) throw std::runtime_error("potential file: missing width \"s\"");
    FourierSeries2 f(j.at("s").get<double>());
    for (const auto& e : j.at("coeffs")) {
        if (!e.is_array() || e.size() != 4)
            throw std::runtime_error("potential file: coeff entries are [k1,k2,re,im]");
        Mode k{e[0].get<int>(), e[1].get<int>()};
        if (k.is_zero()) throw std::runtime_error("potential file: k = 0 entry not allowed");
        Mode canon = is_canonical(k) ? k : -k;
        if (f.coeff(canon) != Complex{0.0, 0.0})
            throw std::runtime_error("potential file: both of a +-k pair present");
        f.set_coeff(k, Complex{e[2].get<double>(), e[3].get<double>()});
    }
    return f;
}

std::string potential_to_json_text(const FourierSeries2& f) {
    nlohmann::ordered_json j;
    j["s"] = f.width();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [k, c] : f.canonical())
        arr.push_back({k.k1, k.k2, c.real(), c.imag()});
    j["coeffs"] = std::move(arr);
    return j.dump(2);
}

FourierSeries2 load_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open potential file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return potential_from_json_text(ss.str());
}

void save_potential(const FourierSeries2& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write potential file: " + path);
    out << potential_to_json_text(f) << "\n";
}

}  // namespace torlab
