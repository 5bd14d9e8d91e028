#include "torlab/cheb.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace torlab::cheb {

namespace {

std::mutex cache_mutex;
std::map<int, std::vector<double>> node_cache;
std::map<int, std::vector<double>> diff_cache;
std::map<int, std::vector<double>> weight_cache;

std::vector<double> make_nodes(int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::cos(M_PI * i / (n - 1));
    return x;
}

std::vector<double> make_diff(int n) {
    const std::vector<double> x = make_nodes(n);
    std::vector<double> D(n * n, 0.0);
    auto c = [&](int i) { return (i == 0 || i == n - 1) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            D[i * n + j] = (c(i) / c(j)) * sign / (x[i] - x[j]);
            row += D[i * n + j];
        }
        D[i * n + i] = -row;  // negative-sum trick for the diagonal
    }
    return D;
}

std::vector<double> make_weights(int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        w[i] = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == n - 1) w[i] *= 0.5;
    }
    return w;
}

}  // namespace

const std::vector<double>& lobatto_nodes(int n) {
    if (n < 2) throw std::invalid_argument("lobatto_nodes: n must be >= 2");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = node_cache.find(n);
    if (it == node_cache.end()) it = node_cache.emplace(n, make_nodes(n)).first;
    return it->second;
}

const std::vector<double>& diff_matrix(int n) {
    if (n < 2) throw std::invalid_argument("diff_matrix: n must be >= 2");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = diff_cache.find(n);
    if (it == diff_cache.end()) it = diff_cache.emplace(n, make_diff(n)).first;
    return it->second;
}

const std::vector<double>& bary_weights(int n) {
    if (n < 2) throw std::invalid_argument("bary_weights: n must be >= 2");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = weight_cache.find(n);
    if (it == weight_cache.end()) it = weight_cache.emplace(n, make_weights(n)).first;
    return it->second;
}

std::vector<double> coefficients(const std::vector<double>& values) {
    const int n = int(values.size());
    if (n < 2) throw std::invalid_argument("coefficients: need at least 2 values");
    const int N = n - 1;
    std::vector<double> a(n, 0.0);
    for (int m = 0; m <= N; ++m) {
        double sum = 0.0;
        for (int i = 0; i <= N; ++i) {
            double w = (i == 0 || i == N) ? 0.5 : 1.0;
            sum += w * values[i] * std::cos(M_PI * m * i / N);
        }
        a[m] = 2.0 * sum / N;
        if (m == 0 || m == N) a[m] *= 0.5;
    }
    return a;
}

double interpolate(const std::vector<double>& values, double t) {
    const int n = int(values.size());
    const auto& x = lobatto_nodes(n);
    const auto& w = bary_weights(n);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = t - x[i];
        if (d == 0.0) return values[i];
        double q = w[i] / d;
        num += q * values[i];
        den += q;
    }
    return num / den;
}

}  // namespace torlab::cheb
