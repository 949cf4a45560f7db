#include "blochlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace blochlab {

namespace {

GaussRule compute_rule(int n) {
    // Newton iteration on Legendre polynomials, symmetric roots
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

std::mutex g_mutex;
std::map<int, GaussRule> g_cache;

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > 128) throw std::invalid_argument("gauss_legendre: bad order");
    std::lock_guard<std::mutex> lock(g_mutex);
    auto it = g_cache.find(order);
    if (it == g_cache.end()) it = g_cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int order) {
    const GaussRule& r = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(mid + half * r.nodes[i]);
    return acc * half;
}

void map_panel(const GaussRule& rule, double a, double b,
               std::vector<double>& x, std::vector<double>& w) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    x.resize(rule.nodes.size());
    w.resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        x[i] = mid + half * rule.nodes[i];
        w[i] = half * rule.weights[i];
    }
}

}  // namespace blochlab
