#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace blochlab {

// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order and
// cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// integral of f over [a,b] with a single Gauss-Legendre panel
double gauss_panel(const std::function<double(double)>& f, double a, double b, int order);

// nodes/weights mapped to [a,b]
void map_panel(const GaussRule& rule, double a, double b,
               std::vector<double>& x, std::vector<double>& w);

}  // namespace blochlab
