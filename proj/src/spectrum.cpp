#include "blochlab/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace blochlab {

void SpectrumEstimate::validate() const {
    if (scales.size() != values.size())
        throw std::invalid_argument("SpectrumEstimate: scales/values size mismatch");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] > scales[i - 1]))
            throw std::invalid_argument("SpectrumEstimate: scales not strictly increasing");
    if (error < 0.0) throw std::invalid_argument("SpectrumEstimate: negative error bar");
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

LineFit tail_slope(const std::vector<double>& scales, const std::vector<double>& cumulative) {
    if (scales.size() != cumulative.size() || scales.size() < 4)
        throw std::invalid_argument("tail_slope: need at least four points");
    const std::size_t from = scales.size() / 2;
    std::vector<double> x(scales.begin() + from, scales.end());
    std::vector<double> y(cumulative.begin() + from, cumulative.end());
    return fit_line(x, y);
}

std::string spectrum_csv(const SpectrumEstimate& e) {
    std::string out = "scale_index,scale,value,error\n";
    char buf[128];
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i, e.scales[i], e.values[i],
                      e.error);
        out += buf;
    }
    return out;
}

}  // namespace blochlab
