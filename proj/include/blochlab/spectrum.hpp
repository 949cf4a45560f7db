#pragma once

#include <string>
#include <vector>

namespace blochlab {

// A sequence of (scale, value) pairs approaching a limsup-type quantity,
// together with a finite-scale summary.  The limit field is an extrapolation
// (documented per producer), never a claim about the true limsup.
struct SpectrumEstimate {
    std::vector<double> scales;   // strictly monotone (level index, radius, ...)
    std::vector<double> values;
    double limit = 0.0;
    double error = 0.0;           // >= 0
    std::string method;

    bool empty() const { return values.empty(); }
    double deepest() const { return values.empty() ? 0.0 : values.back(); }
    void validate() const;
};

// Least-squares line y = a + b*x through (x,y); returns {a, b, rms residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of cumulative[i] against scales[i] over the deepest half of the
// sequence; the standard extrapolator for per-level averages of the form
// cumulative/n.
LineFit tail_slope(const std::vector<double>& scales, const std::vector<double>& cumulative);

std::string spectrum_csv(const SpectrumEstimate& e);

}  // namespace blochlab
