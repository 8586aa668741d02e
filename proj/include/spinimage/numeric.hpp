#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace spinimage {

/// Kahan compensated accumulator. Deterministic regardless of magnitude mix.
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

inline double linf_norm(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::fabs(x));
    return m;
}

inline void normalize_in_place(std::vector<double>& w, double total) {
    for (double& x : w) x /= total;
}

}  // namespace spinimage
