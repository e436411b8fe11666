#ifndef POLYBALL_INTERP_HPP
#define POLYBALL_INTERP_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace polyball {

/// Piecewise-cubic Hermite interpolant on strictly increasing nodes.
/// Node derivatives are either supplied (exact slopes from an ODE right-hand
/// side preserve machine accuracy at the nodes) or estimated from divided
/// differences with the Fritsch-Carlson monotone limiter.
class CubicHermite {
 public:
  CubicHermite() = default;

  CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> d)
      : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
    validate();
  }

  /// Derivative-free build; monotone data yields a monotone interpolant.
  static CubicHermite monotone(std::vector<double> x, std::vector<double> y);

  double operator()(double xq) const { return eval(xq).first; }
  double derivative(double xq) const { return eval(xq).second; }

  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }
  const std::vector<double>& ds() const { return d_; }

 private:
  void validate() const {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
      throw std::invalid_argument("interpolant needs matching arrays, n >= 2");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("interpolation nodes must strictly increase");
  }

  std::pair<double, double> eval(double xq) const {
    std::size_t i = seg(xq);
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double v = h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    const double dh00 = (6 * t2 - 6 * t) / h, dh10 = (3 * t2 - 4 * t + 1);
    const double dh01 = (-6 * t2 + 6 * t) / h, dh11 = (3 * t2 - 2 * t);
    const double dv = dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
    return {v, dv};
  }

  std::size_t seg(double xq) const {
    if (xq <= x_.front()) return 0;
    if (xq >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  std::vector<double> x_, y_, d_;
};

inline CubicHermite CubicHermite::monotone(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("monotone interpolant needs n >= 2");
  std::vector<double> d(n), slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = slope[0];
  d[n - 1] = slope[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2 * (x[i] - x[i - 1]);
      d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  return CubicHermite(std::move(x), std::move(y), std::move(d));
}

/// Fritsch-Carlson limiter applied to supplied derivatives: caps them so the
/// interpolant cannot overshoot strictly monotone data.
inline void limit_monotone(const std::vector<double>& x, const std::vector<double>& y,
                           std::vector<double>& d) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double s = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (s == 0.0) {
      d[i] = d[i + 1] = 0.0;
      continue;
    }
    const double a = d[i] / s, b = d[i + 1] / s;
    const double cap = 3.0;
    if (a < 0.0) d[i] = 0.0;
    if (b < 0.0) d[i + 1] = 0.0;
    if (a > cap) d[i] = cap * s;
    if (b > cap) d[i + 1] = cap * s;
  }
}

}  // namespace polyball

#endif
