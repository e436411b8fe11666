#ifndef POLYBALL_ODE_HPP
#define POLYBALL_ODE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace polyball::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_initial = 0.0;  // 0 -> automatic
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
};

enum class Status { reached_end, event_hit, step_underflow, max_steps_exceeded };

/// Scalar event g(x,y); a sign change on an accepted step stops the
/// integration at the bisected crossing.  direction: -1 falling only,
/// +1 rising only, 0 any.
template <std::size_t N>
struct Event {
  std::function<double(double, const State<N>&)> g;
  int direction = 0;
};

template <std::size_t N>
struct Sample {
  double x;
  State<N> y;
  State<N> dydx;
};

template <std::size_t N>
struct Result {
  Status status = Status::reached_end;
  double x = 0.0;
  State<N> y{};
  int event_index = -1;
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                        e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

template <std::size_t N>
bool finite(const State<N>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace detail

/// One Dormand-Prince 5(4) trial step.  Returns the scaled error norm
/// (infinity when the step produced non-finite values).  k1 must hold
/// f(x, y) on entry; on success k7 holds f(x+h, y_new) (FSAL).
template <std::size_t N, typename F>
double dp5_step(F&& f, double x, const State<N>& y, double h, const State<N>& k1,
                State<N>& y_new, State<N>& k7, const Options& opt) {
  using namespace detail;
  State<N> k2, k3, k4, k5, k6, t;
  auto stage = [&](State<N>& out, auto&&... terms) {
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * (terms[i] + ...);
  };
  auto scaled = [&](double c, const State<N>& k) {
    State<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = c * k[i];
    return r;
  };
  stage(t, scaled(a21, k1));
  f(x + c2 * h, t, k2);
  stage(t, scaled(a31, k1), scaled(a32, k2));
  f(x + c3 * h, t, k3);
  stage(t, scaled(a41, k1), scaled(a42, k2), scaled(a43, k3));
  f(x + c4 * h, t, k4);
  stage(t, scaled(a51, k1), scaled(a52, k2), scaled(a53, k3), scaled(a54, k4));
  f(x + c5 * h, t, k5);
  stage(t, scaled(a61, k1), scaled(a62, k2), scaled(a63, k3), scaled(a64, k4),
        scaled(a65, k5));
  f(x + h, t, k6);
  for (std::size_t i = 0; i < N; ++i)
    y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                           b6 * k6[i]);
  if (!detail::finite(y_new)) return std::numeric_limits<double>::infinity();
  f(x + h, y_new, k7);
  if (!detail::finite(k7)) return std::numeric_limits<double>::infinity();
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                           e6 * k6[i] + e7 * k7[i]);
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    err += (ei / sc) * (ei / sc);
  }
  err = std::sqrt(err / N);
  return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
}

/// Integrate y' = f(x, y) from x0 to x1 (x1 > x0).  f has signature
/// f(double x, const State<N>& y, State<N>& dydx).  The observer, when given,
/// receives the initial point and every accepted step.
template <std::size_t N, typename F>
Result<N> integrate(F&& f, double x0, State<N> y0, double x1, const Options& opt,
                    const std::function<void(const Sample<N>&)>& observer = {},
                    const std::vector<Event<N>>& events = {}) {
  Result<N> res;
  double x = x0;
  State<N> y = y0, k1, y_new, k7;
  f(x, y, k1);
  if (observer) observer({x, y, k1});

  std::vector<double> g_prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i].g(x, y);

  double h = opt.h_initial;
  if (h <= 0.0) {
    double dn = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      dn += (y[i] / sc) * (y[i] / sc);
      fn += (k1[i] / sc) * (k1[i] / sc);
    }
    h = (fn > 0.0) ? 0.01 * std::sqrt(dn / fn) : 1e-6 * (x1 - x0);
    if (!(h > 0.0)) h = 1e-6 * (x1 - x0);
  }
  h = std::min({h, opt.h_max, x1 - x0});

  // Locates the first crossing of event k inside (xa, xa+ha] by bisection,
  // re-integrating from the step start for each probe.
  auto locate = [&](int k, double xa, const State<N>& ya, double xb) {
    double lo = xa, hi = xb;
    State<N> y_hi{};
    bool have_hi = false;
    Options sub = opt;
    sub.h_initial = 0.0;
    for (int it = 0; it < 80 && (hi - lo) > 4.0 * 1e-16 * std::max(std::abs(lo), std::abs(hi));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      Result<N> r = integrate(f, xa, ya, mid, sub);
      const double gm = events[k].g(r.x, r.y);
      const bool crossed = (events[k].direction <= 0 && g_prev[k] > 0.0 && gm <= 0.0) ||
                           (events[k].direction >= 0 && g_prev[k] < 0.0 && gm >= 0.0);
      if (crossed) {
        hi = mid;
        y_hi = r.y;
        have_hi = true;
      } else {
        lo = mid;
      }
    }
    if (!have_hi) {  // crossing essentially at xb
      Result<N> r = integrate(f, xa, ya, hi, sub);
      y_hi = r.y;
    }
    return std::pair<double, State<N>>(hi, y_hi);
  };

  while (x < x1) {
    if (res.n_accepted + res.n_rejected >= opt.max_steps) {
      res.status = Status::max_steps_exceeded;
      res.x = x;
      res.y = y;
      return res;
    }
    h = std::min(h, x1 - x);
    const double err = dp5_step(f, x, y, h, k1, y_new, k7, opt);
    if (err <= 1.0) {
      const double xa = x, xb = x + h;
      // Event check on the accepted interval.
      int hit = -1;
      double x_evt = 0.0;
      State<N> y_evt{};
      for (std::size_t i = 0; i < events.size(); ++i) {
        const double gb = events[i].g(xb, y_new);
        const bool trig = (events[i].direction <= 0 && g_prev[i] > 0.0 && gb <= 0.0) ||
                          (events[i].direction >= 0 && g_prev[i] < 0.0 && gb >= 0.0);
        if (trig) {
          auto [xe, ye] = locate(static_cast<int>(i), xa, y, xb);
          if (hit < 0 || xe < x_evt) {
            hit = static_cast<int>(i);
            x_evt = xe;
            y_evt = ye;
          }
        }
        g_prev[i] = gb;
      }
      if (hit >= 0) {
        State<N> fe;
        f(x_evt, y_evt, fe);
        if (observer) observer({x_evt, y_evt, fe});
        res.status = Status::event_hit;
        res.event_index = hit;
        res.x = x_evt;
        res.y = y_evt;
        ++res.n_accepted;
        return res;
      }
      x = xb;
      y = y_new;
      k1 = k7;  // FSAL
      ++res.n_accepted;
      if (observer) observer({x, y, k1});
      const double grow = std::isfinite(err) && err > 0.0
                              ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)))
                              : 5.0;
      h = std::min({h * grow, opt.h_max});
    } else {
      ++res.n_rejected;
      const double shrink = std::isfinite(err)
                                ? std::max(0.1, 0.9 * std::pow(err, -0.2))
                                : 0.1;
      h *= shrink;
      if (h < 1e-3 * std::numeric_limits<double>::min() ||
          h <= 4.0 * 1e-16 * std::abs(x)) {
        res.status = Status::step_underflow;
        res.x = x;
        res.y = y;
        return res;
      }
    }
  }
  res.status = Status::reached_end;
  res.x = x;
  res.y = y;
  return res;
}

}  // namespace polyball::ode

#endif
