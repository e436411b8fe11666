#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyball/ode.hpp"

using namespace polyball::ode;

namespace {

void harmonic(double, const State<2>& y, State<2>& dy) {
  dy[0] = y[1];
  dy[1] = -y[0];
}

}  // namespace

TEST_CASE("dp5 integrates the harmonic oscillator") {
  Options opt;
  opt.rtol = opt.atol = 1e-12;
  auto r = integrate<2>(harmonic, 0.0, {1.0, 0.0}, 10.0, opt);
  CHECK(r.status == Status::reached_end);
  CHECK(r.y[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-10));
  CHECK(r.y[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-10));
}

TEST_CASE("event location finds a zero crossing to high accuracy") {
  Options opt;
  opt.rtol = opt.atol = 1e-12;
  std::vector<Event<2>> evs;
  evs.push_back({[](double, const State<2>& y) { return y[0]; }, -1});
  auto r = integrate<2>(harmonic, 0.0, {1.0, 0.0}, 10.0, opt, {}, evs);
  CHECK(r.status == Status::event_hit);
  CHECK(r.event_index == 0);
  CHECK(r.x == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(std::abs(r.y[0]) <= 1e-11);
}

TEST_CASE("observer sees monotone accepted steps") {
  Options opt;
  double last = -1.0;
  int count = 0;
  std::function<void(const Sample<2>&)> obs = [&](const Sample<2>& s) {
    CHECK(s.x > last);
    last = s.x;
    ++count;
  };
  auto r = integrate<2>(harmonic, 0.0, {1.0, 0.0}, 1.0, opt, obs);
  CHECK(r.status == Status::reached_end);
  CHECK(count == static_cast<int>(r.n_accepted) + 1);
  CHECK(last == 1.0);
}

TEST_CASE("stiff blow-up reports step underflow instead of diverging") {
  // y' = y^2 from y(0)=1 blows up at x=1.
  auto f = [](double, const State<1>& y, State<1>& dy) { dy[0] = y[0] * y[0]; };
  Options opt;
  opt.rtol = opt.atol = 1e-10;
  opt.max_steps = 100000;
  auto r = integrate<1>(f, 0.0, {1.0}, 2.0, opt);
  CHECK((r.status == Status::step_underflow || r.status == Status::max_steps_exceeded));
  CHECK(r.x <= 1.0 + 1e-6);
}
