#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "biphase/converters.hpp"
#include "biphase/curve_calculus.hpp"
#include "biphase/state_space.hpp"
#include "test_support.hpp"

using namespace biphase;
using biphase::testing::kPi;

namespace {

const double h = 1.0 / std::sqrt(2.0);

void check_amplitudes(const StateVector& s, Complex a, Complex b, Complex c, double tol = 1e-15) {
  CHECK(std::abs(s[0] - a) <= tol);
  CHECK(std::abs(s[1] - b) <= tol);
  CHECK(std::abs(s[2] - c) <= tol);
}

Curve sample_curve(std::size_t n) {
  std::vector<double> s = linspace(0.0, 1.0, n);
  std::vector<StateVector> states;
  for (double x : s) {
    states.push_back(StateVector::normalized(
        Amplitudes(Complex(std::cos(x), 0.3 * x), std::polar(1.0, x * x), Complex(0.2, -x)),
        Basis::Pmz));
  }
  return Curve(s, states);
}

}  // namespace

TEST_CASE("state vectors validate their amplitudes") {
  CHECK_NOTHROW(StateVector(1.0, 0.0, 0.0, Basis::Fock));
  CHECK_THROWS_AS(StateVector(1.0, 1.0, 0.0, Basis::Pmz), InvalidInputError);
  CHECK_THROWS_AS(StateVector(Amplitudes::Zero(), Basis::Pmz), InvalidInputError);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(StateVector(nan, 0.0, 0.0, Basis::Pmz), InvalidInputError);
  CHECK_THROWS_AS(StateVector::normalized(Amplitudes::Zero(), Basis::Pmz), InvalidInputError);

  const StateVector s = StateVector::normalized(Amplitudes(3.0, Complex(0.0, 4.0), 0.0), Basis::Pmz);
  CHECK(s.amplitudes().norm() == Catch::Approx(1.0).margin(1e-15));
  check_amplitudes(s, 0.6, Complex(0.0, 0.8), 0.0);
}

TEST_CASE("basis names parse case-insensitively") {
  CHECK(basis_from_string("fock") == Basis::Fock);
  CHECK(basis_from_string("PMZ") == Basis::Pmz);
  CHECK(to_string(Basis::Pmz) == "PMZ");
  CHECK_THROWS_AS(basis_from_string("polar"), UsageError);
}

TEST_CASE("to_pmz maps the photon-number basis") {
  check_amplitudes(to_pmz(StateVector(1.0, 0.0, 0.0, Basis::Fock)), h, h, 0.0);
  check_amplitudes(to_pmz(StateVector(0.0, 1.0, 0.0, Basis::Fock)), 0.0, 0.0, 1.0);
  check_amplitudes(to_pmz(StateVector(h, 0.0, h, Basis::Fock)), 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(to_pmz(StateVector(1.0, 0.0, 0.0, Basis::Pmz)), UsageError);
}

TEST_CASE("to_fock inverts to_pmz") {
  check_amplitudes(to_fock(StateVector(1.0, 0.0, 0.0, Basis::Pmz)), h, 0.0, h);
  check_amplitudes(to_fock(StateVector(0.0, 0.0, 1.0, Basis::Pmz)), 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(to_fock(StateVector(1.0, 0.0, 0.0, Basis::Fock)), UsageError);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const StateVector x = testing::random_state(rng, Basis::Fock);
    const StateVector y = to_fock(to_pmz(x));
    CHECK(y.basis() == Basis::Fock);
    CHECK((y.amplitudes() - x.amplitudes()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(to_pmz(x).amplitudes().norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("basis change matrix is orthogonal") {
  const Eigen::Matrix3d& a = basis_change();
  CHECK((a - testing::reference_a()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a * a.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("inner product is conjugate-linear in the first slot") {
  const StateVector e1(1.0, 0.0, 0.0, Basis::Pmz);
  const StateVector e2(0.0, 1.0, 0.0, Basis::Pmz);
  CHECK(std::abs(inner(e1, e2)) == 0.0);
  const double theta = 0.7;
  CHECK(std::abs(inner(e1, e1.with_phase(theta)) - std::polar(1.0, theta)) <= 1e-15);
  CHECK(std::abs(inner(e1.with_phase(theta), e1) - std::polar(1.0, -theta)) <= 1e-15);
  CHECK_THROWS_AS(inner(e1, StateVector(1.0, 0.0, 0.0, Basis::Fock)), UsageError);

  std::mt19937_64 rng(12);
  for (int k = 0; k < 200; ++k) {
    const StateVector a = testing::random_state(rng);
    const StateVector b = testing::random_state(rng);
    CHECK(std::abs(inner(a, a) - 1.0) <= 1e-12);
    CHECK(std::abs(inner(a, b) - testing::reference_inner(a.amplitudes(), b.amplitudes())) <= 1e-15);
    CHECK(std::abs(inner(a, b)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("ray distance examples") {
  const StateVector e1(1.0, 0.0, 0.0, Basis::Pmz);
  const StateVector e3(0.0, 0.0, 1.0, Basis::Pmz);
  CHECK(ray_distance(e1, e1) == 0.0);
  CHECK(ray_distance(e1, e3) == Catch::Approx(1.0).margin(1e-15));
  CHECK(ray_distance(e1, e1.with_phase(2.1)) <= 1e-15);
  CHECK_THROWS_AS(ray_distance(e1, StateVector(1.0, 0.0, 0.0, Basis::Fock)), UsageError);
}

TEST_CASE("ray distance is symmetric and gauge invariant") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int k = 0; k < 500; ++k) {
    const StateVector a = testing::random_state(rng);
    const StateVector b = testing::random_state(rng);
    const double d = ray_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(std::abs(d - ray_distance(b, a)) <= 1e-12);
    CHECK(std::abs(d - ray_distance(a.with_phase(phase(rng)), b.with_phase(phase(rng)))) <= 1e-12);
    CHECK(std::abs(d - std::sqrt(1.0 - std::norm(inner(a, b)))) <= 1e-12);
  }
}

TEST_CASE("curves validate their samples") {
  const StateVector e1(1.0, 0.0, 0.0, Basis::Pmz);
  CHECK_THROWS_AS(Curve({0.0}, {e1}), UsageError);
  CHECK_THROWS_AS(Curve({0.0, 0.0}, {e1, e1}), UsageError);
  CHECK_THROWS_AS(Curve({1.0, 0.0}, {e1, e1}), UsageError);
  CHECK_THROWS_AS(Curve({0.0, 1.0}, {e1}), UsageError);
  CHECK_THROWS_AS(Curve({0.0, 1.0}, {e1, StateVector(1.0, 0.0, 0.0, Basis::Fock)}), UsageError);

  const Curve uniform({0.0, 0.5, 1.0}, {e1, e1, e1});
  CHECK(uniform.is_uniform());
  CHECK(uniform.step() == 0.5);
  const Curve ragged({0.0, 0.4, 1.0}, {e1, e1, e1});
  CHECK_FALSE(ragged.is_uniform());
  CHECK_THROWS_AS(ragged.step(), UsageError);
}

TEST_CASE("gauge transform with zero alpha leaves the curve unchanged") {
  const Curve curve = sample_curve(21);
  const Curve same = gauge_transform(curve, [](double) { return 0.0; });
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(same.parameter(i) == curve.parameter(i));
    CHECK((same.state(i).amplitudes() - curve.state(i).amplitudes()).norm() == 0.0);
  }
}

TEST_CASE("constant gauge keeps every overlap between samples") {
  const Curve curve = sample_curve(21);
  const Curve shifted = gauge_transform(curve, [](double) { return 1.234; });
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(std::abs(shifted.state(i).amplitudes().norm() - 1.0) <= 1e-12);
    for (std::size_t k = 0; k < curve.size(); k += 5) {
      CHECK(std::abs(inner(shifted.state(i), shifted.state(k)) -
                     inner(curve.state(i), curve.state(k))) <= 1e-15);
    }
  }
}

TEST_CASE("gauge alpha(s) = s shifts the connection by one") {
  const Curve curve = sample_curve(2001);
  const Curve shifted = gauge_transform(curve, [](double s) { return s; });
  const auto before = connection_im(curve);
  const auto after = connection_im(shifted);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(std::abs(after[i] - before[i] - 1.0) <= 1e-9);
  }
}

TEST_CASE("gauge transform rejects non-finite phases") {
  const Curve curve = sample_curve(5);
  CHECK_THROWS_AS(gauge_transform(curve, [](double s) { return s > 0.5 ? INFINITY : 0.0; }),
                  NumericError);
  const std::vector<double> wrong_length{0.0, 1.0};
  CHECK_THROWS_AS(gauge_transform(curve, wrong_length), UsageError);
}

TEST_CASE("unit-norm curves have a purely imaginary connection") {
  for (std::size_t n : {101u, 201u, 401u}) {
    const Curve curve = sample_curve(n);
    const auto a = connection(curve);
    const double step = curve.step();
    double worst = 0.0;
    for (const Complex& z : a) worst = std::max(worst, std::abs(z.real()));
    CHECK(worst <= step);
  }
}
