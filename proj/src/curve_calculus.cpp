#include "biphase/curve_calculus.hpp"

#include <cmath>
#include <numbers>

namespace biphase {
namespace {

using Samples = std::span<const StateVector>;

Amplitudes at(Samples f, std::size_t i) { return f[i].amplitudes(); }

// Five-point first derivative, O(h^4), one-sided at the two samples nearest
// each boundary.
Amplitudes first_fourth_order(Samples f, std::size_t i, double h) {
  const std::size_t n = f.size();
  if (i >= 2 && i + 2 < n) {
    return (at(f, i - 2) - 8.0 * at(f, i - 1) + 8.0 * at(f, i + 1) - at(f, i + 2)) / (12.0 * h);
  }
  if (i == 0) {
    return (-25.0 * at(f, 0) + 48.0 * at(f, 1) - 36.0 * at(f, 2) + 16.0 * at(f, 3) -
            3.0 * at(f, 4)) / (12.0 * h);
  }
  if (i == 1) {
    return (-3.0 * at(f, 0) - 10.0 * at(f, 1) + 18.0 * at(f, 2) - 6.0 * at(f, 3) + at(f, 4)) /
           (12.0 * h);
  }
  if (i == n - 2) {
    return -(-3.0 * at(f, n - 1) - 10.0 * at(f, n - 2) + 18.0 * at(f, n - 3) -
             6.0 * at(f, n - 4) + at(f, n - 5)) / (12.0 * h);
  }
  return -(-25.0 * at(f, n - 1) + 48.0 * at(f, n - 2) - 36.0 * at(f, n - 3) +
           16.0 * at(f, n - 4) - 3.0 * at(f, n - 5)) / (12.0 * h);
}

Amplitudes first_second_order(Samples f, std::size_t i, double h) {
  const std::size_t n = f.size();
  if (i > 0 && i + 1 < n) return (at(f, i + 1) - at(f, i - 1)) / (2.0 * h);
  if (i == 0) return (-3.0 * at(f, 0) + 4.0 * at(f, 1) - at(f, 2)) / (2.0 * h);
  return (3.0 * at(f, n - 1) - 4.0 * at(f, n - 2) + at(f, n - 3)) / (2.0 * h);
}

Amplitudes second_fourth_order(Samples f, std::size_t i, double h) {
  const std::size_t n = f.size();
  const double h2 = 12.0 * h * h;
  if (i >= 2 && i + 2 < n) {
    return (-at(f, i - 2) + 16.0 * at(f, i - 1) - 30.0 * at(f, i) + 16.0 * at(f, i + 1) -
            at(f, i + 2)) / h2;
  }
  if (i == 0) {
    return (45.0 * at(f, 0) - 154.0 * at(f, 1) + 214.0 * at(f, 2) - 156.0 * at(f, 3) +
            61.0 * at(f, 4) - 10.0 * at(f, 5)) / h2;
  }
  if (i == 1) {
    return (10.0 * at(f, 0) - 15.0 * at(f, 1) - 4.0 * at(f, 2) + 14.0 * at(f, 3) -
            6.0 * at(f, 4) + at(f, 5)) / h2;
  }
  if (i == n - 2) {
    return (10.0 * at(f, n - 1) - 15.0 * at(f, n - 2) - 4.0 * at(f, n - 3) +
            14.0 * at(f, n - 4) - 6.0 * at(f, n - 5) + at(f, n - 6)) / h2;
  }
  return (45.0 * at(f, n - 1) - 154.0 * at(f, n - 2) + 214.0 * at(f, n - 3) -
          156.0 * at(f, n - 4) + 61.0 * at(f, n - 5) - 10.0 * at(f, n - 6)) / h2;
}

Amplitudes second_second_order(Samples f, std::size_t i, double h) {
  const std::size_t n = f.size();
  const double h2 = h * h;
  if (i > 0 && i + 1 < n) return (at(f, i - 1) - 2.0 * at(f, i) + at(f, i + 1)) / h2;
  if (i == 0) return (2.0 * at(f, 0) - 5.0 * at(f, 1) + 4.0 * at(f, 2) - at(f, 3)) / h2;
  return (2.0 * at(f, n - 1) - 5.0 * at(f, n - 2) + 4.0 * at(f, n - 3) - at(f, n - 4)) / h2;
}

}  // namespace

std::vector<Amplitudes> first_derivative(const Curve& curve) {
  if (curve.size() < 3) throw UsageError("derivative needs at least 3 samples");
  const double h = curve.step();
  const auto f = curve.states();
  std::vector<Amplitudes> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = f.size() >= 5 ? first_fourth_order(f, i, h) : first_second_order(f, i, h);
  }
  return out;
}

std::vector<Amplitudes> second_derivative(const Curve& curve) {
  if (curve.size() < 5) throw UsageError("second derivative needs at least 5 samples");
  const double h = curve.step();
  const auto f = curve.states();
  std::vector<Amplitudes> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = f.size() >= 6 ? second_fourth_order(f, i, h) : second_second_order(f, i, h);
  }
  return out;
}

std::vector<Complex> connection(const Curve& curve) {
  const auto velocity = first_derivative(curve);
  std::vector<Complex> out(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out[i] = curve.state(i).amplitudes().dot(velocity[i]);
  }
  return out;
}

std::vector<double> connection_im(const Curve& curve) {
  const auto a = connection(curve);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].imag();
  return out;
}

double integrate_uniform(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) throw UsageError("quadrature needs at least 2 samples");
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);

  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  }
  if (simpson_end != intervals) {
    const std::size_t k = simpson_end;
    sum += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  }
  return sum;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) throw UsageError("quadrature needs at least 2 samples");
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double piece = 0.0;
    if (n == 2) {
      piece = 0.5 * h * (f[0] + f[1]);
    } else if (n == 3) {
      piece = k == 0 ? h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2])
                     : h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]);
    } else if (k == 0) {
      piece = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (k + 2 == n) {
      piece = h / 24.0 * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    } else {
      piece = h / 24.0 * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
    }
    out[k + 1] = out[k] + piece;
  }
  return out;
}

double principal_angle(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

double principal_arg(Complex z) { return principal_angle(std::arg(z)); }

std::vector<double> unwrap(std::span<const double> angles) {
  std::vector<double> out(angles.begin(), angles.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = out[i - 1] + principal_angle(angles[i] - angles[i - 1]);
  }
  return out;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace biphase
