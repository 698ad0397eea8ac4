#include "telegraphnet/problem.hpp"

#include <cmath>
#include <utility>

#include "telegraphnet/errors.hpp"

namespace tgn {

Profile constant_profile(double value) {
  return {[value](double) { return value; }, [](double) { return 0.0; }};
}

Profile polynomial_profile(std::vector<double> coeffs) {
  auto eval = [coeffs](double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
  };
  auto deriv = [coeffs](double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) {
      v = v * x + static_cast<double>(i) * coeffs[i];
    }
    return v;
  };
  return {eval, deriv};
}

Profile sine_profile(double amplitude, double omega, double phase) {
  return {[=](double x) { return amplitude * std::sin(omega * x + phase); },
          [=](double x) { return amplitude * omega * std::cos(omega * x + phase); }};
}

Profile gaussian_profile(double amplitude, double center, double width) {
  if (!(width > 0.0)) throw DomainError("gaussian profile needs positive width");
  return {[=](double x) {
            const double u = (x - center) / width;
            return amplitude * std::exp(-0.5 * u * u);
          },
          [=](double x) {
            const double u = (x - center) / width;
            return -amplitude * u / width * std::exp(-0.5 * u * u);
          }};
}

Profile sampled_profile(Eigen::ArrayXd xs, Eigen::ArrayXd values) {
  if (xs.size() != values.size() || xs.size() < 2) {
    throw DomainError("sampled profile needs matching arrays of size >= 2");
  }
  auto locate = [xs](double x) {
    int lo = 0;
    int hi = static_cast<int>(xs.size()) - 1;
    if (x <= xs[0]) return 0;
    if (x >= xs[hi]) return hi - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (xs[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  };
  auto eval = [xs, values, locate](double x) {
    const int i = locate(x);
    const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1.0 - w) * values[i] + w * values[i + 1];
  };
  auto deriv = [xs, values, locate](double x) {
    const int i = locate(x);
    return (values[i + 1] - values[i]) / (xs[i + 1] - xs[i]);
  };
  return {eval, deriv};
}

Profile linear_profile(double x0, double v0, double x1, double v1) {
  const double slope = (v1 - v0) / (x1 - x0);
  return {[=](double x) { return v0 + slope * (x - x0); }, [slope](double) { return slope; }};
}

Profile scale_profile(const Profile& p, double factor) {
  auto f = p.f;
  auto df = p.df;
  return {[f, factor](double x) { return factor * f(x); },
          [df, factor](double x) { return factor * df(x); }};
}

Profile add_profiles(const Profile& a, const Profile& b) {
  auto af = a.f, bf = b.f, adf = a.df, bdf = b.df;
  return {[af, bf](double x) { return af(x) + bf(x); },
          [adf, bdf](double x) { return adf(x) + bdf(x); }};
}

double corner_mismatch(const NetworkTopology& topology, const ProblemData& data) {
  double worst = 0.0;
  for (int k : topology.boundary_vertices) {
    const double xk = topology.coordinates.at(k);
    // The unique incident edge.
    const std::set<int>& inc = topology.starting(k).empty() ? topology.ending(k)
                                                            : topology.starting(k);
    for (int j : inc) {
      const int e = topology.edge_index(j);
      const double z2 = data.initial_voltage[static_cast<std::size_t>(e)](xk);
      worst = std::max(worst, std::abs(z2 - data.boundary(k, 0.0)));
    }
  }
  return worst;
}

double initial_vertex_mismatch(const NetworkTopology& topology, const ProblemData& data) {
  double worst = 0.0;
  for (int k : topology.interior_vertices) {
    const double xk = topology.coordinates.at(k);
    double current_in = 0.0, current_out = 0.0;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (int j : topology.ending(k)) {
      const int e = topology.edge_index(j);
      current_in += data.initial_current[static_cast<std::size_t>(e)](xk);
      const double v = data.initial_voltage[static_cast<std::size_t>(e)](xk);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    for (int j : topology.starting(k)) {
      const int e = topology.edge_index(j);
      current_out += data.initial_current[static_cast<std::size_t>(e)](xk);
      const double v = data.initial_voltage[static_cast<std::size_t>(e)](xk);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    worst = std::max({worst, std::abs(current_in - current_out), vmax - vmin});
  }
  return worst;
}

}  // namespace tgn
