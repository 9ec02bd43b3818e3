#include "vnlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace vnlab {

namespace {

double sanitize(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::infinity(); }

double real_inner(const cmat& a, const cmat& b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

cmat tangent_projection(const cmat& v, const cmat& g) {
  const cmat vg = v.adjoint() * g;
  return g - v * ((vg + vg.adjoint()) / 2.0);
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const rvec&)>& objective, const rvec& start,
                             const NelderMeadOptions& options) {
  const Index n = start.size();
  NelderMeadResult best{start, sanitize(objective(start)), 1};
  if (n == 0) return best;
  const double dn = double(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 1.0 / (2.0 * dn);
  const double delta = 1.0 - 1.0 / dn;

  std::vector<rvec> pts{start};
  std::vector<double> vals{best.value};
  for (Index i = 0; i < n; ++i) {
    rvec p = start;
    p(i) += options.initial_step;
    pts.push_back(p);
    vals.push_back(sanitize(objective(p)));
  }
  int evals = static_cast<int>(n) + 1;
  std::vector<std::size_t> order(pts.size());

  // One iteration costs at most n + 2 evaluations.
  while (evals + static_cast<int>(n) + 2 <= options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t second = order[order.size() - 2];
    if (std::isfinite(vals[hi]) && vals[hi] - vals[lo] <= options.value_tolerance) break;

    rvec centroid = rvec::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != hi) centroid += pts[i];
    centroid /= dn;

    const rvec refl = centroid + alpha * (centroid - pts[hi]);
    const double fr = sanitize(objective(refl));
    ++evals;
    if (fr < vals[lo]) {
      const rvec exp = centroid + beta * (refl - centroid);
      const double fe = sanitize(objective(exp));
      ++evals;
      if (fe < fr) {
        pts[hi] = exp;
        vals[hi] = fe;
      } else {
        pts[hi] = refl;
        vals[hi] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[hi] = refl;
      vals[hi] = fr;
      continue;
    }
    const bool outside = fr < vals[hi];
    const rvec con = outside ? rvec(centroid + gamma * (refl - centroid))
                             : rvec(centroid - gamma * (centroid - pts[hi]));
    const double fc = sanitize(objective(con));
    ++evals;
    if (fc < (outside ? fr : vals[hi])) {
      pts[hi] = con;
      vals[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == lo) continue;
      pts[i] = pts[lo] + delta * (pts[i] - pts[lo]);
      vals[i] = sanitize(objective(pts[i]));
      ++evals;
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  best.point = pts[static_cast<std::size_t>(it - vals.begin())];
  best.value = *it;
  best.evaluations = evals;
  return best;
}

cmat stiefel_retract(const cmat& tall) {
  Eigen::HouseholderQR<cmat> qr(tall);
  cmat q = qr.householderQ() * cmat::Identity(tall.rows(), tall.cols());
  const cmat r = qr.matrixQR();
  for (Index j = 0; j < tall.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

StiefelResult stiefel_descent(const StiefelObjective& objective, const cmat& start,
                              const StiefelOptions& options) {
  StiefelResult res;
  res.point = stiefel_retract(start);
  cmat grad(start.rows(), start.cols());
  res.value = objective(res.point, grad);
  res.evaluations = 1;
  cmat xi = tangent_projection(res.point, grad);
  double step = 1.0 / std::max(1.0, xi.norm());
  int stalled = 0;

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    const double gnorm2 = xi.squaredNorm();
    if (std::sqrt(gnorm2) < options.gradient_tolerance) break;
    cmat next;
    cmat next_grad(start.rows(), start.cols());
    double next_value = 0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      next = stiefel_retract(res.point - step * xi);
      next_value = objective(next, next_grad);
      ++res.evaluations;
      if (std::isfinite(next_value) && next_value <= res.value - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const cmat next_xi = tangent_projection(next, next_grad);
    const cmat s = next - res.point;
    const cmat y = next_xi - tangent_projection(next, xi);
    const double sy = std::abs(real_inner(s, y));
    const double ss = s.squaredNorm();
    step = sy > 0 ? std::clamp(ss / sy, 1e-8, 1e4) : std::min(step * 2.0, 1e4);
    const double drop = res.value - next_value;
    res.point = next;
    res.value = next_value;
    xi = next_xi;
    stalled = drop <= options.value_tolerance * std::max(1.0, std::abs(res.value)) ? stalled + 1 : 0;
    if (stalled >= 5) break;
  }
  return res;
}

}  // namespace vnlab
