#include "srlab/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace srlab {

Kernel::Kernel(int fc) : fc_(fc) {
  if (fc < 10) throw Error("kernel requires fc >= 10");
  if (fc % 2 != 0) throw Error("kernel requires an even fc (M = fc/2 + 1 must be an integer)");
  // H has frequencies (M-1)/2 - j, j < M; the four-fold product therefore has
  // kappa_{fc - J} = #{(j1..j4) : sum = J} / M^4.
  const int M = half_order();
  Eigen::VectorXd box = Eigen::VectorXd::Ones(M);
  auto convolve = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i, b.size()) += a(i) * b;
    return out;
  };
  const Eigen::VectorXd two = convolve(box, box);
  Eigen::VectorXd four = convolve(two, two);
  four /= std::pow(static_cast<Real>(M), 4);
  // four(J) is the coefficient of frequency fc - J; it is symmetric, so the
  // k-ascending order is the same vector.
  fourier_ = four.reverse();
}

Real Kernel::operator()(Real t, int order) const {
  if (order < 0 || order > 3) throw Error("kernel derivative order must be in 0..3");
  return derivatives(t)[order];
}

Real kernel_eval(int fc, Real t, int order) { return Kernel(fc)(t, order); }

bool KernelBoundReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::string to_string(KernelRegion region) { return region == KernelRegion::Near ? "near" : "far"; }

KernelBoundReport verify_kernel_bounds(const Kernel& kernel, Real c, Real grid_step) {
  const Real lambda = kernel.lambda();
  if (grid_step <= 0.0) grid_step = lambda / 200.0;
  if (grid_step > lambda / 200.0 * (1.0 + 1e-12))
    throw Error("grid_step must be at most lambda_c / 200");
  const Real fc = kernel.fc();
  const Real edge = c * lambda;

  KernelBoundReport report{kernel.fc(), c, grid_step, {}};
  auto near_max = [&](auto&& f) { return refined_max(f, -edge, edge, grid_step); };
  auto add = [&](KernelRegion region, int order, std::string name, Real measured, Real bound,
                 bool lower) {
    const bool pass = lower ? measured >= bound - kBoundSlack : measured <= bound + kBoundSlack;
    report.checks.push_back({region, order, std::move(name), measured, bound, lower, pass});
  };

  const Real min_k = -near_max([&](Real t) { return -kernel(t, 0); });
  add(KernelRegion::Near, 0, "K >= 0.9539", min_k, 0.9539, true);
  const Real max_k2 = near_max([&](Real t) { return kernel(t, 2); }) / (fc * fc);
  add(KernelRegion::Near, 2, "K'' <= -2.923 fc^2", max_k2, -2.923, false);
  const Real max_k1 = near_max([&](Real t) { return std::abs(kernel(t, 1)); }) / fc;
  add(KernelRegion::Near, 1, "|K'| <= 0.5595 fc", max_k1, 0.5595, false);
  const Real abs_k2 = near_max([&](Real t) { return std::abs(kernel(t, 2)); }) / (fc * fc);
  add(KernelRegion::Near, 2, "|K''| <= 3.393 fc^2", abs_k2, 3.393, false);
  const Real abs_k3 = near_max([&](Real t) { return std::abs(kernel(t, 3)); }) / (fc * fc * fc);
  add(KernelRegion::Near, 3, "|K'''| <= 5.697 fc^3", abs_k3, 5.697, false);

  // Far region c*lambda < |t| <= 1/2; both bounds are even in t, but scan both
  // halves anyway. Ratios to the t-dependent bound are reported (bound = 1).
  const Real start = std::nextafter(edge, 1.0);
  auto far_max = [&](auto&& f) {
    return std::max(refined_max(f, start, 0.5, grid_step),
                    refined_max([&](Real t) { return f(-t); }, start, 0.5, grid_step));
  };
  const Real far0 = far_max([&](Real t) { return kernel(t, 0) * std::pow(fc * t, 4); });
  add(KernelRegion::Far, 0, "K <= 1/(fc t)^4", far0, 1.0, false);
  const Real far1 = far_max([&](Real t) {
    return std::abs(kernel(t, 1)) * fc * fc * fc * std::pow(t, 4) / (4.0 * std::numbers::pi);
  });
  add(KernelRegion::Far, 1, "|K'| <= 4 pi/(fc^3 t^4)", far1, 1.0, false);
  return report;
}

}  // namespace srlab
