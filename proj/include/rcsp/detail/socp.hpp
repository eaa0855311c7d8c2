#pragma once

// Small dense second-order cone programs solved with a log-barrier
// interior-point method (Newton centering with backtracking line search).
//
//   minimize    c'x
//   subject to  G x <= g
//               ||A_i x + b_i|| <= e_i'x + f_i
//
// The caller supplies a strictly feasible starting point.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace rcsp::detail {

struct SocCone {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd e;
  double f = 0.0;
};

struct Socp {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  std::vector<SocCone> cones;

  Eigen::Index num_vars() const { return c.size(); }
  // Barrier parameter: 1 per half-space, 2 per second-order cone.
  double barrier_degree() const { return static_cast<double>(G.rows()) + 2.0 * static_cast<double>(cones.size()); }

  // Largest constraint violation at x (negative when strictly feasible).
  double max_violation(const Eigen::VectorXd& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    if (G.rows() > 0) worst = (G * x - g).maxCoeff();
    for (const auto& k : cones) worst = std::max(worst, (k.A * x + k.b).norm() - k.e.dot(x) - k.f);
    return worst;
  }
};

// Barrier value, gradient and Hessian. Returns false outside the strict interior.
inline bool barrier_eval(const Socp& p, const Eigen::VectorXd& x, double& value, Eigen::VectorXd* grad,
                         Eigen::MatrixXd* hess) {
  value = 0.0;
  if (grad) grad->setZero(x.size());
  if (hess) hess->setZero(x.size(), x.size());

  if (p.G.rows() > 0) {
    const Eigen::VectorXd slack = p.g - p.G * x;
    if (!(slack.minCoeff() > 0.0)) return false;
    value -= slack.array().log().sum();
    if (grad) *grad += p.G.transpose() * slack.cwiseInverse();
    if (hess) {
      const Eigen::MatrixXd scaled = slack.cwiseInverse().asDiagonal() * p.G;
      hess->noalias() += scaled.transpose() * scaled;
    }
  }

  for (const auto& k : p.cones) {
    const Eigen::VectorXd u = k.A * x + k.b;
    const double w = k.e.dot(x) + k.f;
    const double un = u.norm();
    // (w - |u|)(w + |u|) avoids cancellation near the cone boundary.
    const double q = (w - un) * (w + un);
    if (!(w > 0.0) || !(w - un > 0.0) || !(q > 0.0)) return false;
    value -= std::log(q);
    if (grad || hess) {
      const Eigen::VectorXd dq = 2.0 * w * k.e - 2.0 * k.A.transpose() * u;
      if (grad) *grad -= dq / q;
      if (hess) {
        hess->noalias() += dq * dq.transpose() / (q * q);
        hess->noalias() -= 2.0 * k.e * k.e.transpose() / q;
        hess->noalias() += 2.0 * k.A.transpose() * k.A / q;
      }
    }
  }
  return std::isfinite(value);
}

struct BarrierOptions {
  double gap_target = 1e-9;
  int max_newton = 50000;
  double mu = 20.0;
  double t0 = 1.0;
  double centering_tol = 1e-12;
};

struct BarrierReport {
  Eigen::VectorXd x;
  int newton_iterations = 0;
  double gap = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool stopped_early = false;
  bool exhausted = false;
  bool non_finite = false;
  double kkt_residual = std::numeric_limits<double>::infinity();
};

/// Runs the barrier method from a strictly feasible x0. `early_stop` is
/// consulted after every Newton step and ends the solve when it returns true.
inline BarrierReport barrier_solve(const Socp& p, Eigen::VectorXd x0, const BarrierOptions& opt,
                                   const std::function<bool(const Eigen::VectorXd&)>& early_stop = {}) {
  BarrierReport rep;
  rep.x = std::move(x0);
  const double nu = p.barrier_degree();
  double t = opt.t0;

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double phi = 0.0;
  if (!barrier_eval(p, rep.x, phi, nullptr, nullptr)) {
    rep.non_finite = true;
    return rep;
  }

  for (;;) {
    // Centering.
    for (int inner = 0; inner < 200; ++inner) {
      if (rep.newton_iterations >= opt.max_newton) {
        rep.exhausted = true;
        return rep;
      }
      barrier_eval(p, rep.x, phi, &grad, &hess);
      const Eigen::VectorXd gF = t * p.c + grad;
      rep.kkt_residual = gF.norm() / t;

      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = ldlt.solve(-gF);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        const double reg = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        hess.diagonal().array() += reg;
        step = hess.llt().solve(-gF);
      }
      if (!step.allFinite()) {
        rep.non_finite = true;
        return rep;
      }
      const double decrement = -gF.dot(step);
      ++rep.newton_iterations;
      if (decrement / 2.0 <= opt.centering_tol) break;

      const double F0 = t * p.c.dot(rep.x) + phi;
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-16) {
        const Eigen::VectorXd trial = rep.x + alpha * step;
        double phi_trial = 0.0;
        if (barrier_eval(p, trial, phi_trial, nullptr, nullptr)) {
          const double F1 = t * p.c.dot(trial) + phi_trial;
          if (F1 <= F0 - 0.01 * alpha * decrement) {
            rep.x = trial;
            phi = phi_trial;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (early_stop && early_stop(rep.x)) {
        rep.stopped_early = true;
        return rep;
      }
      // No representable descent left: the iterate is as centered as
      // double precision allows.
      if (!moved) break;
    }

    rep.gap = nu / t;
    if (rep.gap <= opt.gap_target) {
      rep.converged = true;
      return rep;
    }
    t *= opt.mu;
  }
}

}  // namespace rcsp::detail
