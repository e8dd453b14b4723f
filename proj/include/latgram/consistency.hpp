#pragma once

// Cross-module consistency checks: every closed-form result is pitted
// against an independent route (elliptic seeds vs quadrature, folded
// double integral vs the general spectral form, spectral entries vs
// finite-window Lyapunov/RK4 oracles, simulated control energy vs the
// Gramian cost formula). The CLI exposes these as `oracle-check`.

#include <cmath>
#include <string>
#include <vector>

#include "latgram/elliptic.hpp"
#include "latgram/finite.hpp"
#include "latgram/lattice.hpp"
#include "latgram/metrics.hpp"
#include "latgram/nn1d.hpp"
#include "latgram/placement.hpp"
#include "latgram/spectral.hpp"

namespace latgram {
namespace consistency {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckOptions {
  double p = -3.0;
  double s = 1.0;
  int quad_points = 0;     // 0 = per-module defaults
  int chain_radius = 100;  // finite-window size for the 1-D oracle
  bool include_2d = true;
  double control_tf = 5.0;
};

namespace detail {

inline CheckResult make(const std::string& name, double err, double tol) {
  return {name, err, tol, err <= tol};
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace detail

/// Runs the full battery; every check reports its worst error against its
/// tolerance. All pass at the default options.
inline std::vector<CheckResult> run_consistency_checks(const CheckOptions& opt = {}) {
  std::vector<CheckResult> out;
  const auto par = nn1d::make_params(opt.p, opt.s);
  const QuadratureConfig quad{opt.quad_points, QuadratureConfig::Scheme::GaussLegendre};

  // 1. diagonal recursion vs direct quadrature of the folded integral
  {
    const int m_max = std::min(10, std::max(1, nn1d::recursion_trust_horizon(par)));
    const auto rec = nn1d::diagonal_recursion(par, m_max);
    const auto quad_diag = nn1d::diagonal_quadrature(par, m_max, quad);
    double err = 0.0;
    for (int m = 0; m <= rec.last_index(); ++m)
      err = std::max(err, detail::rel_err(rec.values[m], quad_diag[m]));
    out.push_back(detail::make("recursion-vs-quadrature", err, 1e-6));
  }

  // 2. elliptic seeds vs quadrature (also certifies the parameter convention)
  {
    const auto seeds = nn1d::diagonal_seeds(par);
    const double q00 = nn1d::entry_quadrature(par, 0, 0, quad);
    const double q11 = nn1d::entry_quadrature(par, 1, 1, quad);
    const double err =
        std::max(detail::rel_err(seeds.g00, q00), detail::rel_err(seeds.g11, q11));
    out.push_back(detail::make("seeds-vs-quadrature", err, 1e-10));
  }

  // 3. AGM elliptic integrals vs their defining integrals
  {
    std::vector<double> th, w;
    quadrature::gauss_legendre(96, th, w);
    quadrature::map_interval(th, w, 0.0, 0.5 * 3.14159265358979323846);
    double err = 0.0;
    for (double m : {0.1, 0.5, 0.9}) {
      double k_int = 0.0, e_int = 0.0;
      for (std::size_t i = 0; i < th.size(); ++i) {
        const double sv = std::sin(th[i]);
        const double root = std::sqrt(1.0 - m * sv * sv);
        k_int += w[i] / root;
        e_int += w[i] * root;
      }
      err = std::max(err, detail::rel_err(elliptic_K(m), k_int));
      err = std::max(err, detail::rel_err(elliptic_E(m), e_int));
    }
    out.push_back(detail::make("elliptic-agm-vs-integral", err, 1e-12));
  }

  // 4. folded [0,pi]^2 integral vs the general [-pi,pi]^2 spectral form
  {
    const auto spec = nn1d_spec(opt.p, opt.s);
    const spectral::GramianEvaluator eval(spec, quad);
    const std::vector<NodeIndex> driver{node1d(0)};
    double err = 0.0;
    for (auto [i, j] : {std::pair{0, 0}, {1, 0}, {2, 1}, {3, 2}}) {
      const double folded = nn1d::entry_quadrature(par, i, j, quad);
      const double full = eval.entry_steady(driver, node1d(i), node1d(j));
      err = std::max(err, std::fabs(folded - full));
    }
    out.push_back(detail::make("nn1d-vs-spectral-folding", err, 1e-9));
  }

  // 5. spectral steady state vs finite-window Lyapunov solve
  {
    const auto spec = nn1d_spec(opt.p, opt.s);
    const auto sys = finite::truncate(spec, opt.chain_radius, {node1d(0)});
    const Matrix w = finite::lyapunov_steady(sys);
    const int c = sys.index_of(node1d(0));
    const spectral::GramianEvaluator eval(spec, quad);
    const std::vector<NodeIndex> driver{node1d(0)};
    double err = 0.0;
    for (int i = -3; i <= 3; ++i)
      for (int j = i; j <= 3; ++j)
        err = std::max(err, std::fabs(w(c + i, c + j) -
                                      eval.entry_steady(driver, node1d(i), node1d(j))));
    out.push_back(detail::make("spectral-vs-lyapunov", err, 1e-6));
  }

  // 6. spectral time-varying entries vs RK4 integration of the Gramian ODE
  {
    const auto spec = nn1d_spec(opt.p, opt.s);
    const auto sys = finite::truncate(spec, 30, {node1d(0)});
    const Matrix w = finite::gramian_ode(sys, 1.0);
    const int c = sys.index_of(node1d(0));
    const spectral::GramianEvaluator eval(spec, quad);
    const std::vector<NodeIndex> driver{node1d(0)};
    double err = 0.0;
    for (int i = -2; i <= 2; ++i)
      for (int j = i; j <= 2; ++j)
        err = std::max(err, std::fabs(w(c + i, c + j) -
                                      eval.entry_at(driver, node1d(i), node1d(j), 1.0)));
    out.push_back(detail::make("time-vs-rk4", err, 1e-6));
  }

  // 7. finite-horizon entries approach the steady state
  {
    const auto spec = nn1d_spec(opt.p, opt.s);
    const spectral::GramianEvaluator eval(spec, quad);
    const std::vector<NodeIndex> driver{node1d(0)};
    double err = 0.0;
    for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {2, 0}})
      err = std::max(err, std::fabs(eval.entry_at(driver, node1d(i), node1d(j), 40.0) -
                                    eval.entry_steady(driver, node1d(i), node1d(j))));
    out.push_back(detail::make("steady-consistency", err, 1e-8));
  }

  // 8. simulated minimum-energy input vs the Gramian cost formula
  {
    const auto spec = nn1d_spec(opt.p, opt.s);
    const auto sys = finite::truncate(spec, 10, {node1d(0)});
    const std::size_t n = sys.size();
    const auto run = finite::min_energy_control(sys, std::vector<double>(n, 0.0), {node1d(2)},
                                                {1.0}, opt.control_tf);
    out.push_back(detail::make("min-energy-cost-match",
                               std::fabs(run.energy - run.j_star) / run.j_star, 1e-3));
    out.push_back(detail::make("min-energy-endpoint", run.final_error, 1e-4));
  }

  // 9. two-dimensional lattice: 4-D quadrature vs grid Lyapunov oracle
  if (opt.include_2d) {
    const auto spec2 = build_lattice_spec(
        2, {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {-5.0, 1.0, 1.0, 1.0, 1.0});
    const auto sys = finite::truncate(spec2, 6, {{0, 0}});
    const Matrix w = finite::lyapunov_steady(sys);
    const spectral::GramianEvaluator eval(spec2, quad);
    const std::vector<NodeIndex> driver{{0, 0}};
    double err = 0.0;
    for (auto [i, j] : {std::pair<NodeIndex, NodeIndex>{{0, 0}, {0, 0}},
                        {{0, 0}, {1, 0}},
                        {{1, 0}, {0, 1}},
                        {{1, 1}, {0, 0}}}) {
      const int r = sys.index_of(i), c = sys.index_of(j);
      err = std::max(err, std::fabs(w(r, c) - eval.entry_steady(driver, i, j)));
    }
    out.push_back(detail::make("2d-spectral-vs-lyapunov", err, 1e-6));
  }

  return out;
}

}  // namespace consistency
}  // namespace latgram
