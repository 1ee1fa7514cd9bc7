#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aevqe/circuit.hpp"
#include "aevqe/rng.hpp"

namespace aevqe {

using LossFn = std::function<double(const ParamVector&)>;

/// Optional early-stop predicate: (iteration index, recorded loss, params).
using StopFn = std::function<bool(int, double, const ParamVector&)>;

struct OptimizerTrace {
  std::vector<ParamVector> params;  // iterate after each iteration
  std::vector<double> losses;      // loss recorded for each iteration
  std::vector<long> evals;         // optimizer evaluations per iteration
  long total_evals = 0;            // includes monitor probes
  long monitor_evals = 0;          // extra evaluations spent on loss records
  bool diverged = false;
  bool stalled = false;
  int stopped_at = -1;  // iteration where the stop rule fired

  void push(ParamVector p, double loss, long n_evals) {
    params.push_back(std::move(p));
    losses.push_back(loss);
    evals.push_back(n_evals);
    total_evals += n_evals;
  }
  double best_loss() const {
    double b = std::numeric_limits<double>::infinity();
    for (double l : losses) b = std::min(b, l);
    return b;
  }
};

struct SpsaConfig {
  double epsilon = 0.1;  // perturbation magnitude (radians)
  double eta = 0.2;      // learning rate
  int max_iter = 200;
  bool decay = false;  // optional power-law gain decay, off by default

  void validate() const {
    if (epsilon <= 0 || eta <= 0)
      throw std::invalid_argument("SpsaConfig: epsilon and eta must be positive");
  }
};

namespace detail {
inline void check_finite(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("optimizer: non-finite loss value");
}
}  // namespace detail

/// One SPSA iteration: random +-1 perturbation, two loss evaluations,
/// gradient estimate g_i = (L+ - L-)/(2 eps Delta_i), descent update
/// theta <- theta - eta*g. Returns the new parameters and the estimate,
/// plus the two evaluated losses through the out-parameters.
inline std::pair<ParamVector, std::vector<double>> spsa_step(
    const ParamVector& params, const LossFn& loss, const SpsaConfig& cfg,
    std::mt19937_64& rng, double* loss_plus = nullptr, double* loss_minus = nullptr,
    int iteration = 0) {
  cfg.validate();
  const std::size_t dim = params.size();
  double eps = cfg.epsilon, eta = cfg.eta;
  if (cfg.decay) {
    eps = cfg.epsilon / std::pow(iteration + 1.0, 0.101);
    eta = cfg.eta / std::pow(iteration + 1.0, 0.602);
  }
  std::vector<double> delta(dim);
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& d : delta) d = coin(rng) ? 1.0 : -1.0;
  ParamVector up(dim), dn(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    up[i] = params[i] + eps * delta[i];
    dn[i] = params[i] - eps * delta[i];
  }
  const double lp = loss(up);
  const double lm = loss(dn);
  detail::check_finite(lp);
  detail::check_finite(lm);
  if (loss_plus) *loss_plus = lp;
  if (loss_minus) *loss_minus = lm;
  std::vector<double> grad(dim);
  ParamVector next(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    grad[i] = (lp - lm) / (2.0 * eps * delta[i]);
    next[i] = params[i] - eta * grad[i];
  }
  return {next, grad};
}

/// SPSA loop; each iteration records (L+ + L-)/2 as its loss and consumes
/// exactly two evaluations.
inline OptimizerTrace spsa_minimize(ParamVector params, const LossFn& loss,
                                    const SpsaConfig& cfg, std::uint64_t seed,
                                    const StopFn& stop = nullptr) {
  cfg.validate();
  OptimizerTrace trace;
  auto rng = make_rng(derive_seed(seed, 0x73707361ULL));
  for (int k = 0; k < cfg.max_iter; ++k) {
    double lp = 0, lm = 0;
    auto [next, grad] = spsa_step(params, loss, cfg, rng, &lp, &lm, k);
    params = std::move(next);
    trace.push(params, 0.5 * (lp + lm), 2);
    if (stop && stop(k, trace.losses.back(), params)) {
      trace.stopped_at = k;
      break;
    }
  }
  return trace;
}

/// Full-gradient descent with parameter-shift gradients (shift pi/2),
/// exactly 2P optimizer evaluations per iteration (the per-iteration evals
/// field records these). One additional probe per iteration monitors the
/// loss at the new iterate for the trace, the stop rule and the divergence
/// detector; probes are tallied in monitor_evals/total_evals. Divergence
/// (monitored loss rising 20 iterations in a row) stops the run with the
/// diverged flag set.
inline OptimizerTrace bgd_minimize(ParamVector params, const LossFn& loss,
                                   double learning_rate, int max_iter,
                                   const StopFn& stop = nullptr) {
  if (learning_rate <= 0) throw std::invalid_argument("bgd: learning rate must be positive");
  OptimizerTrace trace;
  const std::size_t dim = params.size();
  const double shift = M_PI / 2.0;
  int rising = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    std::vector<double> grad(dim);
    ParamVector probe = params;
    for (std::size_t i = 0; i < dim; ++i) {
      probe[i] = params[i] + shift;
      const double lp = loss(probe);
      probe[i] = params[i] - shift;
      const double lm = loss(probe);
      probe[i] = params[i];
      detail::check_finite(lp);
      detail::check_finite(lm);
      grad[i] = 0.5 * (lp - lm);
    }
    double gnorm = 0;
    for (double g : grad) gnorm += g * g;
    for (std::size_t i = 0; i < dim; ++i) params[i] -= learning_rate * grad[i];
    const double recorded = loss(params);
    detail::check_finite(recorded);
    trace.push(params, recorded, 2 * static_cast<long>(dim));
    ++trace.monitor_evals;
    ++trace.total_evals;
    if (gnorm == 0.0) {
      trace.stalled = true;
      break;
    }
    if (recorded > prev) {
      if (++rising >= 20) {
        trace.diverged = true;
        break;
      }
    } else {
      rising = 0;
    }
    prev = recorded;
    if (stop && stop(k, recorded, params)) {
      trace.stopped_at = k;
      break;
    }
  }
  return trace;
}

namespace detail {

/// Brackets a minimum of f along t >= 0 by doubling; returns false if no
/// bracket is found within the expansion budget.
inline bool bracket_minimum(const std::function<double(double)>& f, double& a,
                            double& b, double& c, double& fb, long& evals) {
  a = 0.0;
  double fa = f(a);
  ++evals;
  b = 1.0;
  fb = f(b);
  ++evals;
  if (fb > fa) {  // try the other side
    c = b;
    b = a;
    fb = fa;
    a = -1.0;
    fa = f(a);
    ++evals;
    if (fa < fb) {
      // keep walking left
      for (int i = 0; i < 40 && fa < fb; ++i) {
        c = b; b = a; fb = fa;
        a *= 2.0;
        fa = f(a);
        ++evals;
      }
      return fa >= fb;
    }
    return true;  // a=-1 > b=0 < c=1 bracket
  }
  // walk right
  c = 2.0;
  double fc = f(c);
  ++evals;
  for (int i = 0; i < 40 && fc < fb; ++i) {
    a = b; b = c; fb = fc;
    c *= 2.0;
    fc = f(c);
    ++evals;
  }
  return fc >= fb;
}

/// Golden-section refinement on a bracketed minimum.
inline double golden_section(const std::function<double(double)>& f, double a,
                             double b, double c, double tol, long& evals) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x0 = a, x3 = c;
  double x1, x2;
  if (std::abs(c - b) > std::abs(b - a)) {
    x1 = b;
    x2 = b + (1 - gr) * (c - b);
  } else {
    x2 = b;
    x1 = b - (1 - gr) * (b - a);
  }
  double f1 = f(x1), f2 = f(x2);
  evals += 2;
  while (std::abs(x3 - x0) > tol * (std::abs(x1) + std::abs(x2) + 1e-12)) {
    if (f2 < f1) {
      x0 = x1; x1 = x2; f1 = f2;
      x2 = gr * x1 + (1 - gr) * x3;
      f2 = f(x2);
    } else {
      x3 = x2; x2 = x1; f2 = f1;
      x1 = gr * x2 + (1 - gr) * x0;
      f1 = f(x1);
    }
    ++evals;
    if (std::abs(x3 - x0) < 1e-14) break;
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace detail

/// Powell direction-set minimization with bracketing line searches and
/// golden-section refinement. max_iter counts line searches. A failed
/// bracket falls back to the plain coordinate sweep.
inline OptimizerTrace powell_minimize(ParamVector params, const LossFn& loss,
                                      int max_iter, double tol,
                                      const StopFn& stop = nullptr) {
  OptimizerTrace trace;
  const std::size_t dim = params.size();
  std::vector<std::vector<double>> dirs(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) dirs[i][i] = 1.0;
  double fcur = loss(params);
  detail::check_finite(fcur);
  long spent = 1;
  int searches = 0;
  while (searches < max_iter) {
    const ParamVector sweep_start = params;
    const double f_start = fcur;
    double biggest_drop = 0.0;
    std::size_t biggest_idx = 0;
    for (std::size_t d = 0; d < dim && searches < max_iter; ++d) {
      const auto& dir = dirs[d];
      auto f1d = [&](double t) {
        ParamVector p = params;
        for (std::size_t i = 0; i < dim; ++i) p[i] += t * dir[i];
        return loss(p);
      };
      long evals = 0;
      double a, b, c, fb;
      double step_scale = 1.0;
      bool ok = detail::bracket_minimum(f1d, a, b, c, fb, evals);
      double tbest = 0.0;
      if (ok) {
        tbest = detail::golden_section(f1d, a, b, c, tol, evals);
      } else {
        // coordinate fallback: probe small +- steps along the axis
        ParamVector p = params;
        const double h = 0.25 * step_scale;
        p[d % dim] += h;
        const double fp = loss(p);
        p[d % dim] -= 2 * h;
        const double fm = loss(p);
        evals += 2;
        if (std::min(fp, fm) < fcur) {
          params[d % dim] += (fp < fm ? h : -h);
          fcur = std::min(fp, fm);
        }
        trace.push(params, fcur, evals);
        ++searches;
        if (stop && stop(searches - 1, fcur, params)) {
          trace.stopped_at = searches - 1;
          return trace;
        }
        continue;
      }
      const double fnew = f1d(tbest);
      ++evals;
      if (fnew < fcur) {
        if (fcur - fnew > biggest_drop) {
          biggest_drop = fcur - fnew;
          biggest_idx = d;
        }
        for (std::size_t i = 0; i < dim; ++i) params[i] += tbest * dir[i];
        fcur = fnew;
      }
      trace.push(params, fcur, evals);
      ++searches;
      if (stop && stop(searches - 1, fcur, params)) {
        trace.stopped_at = searches - 1;
        return trace;
      }
    }
    spent = trace.total_evals;
    (void)spent;
    // Powell update: replace the direction of largest decrease with the
    // net sweep displacement.
    std::vector<double> net(dim);
    double net_norm = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      net[i] = params[i] - sweep_start[i];
      net_norm += net[i] * net[i];
    }
    if (net_norm > 1e-24) {
      dirs.erase(dirs.begin() + static_cast<long>(biggest_idx));
      double inv = 1.0 / std::sqrt(net_norm);
      for (auto& x : net) x *= inv;
      dirs.push_back(std::move(net));
    }
    if (f_start - fcur < tol * (std::abs(f_start) + std::abs(fcur) + 1e-12)) {
      trace.stalled = true;
      break;
    }
  }
  return trace;
}

struct GaConfig {
  int population = 20;
  int generations = 100;
  double crossover_rate = 0.7;
  double mutation_rate = 0.1;
  double mutation_sigma = 0.1;  // radians
  int tournament = 2;
  int elitism = 1;
};

/// Real-valued genetic algorithm: tournament selection, uniform crossover,
/// Gaussian mutation, single elite. Records the best individual per
/// generation; best-so-far loss is non-increasing.
inline OptimizerTrace ga_minimize(int dim, const LossFn& loss, const GaConfig& cfg,
                                  std::uint64_t seed, const StopFn& stop = nullptr,
                                  const std::vector<ParamVector>* initial = nullptr) {
  if (cfg.population < 4) throw std::invalid_argument("ga: population must be >= 4");
  OptimizerTrace trace;
  auto rng = make_rng(derive_seed(seed, 0x6761ULL));
  std::uniform_real_distribution<double> uang(-M_PI, M_PI);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, cfg.mutation_sigma);
  std::uniform_int_distribution<int> upick(0, cfg.population - 1);

  std::vector<ParamVector> pop(cfg.population, ParamVector(dim));
  if (initial) {
    for (int i = 0; i < cfg.population; ++i) pop[i] = (*initial)[i % initial->size()];
  } else {
    for (auto& ind : pop)
      for (auto& x : ind) x = uang(rng);
  }
  std::vector<double> fit(cfg.population);
  for (int i = 0; i < cfg.population; ++i) {
    fit[i] = loss(pop[i]);
    detail::check_finite(fit[i]);
  }
  auto best_of = [&]() {
    int b = 0;
    for (int i = 1; i < cfg.population; ++i)
      if (fit[i] < fit[b]) b = i;
    return b;
  };
  int b0 = best_of();
  trace.push(pop[b0], fit[b0], cfg.population);
  if (stop && stop(0, fit[b0], pop[b0])) {
    trace.stopped_at = 0;
    return trace;
  }
  for (int gen = 1; gen < cfg.generations; ++gen) {
    std::vector<ParamVector> next;
    next.reserve(cfg.population);
    const int elite = best_of();
    for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[elite]);
    while (static_cast<int>(next.size()) < cfg.population) {
      auto tourney = [&]() {
        int best = upick(rng);
        for (int t = 1; t < cfg.tournament; ++t) {
          int cand = upick(rng);
          if (fit[cand] < fit[best]) best = cand;
        }
        return best;
      };
      ParamVector child = pop[tourney()];
      if (u01(rng) < cfg.crossover_rate) {
        const ParamVector& other = pop[tourney()];
        for (int i = 0; i < dim; ++i)
          if (u01(rng) < 0.5) child[i] = other[i];
      }
      for (int i = 0; i < dim; ++i)
        if (u01(rng) < cfg.mutation_rate) child[i] += gauss(rng);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    for (int i = 0; i < cfg.population; ++i) {
      fit[i] = loss(pop[i]);
      detail::check_finite(fit[i]);
    }
    const int b = best_of();
    trace.push(pop[b], fit[b], cfg.population);
    if (stop && stop(gen, fit[b], pop[b])) {
      trace.stopped_at = gen;
      break;
    }
  }
  return trace;
}

}  // namespace aevqe
