#pragma once

// Discretized mild solutions of
//
//     du = L u dt + sigma(u) f(B_t, t) W(dx dt)
//
// on a periodic grid, with L = -(-Delta)^{alpha/2} diagonal in Fourier space.
// Time stepping is exponential in L and explicit in the noise:
//
//     u^{k+1} = exp(dt L_h) [u^k + sigma(u^k) f_k sqrt(dt/dx) xi_k],
//
// xi_k iid N(0,1) per grid cell. With no noise this is the exact spectral
// semigroup step. Also provides the stochastic-convolution operator with the
// running-maximum martingale prefactor, its Picard iteration, and the
// weighted moment norm sup_{t,x} e^{-beta t} E|u|^p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shelab/errors.hpp"
#include "shelab/kernels.hpp"
#include "shelab/levy.hpp"
#include "shelab/martingale.hpp"
#include "shelab/parallel.hpp"
#include "shelab/quadrature.hpp"
#include "shelab/rng.hpp"
#include "shelab/spectral.hpp"
#include "shelab/stats.hpp"

namespace shelab {

/// Affine sigma(u) = lip * u + intercept.
struct Sigma {
  double lip = 1.0;
  double intercept = 0.0;
  double operator()(double u) const { return lip * u + intercept; }
};

namespace noise {
/// Pure heat equation.
struct None {};
/// f = 1.
struct White {};
/// f = M_t^{lambda0}.
struct CappedMartingale {
  double lambda0 = 0.0;
};
/// f = Int M_t^lambda C exp(-lambda^2/2) d lambda.
struct HarmonicMixture {
  double C = 1.0;
};
/// Mixture with (B, t) frozen at (a, T_a).
struct FrozenHitting {
  double a = 0.0;
  double C = 1.0;
};
}  // namespace noise

using NoiseMode =
    std::variant<noise::None, noise::White, noise::CappedMartingale, noise::HarmonicMixture, noise::FrozenHitting>;

inline std::string noise_mode_name(const NoiseMode& m) {
  constexpr const char* names[] = {"none", "white", "capped_martingale", "harmonic_mixture", "frozen_hitting"};
  return names[m.index()];
}

/// Multiplicative factor f(b, t) of the noise; 0 for mode none. `hit_time` is
/// the replica's T_a and only matters for frozen_hitting.
inline double noise_factor(const NoiseMode& mode, double b, double t, double hit_time = 0.0) {
  struct Visitor {
    double b, t, hit_time;
    double operator()(const noise::None&) const { return 0.0; }
    double operator()(const noise::White&) const { return 1.0; }
    double operator()(const noise::CappedMartingale& m) const { return exp_martingale(m.lambda0, b, t); }
    double operator()(const noise::HarmonicMixture& m) const { return harmonic_mixture_value(m.C, b, t); }
    double operator()(const noise::FrozenHitting& m) const { return frozen_mixture_value(m.C, m.a, hit_time); }
  };
  return std::visit(Visitor{b, t, hit_time}, mode);
}

struct ModelSpec {
  double alpha = 2.0;
  Sigma sigma;
  /// Lower slope L_sigma with |sigma(u)| >= L_sigma |u|; only used for bounds.
  double l_sigma = 0.0;
  NoiseMode noise = noise::White{};
  double u0_constant = 1.0;
  /// Overrides u0_constant when non-empty; must match the grid size.
  std::vector<double> u0_values;
  /// One independent Brownian path per grid site instead of a single shared path.
  bool per_site_brownian = false;

  void validate() const {
    require_stable_alpha(alpha);
    if (!(sigma.lip >= 0.0) || !std::isfinite(sigma.lip)) throw ConfigError("lip must be finite and >= 0");
    if (!std::isfinite(sigma.intercept)) throw ConfigError("intercept must be finite");
    if (!(l_sigma >= 0.0)) throw ConfigError("l_sigma must be >= 0");
    if (l_sigma > 0.0 && (l_sigma > sigma.lip || sigma.intercept != 0.0))
      throw ConfigError("l_sigma > 0 requires l_sigma <= lip and intercept = 0");
    if (const auto* m = std::get_if<noise::HarmonicMixture>(&noise); m && !(m->C > 0.0))
      throw ConfigError("harmonic_mixture needs C > 0");
    if (const auto* m = std::get_if<noise::FrozenHitting>(&noise); m && !(m->C > 0.0))
      throw ConfigError("frozen_hitting needs C > 0");
  }

  GridFunction initial(const GridSpec& grid) const {
    if (u0_values.empty()) return GridFunction::constant(grid, u0_constant);
    if (u0_values.size() != grid.n_points) throw ConfigError("u0 grid function does not match the grid size");
    return {grid, u0_values};
  }

  bool noiseless() const { return std::holds_alternative<noise::None>(noise); }
};

struct Discretization {
  GridSpec grid;
  double dt = 1e-3;
  double horizon = 1.0;
  /// Keep every output_stride-th time step (plus the final one).
  std::size_t output_stride = 1;

  std::size_t n_steps() const { return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9)); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }

  void validate() const {
    grid.validate();
    if (!(dt > 0.0) || !(horizon > 0.0)) throw ConfigError("dt and horizon must be > 0");
    if (dt > horizon) throw ConfigError("dt exceeds horizon");
    if (output_stride == 0) throw ConfigError("output_stride must be >= 1");
  }

  std::vector<std::size_t> output_indices() const {
    std::vector<std::size_t> idx;
    const std::size_t n = n_steps();
    for (std::size_t k = 0; k <= n; k += output_stride) idx.push_back(k);
    if (idx.back() != n) idx.push_back(n);
    return idx;
  }
};

/// u(x_j, t_k) at a set of output times, row-major by time.
struct SolutionField {
  GridSpec grid;
  std::vector<double> times;
  std::vector<double> values;
  /// First output row index that would have been non-finite.
  std::optional<std::size_t> blowup_index;
  std::uint64_t seed = 0;

  std::size_t n_times() const { return times.size(); }
  std::span<const double> row(std::size_t k) const {
    return std::span<const double>(values).subspan(k * grid.n_points, grid.n_points);
  }
  std::span<double> row(std::size_t k) { return std::span<double>(values).subspan(k * grid.n_points, grid.n_points); }
  void push_row(double t, std::span<const double> u) {
    times.push_back(t);
    values.insert(values.end(), u.begin(), u.end());
  }
};

/// Noise of one replica, drawn in a fixed order:
///   brownian stream: hit times (frozen_hitting only), then per step one
///                    increment per Brownian path;
///   white-noise stream: per step N standard normals.
/// T_a is drawn from its exact law a^2 / Z^2.
class ReplicaNoise {
 public:
  ReplicaNoise(const ModelSpec& model, const Discretization& disc, std::uint64_t replica_seed)
      : mode_(model.noise),
        dt_(disc.dt),
        n_(disc.grid.n_points),
        n_paths_(model.per_site_brownian ? disc.grid.n_points : 1),
        white_(stream_seed(replica_seed, Stream::white_noise)),
        brownian_(stream_seed(replica_seed, Stream::brownian)),
        b_(n_paths_, 0.0),
        hit_(n_paths_, 0.0) {
    if (const auto* m = std::get_if<noise::FrozenHitting>(&mode_)) {
      for (auto& h : hit_) {
        const double z = brownian_.normal();
        h = m->a == 0.0 ? 0.0 : (z == 0.0 ? std::numeric_limits<double>::infinity() : m->a * m->a / (z * z));
      }
    }
  }

  /// Draws xi_k and the noise factors f(B_{t_k}, t_k), then advances B to t_{k+1}.
  void draw(std::size_t k, std::span<double> xi, std::span<double> factors) {
    for (auto& x : xi) x = white_.normal();
    const double t = static_cast<double>(k) * dt_;
    if (n_paths_ == 1) {
      const double f = noise_factor(mode_, b_[0], t, hit_[0]);
      std::fill(factors.begin(), factors.end(), f);
    } else {
      for (std::size_t j = 0; j < n_; ++j) factors[j] = noise_factor(mode_, b_[j], t, hit_[j]);
    }
    const double sd = std::sqrt(dt_);
    for (auto& b : b_) b += sd * brownian_.normal();
  }

  std::span<const double> brownian() const { return b_; }
  std::span<const double> hit_times() const { return hit_; }
  std::size_t n_paths() const { return n_paths_; }

 private:
  NoiseMode mode_;
  double dt_;
  std::size_t n_;
  std::size_t n_paths_;
  RandomSource white_;
  RandomSource brownian_;
  std::vector<double> b_;
  std::vector<double> hit_;
};

/// Frozen noise of one replica: every draw of ReplicaNoise, stored.
struct NoiseSlab {
  GridSpec grid;
  double dt = 0.0;
  std::size_t n_steps = 0;
  /// xi, n_steps x N.
  std::vector<double> increments;
  /// Noise factors f(B_{t_k}, t_k), n_steps x N.
  std::vector<double> factors;
  /// Brownian paths at t_0..t_n, (n_steps + 1) x n_paths.
  std::vector<double> brownian;
  std::size_t n_paths = 1;
  std::vector<double> hit_times;
  std::uint64_t seed = 0;

  std::span<const double> xi(std::size_t k) const {
    return std::span<const double>(increments).subspan(k * grid.n_points, grid.n_points);
  }
  std::span<const double> factor(std::size_t k) const {
    return std::span<const double>(factors).subspan(k * grid.n_points, grid.n_points);
  }
  std::span<const double> brownian_at(std::size_t k) const {
    return std::span<const double>(brownian).subspan(k * n_paths, n_paths);
  }
};

inline NoiseSlab make_noise_slab(const ModelSpec& model, const Discretization& disc, std::uint64_t replica_seed) {
  disc.validate();
  NoiseSlab slab;
  slab.grid = disc.grid;
  slab.dt = disc.dt;
  slab.n_steps = disc.n_steps();
  slab.seed = replica_seed;
  const std::size_t n = disc.grid.n_points;
  ReplicaNoise src(model, disc, replica_seed);
  slab.n_paths = src.n_paths();
  slab.hit_times.assign(src.hit_times().begin(), src.hit_times().end());
  slab.increments.resize(slab.n_steps * n);
  slab.factors.resize(slab.n_steps * n);
  slab.brownian.reserve((slab.n_steps + 1) * slab.n_paths);
  slab.brownian.insert(slab.brownian.end(), src.brownian().begin(), src.brownian().end());
  for (std::size_t k = 0; k < slab.n_steps; ++k) {
    src.draw(k, std::span<double>(slab.increments).subspan(k * n, n),
             std::span<double>(slab.factors).subspan(k * n, n));
    slab.brownian.insert(slab.brownian.end(), src.brownian().begin(), src.brownian().end());
  }
  return slab;
}

inline bool all_finite(std::span<const double> u) {
  return std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); });
}

/// One exponential-Euler step on a fixed grid and dt.
class Stepper {
 public:
  Stepper(const ModelSpec& model, const GridSpec& grid, double dt)
      : sigma_(model.sigma),
        noiseless_(model.noiseless()),
        fft_(grid),
        multiplier_(heat_multiplier(grid, model.alpha, dt)),
        scale_(std::sqrt(dt / grid.dx())) {}

  /// u <- exp(dt L)[u + sigma(u) f sqrt(dt/dx) xi]. Returns false if u became non-finite.
  bool step(std::span<double> u, std::span<const double> xi, std::span<const double> factors) {
    if (!noiseless_) {
      for (std::size_t j = 0; j < u.size(); ++j) u[j] += sigma_(u[j]) * factors[j] * scale_ * xi[j];
    }
    fft_.apply_multiplier(u, multiplier_);
    return all_finite(u);
  }

  /// Heat step without noise.
  void propagate(std::span<double> u) { fft_.apply_multiplier(u, multiplier_); }

  double noise_scale() const { return scale_; }

 private:
  Sigma sigma_;
  bool noiseless_;
  SpectralTransform fft_;
  std::vector<double> multiplier_;
  double scale_;
};

/// Status of a streamed replica.
struct ReplicaStatus {
  /// Step index at which a non-finite value first appeared.
  std::optional<std::size_t> blowup_step;
};

/// Runs one replica, calling observe(step_index, t, u) at every output index.
/// Stops at the first non-finite state.
template <class Observer>
ReplicaStatus simulate_replica(const ModelSpec& model, const Discretization& disc, std::uint64_t replica_seed,
                               Observer&& observe) {
  const std::size_t n = disc.grid.n_points;
  const std::size_t n_steps = disc.n_steps();
  Stepper stepper(model, disc.grid, disc.dt);
  auto u = model.initial(disc.grid).values;
  std::vector<double> xi(n), f(n);
  std::optional<ReplicaNoise> src;
  if (!model.noiseless()) src.emplace(model, disc, replica_seed);
  observe(std::size_t{0}, 0.0, std::span<const double>(u));
  for (std::size_t k = 0; k < n_steps; ++k) {
    if (src) src->draw(k, xi, f);
    if (!stepper.step(u, xi, f)) return {k + 1};
    if ((k + 1) % disc.output_stride == 0 || k + 1 == n_steps)
      observe(k + 1, disc.time(k + 1), std::span<const double>(u));
  }
  return {};
}

/// One replica as a SolutionField at the output times.
inline SolutionField simulate(const ModelSpec& model, const Discretization& disc, std::uint64_t replica_seed) {
  model.validate();
  disc.validate();
  SolutionField field;
  field.grid = disc.grid;
  field.seed = replica_seed;
  const auto status = simulate_replica(model, disc, replica_seed,
                                       [&](std::size_t, double t, std::span<const double> u) { field.push_row(t, u); });
  if (status.blowup_step) field.blowup_index = field.n_times();
  return field;
}

/// Step-based solution driven by a stored slab; every time step is kept.
inline SolutionField simulate(const ModelSpec& model, const NoiseSlab& slab) {
  model.validate();
  SolutionField field;
  field.grid = slab.grid;
  field.seed = slab.seed;
  Stepper stepper(model, slab.grid, slab.dt);
  auto u = model.initial(slab.grid).values;
  field.push_row(0.0, u);
  for (std::size_t k = 0; k < slab.n_steps; ++k) {
    if (!stepper.step(u, slab.xi(k), slab.factor(k))) {
      field.blowup_index = k + 1;
      return field;
    }
    field.push_row(static_cast<double>(k + 1) * slab.dt, u);
  }
  return field;
}

/// Heat evolution of u0 on the slab's time grid (no noise).
inline SolutionField heat_flow(const ModelSpec& model, const NoiseSlab& slab) {
  ModelSpec quiet = model;
  quiet.noise = noise::None{};
  return simulate(quiet, slab);
}

inline const noise::CappedMartingale& require_capped(const ModelSpec& model) {
  const auto* m = std::get_if<noise::CappedMartingale>(&model.noise);
  if (!m)
    throw ConfigError("stochastic convolution needs noise mode capped_martingale, got " +
                      noise_mode_name(model.noise));
  return *m;
}

/// (A u)(x, t_n) = max_{k <= n} M_{t_k}^{lambda0} * sum_{k < n} sum_y p(t_n - t_k, x - y) sigma(u(y, t_k)) sqrt(dt dx) xi_k
/// for every n, computed with the recursion I_{n+1} = exp(dt L)[I_n + sigma(u_n) sqrt(dt/dx) xi_n].
/// `u` must hold every time step of the slab.
inline SolutionField stochastic_convolution(const ModelSpec& model, const SolutionField& u, const NoiseSlab& slab) {
  const auto& capped = require_capped(model);
  if (!(u.grid == slab.grid)) throw ConfigError("field and noise grids differ");
  if (u.n_times() != slab.n_steps + 1) throw ConfigError("field must hold every time step of the noise slab");
  const std::size_t n = slab.grid.n_points;
  ModelSpec carrier = model;
  carrier.noise = noise::White{};
  Stepper stepper(carrier, slab.grid, slab.dt);
  const double scale = stepper.noise_scale();
  std::vector<double> acc(n, 0.0);
  std::vector<double> prefactor(slab.n_paths, 1.0);  // running max of M over t_0..t_n
  SolutionField out;
  out.grid = slab.grid;
  out.seed = slab.seed;
  out.push_row(0.0, acc);
  std::vector<double> row(n);
  for (std::size_t k = 0; k < slab.n_steps; ++k) {
    const auto uk = u.row(k);
    const auto xi = slab.xi(k);
    for (std::size_t j = 0; j < n; ++j) acc[j] += model.sigma(uk[j]) * scale * xi[j];
    stepper.propagate(acc);
    const double t = static_cast<double>(k + 1) * slab.dt;
    const auto b = slab.brownian_at(k + 1);
    for (std::size_t i = 0; i < slab.n_paths; ++i)
      prefactor[i] = std::max(prefactor[i], exp_martingale(capped.lambda0, b[i], t));
    for (std::size_t j = 0; j < n; ++j) row[j] = prefactor[slab.n_paths == 1 ? 0 : j] * acc[j];
    if (!all_finite(row)) throw BlowUpError("stochastic convolution became non-finite", k + 1);
    out.push_row(t, row);
  }
  return out;
}

/// A u at the time step closest to t.
inline GridFunction stochastic_convolution(const ModelSpec& model, const SolutionField& u, const NoiseSlab& slab,
                                           double t) {
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  const auto field = stochastic_convolution(model, u, slab);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::llround(t / slab.dt)), slab.n_steps);
  const auto r = field.row(k);
  return {slab.grid, std::vector<double>(r.begin(), r.end())};
}

/// Picard iterates v_0 = u0, v_{n+1} = A v_n + P_t u0, all on the slab's time grid.
inline std::vector<SolutionField> picard_solve(const ModelSpec& model, const NoiseSlab& slab, int n_iter) {
  if (n_iter < 2) throw DomainError("picard_solve needs n_iter >= 2");
  model.validate();
  const auto heat = heat_flow(model, slab);
  std::vector<SolutionField> iterates;
  iterates.reserve(static_cast<std::size_t>(n_iter) + 1);
  SolutionField v0;
  v0.grid = slab.grid;
  v0.seed = slab.seed;
  const auto init = model.initial(slab.grid).values;
  for (std::size_t k = 0; k <= slab.n_steps; ++k) v0.push_row(static_cast<double>(k) * slab.dt, init);
  iterates.push_back(std::move(v0));
  for (int it = 0; it < n_iter; ++it) {
    auto next = stochastic_convolution(model, iterates.back(), slab);
    for (std::size_t i = 0; i < next.values.size(); ++i) next.values[i] += heat.values[i];
    iterates.push_back(std::move(next));
  }
  return iterates;
}

/// Ensemble sums of |u(x, t)|^p on a common (time, grid) layout.
struct FieldMoments {
  int p = 2;
  std::vector<double> times;
  std::size_t n_points = 0;
  std::vector<double> sum_abs_p;
  std::size_t count = 0;

  void add(const SolutionField& f) {
    if (count == 0 && sum_abs_p.empty()) {
      times = f.times;
      n_points = f.grid.n_points;
      sum_abs_p.assign(f.values.size(), 0.0);
    }
    if (f.values.size() != sum_abs_p.size()) throw ConfigError("ensemble members have different layouts");
    for (std::size_t i = 0; i < f.values.size(); ++i) sum_abs_p[i] += std::pow(std::abs(f.values[i]), p);
    ++count;
  }

  void merge(FieldMoments&& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = std::move(o);
      return;
    }
    if (o.sum_abs_p.size() != sum_abs_p.size()) throw ConfigError("ensemble members have different layouts");
    for (std::size_t i = 0; i < sum_abs_p.size(); ++i) sum_abs_p[i] += o.sum_abs_p[i];
    count += o.count;
  }
};

/// {sup_t sup_x e^{-beta t} E|u|^p}^{1/p} with E replaced by the ensemble mean.
inline double weighted_norm(const FieldMoments& m, double beta) {
  if (m.count == 0) throw DomainError("weighted norm of an empty ensemble");
  if (m.p < 2 || m.p % 2 != 0) throw DomainError("weighted norm needs even p >= 2");
  if (!(beta > 0.0)) throw DomainError("weighted norm needs beta > 0");
  double best = 0.0;
  for (std::size_t k = 0; k < m.times.size(); ++k) {
    const double w = std::exp(-beta * m.times[k]) / static_cast<double>(m.count);
    for (std::size_t j = 0; j < m.n_points; ++j) best = std::max(best, w * m.sum_abs_p[k * m.n_points + j]);
  }
  return std::pow(best, 1.0 / m.p);
}

inline double weighted_norm(std::span<const SolutionField> ensemble, int p, double beta) {
  if (ensemble.empty()) throw DomainError("weighted norm of an empty ensemble");
  FieldMoments m;
  m.p = p;
  for (const auto& f : ensemble) m.add(f);
  return weighted_norm(m, beta);
}

/// Pointwise difference a - b of two fields with the same layout.
inline SolutionField field_difference(const SolutionField& a, const SolutionField& b) {
  if (a.values.size() != b.values.size() || !(a.grid == b.grid)) throw ConfigError("field layouts differ");
  SolutionField d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
  return d;
}

/// Constants of the moment bound for the stochastic convolution.
struct ContractionConstants {
  int p = 2;
  /// Defaults to 2 sqrt(p).
  std::optional<double> z_p;
  /// Horizon majorizing exp(lambda0^2 t (p-1)); set to the experiment horizon.
  double t0 = 0.0;
};

inline BoundParams contraction_bound_params(const ModelSpec& model, const ContractionConstants& cc) {
  BoundParams bp;
  bp.p = cc.p;
  bp.z_p = cc.z_p;
  bp.t0 = cc.t0;
  bp.lip_sigma = model.sigma.lip;
  if (const auto* m = std::get_if<noise::CappedMartingale>(&model.noise)) bp.lambda0 = m->lambda0;
  return bp;
}

/// Q_p Lip sqrt(Upsilon(2 beta / p)): the contraction factor of A in the weighted norm.
inline double contraction_factor(const ModelSpec& model, const ContractionConstants& cc, double beta) {
  const auto bp = contraction_bound_params(model, cc);
  return moment_constant(bp) * model.sigma.lip *
         std::sqrt(upsilon(LevyExponent::alpha_stable(model.alpha), 2.0 * beta / cc.p));
}

struct ContractionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.10;

  double ratio() const { return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()); }
  bool holds() const { return lhs <= rhs * (1.0 + tolerance); }
};

/// One ensemble member of a contraction check: two predictable fields on the
/// same noise.
struct ContractionMember {
  const SolutionField* u;
  const SolutionField* v;
  const NoiseSlab* noise;
};

/// lhs = ||A u - A v||_{p,beta}, rhs = Q_p Lip ||u - v||_{p,beta} sqrt(Upsilon(2 beta/p)).
inline ContractionReport contraction_check(const ModelSpec& model, const ContractionConstants& cc, double beta,
                                           std::span<const ContractionMember> ensemble, double tolerance = 0.10) {
  if (ensemble.empty()) throw DomainError("contraction check needs a non-empty ensemble");
  FieldMoments lhs_m, diff_m;
  lhs_m.p = diff_m.p = cc.p;
  for (const auto& m : ensemble) {
    if (!(m.u->grid == m.noise->grid) || !(m.v->grid == m.noise->grid))
      throw ConfigError("contraction check: grid mismatch between fields and noise");
    const auto au = stochastic_convolution(model, *m.u, *m.noise);
    const auto av = stochastic_convolution(model, *m.v, *m.noise);
    lhs_m.add(field_difference(au, av));
    diff_m.add(field_difference(*m.u, *m.v));
  }
  ContractionReport rep;
  rep.tolerance = tolerance;
  rep.lhs = weighted_norm(lhs_m, beta);
  rep.rhs = contraction_factor(model, cc, beta) * weighted_norm(diff_m, beta);
  return rep;
}

/// Resolvent bound: lhs = Int_0^{t_max} e^{-beta s} p(2s, 0) ds (the on-diagonal
/// L2 mass of the kernel, Laplace-weighted), rhs = Upsilon(beta).
struct ResolventBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs * (1.0 + 1e-3); }
};

inline ResolventBoundReport resolvent_bound_check(const LevyExponent& exp, double beta, double t_max) {
  if (!(beta > 0.0)) throw DomainError("resolvent bound needs beta > 0");
  if (!(t_max > 0.0)) throw DomainError("resolvent bound needs t_max > 0");
  if (exp.kind() == ExponentKind::tabulated) throw DomainError("resolvent bound needs a stable exponent");
  const double alpha = exp.alpha();
  auto f = [&](double s) { return s <= 0.0 ? 0.0 : std::exp(-beta * s) * diagonal_density(alpha, 2.0 * s); };
  const double knee = std::min(t_max, 1.0 / beta);
  ResolventBoundReport rep;
  rep.lhs = quad::integrate_singular(f, 0.0, knee) + (t_max > knee ? quad::integrate(f, knee, t_max, 1e-12) : 0.0);
  rep.rhs = upsilon(exp, beta);
  return rep;
}

/// Laplace route to Upsilon: Int_0^inf e^{-beta s} p(2s, 0) ds with the
/// on-diagonal value obtained by Fourier inversion of the kernel.
inline double upsilon_laplace_route(double alpha, double beta) {
  if (!(beta > 0.0)) throw DomainError("upsilon needs beta > 0");
  const double p1 = fourier_density(alpha, 1.0, 0.0);  // p(1, 0)
  auto f = [&](double s) { return s <= 0.0 ? 0.0 : std::exp(-beta * s) * p1 * std::pow(2.0 * s, -1.0 / alpha); };
  const double knee = 1.0 / beta;
  return quad::integrate_singular(f, 0.0, knee) + quad::integrate_to_infinity(f, knee);
}

}  // namespace shelab
