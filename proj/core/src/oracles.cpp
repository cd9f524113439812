#include "picardlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "picardlab/error.hpp"
#include "picardlab/transform.hpp"

namespace picardlab {

namespace {

constexpr cplx kI{0.0, 1.0};

// int_0^t e^{-i t' M} dt', evaluated without the engine's helper.
cplx exact_time_integral(double t, double M) {
  const double x = t * M;
  if (std::abs(x) < 1e-4) {
    // Taylor: t (1 - ix/2 - x^2/6 + i x^3/24 + x^4/120)
    return t * cplx(1.0 - x * x / 6.0 + x * x * x * x / 120.0, -x / 2.0 + x * x * x / 24.0);
  }
  return cplx(std::sin(x), std::cos(x) - 1.0) / M;
}

MultiIndex reflected(const GridSpec& g, const MultiIndex& k) {
  MultiIndex r = k;
  for (int a = 0; a < g.dim; ++a) r[a] = g.points - k[a];
  return r;
}

bool on_grid(const GridSpec& g, const MultiIndex& k) {
  for (int a = 0; a < g.dim; ++a)
    if (k[a] < 0 || k[a] >= g.points) return false;
  return true;
}

IndexBox paired_box(const GridSpec& g) {
  IndexBox box = full_box(g);
  for (int a = 0; a < g.dim; ++a) box.lo[a] = 1;
  return box;
}

double d_norm(const SpectralField& f) { return norm(f, Norm::l2()) + norm(f, Norm::fl1()); }

// log ||phi - phi_N|| for the Gaussian profile cut to [-N, N]^d, summed in log
// space: beyond N of about 40 every term is below the smallest double.
double log_gaussian_tail_norm(const GridSpec& g, double amplitude, double N, const Norm& which) {
  if (!(amplitude > 0.0)) return -std::numeric_limits<double>::infinity();
  const auto inside = nodes_in_closed_box(g, Freq{-N, -N, -N}, Freq{N, N, N});
  const double log_amp = std::log(amplitude) - 0.5 * g.dim * std::log(2.0 * std::numbers::pi);
  const double log_cell = std::log(g.cell_volume());
  IndexBox paired = full_box(g);
  for (int a = 0; a < g.dim; ++a) paired.lo[a] = 1;
  std::vector<double> terms;
  for_each_index(paired, [&](const MultiIndex& k) {
    if (inside && inside->contains(k)) return;
    const Freq xi = g.freq(k);
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double log_abs = log_amp - 0.5 * r2;
    switch (which.kind) {
      case Norm::Kind::L2: terms.push_back(2.0 * log_abs + log_cell); break;
      case Norm::Kind::Hs: terms.push_back(2.0 * which.s * std::log(japanese_bracket(xi)) + 2.0 * log_abs + log_cell); break;
      case Norm::Kind::FL1: terms.push_back(log_abs + log_cell); break;
      case Norm::Kind::FLinf: terms.push_back(log_abs); break;
    }
  });
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(terms.begin(), terms.end());
  if (which.kind == Norm::Kind::FLinf) return top;
  double acc = 0.0;
  for (double x : terms) acc += std::exp(x - top);
  const double log_sum = top + std::log(acc);
  return which.kind == Norm::Kind::FL1 ? log_sum : 0.5 * log_sum;
}

bool is_kawahara(const EquationSpec& eq) {
  return eq.dispersion.kind == DispersionSymbol::Kind::Polynomial1D && eq.nonlinearity.multiplier == Multiplier::IXi;
}

}  // namespace

SpectralField brute_leading_iterate(const EquationSpec& eq, const SpectralField& data, double t,
                                    const IndexBox& window) {
  const GridSpec& g = data.grid();
  const int p = eq.p();
  const double nodes = static_cast<double>(g.node_count());
  if (std::pow(nodes, p) > std::ldexp(1.0, 24)) throw BudgetError("brute-force tuple budget 2^24 exceeded");
  if (!inside_grid(g, window)) throw AliasingError("output window leaves the grid");

  // Factor tables over every node: plain u-hat(xi), phase phi(xi); conjugate
  // conj(u-hat(-xi)), phase -phi(-xi).
  const std::size_t n = g.node_count();
  std::vector<cplx> val_plain(n), val_conj(n);
  std::vector<double> ph_plain(n), ph_conj(n);
  for (std::size_t i = 0; i < n; ++i) {
    const MultiIndex k = g.unflat(i);
    val_plain[i] = data[i];
    ph_plain[i] = eq.phi(g.freq(k));
    const MultiIndex r = reflected(g, k);
    if (on_grid(g, r)) {
      val_conj[i] = std::conj(data.at(r));
      ph_conj[i] = -eq.phi(g.freq(r));
    }
  }

  std::vector<std::vector<bool>> patterns;
  if (eq.nonlinearity.real_reduction) {
    for (int mask = 0; mask < (1 << p); ++mask) {
      std::vector<bool> pat;
      for (int j = 0; j < p; ++j) pat.push_back(((mask >> j) & 1) != 0);
      patterns.push_back(pat);
    }
  } else {
    std::vector<bool> pat;
    for (int j = 0; j < p; ++j) pat.push_back(j >= p - eq.m());
    patterns.push_back(pat);
  }

  const double h = g.spacing;
  const double weight = std::pow(h, g.dim * (p - 1));
  const std::int64_t half = g.points / 2;
  std::vector<cplx> out(n);

  for_each_index(window, [&](const MultiIndex& ko) {
    const Freq xo = g.freq(ko);
    const double phi_out = eq.phi(xo);
    cplx acc{};
    for (const auto& pat : patterns) {
      // Odometer over the first p - 1 factors; the last is fixed by the sum.
      std::function<void(int, MultiIndex, cplx, double)> walk = [&](int j, MultiIndex offset, cplx prod, double phase) {
        if (j == p - 1) {
          MultiIndex kl = ko;
          for (int a = 0; a < g.dim; ++a) kl[a] = ko[a] - offset[a];
          if (!on_grid(g, kl)) return;
          const std::size_t il = g.flat(kl);
          const cplx v = pat[j] ? val_conj[il] : val_plain[il];
          if (v == cplx{}) return;
          const double M = phi_out - phase - (pat[j] ? ph_conj[il] : ph_plain[il]);
          acc += prod * v * exact_time_integral(t, M);
          return;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx v = pat[j] ? val_conj[i] : val_plain[i];
          if (v == cplx{}) continue;
          const MultiIndex k = g.unflat(i);
          MultiIndex next = offset;
          for (int a = 0; a < g.dim; ++a) next[a] += k[a] - half;
          walk(j + 1, next, prod * v, phase + (pat[j] ? ph_conj[i] : ph_plain[i]));
        }
      };
      walk(0, MultiIndex{0, 0, 0}, cplx{1.0, 0.0}, 0.0);
    }
    const cplx prop = std::exp(kI * (t * phi_out));
    out[g.flat(ko)] = eq.nonlinearity.coefficient * eq.nonlinearity.mu(xo) * prop * acc * weight;
  });
  return SpectralField(g, std::move(out), window, false);
}

SolverResult step_solver(const EquationSpec& eq, const SpectralField& data, double T, const SolverOptions& opt) {
  if (opt.steps < 1) throw ValidationError("solver needs at least one step");
  if (!(T >= 0.0)) throw ValidationError("solver end time must be nonnegative");
  const GridSpec& g = data.grid();
  const int p = eq.p();
  const int m = eq.m();
  const bool mass = opt.include_mass.value_or(eq.mass_term);
  const bool real_flow = eq.preserves_real && data.real_data();
  const std::size_t n = g.node_count();

  const std::int64_t length = next_pow2((static_cast<std::int64_t>(p + 1) * g.points + 1) / 2);
  const SpectralTransform fft(g, length);
  const IndexBox paired = paired_box(g);
  const double factor = std::pow(g.cell_volume(), p - 1) / std::pow(static_cast<double>(length), g.dim);

  std::vector<double> phase(n);
  std::vector<cplx> mult(n);
  std::vector<std::size_t> mirror(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const MultiIndex k = g.unflat(i);
    const Freq xi = g.freq(k);
    phase[i] = eq.phi(xi);
    mult[i] = eq.nonlinearity.coefficient * eq.nonlinearity.mu(xi);
    const MultiIndex r = reflected(g, k);
    if (on_grid(g, r)) mirror[i] = g.flat(r);
  }

  PhysicalBuffer phys = fft.make_buffer();
  std::vector<cplx> gathered;
  auto nonlinear = [&](const std::vector<cplx>& u) {
    fft.to_physical(u, paired, phys);
    for (cplx& z : phys) {
      cplx prod{1.0, 0.0};
      if (eq.nonlinearity.real_reduction) {
        const cplx r = 2.0 * z.real();
        for (int j = 0; j < p; ++j) prod *= r;
      } else {
        for (int j = 0; j < p - m; ++j) prod *= z;
        for (int j = 0; j < m; ++j) prod *= std::conj(z);
      }
      z = prod;
    }
    fft.to_grid(phys, paired, factor, gathered);
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = mult[i] * gathered[i];
      if (mass && mirror[i] < n) out[i] += 0.5 * kI * (u[i] - std::conj(u[mirror[i]]));
    }
    return out;
  };

  // w = e^{-i t phi} u-hat.
  auto rhs = [&](double time, const std::vector<cplx>& w) {
    std::vector<cplx> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(kI * (time * phase[i])) * w[i];
    std::vector<cplx> f = nonlinear(u);
    for (std::size_t i = 0; i < n; ++i) f[i] *= std::exp(-kI * (time * phase[i]));
    return f;
  };

  SolverResult res;
  res.steps = opt.steps;
  res.dt = T / opt.steps;
  std::vector<cplx> w(data.values().begin(), data.values().end());
  const double limit = opt.blowup_factor * 2.0 * d_norm(data);
  res.sup_tracked = norm(data, opt.tracked);

  const double dt = res.dt;
  std::vector<cplx> tmp(n);
  for (int step = 0; step < opt.steps; ++step) {
    const double t0 = step * dt;
    const auto k1 = rhs(t0, w);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * dt * k1[i];
    const auto k2 = rhs(t0 + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * dt * k2[i];
    const auto k3 = rhs(t0 + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] + dt * k3[i];
    const auto k4 = rhs(t0 + dt, tmp);
    for (std::size_t i = 0; i < n; ++i) w[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const double t1 = (step + 1 == opt.steps) ? T : t0 + dt;
    std::vector<cplx> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(kI * (t1 * phase[i])) * w[i];
    SpectralField field(g, std::move(u), real_flow);
    const double size = d_norm(field);
    if (!std::isfinite(size) || (limit > 0.0 && size > limit))
      throw ConvergenceError("solver norm blow-up at t = " + std::to_string(t1) + " (step-size instability)");
    res.sup_tracked = std::max(res.sup_tracked, norm(field, opt.tracked));
    if (real_flow) res.max_hermitian_defect = std::max(res.max_hermitian_defect, hermitian_defect(field));
    if (step + 1 == opt.steps) res.solution = std::move(field);
  }
  if (opt.steps == 0 || T == 0.0) res.solution = data;
  return res;
}

GeneralDataReport general_data_experiment(const EquationSpec& eq, const SpectralField& u0, double N, double t,
                                          const GeneralDataOptions& opt) {
  const GridSpec& g = u0.grid();
  const SpectralField phi_full = gaussian_profile(g, opt.perturbation_amplitude);
  const SpectralField phi_n = gaussian_profile(g, opt.perturbation_amplitude, N);
  const SpectralField v0 = add(u0, phi_n);

  GeneralDataReport rep;
  rep.log_init_diff = log_gaussian_tail_norm(g, opt.perturbation_amplitude, N, opt.init_norm);
  rep.init_diff = std::exp(rep.log_init_diff);
  rep.phi_D = d_norm(phi_n);

  if (is_kawahara(eq)) {
    QuadratureOptions q = opt.quadrature;
    q.keep_history = true;
    const IterateSet su = iterate_series(eq, u0, t, opt.n_max, q);
    const IterateSet sv = iterate_series(eq, v0, t, opt.n_max, q);
    const std::size_t nodes = su.time_nodes.size();
    for (std::size_t k = 0; k < nodes; ++k) {
      SpectralField pu(g), pv(g);
      for (int lvl = 1; lvl <= opt.n_max; ++lvl) {
        pu = add(pu, su.history[lvl - 1][k]);
        pv = add(pv, sv.history[lvl - 1][k]);
      }
      rep.sup_u = std::max(rep.sup_u, norm(pu, opt.B));
      rep.sup_v = std::max(rep.sup_v, norm(pv, opt.B));
    }
    const double base = N * t * norm(u0, Norm::fl1());
    for (int lvl = 1; lvl <= std::min(4, opt.n_max); ++lvl) {
      const double diff = d_norm(subtract(su.iterate(lvl), sv.iterate(lvl)));
      const double scale_n = std::pow(base, lvl - 1) * rep.phi_D;
      const double ratio = scale_n > 0.0 ? diff / scale_n : 0.0;
      rep.difference_ratios.push_back(ratio);
      if (opt.c1 > 0.0 && ratio > std::pow(opt.c1, lvl - 1)) rep.difference_ok = false;
    }
  } else {
    SolverOptions so = opt.solver;
    so.tracked = opt.B;
    rep.sup_u = step_solver(eq, u0, t, so).sup_tracked;
    rep.sup_v = step_solver(eq, v0, t, so).sup_tracked;
  }
  rep.lower_bound = 0.5 * rep.sup_u - opt.c_star * rep.phi_D;
  rep.holds = rep.sup_v >= rep.lower_bound;
  return rep;
}

}  // namespace picardlab
