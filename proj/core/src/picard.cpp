#include "picardlab/picard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "picardlab/error.hpp"
#include "picardlab/transform.hpp"

namespace picardlab {

namespace {

enum class Mode { Plain, Conj, Real };

std::vector<Mode> factor_modes(const EquationSpec& eq) {
  std::vector<Mode> modes(static_cast<std::size_t>(eq.p()));
  for (int j = 0; j < eq.p(); ++j) {
    if (eq.nonlinearity.real_reduction)
      modes[j] = Mode::Real;
    else
      modes[j] = j < eq.p() - eq.m() ? Mode::Plain : Mode::Conj;
  }
  return modes;
}

IndexBox factor_box(const GridSpec& g, const IndexBox& box, Mode mode) {
  switch (mode) {
    case Mode::Plain: return box;
    case Mode::Conj: return reflect(g, box);
    case Mode::Real: return hull(box, reflect(g, box));
  }
  return box;
}

// Ordered p-tuples of active levels summing to n.
std::vector<std::vector<int>> compositions(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int slots) {
    if (slots == 0) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    for (int k = 1; k <= remaining - (slots - 1); ++k) {
      if (!level_active(k, p)) continue;
      cur.push_back(k);
      rec(remaining - k, slots - 1);
      cur.pop_back();
    }
  };
  rec(n, p);
  return out;
}

void check_paired(const GridSpec& g, const IndexBox& box, int level) {
  for (int a = 0; a < g.dim; ++a)
    if (box.lo[a] < 1 || box.hi[a] > g.points - 1)
      throw AliasingError("support of I_" + std::to_string(level) +
                          " leaves the grid; enlarge the extent or lower n_max");
}

struct NodeTables {
  std::vector<double> phi;
  std::vector<cplx> mu_coeff;
};

NodeTables node_tables(const EquationSpec& eq, const GridSpec& g) {
  NodeTables t;
  t.phi.resize(g.node_count());
  t.mu_coeff.resize(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Freq xi = g.freq(g.unflat(i));
    t.phi[i] = eq.phi(xi);
    t.mu_coeff[i] = eq.nonlinearity.coefficient * eq.nonlinearity.mu(xi);
  }
  return t;
}

cplx expi(double x) { return {std::cos(x), std::sin(x)}; }

// Multiplies `acc` (or initialises it when first) by the physical factor of
// `phys` in the given mode.
void multiply_factor(PhysicalBuffer& acc, const PhysicalBuffer& phys, Mode mode, bool first) {
  const std::size_t n = acc.size();
  for (std::size_t i = 0; i < n; ++i) {
    cplx f = phys[i];
    if (mode == Mode::Conj) f = std::conj(f);
    else if (mode == Mode::Real) f = 2.0 * f.real();
    acc[i] = first ? f : acc[i] * f;
  }
}

IterateSet run_series(const EquationSpec& eq, const SpectralField& data, double t, int n_max, int K,
                      bool keep_history) {
  const GridSpec& g = data.grid();
  const int p = eq.p();
  const auto boxes = level_supports(eq, data, n_max);
  const auto modes = factor_modes(eq);
  const auto tables = node_tables(eq, g);

  IterateSet set;
  set.equation = eq;
  set.data = data;
  set.t = t;
  set.n_max = n_max;
  set.time_nodes.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) set.time_nodes[k] = t * k / (K - 1);
  if (keep_history) set.history.resize(static_cast<std::size_t>(n_max));

  const std::size_t nodes = g.node_count();
  std::vector<std::vector<std::vector<int>>> comps(static_cast<std::size_t>(n_max + 1));
  for (int n = 2; n <= n_max; ++n)
    if (level_active(n, p) && boxes[n - 1]) comps[n] = compositions(n, p);

  SpectralTransform tr(g, g.points);
  const double conv_factor = std::pow(g.cell_volume(), p - 1) / static_cast<double>(tr.size());
  const double dt = K > 1 ? t / (K - 1) : 0.0;

  // Per level: F at the previous two nodes, the running even-node Simpson sum,
  // the current iterate values and their physical image.
  std::vector<std::vector<cplx>> f_prev2(n_max + 1), f_prev1(n_max + 1), s_even(n_max + 1), current(n_max + 1);
  std::vector<PhysicalBuffer> phys(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    if (!boxes[n - 1]) continue;
    f_prev2[n].assign(nodes, cplx{});
    f_prev1[n].assign(nodes, cplx{});
    s_even[n].assign(nodes, cplx{});
  }
  std::vector<cplx> phase(nodes), gathered, fk(nodes);
  PhysicalBuffer acc, term;

  for (int k = 0; k < K; ++k) {
    const double tk = set.time_nodes[k];
    for (std::size_t i = 0; i < nodes; ++i) phase[i] = expi(tk * tables.phi[i]);

    for (int n = 1; n <= n_max; ++n) {
      if (!boxes[n - 1]) continue;
      const IndexBox& box = *boxes[n - 1];
      std::vector<cplx>& cur = current[n];
      cur.assign(nodes, cplx{});
      if (n == 1) {
        for_each_index(box, [&](const MultiIndex& idx) {
          const std::size_t i = g.flat(idx);
          cur[i] = phase[i] * data[i];
        });
      } else {
        acc.assign(tr.size(), cplx{});
        for (const auto& comp : comps[n]) {
          term.resize(tr.size());
          for (int j = 0; j < p; ++j) multiply_factor(term, phys[comp[j]], modes[j], j == 0);
          for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
        }
        tr.to_grid(acc, box, conv_factor, gathered);
        for_each_index(box, [&](const MultiIndex& idx) {
          const std::size_t i = g.flat(idx);
          fk[i] = tables.mu_coeff[i] * std::conj(phase[i]) * gathered[i];
        });
        auto& f1 = f_prev1[n];
        auto& f2 = f_prev2[n];
        auto& se = s_even[n];
        for_each_index(box, [&](const MultiIndex& idx) {
          const std::size_t i = g.flat(idx);
          cplx j_val;
          if (k == 0) {
            j_val = 0.0;
          } else if (k == 1) {
            j_val = 0.5 * dt * (f1[i] + fk[i]);
          } else if (k % 2 == 0) {
            se[i] += dt / 3.0 * (f2[i] + 4.0 * f1[i] + fk[i]);
            j_val = se[i];
          } else {
            j_val = se[i] + dt / 12.0 * (-f2[i] + 8.0 * f1[i] + 5.0 * fk[i]);
          }
          cur[i] = phase[i] * j_val;
          f2[i] = f1[i];
          f1[i] = fk[i];
        });
      }
      tr.to_physical(cur, box, phys[n]);
      if (keep_history) set.history[n - 1].emplace_back(g, cur, box, false);
    }
  }

  set.final_iterates.reserve(static_cast<std::size_t>(n_max));
  const bool real = eq.preserves_real && data.real_data();
  for (int n = 1; n <= n_max; ++n) {
    if (!boxes[n - 1]) {
      set.final_iterates.emplace_back(g);
      continue;
    }
    std::vector<cplx> vals = std::move(current[n]);
    if (t == 0.0 && n > 1) std::fill(vals.begin(), vals.end(), cplx{});
    set.final_iterates.emplace_back(g, std::move(vals), boxes[n - 1], real);
  }
  return set;
}

}  // namespace

cplx time_factor(double t, double M) {
  const double x = t * M;
  if (x == 0.0) return t;
  const double half = std::sin(0.5 * x);
  return {std::sin(x) / M, -2.0 * half * half / M};
}

bool level_active(int n, int p) { return n >= 1 && (n - 1) % (p - 1) == 0; }

const SpectralField& IterateSet::iterate(int n) const {
  if (n < 1 || n > n_max) throw ValidationError("iterate level out of range");
  return final_iterates[static_cast<std::size_t>(n - 1)];
}

double IterateSet::norm(int n, const Norm& which) const { return picardlab::norm(iterate(n), which); }

SpectralField IterateSet::partial_sum(int upto) const {
  SpectralField sum = iterate(1);
  for (int n = 2; n <= std::min(upto, n_max); ++n)
    if (!iterate(n).is_zero()) sum = add(sum, iterate(n));
  return sum;
}

std::vector<std::optional<IndexBox>> level_supports(const EquationSpec& eq, const SpectralField& data, int n_max) {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  const GridSpec& g = data.grid();
  const int p = eq.p();
  const auto modes = factor_modes(eq);
  std::vector<std::optional<IndexBox>> boxes(static_cast<std::size_t>(n_max));
  boxes[0] = data.support();
  if (boxes[0]) check_paired(g, *boxes[0], 1);
  for (int n = 2; n <= n_max; ++n) {
    if (!level_active(n, p)) continue;
    std::optional<IndexBox> level;
    for (const auto& comp : compositions(n, p)) {
      std::optional<IndexBox> sum;
      bool empty = false;
      for (int j = 0; j < p && !empty; ++j) {
        const auto& b = boxes[comp[j] - 1];
        if (!b) {
          empty = true;
          break;
        }
        const IndexBox fb = factor_box(g, *b, modes[j]);
        sum = sum ? minkowski_sum(g, *sum, fb) : fb;
      }
      if (!empty) level = hull(level, sum);
    }
    if (level) check_paired(g, *level, n);
    boxes[n - 1] = level;
  }
  return boxes;
}

IterateSet iterate_series(const EquationSpec& eq, const SpectralField& data, double t, int n_max,
                          const QuadratureOptions& opt) {
  validate_equation(eq, data.grid().dim);
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("time must be finite and nonnegative");
  if (opt.nodes < 9 || opt.nodes % 2 == 0) throw ValidationError("quadrature needs an odd node count >= 9");
  if (!opt.check_tol) return run_series(eq, data, t, n_max, opt.nodes, opt.keep_history);

  const IterateSet coarse = run_series(eq, data, t, n_max, opt.nodes, false);
  IterateSet fine = run_series(eq, data, t, n_max, 2 * opt.nodes - 1, opt.keep_history);
  double series_scale = 0.0;
  for (int n = 1; n <= n_max; ++n) series_scale = std::max(series_scale, fine.norm(n, opt.check_norm));
  double worst = 0.0;
  for (int n = 2; n <= n_max; ++n) {
    const double ref =
        opt.check_scale == QuadratureOptions::CheckScale::Series ? series_scale : fine.norm(n, opt.check_norm);
    if (ref == 0.0) continue;
    const double diff = norm(subtract(coarse.iterate(n), fine.iterate(n)), opt.check_norm);
    worst = std::max(worst, diff / ref);
  }
  fine.quadrature_defect = worst;
  if (worst > *opt.check_tol)
  {
    char buf[128];
    std::snprintf(buf, sizeof buf, "time quadrature not converged: K vs 2K-1 relative change %.3g exceeds %.3g (K = %d)",
                  worst, *opt.check_tol, opt.nodes);
    throw ConvergenceError(buf);
  }
  return fine;
}

void gauss_legendre(int q, std::vector<double>& nodes, std::vector<double>& weights) {
  if (q < 1) throw ValidationError("Gauss-Legendre needs q >= 1");
  nodes.assign(static_cast<std::size_t>(q), 0.0);
  weights.assign(static_cast<std::size_t>(q), 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (q == 1) p0 = 1.0;
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[q - 1 - i] = x;
    weights[i] = weights[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

struct Branch {
  std::vector<cplx> value;
  std::vector<double> psi;
  std::vector<MultiIndex> nonzero;
};

Branch make_branch(const EquationSpec& eq, const SpectralField& data, bool conj) {
  const GridSpec& g = data.grid();
  Branch b;
  b.value.assign(g.node_count(), cplx{});
  b.psi.assign(g.node_count(), 0.0);
  if (!data.support()) return b;
  const IndexBox box = conj ? reflect(g, *data.support()) : *data.support();
  for_each_index(box, [&](const MultiIndex& k) {
    if (conj && !inside_grid(g, IndexBox{g.dim, k, k})) return;
    MultiIndex src = k;
    if (conj)
      for (int a = 0; a < g.dim; ++a) src[a] = g.points - k[a];
    const cplx v = conj ? std::conj(data.at(src)) : data.at(src);
    if (v == cplx{}) return;
    const std::size_t i = g.flat(k);
    b.value[i] = v;
    const Freq xi = g.freq(k);
    b.psi[i] = conj ? -eq.phi(Freq{-xi[0], -xi[1], -xi[2]}) : eq.phi(xi);
    b.nonzero.push_back(k);
  });
  return b;
}

// Branch assignments: one per slot; 2^p combinations under real reduction.
std::vector<std::vector<bool>> branch_patterns(const EquationSpec& eq) {
  const int p = eq.p();
  std::vector<std::vector<bool>> out;
  if (!eq.nonlinearity.real_reduction) {
    std::vector<bool> pat(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) pat[j] = j >= p - eq.m();
    out.push_back(pat);
    return out;
  }
  for (int mask = 0; mask < (1 << p); ++mask) {
    std::vector<bool> pat(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) pat[j] = (mask >> j) & 1;
    out.push_back(pat);
  }
  return out;
}

SpectralField closed_direct(const EquationSpec& eq, const SpectralField& data, double t, const IndexBox& window) {
  const GridSpec& g = data.grid();
  const int p = eq.p();
  const std::int64_t z = g.zero_index();
  const Branch plain = make_branch(eq, data, false);
  const Branch conj = make_branch(eq, data, true);
  std::vector<cplx> out(g.node_count());
  const double weight = std::pow(g.cell_volume(), p - 1);
  const auto patterns = branch_patterns(eq);

  for_each_index(window, [&](const MultiIndex& k_out) {
    const std::size_t o = g.flat(k_out);
    const Freq xi = g.freq(k_out);
    const double phi_out = eq.phi(xi);
    cplx total{};
    for (const auto& pat : patterns) {
      const Branch& b0 = pat[0] ? conj : plain;
      const Branch& blast = pat[p - 1] ? conj : plain;
      auto close = [&](const MultiIndex& partial, cplx prod, double psi_sum) {
        MultiIndex last = k_out;
        for (int a = 0; a < g.dim; ++a) {
          last[a] = k_out[a] - (partial[a] - static_cast<std::int64_t>(p - 1) * z);
          if (last[a] < 0 || last[a] >= g.points) return;
        }
        const std::size_t li = g.flat(last);
        const cplx v = blast.value[li];
        if (v == cplx{}) return;
        total += prod * v * time_factor(t, phi_out - psi_sum - blast.psi[li]);
      };
      if (p == 2) {
        for (const MultiIndex& k1 : b0.nonzero) {
          const std::size_t i1 = g.flat(k1);
          close(k1, b0.value[i1], b0.psi[i1]);
        }
      } else {
        const Branch& b1 = pat[1] ? conj : plain;
        for (const MultiIndex& k1 : b0.nonzero) {
          const std::size_t i1 = g.flat(k1);
          for (const MultiIndex& k2 : b1.nonzero) {
            const std::size_t i2 = g.flat(k2);
            MultiIndex partial = k1;
            for (int a = 0; a < g.dim; ++a) partial[a] = k1[a] + k2[a];
            close(partial, b0.value[i1] * b1.value[i2], b0.psi[i1] + b1.psi[i2]);
          }
        }
      }
    }
    out[o] = eq.nonlinearity.coefficient * eq.nonlinearity.mu(xi) * expi(t * phi_out) * total * weight;
  });
  return SpectralField(g, std::move(out), window, false);
}

// Smallest q whose Gauss-Legendre remainder bound for e^{-iMt'} on [0, t]
// falls below 1e-15 t.
int gl_nodes_for(double t, double max_modulation) {
  const double x = t * max_modulation;
  if (x == 0.0) return 2;
  for (int q = 2; q <= 400; ++q) {
    const double log_err = (2.0 * q) * std::log(x) + 4.0 * std::lgamma(q + 1.0) - std::log(2.0 * q + 1.0) -
                           3.0 * std::lgamma(2.0 * q + 1.0);
    if (log_err < std::log(1e-15)) return q;
  }
  throw BudgetError("Gauss-Legendre node count exceeds 400; t * |M| too large for the closed form");
}

SpectralField closed_gauss_legendre(const EquationSpec& eq, const SpectralField& data, double t,
                                    const IndexBox& window) {
  const GridSpec& g = data.grid();
  const int p = eq.p();
  if (!data.support()) return SpectralField(g, std::vector<cplx>(g.node_count()), window, false);
  const auto modes = factor_modes(eq);
  const IndexBox& supp = *data.support();

  double max_supp = 0.0, max_win = 0.0;
  for_each_index(supp, [&](const MultiIndex& k) { max_supp = std::max(max_supp, std::abs(eq.phi(g.freq(k)))); });
  for_each_index(window, [&](const MultiIndex& k) { max_win = std::max(max_win, std::abs(eq.phi(g.freq(k)))); });
  const int q = gl_nodes_for(t, max_win + p * max_supp);

  // Transform length: the full p-fold sum set together with the window must
  // not wrap.
  std::int64_t span = 0;
  {
    std::optional<IndexBox> sum;
    for (int j = 0; j < p; ++j) {
      const IndexBox fb = factor_box(g, supp, modes[j]);
      sum = sum ? minkowski_sum(g, *sum, fb) : fb;
    }
    const IndexBox all = hull(*sum, window);
    for (int a = 0; a < g.dim; ++a) span = std::max(span, all.extent(a));
  }
  SpectralTransform tr(g, next_pow2(std::max<std::int64_t>(g.points, span + 1)));
  const double conv_factor = std::pow(g.cell_volume(), p - 1) / static_cast<double>(tr.size());

  std::vector<double> x, w;
  gauss_legendre(q, x, w);
  std::vector<cplx> prop(g.node_count()), gathered, integral(g.node_count());
  PhysicalBuffer phys, acc;
  for (int i = 0; i < q; ++i) {
    const double tau = 0.5 * t * (x[i] + 1.0);
    for_each_index(supp, [&](const MultiIndex& k) {
      const std::size_t f = g.flat(k);
      prop[f] = expi(tau * eq.phi(g.freq(k))) * data[f];
    });
    tr.to_physical(prop, supp, phys);
    acc.resize(phys.size());
    for (int j = 0; j < p; ++j) multiply_factor(acc, phys, modes[j], j == 0);
    tr.to_grid(acc, window, conv_factor, gathered);
    for_each_index(window, [&](const MultiIndex& k) {
      const std::size_t f = g.flat(k);
      integral[f] += 0.5 * t * w[i] * expi(-tau * eq.phi(g.freq(k))) * gathered[f];
    });
  }
  std::vector<cplx> out(g.node_count());
  for_each_index(window, [&](const MultiIndex& k) {
    const std::size_t f = g.flat(k);
    const Freq xi = g.freq(k);
    out[f] = eq.nonlinearity.coefficient * eq.nonlinearity.mu(xi) * expi(t * eq.phi(xi)) * integral[f];
  });
  return SpectralField(g, std::move(out), window, false);
}

}  // namespace

double closed_form_tuple_count(const EquationSpec& eq, const SpectralField& data, const IndexBox& window) {
  double nz = 0.0;
  for (cplx v : data.values())
    if (v != cplx{}) nz += 1.0;
  const double branches = eq.nonlinearity.real_reduction ? std::ldexp(1.0, eq.p()) : 1.0;
  return static_cast<double>(window.size()) * std::pow(nz, eq.p() - 1) * branches;
}

SpectralField leading_iterate_closed(const EquationSpec& eq, const SpectralField& data, double t,
                                     const IndexBox& window, ClosedStrategy strategy) {
  validate_equation(eq, data.grid().dim);
  if (eq.p() < 2 || eq.p() > 3) throw ValidationError("closed-form leading iterate needs p in {2, 3}");
  if (!inside_grid(data.grid(), window)) throw ValidationError("output window leaves the grid");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("time must be finite and nonnegative");
  if (strategy == ClosedStrategy::Auto)
    strategy = closed_form_tuple_count(eq, data, window) <= 5e7 ? ClosedStrategy::Direct : ClosedStrategy::GaussLegendre;
  if (strategy == ClosedStrategy::Direct) return closed_direct(eq, data, t, window);
  return closed_gauss_legendre(eq, data, t, window);
}

SeriesSum series_sum(const IterateSet& set, const Norm& tail_norm, double max_ratio) {
  const int p = set.equation.p();
  if (set.n_max < p) throw ValidationError("series_sum needs n_max >= p");
  SeriesSum out{set.partial_sum(set.n_max)};
  int last = set.n_max;
  while (!level_active(last, p)) --last;
  out.last_level = last;
  const int prev = last - (p - 1);
  // Two active steps when available: odd and even levels can live on
  // different frequency sets, so one-step ratios of weighted norms mislead.
  const int base = last - 2 * (p - 1) >= 1 ? last - 2 * (p - 1) : prev;
  const double power = base == prev ? 1.0 : 0.5;
  double q = 0.0;
  for (const Norm& which : {Norm::fl1(), tail_norm}) {
    const double a = set.norm(last, which);
    const double b = set.norm(base, which);
    if (a == 0.0) continue;
    if (b == 0.0) {
      q = std::numeric_limits<double>::infinity();
      break;
    }
    q = std::max(q, std::pow(a / b, power));
  }
  out.ratio = q;
  if (q > max_ratio)
    throw ConvergenceError("outside convergence regime: level ratio " + std::to_string(q) + " from ||I_" +
                           std::to_string(last) + "|| / ||I_" + std::to_string(base) + "||");
  const double head = std::max(set.norm(last, tail_norm), prev >= 1 ? set.norm(prev, tail_norm) : 0.0);
  out.tail = head * q / (1.0 - q);
  return out;
}

}  // namespace picardlab
