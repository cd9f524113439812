#include "picardlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "picardlab/error.hpp"

namespace picardlab {

namespace {

std::optional<IndexBox> scan_support(const GridSpec& grid, std::span<const cplx> values) {
  std::optional<IndexBox> box;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == cplx{}) continue;
    const MultiIndex k = grid.unflat(i);
    if (!box) {
      box = IndexBox{grid.dim, k, k};
      continue;
    }
    for (int a = 0; a < grid.dim; ++a) {
      box->lo[a] = std::min(box->lo[a], k[a]);
      box->hi[a] = std::max(box->hi[a], k[a]);
    }
  }
  return box;
}

template <typename Visit>
void visit_box(const SpectralField& f, const IndexBox& box, Visit&& visit) {
  const GridSpec& g = f.grid();
  for_each_index(box, [&](const MultiIndex& k) { visit(k, f.values()[g.flat(k)]); });
}

}  // namespace

std::string Norm::label() const {
  switch (kind) {
    case Kind::L2: return "L2";
    case Kind::FL1: return "FL1";
    case Kind::FLinf: return "FLinf";
    case Kind::Hs: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "H^%g", s);
      return buf;
    }
  }
  return "?";
}

SpectralField::SpectralField(const GridSpec& grid) : grid_(grid), values_(grid.node_count()) {}

SpectralField::SpectralField(const GridSpec& grid, std::vector<cplx> values, bool real_data)
    : grid_(grid), values_(std::move(values)), real_data_(real_data) {
  if (values_.size() != grid_.node_count()) throw ValidationError("field value count does not match grid");
  support_ = scan_support(grid_, values_);
}

SpectralField::SpectralField(const GridSpec& grid, std::vector<cplx> values, std::optional<IndexBox> support,
                             bool real_data)
    : grid_(grid), values_(std::move(values)), support_(support), real_data_(real_data) {
  if (values_.size() != grid_.node_count()) throw ValidationError("field value count does not match grid");
  if (!support_) {
    std::fill(values_.begin(), values_.end(), cplx{});
    return;
  }
  if (!inside_grid(grid_, *support_)) throw AliasingError("support box leaves the grid");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != cplx{} && !support_->contains(grid_.unflat(i))) values_[i] = cplx{};
}

double norm_on(const SpectralField& f, const Norm& which, const IndexBox& box) {
  const GridSpec& g = f.grid();
  const double w = g.cell_volume();
  double acc = 0.0;
  switch (which.kind) {
    case Norm::Kind::L2:
      visit_box(f, box, [&](const MultiIndex&, cplx v) { acc += std::norm(v); });
      return std::sqrt(acc * w);
    case Norm::Kind::FL1:
      visit_box(f, box, [&](const MultiIndex&, cplx v) { acc += std::abs(v); });
      return acc * w;
    case Norm::Kind::FLinf:
      visit_box(f, box, [&](const MultiIndex&, cplx v) { acc = std::max(acc, std::abs(v)); });
      return acc;
    case Norm::Kind::Hs:
      visit_box(f, box, [&](const MultiIndex& k, cplx v) {
        if (v == cplx{}) return;
        acc += std::pow(japanese_bracket(g.freq(k)), 2.0 * which.s) * std::norm(v);
      });
      return std::sqrt(acc * w);
  }
  return 0.0;
}

double norm(const SpectralField& f, const Norm& which) {
  if (!f.support()) return 0.0;
  return norm_on(f, which, *f.support());
}

SpectralField conj_reflect(const SpectralField& f) {
  const GridSpec& g = f.grid();
  std::vector<cplx> out(g.node_count());
  std::optional<IndexBox> box;
  if (f.support()) {
    IndexBox r = reflect(g, *f.support());
    bool empty = false;
    for (int a = 0; a < g.dim; ++a) {
      r.hi[a] = std::min(r.hi[a], g.points - 1);
      r.lo[a] = std::max<std::int64_t>(r.lo[a], 1);
      if (r.lo[a] > r.hi[a]) empty = true;
    }
    if (!empty) {
      box = r;
      for_each_index(r, [&](const MultiIndex& k) {
        MultiIndex src = k;
        for (int a = 0; a < g.dim; ++a) src[a] = g.points - k[a];
        out[g.flat(k)] = std::conj(f.at(src));
      });
    }
  }
  return SpectralField(g, std::move(out), box, f.real_data());
}

double hermitian_defect(const SpectralField& f) {
  const GridSpec& g = f.grid();
  double peak = 0.0;
  for (cplx v : f.values()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  IndexBox paired = full_box(g);
  for (int a = 0; a < g.dim; ++a) paired.lo[a] = 1;
  double worst = 0.0;
  for_each_index(paired, [&](const MultiIndex& k) {
    MultiIndex r = k;
    for (int a = 0; a < g.dim; ++a) r[a] = g.points - k[a];
    worst = std::max(worst, std::abs(f.at(k) - std::conj(f.at(r))));
  });
  return worst / peak;
}

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* op) {
  if (!(a.grid() == b.grid())) throw ValidationError(std::string(op) + ": fields live on different grids");
}

SpectralField add(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b, "add");
  std::vector<cplx> out(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return SpectralField(a.grid(), std::move(out), hull(a.support(), b.support()), a.real_data() && b.real_data());
}

SpectralField subtract(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b, "subtract");
  std::vector<cplx> out(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return SpectralField(a.grid(), std::move(out), hull(a.support(), b.support()), a.real_data() && b.real_data());
}

SpectralField scale(const SpectralField& f, cplx factor) {
  std::vector<cplx> out(f.values().begin(), f.values().end());
  for (cplx& v : out) v *= factor;
  const bool real = f.real_data() && factor.imag() == 0.0;
  return SpectralField(f.grid(), std::move(out), factor == cplx{} ? std::nullopt : f.support(), real);
}

SpectralField restrict_to(const SpectralField& f, const IndexBox& box) {
  std::vector<cplx> out(f.values().begin(), f.values().end());
  std::optional<IndexBox> clipped;
  if (f.support()) {
    IndexBox c = box;
    bool empty = false;
    for (int a = 0; a < box.dim; ++a) {
      c.lo[a] = std::max(box.lo[a], f.support()->lo[a]);
      c.hi[a] = std::min(box.hi[a], f.support()->hi[a]);
      if (c.lo[a] > c.hi[a]) empty = true;
    }
    if (!empty) clipped = c;
  }
  return SpectralField(f.grid(), std::move(out), clipped, false);
}

}  // namespace picardlab
