#include "picardlab/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "picardlab/error.hpp"

namespace picardlab {

namespace {
// FFTW's planner and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void* fftw_aligned_alloc(std::size_t bytes) {
  void* p = fftw_malloc(std::max<std::size_t>(bytes, 16));
  if (!p) throw std::bad_alloc();
  return p;
}

void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

std::int64_t next_pow2(std::int64_t n) {
  std::int64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct SpectralTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectralTransform::SpectralTransform(const GridSpec& grid, std::int64_t length)
    : grid_(grid), length_(length), size_(1), plans_(std::make_unique<Plans>()) {
  if (length < grid.points) throw ValidationError("transform length shorter than the grid");
  for (int a = 0; a < grid.dim; ++a) size_ *= static_cast<std::size_t>(length);
  PhysicalBuffer scratch(size_);
  int n[kMaxDim];
  for (int a = 0; a < grid.dim; ++a) n[a] = static_cast<int>(length);
  auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft(grid.dim, n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft(grid.dim, n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) throw Error("FFTW planning failed");
}

SpectralTransform::~SpectralTransform() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

std::int64_t SpectralTransform::bin(std::int64_t k) const {
  std::int64_t b = (k - grid_.zero_index()) % length_;
  return b < 0 ? b + length_ : b;
}

std::size_t SpectralTransform::bin_flat(const MultiIndex& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < grid_.dim; ++a) idx = idx * static_cast<std::size_t>(length_) + static_cast<std::size_t>(bin(k[a]));
  return idx;
}

void SpectralTransform::to_physical(std::span<const cplx> grid_values, const std::optional<IndexBox>& support,
                                    PhysicalBuffer& out) const {
  out.assign(size_, cplx{});
  if (!support) return;
  for_each_index(*support, [&](const MultiIndex& k) { out[bin_flat(k)] = grid_values[grid_.flat(k)]; });
  backward_in_place(out);
}

void SpectralTransform::to_grid(PhysicalBuffer& phys, const IndexBox& box, cplx factor,
                                std::vector<cplx>& out) const {
  forward_in_place(phys);
  out.assign(grid_.node_count(), cplx{});
  for_each_index(box, [&](const MultiIndex& k) { out[grid_.flat(k)] = factor * phys[bin_flat(k)]; });
}

void SpectralTransform::forward_in_place(PhysicalBuffer& buf) const {
  if (buf.size() != size_) throw ValidationError("transform buffer has wrong size");
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plans_->forward, data, data);
}

void SpectralTransform::backward_in_place(PhysicalBuffer& buf) const {
  if (buf.size() != size_) throw ValidationError("transform buffer has wrong size");
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plans_->backward, data, data);
}

}  // namespace picardlab
