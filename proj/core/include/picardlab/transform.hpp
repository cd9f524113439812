#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <vector>

#include "picardlab/field.hpp"

namespace picardlab {

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

/// Allocator handing out FFTW-aligned storage, so every buffer shares the
/// alignment the plans were made with.
template <typename T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <typename U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) { return static_cast<T*>(fftw_aligned_alloc(n * sizeof(T))); }
  void deallocate(T* p, std::size_t) noexcept { fftw_aligned_free(p); }
  template <typename U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using PhysicalBuffer = std::vector<cplx, FftwAllocator<cplx>>;

/// Frequency <-> physical transform for fields of one grid, using `length`
/// bins per axis. Grid node k on an axis lands in bin (k - points/2) mod length,
/// so bins carry true frequencies and a pointwise product of physical arrays
/// is a circular convolution of frequency samples. No wrap-around occurs as
/// long as the sum set of the factors' supports spans fewer than `length`
/// bins per axis and the part that is gathered lies on the grid.
class SpectralTransform {
 public:
  SpectralTransform(const GridSpec& grid, std::int64_t length);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const GridSpec& grid() const { return grid_; }
  std::int64_t length() const { return length_; }
  std::size_t size() const { return size_; }

  PhysicalBuffer make_buffer() const { return PhysicalBuffer(size_); }

  /// out = sum_bins f(bin) e^{+2 pi i bin x / length}; only `support` is scattered.
  void to_physical(std::span<const cplx> grid_values, const std::optional<IndexBox>& support,
                   PhysicalBuffer& out) const;
  /// Forward transform of `phys` (overwritten), gathered onto grid nodes in
  /// `box` and multiplied by `factor`; other entries of `out` are zeroed.
  void to_grid(PhysicalBuffer& phys, const IndexBox& box, cplx factor, std::vector<cplx>& out) const;

  /// Forward transform in place without gathering (bins in FFT order).
  void forward_in_place(PhysicalBuffer& buf) const;
  void backward_in_place(PhysicalBuffer& buf) const;

  /// FFT bin holding grid node index k on one axis.
  std::int64_t bin(std::int64_t k) const;

 private:
  std::size_t bin_flat(const MultiIndex& k) const;

  GridSpec grid_;
  std::int64_t length_;
  std::size_t size_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Smallest power of two >= n.
std::int64_t next_pow2(std::int64_t n);

}  // namespace picardlab
