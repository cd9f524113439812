#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "picardlab/picard.hpp"

namespace picardlab {

/// Final iterates as one JSON header line followed by the raw values inside
/// each level's support box. History is not stored.
void write_iterate_set(const IterateSet& set, const std::string& key, std::ostream& out);

/// Inverse of write_iterate_set. The equation and data are the caller's; the
/// grid and key in the header must match. Throws Error on malformed input.
IterateSet read_iterate_set(std::istream& in, const std::string& key, const EquationSpec& eq,
                            const SpectralField& data);

/// 64-bit FNV-1a, stable across runs and platforms.
std::uint64_t fnv1a(const std::string& text);

/// Directory of iterate sets addressed by key. Each key is guarded by an
/// exclusive flock on <hash>.lock while it is read or produced; files are
/// written to a temporary name and renamed into place.
class IterateCache {
 public:
  explicit IterateCache(std::string dir);

  const std::string& dir() const { return dir_; }

  /// Cached set for `key`, or the result of `compute` (then stored).
  IterateSet get_or_compute(const std::string& key, const EquationSpec& eq, const SpectralField& data,
                            const std::function<IterateSet()>& compute) const;

  std::optional<IterateSet> load(const std::string& key, const EquationSpec& eq, const SpectralField& data) const;
  void store(const std::string& key, const IterateSet& set) const;

 private:
  std::string path_for(const std::string& key, const char* suffix) const;
  std::string dir_;
};

}  // namespace picardlab
