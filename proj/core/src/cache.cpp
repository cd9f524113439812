#include "picardlab/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "picardlab/error.hpp"

namespace picardlab {

namespace {

constexpr const char* kFormat = "picardlab-iterates/1";

class FileLock {
 public:
  explicit FileLock(const std::string& path) {
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error("cannot open lock file " + path);
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error("cannot lock " + path);
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

nlohmann::json box_json(const IndexBox& b) {
  nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
  for (int a = 0; a < b.dim; ++a) {
    lo.push_back(b.lo[a]);
    hi.push_back(b.hi[a]);
  }
  return {{"lo", lo}, {"hi", hi}};
}

IndexBox box_from_json(const nlohmann::json& j, int dim) {
  IndexBox b;
  b.dim = dim;
  const auto& lo = j.at("lo");
  const auto& hi = j.at("hi");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim) throw Error("bad support box in cache");
  for (int a = 0; a < dim; ++a) {
    b.lo[a] = lo[a].get<std::int64_t>();
    b.hi[a] = hi[a].get<std::int64_t>();
  }
  return b;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_iterate_set(const IterateSet& set, const std::string& key, std::ostream& out) {
  const GridSpec& g = set.data.grid();
  nlohmann::json head;
  head["format"] = kFormat;
  head["key"] = key;
  head["grid"] = {{"dim", g.dim}, {"extent", g.extent}, {"points", g.points}};
  head["t"] = set.t;
  head["n_max"] = set.n_max;
  head["time_nodes"] = set.time_nodes;
  head["quadrature_defect"] = set.quadrature_defect ? nlohmann::json(*set.quadrature_defect) : nlohmann::json(nullptr);
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& f : set.final_iterates) {
    nlohmann::json lv;
    lv["real"] = f.real_data();
    lv["support"] = f.support() ? box_json(*f.support()) : nlohmann::json(nullptr);
    levels.push_back(lv);
  }
  head["levels"] = levels;
  out << head.dump() << '\n';
  for (const auto& f : set.final_iterates) {
    if (!f.support()) continue;
    for_each_index(*f.support(), [&](const MultiIndex& k) {
      const cplx v = f.at(k);
      const double pair[2] = {v.real(), v.imag()};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    });
  }
  if (!out) throw Error("failed writing iterate set");
}

IterateSet read_iterate_set(std::istream& in, const std::string& key, const EquationSpec& eq,
                            const SpectralField& data) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty iterate file");
  nlohmann::json head;
  try {
    head = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed iterate header: ") + e.what());
  }
  try {
    if (head.at("format") != kFormat) throw Error("unknown iterate format");
    if (head.at("key").get<std::string>() != key) throw Error("iterate key mismatch");
    const GridSpec& g = data.grid();
    const auto& gj = head.at("grid");
    if (gj.at("dim").get<int>() != g.dim || gj.at("points").get<std::int64_t>() != g.points ||
        gj.at("extent").get<double>() != g.extent)
      throw Error("iterate grid mismatch");

    IterateSet set;
    set.equation = eq;
    set.data = data;
    set.t = head.at("t").get<double>();
    set.n_max = head.at("n_max").get<int>();
    set.time_nodes = head.at("time_nodes").get<std::vector<double>>();
    if (!head.at("quadrature_defect").is_null()) set.quadrature_defect = head["quadrature_defect"].get<double>();
    for (const auto& lv : head.at("levels")) {
      std::vector<cplx> values(g.node_count());
      if (lv.at("support").is_null()) {
        set.final_iterates.emplace_back(g, std::move(values), std::nullopt, lv.at("real").get<bool>());
        continue;
      }
      const IndexBox box = box_from_json(lv["support"], g.dim);
      if (!inside_grid(g, box)) throw Error("cached support leaves the grid");
      for_each_index(box, [&](const MultiIndex& k) {
        double pair[2];
        in.read(reinterpret_cast<char*>(pair), sizeof pair);
        values[g.flat(k)] = cplx(pair[0], pair[1]);
      });
      if (!in) throw Error("truncated iterate file");
      set.final_iterates.emplace_back(g, std::move(values), box, lv.at("real").get<bool>());
    }
    if (static_cast<int>(set.final_iterates.size()) != set.n_max) throw Error("iterate level count mismatch");
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed iterate header: ") + e.what());
  }
}

IterateCache::IterateCache(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("cannot create cache directory " + dir_ + ": " + ec.message());
}

std::string IterateCache::path_for(const std::string& key, const char* suffix) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return (std::filesystem::path(dir_) / (std::string(name) + suffix)).string();
}

std::optional<IterateSet> IterateCache::load(const std::string& key, const EquationSpec& eq,
                                             const SpectralField& data) const {
  std::ifstream in(path_for(key, ".iter"), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return read_iterate_set(in, key, eq, data);
  } catch (const Error&) {
    // Hash collision or a damaged file: treat as a miss.
    return std::nullopt;
  }
}

void IterateCache::store(const std::string& key, const IterateSet& set) const {
  const std::string final_path = path_for(key, ".iter");
  const std::string tmp = final_path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp);
    write_iterate_set(set, key, out);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) throw Error("cannot move cache file into place: " + ec.message());
}

IterateSet IterateCache::get_or_compute(const std::string& key, const EquationSpec& eq, const SpectralField& data,
                                        const std::function<IterateSet()>& compute) const {
  FileLock lock(path_for(key, ".lock"));
  if (auto hit = load(key, eq, data)) return std::move(*hit);
  IterateSet set = compute();
  store(key, set);
  return set;
}

}  // namespace picardlab
