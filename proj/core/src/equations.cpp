#include "picardlab/equations.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

#include "picardlab/error.hpp"

namespace picardlab {

namespace {

std::atomic<bool> g_flip_modulation{false};

double radial(const Freq& xi) { return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]); }

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

namespace fault {
void set_flip_modulation_sign(bool on) { g_flip_modulation.store(on); }
bool flip_modulation_sign() { return g_flip_modulation.load(); }
}  // namespace fault

double DispersionSymbol::operator()(const Freq& xi) const {
  if (kind == Kind::RadialPower) {
    const double r = radial(xi);
    return alpha == 2.0 ? r * r : (alpha == 4.0 ? (r * r) * (r * r) : std::pow(r, alpha));
  }
  double acc = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) acc = acc * xi[0] + coefficients[k];
  return acc;
}

double DispersionSymbol::order() const {
  if (kind == Kind::RadialPower) return alpha;
  for (std::size_t k = coefficients.size(); k-- > 0;)
    if (coefficients[k] != 0.0) return static_cast<double>(k);
  return 0.0;
}

cplx NonlinearitySpec::mu(const Freq& xi) const {
  switch (multiplier) {
    case Multiplier::One: return 1.0;
    case Multiplier::Omega: {
      const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
      return r2 / (1.0 + r2);
    }
    case Multiplier::IXi: return cplx(0.0, xi[0]);
  }
  return 1.0;
}

EquationSpec power_nls(double alpha, int p, int m) {
  if (!(alpha > 0.0)) throw ValidationError("power_nls needs alpha > 0");
  if (p < 2) throw ValidationError("power_nls needs p >= 2");
  if (m < 0 || m > p) throw ValidationError("power_nls needs 0 <= m <= p");
  EquationSpec eq;
  eq.name = "power_nls(" + fmt_num(alpha) + "," + std::to_string(p) + "," + std::to_string(m) + ")";
  eq.dispersion.kind = DispersionSymbol::Kind::RadialPower;
  eq.dispersion.alpha = alpha;
  eq.nonlinearity.p = p;
  eq.nonlinearity.m = m;
  eq.nonlinearity.coefficient = cplx(0.0, -1.0);
  return eq;
}

EquationSpec nls_uu() {
  auto eq = power_nls(2.0, 2, 0);
  eq.name = "nls_uu";
  return eq;
}

EquationSpec nls_ubar2() {
  auto eq = power_nls(2.0, 2, 2);
  eq.name = "nls_ubar2";
  return eq;
}

EquationSpec nls_mod2() {
  auto eq = power_nls(2.0, 2, 1);
  eq.name = "nls_mod2";
  return eq;
}

EquationSpec nls4_mod2() {
  auto eq = power_nls(4.0, 2, 1);
  eq.name = "nls4_mod2";
  return eq;
}

EquationSpec boussinesq(int p) {
  if (p < 2) throw ValidationError("boussinesq needs p >= 2");
  EquationSpec eq;
  eq.name = "boussinesq(" + std::to_string(p) + ")";
  eq.dispersion.kind = DispersionSymbol::Kind::RadialPower;
  eq.dispersion.alpha = 2.0;
  eq.nonlinearity.p = p;
  eq.nonlinearity.m = 0;
  eq.nonlinearity.coefficient = cplx(0.0, -std::ldexp(1.0, -p));
  eq.nonlinearity.multiplier = Multiplier::Omega;
  eq.nonlinearity.real_reduction = true;
  eq.mass_term = true;
  return eq;
}

EquationSpec kawahara(double b) {
  if (b != -1.0 && b != 0.0 && b != 1.0) throw ValidationError("kawahara needs b in {-1, 0, 1}, got " + fmt_num(b));
  EquationSpec eq;
  eq.name = "kawahara(" + fmt_num(b) + ")";
  eq.dispersion.kind = DispersionSymbol::Kind::Polynomial1D;
  eq.dispersion.coefficients = {0.0, 0.0, 0.0, b, 0.0, 1.0};
  eq.nonlinearity.p = 2;
  eq.nonlinearity.m = 0;
  eq.nonlinearity.coefficient = -1.0;
  eq.nonlinearity.multiplier = Multiplier::IXi;
  eq.preserves_real = true;
  return eq;
}

EquationSpec catalog(const std::string& name, const EquationParams& params) {
  std::string base = name;
  std::vector<double> args;
  if (const auto open = name.find('('); open != std::string::npos) {
    if (name.back() != ')') throw ValidationError("malformed equation name '" + name + "'");
    base = name.substr(0, open);
    std::stringstream ss(name.substr(open + 1, name.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        args.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("bad argument '" + item + "' in equation name '" + name + "'");
      }
    }
  }
  auto arity = [&](std::size_t n) {
    if (!args.empty() && args.size() != n) throw ValidationError("equation '" + base + "' takes " + std::to_string(n) + " argument(s)");
  };
  auto as_int = [&](double v) {
    if (v != std::floor(v)) throw ValidationError("integer argument expected in '" + name + "'");
    return static_cast<int>(v);
  };
  if (base == "nls_uu" || base == "nls_ubar2" || base == "nls_mod2" || base == "nls4_mod2") {
    arity(0);
    if (base == "nls_uu") return nls_uu();
    if (base == "nls_ubar2") return nls_ubar2();
    if (base == "nls_mod2") return nls_mod2();
    return nls4_mod2();
  }
  if (base == "power_nls") {
    arity(3);
    if (args.empty()) return power_nls(params.alpha, params.p, params.m);
    return power_nls(args[0], as_int(args[1]), as_int(args[2]));
  }
  if (base == "boussinesq") {
    arity(1);
    return boussinesq(args.empty() ? params.p : as_int(args[0]));
  }
  if (base == "kawahara") {
    arity(1);
    return kawahara(args.empty() ? params.b : args[0]);
  }
  throw ValidationError("unknown equation '" + name + "'");
}

void validate_equation(const EquationSpec& eq, int dim) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("unsupported dimension");
  if (eq.dispersion.kind == DispersionSymbol::Kind::Polynomial1D && dim != 1)
    throw ValidationError(eq.name + ": polynomial symbols are one-dimensional");
  if (eq.nonlinearity.multiplier == Multiplier::IXi && dim != 1)
    throw ValidationError(eq.name + ": derivative multiplier is one-dimensional");
}

double modulation_signed(const EquationSpec& eq, std::span<const Freq> xi, std::span<const bool> conjugated) {
  Freq total{0, 0, 0};
  double m = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    for (int a = 0; a < kMaxDim; ++a) total[a] += xi[j][a];
    if (conjugated[j]) {
      const Freq neg{-xi[j][0], -xi[j][1], -xi[j][2]};
      m += eq.phi(neg);
    } else {
      m -= eq.phi(xi[j]);
    }
  }
  m += eq.phi(total);
  return g_flip_modulation.load(std::memory_order_relaxed) ? -m : m;
}

double modulation(const EquationSpec& eq, std::span<const Freq> xi) {
  if (static_cast<int>(xi.size()) != eq.p()) throw ValidationError("modulation needs exactly p frequencies");
  bool flags[16] = {};
  if (xi.size() > 16) throw ValidationError("modulation supports p <= 16");
  for (std::size_t j = 0; j < xi.size(); ++j) flags[j] = static_cast<int>(j) >= eq.p() - eq.m();
  return modulation_signed(eq, xi, std::span<const bool>(flags, xi.size()));
}

namespace {

struct Box {
  Freq lo{0, 0, 0};
  Freq hi{0, 0, 0};
  bool contains(const Freq& x, int dim, double tol) const {
    for (int a = 0; a < dim; ++a)
      if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
    return true;
  }
};

Box make_box(int dim, double center, double radius, double transverse) {
  Box b;
  b.lo[0] = center - radius;
  b.hi[0] = center + radius;
  for (int a = 1; a < dim; ++a) {
    b.lo[a] = -transverse;
    b.hi[a] = transverse;
  }
  return b;
}

}  // namespace

EnvelopeCheck modulation_envelope_check(const EquationSpec& eq, const DataFamily& family,
                                        const EnvelopeCheckOptions& opt) {
  const int d = opt.dim;
  validate(family, d);
  validate_equation(eq, d);
  const int p = eq.p();
  std::vector<Box> pieces;
  Box window;
  double predicted = 0.0;
  const double alpha = eq.dispersion.order();
  switch (family.kind) {
    case FamilyKind::CubePair:
      for (double c : {family.N, 2.0 * family.N, -family.N, -2.0 * family.N})
        pieces.push_back(make_box(d, c, family.A, family.A));
      window = make_box(d, 0.0, family.A, family.A);
      predicted = std::pow(family.N, alpha);
      break;
    case FamilyKind::Slab:
      for (double c : {family.N, -family.N}) pieces.push_back(make_box(d, c, family.A, 1.0));
      window = make_box(d, 0.0, family.A, 1.0);
      predicted = std::pow(family.N, alpha - opt.beta) * std::pow(family.A, opt.beta) + 1.0;
      break;
    case FamilyKind::KawaharaWindow:
      for (double c : {family.N, -family.N}) pieces.push_back(make_box(d, c, 1.0, 1.0));
      window = make_box(d, 0.0, 1.0, 1.0);
      predicted = std::pow(family.N, 4.0);
      break;
    case FamilyKind::SmoothPerturbation:
      throw ValidationError("modulation envelope needs a structured family");
  }
  const double tol = 1e-12 * (family.N + 2.0);
  std::vector<Freq> tuple(static_cast<std::size_t>(p));
  EnvelopeCheck out;
  out.predicted = predicted;

  auto close_tuple = [&](const Freq& target) {
    Freq last = target;
    for (int j = 0; j + 1 < p; ++j)
      for (int a = 0; a < d; ++a) last[a] -= tuple[j][a];
    for (const Box& b : pieces)
      if (b.contains(last, d, tol)) {
        tuple[p - 1] = last;
        out.measured_sup = std::max(out.measured_sup, std::abs(modulation(eq, tuple)));
        ++out.tuples;
        return true;
      }
    return false;
  };

  // Corners: every free factor at a piece corner, the sum at a window corner.
  std::vector<Freq> corners;
  std::vector<Freq> window_corners;
  const int ncorner = 1 << d;
  for (int c = 0; c < ncorner; ++c) {
    Freq w{0, 0, 0};
    for (int a = 0; a < d; ++a) w[a] = (c >> a) & 1 ? window.hi[a] : window.lo[a];
    window_corners.push_back(w);
    for (const Box& b : pieces) {
      Freq x{0, 0, 0};
      for (int a = 0; a < d; ++a) x[a] = (c >> a) & 1 ? b.hi[a] : b.lo[a];
      corners.push_back(x);
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(std::max(p - 1, 0)), 0);
  while (true) {
    for (int j = 0; j + 1 < p; ++j) tuple[j] = corners[idx[j]];
    for (const Freq& w : window_corners) close_tuple(w);
    int j = 0;
    while (j < p - 1 && ++idx[j] == corners.size()) idx[j++] = 0;
    if (j == p - 1) break;
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::size_t accepted = 0;
  const std::size_t max_attempts = 1000 * std::max<std::size_t>(opt.sample_count, 1);
  for (std::size_t attempt = 0; attempt < max_attempts && accepted < opt.sample_count; ++attempt) {
    for (int j = 0; j + 1 < p; ++j) {
      const Box& b = pieces[pick(rng)];
      for (int a = 0; a < d; ++a) tuple[j][a] = b.lo[a] + (b.hi[a] - b.lo[a]) * unit(rng);
    }
    Freq target{0, 0, 0};
    for (int a = 0; a < d; ++a) target[a] = window.lo[a] + (window.hi[a] - window.lo[a]) * unit(rng);
    if (close_tuple(target)) ++accepted;
  }
  if (out.tuples == 0) throw ValidationError("modulation envelope: empty constraint set");
  out.ratio = out.measured_sup / predicted;
  return out;
}

}  // namespace picardlab
