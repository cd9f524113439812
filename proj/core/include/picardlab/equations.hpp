#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "picardlab/data.hpp"
#include "picardlab/field.hpp"

namespace picardlab {

/// phi(xi): |xi|^alpha (RadialPower) or sum_k c_k xi^k on the line (Polynomial1D).
struct DispersionSymbol {
  enum class Kind { RadialPower, Polynomial1D };
  Kind kind = Kind::RadialPower;
  double alpha = 2.0;
  /// c_0, c_1, ... for Polynomial1D.
  std::vector<double> coefficients;

  double operator()(const Freq& xi) const;
  /// Growth exponent: alpha, or the polynomial degree.
  double order() const;
  bool operator==(const DispersionSymbol&) const = default;
};

enum class Multiplier { One, Omega, IXi };

/// The nonlinear term a * mu(xi) * F[u^{p-m} conj(u)^m], or with real_reduction
/// a * mu(xi) * F[(u + conj u)^p].
struct NonlinearitySpec {
  int p = 2;
  int m = 0;
  cplx coefficient{0.0, -1.0};
  Multiplier multiplier = Multiplier::One;
  bool real_reduction = false;

  cplx mu(const Freq& xi) const;
  bool operator==(const NonlinearitySpec&) const = default;
};

/// d/dt u-hat = i phi u-hat + nonlinear term (+ mass term (i/2)(v-hat - conj_reflect v-hat)
/// when mass_term is set). Equality ignores the name.
struct EquationSpec {
  std::string name;
  DispersionSymbol dispersion;
  NonlinearitySpec nonlinearity;
  bool mass_term = false;
  /// Real data stays real under the flow, so iterates are Hermitian.
  bool preserves_real = false;

  int p() const { return nonlinearity.p; }
  int m() const { return nonlinearity.m; }
  double phi(const Freq& xi) const { return dispersion(xi); }
  bool operator==(const EquationSpec& other) const {
    return dispersion == other.dispersion && nonlinearity == other.nonlinearity && mass_term == other.mass_term &&
           preserves_real == other.preserves_real;
  }
};

struct EquationParams {
  double alpha = 2.0;
  int p = 2;
  int m = 0;
  double b = 0.0;
};

EquationSpec nls_uu();
EquationSpec nls_ubar2();
EquationSpec nls_mod2();
EquationSpec nls4_mod2();
EquationSpec power_nls(double alpha, int p, int m);
EquationSpec boussinesq(int p);
EquationSpec kawahara(double b);

/// Looks up a catalog entry. Accepts bare names (parameters from `params`) or
/// the call forms "power_nls(2,3,1)", "boussinesq(3)", "kawahara(-1)".
EquationSpec catalog(const std::string& name, const EquationParams& params = {});

/// Throws ValidationError if the equation cannot live in dimension `dim`.
void validate_equation(const EquationSpec& eq, int dim);

/// M = phi(sum xi) - sum_{plain} phi(xi_j) + sum_{conj} phi(-xi_l); factors
/// 1..p-m are plain, p-m+1..p conjugated.
double modulation(const EquationSpec& eq, std::span<const Freq> xi);
/// Same with an explicit conjugation flag per factor.
double modulation_signed(const EquationSpec& eq, std::span<const Freq> xi, std::span<const bool> conjugated);

struct EnvelopeCheckOptions {
  int dim = 1;
  std::size_t sample_count = 2000;
  std::uint64_t seed = 1;
  /// Slab refinement exponent in N^{alpha-beta} A^beta + 1.
  double beta = 1.0;
};

struct EnvelopeCheck {
  double measured_sup = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  std::size_t tuples = 0;
};

/// sup |M| over tuples with every xi_j in the family's support and sum in the
/// output window, from seeded samples plus corner tuples, against N^alpha
/// (cube pair), N^{alpha-beta} A^beta + 1 (slab) or N^4 (Kawahara window).
EnvelopeCheck modulation_envelope_check(const EquationSpec& eq, const DataFamily& family,
                                        const EnvelopeCheckOptions& options);

namespace fault {
/// Mutation hook for the verification suite: negates every modulation value.
void set_flip_modulation_sign(bool on);
bool flip_modulation_sign();
}  // namespace fault

}  // namespace picardlab
