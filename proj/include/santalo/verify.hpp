#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "santalo/check_report.hpp"
#include "santalo/density.hpp"
#include "santalo/grid_function.hpp"

namespace santalo {

// Default tolerances by pipeline depth.
inline constexpr double kTolClosedForm = 1e-6;
inline constexpr double kTolQuadrature = 1e-4;
inline constexpr double kTolSolver = 5e-3;

enum class IsVariant { plain, symmetric, unconditional };

/// n log c <= log(int e^{-f} int e^{-f*}); margins move by n log(c'/c)
/// exactly when c changes. Inadmissible f gives not_applicable.
CheckReport check_is(const GridFunction& f, double c, IsVariant variant = IsVariant::plain,
                     const std::string& label = "f");

/// H(eta1|g) + H(eta2|g) + W2^2(nu1, nu2)/2 <= I(eta1|g)/2 + I(eta2|g)/2 + n log(2 pi / c)
/// with nu_i the moment measures. Needs the essential-continuity flags.
CheckReport check_mainresult(const LogConcaveDensity& eta1, const LogConcaveDensity& eta2,
                             double c, const std::string& label = "pair");

/// delta_n(eta) >= W2^2(nu, lambda_{C_n})/2 - (n/2) log(pi e / 2) for
/// unconditional, essentially continuous eta.
CheckReport check_mainresult2(const LogConcaveDensity& eta, const std::string& label = "eta");

/// Closed-form pipeline of the two-atom sequence at index k: entropies,
/// T = 1, W2^2 = 2(k-1) and the deficit balance 2 log(1 + 1/k).
CheckReport check_fm_sequence(int k);

/// N(X1) N(X2) T(nu1, nu2)^2 >= (n c / 2 pi)^2. Not applicable when a
/// potential takes the value +inf.
CheckReport check_epi(const LogConcaveDensity& eta1, const LogConcaveDensity& eta2, double c,
                      const std::string& label = "pair");
/// Diagonal case: N(X) int |grad V|^2 d eta >= n c / (2 pi).
CheckReport check_epi(const LogConcaveDensity& eta, double c, const std::string& label = "eta");

/// H(eta1|Leb) + H(eta2|Leb) <= -n log(e^2 c) + T(nu1, nu2) for finite
/// potentials; with +inf regions the virial terms T(nu_i, eta_i) enter
/// explicitly and -n log c replaces -n log(e^2 c).
CheckReport check_entropy_transport(const LogConcaveDensity& eta1,
                                    const LogConcaveDensity& eta2, double c,
                                    const std::string& label = "pair");

/// Vol(B_1^n) Vol(B_inf^n) = 4^n/n!, the simplex constant
/// (n+1)^{n+1}/(n!)^2 and, for n <= 2, int e^{-|x|_1} dx = n! Vol(B_1^n).
CheckReport check_polytope_constants(int n);

struct SuiteOptions {
  double c = 0.0;          // 0 keeps each battery's presets
  double tol_scale = 1.0;
  int max_dim = 3;
  std::uint64_t seed = 0;
};

/// duality, transport, sequences, inequalities or all. Reports are sorted
/// by check_id. Throws UsageError for other names.
std::vector<CheckReport> run_suite(const std::string& name, const SuiteOptions& opt = {});

/// check_id, lhs, rhs, margin, tol, status, est_error; 12 significant digits.
void write_reports_csv(std::ostream& out, const std::vector<CheckReport>& reports);

}  // namespace santalo
