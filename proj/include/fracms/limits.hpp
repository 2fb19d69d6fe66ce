#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracms/fields.hpp"
#include "fracms/geometry.hpp"
#include "fracms/mass.hpp"

namespace fracms {

/// alpha(1) int f^2 - 2 alpha(f) int f + alpha(f^2) |Omega| with alpha = alpha_2,
/// masses from the analytic route unless supplied.
double F0_main(const Field& f, const Region& omega, Dim d, std::optional<double> alpha_f = std::nullopt,
               std::optional<double> alpha_f2 = std::nullopt);

/// sum_k binom(p,k) (-1)^k alpha_p(f^k) int f^{p-k}; p must be even.
double F0_even_p(const Field& f, const Region& omega, int p, Dim d);

/// The same alternating sum without the parity check, for exhibiting its
/// failure at odd p.
double binomial_alternating_sum(const Field& f, const Region& omega, int p, Dim d);

/// 1/2 int_Omega int_S |f(x) - u_inf(theta)|^2 by tensor quadrature.
double interaction_energy(const Field& f, const Region& omega, Dim d, double rel_tol = 1e-9);

/// 1/2 ((d omega_d - alpha_1(E)) |E cap Omega| + alpha_1(E) |Omega \ E|), the
/// limit of (s/2) Per_s(E; Omega). Falls back to the half-measure identity
/// when alpha_1(E) does not exist.
double perimeter_limit(const Region& E, const Region& omega, Dim d);

/// alpha_2 of y -> int_Omega |f(x) - f(y)|^2 dx.
double critical_alpha(const Field& f, const Region& omega, Dim d, const QuadratureSpec& spec);

/// True when |E cap Omega| = |E^c cap Omega| to relative tolerance 1e-7.
bool half_measure(const Region& E, const Region& omega);

struct LimitReport {
  std::optional<double> F0_binomial;
  std::optional<double> interaction_energy;
  std::optional<double> perimeter_limit;
  std::optional<double> critical_alpha;
  std::vector<std::pair<std::string, double>> consistency_deltas;
  std::vector<std::string> notes;
};

LimitReport limit_report(const Field& f, const Region& omega, Dim d, const QuadratureSpec& spec);

/// int_Omega f^k with quadrature split at the field's discontinuities.
EstimateWithError integrate_power(const Field& f, const Region& omega, int k);

}  // namespace fracms
