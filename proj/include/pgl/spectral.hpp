#pragma once

#include <limits>
#include <span>

#include "pgl/field.hpp"

namespace pgl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Spectral-space operators. First derivatives annihilate the Nyquist index
// of the differentiated axis; the Laplacian keeps it.

/// Component c, direction j lands in output component c * dim + j.
Spectrum spectral_gradient(const Spectrum& s);
Spectrum spectral_divergence(const Spectrum& s);
Spectrum spectral_laplacian(const Spectrum& s);
/// Multiplies mode k by exp(-coefficient * |2 pi k / L|^2).
void apply_heat_factor(Spectrum& s, double coefficient);

/// 2/3 rule: zeroes every mode with |k_a| > N/3 on some axis.
void dealias(Spectrum& s);
bool in_dealias_band(const Torus& torus, const std::array<int, 3>& k);

Field gradient(const Field& f);
Field divergence(const Field& u);
Field laplacian(const Field& f);

/// Grid quadrature (h^d sum |f|^p)^(1/p); max norm for p = infinity.
/// Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const Field& f, double p);
double lp_norm(std::span<const double> magnitudes, double cell_volume, double p);

/// Integral of the pointwise dot product of two fields with equal shape.
double inner_product(const Field& a, const Field& b);

}  // namespace pgl
