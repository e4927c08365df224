#pragma once

#include <vector>

#include "pgl/field.hpp"

namespace pgl {

/// Smooth dyadic partition in the variable x = log2 |xi|:
/// psi_j(xi) = cos^2(pi/2 (x - j)) for |x - j| < 1, so sum_j psi_j = 1.
/// `corrupted` swaps cos^2 for cos, which breaks the partition of unity and
/// exists only as a negative control.
enum class PartitionProfile { raised_cosine, corrupted };

double partition_weight(double xi, int j, PartitionProfile profile = PartitionProfile::raised_cosine);

/// Block j carries frequencies |2 pi k / L| in the open annulus (2^(j-1), 2^(j+1)).
struct DyadicDecomposition {
  int j_min = 0;
  int j_max = 0;
  std::vector<Field> blocks;
  /// Mean of each component (the zero mode, excluded from every block).
  std::vector<double> zero_mode;
  PartitionProfile profile = PartitionProfile::raised_cosine;

  const Field& block(int j) const { return blocks.at(static_cast<std::size_t>(j - j_min)); }
  Field reconstruct() const;
};

/// Block range covering every nonzero resolved frequency of the torus.
std::pair<int, int> dyadic_range(const Torus& torus);

DyadicDecomposition decompose(const Field& f, PartitionProfile profile = PartitionProfile::raised_cosine);

/// Homogeneous (sum_j (2^(js) ||Delta_j f||_{L_p})^r)^(1/r), max over j for
/// r = infinity. Requires -2 < s < 2, p >= 1, r >= 1 (either may be infinite).
double besov_norm(const Field& f, double s, double p, double r,
                  PartitionProfile profile = PartitionProfile::raised_cosine);
/// Same norm from an existing decomposition.
double besov_norm(const DyadicDecomposition& d, double s, double p, double r);

/// ||z||_inf / (||grad z||_4^(1/2) ||grad z||_{4/3}^(1/2)) for a zero-mean scalar on a 2D torus.
double gagliardo_nirenberg_2d(const Field& z);
/// ||grad u||_inf / (||grad^2 u||_{10/3}^(2/3) ||grad^2 u||_{5/2}^(1/3)) for a 3D vector field.
double gagliardo_nirenberg_3d(const Field& u);

}  // namespace pgl
