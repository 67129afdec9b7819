// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_MODES_HPP
#define KGP_MODES_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace kgp
{

//
// Mode algebra of the d'Alembert operator L = d_tt - d_xx on [0, 2pi] x [0, pi] with
// Dirichlet conditions in x and 2pi-periodicity in t. The basis sin(jx) e^{ikt} is
// diagonal for L with eigenvalue j^2 - k^2.
//

struct ModeIndex
{
  int j = 1;  // spatial index, j >= 1
  int k = 0;  // temporal index

  friend bool operator==(const ModeIndex &, const ModeIndex &) = default;
};

enum class ModeClass
{
  Plus,
  Minus,
  Kernel
};

std::string_view to_string(ModeClass c);

// Exact integer eigenvalue j^2 - k^2.
std::int64_t eigenvalue(ModeIndex m);

// True iff n = j^2 - k^2 for some j >= 1, k in Z.
bool is_eigenvalue(std::int64_t n);

// True iff -b is an eigenvalue of L. Only integer b can collide. search_bound must be at
// least ceil(b) + 1.
bool spectrum_membership(double b, std::int64_t search_bound);
bool spectrum_membership(double b);

// Throws SpectrumCollision if -b lies in the spectrum, InvalidArgument if b <= 0.
void require_admissible_b(double b);

// Partition class of a mode for mass parameter b. Throws SpectrumCollision when
// j^2 - k^2 = -b for the queried mode.
ModeClass classify(ModeIndex m, double b);

// Rectangular Galerkin cut: modes 1 <= j <= J, |k| <= K.
struct Truncation
{
  int J = 1;
  int K = 0;

  Truncation() = default;
  Truncation(int J_, int K_);

  int mode_count() const { return J * (2 * K + 1); }
  bool contains(ModeIndex m) const;
  // Componentwise order used for refinement schedules.
  bool covers(const Truncation &other) const { return J >= other.J && K >= other.K; }

  // Deterministic lexicographic enumeration in (j, k), k running over -K..K.
  std::vector<ModeIndex> modes() const;

  friend bool operator==(const Truncation &, const Truncation &) = default;
};

struct SpectralGapInfo
{
  double b = 1.0;
  double eta = 1.0;    // inf over all modes of |j^2 - k^2 + b|
  double kappa = 1.0;  // max(1/eta, 1), the L2 <= kappa * H embedding constant
  bool in_spectrum = false;
};

// Global spectral gap of L + b (not restricted to a truncation). The truncation argument
// only documents the caller's cut; eta is valid for every truncation.
SpectralGapInfo spectral_gap(double b);
SpectralGapInfo spectral_gap(double b, const Truncation &trunc);

// Warn-only smallness threshold for the coupling: min(eta, b) / 2.
double coupling_threshold(double b);
bool coupling_warning(double b, double eps);

}  // namespace kgp

#endif  // KGP_MODES_HPP
