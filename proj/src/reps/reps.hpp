#pragma once

#include "bergman/bergman.hpp"
#include "common/check.hpp"
#include "common/weight.hpp"
#include "potential/potential.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sq::reps {

/// Irreducible label (lambda, parity) with parity +1 or -1.
struct IrrepLabel {
  Weight weight;
  int parity = 1;

  friend bool operator==(const IrrepLabel&, const IrrepLabel&) = default;
};

IrrepLabel tensor(const IrrepLabel& a, const IrrepLabel& b);
IrrepLabel pi_switch(const IrrepLabel& a);

struct GroupPoint {
  std::vector<double> torus;  // read mod Z^n
  std::vector<double> flat;
};

/// exp(2 pi i lambda_1 . r_torus + i lambda_2 . r_flat).
std::complex<double> character_eval(const Weight& lambda, const GroupPoint& g);

/// Product grid of weights. Each torus axis lists its integers, each flat axis
/// its sample values; an axis with no values makes the box empty.
struct WeightBox {
  std::vector<std::vector<std::int64_t>> torus_axes;
  std::vector<std::vector<double>> flat_axes;

  /// Weights in lexicographic order, first axis slowest.
  std::vector<Weight> enumerate() const;
};

struct OccurrenceEntry {
  IrrepLabel label;
  bergman::Occurrence verdict = bergman::Occurrence::Inconclusive;
  /// Oracle data for parity +; empty points for parity -.
  bergman::WeightClassification data;
};

struct OccurrenceReport {
  /// For each weight in box order: the + entry then the - entry.
  std::vector<OccurrenceEntry> entries;
  /// Indices into entries with an Inconclusive verdict.
  std::vector<std::size_t> inconclusive;
  /// Indices into entries where the oracles contradicted each other.
  std::vector<std::size_t> discrepancies;
};

/// Classifies every weight of the box in parallel; parity - never occurs.
OccurrenceReport occurrences(const potential::ConvexPotential& f, const WeightBox& box,
                             const bergman::ClassifyOptions& options = {}, int threads = 1);

struct ModelLabel {
  IrrepLabel label;
  bool confirmed = false;
  int multiplicity = 0;
  /// Attainment point of -F'(x) = lambda for the weight.
  std::vector<double> attainment;
  std::string reason;
};

struct ModelReport {
  bool confirmed = true;
  std::vector<ModelLabel> labels;
  OccurrenceReport occurrence;
  /// Smallest (F'(a) - F'(b)).(a - b) / |a - b|^2 over distinct attainment
  /// points; positive means F' is injective on them.
  double monotonicity_margin = 0.0;
};

/// Checks that H^2 + Pi H^2 contains each (lambda, +) and (lambda, -) in the
/// box exactly once: the + label occurs in H^2 (and so - in Pi H^2), and its
/// attainment point is unique (two Newton starts agree, gradient monotone).
ModelReport gelfand_model_check(const potential::ConvexPotential& f, const WeightBox& box,
                                const bergman::ClassifyOptions& options = {}, int threads = 1);

/// Finite-dimensional super Hilbert space C^(p|q) with form B(v, w) = v^T B conj(w)
/// in a homogeneous basis (even vectors first).
struct SuperHilbertSample {
  int even_dim = 0;
  int odd_dim = 0;
  Eigen::MatrixXcd B;

  int dim() const { return even_dim + odd_dim; }
  /// Throws InvalidArgument unless B is block diagonal with a Hermitian
  /// positive definite even block and odd block i * (Hermitian positive definite).
  void validate() const;
  /// Parity (0 or 1) of basis vector a.
  int parity_of(int a) const { return a < even_dim ? 0 : 1; }
};

/// Random valid sample with the given dimensions.
SuperHilbertSample random_sample(int even_dim, int odd_dim, std::mt19937_64& rng);

/// 0 for even operators, 1 for odd ones; throws for non-homogeneous u.
int operator_parity(const Eigen::MatrixXcd& u, const SuperHilbertSample& v);

/// max |B(u e_a, e_b) + (-1)^(|u||a|) B(e_a, u e_b)| over basis vectors.
double u_B_membership(const Eigen::MatrixXcd& u, const SuperHilbertSample& v);

inline constexpr double kMembershipTolerance = 1e-12;

/// Real basis of the homogeneous part of u_B of the given parity, computed
/// as the nullspace of the defining relation over the real and imaginary
/// parts of the allowed blocks.
std::vector<Eigen::MatrixXcd> u_B_basis(const SuperHilbertSample& v, int parity);

/// Random element of u_B: Gaussian combination of the basis.
Eigen::MatrixXcd random_u_B_member(const SuperHilbertSample& v, int parity, std::mt19937_64& rng);

/// Largest dimension per parity accepted by odd_triviality_check.
inline constexpr int kMaxSampleDim = 8;

/// (i) B(Av, Av) = (-1)^|v| B(A^2 v, v) for random odd A in u_B and random
/// homogeneous v; (ii) odd A in u_B with A^2 = 0 found by Gauss-Newton from
/// random starts all have norm < 1e-10; (iii) the minimum of |A^2| over unit
/// odd A in u_B, a positive value showing A^2 = 0 forces A = 0.
CheckReport odd_triviality_check(const SuperHilbertSample& v, int trials, std::uint64_t seed);

/// Filtration drop, joint derivation kernel = span{1}, and the witness
/// D_1 xi_1 = 1, for 1 <= k <= 4.
CheckReport lambda_module_checks(int k);

}  // namespace sq::reps
