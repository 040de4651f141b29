#pragma once

#include "bergman/bergman.hpp"
#include "potential/potential.hpp"
#include "reps/reps.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sq::run {

struct PotentialSpec {
  std::string builtin;  // "F1", "F2" or empty for an expression
  std::vector<double> mu;
  double epsilon = 0.0;
  std::string expression;
};

struct CertifySpec {
  double lo = -3.0;
  double hi = 3.0;
  int grid_density = 9;
  double tau = 1e-8;
};

struct KahlerSpec {
  int samples = 50;
  double lo = -1.5;
  double hi = 1.5;
  std::vector<std::pair<double, double>> odd_coefficients;
  double closedness_tol = 1e-7;
  double moment_tol = 1e-8;
  double dolbeault_tol = 1e-7;
};

struct OutputSpec {
  std::string dir = "out";
  std::string format = "json";  // json, csv or both
};

/// Parsed and validated run configuration with defaults filled in.
struct RunConfig {
  int n = 1, m = 0, k = 0;
  PotentialSpec potential;
  CertifySpec certify;
  reps::WeightBox weights;
  bergman::ClassifyOptions classify;
  KahlerSpec kahler;
  OutputSpec output;
  std::uint64_t seed = 1;
};

/// Parses the JSON configuration document. Unknown keys, wrong types and
/// violated invariants throw Error(ErrorKind::Config).
RunConfig parse_config(const std::string& text);

/// Canonical JSON text of the config (sorted keys, defaults explicit).
std::string canonical_json(const RunConfig& c);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a64(const std::string& bytes);

/// Builds the potential and attaches a certificate: closed form for builtins,
/// grid certification over the certify box otherwise. Returns the refutation
/// when grid certification fails.
struct BuiltPotential {
  potential::ConvexPotential f;
  std::optional<potential::Refutation> refutation;
};
BuiltPotential build_potential(const RunConfig& c);

}  // namespace sq::run
