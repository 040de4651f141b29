#include "reps/reps.hpp"

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "grassmann/element.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sq::reps {

using bergman::Occurrence;
using potential::ConvexPotential;

namespace {

void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

void same_shape(const Weight& a, const Weight& b) {
  if (a.n() != b.n() || a.m() != b.m()) throw Error(ErrorKind::Dimension, "weights have different dimensions");
}

}  // namespace

IrrepLabel tensor(const IrrepLabel& a, const IrrepLabel& b) {
  same_shape(a.weight, b.weight);
  IrrepLabel out{a.weight, a.parity * b.parity};
  for (int j = 0; j < a.weight.n(); ++j) out.weight.torus[j] += b.weight.torus[j];
  for (int j = 0; j < a.weight.m(); ++j) out.weight.flat[j] += b.weight.flat[j];
  return out;
}

IrrepLabel pi_switch(const IrrepLabel& a) { return IrrepLabel{a.weight, -a.parity}; }

std::complex<double> character_eval(const Weight& lambda, const GroupPoint& g) {
  if (static_cast<int>(g.torus.size()) != lambda.n() || static_cast<int>(g.flat.size()) != lambda.m())
    throw Error(ErrorKind::Dimension, "group point does not match the weight");
  // Reduce the torus pairing mod 1 before scaling so the phase stays accurate.
  double turns = 0.0;
  for (int j = 0; j < lambda.n(); ++j) {
    const double t = static_cast<double>(lambda.torus[j]) * g.torus[j];
    turns += t - std::round(t);
  }
  turns -= std::round(turns);
  double phase = 2.0 * std::numbers::pi * turns;
  for (int j = 0; j < lambda.m(); ++j) phase += lambda.flat[j] * g.flat[j];
  return std::polar(1.0, phase);
}

std::vector<Weight> WeightBox::enumerate() const {
  const std::size_t n = torus_axes.size(), m = flat_axes.size();
  std::vector<std::size_t> sizes;
  for (const auto& a : torus_axes) sizes.push_back(a.size());
  for (const auto& a : flat_axes) sizes.push_back(a.size());
  std::vector<Weight> out;
  if (sizes.empty()) return out;
  for (std::size_t s : sizes)
    if (s == 0) return out;
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    Weight w;
    for (std::size_t a = 0; a < n; ++a) w.torus.push_back(torus_axes[a][idx[a]]);
    for (std::size_t a = 0; a < m; ++a) w.flat.push_back(flat_axes[a][idx[n + a]]);
    out.push_back(std::move(w));
    std::size_t a = sizes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < sizes[a]) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
  }
}

OccurrenceReport occurrences(const ConvexPotential& f, const WeightBox& box, const bergman::ClassifyOptions& options,
                             int threads) {
  if (!f.certified()) throw Error(ErrorKind::Uncertified, "potential has no strict convexity certificate");
  if (static_cast<int>(box.torus_axes.size()) != f.n() || static_cast<int>(box.flat_axes.size()) != f.m())
    throw Error(ErrorKind::Dimension, "weight box does not match the potential dimensions");
  const std::vector<Weight> weights = box.enumerate();
  std::vector<bergman::WeightClassification> results(weights.size());
  parallel_for(weights.size(), threads,
               [&](std::size_t i) { results[i] = bergman::classify_weight(weights[i], f, options); });

  OccurrenceReport report;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    OccurrenceEntry plus{IrrepLabel{weights[i], 1}, results[i].verdict, std::move(results[i])};
    OccurrenceEntry minus{IrrepLabel{weights[i], -1}, Occurrence::DoesNotOccur, {}};
    minus.data.weight = weights[i];
    minus.data.verdict = Occurrence::DoesNotOccur;
    minus.data.reason = "odd parity labels do not occur";
    if (plus.verdict == Occurrence::Inconclusive) report.inconclusive.push_back(report.entries.size());
    if (plus.data.discrepancy) report.discrepancies.push_back(report.entries.size());
    report.entries.push_back(std::move(plus));
    report.entries.push_back(std::move(minus));
  }
  return report;
}

ModelReport gelfand_model_check(const ConvexPotential& f, const WeightBox& box,
                                const bergman::ClassifyOptions& options, int threads) {
  ModelReport out;
  out.occurrence = occurrences(f, box, options, threads);
  const int d = f.dim();
  std::vector<std::vector<double>> points;
  for (std::size_t i = 0; i < out.occurrence.entries.size(); i += 2) {
    const auto& entry = out.occurrence.entries[i];
    ModelLabel plus{entry.label, false, 0, {}, ""};
    if (entry.verdict != Occurrence::Occurs) {
      plus.reason = std::string("label + is ") + bergman::to_string(entry.verdict);
    } else {
      plus.attainment = entry.data.points.front().legendre.point;
      // A second Newton run from a distant start must land on the same point.
      bergman::LegendreParams second = options.legendre;
      second.start.resize(d);
      for (int a = 0; a < d; ++a) second.start[a] = (a % 2 ? -3.0 : 3.0) + plus.attainment[a];
      const auto lambda = entry.label.weight.as_vector();
      const bergman::ConvergenceVerdict again = bergman::legendre_attainment(lambda, f, second);
      double gap = std::numeric_limits<double>::infinity(), scale = 1.0;
      if (again.kind == bergman::VerdictKind::Converges) {
        gap = 0.0;
        for (int a = 0; a < d; ++a) {
          gap = std::max(gap, std::abs(again.point[a] - plus.attainment[a]));
          scale = std::max(scale, std::abs(plus.attainment[a]));
        }
      }
      if (gap <= 1e-8 * scale) {
        plus.confirmed = true;
        plus.multiplicity = 1;
        plus.reason = "occurs once in H^2";
        points.push_back(plus.attainment);
      } else {
        plus.reason = "attainment point not reproduced from a second start";
      }
    }
    ModelLabel minus{pi_switch(entry.label), plus.confirmed, plus.multiplicity, plus.attainment,
                     plus.confirmed ? "occurs once in Pi H^2" : plus.reason};
    out.labels.push_back(std::move(plus));
    out.labels.push_back(std::move(minus));
  }

  std::vector<Eigen::VectorXd> grads;
  for (const auto& p : points) grads.push_back(potential::eval_jet2(f, p).gradient);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      Eigen::Map<const Eigen::VectorXd> pa(points[a].data(), d), pb(points[b].data(), d);
      const double dist2 = (pa - pb).squaredNorm();
      if (dist2 == 0.0) {
        margin = 0.0;  // two labels sharing one attainment point
        continue;
      }
      margin = std::min(margin, (grads[a] - grads[b]).dot(pa - pb) / dist2);
    }
  out.monotonicity_margin = points.size() < 2 ? 0.0 : margin;
  for (const auto& l : out.labels) out.confirmed = out.confirmed && l.confirmed;
  if (points.size() >= 2 && !(margin > 0.0)) out.confirmed = false;
  return out;
}

// ---------------------------------------------------------------------------
// Finite-dimensional super unitarity

void SuperHilbertSample::validate() const {
  if (even_dim < 0 || odd_dim < 0) invalid("negative dimension");
  const int n = dim();
  if (B.rows() != n || B.cols() != n) invalid("form matrix has the wrong size");
  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  if (n == 0) return;
  if (even_dim && odd_dim) {
    if (B.topRightCorner(even_dim, odd_dim).cwiseAbs().maxCoeff() > tol ||
        B.bottomLeftCorner(odd_dim, even_dim).cwiseAbs().maxCoeff() > tol)
      invalid("form mixes parities");
  }
  auto hermitian_pd = [&](const Eigen::MatrixXcd& h, const char* what) {
    if (h.size() == 0) return;
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol) invalid(std::string(what) + " is not Hermitian");
    Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (h + h.adjoint()));
    if (llt.info() != Eigen::Success) invalid(std::string(what) + " is not positive definite");
  };
  hermitian_pd(B.topLeftCorner(even_dim, even_dim), "even block");
  const std::complex<double> minus_i(0.0, -1.0);
  hermitian_pd(minus_i * B.bottomRightCorner(odd_dim, odd_dim), "odd block divided by i");
}

namespace {

Eigen::MatrixXcd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = {g(rng), g(rng)};
  return m;
}

std::complex<double> form(const Eigen::MatrixXcd& b, const Eigen::VectorXcd& v, const Eigen::VectorXcd& w) {
  return v.transpose() * b * w.conjugate();
}

}  // namespace

SuperHilbertSample random_sample(int even_dim, int odd_dim, std::mt19937_64& rng) {
  if (even_dim < 0 || odd_dim < 0) invalid("negative dimension");
  SuperHilbertSample v{even_dim, odd_dim, Eigen::MatrixXcd::Zero(even_dim + odd_dim, even_dim + odd_dim)};
  Eigen::MatrixXcd x = gaussian_matrix(even_dim, even_dim, rng);
  Eigen::MatrixXcd y = gaussian_matrix(odd_dim, odd_dim, rng);
  v.B.topLeftCorner(even_dim, even_dim) =
      x * x.adjoint() + Eigen::MatrixXcd::Identity(even_dim, even_dim) * static_cast<double>(even_dim);
  v.B.bottomRightCorner(odd_dim, odd_dim) =
      std::complex<double>(0, 1) *
      (y * y.adjoint() + Eigen::MatrixXcd::Identity(odd_dim, odd_dim) * static_cast<double>(odd_dim));
  return v;
}

int operator_parity(const Eigen::MatrixXcd& u, const SuperHilbertSample& v) {
  const int n = v.dim();
  if (u.rows() != n || u.cols() != n) throw Error(ErrorKind::Dimension, "operator does not match the space");
  double diag = 0.0, off = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double& slot = v.parity_of(r) == v.parity_of(c) ? diag : off;
      slot = std::max(slot, std::abs(u(r, c)));
    }
  if (diag != 0.0 && off != 0.0) invalid("operator is not homogeneous");
  return off != 0.0 ? 1 : 0;
}

double u_B_membership(const Eigen::MatrixXcd& u, const SuperHilbertSample& v) {
  const int p = operator_parity(u, v);
  if (v.B.rows() != v.dim() || v.B.cols() != v.dim()) invalid("form matrix has the wrong size");
  // B(u e_a, e_b) = (u^T B)_ab and B(e_a, u e_b) = (B conj(u))_ab.
  const Eigen::MatrixXcd first = u.transpose() * v.B;
  const Eigen::MatrixXcd second = v.B * u.conjugate();
  double worst = 0.0;
  for (int a = 0; a < v.dim(); ++a) {
    const double s = (p * v.parity_of(a)) % 2 ? -1.0 : 1.0;
    for (int b = 0; b < v.dim(); ++b) worst = std::max(worst, std::abs(first(a, b) + s * second(a, b)));
  }
  return worst;
}

std::vector<Eigen::MatrixXcd> u_B_basis(const SuperHilbertSample& v, int parity) {
  if (parity != 0 && parity != 1) invalid("parity must be 0 or 1");
  const int n = v.dim();
  if (v.B.rows() != n || v.B.cols() != n) invalid("form matrix has the wrong size");
  std::vector<std::pair<int, int>> entries;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((v.parity_of(i) + v.parity_of(j)) % 2 == parity) entries.emplace_back(i, j);
  const int unknowns = 2 * static_cast<int>(entries.size());
  if (unknowns == 0) return {};

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n * n, unknowns);
  const std::complex<double> units[2] = {{1.0, 0.0}, {0.0, 1.0}};
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto [i, j] = entries[e];
    for (int part = 0; part < 2; ++part) {
      const std::complex<double> unit = units[part];
      const int col = 2 * static_cast<int>(e) + part;
      // u = unit * E_ij contributes unit * B_ib at (a = j, b) and
      // s_a * B_ai * conj(unit) at (a, b = j).
      for (int b = 0; b < n; ++b) {
        const std::complex<double> c = unit * v.B(i, b);
        const int row = 2 * (j * n + b);
        m(row, col) += c.real();
        m(row + 1, col) += c.imag();
      }
      for (int a = 0; a < n; ++a) {
        const double s = (parity * v.parity_of(a)) % 2 ? -1.0 : 1.0;
        const std::complex<double> c = s * v.B(a, i) * std::conj(unit);
        const int row = 2 * (a * n + j);
        m(row, col) += c.real();
        m(row + 1, col) += c.imag();
      }
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv[0] : 0.0;
  std::vector<Eigen::MatrixXcd> basis;
  for (int c = 0; c < unknowns; ++c) {
    const double sigma = c < sv.size() ? sv[c] : 0.0;
    if (sigma > 1e-10 * std::max(1.0, top)) continue;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t e = 0; e < entries.size(); ++e)
      u(entries[e].first, entries[e].second) = {svd.matrixV()(2 * e, c), svd.matrixV()(2 * e + 1, c)};
    basis.push_back(std::move(u));
  }
  return basis;
}

Eigen::MatrixXcd random_u_B_member(const SuperHilbertSample& v, int parity, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(v.dim(), v.dim());
  for (const auto& b : u_B_basis(v, parity)) u += g(rng) * b;
  return u;
}

namespace {

Eigen::VectorXd flatten(const Eigen::MatrixXcd& a) {
  Eigen::VectorXd out(2 * a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out[2 * i] = a.data()[i].real();
    out[2 * i + 1] = a.data()[i].imag();
  }
  return out;
}

Eigen::MatrixXcd combine(const std::vector<Eigen::MatrixXcd>& basis, const Eigen::VectorXd& c) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(basis[0].rows(), basis[0].cols());
  for (std::size_t i = 0; i < basis.size(); ++i) a += c[i] * basis[i];
  return a;
}

/// Jacobian of c -> flatten(A(c)^2).
Eigen::MatrixXd square_jacobian(const std::vector<Eigen::MatrixXcd>& basis, const Eigen::MatrixXcd& a) {
  Eigen::MatrixXd j(2 * a.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) j.col(i) = flatten(basis[i] * a + a * basis[i]);
  return j;
}

}  // namespace

CheckReport odd_triviality_check(const SuperHilbertSample& v, int trials, std::uint64_t seed) {
  if (v.even_dim > kMaxSampleDim || v.odd_dim > kMaxSampleDim)
    invalid("sample dimensions exceed " + std::to_string(kMaxSampleDim) + "|" + std::to_string(kMaxSampleDim));
  if (trials < 1) invalid("trials must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto basis = u_B_basis(v, 1);

  CheckResult identity{"odd_square_identity", true, 0.0, 1e-10, {},
                       "|B(Av,Av) - (-1)^|v| B(A^2 v, v)| / max(1, |both sides|) for odd A in u_B"};
  CheckResult membership{"odd_membership", true, 0.0, kMembershipTolerance, {}, "u_B residual of sampled odd A"};
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(v.dim(), v.dim());
    for (const auto& b : basis) a += g(rng) * b;
    membership.observe(basis.empty() ? 0.0 : u_B_membership(a, v), {static_cast<double>(t)});
    const int pv = (v.odd_dim == 0) ? 0 : (v.even_dim == 0 ? 1 : static_cast<int>(rng() % 2));
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(v.dim());
    for (int i = 0; i < v.dim(); ++i)
      if (v.parity_of(i) == pv) x[i] = {g(rng), g(rng)};
    const std::complex<double> lhs = form(v.B, a * x, a * x);
    const std::complex<double> rhs = (pv ? -1.0 : 1.0) * form(v.B, a * a * x, x);
    identity.observe(std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}), {static_cast<double>(t)});
  }

  CheckResult nilpotent{"odd_square_zero", true, 0.0, 1e-10, {},
                        "norm of odd A in u_B with A^2 = 0 reached by Gauss-Newton from random starts"};
  CheckResult gap{"unit_square_gap", true, 0.0, 0.0, {},
                  "min |A^2| over odd A in u_B with |A| = 1; must be positive"};
  if (basis.empty()) {
    nilpotent.observe(0.0, {});
    gap.detail += " (u_B has no odd part)";
    gap.worst_residual = std::numeric_limits<double>::infinity();
  } else {
    const int k = static_cast<int>(basis.size());
    const int starts = std::max(5, trials / 50);
    double best_gap = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
      Eigen::VectorXd c0(k);
      for (int i = 0; i < k; ++i) c0[i] = g(rng);
      c0.normalize();

      // Unconstrained: drive A^2 to zero.
      Eigen::VectorXd c = c0;
      for (int it = 0; it < 400; ++it) {
        const Eigen::MatrixXcd a = combine(basis, c);
        const Eigen::VectorXd r = flatten(a * a);
        if (r.norm() < 1e-28) break;
        const Eigen::MatrixXd j = square_jacobian(basis, a);
        c += j.completeOrthogonalDecomposition().solve(-r);
      }
      const Eigen::MatrixXcd a = combine(basis, c);
      if (flatten(a * a).norm() < 1e-20) nilpotent.observe(c.norm(), {static_cast<double>(s)});
      else nilpotent.observe(std::numeric_limits<double>::infinity(), {static_cast<double>(s)});

      // On the unit sphere: tangent Gauss-Newton steps, then renormalize.
      // The basis is orthonormal over the reals, so |c| = |A|_F.
      c = c0;
      for (int it = 0; it < 200; ++it) {
        const Eigen::MatrixXcd u = combine(basis, c);
        const Eigen::VectorXd r = flatten(u * u);
        const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(k, k) - c * c.transpose();
        const Eigen::MatrixXd j = square_jacobian(basis, u) * proj;
        const Eigen::VectorXd step = proj * j.completeOrthogonalDecomposition().solve(-r);
        double t = 1.0;
        bool moved = false;
        for (int h = 0; h < 30; ++h, t *= 0.5) {
          Eigen::VectorXd trial = (c + t * step).normalized();
          const Eigen::MatrixXcd ut = combine(basis, trial);
          if (flatten(ut * ut).norm() < r.norm()) {
            c = trial;
            moved = true;
            break;
          }
        }
        if (!moved || step.norm() < 1e-14) break;
      }
      const Eigen::MatrixXcd u = combine(basis, c);
      best_gap = std::min(best_gap, flatten(u * u).norm());
    }
    gap.worst_residual = best_gap;
    gap.passed = best_gap > 1e-8;
  }
  return CheckReport{{identity, membership, nilpotent, gap}};
}

CheckReport lambda_module_checks(int k) {
  if (k < 1 || k > 4) invalid("lambda_module_checks needs 1 <= k <= 4");
  using namespace grassmann;
  CheckResult drop{"filtration_drop", true, 0.0, 0.0, {},
                   "blades whose derivative does not lower the filtration degree"};
  double violations = 0.0;
  for (std::uint32_t mask = 0; mask <= Blade::full_mask(k); ++mask) {
    const Blade b(k, mask);
    for (int slot = 1; slot <= 2 * k; ++slot) {
      const Element d = derivation(slot, Element(b));
      if (!d.is_zero() && filtration_degree(d) > b.degree() - 1) violations += 1.0;
    }
  }
  drop.observe(violations, {});

  CheckResult kernel{"derivation_kernel", true, 0.0, 0.0, {}, "|dim ker - 1| plus 1 if the kernel is not the scalars"};
  const auto ker = joint_derivation_kernel(k);
  double bad = std::abs(static_cast<double>(ker.size()) - 1.0);
  if (ker.size() == 1 && (ker[0].terms().size() != 1 || ker[0].terms().begin()->first != 0)) bad += 1.0;
  kernel.observe(bad, {});

  CheckResult witness{"nontrivial_action", true, 0.0, 0.0, {}, "|D_1 xi_1 - 1|"};
  const Element d = derivation(1, Element(Blade::generator(k, 1)));
  witness.observe(d == Element::scalar(k, ComplexQ(1)) ? 0.0 : 1.0, {});
  return CheckReport{{drop, kernel, witness}};
}

}  // namespace sq::reps
