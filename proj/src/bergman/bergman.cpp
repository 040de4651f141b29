#include "bergman/bergman.hpp"

#include "common/error.hpp"
#include "grassmann/element.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <map>

namespace sq::bergman {

using potential::ConvexPotential;

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Converges: return "Converges";
    case VerdictKind::Diverges: return "Diverges";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(Occurrence o) {
  switch (o) {
    case Occurrence::Occurs: return "Occurs";
    case Occurrence::DoesNotOccur: return "DoesNotOccur";
    case Occurrence::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

/// Running log(sum exp(v_i)) without overflow.
struct LogSum {
  double max = kNegInf;
  double sum = 0.0;

  void add(double v) { add_scaled(v, 1.0); }
  // Adds s * exp(v).
  void add_scaled(double v, double s) {
    if (v == kNegInf || s == 0.0) return;
    if (v > max) {
      sum = sum * std::exp(max - v) + s;
      max = v;
    } else {
      sum += s * std::exp(v - max);
    }
  }
  void add(const LogSum& o) { add_scaled(o.max, o.sum); }
  double log() const { return max == kNegInf ? kNegInf : max + std::log(sum); }
};

struct Rule {
  std::vector<double> nodes;        // on [-1, 1], ascending
  std::vector<double> log_weights;
};

template <int N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  Rule r;
  // Boost stores the nonnegative half; mirror it.
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0.0) continue;
    r.nodes.push_back(-a[i]);
    r.log_weights.push_back(std::log(w[i]));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.nodes.push_back(a[i]);
    r.log_weights.push_back(std::log(w[i]));
  }
  return r;
}

const Rule& rule_for(int order) {
  static const std::map<int, Rule> rules = {
      {8, make_rule<8>()},   {12, make_rule<12>()}, {16, make_rule<16>()}, {20, make_rule<20>()},
      {24, make_rule<24>()}, {32, make_rule<32>()}, {48, make_rule<48>()}, {64, make_rule<64>()},
  };
  auto it = rules.find(order);
  if (it == rules.end()) invalid("unsupported quadrature order " + std::to_string(order));
  return it->second;
}

/// Advances a multi-index in [lo, hi)^d; false when exhausted.
bool next_index(std::vector<long long>& idx, long long lo, long long hi) {
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (++idx[a] < hi) return true;
    idx[a] = lo;
  }
  return false;
}

}  // namespace

const std::vector<int>& supported_orders() {
  static const std::vector<int> orders = {8, 12, 16, 20, 24, 32, 48, 64};
  return orders;
}

void TruncationSchedule::validate() const {
  if (!(r0 > 0.0)) invalid("schedule r0 must be positive");
  if (!(growth > 1.0)) invalid("schedule growth must exceed 1");
  if (max_doublings < 3) invalid("schedule needs at least 3 doublings");
  if (!(panel_width > 0.0)) invalid("panel width must be positive");
  if (!(rel_tol > 0.0)) invalid("relative tolerance must be positive");
  if (!(divergence_ratio > 1.0) || divergence_run < 1) invalid("bad divergence rule");
  if (max_evaluations <= 0) invalid("evaluation budget must be positive");
  rule_for(order);
}

void LegendreParams::validate() const {
  if (!(gradient_tol > 0.0) || !(escape_radius > 0.0) || max_iterations < 1 || !(step_tol > 0.0))
    invalid("bad Legendre solver parameters");
}

ConvergenceVerdict weighted_norm_integral(std::span<const double> lambda, const ConvexPotential& f,
                                          const TruncationSchedule& sched) {
  sched.validate();
  const int d = f.dim();
  if (static_cast<int>(lambda.size()) != d)
    throw Error(ErrorKind::Dimension, "weight has length " + std::to_string(lambda.size()) + ", potential has " +
                                          std::to_string(d) + " variables");
  const Rule& rule = rule_for(sched.order);
  const int q = static_cast<int>(rule.nodes.size());
  const double w = sched.panel_width, half = 0.5 * w;
  const double log_jacobian = d * std::log(half);

  ConvergenceVerdict out;
  LogSum total;
  std::vector<double> x(d), scratch;
  std::vector<long long> panel(d), node(d);
  long long prev_panels = 0;  // half-width of the previous box in panels
  double evaluations = 0.0;
  int growth_run = 0;

  for (int j = 0; j <= sched.max_doublings; ++j) {
    long long panels = static_cast<long long>(std::ceil(sched.r0 * std::pow(sched.growth, j) / w - 1e-12));
    panels = std::max(panels, prev_panels + 1);
    const double box_panels = std::pow(2.0 * panels, d) - std::pow(2.0 * prev_panels, d);
    evaluations += box_panels * std::pow(static_cast<double>(q), d);
    if (evaluations > static_cast<double>(sched.max_evaluations)) {
      out.reason = "evaluation budget exhausted at radius " + potential::format_double(panels * w);
      return out;
    }

    LogSum shell;
    // Largest integrand value in the shell and whether it sits in the outermost
    // ring of panels; growth only counts as divergence when it does.
    double peak = kNegInf;
    bool peak_on_rim = false;
    std::fill(panel.begin(), panel.end(), -panels);
    do {
      bool inner = true, rim = false;
      for (long long k : panel) {
        inner = inner && k >= -prev_panels && k < prev_panels;
        rim = rim || k == -panels || k == panels - 1;
      }
      if (inner) continue;
      std::fill(node.begin(), node.end(), 0);
      do {
        double lw = log_jacobian, linear = 0.0;
        for (int a = 0; a < d; ++a) {
          x[a] = panel[a] * w + half * (1.0 + rule.nodes[node[a]]);
          lw += rule.log_weights[node[a]];
          linear += lambda[a] * x[a];
        }
        double fx;
        if (!potential::try_evaluate(f.ast(), x, scratch, fx) || !std::isfinite(fx)) {
          out.reason = "potential not evaluable at x = (" + [&] {
            std::string s;
            for (int a = 0; a < d; ++a) s += (a ? ", " : "") + potential::format_double(x[a]);
            return s;
          }() + ")";
          return out;
        }
        const double v = -2.0 * linear - 2.0 * fx;
        if (v > peak) {
          peak = v;
          peak_on_rim = rim;
        }
        shell.add(lw + v);
      } while (next_index(node, 0, q));
    } while (next_index(panel, -panels, panels));

    const double before = total.log();
    total.add(shell);
    const double now = total.log();
    if (now < before) throw Error(ErrorKind::Resource, "truncation history decreased");  // positive integrand
    out.radii.push_back(panels * w);
    out.log_truncations.push_back(now);
    prev_panels = panels;
    if (j == 0) continue;

    if (now == kNegInf) continue;
    const double rel = std::exp(shell.log() - now);
    if (rel <= sched.rel_tol) {
      out.kind = VerdictKind::Converges;
      out.log_value = now;
      out.value = std::exp(now);
      out.error_estimate = out.value * rel;
      return out;
    }
    growth_run = (now - before >= std::log(sched.divergence_ratio)) ? growth_run + 1 : 0;
    if (growth_run >= sched.divergence_run && peak_on_rim) {
      out.kind = VerdictKind::Diverges;
      out.log_value = now;
      out.reason = std::to_string(growth_run) + " successive truncations grew by at least " +
                   potential::format_double(sched.divergence_ratio) + "x";
      return out;
    }
  }
  out.log_value = total.log();
  out.reason = "no convergence or sustained growth within the schedule";
  return out;
}

ConvergenceVerdict legendre_attainment(std::span<const double> lambda, const ConvexPotential& f,
                                       const LegendreParams& params) {
  params.validate();
  if (!f.certified()) throw Error(ErrorKind::Uncertified, "potential has no strict convexity certificate");
  const int d = f.dim();
  if (static_cast<int>(lambda.size()) != d) throw Error(ErrorKind::Dimension, "weight length does not match potential");
  Eigen::Map<const Eigen::VectorXd> lam(lambda.data(), d);

  ConvergenceVerdict out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  if (!params.start.empty()) {
    if (static_cast<int>(params.start.size()) != d) throw Error(ErrorKind::Dimension, "start point has wrong length");
    x = Eigen::Map<const Eigen::VectorXd>(params.start.data(), d);
  }
  std::vector<double> scratch;
  auto objective = [&](const Eigen::VectorXd& at, double& value) {
    double fx;
    if (!potential::try_evaluate(f.ast(), std::span<const double>(at.data(), d), scratch, fx)) return false;
    value = fx + lam.dot(at);
    return std::isfinite(value);
  };
  auto finish = [&](VerdictKind kind, double gn, int it, std::string reason) {
    out.kind = kind;
    out.point.assign(x.data(), x.data() + d);
    out.gradient_norm = gn;
    out.iterations = it;
    out.reason = std::move(reason);
    return out;
  };

  for (int it = 0; it < params.max_iterations; ++it) {
    potential::Jet2 jet;
    try {
      jet = potential::eval_jet2(f, std::span<const double>(x.data(), d));
    } catch (const Error& e) {
      return finish(VerdictKind::Inconclusive, NAN, it, std::string("evaluation failed: ") + e.what());
    }
    const Eigen::VectorXd g = jet.gradient + lam;
    const double gn = g.norm();

    Eigen::VectorXd p;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(jet.hessian);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) p = -ldlt.solve(g);
    if (p.size() != d || !p.allFinite() || g.dot(p) >= 0.0) p = -g;

    if (gn < params.gradient_tol && p.norm() <= params.step_tol * (1.0 + x.norm())) {
      out.value = jet.value + lam.dot(x);
      return finish(VerdictKind::Converges, gn, it, "stationary point");
    }

    double g0;
    if (!objective(x, g0)) return finish(VerdictKind::Inconclusive, gn, it, "objective not evaluable");
    const double slope = g.dot(p);
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    for (int halving = 0; halving < 80; ++halving, t *= 0.5) {
      xn = x + t * p;
      double gv;
      if (objective(xn, gv) && gv <= g0 + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (gn < params.gradient_tol) {
        out.value = g0;
        return finish(VerdictKind::Converges, gn, it, "stationary point at rounding level");
      }
      return finish(VerdictKind::Inconclusive, gn, it, "line search failed");
    }
    x = xn;
    if (x.norm() > params.escape_radius) {
      return finish(VerdictKind::Diverges, gn, it + 1,
                    "iterates left the escape radius " + potential::format_double(params.escape_radius));
    }
  }
  double gn = NAN;
  try {
    gn = (potential::eval_jet2(f, std::span<const double>(x.data(), d)).gradient + lam).norm();
  } catch (const Error&) {
  }
  return finish(VerdictKind::Inconclusive, gn, params.max_iterations, "iteration cap reached");
}

bool PointEvaluation::contradictory() const {
  return (integral.kind == VerdictKind::Converges && legendre.kind == VerdictKind::Diverges) ||
         (integral.kind == VerdictKind::Diverges && legendre.kind == VerdictKind::Converges);
}

WeightClassification classify_weight(const Weight& lambda, const ConvexPotential& f, const ClassifyOptions& options) {
  if (lambda.n() != f.n() || lambda.m() != f.m())
    throw Error(ErrorKind::Dimension, "weight dimensions do not match the potential");
  if (!(options.delta > 0.0)) invalid("delta must be positive");

  WeightClassification out;
  out.weight = lambda;
  auto evaluate_at = [&](std::vector<double> v) {
    PointEvaluation p;
    p.integral = weighted_norm_integral(v, f, options.schedule);
    p.legendre = legendre_attainment(v, f, options.legendre);
    p.lambda = std::move(v);
    out.points.push_back(std::move(p));
    return out.points.back().contradictory();
  };

  const std::vector<double> center = lambda.as_vector();
  auto both = [](const PointEvaluation& p, VerdictKind k) { return p.integral.kind == k && p.legendre.kind == k; };
  if (evaluate_at(center)) {
    out.discrepancy = true;
    out.reason = "oracles disagree at the center";
    return out;
  }
  if (both(out.points[0], VerdictKind::Diverges)) {
    out.verdict = Occurrence::DoesNotOccur;
    out.reason = "both oracles diverge at the center";
    return out;
  }
  if (!both(out.points[0], VerdictKind::Converges)) {
    out.reason = "center not decided by both oracles";
    return out;
  }
  // Flat components need a whole neighborhood of convergence.
  for (int j = 0; j < lambda.m(); ++j)
    for (double sign : {-1.0, 1.0}) {
      std::vector<double> v = center;
      v[lambda.n() + j] += sign * options.delta;
      if (evaluate_at(v)) {
        out.discrepancy = true;
        out.reason = "oracles disagree at a flat perturbation";
        return out;
      }
      if (!both(out.points.back(), VerdictKind::Converges)) {
        out.reason = "center converges but a flat perturbation does not";
        return out;
      }
    }
  out.verdict = Occurrence::Occurs;
  out.reason = lambda.m() ? "both oracles converge on the neighborhood" : "both oracles converge";
  return out;
}

namespace {

std::complex<double> berezin_pairing(const grassmann::Blade& p, const grassmann::Blade& r) {
  if (p.k() != r.k()) throw Error(ErrorKind::Dimension, "sections use different odd dimensions");
  using namespace grassmann;
  return berezin_top(multiply(Element(p), star(r))).to_complex();
}

void require_holomorphic(const SectionCoefficient& s) {
  if (!s.blade.is_holomorphic()) invalid("section blade must use zeta slots only");
}

}  // namespace

SectionNorm section_norm(const SectionCoefficient& s, const ConvexPotential& f, const TruncationSchedule& schedule) {
  require_holomorphic(s);
  if (s.lambda.n() != f.n() || s.lambda.m() != f.m())
    throw Error(ErrorKind::Dimension, "section weight does not match the potential");
  SectionNorm out;
  if (s.scalar == 0.0) {
    out.verdict.kind = VerdictKind::Converges;
    out.verdict.value = 0.0;
    out.verdict.log_value = kNegInf;
    out.verdict.error_estimate = 0.0;
    out.verdict.reason = "zero section";
    out.value = 0.0;
    return out;
  }
  out.verdict = weighted_norm_integral(s.lambda.as_vector(), f, schedule);
  if (out.verdict.kind == VerdictKind::Converges)
    out.value = std::norm(s.scalar) * berezin_pairing(s.blade, s.blade) * out.verdict.value;
  return out;
}

namespace {

std::complex<double> pairing(const SectionCoefficient& s, const SectionCoefficient& t, double integral) {
  if (!(s.lambda == t.lambda)) return 0.0;
  const std::complex<double> b = berezin_pairing(s.blade, t.blade);
  if (b == 0.0) return 0.0;
  return s.scalar * std::conj(t.scalar) * b * integral;
}

double converged_integral(const SectionCoefficient& s, const ConvexPotential& f, const TruncationSchedule& schedule) {
  ConvergenceVerdict v = weighted_norm_integral(s.lambda.as_vector(), f, schedule);
  if (v.kind != VerdictKind::Converges) invalid("section norm does not converge: " + v.reason);
  return v.value;
}

}  // namespace

std::complex<double> inner_product(const SectionCoefficient& s, const SectionCoefficient& t,
                                   const ConvexPotential& f, const TruncationSchedule& schedule) {
  require_holomorphic(s);
  require_holomorphic(t);
  if (!(s.lambda == t.lambda) || s.scalar == 0.0 || t.scalar == 0.0) return 0.0;
  if (berezin_pairing(s.blade, t.blade) == 0.0) return 0.0;
  return pairing(s, t, converged_integral(s, f, schedule));
}

CheckReport metric_axioms_check(const std::vector<SectionCoefficient>& family, const ConvexPotential& f,
                                const TruncationSchedule& schedule) {
  const std::size_t n = family.size();
  std::vector<double> integral(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_holomorphic(family[i]);
    std::size_t same = i;
    for (std::size_t j = 0; j < i; ++j)
      if (family[j].lambda == family[i].lambda) same = j;
    integral[i] = same < i ? integral[same] : converged_integral(family[i], f, schedule);
  }

  CheckResult consistency{"consistency", true, 0.0, 0.0, {}, "|<s,t>| for sections of different parity"};
  CheckResult symmetry{"hermitian_symmetry", true, 0.0, 1e-10, {},
                       "|<s,t> - (-1)^(|s||t|) conj(<t,s>)| relative to the larger side"};
  CheckResult positivity{"super_positivity", true, 0.0, 1e-10, {},
                         "<s,s> / i^|s| must be real and positive; residual is the relative imaginary part"};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto& s = family[a];
      const auto& t = family[b];
      const std::vector<double> at{static_cast<double>(a), static_cast<double>(b)};
      const std::complex<double> st = pairing(s, t, integral[a]);
      const std::complex<double> ts = pairing(t, s, integral[b]);
      if (s.parity() != t.parity()) consistency.observe(std::abs(st), at);
      const double sign = (s.parity() * t.parity()) % 2 ? -1.0 : 1.0;
      const double scale = std::max(std::abs(st), std::abs(ts));
      symmetry.observe(scale == 0.0 ? 0.0 : std::abs(st - sign * std::conj(ts)) / scale, at);
      if (a == b) {
        const std::complex<double> v = s.parity() ? st / std::complex<double>(0, 1) : st;
        double r = 0.0;
        if (s.scalar != 0.0) r = v.real() > 0.0 ? std::abs(v.imag()) / std::abs(v) : 1.0;
        positivity.observe(r, at);
      }
    }
  return CheckReport{{consistency, symmetry, positivity}};
}

}  // namespace sq::bergman
