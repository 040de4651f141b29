#include "run/commands.hpp"

#include "bergman/bergman.hpp"
#include "common/error.hpp"
#include "grassmann/element.hpp"
#include "kahler/kahler.hpp"
#include "reps/reps.hpp"

#include "json.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace sq::run {

using nlohmann::ordered_json;

namespace {

ordered_json conventions() {
  return {
      {"character", "exp(2 pi i lambda1.r) on the torus, exp(i lambda2.r) on the flat factor"},
      {"bergman_weight", "exp(-2F); the section-norm macro is read as 2F"},
      {"haar_volume", 1},
      {"interior_product", "iota(d/dy_q)(dx_p ^ dy_q) = -dx_p, so d(Phi, v) = iota(v#) omega with Phi = (-F', 2 xi)"},
      {"conjugation", "order preserving on generator products"},
  };
}

ordered_json header(const std::string& command, const RunConfig* c) {
  ordered_json h;
  h["tool"] = "superquant";
  h["version"] = kToolVersion;
  h["command"] = command;
  h["conventions"] = conventions();
  if (c) {
    const std::string canon = canonical_json(*c);
    h["config_hash"] = fnv1a64(canon);
    h["config"] = ordered_json::parse(canon);
  }
  return h;
}

ordered_json check_json(const CheckResult& r) {
  return {{"name", r.name},
          {"passed", r.passed},
          {"worst_residual", r.worst_residual},
          {"tolerance", r.tolerance},
          {"witness", r.witness},
          {"detail", r.detail}};
}

ordered_json report_json(const CheckReport& rep) {
  ordered_json a = ordered_json::array();
  for (const auto& r : rep.checks) a.push_back(check_json(r));
  return a;
}

void rename(CheckReport& rep, const std::string& suffix) {
  for (auto& r : rep.checks) r.name += " " + suffix;
}

ordered_json refutation_json(const potential::Refutation& r) {
  return {{"witness", r.witness},
          {"min_eigenvalue", r.min_eigenvalue},
          {"box", {r.box.lo, r.box.hi}},
          {"tau", r.tau}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

RunResult refuted(const std::string& command, const RunConfig& c, const potential::Refutation& r) {
  ordered_json j = header(command, &c);
  j["passed"] = false;
  j["refutation"] = refutation_json(r);
  RunResult out;
  out.exit_code = kExitCheckFailure;
  out.json = dump(j);
  out.summary = "potential is not strictly convex: Hessian eigenvalue " + potential::format_double(r.min_eigenvalue) +
                " at the witness";
  return out;
}

ordered_json weight_json(const Weight& w) { return {{"torus", w.torus}, {"flat", w.flat}}; }

ordered_json verdict_json(const bergman::ConvergenceVerdict& v) {
  return {{"kind", bergman::to_string(v.kind)},
          {"value", v.value},
          {"log_value", v.log_value},
          {"error_estimate", v.error_estimate},
          {"radii", v.radii},
          {"log_truncations", v.log_truncations},
          {"point", v.point},
          {"gradient_norm", v.gradient_norm},
          {"iterations", v.iterations},
          {"reason", v.reason}};
}

ordered_json classification_json(const bergman::WeightClassification& c) {
  ordered_json pts = ordered_json::array();
  for (const auto& p : c.points)
    pts.push_back({{"lambda", p.lambda}, {"integral", verdict_json(p.integral)}, {"legendre", verdict_json(p.legendre)}});
  return {{"points", pts}, {"discrepancy", c.discrepancy}, {"reason", c.reason}};
}

std::string fmt(double v) { return std::isfinite(v) ? potential::format_double(v) : ""; }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

std::string occurrence_csv(const RunConfig& c, const reps::OccurrenceReport& rep) {
  std::ostringstream os;
  for (int a = 0; a < c.n; ++a) os << "lambda_t" << a + 1 << ",";
  for (int a = 0; a < c.m; ++a) os << "lambda_f" << a + 1 << ",";
  os << "plus_verdict,minus_verdict,integral_verdict,integral_log_value,integral_error,"
        "legendre_verdict,legendre_point,legendre_gradient_norm,points_evaluated,discrepancy,reason\n";
  for (std::size_t e = 0; e + 1 < rep.entries.size(); e += 2) {
    const auto& plus = rep.entries[e];
    const auto& minus = rep.entries[e + 1];
    for (auto t : plus.label.weight.torus) os << t << ",";
    for (auto f : plus.label.weight.flat) os << fmt(f) << ",";
    os << bergman::to_string(plus.verdict) << "," << bergman::to_string(minus.verdict) << ",";
    const auto& pts = plus.data.points;
    if (pts.empty()) {
      os << ",,,,,,";
    } else {
      const auto& centre = pts.front();
      os << bergman::to_string(centre.integral.kind) << "," << fmt(centre.integral.log_value) << ","
         << fmt(centre.integral.error_estimate) << "," << bergman::to_string(centre.legendre.kind) << ","
         << join(centre.legendre.point) << "," << fmt(centre.legendre.gradient_norm) << ",";
    }
    os << pts.size() << "," << (plus.data.discrepancy ? "true" : "false") << "," << csv_quote(plus.data.reason) << "\n";
  }
  return os.str();
}

ordered_json occurrence_json(const reps::OccurrenceReport& rep) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"weight", weight_json(e.label.weight)},
                       {"parity", e.label.parity > 0 ? "+" : "-"},
                       {"verdict", bergman::to_string(e.verdict)},
                       {"oracle_data", classification_json(e.data)}});
  std::size_t occurs = 0;
  for (const auto& e : rep.entries) occurs += e.verdict == bergman::Occurrence::Occurs;
  return {{"entries", entries},
          {"inconclusive", rep.inconclusive},
          {"discrepancies", rep.discrepancies},
          {"summary",
           {{"weights", rep.entries.size() / 2}, {"occurs", occurs}, {"inconclusive", rep.inconclusive.size()},
            {"discrepancies", rep.discrepancies.size()}}}};
}

}  // namespace

RunResult cmd_verify_kahler(const RunConfig& c) {
  BuiltPotential bp = build_potential(c);
  if (bp.refutation) return refuted("verify-kahler", c, *bp.refutation);
  const kahler::SuperKahlerData omega = [&] {
    try {
      return kahler::build_form(bp.f, c.k, c.kahler.odd_coefficients);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::Config, std::string("kahler: ") + e.what());
      throw;
    }
  }();
  const int dim = c.n + c.m;
  const auto samples = kahler::sample_points(dim, c.kahler.lo, c.kahler.hi, c.kahler.samples, c.seed);

  CheckReport axioms = kahler::verify_axioms(omega, samples, {c.kahler.closedness_tol});

  CheckReport moment;
  auto direction = [&](std::vector<double> u, std::vector<double> w, const std::string& label) {
    CheckReport r = kahler::verify_moment_identity(omega, u, w, samples, c.kahler.moment_tol);
    rename(r, label);
    moment.append(r);
  };
  for (int j = 0; j < dim; ++j) {
    std::vector<double> u(dim, 0.0);
    u[j] = 1.0;
    direction(u, std::vector<double>(c.k, 0.0), "(even " + std::to_string(j + 1) + ")");
  }
  for (int r = 0; r < c.k; ++r) {
    std::vector<double> w(c.k, 0.0);
    w[r] = 1.0;
    direction(std::vector<double>(dim, 0.0), w, "(odd " + std::to_string(r + 1) + ")");
  }
  {
    std::vector<double> u(dim), w(c.k);
    for (int j = 0; j < dim; ++j) u[j] = 0.5 + 0.25 * j;
    for (int r = 0; r < c.k; ++r) w[r] = -0.75 + 0.5 * r;
    direction(u, w, "(mixed)");
  }

  CheckReport dolbeault = kahler::dolbeault_check(omega, samples, c.kahler.dolbeault_tol);

  const bool ok = axioms.passed() && moment.passed() && dolbeault.passed();
  ordered_json j = header("verify-kahler", &c);
  j["passed"] = ok;
  j["axioms"] = report_json(axioms);
  j["moment_identity"] = report_json(moment);
  j["dolbeault"] = report_json(dolbeault);
  RunResult out;
  out.exit_code = ok ? kExitPass : kExitCheckFailure;
  out.json = dump(j);
  std::size_t failed = 0, total = 0;
  for (const CheckReport* r : {&axioms, &moment, &dolbeault})
    for (const auto& ch : r->checks) total++, failed += !ch.passed;
  out.summary = ok ? "verify-kahler: all " + std::to_string(total) + " checks passed"
                   : "verify-kahler: " + std::to_string(failed) + " of " + std::to_string(total) + " checks failed";
  return out;
}

RunResult cmd_classify(const RunConfig& c, int threads) {
  BuiltPotential bp = build_potential(c);
  if (bp.refutation) return refuted("classify", c, *bp.refutation);
  const reps::OccurrenceReport rep = reps::occurrences(bp.f, c.weights, c.classify, threads);
  ordered_json j = header("classify", &c);
  j["occurrence"] = occurrence_json(rep);
  RunResult out;
  out.exit_code = rep.discrepancies.empty() ? kExitPass : kExitDisagreement;
  out.json = dump(j);
  out.csv = occurrence_csv(c, rep);
  const auto& s = j["occurrence"]["summary"];
  out.summary = "classify: " + s["occurs"].dump() + " of " + s["weights"].dump() + " weights occur, " +
                s["inconclusive"].dump() + " inconclusive, " + s["discrepancies"].dump() + " discrepancies";
  return out;
}

RunResult cmd_model_check(const RunConfig& c, int threads) {
  BuiltPotential bp = build_potential(c);
  if (bp.refutation) return refuted("model-check", c, *bp.refutation);
  const reps::ModelReport rep = reps::gelfand_model_check(bp.f, c.weights, c.classify, threads);
  ordered_json labels = ordered_json::array();
  for (const auto& l : rep.labels)
    labels.push_back({{"weight", weight_json(l.label.weight)},
                      {"parity", l.label.parity > 0 ? "+" : "-"},
                      {"confirmed", l.confirmed},
                      {"multiplicity", l.multiplicity},
                      {"attainment", l.attainment},
                      {"reason", l.reason}});
  ordered_json j = header("model-check", &c);
  j["confirmed"] = rep.confirmed;
  j["monotonicity_margin"] = rep.monotonicity_margin;
  j["labels"] = labels;
  j["occurrence"] = occurrence_json(rep.occurrence);
  RunResult out;
  out.exit_code = !rep.occurrence.discrepancies.empty() ? kExitDisagreement
                  : rep.confirmed                       ? kExitPass
                                                        : kExitCheckFailure;
  out.json = dump(j);
  std::size_t confirmed = 0;
  for (const auto& l : rep.labels) confirmed += l.confirmed;
  out.summary = "model-check: " + std::to_string(confirmed) + " of " + std::to_string(rep.labels.size()) +
                " labels confirmed" + (rep.confirmed ? "" : ", model NOT confirmed");
  return out;
}

RunResult cmd_berezin_eval(const std::string& element, int k) {
  RunResult out;
  ordered_json j = header("berezin-eval", nullptr);
  j["element"] = element;
  j["k"] = k;
  try {
    const grassmann::Element f = grassmann::parse_element(element, k);
    const std::string value = grassmann::to_string(grassmann::berezin_top(f));
    j["value"] = value;
    out.summary = value;
  } catch (const Error& e) {
    j["error"] = e.what();
    out.exit_code = kExitConfigError;
    out.summary = std::string("error: ") + e.what();
  }
  out.json = dump(j);
  return out;
}

namespace {

using grassmann::Blade;
using grassmann::ComplexQ;
using grassmann::Element;

CheckResult exact_check(const std::string& name) { return CheckResult{name, true, 0.0, 0.0, {}, "exact"}; }

CheckReport grassmann_checks(int k) {
  CheckResult assoc = exact_check("associativity"), comm = exact_check("super_commutativity"),
              star_rel = exact_check("star_relation"), kills = exact_check("berezin_kills_derivatives");
  const std::uint32_t count = 1u << (2 * k);
  const Element top(Blade::top(k));
  const std::vector<double> where{static_cast<double>(k)};
  for (std::uint32_t a = 0; a < count; ++a) {
    const Element ea(Blade(k, a));
    const int da = std::popcount(a);
    const Element s = multiply(ea, grassmann::star(Blade(k, a)));
    const Element expected = (da % 2 ? ComplexQ::i() : ComplexQ(1)) * top;
    star_rel.observe(s == expected ? 0.0 : 1.0, where);
    for (int slot = 1; slot <= 2 * k; ++slot)
      kills.observe(grassmann::berezin_top(grassmann::derivation(slot, ea)) == ComplexQ(0) ? 0.0 : 1.0, where);
    for (std::uint32_t b = 0; b < count; ++b) {
      const Element eb(Blade(k, b));
      const int sign = (da * std::popcount(b)) % 2 ? -1 : 1;
      comm.observe(multiply(ea, eb) == ComplexQ(sign) * multiply(eb, ea) ? 0.0 : 1.0, where);
      for (std::uint32_t c = 0; c < count; c += 3) {
        const Element ec(Blade(k, c));
        assoc.observe(multiply(multiply(ea, eb), ec) == multiply(ea, multiply(eb, ec)) ? 0.0 : 1.0, where);
      }
    }
  }
  return CheckReport{{assoc, comm, star_rel, kills}};
}

CheckReport ad_checks() {
  CheckResult r{"ad_vs_finite_differences", true, 0.0, 1e-5, {}, "relative gradient error"};
  const std::vector<double> mu{0.5, -1.0};
  const auto f = potential::builtin_F2(mu, 0.7, 1, 1);
  for (const auto& x : kahler::sample_points(2, -2.0, 2.0, 20, 7)) {
    const auto jet = potential::eval_jet2(f, x);
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
      auto xp = x, xm = x;
      const double h = 1e-6;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (f.value(xp) - f.value(xm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - jet.gradient[j]) / std::max(1.0, std::abs(fd)));
    }
    r.observe(worst, x);
  }
  return CheckReport{{r}};
}

}  // namespace

RunResult cmd_selftest() {
  CheckReport all;
  auto section = [&](CheckReport r, const std::string& label) {
    rename(r, "[" + label + "]");
    all.append(r);
  };
  auto guarded = [&](const std::string& label, auto&& fn) {
    try {
      section(fn(), label);
    } catch (const std::exception& e) {
      section(CheckReport{{CheckResult{"threw", false, 1.0, 0.0, {}, e.what()}}}, label);
    }
  };

  guarded("grassmann k=2", [] { return grassmann_checks(2); });
  guarded("berezin", [] {
    CheckResult r = exact_check("top_coefficient");
    r.observe(grassmann::berezin_top(grassmann::parse_element("5*ztop + 3*zeta1", 1)) == ComplexQ(5) ? 0.0 : 1.0, {});
    r.observe(grassmann::berezin_top(grassmann::parse_element("(zeta1)*(i*zbar1)", 1)) == ComplexQ::i() ? 0.0 : 1.0,
              {});
    return CheckReport{{r}};
  });
  guarded("lambda module k=2", [] { return reps::lambda_module_checks(2); });
  guarded("ad", [] { return ad_checks(); });
  guarded("kahler F1", [] {
    const auto omega = kahler::build_form(potential::builtin_F1(1, 1), 1);
    const auto samples = kahler::sample_points(2, -1.5, 1.5, 10, 3);
    CheckReport r = kahler::verify_axioms(omega, samples);
    const std::vector<double> u{1.0, -0.5}, w{0.75};
    r.append(kahler::verify_moment_identity(omega, u, w, samples));
    r.append(kahler::dolbeault_check(omega, samples));
    return r;
  });
  guarded("gaussian", [] {
    CheckResult r{"gaussian_benchmark", true, 0.0, 1e-6, {}, "relative error against sqrt(pi/2)"};
    const std::vector<double> zero{0.0};
    const auto v = bergman::weighted_norm_integral(zero, potential::builtin_F1(0, 1));
    r.observe(std::abs(v.value - std::sqrt(std::acos(-1.0) / 2)) / std::sqrt(std::acos(-1.0) / 2), {0.0});
    return CheckReport{{r}};
  });
  guarded("classify F1", [] {
    CheckResult r = exact_check("occurs_and_oracles_agree");
    const auto w = bergman::classify_weight(Weight{{2}, {}}, potential::builtin_F1(1, 0));
    r.observe(w.verdict == bergman::Occurrence::Occurs && !w.discrepancy ? 0.0 : 1.0, {2.0});
    return CheckReport{{r}};
  });
  guarded("odd triviality 2|2", [] {
    std::mt19937_64 rng(11);
    return reps::odd_triviality_check(reps::random_sample(2, 2, rng), 50, 11);
  });

  ordered_json j = header("selftest", nullptr);
  j["passed"] = all.passed();
  j["checks"] = report_json(all);
  RunResult out;
  out.exit_code = all.passed() ? kExitPass : kExitCheckFailure;
  out.json = dump(j);
  std::size_t failed = 0;
  for (const auto& ch : all.checks) failed += !ch.passed;
  out.summary = all.passed() ? "selftest: all " + std::to_string(all.checks.size()) + " checks passed"
                             : "selftest: " + std::to_string(failed) + " checks failed";
  return out;
}

RunResult run_command(const std::string& command, const std::string& config_text, const Overrides& o) {
  try {
    RunConfig c = parse_config(config_text);
    if (o.seed) c.seed = *o.seed;
    if (o.threads < 1) throw Error(ErrorKind::Config, "threads must be at least 1");
    if (command == "verify-kahler") return cmd_verify_kahler(c);
    if (command == "classify") return cmd_classify(c, o.threads);
    if (command == "model-check") return cmd_model_check(c, o.threads);
    throw Error(ErrorKind::Config, "unknown command '" + command + "'");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Config) throw;
    ordered_json j = header(command, nullptr);
    j["error"] = e.what();
    RunResult out;
    out.exit_code = kExitConfigError;
    out.json = dump(j);
    out.summary = std::string("config error: ") + e.what();
    return out;
  }
}

}  // namespace sq::run
