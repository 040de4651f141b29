#include "run/config.hpp"

#include "common/error.hpp"
#include "grassmann/blade.hpp"
#include "grassmann/scalar.hpp"

#include "json.hpp"

#include <cstdio>
#include <set>

namespace sq::run {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::Config, where.empty() ? msg : where + ": " + msg);
}

/// Object reader that rejects keys it was never asked about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_, "expected an object");
  }
  ~Section() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) config_error(where(key), "missing");
    return j_.at(key);
  }
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) config_error(where(key), "expected a number");
    return v.get<double>();
  }
  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) config_error(where(key), "expected an integer");
    return v.get<long long>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) config_error(where(key), "expected a string");
    return v.get<std::string>();
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) config_error(where(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) config_error(where, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) config_error(where, "expected a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

constexpr long long kMaxAxisLength = 100000;

/// Exact value of the shortest decimal that reads back as v.
grassmann::Rational decimal(double v) {
  const std::string s = potential::format_double(v);
  using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
  Int digits = 0;
  int scale = 0, exponent = 0;
  bool negative = false, dot = false;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') negative = true, ++i;
  for (; i < s.size() && s[i] != 'e'; ++i) {
    if (s[i] == '.') {
      dot = true;
      continue;
    }
    digits = digits * 10 + (s[i] - '0');
    if (dot) ++scale;
  }
  if (i < s.size()) exponent = std::stoi(s.substr(i + 1));
  const int power = exponent - scale;
  Int ten = 1;
  for (int p = 0; p < std::abs(power); ++p) ten *= 10;
  grassmann::Rational r = power >= 0 ? grassmann::Rational(digits * ten) : grassmann::Rational(digits, ten);
  return negative ? grassmann::Rational(-r) : r;
}

std::vector<std::int64_t> torus_axis(const json& v, const std::string& where) {
  std::vector<std::int64_t> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number_integer()) config_error(where, "torus weights must be integers");
      out.push_back(e.get<std::int64_t>());
    }
    return out;
  }
  Section s(v, where);
  const long long lo = s.integer("lo", 0), hi = s.integer("hi", -1);
  s.at("lo");
  s.at("hi");
  s.finish();
  if (lo > hi) config_error(where, "lo must not exceed hi");
  if (hi - lo >= kMaxAxisLength) config_error(where, "axis too long");
  for (long long x = lo; x <= hi; ++x) out.push_back(x);
  return out;
}

std::vector<double> flat_axis(const json& v, const std::string& where) {
  if (v.is_array()) return number_list(v, where);
  Section s(v, where);
  s.at("lo");
  s.at("hi");
  s.at("step");
  const double lo = s.number("lo", 0), hi = s.number("hi", 0), step = s.number("step", 1);
  s.finish();
  if (lo > hi) config_error(where, "lo must not exceed hi");
  if (!(step > 0)) config_error(where, "step must be positive");
  // Exact decimal arithmetic so grid points equal the decimals a user would type.
  const grassmann::Rational a = decimal(lo), b = decimal(hi), h = decimal(step);
  std::vector<double> out;
  for (grassmann::Rational x = a; x <= b; x += h) {
    if (static_cast<long long>(out.size()) >= kMaxAxisLength) config_error(where, "axis too long");
    out.push_back(std::stod(potential::format_double(x.convert_to<double>())));
  }
  return out;
}

template <class Fn>
auto rethrow_as_config(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(where, e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("", std::string("malformed JSON: ") + e.what());
  }
  RunConfig c;
  Section top(root, "");

  if (top.has("dims")) {
    Section s(top.at("dims"), "dims");
    c.n = static_cast<int>(s.integer("n", 1));
    c.m = static_cast<int>(s.integer("m", 0));
    c.k = static_cast<int>(s.integer("k", 0));
    s.finish();
  }
  if (c.n < 0 || c.m < 0 || c.n + c.m < 1) config_error("dims", "need n, m >= 0 and n + m >= 1");
  if (c.k < 0 || c.k > grassmann::kMaxPairs) config_error("dims.k", "must lie in [0, 16]");

  {
    Section s(top.at("potential"), "potential");
    c.potential.builtin = s.string("builtin", "");
    c.potential.expression = s.string("expression", "");
    if (s.has("mu")) c.potential.mu = number_list(s.at("mu"), "potential.mu");
    c.potential.epsilon = s.number("epsilon", 0.0);
    s.finish();
    const bool builtin = !c.potential.builtin.empty();
    if (builtin == !c.potential.expression.empty())
      config_error("potential", "give exactly one of builtin or expression");
    if (builtin && c.potential.builtin != "F1" && c.potential.builtin != "F2")
      config_error("potential.builtin", "unknown builtin '" + c.potential.builtin + "'");
    if (c.potential.builtin != "F2" && (!c.potential.mu.empty() || c.potential.epsilon != 0.0))
      config_error("potential", "mu and epsilon only apply to F2");
  }

  if (top.has("certify")) {
    Section s(top.at("certify"), "certify");
    c.certify.lo = s.number("lo", c.certify.lo);
    c.certify.hi = s.number("hi", c.certify.hi);
    c.certify.grid_density = static_cast<int>(s.integer("grid_density", c.certify.grid_density));
    c.certify.tau = s.number("tau", c.certify.tau);
    s.finish();
    if (!(c.certify.lo < c.certify.hi)) config_error("certify", "lo must be below hi");
    if (c.certify.grid_density < 2) config_error("certify.grid_density", "must be at least 2");
    if (!(c.certify.tau > 0)) config_error("certify.tau", "must be positive");
  }

  c.weights.torus_axes.assign(c.n, {});
  c.weights.flat_axes.assign(c.m, {});
  if (top.has("weights")) {
    Section s(top.at("weights"), "weights");
    if (s.has("torus")) {
      const json& t = s.at("torus");
      if (!t.is_array() || static_cast<int>(t.size()) != c.n) config_error("weights.torus", "need one axis per torus dimension");
      for (int a = 0; a < c.n; ++a) c.weights.torus_axes[a] = torus_axis(t[a], "weights.torus[" + std::to_string(a) + "]");
    }
    if (s.has("flat")) {
      const json& f = s.at("flat");
      if (!f.is_array() || static_cast<int>(f.size()) != c.m) config_error("weights.flat", "need one axis per flat dimension");
      for (int a = 0; a < c.m; ++a) c.weights.flat_axes[a] = flat_axis(f[a], "weights.flat[" + std::to_string(a) + "]");
    }
    s.finish();
  }

  auto& sched = c.classify.schedule;
  if (top.has("schedule")) {
    Section s(top.at("schedule"), "schedule");
    sched.r0 = s.number("r0", sched.r0);
    sched.growth = s.number("growth", sched.growth);
    sched.max_doublings = static_cast<int>(s.integer("max_doublings", sched.max_doublings));
    sched.order = static_cast<int>(s.integer("order", sched.order));
    sched.panel_width = s.number("panel_width", sched.panel_width);
    sched.rel_tol = s.number("rel_tol", sched.rel_tol);
    sched.divergence_ratio = s.number("divergence_ratio", sched.divergence_ratio);
    sched.divergence_run = static_cast<int>(s.integer("divergence_run", sched.divergence_run));
    sched.max_evaluations = s.integer("max_evaluations", sched.max_evaluations);
    s.finish();
  }
  rethrow_as_config("schedule", [&] { sched.validate(); });

  auto& leg = c.classify.legendre;
  if (top.has("legendre")) {
    Section s(top.at("legendre"), "legendre");
    leg.gradient_tol = s.number("gradient_tol", leg.gradient_tol);
    leg.escape_radius = s.number("escape_radius", leg.escape_radius);
    leg.max_iterations = static_cast<int>(s.integer("max_iterations", leg.max_iterations));
    leg.step_tol = s.number("step_tol", leg.step_tol);
    s.finish();
  }
  rethrow_as_config("legendre", [&] { leg.validate(); });

  if (top.has("bergman")) {
    Section s(top.at("bergman"), "bergman");
    c.classify.delta = s.number("delta", c.classify.delta);
    s.finish();
  }
  if (!(c.classify.delta > 0)) config_error("bergman.delta", "must be positive");

  if (top.has("kahler")) {
    Section s(top.at("kahler"), "kahler");
    auto& kc = c.kahler;
    kc.samples = static_cast<int>(s.integer("samples", kc.samples));
    kc.lo = s.number("lo", kc.lo);
    kc.hi = s.number("hi", kc.hi);
    kc.closedness_tol = s.number("closedness_tol", kc.closedness_tol);
    kc.moment_tol = s.number("moment_tol", kc.moment_tol);
    kc.dolbeault_tol = s.number("dolbeault_tol", kc.dolbeault_tol);
    if (s.has("odd_coefficients")) {
      const json& o = s.at("odd_coefficients");
      if (!o.is_array()) config_error("kahler.odd_coefficients", "expected a list of [a, b] pairs");
      for (const auto& p : o) {
        auto pair = number_list(p, "kahler.odd_coefficients");
        if (pair.size() != 2) config_error("kahler.odd_coefficients", "expected a list of [a, b] pairs");
        kc.odd_coefficients.emplace_back(pair[0], pair[1]);
      }
      if (static_cast<int>(kc.odd_coefficients.size()) != c.k)
        config_error("kahler.odd_coefficients", "need one pair per odd dimension");
    }
    s.finish();
    if (kc.samples < 1) config_error("kahler.samples", "must be positive");
    if (!(kc.lo < kc.hi)) config_error("kahler", "lo must be below hi");
    if (!(kc.closedness_tol > 0) || !(kc.moment_tol > 0) || !(kc.dolbeault_tol > 0))
      config_error("kahler", "tolerances must be positive");
  }

  if (top.has("output")) {
    Section s(top.at("output"), "output");
    c.output.dir = s.string("dir", c.output.dir);
    c.output.format = s.string("format", c.output.format);
    s.finish();
  }
  if (c.output.format != "json" && c.output.format != "csv" && c.output.format != "both")
    config_error("output.format", "must be json, csv or both");

  if (top.has("seed")) {
    const json& v = top.at("seed");
    if (!v.is_number_unsigned()) config_error("seed", "expected a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  top.finish();

  // Validate the potential eagerly so bad input is a config error.
  if (c.potential.builtin == "F2" && static_cast<int>(c.potential.mu.size()) != c.n + c.m)
    config_error("potential.mu", "needs n + m entries");
  rethrow_as_config("potential", [&] { build_potential(c); });
  return c;
}

std::string canonical_json(const RunConfig& c) {
  json j;
  j["dims"] = {{"n", c.n}, {"m", c.m}, {"k", c.k}};
  json p = json::object();
  if (c.potential.builtin.empty()) {
    p["expression"] = c.potential.expression;
  } else {
    p["builtin"] = c.potential.builtin;
    if (c.potential.builtin == "F2") {
      p["mu"] = c.potential.mu;
      p["epsilon"] = c.potential.epsilon;
    }
  }
  j["potential"] = p;
  j["certify"] = {{"lo", c.certify.lo}, {"hi", c.certify.hi}, {"grid_density", c.certify.grid_density},
                  {"tau", c.certify.tau}};
  j["weights"] = {{"torus", c.weights.torus_axes}, {"flat", c.weights.flat_axes}};
  const auto& s = c.classify.schedule;
  j["schedule"] = {{"r0", s.r0},
                   {"growth", s.growth},
                   {"max_doublings", s.max_doublings},
                   {"order", s.order},
                   {"panel_width", s.panel_width},
                   {"rel_tol", s.rel_tol},
                   {"divergence_ratio", s.divergence_ratio},
                   {"divergence_run", s.divergence_run},
                   {"max_evaluations", s.max_evaluations}};
  const auto& l = c.classify.legendre;
  j["legendre"] = {{"gradient_tol", l.gradient_tol},
                   {"escape_radius", l.escape_radius},
                   {"max_iterations", l.max_iterations},
                   {"step_tol", l.step_tol}};
  j["bergman"] = {{"delta", c.classify.delta}};
  json odd = json::array();
  for (const auto& [a, b] : c.kahler.odd_coefficients) odd.push_back({a, b});
  j["kahler"] = {{"samples", c.kahler.samples},
                 {"lo", c.kahler.lo},
                 {"hi", c.kahler.hi},
                 {"odd_coefficients", odd},
                 {"closedness_tol", c.kahler.closedness_tol},
                 {"moment_tol", c.kahler.moment_tol},
                 {"dolbeault_tol", c.kahler.dolbeault_tol}};
  j["seed"] = c.seed;
  return j.dump();
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BuiltPotential build_potential(const RunConfig& c) {
  if (c.potential.builtin == "F1") return {potential::builtin_F1(c.n, c.m), std::nullopt};
  if (c.potential.builtin == "F2") return {potential::builtin_F2(c.potential.mu, c.potential.epsilon, c.n, c.m), std::nullopt};
  potential::ConvexPotential f = potential::from_expression(c.potential.expression, c.n, c.m);
  auto r = potential::certify_strict_convexity(f, potential::Box{c.certify.lo, c.certify.hi}, c.certify.grid_density,
                                               c.certify.tau);
  if (auto* cert = std::get_if<potential::Certificate>(&r)) {
    f.set_certificate(*cert);
    return {f, std::nullopt};
  }
  return {f, std::get<potential::Refutation>(r)};
}

}  // namespace sq::run
