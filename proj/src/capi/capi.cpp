#include "superquant/superquant.h"

#include "bergman/bergman.hpp"
#include "common/error.hpp"
#include "grassmann/element.hpp"
#include "potential/potential.hpp"
#include "run/commands.hpp"
#include "run/config.hpp"

#include <new>
#include <string>

struct sq_config {
  sq::run::RunConfig config;
  std::string hash;
};

struct sq_result {
  sq::run::RunResult result;
};

struct sq_element {
  sq::grassmann::Element element;
  std::string text;
  std::string berezin;

  explicit sq_element(sq::grassmann::Element e)
      : element(std::move(e)),
        text(sq::grassmann::print_element(element)),
        berezin(sq::grassmann::to_string(sq::grassmann::berezin_top(element))) {}
};

struct sq_potential {
  sq::potential::ConvexPotential f;
};

namespace {

thread_local std::string last_error;

sq_status status_of(sq::ErrorKind k) { return static_cast<sq_status>(static_cast<int>(k) + 1); }

sq_status fail(sq_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

/// Runs fn, translating exceptions into status codes and the error message.
template <class Fn>
sq_status guard(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return SQ_OK;
  } catch (const sq::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SQ_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(SQ_ERR_INTERNAL, e.what());
  }
}

#define SQ_REQUIRE(ptr) \
  if (!(ptr)) return fail(SQ_ERR_NULL_ARGUMENT, #ptr " is null")

sq_status wrap_result(sq::run::RunResult r, sq_result** out) {
  *out = new sq_result{std::move(r)};
  return SQ_OK;
}

}  // namespace

extern "C" {

const char* sq_version(void) { return sq::run::kToolVersion; }
const char* sq_last_error(void) { return last_error.c_str(); }

sq_status sq_config_parse(const char* text, sq_config** out) {
  SQ_REQUIRE(text);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto c = sq::run::parse_config(text);
    auto hash = sq::run::fnv1a64(sq::run::canonical_json(c));
    *out = new sq_config{std::move(c), std::move(hash)};
  });
}

sq_status sq_config_set_seed(sq_config* cfg, uint64_t seed) {
  SQ_REQUIRE(cfg);
  return guard([&] {
    cfg->config.seed = seed;
    cfg->hash = sq::run::fnv1a64(sq::run::canonical_json(cfg->config));
  });
}

const char* sq_config_output_dir(const sq_config* cfg) { return cfg ? cfg->config.output.dir.c_str() : ""; }
const char* sq_config_output_format(const sq_config* cfg) { return cfg ? cfg->config.output.format.c_str() : ""; }
const char* sq_config_hash(const sq_config* cfg) { return cfg ? cfg->hash.c_str() : ""; }
void sq_config_free(sq_config* cfg) { delete cfg; }

sq_status sq_run(const char* command, const sq_config* cfg, int threads, sq_result** out) {
  SQ_REQUIRE(command);
  SQ_REQUIRE(cfg);
  SQ_REQUIRE(out);
  *out = nullptr;
  if (threads < 1) return fail(SQ_ERR_INVALID_ARGUMENT, "threads must be at least 1");
  return guard([&] {
    const std::string cmd = command;
    sq::run::RunResult r;
    if (cmd == "verify-kahler") {
      r = sq::run::cmd_verify_kahler(cfg->config);
    } else if (cmd == "classify") {
      r = sq::run::cmd_classify(cfg->config, threads);
    } else if (cmd == "model-check") {
      r = sq::run::cmd_model_check(cfg->config, threads);
    } else {
      throw sq::Error(sq::ErrorKind::InvalidArgument, "unknown command '" + cmd + "'");
    }
    wrap_result(std::move(r), out);
  });
}

sq_status sq_berezin_eval(const char* element, int k, sq_result** out) {
  SQ_REQUIRE(element);
  SQ_REQUIRE(out);
  return guard([&] { wrap_result(sq::run::cmd_berezin_eval(element, k), out); });
}

sq_status sq_selftest(sq_result** out) {
  SQ_REQUIRE(out);
  return guard([&] { wrap_result(sq::run::cmd_selftest(), out); });
}

int sq_result_exit_code(const sq_result* r) { return r ? r->result.exit_code : SQ_EXIT_CONFIG_ERROR; }
const char* sq_result_json(const sq_result* r) { return r ? r->result.json.c_str() : ""; }
const char* sq_result_csv(const sq_result* r) { return r ? r->result.csv.c_str() : ""; }
const char* sq_result_summary(const sq_result* r) { return r ? r->result.summary.c_str() : ""; }
void sq_result_free(sq_result* r) { delete r; }

sq_status sq_element_parse(const char* text, int k, sq_element** out) {
  SQ_REQUIRE(text);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_element(sq::grassmann::parse_element(text, k)); });
}

sq_status sq_element_multiply(const sq_element* a, const sq_element* b, sq_element** out) {
  SQ_REQUIRE(a);
  SQ_REQUIRE(b);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_element(sq::grassmann::multiply(a->element, b->element)); });
}

sq_status sq_element_add(const sq_element* a, const sq_element* b, sq_element** out) {
  SQ_REQUIRE(a);
  SQ_REQUIRE(b);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_element(a->element + b->element); });
}

sq_status sq_element_star(const sq_element* a, sq_element** out) {
  SQ_REQUIRE(a);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_element(sq::grassmann::star_element(a->element)); });
}

sq_status sq_element_derivation(const sq_element* a, int slot, sq_element** out) {
  SQ_REQUIRE(a);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_element(sq::grassmann::derivation(slot, a->element)); });
}

const char* sq_element_text(const sq_element* a) { return a ? a->text.c_str() : ""; }
const char* sq_element_berezin(const sq_element* a) { return a ? a->berezin.c_str() : ""; }
int sq_element_k(const sq_element* a) { return a ? a->element.k() : -1; }
void sq_element_free(sq_element* a) { delete a; }

sq_status sq_potential_parse(const char* text, int n, int m, sq_potential** out) {
  SQ_REQUIRE(text);
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_potential{sq::potential::from_expression(text, n, m)}; });
}

sq_status sq_potential_f1(int n, int m, sq_potential** out) {
  SQ_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new sq_potential{sq::potential::builtin_F1(n, m)}; });
}

sq_status sq_potential_f2(const double* mu, size_t len, double epsilon, int n, int m, sq_potential** out) {
  SQ_REQUIRE(out);
  *out = nullptr;
  if (len > 0) SQ_REQUIRE(mu);
  return guard([&] {
    *out = new sq_potential{sq::potential::builtin_F2(std::span<const double>(mu, len), epsilon, n, m)};
  });
}

int sq_potential_dim(const sq_potential* p) { return p ? p->f.dim() : -1; }

sq_status sq_potential_eval(const sq_potential* p, const double* x, size_t len, double* value, double* gradient,
                            double* hessian) {
  SQ_REQUIRE(p);
  SQ_REQUIRE(x);
  if (len != static_cast<size_t>(p->f.dim()))
    return fail(SQ_ERR_DIMENSION, "point has " + std::to_string(len) + " entries, expected " + std::to_string(p->f.dim()));
  return guard([&] {
    const auto jet = sq::potential::eval_jet2(p->f, std::span<const double>(x, len));
    const int d = p->f.dim();
    if (value) *value = jet.value;
    if (gradient)
      for (int i = 0; i < d; ++i) gradient[i] = jet.gradient[i];
    if (hessian)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) hessian[i * d + j] = jet.hessian(i, j);
  });
}

sq_status sq_potential_certify(sq_potential* p, double lo, double hi, int grid_density, double tau, int* certified,
                               double* witness) {
  SQ_REQUIRE(p);
  SQ_REQUIRE(certified);
  return guard([&] {
    auto r = sq::potential::certify_strict_convexity(p->f, sq::potential::Box{lo, hi}, grid_density, tau);
    if (auto* cert = std::get_if<sq::potential::Certificate>(&r)) {
      p->f.set_certificate(*cert);
      *certified = 1;
      return;
    }
    *certified = 0;
    const auto& ref = std::get<sq::potential::Refutation>(r);
    if (witness)
      for (std::size_t i = 0; i < ref.witness.size(); ++i) witness[i] = ref.witness[i];
  });
}

sq_status sq_weighted_norm_integral(const sq_potential* p, const double* lambda, size_t len, int* verdict,
                                    double* log_value) {
  SQ_REQUIRE(p);
  SQ_REQUIRE(verdict);
  SQ_REQUIRE(log_value);
  if (len > 0) SQ_REQUIRE(lambda);
  return guard([&] {
    const auto v = sq::bergman::weighted_norm_integral(std::span<const double>(lambda, len), p->f);
    *verdict = static_cast<int>(v.kind);
    *log_value = v.log_value;
  });
}

void sq_potential_free(sq_potential* p) { delete p; }

}  // extern "C"
