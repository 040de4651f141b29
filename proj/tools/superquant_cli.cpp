// Command-line front end. Talks to the library only through the C API.
#include <superquant/superquant.h>

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kConfigError = SQ_EXIT_CONFIG_ERROR;

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

int emit(sq_result* r, const std::string& name, const std::string& dir, const std::string& format, bool has_csv) {
  const int code = sq_result_exit_code(r);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << dir << ": " << ec.message() << "\n";
    return kConfigError;
  }
  bool ok = true;
  if (format == "json" || format == "both" || !has_csv) ok = ok && write_file(fs::path(dir) / (name + ".json"), sq_result_json(r));
  if (has_csv && (format == "csv" || format == "both")) ok = ok && write_file(fs::path(dir) / (name + ".csv"), sq_result_csv(r));
  if (!ok) {
    std::cerr << "cannot write reports to " << dir << "\n";
    return kConfigError;
  }
  std::cout << sq_result_summary(r) << "\n";
  return code;
}

int run_config_command(const std::string& command, const RunOptions& o) {
  std::ifstream in(o.config_path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot read " << o.config_path << "\n";
    return kConfigError;
  }
  std::stringstream text;
  text << in.rdbuf();

  sq_config* cfg = nullptr;
  if (sq_config_parse(text.str().c_str(), &cfg) != SQ_OK) {
    std::cerr << "config error: " << sq_last_error() << "\n";
    return kConfigError;
  }
  if (o.seed) sq_config_set_seed(cfg, *o.seed);
  const std::string dir = o.out_dir.empty() ? sq_config_output_dir(cfg) : o.out_dir;
  const std::string format = o.format.empty() ? sq_config_output_format(cfg) : o.format;

  sq_result* r = nullptr;
  const sq_status s = sq_run(command.c_str(), cfg, o.threads, &r);
  sq_config_free(cfg);
  if (s != SQ_OK) {
    std::cerr << "error: " << sq_last_error() << "\n";
    return s == SQ_ERR_CONFIG || s == SQ_ERR_INVALID_ARGUMENT ? kConfigError : SQ_EXIT_CHECK_FAILURE;
  }
  const int code = emit(r, command, dir, format, command == "classify");
  sq_result_free(r);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superquant: quantization of Abelian Lie supergroups"};
  app.set_version_flag("--version", std::string(sq_version()));
  app.require_subcommand(1);

  RunOptions opts;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
    sub->add_option("--format", opts.format, "report format (overrides output.format)")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "sampling seed (overrides seed)");
  };
  CLI::App* verify = app.add_subcommand("verify-kahler", "build the super Kahler form and verify it");
  CLI::App* classify = app.add_subcommand("classify", "decide which irreducible representations occur");
  CLI::App* model = app.add_subcommand("model-check", "check that the doubled space is a model");
  for (CLI::App* sub : {verify, classify, model}) add_run_flags(sub);

  std::string element;
  int k = 1;
  CLI::App* berezin = app.add_subcommand("berezin-eval", "print the top coefficient of a Grassmann element");
  berezin->add_option("element", element, "element text, e.g. \"5*ztop + 3*zeta1\"")->required();
  berezin->add_option("--k", k, "number of generator pairs")->check(CLI::Range(0, 16));

  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  for (CLI::App* sub : {verify, classify, model})
    if (sub->parsed()) return run_config_command(sub->get_name(), opts);

  sq_result* r = nullptr;
  if (berezin->parsed()) {
    if (sq_berezin_eval(element.c_str(), k, &r) != SQ_OK) {
      std::cerr << "error: " << sq_last_error() << "\n";
      return SQ_EXIT_CHECK_FAILURE;
    }
    const int code = sq_result_exit_code(r);
    (code == 0 ? std::cout : std::cerr) << sq_result_summary(r) << "\n";
    sq_result_free(r);
    return code;
  }
  if (selftest->parsed()) {
    if (sq_selftest(&r) != SQ_OK) {
      std::cerr << "error: " << sq_last_error() << "\n";
      return SQ_EXIT_CHECK_FAILURE;
    }
    const int code = sq_result_exit_code(r);
    if (code != 0) std::cerr << sq_result_json(r);
    std::cout << sq_result_summary(r) << "\n";
    sq_result_free(r);
    return code;
  }
  return kConfigError;
}
