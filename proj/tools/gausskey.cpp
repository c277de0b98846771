#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gausskey/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> units;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
};

gausskey::Config load(const Flags& f) {
  gausskey::Config cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw gausskey::Error(gausskey::ErrorCode::IoError, "cannot open config '" + f.config + "'");
    cfg = gausskey::Config::parse(in);
  }
  if (f.seed) cfg.override("seed", std::to_string(*f.seed));
  if (f.out) cfg.override("out", *f.out);
  if (f.units) cfg.override("units", *f.units);
  if (f.trials) cfg.override("trials", std::to_string(*f.trials));
  if (f.threads) cfg.override("threads", std::to_string(*f.threads));
  return cfg;
}

// Runs `body(data_stream)` against the `out` path if configured, else stdout.
template <class Body>
int with_output(const gausskey::Config& cfg, Body body) {
  const std::string path = cfg.get_string("out", "");
  if (path.empty()) return body(std::cout);
  std::ostringstream buffer;
  const int rc = body(buffer);
  if (rc == gausskey::commands::kValidation || rc == gausskey::commands::kInfeasible) return rc;
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: IoError: cannot write '" << path << "'\n";
    return gausskey::commands::kValidation;
  }
  file << buffer.str();
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian secret key agreement under limited public communication"};
  app.require_subcommand(1);
  Flags flags;
  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--out", flags.out, "output path (stdout if omitted)");
    sub->add_option("--units", flags.units, "rate units")->check(CLI::IsMember({"nats", "bits"}));
    sub->add_option("--trials", flags.trials, "number of trials or sampled hashes");
    sub->add_option("--threads", flags.threads, "worker threads");
  };
  CLI::App* region = app.add_subcommand("region", "key rate vs public rate CSV");
  CLI::App* decompose = app.add_subcommand("decompose", "linear-Gaussian decomposition");
  CLI::App* classify = app.add_subcommand("classify", "degradation class and reduction");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo protocol trials");
  CLI::App* oracle = app.add_subcommand("oracle", "exact privacy amplification check");
  for (CLI::App* sub : {region, decompose, classify, simulate, oracle}) add_flags(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gausskey::commands::kValidation;
  }

  namespace cmd = gausskey::commands;
  try {
    const gausskey::Config cfg = load(flags);
    if (*region) return with_output(cfg, [&](std::ostream& o) { return cmd::region(cfg, o, std::cerr); });
    if (*decompose) return with_output(cfg, [&](std::ostream& o) { return cmd::decompose(cfg, o, std::cerr); });
    if (*classify) return with_output(cfg, [&](std::ostream& o) { return cmd::classify(cfg, o, std::cerr); });
    if (*oracle) return with_output(cfg, [&](std::ostream& o) { return cmd::oracle(cfg, o, std::cerr); });
    // simulate: the trial CSV goes to `out`, the summary to stdout.
    const std::string path = cfg.get_string("out", "");
    if (path.empty()) return cmd::simulate(cfg, std::cout, nullptr, std::cerr);
    std::ostringstream csv;
    std::ostringstream summary;
    const int rc = cmd::simulate(cfg, summary, &csv, std::cerr);
    if (rc != cmd::kOk) return rc;
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      std::cerr << "error: IoError: cannot write '" << path << "'\n";
      return cmd::kValidation;
    }
    file << csv.str();
    std::cout << summary.str();
    return rc;
  } catch (const gausskey::Error& e) {
    return cmd::report_error(e, std::cerr);
  }
}
