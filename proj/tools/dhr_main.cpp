// Command-line front end: admissible r values, the r table, (alpha, beta)
// dumps, and polynomial verification and census jobs.

#include "dhr/cli.hpp"
#include "dhr/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Admissible r for almost-prime values of polynomials (DHR weighted sieve)"};
  app.set_help_flag("--help", "print this help");
  std::string mode = "single";
  std::string format = "tsv";
  dhr::JobSpec job;
  app.add_option("--mode", mode, "single, table, alphabeta, verify or census")->capture_default_str();
  app.add_option("--kappa", job.kappa, "sieve dimension");
  app.add_option("--h", job.h, "total degree h");
  app.add_option("--hmax", job.hmax, "largest h (table) or kappa (alphabeta)")->capture_default_str();
  app.add_option("--bits", job.bits, "target precision B (default 12(kappa+10))");
  app.add_option("--vmax", job.vmax, "upper bound for the v search")->capture_default_str();
  app.add_option("--format", format, "tsv, csv or pretty")->capture_default_str();
  app.add_option("--poly", job.poly, "JSON polynomial system (verify, census)");
  app.add_option("--x", job.x, "census range 1..x")->capture_default_str();
  app.add_option("--r", job.r, "census Omega bound (default: the admissible r)");
  app.add_option("--z", job.z, "census: no prime factor below z")->capture_default_str();
  app.add_option("--threads", job.threads, "worker threads (table columns, census chunks)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    job.mode = dhr::parse_mode(mode);
    job.format = dhr::parse_format(format);
  } catch (const dhr::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  return dhr::run(job, std::cout, std::cerr);
}
