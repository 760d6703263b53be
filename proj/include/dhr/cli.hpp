#pragma once

// Job description and driver behind the command-line tool.

#include "dhr/polyverify.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace dhr {

enum class Mode { single, table, alphabeta, verify, census };
enum class Format { tsv, csv, pretty };

struct JobSpec {
  Mode mode = Mode::single;
  int kappa = 0;
  int h = 0;
  int hmax = 20;
  // 0: 12 (kappa + 10)
  long bits = 0;
  long vmax = 200;
  Format format = Format::tsv;
  std::string poly;
  std::uint64_t x = 10000;
  // -1: the admissible r of the system
  int r = -1;
  std::uint64_t z = 1;
  unsigned threads = 1;
};

Mode parse_mode(const std::string& s);
Format parse_format(const std::string& s);

// {"factors": [[c0, c1, ...], ...]}, coefficients low to high, integers or
// decimal strings.
PolySystem load_system(const std::string& path);

// Writes results to out and diagnostics to err. Returns 0 when every
// requested value was certified, 1 on computation errors, 2 on bad input.
int run(const JobSpec& job, std::ostream& out, std::ostream& err);

}  // namespace dhr
