#include "dhr/cli.hpp"

#include "dhr/errors.hpp"
#include "dhr/optimize.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace dhr {

namespace {

// Table cells are populated for kappa <= h <= 3 kappa.
bool populated(int kappa, int h) { return kappa <= h && h <= 3 * kappa; }

char separator(Format f) { return f == Format::csv ? ',' : '\t'; }

// Context for error messages.
struct Stage {
  int kappa = 0;
  int h = 0;
  std::string name;
  std::string describe() const {
    std::ostringstream os;
    os << "kappa=" << kappa;
    if (h) os << " h=" << h;
    os << " stage=" << name;
    return os.str();
  }
};

OptimizeOptions options_for(const JobSpec& job, std::ostream& err, std::mutex& log_mutex) {
  OptimizeOptions o;
  o.vmax = job.vmax;
  o.on_escalate = [&err, &log_mutex](int kappa, long bits) {
    std::lock_guard<std::mutex> lock(log_mutex);
    err << "kappa=" << kappa << ": escalating precision to " << bits << " bits\n";
  };
  return o;
}

int run_single(const JobSpec& job, std::ostream& out, std::ostream& err) {
  if (job.kappa < 1 || job.h < job.kappa) throw UsageError("single: need 1 <= kappa <= h");
  if (job.kappa == 1) {
    out << admissible_r(job.kappa, job.h) << "\n";
    return 0;
  }
  std::mutex m;
  KappaSolver solver(job.kappa, job.bits, options_for(job, err, m));
  const OptimResult res = solver.solve(job.h);
  if (job.format == Format::pretty) {
    out << "kappa=" << res.kappa << " h=" << res.h << " r=" << res.r << " R_min=" << res.R_min.mid_fixed(20)
        << " v=" << res.v_opt.mid_fixed(10) << " w=" << res.w_opt.mid_fixed(10) << " bits=" << res.bits << "\n";
  } else {
    out << res.r << "\n";
  }
  return 0;
}

int run_table(const JobSpec& job, std::ostream& out, std::ostream& err) {
  if (job.hmax < 1) throw UsageError("table: hmax must be positive");
  const int n = job.hmax;
  // cells[kappa][h]; 0 means not certified
  std::vector<std::map<int, long>> cells(static_cast<std::size_t>(n) + 1);
  std::vector<std::string> failures(static_cast<std::size_t>(n) + 1);
  std::mutex log_mutex;
  auto column = [&](int kappa) {
    Stage st{kappa, 0, "setup"};
    try {
      if (kappa == 1) {
        for (int h = 1; h <= std::min(n, 3); ++h) cells[1][h] = admissible_r(1, h);
        return;
      }
      KappaSolver solver(kappa, job.bits, options_for(job, err, log_mutex));
      for (int h = kappa; h <= std::min(n, 3 * kappa); ++h) {
        st = Stage{kappa, h, "minimize"};
        cells[static_cast<std::size_t>(kappa)][h] = solver.solve(h).r;
      }
    } catch (const Error& e) {
      failures[static_cast<std::size_t>(kappa)] = st.describe() + ": " + e.what();
    }
  };
  const unsigned threads = std::max(1u, job.threads);
  std::vector<int> order;
  // largest columns first, they take longest
  for (int k = n; k >= 1; --k) order.push_back(k);
  std::size_t next = 0;
  std::mutex queue;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int k;
        {
          std::lock_guard<std::mutex> lock(queue);
          if (next == order.size()) return;
          k = order[next++];
        }
        column(k);
      }
    });
  }
  for (auto& th : pool) th.join();

  int status = 0;
  for (int k = 1; k <= n; ++k) {
    if (!failures[static_cast<std::size_t>(k)].empty()) {
      err << "error: " << failures[static_cast<std::size_t>(k)] << "\n";
      status = 1;
    }
  }
  if (job.format == Format::pretty) {
    out << std::setw(4) << "h";
    for (int k = 1; k <= n; ++k) out << std::setw(5) << k;
    out << "\n";
    for (int h = 1; h <= n; ++h) {
      out << std::setw(4) << h;
      for (int k = 1; k <= n; ++k) {
        const auto& col = cells[static_cast<std::size_t>(k)];
        auto it = col.find(h);
        out << std::setw(5) << (populated(k, h) && it != col.end() ? std::to_string(it->second) : "");
      }
      out << "\n";
    }
    return status;
  }
  const char sep = separator(job.format);
  out << "h";
  for (int k = 1; k <= n; ++k) out << sep << k;
  out << "\n";
  for (int h = 1; h <= n; ++h) {
    out << h;
    for (int k = 1; k <= n; ++k) {
      out << sep;
      const auto& col = cells[static_cast<std::size_t>(k)];
      auto it = col.find(h);
      if (populated(k, h) && it != col.end()) out << it->second;
    }
    out << "\n";
  }
  return status;
}

int run_alphabeta(const JobSpec& job, std::ostream& out, std::ostream& err) {
  std::vector<int> kappas;
  if (job.kappa > 0) {
    if (job.kappa < 2) throw UsageError("alphabeta: kappa must be at least 2");
    kappas.push_back(job.kappa);
  } else {
    for (int k = 2; k <= job.hmax; ++k) kappas.push_back(k);
  }
  const char sep = separator(job.format);
  if (job.format != Format::pretty) out << "kappa" << sep << "alpha" << sep << "beta\n";
  for (const int k : kappas) {
    const long bits = job.bits > 0 ? job.bits : Precision::for_kappa(k).bits;
    try {
      SieveContext ctx(k, Precision(bits));
      const CriticalPair cp = compute_critical_pair(ctx);
      if (job.format == Format::pretty) {
        out << "kappa=" << k << " alpha=" << cp.alpha.mid_fixed(20) << " beta=" << cp.beta.mid_fixed(20) << "\n";
      } else {
        out << k << sep << cp.alpha.mid_fixed(20) << sep << cp.beta.mid_fixed(20) << "\n";
      }
    } catch (const Error& e) {
      err << "error: " << Stage{k, 0, "alphabeta"}.describe() << ": " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

int run_verify(const JobSpec& job, std::ostream& out, std::ostream& err) {
  const PolySystem sys = load_system(job.poly);
  for (std::size_t i = 0; i < sys.factors.size(); ++i) {
    const auto irr = irreducible_low_degree(sys.factors[i]);
    if (!irr) {
      err << "warning: factor " << i + 1 << " has degree above 3; irreducibility assumed\n";
    } else if (!*irr) {
      err << "warning: factor " << i + 1 << " (" << poly_to_string(sys.factors[i]) << ") is reducible\n";
    }
  }
  const mpz_class D = delta(sys);
  const auto fp = fixed_prime_divisor(sys);
  const int kappa = sys.kappa();
  const int h = sys.h();
  if (fp) {
    out << "fixed prime divisor " << *fp << "; \xce\x94 = " << D.get_str() << "; \xce\xba=" << kappa << ", h=" << h
        << "\n";
    return 1;
  }
  JobSpec single = job;
  single.kappa = kappa;
  single.h = h;
  std::ostringstream r;
  single.format = Format::tsv;
  const int status = run_single(single, r, err);
  std::string rs = r.str();
  if (!rs.empty() && rs.back() == '\n') rs.pop_back();
  out << "no fixed prime divisor; \xce\x94 = " << D.get_str() << "; \xce\xba=" << kappa << ", h=" << h
      << ", r=" << rs << "\n";
  return status;
}

int run_census(const JobSpec& job, std::ostream& out, std::ostream& err) {
  const PolySystem sys = load_system(job.poly);
  int r = job.r;
  if (r < 0) {
    JobSpec single = job;
    single.kappa = sys.kappa();
    single.h = sys.h();
    single.format = Format::tsv;
    std::ostringstream os;
    run_single(single, os, err);
    r = std::stoi(os.str());
  }
  const CensusResult c = census(sys, job.x, r, job.z, std::max(1u, job.threads));
  if (job.format == Format::pretty) {
    out << "x=" << job.x << " r=" << r << " z=" << job.z << " total=" << c.total
        << " squarefree=" << c.squarefree_count << " rough=" << c.squarefree_rough_count << "\n";
  } else {
    const char sep = separator(job.format);
    out << "x" << sep << "r" << sep << "z" << sep << "total" << sep << "squarefree" << sep << "rough\n";
    out << job.x << sep << r << sep << job.z << sep << c.total << sep << c.squarefree_count << sep
        << c.squarefree_rough_count << "\n";
  }
  return 0;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "single") return Mode::single;
  if (s == "table") return Mode::table;
  if (s == "alphabeta") return Mode::alphabeta;
  if (s == "verify") return Mode::verify;
  if (s == "census") return Mode::census;
  throw UsageError("unknown mode '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "tsv") return Format::tsv;
  if (s == "csv") return Format::csv;
  if (s == "pretty") return Format::pretty;
  throw UsageError("unknown format '" + s + "'");
}

PolySystem load_system(const std::string& path) {
  if (path.empty()) throw UsageError("no polynomial file given (--poly)");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (!j.contains("factors") || !j["factors"].is_array()) throw UsageError(path + ": expected a \"factors\" array");
  std::vector<IntPoly> factors;
  for (const auto& f : j["factors"]) {
    if (!f.is_array()) throw UsageError(path + ": each factor must be an array of coefficients");
    IntPoly p;
    for (const auto& c : f) {
      if (c.is_number_integer()) {
        p.emplace_back(std::to_string(c.get<long long>()));
      } else if (c.is_string()) {
        p.emplace_back(c.get<std::string>());
      } else {
        throw UsageError(path + ": coefficients must be integers");
      }
    }
    factors.push_back(std::move(p));
  }
  return make_system(std::move(factors));
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
  try {
    switch (job.mode) {
      case Mode::single:
        return run_single(job, out, err);
      case Mode::table:
        return run_table(job, out, err);
      case Mode::alphabeta:
        return run_alphabeta(job, out, err);
      case Mode::verify:
        return run_verify(job, out, err);
      case Mode::census:
        return run_census(job, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << Stage{job.kappa, job.h, "run"}.describe() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dhr
