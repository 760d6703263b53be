#include "dhr/polyverify.hpp"

#include "dhr/errors.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace dhr {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 to_mod(const mpz_class& c, u64 m) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), m);
  return r.get_ui();
}

std::vector<u64> reduce(const IntPoly& p, u64 m) {
  std::vector<u64> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = to_mod(p[i], m);
  return r;
}

u64 eval_mod(const std::vector<u64>& c, u64 x, u64 m) {
  u64 acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = mulmod(acc, x, m) + c[i];
    if (acc >= m) acc -= m;
  }
  return acc;
}

// Polynomials over F_p, low to high, trailing zeros trimmed.
using ModPoly = std::vector<u64>;

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly mod_rem(ModPoly a, const ModPoly& b, u64 p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const u64 inv = powmod(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    const u64 factor = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(factor, b[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

ModPoly mod_mulrem(const ModPoly& a, const ModPoly& b, const ModPoly& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  return mod_rem(r, m, p);
}

// Number of distinct roots of g in F_p: deg gcd(g, x^p - x).
u64 root_count_mod_p(ModPoly g, u64 p) {
  trim(g);
  if (g.empty()) return p;
  if (g.size() == 1) return 0;
  ModPoly xp{1};
  ModPoly base = mod_rem({0, 1}, g, p);
  for (u64 e = p; e; e >>= 1) {
    if (e & 1) xp = mod_mulrem(xp, base, g, p);
    base = mod_mulrem(base, base, g, p);
  }
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = (xp[1] + p - 1) % p;
  trim(xp);
  ModPoly a = g;
  ModPoly b = xp;
  while (!b.empty()) {
    ModPoly r = mod_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.size() - 1;
}

constexpr u64 kEnumerateLimit = u64(1) << 20;
constexpr std::size_t kRootBudget = 10'000'000;

u64 rho_prime_power(const IntPoly& G, u64 p, int k) {
  if (p > kEnumerateLimit) {
    const u64 n1 = root_count_mod_p(reduce(G, p), p);
    if (k == 1) return n1;
    const mpz_class lead_disc = G.back() * discriminant(G);
    if (to_mod(lead_disc, p) == 0) throw BudgetError("rho: large prime dividing the discriminant");
    return n1;
  }
  const IntPoly dG = poly_derivative(G);
  const auto gp = reduce(G, p);
  const auto dgp = reduce(dG, p);
  std::vector<u64> roots;
  for (u64 x = 0; x < p; ++x) {
    if (eval_mod(gp, x, p) == 0) roots.push_back(x);
  }
  u64 pj = p;
  for (int j = 1; j < k; ++j) {
    const u64 next = pj * p;
    const auto gn = reduce(G, next);
    std::vector<u64> lifted;
    for (const u64 r : roots) {
      if (eval_mod(dgp, r % p, p) != 0) {
        // simple root: the Newton step gives the unique lift
        mpz_class inv;
        const mpz_class d = mpz_class(eval_mod(reduce(dG, next), r, next));
        const mpz_class mod(static_cast<unsigned long>(next));
        mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
        mpz_class x = mpz_class(static_cast<unsigned long>(r)) -
                      mpz_class(static_cast<unsigned long>(eval_mod(gn, r, next))) * inv;
        lifted.push_back(to_mod(x, next));
      } else {
        for (u64 t = 0; t < p; ++t) {
          const u64 x = r + t * pj;
          if (eval_mod(gn, x, next) == 0) lifted.push_back(x);
        }
      }
      if (lifted.size() > kRootBudget) throw BudgetError("rho: too many roots to enumerate");
    }
    roots = std::move(lifted);
    pj = next;
  }
  return roots.size();
}

std::vector<std::pair<u64, int>> factor_powers(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (const u64 p : factor_u64(n)) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> ps;
  if (n < 2) return ps;
  std::vector<bool> comp(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    ps.push_back(i);
    for (u64 j = i * i; j <= n; j += i) comp[j] = true;
  }
  return ps;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

int degree(const IntPoly& p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

IntPoly poly_derivative(const IntPoly& p) {
  if (p.size() <= 1) return {0};
  IntPoly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<unsigned long>(i);
  return d;
}

mpz_class poly_eval(const IntPoly& p, const mpz_class& x) {
  mpz_class acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

mpz_class content(const IntPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

std::string poly_to_string(const IntPoly& p) {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(p); i >= 0; --i) {
    const mpz_class& c = p[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class a = abs(c);
    if (!first) os << (c < 0 ? " - " : " + ");
    if (first && c < 0) os << "-";
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
  const int m = degree(f);
  const int n = degree(g);
  if (m < 0 || n < 0) return 0;
  const int size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<mpz_class>> M(static_cast<std::size_t>(size), std::vector<mpz_class>(static_cast<std::size_t>(size), 0));
  // rows of shifted coefficients, highest degree first
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i <= m; ++i) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] = f[static_cast<std::size_t>(m - i)];
  }
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i <= n; ++i) M[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + i)] = g[static_cast<std::size_t>(n - i)];
  }
  // Bareiss fraction-free elimination
  int sign = 1;
  mpz_class prev = 1;
  const std::size_t N = static_cast<std::size_t>(size);
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (M[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < N && M[s][k] == 0) ++s;
      if (s == N) return 0;
      std::swap(M[k], M[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      for (std::size_t j = k + 1; j < N; ++j) {
        M[i][j] = M[i][j] * M[k][k] - M[i][k] * M[k][j];
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = M[k][k];
  }
  mpz_class det = M[N - 1][N - 1];
  return sign > 0 ? det : mpz_class(-det);
}

mpz_class discriminant(const IntPoly& f) {
  const int d = degree(f);
  if (d < 1) throw UsageError("discriminant: constant polynomial");
  mpz_class r = resultant(f, poly_derivative(f));
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f[static_cast<std::size_t>(d)].get_mpz_t());
  if ((d * (d - 1) / 2) % 2 == 1) r = -r;
  return r;
}

std::optional<bool> irreducible_low_degree(const IntPoly& f) {
  const int d = degree(f);
  if (d < 1) return false;
  if (d > 3) return std::nullopt;
  if (content(f) != 1) return false;
  if (d == 1) return true;
  // a factor of degree 1 means a rational root a/b with a | f_0 and b | f_d
  const mpz_class f0 = abs(f[0]);
  if (f0 == 0) return false;
  const mpz_class fd = abs(f[static_cast<std::size_t>(d)]);
  auto divisors = [](const mpz_class& n) {
    std::vector<mpz_class> ds;
    for (mpz_class i = 1; i * i <= n; ++i) {
      if (n % i == 0) {
        ds.push_back(i);
        if (i * i != n) ds.push_back(n / i);
      }
    }
    return ds;
  };
  for (const auto& a : divisors(f0)) {
    for (const auto& b : divisors(fd)) {
      for (int s : {1, -1}) {
        // b^d f(s a / b) = sum f_i (s a)^i b^{d-i}
        mpz_class acc = 0;
        mpz_class ap = 1;
        for (int i = 0; i <= d; ++i) {
          mpz_class bp;
          mpz_pow_ui(bp.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(d - i));
          acc += f[static_cast<std::size_t>(i)] * ap * bp;
          ap *= s * a;
        }
        if (acc == 0) return false;
      }
    }
  }
  return true;
}

int PolySystem::h() const {
  int s = 0;
  for (const auto& f : factors) s += degree(f);
  return s;
}

IntPoly PolySystem::product() const {
  IntPoly p{1};
  for (const auto& f : factors) p = poly_mul(p, f);
  return p;
}

PolySystem make_system(std::vector<IntPoly> factors) {
  if (factors.empty()) throw UsageError("polynomial system has no factors");
  for (auto& f : factors) {
    if (degree(f) < 1) throw UsageError("polynomial system has a constant factor");
    f.resize(static_cast<std::size_t>(degree(f)) + 1);
  }
  return PolySystem{std::move(factors)};
}

std::uint64_t rho(const IntPoly& G, std::uint64_t q) {
  if (q == 0) throw UsageError("rho: modulus must be positive");
  if (q >= (u64(1) << 62)) throw BudgetError("rho: modulus too large");
  u64 total = 1;
  for (const auto& [p, k] : factor_powers(q)) {
    total *= rho_prime_power(G, p, k);
    if (total == 0) return 0;
  }
  return total;
}

std::uint64_t rho_bruteforce(const IntPoly& G, std::uint64_t q) {
  const auto g = reduce(G, q);
  u64 count = 0;
  for (u64 x = 0; x < q; ++x) {
    if (eval_mod(g, x, q) == 0) ++count;
  }
  return count;
}

mpz_class delta(const PolySystem& sys) {
  mpz_class d = 6;
  const std::size_t k = sys.factors.size();
  for (std::size_t i = 0; i < k; ++i) {
    const mpz_class disc = discriminant(sys.factors[i]);
    if (disc == 0) throw InvalidSystemError("factor " + std::to_string(i + 1) + " has a repeated root");
    d *= abs(disc);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const mpz_class res = resultant(sys.factors[i], sys.factors[j]);
      if (res == 0) {
        throw InvalidSystemError("factors " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                 " share a root");
      }
      // ordered pairs: (i, j) and (j, i) have the same |Res|
      d *= res * res;
    }
  }
  return d;
}

std::optional<std::uint64_t> fixed_prime_divisor(const PolySystem& sys) {
  const IntPoly H = sys.product();
  const mpz_class c = content(H);
  if (!c.fits_ulong_p()) throw BudgetError("fixed_prime_divisor: content too large to factor");
  u64 bound = static_cast<u64>(sys.h());
  const auto cf = factor_u64(c.get_ui());
  if (!cf.empty()) bound = std::max(bound, cf.back());
  // a prime above h that does not divide the content has rho(p) <= h < p
  for (const u64 p : primes_up_to(std::min<u64>(bound, static_cast<u64>(sys.h())))) {
    if (rho(H, p) == p) return p;
  }
  for (const u64 p : cf) {
    if (p > static_cast<u64>(sys.h())) return p;
  }
  return std::nullopt;
}

mpq_class singular_product_exact(const PolySystem& sys, std::uint64_t P) {
  const IntPoly H = sys.product();
  const mpz_class D = delta(sys);
  mpq_class prod = 1;
  for (const u64 p : primes_up_to(P)) {
    const u64 p2 = p * p;
    const u64 r = rho(H, p2);
    if (r >= p2) throw ComputeError("singular_product: factor at p = " + std::to_string(p) + " is not positive");
    if (mpz_divisible_ui_p(D.get_mpz_t(), p) == 0 && r > 2 * static_cast<u64>(sys.h())) {
      throw ComputeError("singular_product: rho(p^2) exceeds 2h at p = " + std::to_string(p));
    }
    prod *= mpq_class(mpz_class(static_cast<unsigned long>(p2 - r)), mpz_class(static_cast<unsigned long>(p2)));
    prod.canonicalize();
  }
  return prod;
}

Interval singular_product(const PolySystem& sys, std::uint64_t P, Precision prec) {
  return Interval(singular_product_exact(sys, P), prec);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // these bases are deterministic below 3.3e24
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> factor_u64(std::uint64_t n) {
  std::vector<u64> out;
  if (n <= 1) return out;
  for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

CensusResult census(const PolySystem& sys, std::uint64_t x, int r, std::uint64_t z, unsigned threads) {
  if (threads == 0) threads = 1;
  const mpz_class limit = mpz_class(1) << 62;
  auto work = [&](u64 from, u64 to, CensusResult& out) {
    for (u64 n = from; n <= to; ++n) {
      const mpz_class N(static_cast<unsigned long>(n));
      std::vector<u64> primes;
      bool zero = false;
      bool squarefree = true;
      for (const auto& f : sys.factors) {
        const mpz_class v = abs(poly_eval(f, N));
        if (v == 0) {
          zero = true;
          break;
        }
        if (v >= limit) throw BudgetError("census: |H_i(n)| exceeds 2^62 at n = " + std::to_string(n));
        const auto fs = factor_u64(v.get_ui());
        primes.insert(primes.end(), fs.begin(), fs.end());
      }
      if (zero) continue;
      ++out.total;
      std::sort(primes.begin(), primes.end());
      if (std::adjacent_find(primes.begin(), primes.end()) != primes.end()) squarefree = false;
      if (!squarefree || static_cast<long>(primes.size()) > r) continue;
      ++out.squarefree_count;
      if (primes.empty() || primes.front() >= z) ++out.squarefree_rough_count;
    }
  };
  std::vector<CensusResult> parts(threads);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const u64 chunk = (x + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const u64 from = 1 + t * chunk;
    const u64 to = std::min<u64>(x, (t + 1) * chunk);
    if (from > to) continue;
    pool.emplace_back([&, t, from, to] {
      try {
        work(from, to, parts[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  CensusResult total;
  for (const auto& p : parts) {
    total.total += p.total;
    total.squarefree_count += p.squarefree_count;
    total.squarefree_rough_count += p.squarefree_rough_count;
  }
  return total;
}

}  // namespace dhr
