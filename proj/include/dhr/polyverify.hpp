#pragma once

// Exact number theory for H = H_1 ... H_kappa: root counts modulo q, the
// constant Delta, fixed prime divisors, singular series partial products,
// and a brute-force census of square-free almost-prime values.

#include "dhr/interval.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dhr {

// Integer polynomial, coefficients low to high.
using IntPoly = std::vector<mpz_class>;

int degree(const IntPoly& p);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_derivative(const IntPoly& p);
mpz_class poly_eval(const IntPoly& p, const mpz_class& x);
mpz_class content(const IntPoly& p);
std::string poly_to_string(const IntPoly& p);

// Sylvester-matrix resultant (Bareiss elimination).
mpz_class resultant(const IntPoly& f, const IntPoly& g);
// (-1)^{d(d-1)/2} Res(f, f') / lc(f); 1 for linear f.
mpz_class discriminant(const IntPoly& f);

// true / false for degree <= 3 (rational roots and content), nullopt above.
std::optional<bool> irreducible_low_degree(const IntPoly& f);

struct PolySystem {
  std::vector<IntPoly> factors;

  int kappa() const { return static_cast<int>(factors.size()); }
  // h = sum of degrees
  int h() const;
  IntPoly product() const;
};

// Rejects constant factors and an empty list with UsageError.
PolySystem make_system(std::vector<IntPoly> factors);

// #{nu mod q : G(nu) = 0 mod q}; q < 2^62.
std::uint64_t rho(const IntPoly& G, std::uint64_t q);
// Same by exhaustive enumeration, for testing.
std::uint64_t rho_bruteforce(const IntPoly& G, std::uint64_t q);

// 6 prod |disc H_i| prod_{i != j} |Res(H_i, H_j)|; InvalidSystemError if any vanishes.
mpz_class delta(const PolySystem& sys);

// Least prime p with rho(H, p) = p.
std::optional<std::uint64_t> fixed_prime_divisor(const PolySystem& sys);

// prod_{p <= P} (1 - rho(H, p^2)/p^2), exactly. ComputeError naming p when a
// factor is not positive or rho(p^2) > 2h for p not dividing Delta.
mpq_class singular_product_exact(const PolySystem& sys, std::uint64_t P);
Interval singular_product(const PolySystem& sys, std::uint64_t P, Precision prec);

struct CensusResult {
  // n <= x with H(n) != 0
  std::uint64_t total = 0;
  // of those, mu^2(H(n)) = 1 and Omega(H(n)) <= r
  std::uint64_t squarefree_count = 0;
  // of those, no prime factor below z
  std::uint64_t squarefree_rough_count = 0;
};

// Factors every |H_i(n)| separately; BudgetError past 2^62.
CensusResult census(const PolySystem& sys, std::uint64_t x, int r, std::uint64_t z, unsigned threads = 1);

// 64-bit helpers used by the census.
bool is_prime_u64(std::uint64_t n);
// Prime factors with multiplicity, ascending.
std::vector<std::uint64_t> factor_u64(std::uint64_t n);

}  // namespace dhr
