#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace weilinv::arith {

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);

/// Least non-negative residue of a mod m (m > 0).
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
/// Inverse of a modulo m; throws ComputationError when gcd(a, m) != 1.
std::uint64_t inv_mod(std::int64_t a, std::uint64_t m);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n, ascending.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// (p, e) with n = p^e, e >= 1; {0, 0} if n is not a prime power.
std::pair<std::uint64_t, int> prime_power(std::uint64_t n);

/// Jacobi symbol (a/n) for odd positive n.
int jacobi(std::int64_t a, std::int64_t n);

/// Kronecker symbol (a/n) for n > 0.
int kronecker(std::int64_t a, std::int64_t n);

}  // namespace weilinv::arith
