#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace weilinv {

/// Residues modulo a prime below 2^31.
using Residue = std::uint32_t;

/// Arithmetic in F_ell.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t ell);

  std::uint64_t modulus() const { return ell_; }
  Residue reduce(std::int64_t a) const;
  Residue add(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + b) % ell_); }
  Residue sub(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t{a} + ell_ - b) % ell_); }
  Residue neg(Residue a) const { return a == 0 ? 0 : static_cast<Residue>(ell_ - a); }
  Residue mul(Residue a, Residue b) const { return static_cast<Residue>(std::uint64_t{a} * b % ell_); }
  Residue pow(Residue a, std::uint64_t e) const;
  /// Throws ComputationError for 0.
  Residue inv(Residue a) const;

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint64_t ell_;
};

/// F_ell together with a fixed element of exact multiplicative order n,
/// standing in for e(1/n).
class ZetaFieldContext {
 public:
  /// Uses root_of_unity(ell, n) unless `zeta` is given; validates all invariants.
  ZetaFieldContext(std::uint64_t ell, std::uint64_t n, std::optional<std::uint64_t> zeta = std::nullopt);

  const PrimeField& field() const { return field_; }
  std::uint64_t ell() const { return field_.modulus(); }
  std::uint64_t n() const { return n_; }
  Residue zeta() const { return zeta_pow_.size() > 1 ? zeta_pow_[1] : 1; }
  /// zeta^k for any integer k.
  Residue zeta_power(std::int64_t k) const {
    const auto n = static_cast<std::int64_t>(n_);
    const std::int64_t r = k % n;
    return zeta_pow_[static_cast<std::size_t>(r < 0 ? r + n : r)];
  }

 private:
  PrimeField field_;
  std::uint64_t n_;
  std::vector<Residue> zeta_pow_;
};

/// |SL_2(Z/nZ)| = n^3 prod_{p | n} (1 - 1/p^2).
std::uint64_t sl2_order(std::uint64_t n);

/// The `count` smallest primes ell >= max(min, 5) with ell = 1 mod n.
std::vector<std::uint64_t> choose_primes(std::uint64_t n, std::size_t count = 1, std::uint64_t min = 0);

/// True if ell is prime, ell = 1 mod n, ell >= 5 and ell < 2^31.
bool is_admissible_prime(std::uint64_t ell, std::uint64_t n);

/// Smallest residue >= 2 of exact order n (1 for n = 1). Throws if ell != 1 mod n.
std::uint64_t root_of_unity(std::uint64_t ell, std::uint64_t n);

/// Dense row-major matrix over F_ell.
class FieldMatrix {
 public:
  FieldMatrix(std::size_t rows, std::size_t cols, std::uint64_t ell);

  static FieldMatrix identity(std::size_t n, std::uint64_t ell);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PrimeField& field() const { return field_; }
  std::uint64_t modulus() const { return field_.modulus(); }

  Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  FieldMatrix operator*(const FieldMatrix& other) const;
  std::vector<Residue> apply(std::span<const Residue> v) const;
  FieldMatrix transpose() const;
  Residue trace() const;

  bool operator==(const FieldMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  PrimeField field_;
  std::vector<Residue> data_;
};

/// Reduced row echelon form: the nonzero rows and their pivot columns.
struct EchelonForm {
  std::vector<std::size_t> pivots;
  std::vector<std::vector<Residue>> rows;

  std::size_t rank() const { return pivots.size(); }
};

EchelonForm row_reduce(const FieldMatrix& m);

/// Reduced row echelon form of the span of the given vectors (all of length `cols`).
EchelonForm row_reduce(const std::vector<std::vector<Residue>>& vectors, std::size_t cols, std::uint64_t ell);

std::size_t rank(const FieldMatrix& m);

/// Kernel basis read off the reduced echelon form: one vector per free
/// column (ascending) with a 1 there. Length cols - rank.
std::vector<std::vector<Residue>> kernel_basis(const FieldMatrix& m);

/// Vector of rationals over a common positive denominator.
struct RationalVector {
  std::vector<mpz_class> numerators;
  mpz_class denominator = 1;

  bool operator==(const RationalVector&) const = default;
};

/// Chinese remaindering of per-prime residue vectors followed by entrywise
/// rational reconstruction with |num|, den <= bound (default floor(sqrt(M/2)),
/// M the product of primes). Throws ComputationError when an entry has no
/// such reconstruction.
RationalVector rational_lift(const std::vector<std::vector<std::uint64_t>>& residues,
                             const std::vector<std::uint64_t>& primes,
                             std::optional<mpz_class> bound = std::nullopt);

/// Clears denominators and divides by the content.
std::vector<mpz_class> primitive_integer_vector(const RationalVector& v);

}  // namespace weilinv
