#include "weilinv/zfield.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "weilinv/arith.hpp"
#include "weilinv/errors.hpp"

namespace weilinv {

namespace {

constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

// Number of lazy multiply-adds of reduced operands a row of uint64 values
// can absorb before it must be reduced again.
std::uint64_t lazy_limit(std::uint64_t ell) {
  const std::uint64_t sq = (ell - 1) * (ell - 1);
  if (sq == 0) return std::numeric_limits<std::uint64_t>::max();
  return (std::numeric_limits<std::uint64_t>::max() - (ell - 1)) / sq;
}

// Gauss-Jordan elimination on a row-major copy with delayed reduction.
EchelonForm eliminate(std::vector<std::uint64_t> a, std::size_t rows, std::size_t cols, std::uint64_t ell) {
  const PrimeField field(ell);
  const std::uint64_t limit = lazy_limit(ell);
  std::vector<std::uint64_t> pending(rows, 0);
  auto row = [&](std::size_t r) { return a.data() + r * cols; };
  auto reduce_row = [&](std::size_t r, std::size_t from) {
    std::uint64_t* x = row(r);
    for (std::size_t k = from; k < cols; ++k) x[k] %= ell;
    pending[r] = 0;
  };

  EchelonForm out;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      row(r)[col] %= ell;
      if (row(r)[col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap_ranges(row(pivot), row(pivot) + cols, row(rank));
      std::swap(pending[pivot], pending[rank]);
    }
    reduce_row(rank, col);
    std::uint64_t* p = row(rank);
    const std::uint64_t inv = field.inv(static_cast<Residue>(p[col]));
    for (std::size_t k = col; k < cols; ++k) p[k] = p[k] * inv % ell;

    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::uint64_t* x = row(r);
      const std::uint64_t t = x[col] % ell;
      x[col] = 0;
      if (t == 0) continue;
      if (pending[r] + 1 > limit) reduce_row(r, col + 1);
      const std::uint64_t f = ell - t;
      for (std::size_t k = col + 1; k < cols; ++k) x[k] += f * p[k];
      ++pending[r];
    }
    out.pivots.push_back(col);
    ++rank;
  }

  // Back substitution to reduced form.
  for (std::size_t i = rank; i-- > 0;) {
    const std::size_t pc = out.pivots[i];
    reduce_row(i, pc);
    const std::uint64_t* p = row(i);
    for (std::size_t r = 0; r < i; ++r) {
      std::uint64_t* x = row(r);
      const std::uint64_t t = x[pc] % ell;
      x[pc] = 0;
      if (t == 0) continue;
      if (pending[r] + 1 > limit) reduce_row(r, pc + 1);
      const std::uint64_t f = ell - t;
      for (std::size_t k = pc + 1; k < cols; ++k) x[k] += f * p[k];
      ++pending[r];
    }
  }

  out.rows.reserve(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    std::vector<Residue> r(cols);
    const std::uint64_t* x = row(i);
    for (std::size_t k = 0; k < cols; ++k) r[k] = static_cast<Residue>(x[k] % ell);
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace

PrimeField::PrimeField(std::uint64_t ell) : ell_(ell) {
  if (ell < 2 || ell >= kMaxModulus || !arith::is_prime(ell)) {
    throw ComputationError("field modulus must be a prime below 2^31, got " + std::to_string(ell));
  }
}

Residue PrimeField::reduce(std::int64_t a) const {
  return static_cast<Residue>(arith::mod(a, static_cast<std::int64_t>(ell_)));
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const { return static_cast<Residue>(arith::pow_mod(a, e, ell_)); }

Residue PrimeField::inv(Residue a) const {
  if (a % ell_ == 0) throw ComputationError("division by zero in F_" + std::to_string(ell_));
  return static_cast<Residue>(arith::inv_mod(a, ell_));
}

ZetaFieldContext::ZetaFieldContext(std::uint64_t ell, std::uint64_t n, std::optional<std::uint64_t> zeta)
    : field_(ell), n_(n) {
  if (!is_admissible_prime(ell, n)) {
    throw ComputationError("prime " + std::to_string(ell) + " is not admissible for level " + std::to_string(n));
  }
  const std::uint64_t z = zeta ? *zeta % ell : root_of_unity(ell, n);
  if (arith::pow_mod(z, n, ell) != 1) throw ComputationError("zeta is not an n-th root of unity");
  for (auto p : arith::prime_divisors(n)) {
    if (arith::pow_mod(z, n / p, ell) == 1) throw ComputationError("zeta does not have exact order n");
  }
  zeta_pow_.resize(n);
  std::uint64_t cur = 1;
  for (std::uint64_t j = 0; j < n; ++j) {
    zeta_pow_[j] = static_cast<Residue>(cur);
    cur = cur * z % ell;
  }
}

std::uint64_t sl2_order(std::uint64_t n) {
  std::uint64_t order = n * n * n;
  for (auto p : arith::prime_divisors(n)) order = order / (p * p) * (p * p - 1);
  return order;
}

bool is_admissible_prime(std::uint64_t ell, std::uint64_t n) {
  if (n == 0 || ell < 5 || ell >= kMaxModulus || ell % n != 1 % n || !arith::is_prime(ell)) return false;
  // ell must not divide |SL_2(Z/nZ)| = n^3 prod (p^2 - 1)/p^2.
  for (auto p : arith::prime_divisors(n)) {
    if (p == ell || (p * p - 1) % ell == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> choose_primes(std::uint64_t n, std::size_t count, std::uint64_t min) {
  if (n == 0) throw ComputationError("level must be positive");
  std::vector<std::uint64_t> out;
  const std::uint64_t start = std::max<std::uint64_t>(min, 5);
  std::uint64_t c = start + (1 % n + n - start % n) % n;  // smallest c >= start with c = 1 mod n
  for (std::uint64_t steps = 0; out.size() < count; c += n, ++steps) {
    if (c >= kMaxModulus || steps > 100'000'000) throw ComputationError("no admissible prime found in range");
    if (arith::is_prime(c)) {
      if (!is_admissible_prime(c, n)) throw ComputationError("prime divides the order of SL_2(Z/nZ)");
      out.push_back(c);
    }
  }
  return out;
}

std::uint64_t root_of_unity(std::uint64_t ell, std::uint64_t n) {
  if (n == 0 || (ell - 1) % n != 0) {
    throw ComputationError("F_" + std::to_string(ell) + " has no element of order " + std::to_string(n));
  }
  if (n == 1) return 1;
  const auto primes = arith::prime_divisors(n);
  auto exact_order = [&](std::uint64_t h) {
    if (arith::pow_mod(h, n, ell) != 1) return false;
    return std::all_of(primes.begin(), primes.end(), [&](auto p) { return arith::pow_mod(h, n / p, ell) != 1; });
  };
  std::uint64_t h = 0;
  for (std::uint64_t x = 2; x < ell; ++x) {
    const std::uint64_t cand = arith::pow_mod(x, (ell - 1) / n, ell);
    if (exact_order(cand)) {
      h = cand;
      break;
    }
  }
  if (h == 0) throw ComputationError("no root of unity found");
  // All elements of exact order n are h^k with gcd(k, n) = 1.
  std::uint64_t best = ell;
  std::uint64_t cur = 1;
  for (std::uint64_t k = 1; k <= n; ++k) {
    cur = cur * h % ell;
    if (arith::gcd(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n)) == 1 && cur >= 2) best = std::min(best, cur);
  }
  return best;
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint64_t ell)
    : rows_(rows), cols_(cols), field_(ell), data_(rows * cols, 0) {}

FieldMatrix FieldMatrix::identity(std::size_t n, std::uint64_t ell) {
  FieldMatrix m(n, n, ell);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& other) const {
  if (cols_ != other.rows_ || field_ != other.field_) throw ComputationError("matrix shapes do not match");
  const std::uint64_t ell = modulus();
  const std::uint64_t limit = lazy_limit(ell);
  FieldMatrix out(rows_, other.cols_, ell);
  std::vector<std::uint64_t> acc(other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t pending = 0;
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t a = (*this)(i, k);
      if (a == 0) continue;
      if (++pending >= limit) {
        for (auto& x : acc) x %= ell;
        pending = 1;
      }
      const Residue* b = other.data_.data() + k * other.cols_;
      for (std::size_t j = 0; j < other.cols_; ++j) acc[j] += a * b[j];
    }
    for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) = static_cast<Residue>(acc[j] % ell);
  }
  return out;
}

std::vector<Residue> FieldMatrix::apply(std::span<const Residue> v) const {
  if (v.size() != cols_) throw ComputationError("vector length does not match matrix");
  std::vector<Residue> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < cols_; ++k) s = (s + std::uint64_t{(*this)(i, k)} * v[k]) % modulus();
    out[i] = static_cast<Residue>(s);
  }
  return out;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(cols_, rows_, modulus());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Residue FieldMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s = (s + (*this)(i, i)) % modulus();
  return static_cast<Residue>(s);
}

EchelonForm row_reduce(const FieldMatrix& m) {
  std::vector<std::uint64_t> a(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::copy(m.row(r).begin(), m.row(r).end(), a.begin() + static_cast<std::ptrdiff_t>(r * m.cols()));
  }
  return eliminate(std::move(a), m.rows(), m.cols(), m.modulus());
}

EchelonForm row_reduce(const std::vector<std::vector<Residue>>& vectors, std::size_t cols, std::uint64_t ell) {
  PrimeField check(ell);
  std::vector<std::uint64_t> a;
  a.reserve(vectors.size() * cols);
  for (const auto& v : vectors) {
    if (v.size() != cols) throw ComputationError("vectors have inconsistent lengths");
    a.insert(a.end(), v.begin(), v.end());
  }
  return eliminate(std::move(a), vectors.size(), cols, ell);
}

std::size_t rank(const FieldMatrix& m) { return row_reduce(m).rank(); }

std::vector<std::vector<Residue>> kernel_basis(const FieldMatrix& m) {
  const EchelonForm ech = row_reduce(m);
  const std::uint64_t ell = m.modulus();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivots) is_pivot[c] = true;
  std::vector<std::vector<Residue>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Residue> v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < ech.rank(); ++i) {
      const Residue x = ech.rows[i][f];
      v[ech.pivots[i]] = x == 0 ? 0 : static_cast<Residue>(ell - x);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

RationalVector rational_lift(const std::vector<std::vector<std::uint64_t>>& residues,
                             const std::vector<std::uint64_t>& primes, std::optional<mpz_class> bound) {
  if (residues.size() != primes.size() || primes.empty()) {
    throw ComputationError("rational_lift needs one residue vector per prime");
  }
  const std::size_t len = residues.front().size();
  mpz_class modulus = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (residues[i].size() != len) throw ComputationError("residue vectors have inconsistent lengths");
    for (std::size_t j = 0; j < i; ++j) {
      if (arith::gcd(static_cast<std::int64_t>(primes[i]), static_cast<std::int64_t>(primes[j])) != 1) {
        throw ComputationError("moduli must be pairwise coprime");
      }
    }
    modulus *= mpz_class(static_cast<unsigned long>(primes[i]));
  }
  mpz_class height;
  if (bound) {
    height = *bound;
  } else {
    mpz_class half = modulus / 2;
    mpz_sqrt(height.get_mpz_t(), half.get_mpz_t());
  }

  // CRT basis: e_i = (M / p_i) * ((M / p_i)^{-1} mod p_i).
  std::vector<mpz_class> crt_basis;
  for (auto p : primes) {
    mpz_class mp(static_cast<unsigned long>(p));
    mpz_class cofactor = modulus / mp;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), cofactor.get_mpz_t(), mp.get_mpz_t());
    crt_basis.push_back(cofactor * inv);
  }

  std::vector<mpz_class> nums(len);
  std::vector<mpz_class> dens(len);
  mpz_class common = 1;
  for (std::size_t k = 0; k < len; ++k) {
    mpz_class x = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) x += crt_basis[i] * static_cast<unsigned long>(residues[i][k] % primes[i]);
    x %= modulus;
    mpz_class r0 = modulus, r1 = x, t0 = 0, t1 = 1;
    while (r1 > height) {
      mpz_class q = r0 / r1;
      mpz_class r2 = r0 - q * r1;
      mpz_class t2 = t0 - q * t1;
      r0 = r1;
      r1 = r2;
      t0 = t1;
      t1 = t2;
    }
    mpz_class den = abs(t1);
    mpz_class num = sgn(t1) < 0 ? mpz_class(-r1) : r1;
    mpz_class g = gcd(num, den);
    if (den == 0 || den > height || g != 1) {
      throw ComputationError("rational reconstruction failed for entry " + std::to_string(k) +
                             "; more primes are needed");
    }
    nums[k] = num;
    dens[k] = den;
    common = lcm(common, den);
  }
  RationalVector out;
  out.denominator = common;
  for (std::size_t k = 0; k < len; ++k) out.numerators.push_back(nums[k] * (common / dens[k]));
  return out;
}

std::vector<mpz_class> primitive_integer_vector(const RationalVector& v) {
  mpz_class content = 0;
  for (const auto& n : v.numerators) content = gcd(content, n);
  std::vector<mpz_class> out(v.numerators);
  if (content == 0) return out;
  for (auto& n : out) n /= content;
  return out;
}

}  // namespace weilinv
