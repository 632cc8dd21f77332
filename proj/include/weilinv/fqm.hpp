#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace weilinv {

/// A group element, stored as reduced coordinates 0 <= coords[i] < orders[i].
struct Element {
  std::vector<std::int64_t> coords;

  auto operator<=>(const Element&) const = default;
  bool operator==(const Element&) const = default;
};

std::string to_string(const Element& x);

/// Order, level, Milgram signature and parity of a finite quadratic module.
struct ModuleProfile {
  std::uint64_t order = 1;
  std::int64_t level = 1;
  int signature = 0;
  /// (-1)^(signature/2); empty for odd signature.
  std::optional<int> epsilon = 1;
  std::uint64_t twotorsion = 1;

  bool operator==(const ModuleProfile&) const = default;
};

/// Finite abelian group (Z/d_1 x ... x Z/d_r) with the quadratic form
///
///   Q(x) = (sum_i m_ii x_i^2 + sum_{i<j} m_ij x_i x_j) / D  mod 1.
///
/// The coefficient matrix is stored symmetrically (m_ij == m_ji is the full
/// coefficient of x_i x_j). On construction the form is checked to be
/// well defined and non-degenerate, and D is normalized to the level.
class FiniteQuadraticModule {
 public:
  /// The trivial module.
  FiniteQuadraticModule() = default;

  /// `coefficients` is r x r row-major. Throws ComputationError for
  /// ill-defined or degenerate data.
  FiniteQuadraticModule(std::vector<std::int64_t> orders, std::int64_t denominator,
                        std::vector<std::int64_t> coefficients);

  std::size_t rank() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::uint64_t order() const { return order_; }
  /// Level N; also the common denominator of all stored values.
  std::int64_t level() const { return level_; }
  std::int64_t coefficient(std::size_t i, std::size_t j) const { return coeffs_[i * rank() + j]; }
  const std::vector<std::int64_t>& coefficients() const { return coeffs_; }

  /// Numerator n in [0, N) with Q(x) = n/N.
  std::int64_t q(const Element& x) const;
  /// Numerator n in [0, N) with B(x, y) = Q(x+y) - Q(x) - Q(y) = n/N.
  std::int64_t b(const Element& x, const Element& y) const;

  Element zero() const;
  Element add(const Element& x, const Element& y) const;
  Element negate(const Element& x) const;
  Element scale(const Element& x, std::int64_t k) const;
  Element reduce(Element x) const;

  /// Mixed-radix enumeration, first coordinate most significant, so that
  /// index order equals lexicographic coordinate order.
  Element element_at(std::uint64_t index) const;
  std::uint64_t index_of(const Element& x) const;

  bool operator==(const FiniteQuadraticModule&) const = default;

 private:
  std::vector<std::int64_t> orders_;
  std::int64_t level_ = 1;
  std::vector<std::int64_t> coeffs_;
  std::uint64_t order_ = 1;
};

/// Discriminant module L'/L of an even lattice with Gram matrix `gram` (n x n row-major).
FiniteQuadraticModule from_gram(const std::vector<std::int64_t>& gram, std::size_t n);

FiniteQuadraticModule direct_sum(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b);

/// Same group with Q replaced by -Q.
FiniteQuadraticModule negate(const FiniteQuadraticModule& m);

std::int64_t evaluate_q(const FiniteQuadraticModule& m, const Element& x);
std::int64_t evaluate_b(const FiniteQuadraticModule& m, const Element& x, const Element& y);

/// Counts c_j = #{x : Q(x) = j/N}, j = 0..N-1.
std::vector<std::uint64_t> q_histogram(const FiniteQuadraticModule& m);

/// Signature from the Gauss sum, checked against Milgram's formula to 1e-6 sqrt|A|.
ModuleProfile profile(const FiniteQuadraticModule& m);

/// p-subgroup A_p of a module, with the images of its generators in the full group.
struct ModulePart {
  std::int64_t p = 0;
  FiniteQuadraticModule module;
  std::vector<Element> embedding;
};

std::vector<ModulePart> p_parts(const FiniteQuadraticModule& m);

/// Image of a part element in the full module.
Element embed(const FiniteQuadraticModule& full, const ModulePart& part, const Element& x);

/// All x with Q(x) = 0, in lexicographic order.
std::vector<Element> isotropic_elements(const FiniteQuadraticModule& m);

}  // namespace weilinv
