#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "weilinv/fqm.hpp"
#include "weilinv/zfield.hpp"

namespace weilinv {

/// An element of SL_2(Z/nZ), entries reduced to [0, n).
struct GroupElement {
  std::int64_t a = 1, b = 0, c = 0, d = 1;
  std::int64_t n = 1;

  /// Reduces the entries and checks ad - bc = 1 mod n.
  static GroupElement make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t n);
  static GroupElement identity(std::int64_t n) { return make(1, 0, 0, 1, n); }
  static GroupElement S(std::int64_t n) { return make(0, -1, 1, 0, n); }
  static GroupElement T(std::int64_t n) { return make(1, 1, 0, 1, n); }

  GroupElement operator*(const GroupElement& o) const;
  bool operator==(const GroupElement&) const = default;
};

/// Factor of a word in the generators: S^power or T^power.
struct WordLetter {
  enum class Generator { S, T };
  Generator generator;
  std::int64_t power;

  bool operator==(const WordLetter&) const = default;
};

/// Writes g as a product of S and T powers (Euclidean reduction of the bottom row).
std::vector<WordLetter> generator_word(const GroupElement& g);
GroupElement evaluate_word(const std::vector<WordLetter>& word, std::int64_t n);

/// The Weil representation of an even-signature module over F_ell, with
/// e(k/N) realized as zeta^k.
class WeilContext {
 public:
  /// Throws ComputationError for odd signature or an inadmissible prime.
  /// `zeta` overrides the default root of unity (used for Galois twists).
  WeilContext(FiniteQuadraticModule module, std::optional<std::uint64_t> ell = std::nullopt,
              std::optional<std::uint64_t> zeta = std::nullopt);

  const FiniteQuadraticModule& module() const { return module_; }
  const ModuleProfile& profile() const { return profile_; }
  const ZetaFieldContext& zeta_field() const { return zf_; }
  const PrimeField& field() const { return zf_.field(); }
  std::uint64_t ell() const { return zf_.ell(); }
  std::int64_t level() const { return module_.level(); }
  std::size_t size() const { return static_cast<std::size_t>(module_.order()); }

  /// sum_x zeta^{-N Q(x)} / |A|, the image of e(-sig/8)/sqrt|A|.
  Residue w() const { return w_; }
  int epsilon() const { return epsilon_; }

  Element element(std::size_t i) const { return module_.element_at(i); }
  std::size_t index_of(const Element& x) const { return static_cast<std::size_t>(module_.index_of(x)); }
  /// Numerator of Q(x_i) over N.
  std::int64_t q_value(std::size_t i) const { return q_values_[i]; }
  /// Numerator of B(x_i, x_j) over N.
  std::int64_t b_value(std::size_t i, std::size_t j) const;
  std::size_t negation(std::size_t i) const { return negation_[i]; }

  std::vector<Residue> apply_T(std::span<const Residue> v) const;
  std::vector<Residue> apply_S(std::span<const Residue> v) const;

  /// sigma_d(w)/w. Throws unless gcd(d, N) = 1.
  Residue chi(std::int64_t d) const;

  /// Column x holds the coefficients of rho(g) e_x.
  FieldMatrix s_matrix() const;
  FieldMatrix t_matrix() const;
  FieldMatrix rho_matrix(const GroupElement& g) const;

 private:
  Residue gauss_constant(std::int64_t twist) const;

  FiniteQuadraticModule module_;
  ModuleProfile profile_;
  ZetaFieldContext zf_;
  Residue w_ = 1;
  int epsilon_ = 1;
  std::vector<std::int64_t> q_values_;
  std::vector<std::size_t> negation_;
  // Coordinates of every element, size() x rank, and the bilinear matrix (diagonal doubled).
  std::vector<std::int64_t> coords_;
  std::vector<std::int64_t> bilinear_;
};

WeilContext make_weil_context(const FiniteQuadraticModule& m, std::optional<std::uint64_t> ell = std::nullopt);

}  // namespace weilinv
