#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "weilinv/fqm.hpp"
#include "weilinv/weil.hpp"
#include "weilinv/zfield.hpp"

namespace weilinv {

/// Representatives of the +-orbits {x, -x} that give nonzero vectors
/// (e_x + eps e_{-x}) / 2; isotropic ones first, each block in index order.
struct SymmetrizedBasis {
  int epsilon = 1;
  /// Element indices (see FiniteQuadraticModule::element_at).
  std::vector<std::uint64_t> reps;
  std::vector<bool> self_paired;
  std::size_t m_prime = 0;
  std::size_t n_prime = 0;

  std::size_t size() const { return reps.size(); }
};

SymmetrizedBasis symmetrized_basis(const FiniteQuadraticModule& m, int epsilon);

/// (1 + rho(S)) on the isotropic symmetrized vectors, written in the full
/// symmetrized basis: (m' + n') x m'.
FieldMatrix build_h_matrix(const WeilContext& ctx, const SymmetrizedBasis& sb);

/// Invariant vectors given by their values at the isotropic representatives
/// `reps`; v(-x) = epsilon v(x). Entries are residues mod `ell`, or integers
/// when `ell` is empty.
struct InvariantBasis {
  ModuleProfile profile;
  int epsilon = 1;
  std::vector<Element> reps;
  std::vector<std::vector<std::int64_t>> vectors;
  std::optional<std::uint64_t> ell;
  std::vector<std::uint64_t> primes;

  std::size_t size() const { return vectors.size(); }
  /// Vector `i` over all of A, in index order; entries reduced mod ell if set.
  std::vector<std::int64_t> expand(const FiniteQuadraticModule& m, std::size_t i) const;
};

struct ModEllOptions {
  std::optional<std::uint64_t> ell;
  /// Check every output vector with verify_invariant.
  bool verify = false;
};

/// Basis of the invariants over F_ell in reduced echelon form over `reps`.
InvariantBasis invariants_mod_ell(const FiniteQuadraticModule& m, const ModEllOptions& options = {});

struct DimensionOptions {
  /// Multiply the dimensions of the p-parts instead of working on A directly.
  bool local = true;
  /// Lower bound for the default primes.
  std::uint64_t prime_min = 0;
  /// Explicit prime; must be admissible for the level.
  std::optional<std::uint64_t> ell;
};

std::size_t dimension(const FiniteQuadraticModule& m, const DimensionOptions& options = {});

struct IntegralOptions {
  std::size_t primes = 3;
  std::size_t max_retries = 3;
  std::uint64_t prime_min = std::uint64_t{1} << 24;
};

/// Primitive integer basis of the invariants, certified modulo two further primes.
InvariantBasis integral_basis(const FiniteQuadraticModule& m, const IntegralOptions& options = {});

/// Tensor products of integral part bases (one basis per entry of p_parts(full)).
InvariantBasis tensor_compose(const FiniteQuadraticModule& full, const std::vector<ModulePart>& parts,
                              const std::vector<InvariantBasis>& bases);

/// Integral basis assembled from the p-parts.
InvariantBasis local_integral_basis(const FiniteQuadraticModule& m, const IntegralOptions& options = {});

/// |G_N|^{-1} sum_g tr rho(g) by enumerating SL_2(Z/N). Throws if |G_N| > bound.
std::size_t character_sum_dimension(const FiniteQuadraticModule& m, std::uint64_t bound = 100000);

/// |G_N|^{-1} sum_g rho(g). Throws if |G_N| > bound.
FieldMatrix invariant_projection(const WeilContext& ctx, std::uint64_t bound = 1000);

bool verify_invariant(const WeilContext& ctx, const std::vector<Residue>& v);

}  // namespace weilinv
