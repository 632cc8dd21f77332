#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weilinv/fqm.hpp"

namespace weilinv {

/// One Jordan component q^{±k} (odd p or even 2-adic type) or q_t^{±k} (odd 2-adic type).
struct JordanBlock {
  std::int64_t p = 0;
  int exponent = 1;
  int rank = 1;
  int sign = 1;
  /// Trace mod 8 of the diagonal entries; only for odd-type 2-adic blocks.
  std::optional<int> oddity;

  std::int64_t q() const;
  bool odd_type() const { return oddity.has_value(); }

  bool operator==(const JordanBlock&) const = default;
};

struct GenusSymbol {
  std::vector<JordanBlock> blocks;

  bool operator==(const GenusSymbol&) const = default;
};

/// Accepts the canonical `.`-separated form (`2_7^+1.4^+2.8_1^+1`), braces
/// (`2^{+2}4^{+2}`) and unambiguous concatenations. Throws ParseError.
GenusSymbol parse_genus_symbol(std::string_view text);

/// Canonical text: blocks sorted by (p, exponent, type) and joined by `.`.
std::string format_genus_symbol(const GenusSymbol& symbol);

/// Throws ParseError if the block violates the rank/oddity/sign constraints.
void validate_block(const JordanBlock& block);

/// Diagonal entries a_1..a_k in {1,3,5,7} realizing an odd 2-adic block, if any.
std::optional<std::vector<std::int64_t>> odd_two_adic_diagonal(int oddity, int sign, int rank);

FiniteQuadraticModule realize(const JordanBlock& block);
FiniteQuadraticModule realize(const GenusSymbol& symbol);

}  // namespace weilinv
