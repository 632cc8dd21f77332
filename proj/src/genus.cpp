#include "weilinv/genus.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "weilinv/arith.hpp"
#include "weilinv/errors.hpp"

namespace weilinv {

namespace {

auto block_key(const JordanBlock& b) { return std::make_tuple(b.p, b.exponent, b.odd_type()); }

void sort_blocks(std::vector<JordanBlock>& blocks) {
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const JordanBlock& a, const JordanBlock& b) { return block_key(a) < block_key(b); });
}

// Recursive-descent parser that returns every complete parse, so that
// concatenated input can be checked for ambiguity.
class SymbolParser {
 public:
  explicit SymbolParser(std::string_view text) : text_(text) {}

  std::vector<std::vector<JordanBlock>> parse_all() {
    std::vector<JordanBlock> prefix;
    results_.clear();
    parse_from(0, prefix, false);
    return results_;
  }

  std::string error() const { return error_.empty() ? "invalid genus symbol" : error_; }

 private:
  static constexpr std::size_t kMaxResults = 4;

  bool at(std::size_t pos, char c) const { return pos < text_.size() && text_[pos] == c; }

  std::size_t digits_end(std::size_t pos) const {
    while (pos < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos]))) ++pos;
    return pos;
  }

  void fail(std::size_t pos, const std::string& what) {
    if (pos >= error_pos_) {
      error_pos_ = pos;
      error_ = what + " at position " + std::to_string(pos);
    }
  }

  static std::optional<std::int64_t> to_int(std::string_view digits) {
    if (digits.empty() || digits.size() > 12) return std::nullopt;
    std::int64_t v = 0;
    for (char c : digits) v = v * 10 + (c - '0');
    return v;
  }

  void parse_from(std::size_t pos, std::vector<JordanBlock>& prefix, bool after_dot) {
    if (results_.size() >= kMaxResults) return;
    if (pos == text_.size()) {
      if (after_dot) {
        fail(pos, "expected a block after '.'");
        return;
      }
      results_.push_back(prefix);
      return;
    }
    if (!prefix.empty() && !after_dot && at(pos, '.')) {
      parse_from(pos + 1, prefix, true);
      return;
    }
    // q
    const std::size_t q_end = digits_end(pos);
    if (q_end == pos) {
      fail(pos, "expected a prime power");
      return;
    }
    const auto q = to_int(text_.substr(pos, q_end - pos));
    if (!q) {
      fail(pos, "number out of range");
      return;
    }
    std::size_t cur = q_end;
    std::optional<int> oddity;
    if (at(cur, '_')) {
      ++cur;
      const bool brace = at(cur, '{');
      if (brace) ++cur;
      if (cur >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[cur]))) {
        fail(cur, "expected an oddity digit");
        return;
      }
      oddity = text_[cur] - '0';
      ++cur;
      if (brace) {
        if (!at(cur, '}')) {
          fail(cur, "expected '}'");
          return;
        }
        ++cur;
      }
    }
    if (!at(cur, '^')) {
      fail(cur, "expected '^'");
      return;
    }
    ++cur;
    const bool brace = at(cur, '{');
    if (brace) ++cur;
    int sign = 0;
    if (at(cur, '+')) sign = 1;
    if (at(cur, '-')) sign = -1;
    if (sign == 0) {
      fail(cur, "expected '+' or '-'");
      return;
    }
    ++cur;
    const std::size_t k_end = digits_end(cur);
    if (k_end == cur) {
      fail(cur, "expected a rank");
      return;
    }
    // Without braces the rank may be followed directly by the next block's q,
    // so every split point of the digit run is a candidate.
    for (std::size_t split = brace ? k_end : cur + 1; split <= k_end; ++split) {
      std::size_t next = split;
      if (brace) {
        if (!at(next, '}')) {
          fail(next, "expected '}'");
          return;
        }
        ++next;
      }
      const auto k = to_int(text_.substr(cur, split - cur));
      if (!k || *k <= 0 || *k > 1000) {
        fail(cur, "invalid rank");
        continue;
      }
      const auto [p, e] = arith::prime_power(static_cast<std::uint64_t>(*q));
      if (p == 0) {
        fail(pos, "q = " + std::to_string(*q) + " is not a prime power");
        return;
      }
      JordanBlock block{static_cast<std::int64_t>(p), e, static_cast<int>(*k), sign, oddity};
      try {
        validate_block(block);
      } catch (const ParseError& err) {
        fail(pos, err.what());
        continue;
      }
      prefix.push_back(block);
      parse_from(next, prefix, false);
      prefix.pop_back();
    }
  }

  std::string_view text_;
  std::vector<std::vector<JordanBlock>> results_;
  std::string error_;
  std::size_t error_pos_ = 0;
};

std::int64_t smallest_with_kronecker(std::int64_t p, int target) {
  for (std::int64_t a = 1; a < p; ++a) {
    if (arith::kronecker(2 * a, p) == target) return a;
  }
  throw ComputationError("no unit with the requested quadratic character");
}

}  // namespace

std::int64_t JordanBlock::q() const {
  std::int64_t q = 1;
  for (int i = 0; i < exponent; ++i) q *= p;
  return q;
}

std::optional<std::vector<std::int64_t>> odd_two_adic_diagonal(int oddity, int sign, int rank) {
  if (rank <= 0) return std::nullopt;
  static constexpr std::int64_t kUnits[] = {1, 3, 5, 7};
  auto character = [](std::int64_t a) { return (a % 8 == 1 || a % 8 == 7) ? 1 : -1; };

  // Fixed leading ones, then search the trailing `free` entries.
  auto search = [&](int free) -> std::optional<std::vector<std::int64_t>> {
    free = std::min(free, rank);
    std::vector<std::int64_t> diag(static_cast<std::size_t>(rank), 1);
    const std::size_t start = static_cast<std::size_t>(rank - free);
    std::vector<std::size_t> choice(static_cast<std::size_t>(free), 0);
    while (true) {
      for (std::size_t i = 0; i < choice.size(); ++i) diag[start + i] = kUnits[choice[i]];
      std::int64_t trace = 0;
      int chi = 1;
      for (auto a : diag) {
        trace += a;
        chi *= character(a);
      }
      if (trace % 8 == oddity && chi == sign) return diag;
      std::size_t i = choice.size();
      while (i > 0 && ++choice[i - 1] == 4) choice[--i] = 0;
      if (i == 0) return std::nullopt;
    }
  };
  if (auto d = search(2)) return d;
  if (rank >= 3) return search(3);
  return std::nullopt;
}

void validate_block(const JordanBlock& block) {
  if (block.p < 2 || block.exponent < 1 || !arith::is_prime(static_cast<std::uint64_t>(block.p))) {
    throw ParseError("block modulus must be a prime power");
  }
  if (block.rank < 1) throw ParseError("block rank must be positive");
  if (block.sign != 1 && block.sign != -1) throw ParseError("block sign must be + or -");
  if (block.p != 2) {
    if (block.oddity) throw ParseError("oddity subscripts are only allowed for powers of 2");
    return;
  }
  if (!block.oddity) {
    if (block.rank % 2 != 0) throw ParseError("even-type 2-adic block needs even rank");
    return;
  }
  const int t = *block.oddity;
  if (t < 0 || t > 7) throw ParseError("oddity must be a digit 0-7");
  if ((t - block.rank) % 2 != 0) throw ParseError("oddity must have the parity of the rank");
  if (!odd_two_adic_diagonal(t, block.sign, block.rank)) {
    throw ParseError("oddity/sign/rank combination is not realizable");
  }
}

GenusSymbol parse_genus_symbol(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  SymbolParser parser(text);
  auto results = parser.parse_all();
  if (results.empty()) throw ParseError(parser.error() + " in '" + std::string(text) + "'");
  for (auto& r : results) sort_blocks(r);
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return format_genus_symbol(GenusSymbol{a}) < format_genus_symbol(GenusSymbol{b});
  });
  results.erase(std::unique(results.begin(), results.end()), results.end());
  if (results.size() > 1) {
    throw ParseError("ambiguous genus symbol '" + std::string(text) + "'; separate blocks with '.'");
  }
  GenusSymbol symbol{std::move(results.front())};
  for (std::size_t i = 1; i < symbol.blocks.size(); ++i) {
    if (block_key(symbol.blocks[i]) == block_key(symbol.blocks[i - 1])) {
      throw ParseError("repeated Jordan block for q = " + std::to_string(symbol.blocks[i].q()));
    }
  }
  return symbol;
}

std::string format_genus_symbol(const GenusSymbol& symbol) {
  std::vector<JordanBlock> blocks = symbol.blocks;
  sort_blocks(blocks);
  std::string out;
  for (const auto& b : blocks) {
    if (!out.empty()) out += '.';
    out += std::to_string(b.q());
    if (b.oddity) out += "_" + std::to_string(*b.oddity);
    out += b.sign > 0 ? "^+" : "^-";
    out += std::to_string(b.rank);
  }
  return out;
}

FiniteQuadraticModule realize(const JordanBlock& block) {
  validate_block(block);
  const std::int64_t q = block.q();
  const auto k = static_cast<std::size_t>(block.rank);
  std::vector<std::int64_t> orders(k, q);
  std::vector<std::int64_t> coeffs(k * k, 0);

  if (block.p != 2) {
    // Leading entries b with (2b/p) = +1, last entry a with (2a/p) = sign.
    const std::int64_t lead = smallest_with_kronecker(block.p, 1);
    for (std::size_t i = 0; i + 1 < k; ++i) coeffs[i * k + i] = lead;
    coeffs[(k - 1) * k + k - 1] = smallest_with_kronecker(block.p, block.sign);
    return FiniteQuadraticModule(std::move(orders), q, std::move(coeffs));
  }
  if (block.oddity) {
    const auto diag = odd_two_adic_diagonal(*block.oddity, block.sign, block.rank);
    for (std::size_t i = 0; i < k; ++i) coeffs[i * k + i] = (*diag)[i];
    return FiniteQuadraticModule(std::move(orders), 2 * q, std::move(coeffs));
  }
  // Even type: hyperbolic planes x y / q; the minus type replaces the last
  // plane by (x^2 + x y + y^2) / q.
  for (std::size_t i = 0; i < k; i += 2) {
    coeffs[i * k + i + 1] = 1;
    coeffs[(i + 1) * k + i] = 1;
  }
  if (block.sign < 0) {
    coeffs[(k - 2) * k + k - 2] = 1;
    coeffs[(k - 1) * k + k - 1] = 1;
  }
  return FiniteQuadraticModule(std::move(orders), q, std::move(coeffs));
}

FiniteQuadraticModule realize(const GenusSymbol& symbol) {
  FiniteQuadraticModule m;
  std::vector<JordanBlock> blocks = symbol.blocks;
  sort_blocks(blocks);
  for (const auto& b : blocks) m = direct_sum(m, realize(b));
  return m;
}

}  // namespace weilinv
