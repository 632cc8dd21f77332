#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weilinv/genus.hpp"
#include "weilinv/invariants.hpp"

namespace weilinv {

/// One published dimension: `dim` for the module `symbol` in table `source`.
struct TableRecord {
  std::string source;
  std::string symbol;
  std::size_t dim = 0;

  bool operator==(const TableRecord&) const = default;
};

/// Parses `source,symbol,dim` CSV with that header. Throws ParseError on bad
/// rows, unparsable symbols or repeated (source, symbol) pairs.
std::vector<TableRecord> parse_table_csv(std::string_view text);

/// The dataset compiled into the library.
const std::vector<TableRecord>& embedded_tables();

/// |A| of the module a symbol denotes, saturating at UINT64_MAX.
std::uint64_t symbol_order(const GenusSymbol& symbol);

struct TableCheck {
  TableRecord record;
  std::uint64_t order = 0;
  std::optional<std::size_t> computed;
  std::string error;
  double ms = 0;

  bool ok() const { return error.empty() && computed == record.dim; }
};

struct TableSummary {
  std::vector<TableCheck> checks;
  std::size_t skipped = 0;

  bool passed() const;
};

/// Recomputes every record with order <= max_order, in dataset order.
/// `progress` is called after each check.
TableSummary tables_check(const std::vector<TableRecord>& records, std::uint64_t max_order,
                          const DimensionOptions& options = {},
                          const std::function<void(const TableCheck&)>& progress = {});

}  // namespace weilinv
