#include "weilinv/tables.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "weilinv/errors.hpp"

namespace weilinv {

namespace detail {
std::string_view tables_csv();
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<TableRecord> parse_table_csv(std::string_view text) {
  std::vector<TableRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  bool header = true;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = "tables line " + std::to_string(line_no);
    if (header) {
      if (fields.size() != 3 || fields[0] != "source" || fields[1] != "symbol" || fields[2] != "dim") {
        throw ParseError(where + ": expected header 'source,symbol,dim'");
      }
      header = false;
      continue;
    }
    if (fields.size() != 3) throw ParseError(where + ": expected three fields");
    TableRecord r{std::string(fields[0]), std::string(fields[1]), 0};
    if (fields[2].empty() || !std::all_of(fields[2].begin(), fields[2].end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ParseError(where + ": dimension must be a non-negative integer");
    }
    r.dim = std::stoull(std::string(fields[2]));
    try {
      parse_genus_symbol(r.symbol);
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!seen.emplace(r.source, r.symbol).second) throw ParseError(where + ": duplicate record " + r.symbol);
    out.push_back(std::move(r));
  }
  if (header) throw ParseError("tables: missing header");
  return out;
}

const std::vector<TableRecord>& embedded_tables() {
  static const std::vector<TableRecord> records = parse_table_csv(detail::tables_csv());
  return records;
}

std::uint64_t symbol_order(const GenusSymbol& symbol) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t order = 1;
  for (const auto& b : symbol.blocks) {
    const auto q = static_cast<std::uint64_t>(b.q());
    for (int i = 0; i < b.rank; ++i) {
      if (order > kMax / q) return kMax;
      order *= q;
    }
  }
  return order;
}

bool TableSummary::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const TableCheck& c) { return c.ok(); });
}

TableSummary tables_check(const std::vector<TableRecord>& records, std::uint64_t max_order,
                          const DimensionOptions& options, const std::function<void(const TableCheck&)>& progress) {
  TableSummary summary;
  for (const auto& r : records) {
    const GenusSymbol symbol = parse_genus_symbol(r.symbol);
    TableCheck check{r, symbol_order(symbol), std::nullopt, {}, 0};
    if (check.order > max_order) {
      ++summary.skipped;
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      check.computed = dimension(realize(symbol), options);
    } catch (const std::exception& e) {
      check.error = e.what();
    }
    check.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (progress) progress(check);
    summary.checks.push_back(std::move(check));
  }
  return summary;
}

}  // namespace weilinv
