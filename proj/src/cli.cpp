#include "weilinv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "weilinv/errors.hpp"
#include "weilinv/fqm.hpp"
#include "weilinv/genus.hpp"
#include "weilinv/invariants.hpp"
#include "weilinv/tables.hpp"
#include "weilinv/zfield.hpp"

namespace weilinv::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultTableBound = 4096;
constexpr std::uint64_t kOracleBound = 100000;

json to_json(const OutputReport& r) {
  json j;
  j["symbol"] = r.symbol;
  j["order"] = r.order;
  j["level"] = r.level;
  j["signature"] = r.signature;
  j["epsilon"] = r.epsilon ? json(*r.epsilon) : json(nullptr);
  j["dimension"] = r.dimension;
  j["primes"] = r.primes;
  if (r.basis) {
    json b = json::array();
    for (const auto& e : *r.basis) b.push_back({{"support", e.support}, {"coeffs", e.coeffs}});
    j["basis"] = std::move(b);
  }
  j["ms"] = r.ms;
  return j;
}

std::uint64_t prime_min_from_env() {
  const char* v = std::getenv("WEILINV_PRIME_MIN");
  if (!v || !*v) return 0;
  std::string s(v);
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 18) {
    throw ParseError("WEILINV_PRIME_MIN must be a non-negative integer");
  }
  return std::stoull(s);
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Settings {
  std::string symbol;
  std::vector<std::uint64_t> primes;
  bool json = false;
  std::optional<std::uint64_t> max_order;
  bool no_local = false;
  bool check = false;
  std::string data;
  std::uint64_t prime_min = 0;
};

struct Prepared {
  std::string symbol;
  FiniteQuadraticModule module;
  OutputReport report;
};

Prepared prepare(const Settings& s) {
  const GenusSymbol symbol = parse_genus_symbol(s.symbol);
  const std::uint64_t order = symbol_order(symbol);
  if (s.max_order && order > *s.max_order) {
    throw ComputationError("module order " + std::to_string(order) + " exceeds --max-order " +
                           std::to_string(*s.max_order));
  }
  Prepared p{format_genus_symbol(symbol), realize(symbol), {}};
  const ModuleProfile prof = profile(p.module);
  p.report.symbol = p.symbol;
  p.report.order = prof.order;
  p.report.level = prof.level;
  p.report.signature = prof.signature;
  p.report.epsilon = prof.epsilon;
  return p;
}

std::vector<std::uint64_t> default_primes(const FiniteQuadraticModule& m, bool local, std::uint64_t prime_min) {
  if (!profile(m).epsilon) return {};
  std::vector<std::uint64_t> out;
  if (!local) return choose_primes(static_cast<std::uint64_t>(m.level()), 1, prime_min);
  for (const auto& part : p_parts(m)) {
    out.push_back(choose_primes(static_cast<std::uint64_t>(part.module.level()), 1, prime_min).front());
  }
  return out;
}

// Dimension with either the default prime policy or every requested prime,
// which must all agree.
std::size_t compute_dimension(const Settings& s, Prepared& p) {
  DimensionOptions o;
  o.local = !s.no_local;
  o.prime_min = s.prime_min;
  if (s.primes.empty()) {
    p.report.primes = default_primes(p.module, o.local, o.prime_min);
    return dimension(p.module, o);
  }
  std::optional<std::size_t> d;
  for (auto ell : s.primes) {
    if (p.report.epsilon && !is_admissible_prime(ell, static_cast<std::uint64_t>(p.module.level()))) {
      throw ComputationError("prime " + std::to_string(ell) + " is not admissible for level " +
                             std::to_string(p.module.level()));
    }
    o.ell = ell;
    const std::size_t di = dimension(p.module, o);
    if (d && *d != di) {
      throw ComputationError("dimension differs between primes: " + std::to_string(*d) + " vs " +
                             std::to_string(di) + " at " + std::to_string(ell));
    }
    d = di;
  }
  p.report.primes = s.primes;
  return *d;
}

std::string format_element(const Element& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x.coords[i]);
  }
  return s + ")";
}

std::string format_vector(const BasisEntry& e) {
  std::string s;
  for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
    const std::int64_t c = e.coeffs[i];
    if (i) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    const std::int64_t a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a) + "*";
    s += format_element(Element{e.support[i]});
  }
  return s.empty() ? "0" : s;
}

void emit(const Settings& s, std::ostream& out, const OutputReport& r, const std::string& text) {
  if (s.json) {
    out << to_json_line(r) << '\n';
  } else {
    out << text;
  }
}

int cmd_info(const Settings& s, std::ostream& out) {
  const Timer t;
  Prepared p = prepare(s);
  const ModuleProfile prof = profile(p.module);
  p.report.dimension = prof.epsilon ? compute_dimension(s, p) : 0;
  p.report.ms = t.ms();
  std::ostringstream text;
  text << "symbol     " << (p.symbol.empty() ? "(trivial)" : p.symbol) << '\n'
       << "order      " << prof.order << '\n'
       << "level      " << prof.level << '\n'
       << "signature  " << prof.signature << '\n'
       << "epsilon    " << (prof.epsilon ? (*prof.epsilon > 0 ? "+1" : "-1") : "odd signature") << '\n'
       << "2-torsion  " << prof.twotorsion << '\n'
       << "dimension  " << p.report.dimension << '\n';
  emit(s, out, p.report, text.str());
  return kOk;
}

int cmd_dim(const Settings& s, std::ostream& out) {
  const Timer t;
  Prepared p = prepare(s);
  p.report.dimension = p.report.epsilon ? compute_dimension(s, p) : 0;
  p.report.ms = t.ms();
  emit(s, out, p.report, std::to_string(p.report.dimension) + "\n");
  return kOk;
}

int cmd_basis(const Settings& s, std::ostream& out) {
  const Timer t;
  Prepared p = prepare(s);
  IntegralOptions io;
  io.prime_min = std::max(io.prime_min, s.prime_min);
  const InvariantBasis b = s.no_local ? integral_basis(p.module, io) : local_integral_basis(p.module, io);
  p.report.dimension = b.size();
  p.report.primes = b.primes;
  std::vector<BasisEntry> entries;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto v = b.expand(p.module, i);
    BasisEntry e;
    for (std::size_t x = 0; x < v.size(); ++x) {
      if (v[x] == 0) continue;
      e.support.push_back(p.module.element_at(x).coords);
      e.coeffs.push_back(v[x]);
    }
    entries.push_back(std::move(e));
  }
  p.report.basis = std::move(entries);
  p.report.ms = t.ms();
  std::ostringstream text;
  text << "dimension " << b.size() << '\n';
  for (std::size_t i = 0; i < b.size(); ++i) text << "v" << i + 1 << " = " << format_vector((*p.report.basis)[i]) << '\n';
  emit(s, out, p.report, text.str());
  return kOk;
}

int cmd_oracle(const Settings& s, std::ostream& out) {
  const Timer t;
  Prepared p = prepare(s);
  if (p.report.epsilon) {
    p.report.dimension = character_sum_dimension(p.module, kOracleBound);
    p.report.primes = choose_primes(static_cast<std::uint64_t>(p.module.level()), 1, p.module.order() + 1);
  }
  p.report.ms = t.ms();
  emit(s, out, p.report, std::to_string(p.report.dimension) + "\n");
  return kOk;
}

int cmd_tables(const Settings& s, std::ostream& out) {
  const std::uint64_t bound = s.max_order.value_or(kDefaultTableBound);
  DimensionOptions o;
  o.local = !s.no_local;
  o.prime_min = s.prime_min;
  if (s.primes.size() == 1) o.ell = s.primes.front();
  if (s.primes.size() > 1) throw ParseError("tables accepts at most one --prime");

  auto progress = [&](const TableCheck& c) {
    if (!s.json) return;
    json j;
    j["source"] = c.record.source;
    j["symbol"] = c.record.symbol;
    j["order"] = c.order;
    j["expected"] = c.record.dim;
    j["dimension"] = c.computed ? json(*c.computed) : json(nullptr);
    j["match"] = c.ok();
    if (!c.error.empty()) j["error"] = c.error;
    j["ms"] = c.ms;
    out << j.dump() << '\n';
  };
  std::vector<TableRecord> loaded;
  if (!s.data.empty()) {
    std::ifstream in(s.data, std::ios::binary);
    if (!in) throw ParseError("cannot read " + s.data);
    std::ostringstream text;
    text << in.rdbuf();
    loaded = parse_table_csv(text.str());
  }
  const auto& records = s.data.empty() ? embedded_tables() : loaded;
  const TableSummary summary = tables_check(records, bound, o, progress);

  if (!s.json) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_table;
    for (const auto& r : records) per_table[r.source];
    for (const auto& c : summary.checks) {
      auto& [pass, total] = per_table[c.record.source];
      ++total;
      if (c.ok()) ++pass;
    }
    for (const auto& [source, counts] : per_table) {
      out << source << ": " << counts.first << "/" << counts.second << " match\n";
    }
    for (const auto& c : summary.checks) {
      if (c.ok()) continue;
      out << "MISMATCH " << c.record.source << " " << c.record.symbol << ": expected " << c.record.dim;
      if (c.computed) out << ", computed " << *c.computed;
      if (!c.error.empty()) out << ", error: " << c.error;
      out << '\n';
    }
    out << summary.checks.size() << " checked, " << summary.skipped << " skipped (order > " << bound << "), "
        << (summary.passed() ? "all match" : "FAILED") << '\n';
  }
  if (s.check && !summary.passed()) return kCheckFailed;
  return kOk;
}

}  // namespace

std::string to_json_line(const OutputReport& report) { return to_json(report).dump(); }

OutputReport report_from_json(const std::string& line) {
  const json j = json::parse(line);
  OutputReport r;
  r.symbol = j.at("symbol").get<std::string>();
  r.order = j.at("order").get<std::uint64_t>();
  r.level = j.at("level").get<std::int64_t>();
  r.signature = j.at("signature").get<int>();
  if (!j.at("epsilon").is_null()) r.epsilon = j.at("epsilon").get<int>();
  r.dimension = j.at("dimension").get<std::size_t>();
  r.primes = j.at("primes").get<std::vector<std::uint64_t>>();
  if (j.contains("basis")) {
    std::vector<BasisEntry> entries;
    for (const auto& e : j.at("basis")) {
      entries.push_back({e.at("support").get<std::vector<std::vector<std::int64_t>>>(),
                         e.at("coeffs").get<std::vector<std::int64_t>>()});
    }
    r.basis = std::move(entries);
  }
  r.ms = j.at("ms").get<double>();
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariants of Weil representations of finite quadratic modules"};
  app.name("weilinv");
  Settings s;
  std::uint64_t max_order = 0;
  app.add_option("--prime", s.primes, "Prime ell = 1 mod N to compute over (repeatable)")->take_all();
  app.add_flag("--json", s.json, "One JSON object per line");
  auto* max_opt = app.add_option("--max-order", max_order, "Refuse (or, for tables, skip) modules larger than this");
  app.add_flag("--no-local", s.no_local, "Work on the whole module instead of its p-parts");
  app.add_flag("--check", s.check, "tables: exit 3 on any mismatch");
  app.require_subcommand(1);

  auto add_symbol_command = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("symbol", s.symbol, "Genus symbol, e.g. 2_7^+1.4^+2.8_1^+1 (\"\" for the trivial module)")
        ->required();
    c->fallthrough();
    return c;
  };
  auto* info = add_symbol_command("info", "Order, level, signature and parity");
  auto* dim = add_symbol_command("dim", "Dimension of the invariants");
  auto* basis = add_symbol_command("basis", "Integral basis of the invariants");
  auto* oracle = add_symbol_command("oracle", "Dimension by summing characters over SL_2(Z/N)");
  auto* tables = app.add_subcommand("tables", "Recompute the embedded dimension tables");
  tables->add_option("--data", s.data, "CSV (source,symbol,dim) to check instead of the embedded tables");
  tables->fallthrough();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (max_opt->count() > 0) s.max_order = max_order;
    s.prime_min = prime_min_from_env();
    if (info->parsed()) return cmd_info(s, out);
    if (dim->parsed()) return cmd_dim(s, out);
    if (basis->parsed()) return cmd_basis(s, out);
    if (oracle->parsed()) return cmd_oracle(s, out);
    if (tables->parsed()) return cmd_tables(s, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kParseError;
}

}  // namespace weilinv::cli
