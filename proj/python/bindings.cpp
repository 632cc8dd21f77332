#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "weilinv/cli.hpp"
#include "weilinv/errors.hpp"
#include "weilinv/fqm.hpp"
#include "weilinv/genus.hpp"
#include "weilinv/invariants.hpp"
#include "weilinv/tables.hpp"

namespace py = pybind11;
using namespace weilinv;

namespace {

using Coords = std::vector<std::int64_t>;

FiniteQuadraticModule from_symbol(const std::string& s) { return realize(parse_genus_symbol(s)); }

FiniteQuadraticModule from_gram_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<std::int64_t> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw ParseError("Gram matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return from_gram(flat, rows.size());
}

py::dict profile_dict(const FiniteQuadraticModule& m) {
  const ModuleProfile p = profile(m);
  py::dict d;
  d["order"] = p.order;
  d["level"] = p.level;
  d["signature"] = p.signature;
  d["epsilon"] = p.epsilon ? py::object(py::int_(*p.epsilon)) : py::object(py::none());
  d["twotorsion"] = p.twotorsion;
  return d;
}

// Each basis vector as {coords: coefficient} over its support.
py::list basis_dicts(const FiniteQuadraticModule& m, const InvariantBasis& b) {
  py::list out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto v = b.expand(m, i);
    py::dict d;
    for (std::uint64_t x = 0; x < v.size(); ++x) {
      if (v[x] == 0) continue;
      d[py::tuple(py::cast(m.element_at(x).coords))] = v[x];
    }
    out.append(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_weilinv, mod) {
  mod.doc() = "Invariants of Weil representations of finite quadratic modules";

  py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);
  py::register_exception<ComputationError>(mod, "ComputationError", PyExc_ArithmeticError);

  py::class_<FiniteQuadraticModule>(mod, "Module")
      .def(py::init<>())
      .def(py::init<std::vector<std::int64_t>, std::int64_t, std::vector<std::int64_t>>(), py::arg("orders"),
           py::arg("denominator"), py::arg("coefficients"))
      .def_static("from_symbol", &from_symbol, py::arg("symbol"))
      .def_static("from_gram", &from_gram_rows, py::arg("gram"))
      .def_property_readonly("order", &FiniteQuadraticModule::order)
      .def_property_readonly("level", &FiniteQuadraticModule::level)
      .def_property_readonly("orders", &FiniteQuadraticModule::orders)
      .def("profile", &profile_dict)
      .def("q", [](const FiniteQuadraticModule& m, const Coords& x) { return m.q(m.reduce(Element{x})); })
      .def("b", [](const FiniteQuadraticModule& m, const Coords& x, const Coords& y) {
        return m.b(m.reduce(Element{x}), m.reduce(Element{y}));
      })
      .def("elements",
           [](const FiniteQuadraticModule& m) {
             std::vector<Coords> out;
             for (std::uint64_t i = 0; i < m.order(); ++i) out.push_back(m.element_at(i).coords);
             return out;
           })
      .def("isotropic",
           [](const FiniteQuadraticModule& m) {
             std::vector<Coords> out;
             for (const auto& x : isotropic_elements(m)) out.push_back(x.coords);
             return out;
           })
      .def("__neg__", [](const FiniteQuadraticModule& m) { return negate(m); })
      .def("__add__", [](const FiniteQuadraticModule& a, const FiniteQuadraticModule& b) { return direct_sum(a, b); })
      .def("__eq__", [](const FiniteQuadraticModule& a, const FiniteQuadraticModule& b) { return a == b; })
      .def("__repr__", [](const FiniteQuadraticModule& m) {
        return "<Module order=" + std::to_string(m.order()) + " level=" + std::to_string(m.level()) + ">";
      });

  mod.def("normalize_symbol", [](const std::string& s) { return format_genus_symbol(parse_genus_symbol(s)); },
          py::arg("symbol"));

  mod.def(
      "dimension",
      [](const FiniteQuadraticModule& m, std::optional<std::uint64_t> prime, bool local) {
        DimensionOptions o;
        o.local = local;
        o.ell = prime;
        return dimension(m, o);
      },
      py::arg("module"), py::arg("prime") = py::none(), py::arg("local") = true);

  mod.def(
      "invariants_mod",
      [](const FiniteQuadraticModule& m, std::optional<std::uint64_t> prime) {
        return basis_dicts(m, invariants_mod_ell(m, {prime, false}));
      },
      py::arg("module"), py::arg("prime") = py::none());

  mod.def(
      "integral_basis",
      [](const FiniteQuadraticModule& m, bool local) {
        return basis_dicts(m, local ? local_integral_basis(m) : integral_basis(m));
      },
      py::arg("module"), py::arg("local") = true);

  mod.def(
      "oracle_dimension",
      [](const FiniteQuadraticModule& m, std::uint64_t bound) { return character_sum_dimension(m, bound); },
      py::arg("module"), py::arg("bound") = 100000);

  mod.def("tables", [] {
    std::vector<std::tuple<std::string, std::string, std::size_t>> out;
    for (const auto& r : embedded_tables()) out.emplace_back(r.source, r.symbol, r.dim);
    return out;
  });

  mod.def(
      "check_tables",
      [](std::uint64_t max_order) {
        py::list out;
        for (const auto& c : tables_check(embedded_tables(), max_order).checks) {
          py::dict d;
          d["source"] = c.record.source;
          d["symbol"] = c.record.symbol;
          d["expected"] = c.record.dim;
          d["dimension"] = c.computed ? py::object(py::int_(*c.computed)) : py::object(py::none());
          d["match"] = c.ok();
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("max_order") = 4096);

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
