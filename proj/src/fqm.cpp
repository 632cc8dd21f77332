#include "weilinv/fqm.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "weilinv/arith.hpp"
#include "weilinv/errors.hpp"

namespace weilinv {

namespace {

using i128 = __int128;

std::int64_t mulmod_signed(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(arith::mod(static_cast<std::int64_t>(static_cast<i128>(a) * b % m), m));
}

// Calls f(coords, index) for every element in lexicographic order.
template <typename F>
void for_each_element(const std::vector<std::int64_t>& orders, F&& f) {
  std::vector<std::int64_t> coords(orders.size(), 0);
  std::uint64_t index = 0;
  while (true) {
    f(coords, index);
    ++index;
    std::size_t i = orders.size();
    while (i > 0) {
      --i;
      if (++coords[i] < orders[i]) break;
      coords[i] = 0;
      if (i == 0) return;
    }
    if (orders.empty()) return;
  }
}

// Integer Smith form U*G*V = diag(d); returns d (signed) and V.
struct SmithResult {
  std::vector<std::int64_t> diagonal;
  std::vector<std::int64_t> right;  // n x n, row-major
};

SmithResult smith_form(std::vector<std::int64_t> a, std::size_t n) {
  std::vector<std::int64_t> v(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1;
  auto at = [&](std::size_t r, std::size_t c) -> std::int64_t& { return a[r * n + c]; };
  auto swap_cols = [&](std::size_t c1, std::size_t c2) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(at(r, c1), at(r, c2));
      std::swap(v[r * n + c1], v[r * n + c2]);
    }
  };
  auto swap_rows = [&](std::size_t r1, std::size_t r2) {
    for (std::size_t c = 0; c < n; ++c) std::swap(at(r1, c), at(r2, c));
  };

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      std::size_t pr = n;
      std::size_t pc = n;
      for (std::size_t r = t; r < n; ++r) {
        for (std::size_t c = t; c < n; ++c) {
          if (at(r, c) != 0 && (pr == n || std::llabs(at(r, c)) < std::llabs(at(pr, pc)))) {
            pr = r;
            pc = c;
          }
        }
      }
      if (pr == n) throw ComputationError("Gram matrix is singular");
      swap_rows(t, pr);
      swap_cols(t, pc);
      const std::int64_t pivot = at(t, t);
      bool clean = true;
      for (std::size_t r = t + 1; r < n; ++r) {
        const std::int64_t q = at(r, t) / pivot;
        for (std::size_t c = t; c < n; ++c) at(r, c) -= q * at(t, c);
        if (at(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        const std::int64_t q = at(t, c) / pivot;
        for (std::size_t r = t; r < n; ++r) at(r, c) -= q * at(r, t);
        for (std::size_t r = 0; r < n; ++r) v[r * n + c] -= q * v[r * n + t];
        if (at(t, c) != 0) clean = false;
      }
      if (clean) break;
    }
  }
  SmithResult out;
  out.right = std::move(v);
  for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(at(i, i));
  return out;
}

}  // namespace

std::string to_string(const Element& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.coords.size(); ++i) os << (i ? "," : "") << x.coords[i];
  os << ')';
  return os.str();
}

FiniteQuadraticModule::FiniteQuadraticModule(std::vector<std::int64_t> orders, std::int64_t denominator,
                                             std::vector<std::int64_t> coefficients)
    : orders_(std::move(orders)), level_(denominator), coeffs_(std::move(coefficients)) {
  const std::size_t r = orders_.size();
  if (coeffs_.size() != r * r) throw ComputationError("coefficient matrix has the wrong size");
  if (level_ <= 0) throw ComputationError("denominator must be positive");
  for (auto d : orders_) {
    if (d <= 1) throw ComputationError("cyclic factor orders must exceed 1");
    if (order_ > (std::uint64_t{1} << 40) / static_cast<std::uint64_t>(d)) {
      throw ComputationError("module order too large");
    }
    order_ *= static_cast<std::uint64_t>(d);
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (coeffs_[i * r + j] != coeffs_[j * r + i]) throw ComputationError("coefficient matrix is not symmetric");
    }
  }
  for (auto& c : coeffs_) c = arith::mod(c, level_);

  for (std::size_t i = 0; i < r; ++i) {
    const i128 d = orders_[i];
    if ((d * d * coefficient(i, i)) % level_ != 0) throw ComputationError("quadratic form is not well defined");
    for (std::size_t j = 0; j < r; ++j) {
      if (i != j && (d * coefficient(i, j)) % level_ != 0) {
        throw ComputationError("quadratic form is not well defined");
      }
    }
  }

  std::int64_t g = level_;
  for (auto c : coeffs_) g = arith::gcd(g, c);
  level_ /= g;
  for (auto& c : coeffs_) c /= g;

  // Non-degeneracy: B(x, e_j) = sum_i b_ij x_i with b_ii = 2 m_ii, b_ij = m_ij.
  std::vector<std::int64_t> bmat(coeffs_);
  for (std::size_t i = 0; i < r; ++i) bmat[i * r + i] = arith::mod(2 * bmat[i * r + i], level_);
  bool degenerate = false;
  for_each_element(orders_, [&](const std::vector<std::int64_t>& x, std::uint64_t index) {
    if (index == 0 || degenerate) return;
    for (std::size_t j = 0; j < r; ++j) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < r; ++i) s = (s + mulmod_signed(bmat[i * r + j], x[i], level_)) % level_;
      if (s != 0) return;
    }
    degenerate = true;
  });
  if (degenerate) throw ComputationError("quadratic form is degenerate");
}

std::int64_t FiniteQuadraticModule::q(const Element& x) const {
  const std::size_t r = rank();
  std::int64_t s = 0;
  for (std::size_t i = 0; i < r; ++i) {
    s += mulmod_signed(mulmod_signed(coefficient(i, i), x.coords[i], level_), x.coords[i], level_);
    for (std::size_t j = i + 1; j < r; ++j) {
      s += mulmod_signed(mulmod_signed(coefficient(i, j), x.coords[i], level_), x.coords[j], level_);
    }
    s %= level_;
  }
  return s;
}

std::int64_t FiniteQuadraticModule::b(const Element& x, const Element& y) const {
  return arith::mod(q(add(x, y)) - q(x) - q(y), level_);
}

Element FiniteQuadraticModule::zero() const { return Element{std::vector<std::int64_t>(rank(), 0)}; }

Element FiniteQuadraticModule::add(const Element& x, const Element& y) const {
  Element z = zero();
  for (std::size_t i = 0; i < rank(); ++i) z.coords[i] = arith::mod(x.coords[i] + y.coords[i], orders_[i]);
  return z;
}

Element FiniteQuadraticModule::negate(const Element& x) const {
  Element z = zero();
  for (std::size_t i = 0; i < rank(); ++i) z.coords[i] = arith::mod(-x.coords[i], orders_[i]);
  return z;
}

Element FiniteQuadraticModule::scale(const Element& x, std::int64_t k) const {
  Element z = zero();
  for (std::size_t i = 0; i < rank(); ++i) z.coords[i] = mulmod_signed(x.coords[i], k, orders_[i]);
  return z;
}

Element FiniteQuadraticModule::reduce(Element x) const {
  if (x.coords.size() != rank()) throw ComputationError("element has the wrong number of coordinates");
  for (std::size_t i = 0; i < rank(); ++i) x.coords[i] = arith::mod(x.coords[i], orders_[i]);
  return x;
}

Element FiniteQuadraticModule::element_at(std::uint64_t index) const {
  Element x = zero();
  for (std::size_t i = rank(); i > 0; --i) {
    const auto d = static_cast<std::uint64_t>(orders_[i - 1]);
    x.coords[i - 1] = static_cast<std::int64_t>(index % d);
    index /= d;
  }
  return x;
}

std::uint64_t FiniteQuadraticModule::index_of(const Element& x) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    index = index * static_cast<std::uint64_t>(orders_[i]) + static_cast<std::uint64_t>(arith::mod(x.coords[i], orders_[i]));
  }
  return index;
}

FiniteQuadraticModule from_gram(const std::vector<std::int64_t>& gram, std::size_t n) {
  if (gram.size() != n * n) throw ParseError("Gram matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (gram[i * n + i] % 2 != 0) throw ParseError("Gram matrix must have an even diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (gram[i * n + j] != gram[j * n + i]) throw ParseError("Gram matrix must be symmetric");
    }
  }
  if (n == 0) return {};
  const SmithResult snf = smith_form(gram, n);
  const auto& v = snf.right;

  // Generators g_i = V e_i / d_i of L'/L; Q(sum c_i g_i) = sum c_i c_j W_ij / (2 d_i d_j), W = V^T G V.
  std::vector<std::size_t> kept;
  std::int64_t l = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::llabs(snf.diagonal[i]) > 1) {
      kept.push_back(i);
      l = arith::lcm(l, std::llabs(snf.diagonal[i]));
    }
  }
  auto w = [&](std::size_t i, std::size_t j) {
    i128 s = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) s += static_cast<i128>(v[a * n + i]) * gram[a * n + b] * v[b * n + j];
    }
    return s;
  };
  const std::size_t r = kept.size();
  const i128 den = static_cast<i128>(2) * l * l;
  std::vector<std::int64_t> orders;
  std::vector<std::int64_t> coeffs(r * r, 0);
  for (std::size_t a = 0; a < r; ++a) {
    const std::int64_t da = snf.diagonal[kept[a]];
    orders.push_back(std::llabs(da));
    for (std::size_t b = 0; b < r; ++b) {
      const std::int64_t db = snf.diagonal[kept[b]];
      const i128 scale = (a == b) ? den / 2 / (static_cast<i128>(da) * db) : den / (static_cast<i128>(da) * db);
      coeffs[a * r + b] = static_cast<std::int64_t>((w(kept[a], kept[b]) % den) * scale % den);
    }
  }
  return FiniteQuadraticModule(std::move(orders), static_cast<std::int64_t>(den), std::move(coeffs));
}

FiniteQuadraticModule direct_sum(const FiniteQuadraticModule& a, const FiniteQuadraticModule& b) {
  const std::size_t ra = a.rank();
  const std::size_t rb = b.rank();
  const std::size_t r = ra + rb;
  const std::int64_t den = arith::lcm(a.level(), b.level());
  std::vector<std::int64_t> orders(a.orders());
  orders.insert(orders.end(), b.orders().begin(), b.orders().end());
  std::vector<std::int64_t> coeffs(r * r, 0);
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t j = 0; j < ra; ++j) coeffs[i * r + j] = a.coefficient(i, j) * (den / a.level());
  }
  for (std::size_t i = 0; i < rb; ++i) {
    for (std::size_t j = 0; j < rb; ++j) coeffs[(ra + i) * r + ra + j] = b.coefficient(i, j) * (den / b.level());
  }
  return FiniteQuadraticModule(std::move(orders), den, std::move(coeffs));
}

FiniteQuadraticModule negate(const FiniteQuadraticModule& m) {
  std::vector<std::int64_t> coeffs(m.coefficients());
  for (auto& c : coeffs) c = arith::mod(-c, m.level());
  return FiniteQuadraticModule(m.orders(), m.level(), std::move(coeffs));
}

std::int64_t evaluate_q(const FiniteQuadraticModule& m, const Element& x) { return m.q(m.reduce(x)); }

std::int64_t evaluate_b(const FiniteQuadraticModule& m, const Element& x, const Element& y) {
  return m.b(m.reduce(x), m.reduce(y));
}

std::vector<std::uint64_t> q_histogram(const FiniteQuadraticModule& m) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(m.level()), 0);
  Element x = m.zero();
  for_each_element(m.orders(), [&](const std::vector<std::int64_t>& coords, std::uint64_t) {
    x.coords = coords;
    ++counts[static_cast<std::size_t>(m.q(x))];
  });
  return counts;
}

ModuleProfile profile(const FiniteQuadraticModule& m) {
  ModuleProfile p;
  p.order = m.order();
  p.level = m.level();
  for (auto d : m.orders()) p.twotorsion *= static_cast<std::uint64_t>(arith::gcd(d, 2));

  const auto counts = q_histogram(m);
  const double two_pi = 2.0 * std::numbers::pi;
  std::complex<double> gauss{0.0, 0.0};
  for (std::size_t j = 0; j < counts.size(); ++j) {
    gauss += static_cast<double>(counts[j]) * std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(m.level()));
  }
  const double root = std::sqrt(static_cast<double>(m.order()));
  double best = -1.0;
  for (int s = 0; s < 8; ++s) {
    const double residual = std::abs(gauss - root * std::polar(1.0, two_pi * s / 8.0));
    if (best < 0.0 || residual < best) {
      best = residual;
      p.signature = s;
    }
  }
  if (best >= 1e-6 * root) {
    throw ComputationError("Gauss sum does not satisfy Milgram's formula (residual " + std::to_string(best) + ")");
  }
  if (p.signature % 2 == 0) {
    p.epsilon = (p.signature / 2) % 2 == 0 ? 1 : -1;
  } else {
    p.epsilon.reset();
  }
  return p;
}

std::vector<ModulePart> p_parts(const FiniteQuadraticModule& m) {
  std::vector<ModulePart> parts;
  for (auto p64 : arith::prime_divisors(m.order())) {
    const auto p = static_cast<std::int64_t>(p64);
    ModulePart part;
    part.p = p;
    std::vector<std::size_t> index;
    std::vector<std::int64_t> cofactor;
    std::vector<std::int64_t> orders;
    for (std::size_t i = 0; i < m.rank(); ++i) {
      std::int64_t d = m.orders()[i];
      if (d % p != 0) continue;
      std::int64_t pe = 1;
      while (d % p == 0) {
        d /= p;
        pe *= p;
      }
      index.push_back(i);
      cofactor.push_back(d);
      orders.push_back(pe);
      Element g = m.zero();
      g.coords[i] = d;
      part.embedding.push_back(std::move(g));
    }
    const std::size_t r = index.size();
    const std::int64_t n = m.level();
    std::vector<std::int64_t> coeffs(r * r, 0);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        coeffs[a * r + b] = mulmod_signed(mulmod_signed(m.coefficient(index[a], index[b]), cofactor[a], n), cofactor[b], n);
      }
    }
    part.module = FiniteQuadraticModule(std::move(orders), n, std::move(coeffs));
    parts.push_back(std::move(part));
  }
  return parts;
}

Element embed(const FiniteQuadraticModule& full, const ModulePart& part, const Element& x) {
  if (x.coords.size() != part.embedding.size()) throw ComputationError("element does not belong to this part");
  Element y = full.zero();
  for (std::size_t k = 0; k < x.coords.size(); ++k) y = full.add(y, full.scale(part.embedding[k], x.coords[k]));
  return y;
}

std::vector<Element> isotropic_elements(const FiniteQuadraticModule& m) {
  std::vector<Element> out;
  Element x = m.zero();
  for_each_element(m.orders(), [&](const std::vector<std::int64_t>& coords, std::uint64_t) {
    x.coords = coords;
    if (m.q(x) == 0) out.push_back(x);
  });
  return out;
}

}  // namespace weilinv
