#include "weilinv/weil.hpp"

#include <string>

#include "weilinv/arith.hpp"
#include "weilinv/errors.hpp"

namespace weilinv {

namespace {

std::uint64_t checked_prime(const FiniteQuadraticModule& m, const ModuleProfile& p, std::optional<std::uint64_t> ell) {
  if (!p.epsilon) {
    throw ComputationError("odd signature " + std::to_string(p.signature) +
                           ": the Weil representation does not factor through SL_2");
  }
  const auto n = static_cast<std::uint64_t>(m.level());
  if (ell) {
    if (!is_admissible_prime(*ell, n)) {
      throw ComputationError("prime " + std::to_string(*ell) + " is not admissible for level " + std::to_string(n));
    }
    return *ell;
  }
  return choose_primes(n, 1).front();
}

}  // namespace

GroupElement GroupElement::make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t n) {
  if (n < 1) throw ComputationError("group modulus must be positive");
  GroupElement g{arith::mod(a, n), arith::mod(b, n), arith::mod(c, n), arith::mod(d, n), n};
  const std::int64_t det = arith::mod(g.a * g.d - g.b * g.c, n);
  if (det != 1 % n) throw ComputationError("matrix is not in SL_2(Z/" + std::to_string(n) + ")");
  return g;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (n != o.n) throw ComputationError("group elements have different moduli");
  return make(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d, n);
}

std::vector<WordLetter> generator_word(const GroupElement& g) {
  using G = WordLetter::Generator;
  const std::int64_t n = g.n;
  // Right factors X_1, X_2, ... with g X_1 X_2 ... upper triangular.
  std::vector<WordLetter> right;
  GroupElement h = g;
  while (h.c != 0) {
    const std::int64_t k = arith::mod(-(h.d / h.c), n);
    if (k != 0) {
      h = h * GroupElement::make(1, k, 0, 1, n);
      right.push_back({G::T, k});
    }
    h = h * GroupElement::S(n);
    right.push_back({G::S, 1});
  }
  // [[a, b], [0, d]] = diag(a, d) T^{bd} and diag(a, d) = S^{-1} T^d S T^a S T^d.
  std::vector<WordLetter> word{{G::S, 3}, {G::T, h.d}, {G::S, 1}, {G::T, h.a}, {G::S, 1}, {G::T, h.d},
                               {G::T, arith::mod(h.b * h.d, n)}};
  for (auto it = right.rbegin(); it != right.rend(); ++it) {
    if (it->generator == G::T) {
      word.push_back({G::T, arith::mod(-it->power, n)});
    } else {
      word.push_back({G::S, 3});
    }
  }
  std::erase_if(word, [](const WordLetter& l) { return l.generator == G::T && l.power == 0; });
  return word;
}

GroupElement evaluate_word(const std::vector<WordLetter>& word, std::int64_t n) {
  GroupElement g = GroupElement::identity(n);
  for (const auto& l : word) {
    const GroupElement x = l.generator == WordLetter::Generator::S ? GroupElement::S(n) : GroupElement::make(1, l.power, 0, 1, n);
    const std::int64_t reps = l.generator == WordLetter::Generator::S ? arith::mod(l.power, 4) : 1;
    for (std::int64_t i = 0; i < reps; ++i) g = g * x;
  }
  return g;
}

WeilContext::WeilContext(FiniteQuadraticModule module, std::optional<std::uint64_t> ell, std::optional<std::uint64_t> zeta)
    : module_(std::move(module)),
      profile_(weilinv::profile(module_)),
      zf_(checked_prime(module_, profile_, ell), static_cast<std::uint64_t>(module_.level()), zeta) {
  const std::size_t r = module_.rank();
  const std::int64_t n = module_.level();
  const std::size_t size = this->size();
  bilinear_ = module_.coefficients();
  for (std::size_t i = 0; i < r; ++i) bilinear_[i * r + i] = arith::mod(2 * bilinear_[i * r + i], n);

  coords_.resize(size * r);
  q_values_.resize(size);
  negation_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const Element x = module_.element_at(i);
    std::copy(x.coords.begin(), x.coords.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * r));
    q_values_[i] = module_.q(x);
    negation_[i] = static_cast<std::size_t>(module_.index_of(module_.negate(x)));
  }

  w_ = gauss_constant(1);
  const PrimeField& f = field();
  const Residue ratio = f.mul(gauss_constant(-1), f.inv(w_));
  if (ratio == 1) {
    epsilon_ = 1;
  } else if (ratio == f.neg(1)) {
    epsilon_ = -1;
  } else {
    throw ComputationError("parity ratio is not +-1");
  }
  if (epsilon_ != *profile_.epsilon) throw ComputationError("parity disagrees with the Milgram signature");
}

Residue WeilContext::gauss_constant(std::int64_t twist) const {
  const PrimeField& f = field();
  std::uint64_t s = 0;
  for (auto q : q_values_) s += zf_.zeta_power(-twist * q);
  return f.mul(static_cast<Residue>(s % ell()), f.inv(f.reduce(static_cast<std::int64_t>(size()))));
}

std::int64_t WeilContext::b_value(std::size_t i, std::size_t j) const {
  const std::size_t r = module_.rank();
  const std::int64_t n = module_.level();
  const std::int64_t* x = coords_.data() + i * r;
  const std::int64_t* y = coords_.data() + j * r;
  std::int64_t s = 0;
  for (std::size_t k = 0; k < r; ++k) {
    if (x[k] == 0) continue;
    std::int64_t t = 0;
    for (std::size_t l = 0; l < r; ++l) t += bilinear_[k * r + l] * y[l] % n;
    s = (s + (t % n) * x[k]) % n;
  }
  return s;
}

std::vector<Residue> WeilContext::apply_T(std::span<const Residue> v) const {
  if (v.size() != size()) throw ComputationError("vector length does not match |A|");
  const PrimeField& f = field();
  std::vector<Residue> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = f.mul(v[i], zf_.zeta_power(q_values_[i]));
  return out;
}

std::vector<Residue> WeilContext::apply_S(std::span<const Residue> v) const {
  if (v.size() != size()) throw ComputationError("vector length does not match |A|");
  const PrimeField& f = field();
  std::vector<Residue> out(size());
  for (std::size_t y = 0; y < size(); ++y) {
    std::uint64_t s = 0;
    for (std::size_t x = 0; x < size(); ++x) {
      if (v[x] != 0) s = (s + std::uint64_t{v[x]} * zf_.zeta_power(-b_value(x, y))) % ell();
    }
    out[y] = f.mul(w_, static_cast<Residue>(s));
  }
  return out;
}

Residue WeilContext::chi(std::int64_t d) const {
  if (arith::gcd(arith::mod(d, level()), level()) != 1) {
    throw ComputationError("chi needs a unit modulo the level");
  }
  return field().mul(gauss_constant(d), field().inv(w_));
}

FieldMatrix WeilContext::s_matrix() const {
  FieldMatrix m(size(), size(), ell());
  for (std::size_t y = 0; y < size(); ++y) {
    for (std::size_t x = 0; x < size(); ++x) m(y, x) = field().mul(w_, zf_.zeta_power(-b_value(x, y)));
  }
  return m;
}

FieldMatrix WeilContext::t_matrix() const {
  FieldMatrix m(size(), size(), ell());
  for (std::size_t x = 0; x < size(); ++x) m(x, x) = zf_.zeta_power(q_values_[x]);
  return m;
}

FieldMatrix WeilContext::rho_matrix(const GroupElement& g) const {
  if (g.n != level()) throw ComputationError("group element modulus differs from the level");
  const auto word = generator_word(g);
  if (!(evaluate_word(word, g.n) == g)) throw ComputationError("generator word does not reproduce g");
  const FieldMatrix s = s_matrix();
  FieldMatrix r = FieldMatrix::identity(size(), ell());
  for (const auto& letter : word) {
    if (letter.generator == WordLetter::Generator::S) {
      for (std::int64_t i = 0; i < arith::mod(letter.power, 4); ++i) r = r * s;
    } else {
      for (std::size_t x = 0; x < size(); ++x) {
        const Residue z = zf_.zeta_power(letter.power * q_values_[x]);
        for (std::size_t y = 0; y < size(); ++y) r(y, x) = field().mul(r(y, x), z);
      }
    }
  }
  return r;
}

WeilContext make_weil_context(const FiniteQuadraticModule& m, std::optional<std::uint64_t> ell) {
  return WeilContext(m, ell);
}

}  // namespace weilinv
