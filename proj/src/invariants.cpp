#include "weilinv/invariants.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>

#include "weilinv/arith.hpp"
#include "weilinv/errors.hpp"

namespace weilinv {

namespace {

InvariantBasis empty_basis(const ModuleProfile& p) {
  InvariantBasis b;
  b.profile = p;
  b.epsilon = p.epsilon.value_or(1);
  return b;
}

std::vector<Residue> expand_mod(const InvariantBasis& basis, const FiniteQuadraticModule& m, std::size_t i,
                                std::uint64_t ell) {
  const PrimeField f(ell);
  std::vector<Residue> out(static_cast<std::size_t>(m.order()), 0);
  for (std::size_t k = 0; k < basis.reps.size(); ++k) {
    const Residue v = f.reduce(basis.vectors[i][k]);
    out[m.index_of(basis.reps[k])] = v;
    out[m.index_of(m.negate(basis.reps[k]))] = basis.epsilon > 0 ? v : f.neg(v);
  }
  return out;
}

std::vector<std::size_t> pivot_pattern(const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<std::size_t> out;
  for (const auto& r : rows) {
    const auto it = std::find_if(r.begin(), r.end(), [](std::int64_t x) { return x != 0; });
    out.push_back(static_cast<std::size_t>(it - r.begin()));
  }
  return out;
}

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw ComputationError("integral coefficient exceeds 64 bits");
  return z.get_si();
}

// Visits every g in SL_2(Z/N) with its representation matrix, breadth first
// from the identity under right multiplication by S and T.
template <typename F>
void for_each_group_matrix(const WeilContext& ctx, std::uint64_t bound, F&& visit) {
  const std::int64_t n = ctx.level();
  const std::uint64_t order = sl2_order(static_cast<std::uint64_t>(n));
  if (order > bound) {
    throw ComputationError("|SL_2(Z/" + std::to_string(n) + ")| = " + std::to_string(order) + " exceeds the bound " +
                           std::to_string(bound));
  }
  const std::size_t size = ctx.size();
  const FieldMatrix s = ctx.s_matrix();
  auto key = [n](const GroupElement& g) {
    return static_cast<std::uint64_t>(((g.a * n + g.b) * n + g.c) * n + g.d);
  };
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<GroupElement, FieldMatrix>> frontier;
  const GroupElement id = GroupElement::identity(n);
  seen.insert(key(id));
  frontier.emplace_back(id, FieldMatrix::identity(size, ctx.ell()));
  visit(frontier.back().first, frontier.back().second);
  const GroupElement gens[2] = {GroupElement::S(n), GroupElement::T(n)};
  while (!frontier.empty()) {
    std::vector<std::pair<GroupElement, FieldMatrix>> next;
    for (const auto& [g, r] : frontier) {
      for (int k = 0; k < 2; ++k) {
        const GroupElement h = g * gens[k];
        if (!seen.insert(key(h)).second) continue;
        FieldMatrix rh = r;
        if (k == 0) {
          rh = r * s;
        } else {
          for (std::size_t x = 0; x < size; ++x) {
            const Residue z = ctx.zeta_field().zeta_power(ctx.q_value(x));
            for (std::size_t y = 0; y < size; ++y) rh(y, x) = ctx.field().mul(rh(y, x), z);
          }
        }
        visit(h, rh);
        next.emplace_back(h, std::move(rh));
      }
    }
    frontier = std::move(next);
  }
  if (seen.size() != order) throw ComputationError("group enumeration did not reach every element");
}

// S-invariance of every vector, checked one by one when cheap and through
// pseudo-random combinations otherwise.
bool s_invariant_mod(const FiniteQuadraticModule& m, const InvariantBasis& basis, std::uint64_t ell) {
  const WeilContext ctx(m, ell);
  const PrimeField& f = ctx.field();
  const double cost = static_cast<double>(basis.size()) * static_cast<double>(ctx.size()) *
                      static_cast<double>(ctx.size());
  if (cost <= 5e8) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!verify_invariant(ctx, expand_mod(basis, m, i, ell))) return false;
    }
    return true;
  }
  std::mt19937_64 rng(ell);
  for (int round = 0; round < 3; ++round) {
    std::vector<Residue> u(ctx.size(), 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Residue c = static_cast<Residue>(rng() % ell);
      const auto v = expand_mod(basis, m, i, ell);
      for (std::size_t x = 0; x < u.size(); ++x) u[x] = f.add(u[x], f.mul(c, v[x]));
    }
    if (!verify_invariant(ctx, u)) return false;
  }
  return true;
}

}  // namespace

SymmetrizedBasis symmetrized_basis(const FiniteQuadraticModule& m, int epsilon) {
  if (epsilon != 1 && epsilon != -1) throw ComputationError("epsilon must be +1 or -1");
  SymmetrizedBasis sb;
  sb.epsilon = epsilon;
  std::vector<std::uint64_t> iso, rest;
  std::vector<bool> iso_self, rest_self;
  for (std::uint64_t i = 0; i < m.order(); ++i) {
    const Element x = m.element_at(i);
    const std::uint64_t j = m.index_of(m.negate(x));
    if (j < i) continue;
    const bool self = j == i;
    if (self && epsilon < 0) continue;
    if (m.q(x) == 0) {
      iso.push_back(i);
      iso_self.push_back(self);
    } else {
      rest.push_back(i);
      rest_self.push_back(self);
    }
  }
  sb.m_prime = iso.size();
  sb.n_prime = rest.size();
  sb.reps = std::move(iso);
  sb.reps.insert(sb.reps.end(), rest.begin(), rest.end());
  sb.self_paired = std::move(iso_self);
  sb.self_paired.insert(sb.self_paired.end(), rest_self.begin(), rest_self.end());
  return sb;
}

FieldMatrix build_h_matrix(const WeilContext& ctx, const SymmetrizedBasis& sb) {
  if (sb.epsilon != ctx.epsilon()) throw ComputationError("symmetrized basis parity differs from the context");
  const PrimeField& f = ctx.field();
  const ZetaFieldContext& zf = ctx.zeta_field();
  const Residue half = f.inv(2);
  const Residue w_half = f.mul(ctx.w(), half);
  FieldMatrix h(sb.size(), sb.m_prime, ctx.ell());
  for (std::size_t i = 0; i < sb.size(); ++i) {
    // w / (2 f_i): w for a pair, w/2 for a self-paired element.
    const Residue scale = sb.self_paired[i] ? w_half : ctx.w();
    for (std::size_t j = 0; j < sb.m_prime; ++j) {
      const std::int64_t b = ctx.b_value(sb.reps[j], sb.reps[i]);
      Residue z = zf.zeta_power(-b);
      z = sb.epsilon > 0 ? f.add(z, zf.zeta_power(b)) : f.sub(z, zf.zeta_power(b));
      Residue v = f.mul(scale, z);
      if (i == j) v = f.add(v, 1);
      h(i, j) = v;
    }
  }
  return h;
}

std::vector<std::int64_t> InvariantBasis::expand(const FiniteQuadraticModule& m, std::size_t i) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(m.order()), 0);
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const std::int64_t v = vectors[i][k];
    std::int64_t neg = epsilon > 0 ? v : -v;
    if (ell && neg < 0) neg += static_cast<std::int64_t>(*ell);
    out[m.index_of(reps[k])] = v;
    out[m.index_of(m.negate(reps[k]))] = neg;
  }
  return out;
}

InvariantBasis invariants_mod_ell(const FiniteQuadraticModule& m, const ModEllOptions& options) {
  const ModuleProfile prof = profile(m);
  InvariantBasis out = empty_basis(prof);
  if (!prof.epsilon) return out;

  const WeilContext ctx(m, options.ell);
  out.ell = ctx.ell();
  out.primes = {ctx.ell()};
  const SymmetrizedBasis sb = symmetrized_basis(m, ctx.epsilon());
  for (std::size_t j = 0; j < sb.m_prime; ++j) out.reps.push_back(m.element_at(sb.reps[j]));
  if (sb.m_prime == 0) return out;

  const FieldMatrix h = build_h_matrix(ctx, sb);
  const PrimeField& f = ctx.field();
  FieldMatrix v(sb.n_prime, sb.m_prime, ctx.ell());
  for (std::size_t i = 0; i < sb.n_prime; ++i) {
    std::copy(h.row(sb.m_prime + i).begin(), h.row(sb.m_prime + i).end(), v.row(i).begin());
  }
  std::vector<std::vector<Residue>> kernel;
  if (sb.n_prime == 0) {
    for (std::size_t j = 0; j < sb.m_prime; ++j) {
      std::vector<Residue> e(sb.m_prime, 0);
      e[j] = 1;
      kernel.push_back(std::move(e));
    }
  } else {
    kernel = kernel_basis(v);
  }

  // Images U x, converted from symmetrized coordinates to values at the reps.
  const Residue half = f.inv(2);
  std::vector<std::vector<Residue>> images;
  images.reserve(kernel.size());
  for (const auto& x : kernel) {
    std::vector<std::uint64_t> acc(sb.m_prime, 0);
    for (std::size_t j = 0; j < sb.m_prime; ++j) {
      if (x[j] == 0) continue;
      for (std::size_t i = 0; i < sb.m_prime; ++i) acc[i] = (acc[i] + std::uint64_t{h(i, j)} * x[j]) % ctx.ell();
    }
    std::vector<Residue> img(sb.m_prime);
    for (std::size_t i = 0; i < sb.m_prime; ++i) {
      img[i] = static_cast<Residue>(acc[i]);
      if (!sb.self_paired[i]) img[i] = f.mul(img[i], half);
    }
    images.push_back(std::move(img));
  }
  const EchelonForm ech = row_reduce(images, sb.m_prime, ctx.ell());
  for (const auto& row : ech.rows) out.vectors.emplace_back(row.begin(), row.end());

  if (options.verify) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!verify_invariant(ctx, expand_mod(out, m, i, ctx.ell()))) {
        throw ComputationError("basis vector " + std::to_string(i) + " is not invariant");
      }
    }
  }
  return out;
}

std::size_t dimension(const FiniteQuadraticModule& m, const DimensionOptions& options) {
  const ModuleProfile prof = profile(m);
  if (!prof.epsilon) return 0;
  auto one = [&](const FiniteQuadraticModule& part) {
    ModEllOptions o;
    o.ell = options.ell ? *options.ell
                        : choose_primes(static_cast<std::uint64_t>(part.level()), 1, options.prime_min).front();
    return invariants_mod_ell(part, o).size();
  };
  if (!options.local) return one(m);
  std::size_t d = 1;
  for (const auto& part : p_parts(m)) {
    d *= one(part.module);
    if (d == 0) break;
  }
  return d;
}

InvariantBasis integral_basis(const FiniteQuadraticModule& m, const IntegralOptions& options) {
  const ModuleProfile prof = profile(m);
  InvariantBasis out = empty_basis(prof);
  if (!prof.epsilon) return out;
  const std::size_t dim = dimension(m);
  const auto n = static_cast<std::uint64_t>(m.level());

  std::size_t k = std::max<std::size_t>(options.primes, 1);
  for (std::size_t attempt = 0; attempt <= options.max_retries; ++attempt, k += 2) {
    const auto primes = choose_primes(n, k + 2, options.prime_min);
    const std::vector<std::uint64_t> lift_primes(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(k));

    std::vector<InvariantBasis> mods;
    for (auto ell : lift_primes) mods.push_back(invariants_mod_ell(m, {ell, false}));
    out.reps = mods.front().reps;
    if (dim == 0) {
      out.primes = lift_primes;
      return out;
    }

    // Primes of bad reduction show up as a different pivot pattern.
    std::optional<std::vector<std::size_t>> best;
    for (const auto& b : mods) {
      if (b.size() != dim) continue;
      const auto pat = pivot_pattern(b.vectors);
      if (!best || pat < *best) best = pat;
    }
    if (!best) continue;
    std::vector<std::uint64_t> used;
    std::vector<const InvariantBasis*> good;
    for (std::size_t i = 0; i < mods.size(); ++i) {
      if (mods[i].size() == dim && pivot_pattern(mods[i].vectors) == *best) {
        used.push_back(lift_primes[i]);
        good.push_back(&mods[i]);
      }
    }

    InvariantBasis cand = empty_basis(prof);
    cand.reps = out.reps;
    cand.primes = used;
    bool lifted = true;
    for (std::size_t r = 0; r < dim && lifted; ++r) {
      std::vector<std::vector<std::uint64_t>> residues;
      for (const auto* b : good) residues.emplace_back(b->vectors[r].begin(), b->vectors[r].end());
      try {
        const auto ints = primitive_integer_vector(rational_lift(residues, used));
        std::vector<std::int64_t> row;
        row.reserve(ints.size());
        for (const auto& z : ints) row.push_back(to_int64(z));
        cand.vectors.push_back(std::move(row));
      } catch (const ComputationError&) {
        lifted = false;
      }
    }
    if (!lifted) continue;

    bool certified = cand.size() == dim;
    for (const auto& x : cand.reps) certified = certified && m.q(x) == 0;
    for (std::size_t i = k; i < k + 2 && certified; ++i) certified = s_invariant_mod(m, cand, primes[i]);
    if (certified) return cand;
  }
  throw ComputationError("integral basis could not be certified");
}

InvariantBasis tensor_compose(const FiniteQuadraticModule& full, const std::vector<ModulePart>& parts,
                              const std::vector<InvariantBasis>& bases) {
  if (parts.size() != bases.size()) throw ComputationError("one basis per part is required");
  const ModuleProfile prof = profile(full);
  InvariantBasis out = empty_basis(prof);
  if (!prof.epsilon) return out;
  std::uint64_t order = 1;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    order *= parts[p].module.order();
    if (bases[p].ell != bases.front().ell) throw ComputationError("part bases live over different rings");
  }
  if (order != full.order()) throw ComputationError("parts do not decompose the module");
  out.ell = parts.empty() ? std::nullopt : bases.front().ell;
  for (const auto& b : bases) out.primes.insert(out.primes.end(), b.primes.begin(), b.primes.end());

  const SymmetrizedBasis sb = symmetrized_basis(full, out.epsilon);
  for (std::size_t j = 0; j < sb.m_prime; ++j) out.reps.push_back(full.element_at(sb.reps[j]));

  // Part coordinates of every element of the full module.
  std::vector<std::vector<std::uint64_t>> comp(static_cast<std::size_t>(full.order()),
                                               std::vector<std::uint64_t>(parts.size()));
  std::vector<std::uint64_t> idx(parts.size(), 0);
  for (std::uint64_t t = 0; t < order; ++t) {
    Element x = full.zero();
    for (std::size_t p = 0; p < parts.size(); ++p) {
      x = full.add(x, embed(full, parts[p], parts[p].module.element_at(idx[p])));
    }
    comp[full.index_of(x)] = idx;
    for (std::size_t p = parts.size(); p-- > 0;) {
      if (++idx[p] < parts[p].module.order()) break;
      idx[p] = 0;
    }
  }

  std::vector<std::vector<std::vector<std::int64_t>>> expanded(parts.size());
  std::size_t count = 1;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (std::size_t i = 0; i < bases[p].size(); ++i) expanded[p].push_back(bases[p].expand(parts[p].module, i));
    count *= bases[p].size();
  }
  std::vector<std::size_t> pick(parts.size(), 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::int64_t> vec(out.reps.size());
    for (std::size_t r = 0; r < out.reps.size(); ++r) {
      const auto& cs = comp[full.index_of(out.reps[r])];
      mpz_class v = 1;
      for (std::size_t p = 0; p < parts.size() && v != 0; ++p) {
        v *= static_cast<long>(expanded[p][pick[p]][cs[p]]);
        if (out.ell) v %= static_cast<unsigned long>(*out.ell);
      }
      vec[r] = to_int64(v);
    }
    out.vectors.push_back(std::move(vec));
    for (std::size_t p = parts.size(); p-- > 0;) {
      if (++pick[p] < bases[p].size()) break;
      pick[p] = 0;
    }
  }
  return out;
}

InvariantBasis local_integral_basis(const FiniteQuadraticModule& m, const IntegralOptions& options) {
  const ModuleProfile prof = profile(m);
  if (!prof.epsilon) return empty_basis(prof);
  const auto parts = p_parts(m);
  std::vector<InvariantBasis> bases;
  for (const auto& part : parts) bases.push_back(integral_basis(part.module, options));
  return tensor_compose(m, parts, bases);
}

std::size_t character_sum_dimension(const FiniteQuadraticModule& m, std::uint64_t bound) {
  const ModuleProfile prof = profile(m);
  if (!prof.epsilon) throw ComputationError("odd signature");
  const auto n = static_cast<std::uint64_t>(m.level());
  const std::uint64_t order = sl2_order(n);
  if (order > bound) {
    throw ComputationError("|SL_2(Z/" + std::to_string(n) + ")| = " + std::to_string(order) + " exceeds the bound " +
                           std::to_string(bound));
  }
  // The result lies in [0, |A|], so any prime above |A| recovers it.
  const WeilContext ctx(m, choose_primes(n, 1, m.order() + 1).front());
  const PrimeField& f = ctx.field();
  Residue sum = 0;
  for_each_group_matrix(ctx, bound, [&](const GroupElement&, const FieldMatrix& r) { sum = f.add(sum, r.trace()); });
  const Residue d = f.mul(sum, f.inv(f.reduce(static_cast<std::int64_t>(order))));
  if (d > m.order()) throw ComputationError("character sum does not lift to a dimension");
  return d;
}

FieldMatrix invariant_projection(const WeilContext& ctx, std::uint64_t bound) {
  const PrimeField& f = ctx.field();
  FieldMatrix p(ctx.size(), ctx.size(), ctx.ell());
  for_each_group_matrix(ctx, bound, [&](const GroupElement&, const FieldMatrix& r) {
    for (std::size_t y = 0; y < ctx.size(); ++y) {
      for (std::size_t x = 0; x < ctx.size(); ++x) p(y, x) = f.add(p(y, x), r(y, x));
    }
  });
  const Residue inv = f.inv(f.reduce(static_cast<std::int64_t>(sl2_order(static_cast<std::uint64_t>(ctx.level())))));
  for (std::size_t y = 0; y < ctx.size(); ++y) {
    for (std::size_t x = 0; x < ctx.size(); ++x) p(y, x) = f.mul(p(y, x), inv);
  }
  return p;
}

bool verify_invariant(const WeilContext& ctx, const std::vector<Residue>& v) {
  if (v.size() != ctx.size()) throw ComputationError("vector length does not match |A|");
  const auto t = ctx.apply_T(v);
  if (!std::equal(t.begin(), t.end(), v.begin())) return false;
  const auto s = ctx.apply_S(v);
  return std::equal(s.begin(), s.end(), v.begin());
}

}  // namespace weilinv
