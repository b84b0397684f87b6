#include "qhdef/fusion.hpp"

#include <stdexcept>

namespace qhdef {

namespace {

StructuredSpace point_space(GroupModelPtr model, Flavor flavor) {
  StructuredSpace s;
  s.flavor = flavor;
  s.factors = {model};
  s.chart.dim = 0;
  s.chart.domain_radius = 1.0;
  const int n = model->matrix_size();
  s.chart.embed = [n](const RVec&) -> Point { return {Mat::Identity(n, n)}; };
  s.omega = [](const RVec&, int, int) { return 0.0; };
  if (flavor == Flavor::quasi_hamiltonian) {
    s.moment = [n](const RVec&) -> std::vector<Mat> { return {Mat::Identity(n, n)}; };
  } else {
    s.moment = [n](const RVec&) -> std::vector<Mat> { return {Mat::Zero(n, n)}; };
  }
  s.moment_deriv = [model](int, const RVec&, int) { return model->zero(); };
  s.act = [](int, const GroupElement&, const RVec& u) { return u; };
  s.inf_act = [](int, const AlgebraVector&, const RVec& u) { return RVec::Zero(u.size()); };
  return s;
}

void check_fusable(const StructuredSpace& s, int i, int j) {
  const int n = static_cast<int>(s.factors.size());
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("internal fusion: factor indices out of range");
  if (s.factors[i]->name() != s.factors[j]->name())
    throw std::invalid_argument("internal fusion: factors act through different group models");
}

/// Shared factor bookkeeping: factor j folds into factor i, everything else
/// keeps its order. Returns old indices in new order.
std::vector<int> merged_index_map(int n_factors, int j) {
  std::vector<int> map;
  for (int f = 0; f < n_factors; ++f)
    if (f != j) map.push_back(f);
  return map;
}

StructuredSpace merge_common(const StructuredSpace& s, int i, int j) {
  StructuredSpace out = s;
  const auto idx = merged_index_map(static_cast<int>(s.factors.size()), j);

  out.factors.clear();
  for (int old : idx) out.factors.push_back(s.factors[old]);

  out.act = [s, idx, i, j](int f, const GroupElement& g, const RVec& u) {
    const int old = idx[f];
    if (old != i) return s.act(old, g, u);
    return s.act(i, g, s.act(j, g, u));
  };
  out.inf_act = [s, idx, i, j](int f, const AlgebraVector& v, const RVec& u) {
    const int old = idx[f];
    if (old != i) return s.inf_act(old, v, u);
    return RVec(s.inf_act(i, v, u) + s.inf_act(j, v, u));
  };
  return out;
}

}  // namespace

StructuredSpace product_space(const StructuredSpace& s1, const StructuredSpace& s2) {
  if (s1.flavor != s2.flavor)
    throw std::invalid_argument("product_space: mixed flavors");
  if (s1.pairing_rescale != s2.pairing_rescale)
    throw std::invalid_argument("product_space: pairing rescales differ");
  const int d1 = s1.dim(), d2 = s2.dim();
  const int n1 = static_cast<int>(s1.factors.size());

  StructuredSpace s;
  s.flavor = s1.flavor;
  s.pairing_rescale = s1.pairing_rescale;
  s.factors = s1.factors;
  s.factors.insert(s.factors.end(), s2.factors.begin(), s2.factors.end());
  s.chart.dim = d1 + d2;
  s.chart.domain_radius = std::min(s1.chart.domain_radius, s2.chart.domain_radius);
  s.chart.embed = [s1, s2, d1, d2](const RVec& u) {
    Point p = s1.chart.embed(u.head(d1));
    Point q = s2.chart.embed(u.tail(d2));
    p.insert(p.end(), q.begin(), q.end());
    return p;
  };
  s.omega = [s1, s2, d1, d2](const RVec& u, int i, int j) {
    if (i < d1 && j < d1) return s1.omega(u.head(d1), i, j);
    if (i >= d1 && j >= d1) return s2.omega(u.tail(d2), i - d1, j - d1);
    return 0.0;
  };
  s.moment = [s1, s2, d1, d2](const RVec& u) {
    auto m = s1.moment(u.head(d1));
    auto m2 = s2.moment(u.tail(d2));
    m.insert(m.end(), m2.begin(), m2.end());
    return m;
  };
  s.moment_deriv = [s1, s2, d1, d2, n1](int f, const RVec& u, int k) {
    if (f < n1) {
      if (k < d1) return s1.moment_deriv(f, u.head(d1), k);
      return AlgebraVector{Mat::Zero(s1.factors[f]->matrix_size(), s1.factors[f]->matrix_size())};
    }
    if (k >= d1) return s2.moment_deriv(f - n1, u.tail(d2), k - d1);
    return AlgebraVector{Mat::Zero(s2.factors[f - n1]->matrix_size(), s2.factors[f - n1]->matrix_size())};
  };
  s.act = [s1, s2, d1, d2, n1](int f, const GroupElement& g, const RVec& u) {
    RVec out = u;
    if (f < n1)
      out.head(d1) = s1.act(f, g, u.head(d1));
    else
      out.tail(d2) = s2.act(f - n1, g, u.tail(d2));
    return out;
  };
  s.inf_act = [s1, s2, d1, d2, n1](int f, const AlgebraVector& v, const RVec& u) {
    RVec out = RVec::Zero(d1 + d2);
    if (f < n1)
      out.head(d1) = s1.inf_act(f, v, u.head(d1));
    else
      out.tail(d2) = s2.inf_act(f - n1, v, u.tail(d2));
    return out;
  };
  return s;
}

StructuredSpace internal_fuse_qh(const StructuredSpace& s, int i, int j) {
  if (s.flavor != Flavor::quasi_hamiltonian)
    throw std::invalid_argument("internal_fuse_qh: space is not quasi-Hamiltonian");
  check_fusable(s, i, j);
  GroupModelPtr model = s.factors[i];
  StructuredSpace out = merge_common(s, i, j);
  const auto idx = merged_index_map(static_cast<int>(s.factors.size()), j);
  const double resc = s.pairing_rescale;

  out.omega = [s, model, resc, i, j](const RVec& u, int a, int b) {
    AlgebraVector la = s.moment_deriv(i, u, a), lb = s.moment_deriv(i, u, b);
    GroupElement mj{s.moment(u)[j]};
    AlgebraVector ra = Ad(mj, s.moment_deriv(j, u, a));
    AlgebraVector rb = Ad(mj, s.moment_deriv(j, u, b));
    return s.omega(u, a, b) + 0.5 * resc * wedge_pair(*model, la, lb, ra, rb);
  };
  out.moment = [s, idx, i, j](const RVec& u) {
    auto m = s.moment(u);
    std::vector<Mat> out_m;
    for (int old : idx)
      out_m.push_back(old == i ? Mat(m[i] * m[j]) : m[old]);
    return out_m;
  };
  out.moment_deriv = [s, idx, i, j](int f, const RVec& u, int k) {
    const int old = idx[f];
    if (old != i) return s.moment_deriv(old, u, k);
    // theta^L(d(mu_i mu_j)) = Ad_{mu_j^-1} theta^L(d mu_i) + theta^L(d mu_j)
    Mat mj = s.moment(u)[j];
    AlgebraVector di = s.moment_deriv(i, u, k), dj = s.moment_deriv(j, u, k);
    return AlgebraVector{mj.inverse() * di.mat * mj + dj.mat};
  };
  return out;
}

StructuredSpace internal_fuse_ham(const StructuredSpace& s, int i, int j) {
  if (s.flavor != Flavor::hamiltonian)
    throw std::invalid_argument("internal_fuse_ham: space is not Hamiltonian");
  check_fusable(s, i, j);
  StructuredSpace out = merge_common(s, i, j);
  const auto idx = merged_index_map(static_cast<int>(s.factors.size()), j);

  out.moment = [s, idx, i, j](const RVec& u) {
    auto m = s.moment(u);
    std::vector<Mat> out_m;
    for (int old : idx)
      out_m.push_back(old == i ? Mat(m[i] + m[j]) : m[old]);
    return out_m;
  };
  out.moment_deriv = [s, idx, i, j](int f, const RVec& u, int k) {
    const int old = idx[f];
    if (old != i) return s.moment_deriv(old, u, k);
    return AlgebraVector{s.moment_deriv(i, u, k).mat + s.moment_deriv(j, u, k).mat};
  };
  return out;
}

StructuredSpace external_fuse(const StructuredSpace& s1, const StructuredSpace& s2,
                              int i, int j) {
  StructuredSpace prod = product_space(s1, s2);
  const int jj = static_cast<int>(s1.factors.size()) + j;
  if (prod.flavor == Flavor::quasi_hamiltonian) return internal_fuse_qh(prod, i, jj);
  return internal_fuse_ham(prod, i, jj);
}

namespace {

StructuredSpace moduli_common(GroupModelPtr model, int genus, int boundaries,
                              std::uint64_t base_seed, bool qh) {
  if (genus < 0 || boundaries < 0)
    throw std::invalid_argument("moduli: genus and boundary count must be nonnegative");
  const Flavor flavor = qh ? Flavor::quasi_hamiltonian : Flavor::hamiltonian;
  if (genus == 0 && boundaries == 0) return point_space(model, flavor);

  auto block = [&](int index, bool handle) {
    GroupElement alpha0 = base_seed ? model->sample_group(mix_seed(base_seed, index), 0.3)
                                    : model->identity();
    if (qh) {
      StructuredSpace d = double_space(model, alpha0, model->identity());
      return handle ? internal_fuse_qh(d, 0, 1) : d;
    }
    StructuredSpace t = tstar_space(model, alpha0, model->zero());
    return handle ? internal_fuse_ham(t, 0, 1) : t;
  };

  // r boundary blocks left to right, then g handle blocks
  StructuredSpace acc = block(0, boundaries == 0);
  for (int b = 1; b < boundaries; ++b) acc = external_fuse(acc, block(b, false), 0, 0);
  for (int h = boundaries == 0 ? 1 : 0; h < genus; ++h)
    acc = external_fuse(acc, block(boundaries + h, true), 0, 0);
  return acc;
}

}  // namespace

StructuredSpace moduli_qh(GroupModelPtr model, int genus, int boundaries,
                          std::uint64_t base_seed) {
  return moduli_common(std::move(model), genus, boundaries, base_seed, true);
}

StructuredSpace moduli_ham(GroupModelPtr model, int genus, int boundaries,
                           std::uint64_t base_seed) {
  return moduli_common(std::move(model), genus, boundaries, base_seed, false);
}

}  // namespace qhdef
