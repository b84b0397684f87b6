#include "qhdef/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qhdef {

namespace {

constexpr int kRetryBudget = 8;
constexpr double kActionScale = 0.1;
constexpr double kKernelThreshold = 1e-8;
constexpr double kRankTol = 1e-8;
constexpr int kMomentVectorsPerFactor = 4;

struct Accumulator {
  double max = 0.0;
  double sum = 0.0;
  long n = 0;
  void add(double r) {
    r = std::abs(r);
    max = std::max(max, r);
    sum += r;
    ++n;
  }
  AxiomResult result(const std::string& name, double tol) const {
    AxiomResult a;
    a.name = name;
    a.max_residual = max;
    a.mean_residual = n ? sum / static_cast<double>(n) : 0.0;
    a.count = n;
    a.pass = max <= tol;
    return a;
  }
};

/// Matrix of v -> Ad_g v + v in basis coordinates.
RMat ad_plus_one_op(const GroupModel& model, const Mat& g) {
  const int d = model.dim();
  Mat ginv = g.inverse();
  RMat op(d, d);
  for (int k = 0; k < d; ++k) {
    Mat img = g * model.basis()[k] * ginv + model.basis()[k];
    op.col(k) = model.coords(img);
  }
  return op;
}

double contract_row(const TwoForm& omega, const RVec& u, const RVec& X, int m) {
  double v = 0.0;
  for (int i = 0; i < X.size(); ++i)
    if (X(i) != 0.0 && i != m) v += X(i) * omega(u, i, m);
  return v;
}

template <typename Fn>
auto with_retries(Fn&& fn, std::uint64_t seed) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn(mix_seed(seed, 7000 + attempt));
    } catch (const std::domain_error&) {
      if (attempt + 1 >= kRetryBudget) throw;
    }
  }
}

struct CommonChecks {
  Accumulator b1, b2, b3, equiv;
  RankInfo ranks;
};

void check_equivariance(const StructuredSpace& space, const RVec& u,
                        std::uint64_t seed, Accumulator& acc) {
  const int nf = static_cast<int>(space.factors.size());
  std::vector<Mat> mu = space.moment(u);
  for (int f = 0; f < nf; ++f) {
    const GroupModel& model = *space.factors[f];
    double r = with_retries(
        [&](std::uint64_t s) {
          GroupElement g = model.sample_group(s, kActionScale);
          RVec u2 = space.act(f, g, u);
          std::vector<Mat> mu2 = space.moment(u2);
          double worst = 0.0;
          Mat ginv = g.mat.inverse();
          for (int slot = 0; slot < nf; ++slot) {
            // conjugation on the acted factor (= Ad_g for algebra-valued
            // moments), identity on the others
            Mat expected = (slot == f) ? Mat(g.mat * mu[slot] * ginv) : mu[slot];
            worst = std::max(worst, (mu2[slot] - expected).norm());
          }
          return worst;
        },
        mix_seed(seed, 31 + f));
    acc.add(r);
  }
}

}  // namespace

const AxiomResult* Report::find(const std::string& name) const {
  for (const auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

double cartan_chi(const GroupModel& model, const AlgebraVector& a,
                  const AlgebraVector& b, const AlgebraVector& c) {
  return 0.5 * model.pair(a, ad(b, c));
}

RVec sample_chart_point(const Chart& chart, std::uint64_t seed) {
  const int d = chart.dim;
  RVec u(d);
  if (d == 0) return u;
  const double amp = 0.5 * chart.domain_radius / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    u(i) = uniform_pm(mix_seed(seed, static_cast<std::uint64_t>(i)), amp);
  return u;
}

namespace {

Report check_common(const StructuredSpace& space, const CheckConfig& cfg, bool qh) {
  if ((space.flavor == Flavor::quasi_hamiltonian) != qh)
    throw std::invalid_argument("axiom check called on the wrong flavor of space");
  if (cfg.samples < 1 || cfg.tol <= 0 || cfg.fd_step <= 0)
    throw std::invalid_argument("CheckConfig: samples, tol and fd_step must be positive");

  const int dim = space.dim();
  const int nf = static_cast<int>(space.factors.size());
  const double resc = space.pairing_rescale;
  const int msign = qh ? cfg.signs.moment_sign_qh : cfg.signs.moment_sign_ham;

  CommonChecks acc;
  acc.ranks.chart_dim = dim;
  acc.ranks.gram_rank_min = dim;
  acc.ranks.gram_rank_max = 0;

  for (int s = 0; s < cfg.samples; ++s) {
    const std::uint64_t pt_seed = mix_seed(cfg.seed, 100 + s);
    RVec u = sample_chart_point(space.chart, pt_seed);

    // left-trivialized moment differentials per factor and frame direction
    std::vector<std::vector<AlgebraVector>> dmu(nf);
    for (int f = 0; f < nf; ++f) {
      dmu[f].reserve(dim);
      for (int k = 0; k < dim; ++k) dmu[f].push_back(space.moment_deriv(f, u, k));
    }
    std::vector<Mat> mu = space.moment(u);

    // B1: relative closedness (chi term vanishes for the Hamiltonian flavor,
    // where the moment is algebra valued and d sigma = 0 stands alone).
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
          double r = ext_deriv_2form(space.omega, u, i, j, k, cfg.fd_step,
                                     space.chart.domain_radius);
          if (qh) {
            double chi_total = 0.0;
            for (int f = 0; f < nf; ++f)
              chi_total += resc * cartan_chi(*space.factors[f], dmu[f][i], dmu[f][j], dmu[f][k]);
            r += cfg.signs.chi_sign * chi_total;
          }
          acc.b1.add(r);
        }

    // B2: moment condition over sampled algebra vectors and frame directions
    for (int f = 0; f < nf; ++f) {
      const GroupModel& model = *space.factors[f];
      for (int nv = 0; nv < kMomentVectorsPerFactor; ++nv) {
        AlgebraVector v = model.sample_algebra(mix_seed(pt_seed, 50 + f * 97 + nv), 1.0);
        RVec X = space.inf_act(f, v, u);
        for (int m = 0; m < dim; ++m) {
          const double lhs = contract_row(space.omega, u, X, m);
          double rhs;
          if (qh) {
            AlgebraVector pulled{dmu[f][m].mat + mu[f] * dmu[f][m].mat * mu[f].inverse()};
            rhs = msign * 0.5 * resc * model.pair(pulled, v);
          } else {
            rhs = msign * resc * model.pair(dmu[f][m], v);
          }
          acc.b2.add(lhs - rhs);
        }
      }
    }

    // B3: rank where Ad_mu + 1 is invertible (always for the Hamiltonian
    // flavor), kernel condition otherwise
    bool invertible = true;
    std::vector<std::pair<int, RVec>> kernel_vectors;
    if (qh) {
      for (int f = 0; f < nf; ++f) {
        RMat op = ad_plus_one_op(*space.factors[f], mu[f]);
        Eigen::JacobiSVD<RMat> svd(op, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        for (int k = 0; k < sv.size(); ++k)
          if (sv(k) <= kKernelThreshold) {
            invertible = false;
            kernel_vectors.emplace_back(f, svd.matrixV().col(k));
          }
      }
    }
    if (invertible) {
      GramRank gr = gram_rank(space.omega, u, dim, kRankTol);
      acc.ranks.gram_rank_min = std::min(acc.ranks.gram_rank_min, gr.rank);
      acc.ranks.gram_rank_max = std::max(acc.ranks.gram_rank_max, gr.rank);
      ++acc.ranks.rank_points;
      acc.b3.add(static_cast<double>(dim - gr.rank));
    } else {
      ++acc.ranks.kernel_points;
      for (const auto& [f, w] : kernel_vectors) {
        AlgebraVector v = space.factors[f]->from_coords(w);
        RVec X = space.inf_act(f, v, u);
        double worst = 0.0;
        for (int m = 0; m < dim; ++m)
          worst = std::max(worst, std::abs(contract_row(space.omega, u, X, m)));
        acc.b3.add(worst);
      }
    }

    check_equivariance(space, u, pt_seed, acc.equiv);
  }

  if (acc.ranks.rank_points == 0) acc.ranks.gram_rank_min = 0;

  Report rep;
  rep.space_kind = qh ? "quasi_hamiltonian" : "hamiltonian";
  rep.config = cfg;
  rep.pairing_scale = nf ? space.factors[0]->pairing_scale() : 1.0;
  rep.pairing_rescale = resc;
  rep.axioms = {
      acc.b1.result("B1", cfg.tol),
      acc.b2.result("B2", cfg.tol),
      acc.b3.result("B3", cfg.tol),
      acc.equiv.result("equivariance", cfg.tol),
  };
  rep.ranks = acc.ranks;
  rep.pass = std::all_of(rep.axioms.begin(), rep.axioms.end(),
                         [](const AxiomResult& a) { return a.pass; });
  return rep;
}

}  // namespace

Report check_qh(const StructuredSpace& space, const CheckConfig& cfg) {
  return check_common(space, cfg, true);
}

Report check_ham(const StructuredSpace& space, const CheckConfig& cfg) {
  return check_common(space, cfg, false);
}

namespace {

/// Least-squares slope of log(dev) against log(t), ignoring deviations at the
/// exactness floor. Returns NaN (a vacuous pass) if fewer than two points
/// remain.
double fit_slope(const std::vector<std::pair<double, double>>& dev) {
  std::vector<std::pair<double, double>> pts;
  for (auto [t, d] : dev)
    if (t > 0.0 && d > 1e-13) pts.emplace_back(std::log(t), std::log(d));
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

FamilyReport check_family(const DeformationFamily& fam, const std::vector<double>& t_grid,
                          const CheckConfig& cfg) {
  if (std::find(t_grid.begin(), t_grid.end(), 0.0) == t_grid.end())
    throw std::invalid_argument("check_family: t grid must contain 0");
  if (std::find(t_grid.begin(), t_grid.end(), 1.0) == t_grid.end())
    throw std::invalid_argument("check_family: t grid must contain 1");
  for (double t : t_grid)
    if (!fam.contains(t)) {
      throw std::domain_error("check_family: grid point t = " + std::to_string(t) +
                              " outside the family interval");
    }

  FamilyReport rep;
  rep.t_grid = t_grid;

  for (double t : t_grid) {
    StructuredSpace f = fiber(fam, t);
    rep.per_t.push_back(t != 0.0 ? check_qh(f, cfg) : check_ham(f, cfg));
  }

  // convergence of forms and phi-chart moments towards the zero fiber on
  // shared chart samples
  const int nf = static_cast<int>(fam.factors.size());
  std::vector<RVec> samples;
  Chart pseudo{fam.chart_dim, fam.domain_radius, nullptr};
  for (int s = 0; s < cfg.samples; ++s)
    samples.push_back(sample_chart_point(pseudo, mix_seed(cfg.seed, 100 + s)));

  std::vector<std::pair<double, double>> form_devs, mu_devs;
  for (double t : t_grid) {
    ConvergenceRow row;
    row.t = t;
    long nform = 0, nmu = 0;
    for (const RVec& u : samples) {
      for (int i = 0; i < fam.chart_dim; ++i)
        for (int j = i + 1; j < fam.chart_dim; ++j) {
          const double dev = std::abs(fam.omega(t, u, i, j) - fam.omega(0.0, u, i, j));
          row.form_max = std::max(row.form_max, dev);
          row.form_mean += dev;
          ++nform;
        }
      for (int f = 0; f < nf; ++f) {
        const GroupModel& model = *fam.factors[f];
        RVec xt = model.coords(fam.mu_hat(f, u, t).x.mat);
        RVec x0 = model.coords(fam.mu_hat(f, u, 0.0).x.mat);
        const double dev = (xt - x0).norm();
        row.mu_max = std::max(row.mu_max, dev);
        row.mu_mean += dev;
        ++nmu;
      }
    }
    if (nform) row.form_mean /= static_cast<double>(nform);
    if (nmu) row.mu_mean /= static_cast<double>(nmu);
    rep.convergence.push_back(row);
    if (t != 0.0) {
      form_devs.emplace_back(t, row.form_max);
      mu_devs.emplace_back(t, row.mu_max);
    }
  }

  rep.slope_form = fit_slope(form_devs);
  rep.slope_mu = fit_slope(mu_devs);
  auto slope_ok = [](double s) { return std::isnan(s) || s >= 0.9; };
  rep.slopes_pass = slope_ok(rep.slope_form) && slope_ok(rep.slope_mu);

  rep.pass = rep.slopes_pass &&
             std::all_of(rep.per_t.begin(), rep.per_t.end(),
                         [](const Report& r) { return r.pass; });
  return rep;
}

}  // namespace qhdef
