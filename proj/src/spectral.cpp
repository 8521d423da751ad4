#include "qtorsion/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtorsion/numerics.hpp"

namespace qtorsion {

void SolverOptions::check() const {
  if (!(oversampling >= 1.0) || !std::isfinite(oversampling)) {
    throw std::invalid_argument("oversampling factor must be >= 1");
  }
  auto unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!unit(accept_tol)) throw std::invalid_argument("acceptance tolerance must lie in (0,1)");
  if (!unit(multiplicity_tol)) throw std::invalid_argument("multiplicity tolerance must lie in (0,1)");
  if (!unit(refine_width)) throw std::invalid_argument("refinement width must lie in (0,1)");
}

namespace {

// Row layout of the secular matrix, computed once per graph.
struct Term {
  Endpoint end;
  bool derivative;  // outward derivative / k instead of value
  double sign;
};

class SecularAssembler {
 public:
  explicit SecularAssembler(const MetricGraph& g) : g_(g) {
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      const auto& ends = g.incident(v);
      if (g.is_dirichlet(v)) {
        for (const auto& end : ends) rows_.push_back({{end, false, 1.0}});
        continue;
      }
      for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        rows_.push_back({{ends[i], false, 1.0}, {ends[i + 1], false, -1.0}});
      }
      std::vector<Term> flux;
      for (const auto& end : ends) flux.push_back({end, true, 1.0});
      if (!flux.empty()) rows_.push_back(std::move(flux));
    }
    n_ = 2 * g.num_edges();
    cos_.resize(g.num_edges());
    sin_.resize(g.num_edges());
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(n_); }

  void assemble(double k, Eigen::MatrixXd& m) {
    m.setZero(size(), size());
    for (std::size_t e = 0; e < g_.num_edges(); ++e) {
      const double x = k * g_.edges()[e].length;
      cos_[e] = std::cos(x);
      sin_[e] = std::sin(x);
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      for (const Term& t : rows_[r]) {
        const auto ca = static_cast<Eigen::Index>(2 * t.end.edge);
        const auto cb = ca + 1;
        const double c = cos_[t.end.edge];
        const double s = sin_[t.end.edge];
        double va, vb;
        if (!t.derivative) {
          va = t.end.side == 0 ? 1.0 : c;
          vb = t.end.side == 0 ? 0.0 : s;
        } else {
          va = t.end.side == 0 ? 0.0 : -s;
          vb = t.end.side == 0 ? -1.0 : c;
        }
        m(row, ca) += t.sign * va;
        m(row, cb) += t.sign * vb;
      }
    }
  }

  double sigma_min(double k) {
    assemble(k, work_);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(work_);
    return svd.singularValues()(size() - 1);
  }

 private:
  const MetricGraph& g_;
  std::vector<std::vector<Term>> rows_;
  std::size_t n_ = 0;
  std::vector<double> cos_, sin_;
  Eigen::MatrixXd work_;
};

// Integrals of cos(w s) and sin(w s) over [0, l].
double int_cos(double w, double l) { return w == 0.0 ? l : std::sin(w * l) / w; }
double int_sin(double w, double l) {
  if (w == 0.0) return 0.0;
  const double h = std::sin(0.5 * w * l);
  return 2.0 * h * h / w;
}

double edge_inner(double a1, double b1, double k1, double a2, double b2, double k2, double l) {
  const double d = k1 - k2;
  const double s = k1 + k2;
  const double cd = int_cos(d, l), cs = int_cos(s, l);
  const double sd = int_sin(d, l), ss = int_sin(s, l);
  return 0.5 * (a1 * a2 * (cd + cs) + b1 * b2 * (cd - cs) + a1 * b2 * (ss - sd) + b1 * a2 * (ss + sd));
}

double golden_minimize(SecularAssembler& asmb, double lo, double hi, double width, double& fbest) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = asmb.sigma_min(c);
  double fd = asmb.sigma_min(d);
  while (hi - lo > width) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = asmb.sigma_min(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = asmb.sigma_min(d);
    }
  }
  if (fc < fd) {
    fbest = fc;
    return c;
  }
  fbest = fd;
  return d;
}

struct Cluster {
  double k;
  double sigma;
  std::vector<EigenPair> pairs;
};

struct ScanState {
  const MetricGraph& g;
  const SolverOptions& opts;
  SecularAssembler asmb;
  double dk;
};

// Roots whose bracket centre k_i = i*dk has i in [first, last].
std::vector<Cluster> roots_on_grid(ScanState& st, long first, long last) {
  std::vector<Cluster> found;
  auto grid_k = [&](long i) { return i == 0 ? 0.5 * st.dk : static_cast<double>(i) * st.dk; };

  double prev = st.asmb.sigma_min(grid_k(first - 1));
  double cur = st.asmb.sigma_min(grid_k(first));
  Eigen::MatrixXd m;
  for (long i = first; i <= last; ++i) {
    const double next = st.asmb.sigma_min(grid_k(i + 1));
    if (cur < prev && cur <= next) {
      const double lo = grid_k(i - 1);
      const double hi = grid_k(i + 1);
      double fbest = 0.0;
      const double k = golden_minimize(st.asmb, lo, hi, st.opts.refine_width * grid_k(i), fbest);
      st.asmb.assemble(k, m);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double smax = sv(0);
      const Eigen::Index n = sv.size();
      if (sv(n - 1) < st.opts.accept_tol * smax) {
        Eigen::Index nullity = 0;
        while (nullity < n && sv(n - 1 - nullity) < st.opts.multiplicity_tol * smax) ++nullity;
        Cluster c{k, sv(n - 1), {}};
        for (Eigen::Index j = n - nullity; j < n; ++j) {
          EigenPair p;
          p.k = k;
          p.lambda = k * k;
          p.coeffs = svd.matrixV().col(j);
          c.pairs.push_back(std::move(p));
        }
        found.push_back(std::move(c));
      }
    }
    prev = cur;
    cur = next;
  }
  return found;
}

// Deterministic basis of one eigenspace: the first function carries the whole
// projection of 1, the rest have zero mass; signs fixed by mass, then by the
// first significant coefficient.
void canonicalize(std::vector<EigenPair>& pairs, const MetricGraph& g) {
  const double mass_tol = 1e-12 * std::sqrt(total_length(g));
  const auto m = static_cast<Eigen::Index>(pairs.size());
  if (m > 1) {
    Eigen::VectorXd c(m);
    for (Eigen::Index i = 0; i < m; ++i) c(i) = pairs[static_cast<std::size_t>(i)].mass;
    if (c.norm() > mass_tol) {
      const Eigen::MatrixXd cm = c;
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(cm);
      Eigen::MatrixXd q = qr.householderQ();
      Eigen::MatrixXd x(pairs.front().coeffs.size(), m);
      for (Eigen::Index i = 0; i < m; ++i) x.col(i) = pairs[static_cast<std::size_t>(i)].coeffs;
      x = x * q;
      for (Eigen::Index i = 0; i < m; ++i) {
        auto& p = pairs[static_cast<std::size_t>(i)];
        p.coeffs = x.col(i);
        p.mass = mass_coefficient(p, g);
      }
    }
  }
  for (auto& p : pairs) {
    bool flip = false;
    if (std::abs(p.mass) > mass_tol) {
      flip = p.mass < 0.0;
    } else {
      const double big = p.coeffs.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < p.coeffs.size(); ++i) {
        if (std::abs(p.coeffs(i)) > 1e-12 * big) {
          flip = p.coeffs(i) < 0.0;
          break;
        }
      }
    }
    if (flip) {
      p.coeffs = -p.coeffs;
      p.mass = -p.mass;
    }
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].multiplicity = pairs.size();
    pairs[i].multiplicity_index = i + 1;
  }
}

std::size_t dirichlet_decoupled_count(const MetricGraph& g, double k) {
  std::size_t n = 0;
  for (const auto& e : g.edges()) n += static_cast<std::size_t>(std::floor(k * e.length / kPi));
  return n;
}

void finalize_counts(SpectralBasis& b) {
  std::vector<double> sq;
  sq.reserve(b.pairs.size());
  for (const auto& p : b.pairs) sq.push_back(p.mass * p.mass);
  b.captured_mass = pairwise_sum(sq);
  b.weyl_min_count = dirichlet_decoupled_count(b.graph, b.kmax);
  b.weyl_max_count = b.weyl_min_count + b.graph.num_edges();
}

}  // namespace

Eigen::MatrixXd secular_matrix(const MetricGraph& g, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wavenumber k must be positive");
  require_valid(g);
  SecularAssembler asmb(g);
  Eigen::MatrixXd m;
  asmb.assemble(k, m);
  return m;
}

double sigma_min(const MetricGraph& g, double k) {
  Eigen::MatrixXd m = secular_matrix(g, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double grid_step(const MetricGraph& g, const SolverOptions& opts) {
  const double by_length = kPi / (opts.oversampling * total_length(g));
  const double by_edge = kPi / (4.0 * opts.oversampling * min_edge_length(g));
  return std::min(by_length, by_edge);
}

double l2_inner(const EigenPair& p, const EigenPair& q, const MetricGraph& g) {
  double sum = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    sum += edge_inner(p.a(e), p.b(e), p.k, q.a(e), q.b(e), q.k, g.edges()[e].length);
  }
  return sum;
}

double mass_coefficient(const EigenPair& p, const MetricGraph& g) {
  double sum = 0.0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const double l = g.edges()[e].length;
    sum += p.a(e) * int_cos(p.k, l) + p.b(e) * int_sin(p.k, l);
  }
  return sum;
}

double eval_eigenfunction(const EigenPair& p, const MetricGraph& g, const GraphPoint& x) {
  auto e = g.find_edge(x.edge);
  if (!e) throw GraphError("unknown edge id '" + x.edge + "'");
  const double l = g.edges()[*e].length;
  if (!(x.s >= 0.0 && x.s <= l)) throw GraphError("point lies outside edge '" + x.edge + "'");
  return p.a(*e) * std::cos(p.k * x.s) + p.b(*e) * std::sin(p.k * x.s);
}

double vertex_condition_residual(const EigenPair& p, const MetricGraph& g) {
  SecularAssembler asmb(g);
  Eigen::MatrixXd m;
  asmb.assemble(p.k, m);
  return (m * p.coeffs).cwiseAbs().maxCoeff();
}

std::vector<EigenPair> orthonormalize(std::span<const EigenPair> pairs, const MetricGraph& g) {
  const auto m = static_cast<Eigen::Index>(pairs.size());
  if (m == 0) return {};
  for (const auto& p : pairs) {
    if (p.k != pairs.front().k) throw SolverError("orthonormalize: pairs must share one wavenumber");
  }
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      gram(i, j) = gram(j, i) = l2_inner(pairs[static_cast<std::size_t>(i)], pairs[static_cast<std::size_t>(j)], g);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(gram);
  const double gmax = spectrum.eigenvalues().maxCoeff();
  if (!(spectrum.eigenvalues().minCoeff() > 1e-10 * gmax)) {
    throw SolverError("orthonormalize: null vectors are numerically dependent");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  Eigen::MatrixXd x(pairs.front().coeffs.size(), m);
  for (Eigen::Index i = 0; i < m; ++i) x.col(i) = pairs[static_cast<std::size_t>(i)].coeffs;
  // X L^{-T} has identity Gram matrix.
  Eigen::MatrixXd y = llt.matrixU().solve<Eigen::OnTheRight>(x);
  std::vector<EigenPair> out(pairs.begin(), pairs.end());
  for (Eigen::Index i = 0; i < m; ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.coeffs = y.col(i);
    p.mass = mass_coefficient(p, g);
  }
  return out;
}

SpectralBasis scan_spectrum(const MetricGraph& g, double kmax, const SolverOptions& opts) {
  if (!(kmax > 0.0) || !std::isfinite(kmax)) throw std::invalid_argument("kmax must be positive");
  opts.check();
  require_valid(g);

  SpectralBasis basis;
  basis.graph = g;
  basis.kmax = kmax;
  basis.options = opts;
  basis.grid_step = grid_step(g, opts);

  ScanState st{g, opts, SecularAssembler(g), basis.grid_step};
  const long last_main = static_cast<long>(std::ceil(kmax / st.dk));
  std::vector<Cluster> clusters = roots_on_grid(st, 1, last_main);

  // Keep scanning past kmax for the next eigenvalue (used by the tail bound).
  const long chunk = std::max(4L, static_cast<long>(std::ceil(kPi / max_edge_length(g) / st.dk)));
  const long give_up = last_main + chunk * static_cast<long>(g.num_edges() + 2);
  long done = last_main;
  auto beyond = [&] {
    return std::any_of(clusters.begin(), clusters.end(), [&](const Cluster& c) { return c.k > kmax; });
  };
  while (!beyond() && done < give_up) {
    auto more = roots_on_grid(st, done + 1, done + chunk);
    clusters.insert(clusters.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    done += chunk;
  }

  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) { return a.k < b.k; });
  std::vector<Cluster> merged;
  for (auto& c : clusters) {
    if (!merged.empty() && std::abs(c.k - merged.back().k) <= 1e-10 * c.k) {
      std::ostringstream os;
      os << "scan grid too coarse: two brackets refined to the same root near k=" << c.k;
      basis.warnings.push_back(os.str());
      if (c.sigma < merged.back().sigma) merged.back() = std::move(c);
      continue;
    }
    merged.push_back(std::move(c));
  }

  for (auto& c : merged) {
    if (c.k > kmax) {
      basis.next_lambda = c.k * c.k;
      break;
    }
    auto pairs = orthonormalize(c.pairs, g);
    canonicalize(pairs, g);
    for (auto& p : pairs) basis.pairs.push_back(std::move(p));
  }

  finalize_counts(basis);
  if (basis.pairs.size() < basis.weyl_min_count) {
    std::ostringstream os;
    os << "missed-root audit: found " << basis.pairs.size() << " eigenvalues with k <= " << kmax
       << " but at least " << basis.weyl_min_count << " must exist";
    basis.warnings.push_back(os.str());
  } else if (basis.pairs.size() > basis.weyl_max_count) {
    std::ostringstream os;
    os << "missed-root audit: found " << basis.pairs.size() << " eigenvalues with k <= " << kmax
       << " but at most " << basis.weyl_max_count << " can exist";
    basis.warnings.push_back(os.str());
  }
  if (!basis.next_lambda) {
    basis.warnings.push_back("no eigenvalue located beyond kmax; tail bound falls back to the Weyl estimate");
  }
  return basis;
}

SpectralBasis scan_first_n(const MetricGraph& g, std::size_t n, const SolverOptions& opts) {
  if (n == 0) throw std::invalid_argument("number of eigenvalues must be positive");
  require_valid(g);
  // Dirichlet decoupling guarantees at least n eigenvalues below this wavenumber.
  const double kmax = kPi * static_cast<double>(n + g.num_edges()) / total_length(g);
  SpectralBasis basis = scan_spectrum(g, kmax, opts);
  if (basis.pairs.size() <= n) return basis;

  std::size_t keep = n;
  while (keep < basis.pairs.size() && basis.pairs[keep].k == basis.pairs[n - 1].k) ++keep;
  if (keep < basis.pairs.size()) {
    basis.next_lambda = basis.pairs[keep].lambda;
    basis.pairs.resize(keep);
  }
  basis.kmax = basis.pairs.back().k;
  finalize_counts(basis);
  return basis;
}

}  // namespace qtorsion
