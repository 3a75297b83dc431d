#include "fthss/rational.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

extern "C" void zggev_(const char*, const char*, const int*, std::complex<double>*, const int*,
                       std::complex<double>*, const int*, std::complex<double>*,
                       std::complex<double>*, std::complex<double>*, const int*,
                       std::complex<double>*, const int*, std::complex<double>*, const int*,
                       double*, int*);

namespace fthss {

namespace {

void check_samples(const std::vector<cplx>& z, int m_max) {
  if (z.size() < 4) throw std::invalid_argument("aaa: need at least 4 samples");
  if (2 * static_cast<size_t>(m_max) > z.size())
    throw std::invalid_argument("aaa: fewer samples than 2*m requested");
  bool all_same = true;
  for (const cplx& w : z) all_same = all_same && (w == z[0]);
  if (all_same) throw std::invalid_argument("aaa: all samples identical");
}

// smallest right singular vector; tall systems are QR-reduced first so the
// (Jacobi) SVD only ever sees an m x m triangle
VectorXcd smallest_singular_vector(const MatrixXcd& L) {
  const Eigen::Index m = L.cols();
  if (L.rows() > 2 * m) {
    Eigen::HouseholderQR<MatrixXcd> qr(L);
    MatrixXcd R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<MatrixXcd> svd(R, Eigen::ComputeFullV);
    return svd.matrixV().col(m - 1);
  }
  Eigen::JacobiSVD<MatrixXcd> svd(L, Eigen::ComputeThinV);
  return svd.matrixV().col(m - 1);
}

// column j of `values` goes with support[j]; shared by the approximant and
// the in-progress greedy loop
VectorXcd bary_eval(const std::vector<cplx>& support, const VectorXcd& w, const MatrixXcd& values,
                    cplx z) {
  const int m = static_cast<int>(support.size());
  for (int j = 0; j < m; ++j)
    if (z == support[static_cast<size_t>(j)]) return values.col(j);
  VectorXcd num = VectorXcd::Zero(values.rows());
  cplx den = 0.0;
  for (int j = 0; j < m; ++j) {
    const cplx c = w(j) / (z - support[static_cast<size_t>(j)]);
    num += c * values.col(j);
    den += c;
  }
  return num / den;
}

} // namespace

VectorXcd RationalApproximant::eval(cplx w) const { return bary_eval(support, weights, values, w); }

VectorXcd RationalApproximant::eval_precise(cplx w) const { return eval_offset(w, cplx(0, 0)); }

VectorXcd RationalApproximant::eval_offset(cplx center, cplx offset) const {
  using cplxl = std::complex<long double>;
  const int m = order();
  const cplx w = center + offset;
  for (int j = 0; j < m; ++j)
    if (w == support[static_cast<size_t>(j)]) return values.col(j);
  const cplxl off(offset.real(), offset.imag());
  const cplxl ctr(center.real(), center.imag());
  std::vector<cplxl> num(static_cast<size_t>(dim()), cplxl(0, 0));
  cplxl den(0, 0);
  for (int j = 0; j < m; ++j) {
    const cplx& s = support[static_cast<size_t>(j)];
    const cplxl c =
        cplxl(weights(j).real(), weights(j).imag()) / ((ctr - cplxl(s.real(), s.imag())) + off);
    den += c;
    for (int n = 0; n < dim(); ++n)
      num[static_cast<size_t>(n)] += c * cplxl(values(n, j).real(), values(n, j).imag());
  }
  VectorXcd out(dim());
  for (int n = 0; n < dim(); ++n) {
    const cplxl v = num[static_cast<size_t>(n)] / den;
    out(n) = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  return out;
}

cplx RationalApproximant::eval_component(cplx w, int n) const {
  for (int j = 0; j < order(); ++j)
    if (w == support[static_cast<size_t>(j)]) return values(n, j);
  cplx num = 0.0, den = 0.0;
  for (int j = 0; j < order(); ++j) {
    const cplx c = weights(j) / (w - support[static_cast<size_t>(j)]);
    num += c * values(n, j);
    den += c;
  }
  return num / den;
}

cplx RationalApproximant::denominator(cplx w) const {
  cplx den = 0.0;
  for (int j = 0; j < order(); ++j) den += weights(j) / (w - support[static_cast<size_t>(j)]);
  return den;
}

double RationalApproximant::denominator_root_defect(cplx rho) const {
  double dist = 1e300, vmax = 0.0;
  for (int j = 0; j < order(); ++j) {
    dist = std::min(dist, std::abs(rho - support[static_cast<size_t>(j)]));
    vmax = std::max(vmax, std::abs(weights(j)));
  }
  return std::abs(denominator(rho)) * dist / vmax;
}

RationalApproximant aaa_vector(const std::vector<cplx>& samples, const MatrixXcd& f, double tol,
                               int m_max) {
  const int M = static_cast<int>(samples.size());
  const int N = static_cast<int>(f.rows());
  if (f.cols() != M) throw std::invalid_argument("aaa: value/sample count mismatch");
  check_samples(samples, m_max);

  const double scale = f.cwiseAbs().maxCoeff();
  RationalApproximant r;
  r.tol = tol;
  r.sample_scale = scale;

  std::vector<int> support_idx;
  std::vector<char> is_support(static_cast<size_t>(M), 0);

  // residual on every sample (max over components); level 0 compares against
  // the componentwise mean
  VectorXcd mean = f.rowwise().mean();
  std::vector<double> resid(static_cast<size_t>(M));
  for (int i = 0; i < M; ++i) resid[static_cast<size_t>(i)] = (f.col(i) - mean).cwiseAbs().maxCoeff();

  for (int m = 1; m <= m_max; ++m) {
    int pick = -1;
    double best = -1.0;
    for (int i = 0; i < M; ++i)
      if (!is_support[static_cast<size_t>(i)] && resid[static_cast<size_t>(i)] > best) {
        best = resid[static_cast<size_t>(i)];
        pick = i;
      }
    if (pick < 0) break;
    support_idx.push_back(pick);
    is_support[static_cast<size_t>(pick)] = 1;

    r.support.clear();
    for (int j : support_idx) r.support.push_back(samples[static_cast<size_t>(j)]);
    r.values.resize(N, m);
    for (int c = 0; c < m; ++c) r.values.col(c) = f.col(support_idx[static_cast<size_t>(c)]);

    // stacked Loewner matrix over the non-support samples
    const int rows = (M - m) * N;
    MatrixXcd L(rows, m);
    int rr = 0;
    for (int i = 0; i < M; ++i) {
      if (is_support[static_cast<size_t>(i)]) continue;
      for (int n = 0; n < N; ++n) {
        for (int j = 0; j < m; ++j)
          L(rr, j) = (f(n, i) - f(n, support_idx[static_cast<size_t>(j)])) /
                     (samples[static_cast<size_t>(i)] - samples[static_cast<size_t>(support_idx[static_cast<size_t>(j)])]);
        ++rr;
      }
    }
    r.weights = smallest_singular_vector(L);

    double err = 0.0;
    for (int i = 0; i < M; ++i) {
      if (is_support[static_cast<size_t>(i)]) {
        resid[static_cast<size_t>(i)] = 0.0;
        continue;
      }
      resid[static_cast<size_t>(i)] =
          (bary_eval(r.support, r.weights, r.values, samples[static_cast<size_t>(i)]) - f.col(i))
              .cwiseAbs().maxCoeff();
      err = std::max(err, resid[static_cast<size_t>(i)]);
    }
    r.achieved_error = err;
    if (err < tol * scale) {
      r.converged = true;
      break;
    }
  }
  return r;
}

RationalApproximant aaa_scalar(const std::vector<cplx>& samples, const std::vector<cplx>& f,
                               double tol, int m_max) {
  MatrixXcd fm(1, static_cast<Eigen::Index>(f.size()));
  for (size_t i = 0; i < f.size(); ++i) fm(0, static_cast<Eigen::Index>(i)) = f[i];
  return aaa_vector(samples, fm, tol, m_max);
}

RationalApproximant aaa_sketch(const std::vector<cplx>& samples, const MatrixXcd& f, int l,
                               double tol, int m_max, uint64_t seed) {
  const int N = static_cast<int>(f.rows());
  const int M = static_cast<int>(f.cols());
  if (l < 1) throw std::invalid_argument("aaa_sketch: l must be positive");
  if (l >= N) {
    std::cerr << "[rational] aaa_sketch: l >= N_dim, falling back to full vector AAA\n";
    RationalApproximant r = aaa_vector(samples, f, tol, m_max);
    r.seed = seed;
    r.sketch_l = l;
    return r;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, M_SQRT1_2);
  MatrixXcd V(N, l);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < l; ++j) V(i, j) = cplx(gauss(rng), gauss(rng));

  MatrixXcd g = V.transpose() * f;  // l x M
  RationalApproximant sk = aaa_vector(samples, g, tol, m_max);

  // substitute the full vectors at the chosen support points
  RationalApproximant r;
  r.support = sk.support;
  r.weights = sk.weights;
  r.tol = tol;
  r.seed = seed;
  r.sketch_l = l;
  const int m = sk.order();
  r.values.resize(N, m);
  for (int j = 0; j < m; ++j) {
    int idx = -1;
    for (int i = 0; i < M; ++i)
      if (samples[static_cast<size_t>(i)] == r.support[static_cast<size_t>(j)]) {
        idx = i;
        break;
      }
    if (idx < 0) throw std::logic_error("aaa_sketch: support point not among samples");
    r.values.col(j) = f.col(idx);
  }

  // the sketch governs convergence; the substituted full vectors typically
  // carry a somewhat larger error, which is what achieved_error reports
  const double scale = f.cwiseAbs().maxCoeff();
  r.sample_scale = scale;
  double err = 0.0;
  for (int i = 0; i < M; ++i) {
    bool sup = false;
    for (const cplx& s : r.support) sup = sup || (s == samples[static_cast<size_t>(i)]);
    if (sup) continue;
    err = std::max(err,
                   (bary_eval(r.support, r.weights, r.values, samples[static_cast<size_t>(i)]) -
                    f.col(i)).cwiseAbs().maxCoeff());
  }
  r.achieved_error = err;
  r.converged = sk.converged;
  return r;
}

PoleSet poles_and_residues(const RationalApproximant& r) {
  const int m = r.order();
  if (m < 2) return {};
  // arrowhead pencil: E = [0 v^T; 1 diag(support)], B = diag(0, 1, ..., 1);
  // the m-1 finite eigenvalues are the denominator roots
  const int n = m + 1;
  std::vector<cplx> E(static_cast<size_t>(n) * n, cplx(0, 0));
  std::vector<cplx> B(static_cast<size_t>(n) * n, cplx(0, 0));
  auto at = [n](std::vector<cplx>& a, int row, int col) -> cplx& {
    return a[static_cast<size_t>(col) * static_cast<size_t>(n) + static_cast<size_t>(row)];
  };
  for (int j = 0; j < m; ++j) {
    at(E, 0, j + 1) = r.weights(j);
    at(E, j + 1, 0) = 1.0;
    at(E, j + 1, j + 1) = r.support[static_cast<size_t>(j)];
    at(B, j + 1, j + 1) = 1.0;
  }
  std::vector<cplx> alpha(static_cast<size_t>(n)), beta(static_cast<size_t>(n)),
      work(static_cast<size_t>(8) * n);
  std::vector<double> rwork(static_cast<size_t>(8) * n);
  int lwork = 8 * n, info = 0, one = 1;
  zggev_("N", "N", &n, E.data(), &n, B.data(), &n, alpha.data(), beta.data(), nullptr, &one,
         nullptr, &one, work.data(), &lwork, rwork.data(), &info);
  if (info != 0) throw std::runtime_error("poles_and_residues: zggev failed");

  double span = 0.0;
  for (const cplx& s : r.support) span = std::max(span, std::abs(s));
  PoleSet ps;
  for (int i = 0; i < n; ++i) {
    if (std::abs(beta[static_cast<size_t>(i)]) < 1e-13) continue;
    const cplx pole = alpha[static_cast<size_t>(i)] / beta[static_cast<size_t>(i)];
    if (std::abs(pole) > 1e8 * (span + 1.0)) continue;  // numerically at infinity
    // quotient-derivative rule: res = num(rho)/den'(rho)
    VectorXcd num = VectorXcd::Zero(r.dim());
    cplx dden = 0.0;
    for (int j = 0; j < m; ++j) {
      const cplx d = pole - r.support[static_cast<size_t>(j)];
      num += r.weights(j) * r.values.col(j) / d;
      dden -= r.weights(j) / (d * d);
    }
    ps.poles.push_back(pole);
    ps.residues.push_back(num / dden);
  }
  return ps;
}

RationalApproximant cleanup(const RationalApproximant& r_in, const std::vector<cplx>& samples,
                            const MatrixXcd& f, double drop_tol) {
  RationalApproximant r = r_in;
  if (drop_tol <= 0.0) return r;
  const double scale = f.cwiseAbs().maxCoeff();
  const int M = static_cast<int>(samples.size());

  for (int pass = 0; pass < r_in.order() && r.order() >= 2; ++pass) {
    PoleSet ps = poles_and_residues(r);
    std::vector<size_t> doomed;  // support indices to delete
    for (size_t p = 0; p < ps.poles.size(); ++p) {
      if (ps.residues[p].cwiseAbs().maxCoeff() >= drop_tol * scale) continue;
      size_t nearest = 0;
      double dist = 1e300;
      for (size_t j = 0; j < r.support.size(); ++j) {
        const double d = std::abs(r.support[j] - ps.poles[p]);
        if (d < dist) {
          dist = d;
          nearest = j;
        }
      }
      if (std::find(doomed.begin(), doomed.end(), nearest) == doomed.end()) doomed.push_back(nearest);
    }
    if (doomed.empty()) break;
    std::sort(doomed.rbegin(), doomed.rend());
    for (size_t j : doomed) {
      r.support.erase(r.support.begin() + static_cast<std::ptrdiff_t>(j));
      const Eigen::Index m_new = r.values.cols() - 1;
      MatrixXcd v(r.values.rows(), m_new);
      Eigen::Index c = 0;
      for (Eigen::Index k = 0; k < r.values.cols(); ++k)
        if (k != static_cast<Eigen::Index>(j)) v.col(c++) = r.values.col(k);
      r.values = v;
    }
    const int m = r.order();
    if (m < 2) break;

    // one weight re-solve on the reduced support
    const int N = r.dim();
    std::vector<char> is_support(static_cast<size_t>(M), 0);
    for (const cplx& s : r.support)
      for (int i = 0; i < M; ++i)
        if (samples[static_cast<size_t>(i)] == s) is_support[static_cast<size_t>(i)] = 1;
    int rows = 0;
    for (int i = 0; i < M; ++i) rows += is_support[static_cast<size_t>(i)] ? 0 : N;
    MatrixXcd L(rows, m);
    int rr = 0;
    for (int i = 0; i < M; ++i) {
      if (is_support[static_cast<size_t>(i)]) continue;
      for (int nn = 0; nn < N; ++nn) {
        for (int j = 0; j < m; ++j)
          L(rr, j) = (f(nn, i) - r.values(nn, j)) /
                     (samples[static_cast<size_t>(i)] - r.support[static_cast<size_t>(j)]);
        ++rr;
      }
    }
    r.weights = smallest_singular_vector(L);

    double err = 0.0;
    for (int i = 0; i < M; ++i) {
      if (is_support[static_cast<size_t>(i)]) continue;
      err = std::max(err, (bary_eval(r.support, r.weights, r.values, samples[static_cast<size_t>(i)]) -
                           f.col(i)).cwiseAbs().maxCoeff());
    }
    r.achieved_error = err;
    r.converged = err < r.tol * scale;
  }
  return r;
}

std::string to_text(const RationalApproximant& r) {
  std::ostringstream os;
  os.precision(17);
  os << "fthss-rational-approximant v1\n";
  os << "m " << r.order() << " ndim " << r.dim() << "\n";
  os << "tol " << r.tol << " seed " << r.seed << " sketch_l " << r.sketch_l << " interval "
     << r.interval_lo << " " << r.interval_hi << "\n";
  os << "achieved_error " << r.achieved_error << " sample_scale " << r.sample_scale
     << " converged " << (r.converged ? 1 : 0) << "\n";
  os << "support\n";
  for (const cplx& s : r.support) os << s.real() << " " << s.imag() << "\n";
  os << "weights\n";
  for (int j = 0; j < r.order(); ++j) os << r.weights(j).real() << " " << r.weights(j).imag() << "\n";
  os << "values\n";
  for (int j = 0; j < r.order(); ++j)
    for (int n = 0; n < r.dim(); ++n)
      os << r.values(n, j).real() << " " << r.values(n, j).imag() << "\n";
  os << "end\n";
  return os.str();
}

RationalApproximant from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  std::getline(is, tok);
  if (tok != "fthss-rational-approximant v1")
    throw std::runtime_error("from_text: unrecognized approximant record");
  RationalApproximant r;
  int m = 0, ndim = 0, conv = 0;
  is >> tok >> m >> tok >> ndim;
  is >> tok >> r.tol >> tok >> r.seed >> tok >> r.sketch_l >> tok >> r.interval_lo >> r.interval_hi;
  is >> tok >> r.achieved_error >> tok >> r.sample_scale >> tok >> conv;
  r.converged = conv != 0;
  is >> tok;  // support
  r.support.resize(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    double re, im;
    is >> re >> im;
    r.support[static_cast<size_t>(j)] = {re, im};
  }
  is >> tok;  // weights
  r.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    double re, im;
    is >> re >> im;
    r.weights(j) = {re, im};
  }
  is >> tok;  // values
  r.values.resize(ndim, m);
  for (int j = 0; j < m; ++j)
    for (int n = 0; n < ndim; ++n) {
      double re, im;
      is >> re >> im;
      r.values(n, j) = {re, im};
    }
  if (!is) throw std::runtime_error("from_text: truncated approximant record");
  return r;
}

void save_approximant(const RationalApproximant& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_approximant: cannot open " + path);
  f << to_text(r);
}

RationalApproximant load_approximant(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_approximant: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

} // namespace fthss
