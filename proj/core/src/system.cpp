#include "shadowcover/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shadowcover/errors.hpp"

namespace shadowcover {

namespace {

constexpr double kUnitCircleTol = 1e-9;
constexpr double kEscapeGuard = 1e100;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double operator_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// Thin QR with the sign convention diag(R) > 0, so refined frames are
// deterministic.
Mat orthonormal_frame(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), m.cols());
  Mat r = q.transpose() * m;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

struct Unit {
  std::vector<Vec> columns;  // 1 (real) or 2 (complex pair)
  double modulus;
  double angle;
  EigenBlock::Kind kind;
  int dominant_axis;
  double dominant_value;
};

EigenBlock::Kind classify(double modulus, bool allow_ph) {
  if (modulus < 1.0 - kUnitCircleTol) return EigenBlock::Stable;
  if (modulus > 1.0 + kUnitCircleTol) return EigenBlock::Unstable;
  if (!allow_ph) {
    throw NotHyperbolic("eigenvalue of modulus " + std::to_string(modulus) +
                        " lies on the unit circle");
  }
  return EigenBlock::Center;
}

void sign_normalize(Vec& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
}

// Greedy assignment of units to coordinate axes by dominant component, so
// that already-diagonal systems get the identity transform.
void order_units(std::vector<Unit>& units) {
  for (Unit& u : units) {
    Eigen::Index imax = 0;
    u.columns[0].cwiseAbs().maxCoeff(&imax);
    u.dominant_axis = static_cast<int>(imax);
    u.dominant_value = std::abs(u.columns[0][imax]);
  }
  std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
    if (a.dominant_axis != b.dominant_axis) return a.dominant_axis < b.dominant_axis;
    return a.dominant_value > b.dominant_value;
  });
}

Splitting splitting_from_basis(const Mat& stable, const Mat& unstable, const Mat& center) {
  int n = static_cast<int>(stable.rows());
  Mat basis(n, n);
  basis << stable, unstable, center;
  Eigen::JacobiSVD<Mat> svd(basis);
  double smin = svd.singularValues()(n - 1);
  if (smin <= 1e-12) throw NotHyperbolic("splitting basis is numerically singular");
  Splitting sp;
  sp.stable = stable;
  sp.unstable = unstable;
  sp.center = center;
  sp.basis_condition = svd.singularValues()(0) / smin;
  Mat inv = basis.inverse();
  auto selector = [&](Eigen::Index offset, Eigen::Index count) {
    Mat d = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < count; ++j) d(offset + j, offset + j) = 1.0;
    return Mat(basis * d * inv);
  };
  sp.proj_s = selector(0, stable.cols());
  sp.proj_u = selector(stable.cols(), unstable.cols());
  sp.proj_c = center.cols() > 0 ? selector(stable.cols() + unstable.cols(), center.cols())
                                : Mat::Zero(n, n);
  return sp;
}

}  // namespace

bool CoverMapSystem::lattice_compatible() const {
  for (Eigen::Index i = 0; i < linear_part.rows(); ++i)
    for (Eigen::Index j = 0; j < linear_part.cols(); ++j)
      if (linear_part(i, j) != std::round(linear_part(i, j))) return false;
  return true;
}

Vec CoverMapSystem::phi_value(const CoverPoint& x) const {
  Vec v = Vec::Zero(dim);
  for (const PerturbationTerm& t : phi) {
    v += t.amplitude * std::sin(kTwoPi * t.frequency.cast<double>().dot(x));
  }
  return v;
}

Mat CoverMapSystem::phi_derivative(const CoverPoint& x) const {
  Mat d = Mat::Zero(dim, dim);
  for (const PerturbationTerm& t : phi) {
    double c = kTwoPi * std::cos(kTwoPi * t.frequency.cast<double>().dot(x));
    d += c * t.amplitude * t.frequency.cast<double>().transpose();
  }
  return d;
}

CoverPoint CoverMapSystem::apply(const CoverPoint& x) const {
  if (is_linear()) return linear_part * x;
  return linear_part * x + eps * phi_value(x);
}

CoverPoint CoverMapSystem::apply_inverse(const CoverPoint& x) const {
  if (is_linear()) return linear_inverse * x;
  // Newton on g(y) = L y + eps phi(y) - x starting from the linear inverse.
  CoverPoint y = linear_inverse * x;
  for (int it = 0; it < 60; ++it) {
    Vec g = linear_part * y + eps * phi_value(y) - x;
    double scale = 1.0 + x.norm();
    if (g.norm() < 1e-14 * scale) return y;
    Mat J = linear_part + eps * phi_derivative(y);
    y -= J.partialPivLu().solve(g);
  }
  Vec g = linear_part * y + eps * phi_value(y) - x;
  if (g.norm() < 1e-10 * (1.0 + x.norm())) return y;
  throw SingularSystem("inverse map iteration failed to converge");
}

Mat CoverMapSystem::derivative(const CoverPoint& x) const {
  if (is_linear()) return linear_part;
  return linear_part + eps * phi_derivative(x);
}

CoverPoint CoverMapSystem::iterate(CoverPoint x, long k) const {
  for (long i = 0; i < std::labs(k); ++i) {
    x = k > 0 ? apply(x) : apply_inverse(x);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kEscapeGuard) {
      throw OrbitEscapes("iterate exceeded representable range at step " + std::to_string(i + 1));
    }
  }
  return x;
}

Mat CoverMapSystem::unstable_frame(const CoverPoint& x) const {
  // Push the linear unstable frame forward along the backward orbit ending at
  // x; the pushed subspace converges to E^u(x) at rate lambda^2 per step.
  std::vector<CoverPoint> path(static_cast<std::size_t>(cone_steps) + 1);
  path[static_cast<std::size_t>(cone_steps)] = x;
  for (int j = cone_steps - 1; j >= 0; --j) {
    path[static_cast<std::size_t>(j)] = apply_inverse(path[static_cast<std::size_t>(j) + 1]);
  }
  Mat frame = linear_splitting.unstable;
  for (int j = 0; j < cone_steps; ++j) {
    frame = derivative(path[static_cast<std::size_t>(j)]) * frame;
    frame = orthonormal_frame(frame);
  }
  return frame;
}

Mat CoverMapSystem::stable_frame(const CoverPoint& x) const {
  // Same refinement run backward: pull the linear stable frame down the
  // forward orbit of x.
  std::vector<CoverPoint> path(static_cast<std::size_t>(cone_steps) + 1);
  path[0] = x;
  for (int j = 1; j <= cone_steps; ++j) {
    path[static_cast<std::size_t>(j)] = apply(path[static_cast<std::size_t>(j) - 1]);
  }
  Mat frame = linear_splitting.stable;
  for (int j = cone_steps; j >= 1; --j) {
    frame = derivative(path[static_cast<std::size_t>(j) - 1]).partialPivLu().solve(frame);
    frame = orthonormal_frame(frame);
  }
  return frame;
}

Splitting CoverMapSystem::splitting_at(const CoverPoint& x) const {
  if (is_linear()) return linear_splitting;
  Mat s = stable_frame(x);
  Mat u = unstable_frame(x);
  return splitting_from_basis(s, u, Mat(dim, 0));
}

namespace {

// Shared eigen-analysis for linear parts; fills adapted data and the constant
// splitting of the linear system.
void install_linear_structure(CoverMapSystem& sys, const Mat& L, bool allow_ph) {
  int n = static_cast<int>(L.rows());
  if (L.rows() != L.cols() || n == 0) throw InvalidArgument("linear part must be square");
  double det = L.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9) {
    throw InvalidArgument("linear part must be unimodular, |det| = " + std::to_string(std::abs(det)));
  }

  std::vector<Unit> units;
  bool symmetric = (L - L.transpose()).cwiseAbs().maxCoeff() == 0.0;
  if (symmetric) {
    Eigen::SelfAdjointEigenSolver<Mat> es(L);
    for (int i = 0; i < n; ++i) {
      Unit u;
      Vec v = es.eigenvectors().col(i);
      sign_normalize(v);
      u.columns = {v};
      u.modulus = std::abs(es.eigenvalues()(i));
      u.angle = es.eigenvalues()(i) < 0 ? std::numbers::pi : 0.0;
      u.kind = classify(u.modulus, allow_ph);
      units.push_back(std::move(u));
    }
  } else {
    Eigen::EigenSolver<Mat> es(L);
    if (es.info() != Eigen::Success) throw NotHyperbolic("eigen decomposition failed");
    for (int i = 0; i < n; ++i) {
      std::complex<double> mu = es.eigenvalues()(i);
      if (mu.imag() < 0) continue;  // conjugate handled with its partner
      Unit u;
      u.modulus = std::abs(mu);
      u.angle = std::arg(mu);
      u.kind = classify(u.modulus, allow_ph);
      Eigen::VectorXcd v = es.eigenvectors().col(i);
      if (std::abs(mu.imag()) < 1e-12) {
        Vec vr = v.real();
        if (vr.norm() < 1e-8) vr = v.imag();
        vr.normalize();
        sign_normalize(vr);
        u.columns = {vr};
      } else {
        // Rotate the complex eigenvector so its largest entry is real and
        // positive, then split into the real pair basis.
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        v *= std::abs(v[imax]) / v[imax];
        Vec vr = v.real(), vi = v.imag();
        double scale = vr.norm();
        u.columns = {vr / scale, vi / scale};
      }
      units.push_back(std::move(u));
    }
  }

  order_units(units);

  Mat W(n, n);
  int col = 0;
  std::vector<EigenBlock> blocks;
  int n_stable = 0, n_unstable = 0, n_center = 0;
  for (const Unit& u : units) {
    EigenBlock b;
    b.modulus = u.modulus;
    b.angle = u.angle;
    b.kind = u.kind;
    for (const Vec& c : u.columns) {
      W.col(col) = c;
      b.indices.push_back(col);
      ++col;
    }
    int width = static_cast<int>(u.columns.size());
    if (u.kind == EigenBlock::Stable) n_stable += width;
    if (u.kind == EigenBlock::Unstable) n_unstable += width;
    if (u.kind == EigenBlock::Center) n_center += width;
    blocks.push_back(std::move(b));
  }
  if (col != n) throw NotHyperbolic("eigen structure did not span the space");
  if (n_stable == 0 || n_unstable == 0) {
    throw NotHyperbolic("system needs both stable and unstable directions");
  }

  Eigen::JacobiSVD<Mat> svd(W);
  if (svd.singularValues()(n - 1) < 1e-10) {
    throw NotHyperbolic("eigenbasis is numerically defective");
  }

  sys.dim = n;
  sys.linear_part = L;
  sys.blocks = std::move(blocks);
  sys.from_adapted = W;
  sys.to_adapted = symmetric ? Mat(W.transpose()) : Mat(W.inverse());
  sys.partially_hyperbolic = n_center > 0;

  double lam = 0.0;
  for (const EigenBlock& b : sys.blocks) {
    if (b.kind == EigenBlock::Stable) lam = std::max(lam, b.modulus);
    if (b.kind == EigenBlock::Unstable) lam = std::max(lam, 1.0 / b.modulus);
  }
  sys.lambda = lam;
  sys.proj_bound = 1.0;

  Mat s(n, n_stable), u(n, n_unstable), c(n, n_center);
  int is = 0, iu = 0, ic = 0;
  for (const EigenBlock& b : sys.blocks) {
    for (int idx : b.indices) {
      if (b.kind == EigenBlock::Stable) s.col(is++) = W.col(idx);
      if (b.kind == EigenBlock::Unstable) u.col(iu++) = W.col(idx);
      if (b.kind == EigenBlock::Center) c.col(ic++) = W.col(idx);
    }
  }
  sys.linear_splitting = splitting_from_basis(s, u, c);

  Mat Linv = L.inverse();
  // Unimodular integer L has an integer inverse; snap away the float fuzz.
  Mat rounded = Linv.array().round().matrix();
  if ((Linv - rounded).cwiseAbs().maxCoeff() < 1e-9) Linv = rounded;
  sys.linear_inverse = Linv;
}

}  // namespace

CoverMapSystem make_linear_system(const Mat& L, bool allow_partially_hyperbolic) {
  CoverMapSystem sys;
  install_linear_structure(sys, L, allow_partially_hyperbolic);
  sys.eps = 0.0;
  return sys;
}

CoverMapSystem make_perturbed_system(const Mat& L, double eps,
                                     const std::vector<PerturbationTerm>& phi, int cone_steps,
                                     int grid_per_dim) {
  CoverMapSystem sys;
  install_linear_structure(sys, L, false);
  sys.eps = eps;
  sys.phi = phi;
  sys.cone_steps = cone_steps;
  for (const PerturbationTerm& t : phi) {
    if (t.frequency.size() != sys.dim || t.amplitude.size() != sys.dim) {
      throw DimensionMismatch("perturbation term dimension differs from the system");
    }
  }
  if (eps == 0.0 || phi.empty()) {
    sys.eps = 0.0;
    sys.phi.clear();
    return sys;
  }

  // Certify hyperbolicity on a sample grid: derivative invertibility, cone
  // contraction (two distinct starting frames must collapse to the same
  // subspace), and empirical one-step contraction in the adapted metric.
  int n = sys.dim;
  std::vector<CoverPoint> samples;
  int per = std::max(2, grid_per_dim);
  long total = 1;
  for (int i = 0; i < n; ++i) total *= per;
  for (long idx = 0; idx < total; ++idx) {
    Vec x(n);
    long rem = idx;
    for (int i = 0; i < n; ++i) {
      x[i] = (static_cast<double>(rem % per) + 0.5) / per;
      rem /= per;
    }
    samples.push_back(x);
  }

  const Mat& Q = sys.to_adapted;
  double stable_factor = 0.0, unstable_factor = 0.0, proj_norm = 1.0;
  // Alternative starting frames for the cone-collapse check: mix each
  // unstable direction with a stable one.
  Mat mixed_u = sys.linear_splitting.unstable;
  for (Eigen::Index j = 0; j < mixed_u.cols(); ++j) {
    mixed_u.col(j) += 0.5 * sys.linear_splitting.stable.col(j % sys.linear_splitting.stable.cols());
  }
  mixed_u = orthonormal_frame(mixed_u);

  for (const CoverPoint& x : samples) {
    Mat Dfx = sys.derivative(x);
    if (std::abs(Dfx.determinant()) < 1e-8) {
      throw ConeCheckFailed("derivative is singular at a sample point");
    }
    Splitting sp;
    Mat u1;
    try {
      sp = sys.splitting_at(x);
      CoverMapSystem probe = sys;
      probe.linear_splitting.unstable = mixed_u;
      u1 = probe.unstable_frame(x);
    } catch (const ShadowError&) {
      throw ConeCheckFailed("cone refinement broke down at a sample point");
    }
    // Subspace distance between the two refined unstable frames.
    Mat p_ref = sp.unstable * sp.unstable.transpose();
    Mat p_alt = u1 * u1.transpose();
    if (operator_norm(p_ref - p_alt) > 1e-7) {
      throw ConeCheckFailed("pushed cones do not collapse to a common unstable subspace");
    }

    for (Eigen::Index j = 0; j < sp.stable.cols(); ++j) {
      Vec v = sp.stable.col(j);
      stable_factor = std::max(stable_factor, (Q * (Dfx * v)).norm() / (Q * v).norm());
    }
    // Unstable contraction under the inverse branch, measured at y = f(x).
    CoverPoint y = sys.apply(x);
    Splitting spy = sys.splitting_at(y);
    Mat Dfx_inv = Dfx.inverse();
    for (Eigen::Index j = 0; j < spy.unstable.cols(); ++j) {
      Vec w = spy.unstable.col(j);
      unstable_factor = std::max(unstable_factor, (Q * (Dfx_inv * w)).norm() / (Q * w).norm());
    }
    proj_norm = std::max({proj_norm, operator_norm(Q * sp.proj_s * sys.from_adapted),
                          operator_norm(Q * sp.proj_u * sys.from_adapted)});
  }

  double lam_emp = std::max(stable_factor, unstable_factor);
  double lam_eff = lam_emp * 1.02 + 1e-3;
  if (!(lam_eff < 0.999)) {
    throw ConeCheckFailed("sampled contraction factor " + std::to_string(lam_emp) +
                          " leaves no hyperbolicity margin");
  }
  sys.lambda = lam_eff;
  sys.proj_bound = proj_norm * 1.01;
  return sys;
}

std::pair<Mat, Mat> adapted_coordinates(const CoverMapSystem& system) {
  return {system.to_adapted, system.from_adapted};
}

CoverMapSystem make_cat_map() {
  Mat L(2, 2);
  L << 2, 1, 1, 1;
  return make_linear_system(L);
}

CoverMapSystem make_ph3() {
  Mat L(3, 3);
  L << 2, 1, 0, 1, 1, 0, 0, 0, 1;
  return make_linear_system(L, true);
}

}  // namespace shadowcover
