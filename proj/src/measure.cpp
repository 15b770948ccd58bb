#include "tentlab/measure.hpp"

#include <algorithm>
#include <cmath>

namespace tentlab {

Real real_pow(const Real& base, int n, const Real& one) {
  Real r = one;
  for (int i = 0; i < n; ++i) r = r * base;
  return r;
}

namespace {

// Certified double bracket of a Real.
std::pair<double, double> bracket(const Real& x) {
  Ival v = x.enclose(128);
  return {v.lo_double(), v.hi_double()};
}

}  // namespace

double Density::cell_width() const {
  auto [alo, ahi] = bracket(f_->a);
  auto [blo, bhi] = bracket(f_->b);
  return (bhi - alo) / static_cast<double>(grid_.size());
}

Real Density::eval(const Real& x) const {
  if (kind_ == Kind::Grid) {
    double v = eval_d(x.approx());
    mpq_class q(v);
    return f_->p.real(q);
  }
  // locate the partition interval containing x
  auto [xlo, xhi] = bracket(x);
  // find candidate via doubles, then certify; partition is ascending
  size_t n = partition_.size();
  size_t idx = 0;
  {
    // first boundary with certified lower bracket > xhi ends the range
    size_t lo = 0, hi = n;  // search over boundaries
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (part_hi_[mid] <= xlo)
        lo = mid + 1;
      else
        hi = mid;
    }
    // boundaries [0, lo) are certified <= x; check for straddlers
    idx = lo;
    const auto& pp = f_->p.prec();
    while (idx < n && part_lo_[idx] <= xhi) {
      // ambiguous: compare rigorously
      int c = cmp_or_throw(partition_[idx], x, pp);
      if (c <= 0)
        ++idx;
      else
        break;
    }
  }
  if (idx == 0) return values_.front();  // x below first boundary: clamp
  if (idx >= values_.size() + 1) return values_.back();
  return values_[idx - 1];
}

double Density::eval_d(double x) const {
  if (kind_ == Kind::Grid) {
    auto [alo, ahi] = bracket(f_->a);
    double w = cell_width();
    long i = static_cast<long>((x - alo) / w);
    if (i < 0) i = 0;
    if (i >= static_cast<long>(grid_.size()))
      i = static_cast<long>(grid_.size()) - 1;
    return grid_[static_cast<size_t>(i)];
  }
  size_t n = values_d_.size();
  // partition boundaries: values_d_[i] holds on [boundary i, boundary i+1)
  size_t lo = 0, hi = n;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    double b = 0.5 * (part_lo_[mid] + part_hi_[mid]);
    if (b <= x)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == 0) return values_d_.front();
  return values_d_[lo - 1];
}

Real Density::integral(const Real& lo, const Real& hi) const {
  const auto& p = f_->p;
  if (kind_ == Kind::Grid) {
    mpq_class q(integral_d(lo.approx(), hi.approx()));
    return p.real(q);
  }
  Real total = p.real(0);
  const auto& pp = p.prec();
  size_t m = values_.size();
  for (size_t i = 0; i < m; ++i) {
    const Real& plo = partition_[i];
    const Real& phi = partition_[i + 1];
    // overlap of [plo, phi] with [lo, hi]
    Real olo = cmp_or_throw(plo, lo, pp) >= 0 ? plo : lo;
    Real ohi = cmp_or_throw(phi, hi, pp) <= 0 ? phi : hi;
    if (cmp_or_throw(olo, ohi, pp) < 0) total = total + values_[i] * (ohi - olo);
  }
  return total;
}

double Density::integral_d(double lo, double hi) const {
  if (kind_ != Kind::Grid) {
    Ival v = integral(f_->p.real(mpq_class(lo)), f_->p.real(mpq_class(hi)))
                 .enclose(128);
    return v.mid_double();
  }
  auto [alo, ahi] = bracket(f_->a);
  double w = cell_width();
  double total = 0;
  for (size_t i = 0; i < grid_.size(); ++i) {
    double clo = alo + w * static_cast<double>(i);
    double chi = clo + w;
    double olo = std::max(clo, lo), ohi = std::min(chi, hi);
    if (olo < ohi) total += grid_[i] * (ohi - olo);
  }
  return total;
}

double Density::floor_value() const {
  if (kind_ == Kind::Grid) {
    double m = grid_.empty() ? 0.0 : grid_.front();
    for (double v : grid_) m = std::min(m, v);
    return m;
  }
  double m = values_d_.empty() ? 0.0 : values_d_.front();
  for (double v : values_d_) m = std::min(m, v);
  return m;
}

// ----------------------------- Markov density ------------------------------

Density density_markov(const TentMap& f) {
  auto prof = postcritical_profile(f, 512);
  if (prof.numeric ||
      prof.kind == PostcriticalProfile::Kind::InfiniteWithinCap)
    throw NotMarkov("critical orbit not (provably) finite");
  const auto& pp = f.p.prec();
  int orbit_len = prof.kind == PostcriticalProfile::Kind::PeriodicC
                      ? prof.period
                      : prof.preperiod + prof.period;
  // partition points: postcritical orbit + endpoints (b = f(c), a = f^2(c))
  std::vector<Real> pts = postcritical_orbit(f, orbit_len);
  pts.push_back(f.a);
  pts.push_back(f.b);
  std::sort(pts.begin(), pts.end(), [&](const Real& u, const Real& v) {
    return cmp_or_throw(u, v, pp) < 0;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](const Real& u, const Real& v) {
                          return cmp_or_throw(u, v, pp) == 0;
                        }),
            pts.end());
  const int M = static_cast<int>(pts.size()) - 1;
  if (M < 1) throw NotMarkov("degenerate postcritical partition");

  // transfer matrix on piecewise constants via interval midpoints
  Real half = f.p.real(mpq_class(1, 2));
  std::vector<std::vector<Real>> T(M, std::vector<Real>(M, f.p.real(0)));
  Real inv_lambda = f.p.real(1) / f.lambda;
  auto locate = [&](const Real& y) {
    for (int j = 0; j < M; ++j)
      if (cmp_or_throw(y, pts[j + 1], pp) < 0) return j;
    return M - 1;
  };
  for (int i = 0; i < M; ++i) {
    Real mid = (pts[i] + pts[i + 1]) * half;
    for (const auto& pre : tent_preimages(f, mid)) {
      int j = locate(pre.x);
      T[i][j] = T[i][j] + inv_lambda;
    }
  }
  // solve (T - I) v = 0 by exact elimination; nullity must be 1
  std::vector<std::vector<Real>> A(M, std::vector<Real>(M, f.p.real(0)));
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      A[i][j] = (i == j) ? T[i][j] - f.p.real(1) : T[i][j];
  std::vector<int> pivot_col(M, -1);
  int row = 0;
  for (int col = 0; col < M && row < M; ++col) {
    int pr = -1;
    for (int i = row; i < M; ++i) {
      if (sign_or_throw(A[i][col], pp) != Sign::Zero) {
        pr = i;
        break;
      }
    }
    if (pr < 0) continue;
    std::swap(A[row], A[pr]);
    Real inv = f.p.real(1) / A[row][col];
    for (int j = col; j < M; ++j) A[row][j] = A[row][j] * inv;
    for (int i = 0; i < M; ++i) {
      if (i == row) continue;
      if (sign_or_throw(A[i][col], pp) == Sign::Zero) continue;
      Real factor = A[i][col];
      for (int j = col; j < M; ++j)
        A[i][j] = A[i][j] - factor * A[row][j];
    }
    pivot_col[row] = col;
    ++row;
  }
  if (row != M - 1)
    throw NotMarkov("transfer operator fixed space is not one-dimensional");
  // free column = the one that is no pivot
  std::vector<bool> is_pivot(M, false);
  for (int i = 0; i < row; ++i) is_pivot[pivot_col[i]] = true;
  int free_col = -1;
  for (int j = 0; j < M; ++j)
    if (!is_pivot[j]) free_col = j;
  std::vector<Real> v(M, f.p.real(0));
  v[free_col] = f.p.real(1);
  for (int i = 0; i < row; ++i)
    v[pivot_col[i]] = -A[i][free_col];
  // normalize: sum v_i |J_i| = 1, and require positivity
  Real mass = f.p.real(0);
  for (int i = 0; i < M; ++i) mass = mass + v[i] * (pts[i + 1] - pts[i]);
  if (sign_or_throw(mass, pp) == Sign::Zero)
    throw NotMarkov("transfer fixed vector has zero mass");
  Real inv_mass = f.p.real(1) / mass;
  for (auto& x : v) x = x * inv_mass;
  for (const auto& x : v)
    if (sign_or_throw(x, pp) != Sign::Positive)
      throw NotMarkov("transfer fixed vector not positive");

  Density d;
  d.kind_ = Density::Kind::MarkovExact;
  d.f_ = std::make_shared<const TentMap>(f);
  d.partition_ = std::move(pts);
  d.values_ = std::move(v);
  for (const auto& b : d.partition_) {
    auto [lo, hi] = bracket(b);
    d.part_lo_.push_back(lo);
    d.part_hi_.push_back(hi);
  }
  for (const auto& x : d.values_) d.values_d_.push_back(x.approx());
  return d;
}

// ------------------------------ Step series --------------------------------

Density density_series(const TentMap& f, double tail_bound) {
  const auto& pp = f.p.prec();
  double lam_d = f.lambda.approx();
  int J = static_cast<int>(std::ceil(std::log(1.0 / tail_bound) /
                                     std::log(lam_d))) +
          2;
  // jump locations q_j = f^j(a) and orientation signs
  std::vector<Real> q;
  std::vector<int> delta;
  q.reserve(J);
  delta.reserve(J);
  Real cur = f.lambda * f.a;  // f(a)
  int sign = 1;
  for (int j = 1; j <= J; ++j) {
    q.push_back(cur);
    delta.push_back(sign);
    SideClass side = classify_side(cur, f.p);
    if (side == SideClass::AtC)
      throw NotMarkov("critical orbit hits c: use the Markov density");
    if (side == SideClass::Uncertain)
      throw PrecisionExhausted("density_series: side of orbit point");
    if (side == SideClass::Right) sign = -sign;
    if (j < J) cur = tent_eval(f, cur);
  }
  // kappa from total mass 1: kappa * [(b-a) + sum delta_j lambda^-j (b-q_j)]
  Real acc = f.b - f.a;
  Real pw = f.p.real(1);
  for (int j = 0; j < J; ++j) {
    pw = pw / f.lambda;
    Real term = pw * (f.b - q[j]);
    acc = delta[j] > 0 ? acc + term : acc - term;
  }
  Real kappa = f.p.real(1) / acc;
  // jump heights, sorted by location
  std::vector<size_t> order(q.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> q_apx(q.size());
  for (size_t i = 0; i < q.size(); ++i) q_apx[i] = q[i].approx();
  std::sort(order.begin(), order.end(), [&](size_t u, size_t v) {
    if (q_apx[u] != q_apx[v]) return q_apx[u] < q_apx[v];
    return cmp_or_throw(q[u], q[v], pp) < 0;
  });
  Density d;
  d.kind_ = Density::Kind::StepSeries;
  d.f_ = std::make_shared<const TentMap>(f);
  d.partition_.push_back(f.a);
  d.values_.push_back(kappa);
  Real cum = kappa;
  std::vector<Real> height(q.size());
  {
    Real pw2 = f.p.real(1);
    for (size_t j = 0; j < q.size(); ++j) {
      pw2 = pw2 / f.lambda;
      height[j] = delta[j] > 0 ? kappa * pw2 : -(kappa * pw2);
    }
  }
  for (size_t idx : order) {
    d.partition_.push_back(q[idx]);
    cum = cum + height[idx];
    d.values_.push_back(cum);
  }
  d.partition_.push_back(f.b);
  for (const auto& b : d.partition_) {
    auto [lo, hi] = bracket(b);
    d.part_lo_.push_back(lo);
    d.part_hi_.push_back(hi);
  }
  for (const auto& x : d.values_) d.values_d_.push_back(x.approx());
  d.residual_ = tail_bound;
  return d;
}

// ------------------------------- Grid (Ulam) --------------------------------

Density density_grid(const TentMap& f, int cells, double tol, int max_iters) {
  auto [alo, ahi] = bracket(f.a);
  auto [blo, bhi] = bracket(f.b);
  const double A = alo, B = bhi;
  const double W = (B - A) / cells;
  const double lam = f.lambda.approx();
  const double c = 0.5;
  // sparse transfer rows: cell i distributes its mass over image cells
  struct Entry {
    int j;
    double w;
  };
  std::vector<std::vector<Entry>> rows(cells);
  auto scatter = [&](std::vector<Entry>& row, double img_lo, double img_hi,
                     double w_total) {
    if (img_hi < img_lo) std::swap(img_lo, img_hi);
    img_lo = std::max(img_lo, A);
    img_hi = std::min(img_hi, B);
    if (img_hi <= img_lo) return;
    double len = img_hi - img_lo;
    int j0 = std::max(0, static_cast<int>((img_lo - A) / W));
    int j1 = std::min(cells - 1, static_cast<int>((img_hi - A) / W));
    for (int j = j0; j <= j1; ++j) {
      double clo = A + W * j, chi = clo + W;
      double o = std::min(chi, img_hi) - std::max(clo, img_lo);
      if (o > 0) row.push_back({j, w_total * o / len});
    }
  };
  for (int i = 0; i < cells; ++i) {
    double l = A + W * i, r = l + W;
    auto& row = rows[i];
    if (r <= c) {
      scatter(row, lam * l, lam * r, 1.0);
    } else if (l >= c) {
      scatter(row, lam * (1 - r), lam * (1 - l), 1.0);
    } else {
      double wl = (c - l) / (r - l);
      scatter(row, lam * l, lam * c, wl);
      scatter(row, lam * (1 - r), lam * (1 - c), 1.0 - wl);
    }
    // guard against clipping loss at the interval ends
    double sum = 0;
    for (auto& e : row) sum += e.w;
    if (sum > 0)
      for (auto& e : row) e.w /= sum;
  }
  std::vector<double> mass(cells, 1.0 / cells), next(cells);
  auto step = [&](const std::vector<double>& src, std::vector<double>& dst) {
    std::fill(dst.begin(), dst.end(), 0.0);
    for (int i = 0; i < cells; ++i) {
      double m = src[i];
      if (m == 0) continue;
      for (const auto& e : rows[i]) dst[e.j] += m * e.w;
    }
    double tot = 0;
    for (double v : dst) tot += v;
    for (double& v : dst) v /= tot;
  };
  int it = 0;
  for (; it < max_iters; ++it) {
    step(mass, next);
    double l1 = 0;
    for (int i = 0; i < cells; ++i) l1 += std::abs(next[i] - mass[i]);
    l1 /= W;  // density units
    mass.swap(next);
    if (l1 < tol) break;
  }
  if (it == max_iters)
    throw NotConverged("density_grid: no fixed point within max_iters");
  // residual: one more step, L1 defect in density units
  step(mass, next);
  double res = 0;
  for (int i = 0; i < cells; ++i) res += std::abs(next[i] - mass[i]);
  res /= W;

  Density d;
  d.kind_ = Density::Kind::Grid;
  d.f_ = std::make_shared<const TentMap>(f);
  d.grid_.resize(cells);
  for (int i = 0; i < cells; ++i) d.grid_[i] = mass[i] / W;
  d.residual_ = res;
  return d;
}

// ------------------------------ alpha measures ------------------------------

AlphaValue alpha_cylinder(const Density& d, const Thread& cyl) {
  const TentMap& f = d.map();
  Real v = d.eval(cyl.coords.back());
  Real denom = real_pow(f.lambda, cyl.depth(), f.p.real(1));
  return {v / denom};
}

Real alpha_of_box(const Density& d, const ZeroBox& box, const Real& x) {
  const TentMap& f = d.map();
  Real total = f.p.real(0);
  Real denom = real_pow(f.lambda, box.r, f.p.real(1));
  for (const auto& w : box.words) {
    Thread t = reconstruct(f, x, w);
    total = total + d.eval(t.coords.back()) / denom;
  }
  return total;
}

DisintegrationResult disintegration_check(const Density& d, int r, double jlo,
                                          double jhi, int quad_cells) {
  const TentMap& f = d.map();
  auto [alo, ahi] = bracket(f.a);
  auto [blo, bhi] = bracket(f.b);
  const double A = alo, B = bhi;
  const double lam = f.lambda.approx();
  const double fa = lam * A;
  double lam_r = std::pow(lam, r);
  // alpha_x(pi_r^{-1}(J)) at a double point: depth-r preimages in J
  auto alpha_at = [&](double x) {
    std::vector<double> cur{x}, nxt;
    for (int k = 0; k < r; ++k) {
      nxt.clear();
      for (double y : cur) {
        if (y >= fa) nxt.push_back(y / lam);
        nxt.push_back(1.0 - y / lam);
      }
      cur.swap(nxt);
    }
    double s = 0;
    for (double y : cur)
      if (y >= jlo && y <= jhi) s += d.eval_d(y);
    return s / lam_r;
  };
  DisintegrationResult res;
  res.cells = quad_cells;
  double h = (B - A) / quad_cells;
  double lhs = 0;
  for (int i = 0; i < quad_cells; ++i) lhs += alpha_at(A + h * (i + 0.5));
  lhs *= h;
  res.lhs = lhs;
  res.rhs = d.integral_d(jlo, jhi);
  res.gap = std::abs(res.lhs - res.rhs);
  return res;
}

Real unstable_measure(const TentMap& f, const FlatArc& arc, const Real& sub_lo,
                      const Real& sub_hi) {
  const auto& pp = f.p.prec();
  if (cmp_or_throw(sub_lo, arc.lo, pp) < 0 ||
      cmp_or_throw(sub_hi, arc.hi, pp) > 0)
    throw DomainError("unstable_measure: subinterval leaves the arc base");
  if (cmp_or_throw(sub_lo, sub_hi, pp) > 0)
    throw DomainError("unstable_measure: empty subinterval");
  return sub_hi - sub_lo;
}

}  // namespace tentlab
