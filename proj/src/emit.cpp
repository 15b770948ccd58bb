#include "tentlab/emit.hpp"

#include <array>
#include <atomic>
#include <cstdio>
#include <future>
#include <sstream>

namespace tentlab {

std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string height_type_name(HeightType t) {
  switch (t) {
    case HeightType::EndpointMinus: return "endpoint-";
    case HeightType::EndpointPlus: return "endpoint+";
    case HeightType::NBT: return "nbt";
    case HeightType::General: return "general";
  }
  return "?";
}

std::string report_status_name(Report::Status s) {
  switch (s) {
    case Report::Status::Pass: return "Pass";
    case Report::Status::Fail: return "Fail";
    case Report::Status::Undecided: return "Undecided";
  }
  return "?";
}

std::vector<SweepRow> run_sweep(double from, double to, int steps,
                                long max_iters, int threads) {
  std::vector<SweepRow> rows(steps);
  auto work = [&](int i) {
    double lam = from + (to - from) * i / std::max(1, steps - 1);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", lam);
    SweepRow row;
    row.lambda = std::atof(buf);
    try {
      auto p = Parameter::parse(std::string("dec:") + buf);
      auto f = TentMap::make(p);
      HeightResult h = height(f, max_iters);
      row.rational = h.rational;
      row.bracket_lo = h.bracket_lo;
      row.bracket_hi = h.bracket_hi;
      if (h.rational) {
        row.m = h.m;
        row.n = h.n;
        row.type = height_type_name(h.type);
        row.numeric = h.numeric;
      }
    } catch (const std::exception&) {
      row.rational = false;
    }
    rows[i] = row;
  };
  if (threads <= 1) {
    for (int i = 0; i < steps; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::future<void>> futs;
    for (int t = 0; t < threads; ++t)
      futs.push_back(std::async(std::launch::async, [&] {
        for (int i = next.fetch_add(1); i < steps; i = next.fetch_add(1))
          work(i);
      }));
    for (auto& fu : futs) fu.get();
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "lambda,m,n,type,bracket_lo,bracket_hi\n";
  for (const auto& r : rows) {
    os << fmt_g(r.lambda, 8) << ",";
    if (r.rational)
      os << r.m << "," << r.n << "," << r.type;
    else
      os << ",,";
    os << "," << fmt_g(r.bracket_lo, 10) << "," << fmt_g(r.bracket_hi, 10)
       << "\n";
  }
  return os.str();
}

namespace {

struct Svg {
  std::ostringstream os;
  double w, h;
  Svg(double width, double height) : w(width), h(height) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)w
       << "\" height=\"" << (int)h << "\" viewBox=\"0 0 " << (int)w << " "
       << (int)h << "\">\n";
    os << "<rect width=\"" << (int)w << "\" height=\"" << (int)h
       << "\" fill=\"white\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* color,
            double width = 1.0) {
    os << "<line x1=\"" << fmt_g(x1, 8) << "\" y1=\"" << fmt_g(y1, 8)
       << "\" x2=\"" << fmt_g(x2, 8) << "\" y2=\"" << fmt_g(y2, 8)
       << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt_g(width, 4)
       << "\"/>\n";
  }
  void circle(double x, double y, double r, const char* color) {
    os << "<circle cx=\"" << fmt_g(x, 8) << "\" cy=\"" << fmt_g(y, 8)
       << "\" r=\"" << fmt_g(r, 4) << "\" fill=\"" << color << "\"/>\n";
  }
  void text(double x, double y, const std::string& s) {
    os << "<text x=\"" << fmt_g(x, 8) << "\" y=\"" << fmt_g(y, 8)
       << "\" font-size=\"11\" font-family=\"monospace\">" << s
       << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const char* color, double width = 1.2) {
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"" << fmt_g(width, 4) << "\" points=\"";
    for (const auto& [x, y] : pts) os << fmt_g(x, 8) << "," << fmt_g(y, 8) << " ";
    os << "\"/>\n";
  }
  std::string finish() {
    os << "</svg>\n";
    return os.str();
  }
};

}  // namespace

std::string render_tentgraph(const TentMap& f) {
  const double W = 480, H = 480, M = 40;
  double a = f.a.approx(), b = f.b.approx();
  auto X = [&](double x) { return M + (x - a) / (b - a) * (W - 2 * M); };
  auto Y = [&](double y) { return H - M - (y - a) / (b - a) * (H - 2 * M); };
  Svg svg(W, H);
  svg.line(X(a), Y(a), X(b), Y(a), "black");
  svg.line(X(a), Y(a), X(a), Y(b), "black");
  double c = 0.5, lam = f.lambda.approx();
  svg.polyline({{X(a), Y(lam * a)}, {X(c), Y(b)}, {X(b), Y(lam * (1 - b))}},
               "crimson", 1.6);
  svg.polyline({{X(a), Y(a)}, {X(b), Y(b)}}, "gray", 0.6);
  for (double v : {a, c, b, f.p_fix.approx()}) svg.circle(X(v), Y(a), 2.5, "black");
  svg.text(X(a) - 6, Y(a) + 16, "a");
  svg.text(X(c) - 3, Y(a) + 16, "c");
  svg.text(X(b) - 3, Y(a) + 16, "b");
  svg.text(X(f.p_fix.approx()) - 3, Y(a) + 28, "p");
  return svg.finish();
}

std::string render_outsidegraph(const TentMap& f) {
  // graph of B in the arclength coordinate t on [0,1): plateau at t(f(a)_l)
  const double W = 480, H = 480, M = 40;
  auto X = [&](double t) { return M + t * (W - 2 * M); };
  auto Y = [&](double t) { return H - M - t * (H - 2 * M); };
  Svg svg(W, H);
  svg.line(X(0), Y(0), X(1), Y(0), "black");
  svg.line(X(0), Y(0), X(0), Y(1), "black");
  svg.polyline({{X(0), Y(0)}, {X(1), Y(1)}}, "gray", 0.6);
  const int n = 600;
  std::vector<std::pair<double, double>> pts;
  double prev_t = -1;
  for (int i = 0; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    Real span = f.b - f.a;
    CirclePoint y;
    if (t < 0.5)
      y = {f.a + span * f.p.real(mpq_class(2 * t)), Copy::Lower};
    else
      y = {f.b - span * f.p.real(mpq_class(2 * (t - 0.5))), Copy::Upper};
    double ti;
    try {
      ti = circle_coord(f, B_outside(f, y)).approx();
    } catch (const std::exception&) {
      continue;
    }
    if (prev_t >= 0 && std::abs(ti - prev_t) > 0.5) {
      svg.polyline(pts, "crimson", 1.6);
      pts.clear();
    }
    pts.emplace_back(X(t), Y(ti));
    prev_t = ti;
  }
  if (!pts.empty()) svg.polyline(pts, "crimson", 1.6);
  // plateau marks
  double t_ahat = circle_coord(f, {f.a_hat, Copy::Upper}).approx();
  double t_fa = circle_coord(f, {tent_eval(f, f.a), Copy::Lower}).approx();
  svg.line(X(t_ahat), Y(t_fa), X(1), Y(t_fa), "steelblue", 2.0);
  svg.text(X(t_ahat), Y(t_fa) - 6, "plateau -> f(a)_l");
  return svg.finish();
}

std::string render_staircase(const std::vector<SweepRow>& rows) {
  const double W = 640, H = 420, M = 46;
  if (rows.empty()) return Svg(W, H).finish();
  double lmin = rows.front().lambda, lmax = rows.back().lambda;
  auto X = [&](double l) { return M + (l - lmin) / (lmax - lmin) * (W - 2 * M); };
  auto Y = [&](double q) { return H - M - q / 0.5 * (H - 2 * M); };
  Svg svg(W, H);
  svg.line(X(lmin), Y(0), X(lmax), Y(0), "black");
  svg.line(X(lmin), Y(0), X(lmin), Y(0.5), "black");
  svg.text(X(lmin) - 30, Y(0.5) + 4, "1/2");
  svg.text(X(lmin) - 18, Y(0) + 14, fmt_g(lmin, 4));
  svg.text(X(lmax) - 18, Y(0) + 14, fmt_g(lmax, 4));
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!r.rational) continue;
    double q = static_cast<double>(r.m) / r.n;
    pts.emplace_back(X(r.lambda), Y(q));
  }
  svg.polyline(pts, "crimson", 1.2);
  return svg.finish();
}

std::string render_fiberarc(const TentMap&, const FiberArc& arc) {
  // top band: H coordinates (Cantor picture); bottom band: cumulative
  // alpha coordinate with identified junctions marked
  const double W = 640, H = 240, M = 30;
  Svg svg(W, H);
  double total = arc.cum.back().approx();
  if (total <= 0) total = 1;
  auto Xh = [&](double h) { return M + h * (W - 2 * M); };
  auto Xc = [&](double c) { return M + c / total * (W - 2 * M); };
  for (size_t i = 0; i < arc.threads.size(); ++i) {
    double hlo = arc.h_lo[i].get_d(), hhi = arc.h_hi[i].get_d();
    svg.line(Xh(hlo), 60, Xh(hhi), 60, "black", 3.0);
    double clo = arc.cum[i].approx(), chi = arc.cum[i + 1].approx();
    svg.line(Xc(clo), 160, Xc(chi), 160, "steelblue", 3.0);
  }
  for (auto [i, j] : arc.identified) {
    double cj = arc.cum[j].approx();
    svg.circle(Xc(cj), 160, 3.0, "crimson");
  }
  svg.text(M, 40, "H embedding");
  svg.text(M, 145, "alpha coordinate (identified junctions marked)");
  return svg.finish();
}

std::string render_streamlines(const TentMap& f, const Density& d,
                               const Streamline& line, int psi_depth) {
  // (x0, psi)-coordinates: each flat arc is a horizontal segment at its psi
  // level; stable fibers appear as vertical lines
  const double W = 640, H = 420, M = 40;
  double a = f.a.approx(), b = f.b.approx();
  double lam_r = std::pow(f.lambda.approx(), psi_depth);
  auto X = [&](double x) { return M + (x - a) / (b - a) * (W - 2 * M); };
  Svg svg(W, H);
  double psi_max = 0;
  std::vector<std::array<double, 3>> segs;
  for (const auto& arc : line.arcs) {
    // psi of the arc at its midpoint: cumulative mass below its word
    Real mid = (arc.lo + arc.hi) / f.p.real(2);
    FiberApprox fb = fiber(f, mid, psi_depth);
    double cum = 0;
    std::vector<uint8_t> wprefix(arc.word.begin(),
                                 arc.word.begin() +
                                     std::min<size_t>(arc.word.size(),
                                                      psi_depth));
    for (size_t i = 0; i < fb.threads.size(); ++i) {
      cum += d.eval_d(fb.threads[i].coords.back().approx()) / lam_r;
      if (fb.words[i].s == wprefix) break;
    }
    psi_max = std::max(psi_max, cum);
    segs.push_back({arc.lo.approx(), arc.hi.approx(), cum});
  }
  if (psi_max <= 0) psi_max = 1;
  auto Y = [&](double psi) { return H - M - psi / psi_max * (H - 2 * M); };
  for (const auto& s : segs)
    svg.line(X(s[0]), Y(s[2]), X(s[1]), Y(s[2]), "crimson", 1.5);
  // a few stable fibers as vertical lines
  for (int i = 1; i <= 4; ++i) {
    double x = a + (b - a) * i / 5.0;
    svg.line(X(x), Y(0), X(x), Y(psi_max), "steelblue", 0.5);
  }
  return svg.finish();
}

std::string render_chart(const ChartPatch& patch) {
  const double W = 640, H = 420, M = 40;
  double lo = patch.lo.approx(), hi = patch.hi.approx();
  double psi_max = 0;
  for (const auto& row : patch.psi)
    for (double v : row) psi_max = std::max(psi_max, v);
  if (psi_max <= 0) psi_max = 1;
  auto X = [&](double x) { return M + (x - lo) / (hi - lo) * (W - 2 * M); };
  auto Y = [&](double v) { return H - M - v / psi_max * (H - 2 * M); };
  Svg svg(W, H);
  for (const auto& row : patch.psi) {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < row.size(); ++i)
      pts.emplace_back(X(patch.xs[i]), Y(row[i]));
    svg.polyline(pts, "crimson", 1.0);
  }
  svg.text(M, 20, "chart patch: psi per arc over K");
  return svg.finish();
}

std::string density_csv(const Density& d, int n) {
  std::ostringstream os;
  os << "x,phi\n";
  const TentMap& f = d.map();
  double a = f.a.approx(), b = f.b.approx();
  for (int i = 0; i < n; ++i) {
    double x = a + (b - a) * (i + 0.5) / n;
    os << fmt_g(x, 10) << "," << fmt_g(d.eval_d(x), 10) << "\n";
  }
  return os.str();
}

std::string chart_csv(const ChartPatch& patch) {
  std::ostringstream os;
  os << "arc,x,psi\n";
  for (size_t w = 0; w < patch.psi.size(); ++w)
    for (size_t i = 0; i < patch.xs.size(); ++i)
      os << w << "," << fmt_g(patch.xs[i], 10) << ","
         << fmt_g(patch.psi[w][i], 10) << "\n";
  return os.str();
}

}  // namespace tentlab
