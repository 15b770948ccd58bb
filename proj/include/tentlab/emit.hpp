#pragma once

#include <string>
#include <vector>

#include "tentlab/verify.hpp"

namespace tentlab {

// Deterministic double formatting shared by all emitters.
std::string fmt_g(double v, int digits = 12);

struct SweepRow {
  double lambda = 0;
  bool rational = false;
  long m = 0, n = 0;
  std::string type;  // "endpoint-", "endpoint+", "nbt", "general", ""
  bool numeric = false;
  double bracket_lo = 0, bracket_hi = 0;
};

// Parallel parameter sweep with deterministic, thread-count independent
// output order.
std::vector<SweepRow> run_sweep(double from, double to, int steps,
                                long max_iters, int threads);

std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string height_type_name(HeightType t);
std::string report_status_name(Report::Status s);

// SVG renderings (deterministic byte output).
std::string render_tentgraph(const TentMap& f);
std::string render_outsidegraph(const TentMap& f);
std::string render_staircase(const std::vector<SweepRow>& rows);
std::string render_fiberarc(const TentMap& f, const FiberArc& arc);
std::string render_streamlines(const TentMap& f, const Density& d,
                               const Streamline& line, int psi_depth);
std::string render_chart(const ChartPatch& patch);

// CSV of a density: x, phi columns over n sample points.
std::string density_csv(const Density& d, int n);

// CSV of a chart patch: x, psi per arc.
std::string chart_csv(const ChartPatch& patch);

}  // namespace tentlab
