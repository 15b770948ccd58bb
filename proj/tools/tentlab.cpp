// tentlab: finite-depth computations for core tent maps, their inverse
// limits, the outside circle map, invariant densities, and the measured
// structures built from them. See README.md for usage.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tentlab/emit.hpp"

using json = nlohmann::ordered_json;
using namespace tentlab;

namespace {

struct GlobalOpts {
  std::string lambda_spec = "dec:1.62";
  int depth = 24;
  int precision = 256;
  unsigned long seed = 7;
  bool json_out = false;
  std::string out_path;
  int threads = 1;
};

json config_echo(const GlobalOpts& g) {
  json j;
  j["lambda"] = g.lambda_spec;
  j["depth"] = g.depth;
  j["precision"] = g.precision;
  j["seed"] = g.seed;
  j["threads"] = g.threads;
  return j;
}

Parameter make_param(const GlobalOpts& g) {
  PrecPolicy pp;
  pp.def = g.precision;
  pp.cap = std::max<mpfr_prec_t>(4096, g.precision);
  return Parameter::parse(g.lambda_spec, pp);
}

void write_output(const GlobalOpts& g, const std::string& content) {
  if (g.out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(g.out_path, std::ios::binary);
  out << content;
}

json envelope(const GlobalOpts& g, json result) {
  json j;
  j["schema"] = "tentlab/1";
  j["config"] = config_echo(g);
  j["result"] = std::move(result);
  return j;
}

json word_json(const Word& w) {
  json j;
  j["word"] = w.str();
  j["ambiguous"] = w.ambiguous_tail;
  return j;
}

json thread_json(const Thread& t) {
  json j = json::array();
  for (const auto& c : t.coords) j.push_back(c.approx());
  return j;
}

std::vector<uint8_t> parse_word(const std::string& s) {
  std::vector<uint8_t> w;
  for (char ch : s) {
    if (ch == '0')
      w.push_back(0);
    else if (ch == '1')
      w.push_back(1);
    else
      throw CLI::ValidationError("branch word must consist of 0s and 1s");
  }
  return w;
}

Density make_density(const TentMap& f, const std::string& mode, int grid_n) {
  if (mode == "markov") return density_markov(f);
  if (mode == "grid") return density_grid(f, grid_n, 1e-10, 4000);
  if (mode == "series") return density_series(f);
  // auto: exact Markov when available, otherwise the jump series
  if (f.p.exact()) {
    try {
      return density_markov(f);
    } catch (const NotMarkov&) {
    }
  }
  return density_series(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-depth tent map inverse limit laboratory"};
  app.set_config("--config");
  GlobalOpts g;
  app.add_option("--lambda", g.lambda_spec,
                 "slope: poly:\"c0,..,cn\":interval:\"lo,hi\" or dec:\"...\"");
  app.add_option("--depth", g.depth, "default truncation depth");
  app.add_option("--precision", g.precision, "working precision in bits");
  app.add_option("--seed", g.seed, "seed for randomized suites");
  app.add_flag("--json", g.json_out, "emit a JSON envelope");
  app.add_option("--out", g.out_path, "output path (default stdout)");
  app.add_option("--threads", g.threads, "worker threads for sweeps/suites");
  app.require_subcommand(1);
  // let global flags appear after the subcommand as well
  app.fallthrough();

  // ---- height ----
  auto* cmd_height = app.add_subcommand("height", "rotation number of the outside map");
  long max_iters = 4096;
  cmd_height->add_option("--max-iters", max_iters, "first-return iteration cap");

  // ---- sweep ----
  auto* cmd_sweep = app.add_subcommand("sweep", "height sweep over a lambda range");
  double sw_from = 1.45, sw_to = 1.99;
  int sw_steps = 500;
  long sw_iters = 1500;
  cmd_sweep->add_option("--from", sw_from);
  cmd_sweep->add_option("--to", sw_to);
  cmd_sweep->add_option("--steps", sw_steps);
  cmd_sweep->add_option("--max-iters", sw_iters);

  // ---- classify ----
  auto* cmd_classify = app.add_subcommand("classify", "height type and critical orbit");
  long cl_iters = 4096;
  cmd_classify->add_option("--max-iters", cl_iters);

  // ---- kneading ----
  auto* cmd_knead = app.add_subcommand("kneading", "kneading word and epsilon");

  // ---- fiber ----
  auto* cmd_fiber = app.add_subcommand("fiber", "fiber enumeration over x");
  std::string fiber_x = "0.61";
  cmd_fiber->add_option("--x", fiber_x);

  // ---- arc ----
  auto* cmd_arc = app.add_subcommand("arc", "fiber arc with identifications");
  std::string arc_x = "0.61";
  cmd_arc->add_option("--x", arc_x);

  // ---- chart ----
  auto* cmd_chart = app.add_subcommand("chart", "(x, psi) chart patch over K");
  std::string chart_k = "0.55,0.57";
  int chart_samples = 16;
  cmd_chart->add_option("--K", chart_k, "interval lo,hi");
  cmd_chart->add_option("--samples", chart_samples);

  // ---- streamline ----
  auto* cmd_stream = app.add_subcommand("streamline", "trace a path component");
  std::string seed_x = "0.61";
  std::string branch_word = "";
  int stream_steps = 8;
  std::string stream_svg;
  cmd_stream->add_option("--seed-x", seed_x);
  cmd_stream->add_option("--branch-word", branch_word);
  cmd_stream->add_option("--steps", stream_steps);
  cmd_stream->add_option("--svg", stream_svg, "also write an SVG rendering");

  // ---- density ----
  auto* cmd_density = app.add_subcommand("density", "invariant density");
  std::string density_mode = "auto";
  int grid_n = 1 << 12;
  bool density_markov_flag = false;
  cmd_density->add_option("--grid", grid_n, "grid cells (selects the grid backend)");
  cmd_density->add_flag("--markov", density_markov_flag, "exact Markov backend");
  int density_samples = 1024;
  cmd_density->add_option("--samples", density_samples, "CSV sample count");

  // ---- verify ----
  auto* cmd_verify = app.add_subcommand("verify", "run named property suites");
  std::vector<std::string> suite_args;
  cmd_verify->add_option("suites", suite_args, "suite names or 'all'")
      ->expected(-1);
  bool list_suites = false;
  cmd_verify->add_flag("--list", list_suites, "list suite names");
  std::string verify_j;
  cmd_verify->add_option("--J", verify_j, "explicit interval for disintegrate");
  int quad_cells = 1 << 12;
  cmd_verify->add_option("--quad-cells", quad_cells);

  // ---- render ----
  auto* cmd_render = app.add_subcommand("render", "SVG/CSV emission");
  std::string render_kind = "tentgraph";
  cmd_render
      ->add_option("--kind", render_kind,
                   "tentgraph|outsidegraph|staircase|fiberarc|streamlines|chart")
      ->required();
  std::string render_x = "0.61";
  cmd_render->add_option("--x", render_x);
  std::string render_k = "0.55,0.57";
  cmd_render->add_option("--K", render_k);
  int render_steps = 500;
  cmd_render->add_option("--steps", render_steps);

  cmd_height->fallthrough();
  cmd_sweep->fallthrough();
  cmd_classify->fallthrough();
  cmd_knead->fallthrough();
  cmd_fiber->fallthrough();
  cmd_arc->fallthrough();
  cmd_chart->fallthrough();
  cmd_stream->fallthrough();
  cmd_density->fallthrough();
  cmd_verify->fallthrough();
  cmd_render->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_sweep) {
      auto rows = run_sweep(sw_from, sw_to, sw_steps, sw_iters, g.threads);
      if (g.json_out) {
        json arr = json::array();
        for (const auto& r : rows) {
          json j;
          j["lambda"] = r.lambda;
          j["rational"] = r.rational;
          if (r.rational) {
            j["m"] = r.m;
            j["n"] = r.n;
            j["type"] = r.type;
            j["numeric"] = r.numeric;
          }
          j["bracket"] = {r.bracket_lo, r.bracket_hi};
          arr.push_back(std::move(j));
        }
        write_output(g, envelope(g, std::move(arr)).dump(2) + "\n");
      } else {
        write_output(g, sweep_csv(rows));
      }
      return 0;
    }

    Parameter p = make_param(g);
    TentMap f = TentMap::make(p);

    if (*cmd_height) {
      HeightResult h = height(f, max_iters);
      json j;
      j["rational"] = h.rational;
      if (h.rational) {
        j["m"] = h.m;
        j["n"] = h.n;
        j["type"] = height_type_name(h.type);
        j["confidence"] = h.numeric ? "numeric" : "exact";
      }
      j["bracket"] = {h.bracket_lo, h.bracket_hi};
      j["iters_used"] = h.iters_used;
      if (g.json_out) {
        write_output(g, envelope(g, std::move(j)).dump(2) + "\n");
      } else {
        std::ostringstream os;
        if (h.rational)
          os << "height " << h.m << "/" << h.n << " ("
             << height_type_name(h.type) << (h.numeric ? ", numeric" : "")
             << ") after " << h.iters_used << " iterations\n";
        else
          os << "undecided after " << h.iters_used << " iterations; bracket ["
             << fmt_g(h.bracket_lo, 8) << ", " << fmt_g(h.bracket_hi, 8)
             << "]\n";
        write_output(g, os.str());
      }
      return 0;
    }

    if (*cmd_classify) {
      Classification cl = classify(f, cl_iters);
      json j;
      switch (cl.kind) {
        case Classification::Kind::IrrationalOrUndecided:
          j["kind"] = "irrational-or-undecided";
          break;
        case Classification::Kind::RationalEndpointMinus:
          j["kind"] = "rational-endpoint-";
          break;
        case Classification::Kind::RationalEndpointPlus:
          j["kind"] = "rational-endpoint+";
          break;
        case Classification::Kind::RationalNBT:
          j["kind"] = "rational-nbt";
          break;
        case Classification::Kind::RationalGeneral:
          j["kind"] = "rational-general";
          break;
      }
      if (cl.h.rational) {
        j["m"] = cl.h.m;
        j["n"] = cl.h.n;
      }
      switch (cl.profile.kind) {
        case PostcriticalProfile::Kind::PeriodicC:
          j["critical_orbit"] = "periodic";
          j["period"] = cl.profile.period;
          break;
        case PostcriticalProfile::Kind::PreperiodicC:
          j["critical_orbit"] = "preperiodic";
          j["preperiod"] = cl.profile.preperiod;
          j["period"] = cl.profile.period;
          break;
        case PostcriticalProfile::Kind::InfiniteWithinCap:
          j["critical_orbit"] = "infinite-within-cap";
          break;
      }
      j["confidence"] =
          (cl.h.numeric || cl.profile.numeric) ? "numeric" : "exact";
      write_output(g, g.json_out ? envelope(g, std::move(j)).dump(2) + "\n"
                                 : j.dump(2) + "\n");
      return 0;
    }

    if (*cmd_knead) {
      Word k = kneading(f, g.depth);
      auto eps = tent_epsilon(f);
      json j;
      j["lambda"] = g.lambda_spec;
      j["depth"] = g.depth;
      j["word"] = k.str();
      if (eps)
        j["epsilon"] = *eps;
      else
        j["epsilon"] = nullptr;
      j["ambiguous"] = k.ambiguous_tail;
      write_output(g, g.json_out ? envelope(g, std::move(j)).dump(2) + "\n"
                                 : j.dump(2) + "\n");
      return 0;
    }

    if (*cmd_fiber) {
      Real x = p.real(mpq_from_decimal(fiber_x));
      FiberApprox fb = fiber(f, x, g.depth);
      json j;
      j["x"] = x.approx();
      j["depth"] = fb.r;
      j["count"] = fb.threads.size();
      j["sorted"] = fb.sorted;
      json th = json::array();
      for (size_t i = 0; i < fb.threads.size(); ++i) {
        json e;
        e["word"] = fb.words[i].str();
        e["coords"] = thread_json(fb.threads[i]);
        th.push_back(std::move(e));
      }
      j["threads"] = std::move(th);
      if (fb.sorted && !fb.threads.empty()) {
        j["lower_extreme"] = fb.words.front().str();
        j["upper_extreme"] = fb.words.back().str();
        json cons = json::array();
        for (size_t i = 0; i + 1 < fb.threads.size(); ++i) {
          if (consecutive(f, fb.threads[i], fb.threads[i + 1]))
            cons.push_back({i, i + 1});
        }
        j["consecutive_pairs"] = std::move(cons);
      }
      write_output(g, envelope(g, std::move(j)).dump(2) + "\n");
      return 0;
    }

    if (*cmd_arc) {
      Real x = p.real(mpq_from_decimal(arc_x));
      Density d = make_density(f, "auto", grid_n);
      FiberArc arc = fiber_arc(f, d, x, g.depth <= 16 ? g.depth : 12);
      json j;
      j["x"] = x.approx();
      j["depth"] = arc.r;
      j["count"] = arc.threads.size();
      j["total_mass"] = arc.cum.back().approx();
      json th = json::array();
      for (size_t i = 0; i < arc.threads.size(); ++i) {
        json e;
        e["word"] = arc.words[i].str();
        e["h"] = {arc.h_lo[i].get_d(), arc.h_hi[i].get_d()};
        e["t"] = {arc.cum[i].approx(), arc.cum[i + 1].approx()};
        th.push_back(std::move(e));
      }
      j["threads"] = std::move(th);
      json idp = json::array();
      for (auto [i1, i2] : arc.identified) idp.push_back({i1, i2});
      j["identified_pairs"] = std::move(idp);
      write_output(g, envelope(g, std::move(j)).dump(2) + "\n");
      return 0;
    }

    if (*cmd_chart) {
      size_t comma = chart_k.find(',');
      Real lo = p.real(mpq_from_decimal(chart_k.substr(0, comma)));
      Real hi = p.real(mpq_from_decimal(chart_k.substr(comma + 1)));
      Density d = make_density(f, "auto", grid_n);
      int rr = std::min(g.depth, 12);
      ChartPatch patch =
          chart_patch(f, d, lo, hi, rr, chart_samples, std::max(64, 4 * rr));
      write_output(g, chart_csv(patch));
      return 0;
    }

    if (*cmd_stream) {
      Real x = p.real(mpq_from_decimal(seed_x));
      Thread seed;
      if (branch_word.empty()) {
        FiberApprox fb = fiber(f, x, std::min(g.depth, 12));
        seed = fb.threads[fb.threads.size() / 2];
      } else {
        seed = reconstruct(f, x, parse_word(branch_word));
      }
      Streamline line = trace_streamline(f, seed, stream_steps);
      json j;
      j["arcs"] = json::array();
      for (const auto& arc : line.arcs) {
        json e;
        e["lo"] = arc.lo.approx();
        e["hi"] = arc.hi.approx();
        e["bind_lo"] = arc.bind_lo;
        e["bind_hi"] = arc.bind_hi;
        std::string w;
        for (uint8_t b : arc.word) w.push_back(b ? '1' : '0');
        e["word"] = w;
        j["arcs"].push_back(std::move(e));
      }
      j["exhausted_lo"] = line.exhausted_lo;
      j["exhausted_hi"] = line.exhausted_hi;
      if (!stream_svg.empty()) {
        Density d = make_density(f, "auto", grid_n);
        std::ofstream svg(stream_svg, std::ios::binary);
        svg << render_streamlines(f, d, line, std::min(g.depth, 10));
      }
      write_output(g, envelope(g, std::move(j)).dump(2) + "\n");
      return 0;
    }

    if (*cmd_density) {
      std::string mode = density_mode;
      if (density_markov_flag)
        mode = "markov";
      else if (cmd_density->count("--grid"))
        mode = "grid";
      Density d = make_density(f, mode, grid_n);
      write_output(g, density_csv(d, density_samples));
      return 0;
    }

    if (*cmd_verify) {
      if (!verify_j.empty()) {
        // pinned disintegration family: E = pi_r^{-1}(J)
        size_t comma = verify_j.find(',');
        double jlo = std::atof(verify_j.substr(0, comma).c_str());
        double jhi = std::atof(verify_j.substr(comma + 1).c_str());
        Density d = make_density(f, "auto", grid_n);
        auto res = disintegration_check(d, std::min(g.depth, 10), jlo, jhi,
                                        quad_cells);
        json j;
        j["lhs"] = res.lhs;
        j["rhs"] = res.rhs;
        j["gap"] = res.gap;
        j["cells"] = res.cells;
        write_output(g, g.json_out ? envelope(g, std::move(j)).dump(2) + "\n"
                                   : j.dump(2) + "\n");
        return 0;
      }
      if (list_suites) {
        std::ostringstream os;
        for (const auto& n : suite_names()) os << n << "\n";
        write_output(g, os.str());
        return 0;
      }
      if (suite_args.empty()) suite_args = {"all"};
      auto reports = run_suite(suite_args, p, g.seed, g.depth, g.threads);
      bool all_pass = true;
      json arr = json::array();
      std::ostringstream os;
      for (const auto& rep : reports) {
        if (rep.status == Report::Status::Fail) all_pass = false;
        json j;
        j["name"] = rep.name;
        j["status"] = report_status_name(rep.status);
        j["gap"] = rep.gap;
        j["tol"] = rep.tol;
        j["detail"] = rep.detail;
        arr.push_back(std::move(j));
        os << (rep.status == Report::Status::Pass
                   ? "PASS "
                   : (rep.status == Report::Status::Fail ? "FAIL " : "---- "))
           << rep.name << "  gap=" << fmt_g(rep.gap, 6) << " tol="
           << fmt_g(rep.tol, 6) << "  " << rep.detail << "\n";
      }
      write_output(g, g.json_out ? envelope(g, std::move(arr)).dump(2) + "\n"
                                 : os.str());
      return all_pass ? 0 : 1;
    }

    if (*cmd_render) {
      if (render_kind == "tentgraph") {
        write_output(g, render_tentgraph(f));
      } else if (render_kind == "outsidegraph") {
        write_output(g, render_outsidegraph(f));
      } else if (render_kind == "staircase") {
        auto rows = run_sweep(1.45, 1.99, render_steps, 1500, g.threads);
        write_output(g, render_staircase(rows));
        if (!g.out_path.empty()) {
          std::ofstream csv(g.out_path + ".csv", std::ios::binary);
          csv << sweep_csv(rows);
        }
      } else if (render_kind == "fiberarc") {
        Real x = p.real(mpq_from_decimal(render_x));
        Density d = make_density(f, "auto", grid_n);
        FiberArc arc = fiber_arc(f, d, x, std::min(g.depth, 12));
        write_output(g, render_fiberarc(f, arc));
      } else if (render_kind == "streamlines") {
        Real x = p.real(mpq_from_decimal(render_x));
        FiberApprox fb = fiber(f, x, std::min(g.depth, 10));
        Streamline line =
            trace_streamline(f, fb.threads[fb.threads.size() / 2], 8);
        Density d = make_density(f, "auto", grid_n);
        write_output(g, render_streamlines(f, d, line, std::min(g.depth, 10)));
      } else if (render_kind == "chart") {
        size_t comma = render_k.find(',');
        Real lo = p.real(mpq_from_decimal(render_k.substr(0, comma)));
        Real hi = p.real(mpq_from_decimal(render_k.substr(comma + 1)));
        Density d = make_density(f, "auto", grid_n);
        int rr = std::min(g.depth, 10);
        ChartPatch patch = chart_patch(f, d, lo, hi, rr, 16, std::max(64, 4 * rr));
        write_output(g, render_chart(patch));
      } else {
        std::cerr << "unknown render kind: " << render_kind << "\n";
        return 2;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
