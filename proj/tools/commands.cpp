#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tfi/acceptance.hpp"
#include "tfi/tfi.hpp"

namespace tfi::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

namespace {

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void values(std::initializer_list<double> cells) {
    bool first = true;
    for (double v : cells) {
      out_ << (first ? "" : ",") << format_double(v);
      first = false;
    }
    out_ << '\n';
  }
  std::string name() const { return path_.filename().string(); }

 private:
  fs::path path_;
  std::ofstream out_;
};

struct Run {
  ExperimentConfig cfg;
  ordered_json meta;
  fs::path dir;

  Run(const ConfigSource& source, const std::string& command) : cfg(source.resolve()) {
    dir = cfg.output_dir;
    fs::create_directories(dir);
    meta["command"] = command;
    meta["version"] = kVersion;
    ordered_json echo = ordered_json::object();
    for (const auto& [k, v] : source.effective()) echo[k] = v;
    meta["config"] = echo;
    meta["files"] = ordered_json::array();
  }
  fs::path file(const std::string& name) {
    meta["files"].push_back(name);
    return dir / name;
  }
  void finish(const std::string& command, std::ostream& out) {
    std::ofstream js(dir / (command + ".json"), std::ios::binary);
    js << meta.dump(2) << '\n';
    out << command << ": wrote";
    for (const auto& f : meta["files"]) out << ' ' << f.get<std::string>() << ',';
    out << ' ' << command << ".json to " << dir.string() << '\n';
  }
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (i + 1 == n) ? hi : lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace

int cmd_stft(const ConfigSource& source, std::ostream& out) {
  Run run(source, "stft");
  ComplexField field = stft_field(run.cfg.model(), run.cfg.window(), run.cfg.grid);
  RealField ph = phase_field(field);
  RealField weighted = amplitude_weighted_phase(field);
  Csv csv(run.file("stft.csv"), {"t", "eta", "abs", "re", "im", "phase", "weighted_phase"});
  const TFGrid& g = run.cfg.grid;
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_eta; ++j) {
      cplx v = field.at(i, j);
      csv.values({g.t_at(i), g.eta_at(j), std::abs(v), v.real(), v.imag(), ph.at(i, j), weighted.at(i, j)});
    }
  run.finish("stft", out);
  return kOk;
}

int cmd_ridges(const ConfigSource& source, std::ostream& out) {
  Run run(source, "ridges");
  TwoHarmonicModel model = run.cfg.model();
  GaussianWindow window = run.cfg.window();
  RidgeReport rep = extract_ridges(stft_field(model, window, run.cfg.grid));
  {
    Csv csv(run.file("ridge_points.csv"), {"t", "eta"});
    for (const auto& p : rep.points) csv.values({p.t, p.eta});
  }
  {
    Csv csv(run.file("ridge_counts.csv"), {"t", "maxima"});
    for (const auto& [t, c] : rep.maxima_count_per_t) csv.row({format_double(t), std::to_string(c)});
  }
  {
    Csv csv(run.file("bifurcations.csv"), {"t"});
    for (double t : rep.bifurcation_times) csv.values({t});
  }
  {
    Csv csv(run.file("fitted_ellipses.csv"), {"index", "center_t", "center_eta", "semi_axis_t", "semi_axis_eta"});
    for (const auto& e : rep.ellipses)
      csv.row({std::to_string(e.k), format_double(e.center_t), format_double(e.center_eta),
               format_double(e.semi_axis_t), format_double(e.semi_axis_eta)});
  }
  // Predicted bubbles exist only for balanced amplitudes below the critical gap.
  Csv csv(run.file("predicted_ellipses.csv"),
          {"k", "center_t", "center_eta", "semi_axis_t", "semi_axis_eta", "t_left", "t_right"});
  std::string note;
  try {
    const TFGrid& g = run.cfg.grid;
    int k_lo = static_cast<int>(std::floor(g.t_min * model.delta())) - 1;
    int k_hi = static_cast<int>(std::ceil(g.t_max * model.delta()));
    for (int k = k_lo; k <= k_hi; ++k) {
      EllipseParams e = bubble_ellipse(model, window, k);
      if (e.center_t < g.t_min || e.center_t > g.t_max) continue;
      BifurcationTimes b = bifurcation_times(model, window, k);
      csv.row({std::to_string(k), format_double(e.center_t), format_double(e.center_eta), format_double(e.semi_axis_t),
               format_double(e.semi_axis_eta), format_double(b.t_left), format_double(b.t_right)});
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HypothesisViolation && e.kind() != ErrorKind::NoBifurcation) throw;
    note = e.what();
  }
  run.meta["predicted_ellipses_note"] = note;
  run.finish("ridges", out);
  return kOk;
}

int cmd_zeros(const ConfigSource& source, std::ostream& out) {
  Run run(source, "zeros");
  ZeroSearchDiagnostics diag;
  std::vector<ZeroPoint> zeros = locate_zeros(run.cfg.model(), run.cfg.window(), run.cfg.grid, &diag);
  Csv csv(run.file("zeros.csv"), {"t0", "eta0", "winding", "winding_raw", "refinement_residual"});
  for (const auto& z : zeros)
    csv.row({format_double(z.t0), format_double(z.eta0), std::to_string(z.winding), format_double(z.winding_raw),
             format_double(z.refinement_residual)});
  run.meta["candidates"] = diag.candidates;
  run.meta["dropped"] = diag.dropped;
  run.meta["notes"] = diag.notes;
  run.finish("zeros", out);
  return kOk;
}

int cmd_reassign(const ConfigSource& source, std::ostream& out) {
  Run run(source, "reassign");
  TwoHarmonicModel model = run.cfg.model();
  GaussianWindow window = run.cfg.window();
  const TFGrid& g = run.cfg.grid;
  ReassignField sync = reassign_field(model, window, g, ReassignMode::Sync);
  {
    Csv csv(run.file("reassign.csv"), {"t", "eta", "eta_p", "eta_s_re", "eta_s_im", "at_zero"});
    for (int i = 0; i < g.n_t; ++i)
      for (int j = 0; j < g.n_eta; ++j) {
        std::size_t idx = static_cast<std::size_t>(i) * g.n_eta + j;
        double t = g.t_at(i), eta = g.eta_at(j);
        if (sync.at_zero[idx]) {
          csv.row({format_double(t), format_double(eta), "nan", "nan", "nan", "1"});
          continue;
        }
        cplx s = sync.values[idx];
        csv.row({format_double(t), format_double(eta), format_double(eta_p(model, window, t, eta)),
                 format_double(s.real()), format_double(s.imag()), "0"});
      }
  }
  {
    Csv csv(run.file("arcs.csv"), {"theta", "center_re", "center_im", "radius"});
    for (double theta : run.cfg.thetas) {
      Circle c = arc_circle(model, theta);
      csv.values({theta, c.center.real(), c.center.imag(), c.radius});
    }
  }
  Csv csv(run.file("attraction.csv"), {"t", "eta", "applicable", "bound", "actual", "holds"});
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_eta; ++j) {
      double t = g.t_at(i), eta = g.eta_at(j);
      try {
        AttractionCheck chk = attraction_bound_check(model, window, t, eta);
        csv.row({format_double(t), format_double(eta), "1", format_double(chk.bound), format_double(chk.actual),
                 chk.holds ? "1" : "0"});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotApplicable) throw;
        csv.row({format_double(t), format_double(eta), "0", "nan", "nan", "nan"});
      }
    }
  run.finish("reassign", out);
  return kOk;
}

namespace {

std::string approx_tag(ApproxTag tag) {
  switch (tag) {
    case ApproxTag::Interior: return "interior";
    case ApproxTag::OffSupport: return "off_support";
    case ApproxTag::NearSingular: return "near_singular";
  }
  return "";
}

void cross_section(Run& run, const std::string& name, TimeSlot slot) {
  const ExperimentConfig& cfg = run.cfg;
  TwoHarmonicModel model = cfg.model();
  GaussianWindow window = cfg.window();
  double t = slot.time(model);
  std::vector<double> xs = linspace(cfg.grid.eta_min, cfg.grid.eta_max, cfg.squeeze_n_xi);
  std::vector<cplx> s = squeeze_cross_section(model, window, cfg.squeeze, t, xs);
  Csv csv(run.file(name), {"xi", "quadrature_abs", "asymptotic_abs", "asymptotic_tag", "erf_abs"});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double xi = xs[i];
    std::string asym = "nan", tag = "unavailable", erf = "nan";
    try {
      Approximation ap = cfg.squeeze.weighting == Weighting::Stft
                             ? asym_sst(model, window, cfg.squeeze.alpha, slot, xi)
                             : asym_indicator(model, window, cfg.squeeze.alpha, cfg.squeeze.radius, slot, xi);
      asym = format_double(std::abs(ap.value));
      tag = approx_tag(ap.tag);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singularity) throw;
    }
    if (cfg.squeeze.weighting == Weighting::Stft && model.a() > 0.0) {
      try {
        erf = format_double(erf_closed_form(model, window, cfg.squeeze.alpha, slot, xi));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OutOfBranch) throw;
      }
    }
    csv.row({format_double(xi), format_double(std::abs(s[i])), asym, tag, erf});
  }
}

}  // namespace

int cmd_squeeze(const ConfigSource& source, std::ostream& out) {
  Run run(source, "squeeze");
  const ExperimentConfig& cfg = run.cfg;
  TFGrid lattice = cfg.grid;
  lattice.n_t = cfg.squeeze_field_n_t;
  lattice.n_eta = cfg.squeeze_field_n_xi;
  ComplexField field = squeeze_field(cfg.model(), cfg.window(), cfg.squeeze, lattice);
  {
    Csv csv(run.file("squeeze.csv"), {"t", "xi", "abs", "re", "im"});
    for (int i = 0; i < lattice.n_t; ++i)
      for (int j = 0; j < lattice.n_eta; ++j) {
        cplx v = field.at(i, j);
        csv.values({lattice.t_at(i), lattice.eta_at(j), std::abs(v), v.real(), v.imag()});
      }
  }
  cross_section(run, "squeeze_constructive.csv", {SlotKind::Constructive, cfg.squeeze_k});
  cross_section(run, "squeeze_destructive.csv", {SlotKind::Destructive, cfg.squeeze_k});
  run.meta["radius"] = cfg.squeeze.radius;
  run.finish("squeeze", out);
  return kOk;
}

namespace {

// Bisects the 1 -> 2 maxima flip at the constructive time; tolerance is relative to hi.
template <class Count>
std::pair<double, double> bracket_flip(double lo, double hi, double rel_tol, Count count) {
  if (count(lo) >= 2 || count(hi) < 2)
    throw Error(ErrorKind::Inconclusive, "maxima count does not flip across [" + format_double(lo) + ", " +
                                             format_double(hi) + "]");
  while (hi - lo > rel_tol * hi) {
    double mid = 0.5 * (lo + hi);
    (count(mid) >= 2 ? hi : lo) = mid;
  }
  return {lo, hi};
}

}  // namespace

int cmd_critical(const ConfigSource& source, double a, double sigma, const std::string& method, std::ostream& out) {
  ConfigSource adjusted = source;
  adjusted.add_override("--model.a=" + format_double(a));
  adjusted.add_override("--window.sigma=" + format_double(sigma));
  Run run(adjusted, "critical");
  GaussianWindow window = run.cfg.window();
  const double xi0 = run.cfg.xi0;
  double crit = 0.0, aux = 0.0;
  std::pair<double, double> bracket;
  ordered_json res;
  if (method == "stft") {
    StftCriticalGap g = critical_gap_stft(a, window);
    crit = g.delta_crit;
    aux = g.s;
    res["s"] = g.s;
    bracket = bracket_flip(0.5 * crit, 1.5 * crit, 1e-6, [&](double d) {
      TwoHarmonicModel m(xi0, d, a);
      return count_frequency_maxima(m, window, constructive_time(m, 0), default_band(m, window));
    });
  } else if (method == "sst") {
    SstCriticalGap g = critical_gap_sst(a, window);
    crit = g.delta_crit;
    aux = g.r;
    res["r"] = g.r;
    res["xi_c_offset"] = g.xi_c;
    res["residual"] = g.residual;
    res["iterations"] = g.iterations;
    SqueezeConfig cfg = run.cfg.squeeze;
    bracket = bracket_flip(0.5 * crit, 1.5 * crit, 2e-3, [&](double d) {
      TwoHarmonicModel m(xi0, d, a);
      double pad = 5.0 * std::sqrt(cfg.alpha);
      std::vector<double> xs = linspace(m.xi0() - pad, m.xi1() + pad, 513);
      std::vector<cplx> s = squeeze_cross_section(m, window, cfg, constructive_time(m, 0), xs);
      std::vector<double> mag(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) mag[i] = std::abs(s[i]);
      return oracle_maxima_count(mag);
    });
  } else {
    throw ConfigError("critical: method must be stft or sst, got '" + method + "'");
  }
  res["method"] = method;
  res["a"] = a;
  res["sigma"] = sigma;
  res["delta_crit"] = crit;
  res["empirical_bracket"] = {bracket.first, bracket.second};
  run.meta["result"] = res;
  out << "method=" << method << " a=" << format_double(a) << " sigma=" << format_double(sigma)
      << " delta_crit=" << format_double(crit) << (method == "stft" ? " s=" : " r=") << format_double(aux)
      << " empirical_bracket=[" << format_double(bracket.first) << ", " << format_double(bracket.second) << "]\n";
  run.finish("critical", out);
  return kOk;
}

int cmd_validate(const std::string& level, std::ostream& out) {
  AcceptanceLevel lv;
  if (level == "fast") lv = AcceptanceLevel::Fast;
  else if (level == "full") lv = AcceptanceLevel::Full;
  else throw ConfigError("validate: level must be fast or full, got '" + level + "'");
  std::ostringstream log;
  std::vector<CriterionResult> results = run_acceptance(lv, log);
  int failed = 0;
  out << std::left << std::setw(4) << "id" << std::setw(34) << "criterion" << std::setw(7) << "result"
      << "seconds\n";
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    out << std::setw(4) << r.id << std::setw(34) << r.title << std::setw(7) << (r.passed ? "PASS" : "FAIL")
        << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat << '\n';
  }
  out << "\n" << log.str();
  out << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? kOk : kValidationFailure;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? kNumericalFailure : kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace tfi::cli
