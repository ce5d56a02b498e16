#include "timerev/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <variant>

#include <fmt/format.h>

#include "timerev/analytic.hpp"
#include "timerev/discrete_modes.hpp"
#include "timerev/errors.hpp"
#include "timerev/quantum_forward.hpp"

namespace timerev {

using nlohmann::json;

namespace {

const std::map<std::string, ExperimentKind> kExperiments{
    {"young", ExperimentKind::young}, {"focus", ExperimentKind::focus}, {"modes-audit", ExperimentKind::modes_audit}};
const std::map<std::string, RunMode> kModes{{"forward", RunMode::forward},
                                            {"reversed", RunMode::reversed},
                                            {"analytic", RunMode::analytic},
                                            {"compare", RunMode::compare}};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Collects diagnostics while reading a config document.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& out) : out_(out) {}

  void error(std::string field, std::string message) { out_.push_back({std::move(field), std::move(message)}); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path.empty() ? "<root>" : path, "must be a JSON object");
    return false;
  }

  void unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
    const std::set<std::string> names(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!names.count(it.key())) error(join(path, it.key()), "unknown field");
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required) {
    const std::string field = join(path, key);
    if (!obj.contains(key)) {
      if (required) error(field, "required");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      error(field, "must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      error(field, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> positive(const json& obj, const std::string& key, const std::string& path, bool required) {
    auto x = number(obj, key, path, required);
    if (x && !(*x > 0.0)) {
      error(join(path, key), "must be positive");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::uint64_t> unsigned_integer(const json& obj, const std::string& key, const std::string& path,
                                                 bool required) {
    const std::string field = join(path, key);
    if (!obj.contains(key)) {
      if (required) error(field, "required");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      error(field, "must be a nonnegative integer");
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path, bool required) {
    const std::string field = join(path, key);
    if (!obj.contains(key)) {
      if (required) error(field, "required");
      return std::nullopt;
    }
    if (!obj.at(key).is_string()) {
      error(field, "must be a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

 private:
  std::vector<Diagnostic>& out_;
};

std::optional<SweepAxis> read_axis(Reader& rd, const json& j, const std::string& path,
                                   const std::set<std::string>& axes) {
  if (!rd.object(j, path)) return std::nullopt;
  rd.unknown_keys(j, path, {"axis", "start", "stop", "count", "second"});
  auto axis = rd.string(j, "axis", path, true);
  auto start = rd.number(j, "start", path, true);
  auto stop = rd.number(j, "stop", path, true);
  auto count = rd.unsigned_integer(j, "count", path, true);
  bool ok = axis && start && stop && count;
  if (axis && !axes.count(*axis)) {
    std::string allowed;
    for (const auto& a : axes) allowed += (allowed.empty() ? "" : ", ") + a;
    rd.error(join(path, "axis"), "must be one of: " + allowed);
    ok = false;
  }
  if (count && *count < 2) {
    rd.error(join(path, "count"), "must be at least 2");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return SweepAxis{*axis, *start, *stop, static_cast<std::size_t>(*count)};
}

std::optional<ExperimentConfig> read_config(const json& root, std::vector<Diagnostic>& diags) {
  Reader rd(diags);
  if (!rd.object(root, "")) return std::nullopt;
  rd.unknown_keys(root, "", {"experiment", "mode", "params", "sweep", "grid", "seed", "output", "audit", "train"});

  ExperimentConfig cfg{};
  bool ok = true;

  std::optional<ExperimentKind> kind;
  if (auto name = rd.string(root, "experiment", "", true)) {
    if (auto it = kExperiments.find(*name); it != kExperiments.end()) kind = it->second;
    else rd.error("experiment", "unknown experiment '" + *name + "' (young, focus, modes-audit)");
  }
  if (!kind) return std::nullopt;
  cfg.experiment = *kind;
  const bool optical = *kind != ExperimentKind::modes_audit;

  if (auto name = rd.string(root, "mode", "", optical)) {
    if (auto it = kModes.find(*name); it != kModes.end()) cfg.mode = it->second;
    else {
      rd.error("mode", "unknown mode '" + *name + "' (forward, reversed, analytic, compare)");
      ok = false;
    }
  } else if (optical) {
    ok = false;
  }

  if (auto seed = rd.unsigned_integer(root, "seed", "", false)) cfg.seed = *seed;
  if (auto out = rd.string(root, "output", "", false)) cfg.output = *out;

  if (!optical) {
    if (!root.contains("audit")) {
      rd.error("audit", "required");
      return std::nullopt;
    }
    const json& a = root.at("audit");
    if (!rd.object(a, "audit")) return std::nullopt;
    rd.unknown_keys(a, "audit", {"n", "trials"});
    auto n = rd.unsigned_integer(a, "n", "audit", true);
    auto trials = rd.unsigned_integer(a, "trials", "audit", true);
    if (n && *n < 1) rd.error("audit.n", "must be at least 1");
    if (trials && *trials < 1) rd.error("audit.trials", "must be at least 1");
    if (!n || !trials || *n < 1 || *trials < 1) return std::nullopt;
    cfg.audit = {static_cast<std::size_t>(*n), static_cast<std::size_t>(*trials)};
    return ok ? std::optional(cfg) : std::nullopt;
  }

  const bool young = *kind == ExperimentKind::young;
  PhysicalParams& p = cfg.params;
  if (!root.contains("params")) {
    rd.error("params", "required");
    ok = false;
  } else if (const json& pj = root.at("params"); !rd.object(pj, "params")) {
    ok = false;
  } else {
    rd.unknown_keys(pj, "params", {"lambda", "f", "D", "x1", "slit_width", "L1", "L2", "z0", "r0"});
    auto lambda = rd.positive(pj, "lambda", "params", true);
    auto f = rd.positive(pj, "f", "params", true);
    auto D = rd.positive(pj, "D", "params", !young);
    auto x1 = rd.positive(pj, "x1", "params", young);
    auto slit = rd.positive(pj, "slit_width", "params", false);
    auto L1 = rd.positive(pj, "L1", "params", false);
    auto L2 = rd.positive(pj, "L2", "params", false);
    auto z0 = rd.number(pj, "z0", "params", false);
    auto r0 = rd.number(pj, "r0", "params", false);
    ok = ok && lambda && f && (young ? bool(x1) : bool(D));
    auto bad = [&](const char* key, const std::optional<double>& v) { return pj.contains(key) && !v; };
    if (bad("D", D) || bad("x1", x1) || bad("slit_width", slit) || bad("L1", L1) || bad("L2", L2) ||
        bad("z0", z0) || bad("r0", r0))
      ok = false;
    if (lambda) p.lambda = *lambda;
    if (f) p.f = *f;
    if (D) p.D = *D;
    if (x1) p.x1 = *x1;
    p.slit_width = slit;
    if (L1) p.L1 = *L1;
    if (L2) p.L2 = *L2;
    if (z0) p.z0 = *z0;
    if (r0) p.r0 = *r0;
    if (young && x1 && slit && *x1 <= 0.5 * *slit) {
      rd.error("params.slit_width", "slits overlap: slit_width must be below 2 * x1");
      ok = false;
    }
    if (!young && f && z0 && std::abs(*z0) >= *f) {
      rd.error("params.z0", "must satisfy |z0| < f");
      ok = false;
    }
  }

  const std::set<std::string> axes = young ? std::set<std::string>{"x0"} : std::set<std::string>{"r0", "z0"};
  if (!root.contains("sweep")) {
    rd.error("sweep", "required");
    ok = false;
  } else {
    const json& sj = root.at("sweep");
    auto first = read_axis(rd, sj, "sweep", axes);
    std::optional<SweepAxis> second;
    bool second_ok = true;
    if (sj.is_object() && sj.contains("second")) {
      if (young) {
        rd.error("sweep.second", "young sweeps are one-dimensional");
        second_ok = false;
      } else {
        second = read_axis(rd, sj.at("second"), "sweep.second", axes);
        second_ok = second.has_value();
        if (sj.at("second").is_object() && sj.at("second").contains("second")) {
          rd.error("sweep.second.second", "at most two sweep axes");
          second_ok = false;
        }
        if (first && second && first->axis == second->axis) {
          rd.error("sweep.second.axis", "must differ from sweep.axis");
          second_ok = false;
        }
      }
    }
    if (first && second_ok) cfg.sweep = SweepSpec{*first, second};
    else ok = false;

    if (cfg.sweep && !young && p.f > 0.0) {
      for (const auto* ax : {&cfg.sweep->first, cfg.sweep->second ? &*cfg.sweep->second : nullptr}) {
        if (ax && ax->axis == "z0" && std::max(std::abs(ax->start), std::abs(ax->stop)) >= p.f) {
          rd.error(ax == &cfg.sweep->first ? "sweep" : "sweep.second", "z0 sweep must stay inside |z0| < f");
          ok = false;
        }
      }
    }
    if (cfg.sweep && !young && cfg.mode == RunMode::analytic) {
      if (cfg.sweep->second) {
        rd.error("sweep.second", "analytic focus laws are one-dimensional; use forward mode for maps");
        ok = false;
      } else if (cfg.sweep->first.axis == "r0" && p.z0 != 0.0) {
        rd.error("params.z0", "analytic lateral law needs z0 = 0");
        ok = false;
      } else if (cfg.sweep->first.axis == "z0" && p.r0 != 0.0) {
        rd.error("params.r0", "analytic axial law needs r0 = 0");
        ok = false;
      }
    }
  }

  const bool needs_grid =
      young ? cfg.mode != RunMode::analytic : (cfg.mode == RunMode::reversed || cfg.mode == RunMode::compare);
  if (root.contains("grid")) {
    const json& gj = root.at("grid");
    if (rd.object(gj, "grid")) {
      rd.unknown_keys(gj, "grid", {"n", "dx"});
      auto n = rd.unsigned_integer(gj, "n", "grid", true);
      auto dx = rd.positive(gj, "dx", "grid", true);
      if (n && *n < 2) rd.error("grid.n", "must be at least 2");
      if (n && dx && *n >= 2) cfg.grid = GridSpec{static_cast<std::size_t>(*n), *dx};
      else ok = false;
    } else {
      ok = false;
    }
  } else if (needs_grid) {
    rd.error("grid", "required for numeric modes");
    ok = false;
  }

  if (root.contains("train")) {
    if (!young || cfg.mode != RunMode::reversed) {
      rd.error("train", "a custom train is only used by young experiments in reversed mode");
      ok = false;
    } else {
      try {
        OpticalTrain t = root.at("train").get<OpticalTrain>();
        if (!t.ends_in_pinhole()) {
          rd.error("train", "must end in a pinhole");
          ok = false;
        } else {
          cfg.train = std::move(t);
        }
      } catch (const Error& e) {
        rd.error("train", e.what());
        ok = false;
      } catch (const json::exception& e) {
        rd.error("train", e.what());
        ok = false;
      }
    }
  }

  return ok ? std::optional(cfg) : std::nullopt;
}

struct Column {
  std::string name;
  std::vector<double> values;
};

void peak_normalize(Column& c) {
  double peak = 0.0;
  for (double v : c.values) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : c.values) v /= peak;
}

std::string render_csv(const std::vector<std::string>& coord_names, const std::vector<std::vector<double>>& coords,
                       const std::vector<Column>& columns) {
  std::string out;
  for (std::size_t i = 0; i < coord_names.size(); ++i) out += (i ? "," : "") + coord_names[i];
  for (const auto& c : columns) out += "," + c.name;
  out += "\n";
  const std::size_t rows = coords.empty() ? 0 : coords.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) out += ",";
      out += fmt::format("{:.12e}", coords[i][r]);
    }
    for (const auto& c : columns) out += fmt::format(",{:.12e}", c.values[r]);
    out += "\n";
  }
  return out;
}

std::size_t snap(const Grid1D& grid, double x, const std::string& axis) {
  const auto k = grid.nearest_index(x);
  if (!k)
    throw ConfigError(fmt::format("sweep point {}={:.6e} m lies outside the sampled range [{:.6e}, {:.6e}] m", axis,
                                  x, grid.lower_edge(), grid.upper_edge()));
  return *k;
}

json nullable(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::optional<double> try_period(const std::vector<double>& x, const std::vector<double>& v) {
  try {
    return fringe_period(x, v);
  } catch (const ShapeError&) {
    return std::nullopt;
  }
}

std::optional<double> try_fwhm(const std::vector<double>& x, const std::vector<double>& v) {
  try {
    return fwhm(x, v);
  } catch (const ShapeError&) {
    return std::nullopt;
  }
}

double argmax_coord(const std::vector<double>& x, const std::vector<double>& v) {
  const auto it = std::max_element(v.begin(), v.end());
  return x[static_cast<std::size_t>(it - v.begin())];
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> normalized(std::vector<double> v) {
  Column c{"", std::move(v)};
  peak_normalize(c);
  return std::move(c.values);
}

RunResult run_young(const ExperimentConfig& cfg, const RunOptions& opt) {
  const PhysicalParams& pp = cfg.params;
  const YoungParams p{pp.x1, pp.f, pp.lambda};
  const RelayDistances relay{pp.L1, pp.L2};
  const std::vector<double> requested = cfg.sweep->first.points();
  std::vector<double> xs = requested;
  std::vector<Column> columns;
  json summary;

  if (cfg.mode == RunMode::analytic) {
    Column two{"two_photon_analytic", {}}, classical{"classical_analytic", {}};
    for (double x : xs) {
      two.values.push_back(young_two_photon(x, p));
      classical.values.push_back(young_classical(x, p));
    }
    columns = {two, classical};
  } else {
    const Grid1D slit(cfg.grid->n, cfg.grid->dx);
    const Grid1D det(slit.n(), p.f * p.lambda / (static_cast<double>(slit.n()) * slit.dx()));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      idx.push_back(snap(det, requested[i], "x0"));
      xs[i] = det.coord(idx.back());
    }
    auto pick = [&](const std::vector<double>& curve) {
      std::vector<double> out;
      for (std::size_t k : idx) out.push_back(curve[k]);
      return out;
    };
    if (cfg.mode == RunMode::forward) {
      columns.push_back({"two_photon_forward", pick(forward_young(p, slit, pp.slit_width).values)});
      columns.push_back({"classical_forward", pick(forward_young_classical(p, slit, pp.slit_width).values)});
    } else if (cfg.mode == RunMode::reversed) {
      Column rev{"two_photon_reversed", {}};
      for (double x : xs) {
        if (cfg.train) {
          const auto r = run_train(point_source(det, x, 1.0, p.lambda), *cfg.train);
          rev.values.push_back(std::get<double>(r));
        } else {
          rev.values.push_back(reversed_young_intensity(det, x, p, pp.slit_width, relay));
        }
      }
      columns.push_back(std::move(rev));
      if (cfg.train) summary["train"] = *cfg.train;
    } else {
      const EquivalenceReport report = forward_vs_reversed_young(p, slit, pp.slit_width, relay, det);
      columns.push_back({"two_photon_forward", pick(report.forward.values)});
      columns.push_back({"two_photon_reversed", pick(report.reversed.values)});
      columns.push_back({"classical_forward", pick(forward_young_classical(p, slit, pp.slit_width).values)});
      summary["max_deviation"] = report.max_rel_err;
    }
    summary["detection_dx"] = det.dx();
  }

  if (!opt.raw)
    for (auto& c : columns) peak_normalize(c);

  json curves = json::object();
  for (const auto& c : columns) {
    curves[c.name] = {{"peak_position", argmax_coord(xs, c.values)},
                      {"period", nullable(try_period(xs, normalized(c.values)))}};
  }
  summary["curves"] = curves;
  summary["theory"] = {{"two_photon_period", young_two_photon_period(p)},
                       {"classical_period", young_classical_period(p)}};
  return {render_csv({"x0"}, {xs}, columns), summary, false};
}

RunResult run_focus(const ExperimentConfig& cfg, const RunOptions& opt) {
  const PhysicalParams& pp = cfg.params;
  const FocusParams p{pp.D, pp.f, pp.lambda};
  const RelayDistances relay{pp.L1, pp.L2};
  const SweepAxis& a1 = cfg.sweep->first;
  const bool two_d = cfg.sweep->second.has_value();

  // Long-format rows: first axis varies slowest.
  std::vector<double> r0s, z0s;
  const std::vector<double> p1 = a1.points();
  const std::vector<double> p2 = two_d ? cfg.sweep->second->points() : std::vector<double>{0.0};
  for (double u : p1)
    for (double v : p2) {
      double r = pp.r0, z = pp.z0;
      (a1.axis == "r0" ? r : z) = u;
      if (two_d) (cfg.sweep->second->axis == "r0" ? r : z) = v;
      r0s.push_back(r);
      z0s.push_back(z);
    }

  std::optional<Grid2D> grid;
  if (cfg.mode == RunMode::reversed || cfg.mode == RunMode::compare) {
    grid = Grid2D{Grid1D(cfg.grid->n, cfg.grid->dx), Grid1D(cfg.grid->n, cfg.grid->dx)};
    for (double& r : r0s) r = grid->x.coord(snap(grid->x, r, "r0"));
  }

  std::vector<Column> columns;
  auto add = [&](std::string name, auto&& eval) {
    Column c{std::move(name), {}};
    for (std::size_t i = 0; i < r0s.size(); ++i) c.values.push_back(eval(r0s[i], z0s[i]));
    columns.push_back(std::move(c));
  };
  auto reversed = [&](double r, double z) { return reversed_focus_intensity(*grid, {r, 0.0}, z, p, relay); };
  auto forward2 = [&](double r, double z) { return spot_offaxis(r, z, p, SpotKind::two_photon); };
  auto forward1 = [&](double r, double z) { return spot_offaxis(r, z, p, SpotKind::classical); };

  json summary;
  switch (cfg.mode) {
    case RunMode::analytic:
      if (a1.axis == "r0") {
        add("two_photon_analytic", [&](double r, double) { return spot_lateral(r, p, SpotKind::two_photon); });
        add("classical_analytic", [&](double r, double) { return spot_lateral(r, p, SpotKind::classical); });
      } else {
        add("two_photon_analytic", [&](double, double z) { return spot_axial(z, p, SpotKind::two_photon); });
        add("classical_analytic", [&](double, double z) { return spot_axial(z, p, SpotKind::classical); });
      }
      break;
    case RunMode::forward:
      add("two_photon_forward", forward2);
      add("classical_forward", forward1);
      break;
    case RunMode::reversed:
      add("two_photon_reversed", reversed);
      break;
    case RunMode::compare:
      add("two_photon_forward", forward2);
      add("two_photon_reversed", reversed);
      add("classical_forward", forward1);
      summary["max_deviation"] = max_abs_diff(normalized(columns[0].values), normalized(columns[1].values));
      break;
  }

  if (!opt.raw)
    for (auto& c : columns) peak_normalize(c);

  json curves = json::object();
  for (const auto& c : columns) {
    const std::size_t k = static_cast<std::size_t>(std::max_element(c.values.begin(), c.values.end()) - c.values.begin());
    json entry = {{"peak_position", {{"r0", r0s[k]}, {"z0", z0s[k]}}}};
    if (!two_d) entry["fwhm"] = nullable(try_fwhm(a1.axis == "r0" ? r0s : z0s, normalized(c.values)));
    curves[c.name] = entry;
  }
  summary["curves"] = curves;

  std::vector<std::string> names;
  std::vector<std::vector<double>> coords;
  auto coord = [&](const std::string& axis) {
    names.push_back(axis);
    coords.push_back(axis == "r0" ? r0s : z0s);
  };
  coord(a1.axis);
  if (two_d) coord(cfg.sweep->second->axis);
  return {render_csv(names, coords, columns), summary, false};
}

RunResult run_audit(const ExperimentConfig& cfg) {
  const AuditReport report = time_reversal_audit(cfg.audit.n, cfg.audit.trials, cfg.seed);
  std::string csv = "trial,forward,reversed,four_k2,ratio_dev\n";
  for (std::size_t t = 0; t < cfg.audit.trials; ++t) {
    const AuditTrial tr = audit_trial(cfg.audit.n, cfg.seed, t);
    csv += fmt::format("{},{:.12e},{:.12e},{:.12e},{:.12e}\n", t, tr.forward, tr.reversed, tr.four_k2, tr.ratio_dev);
  }
  json summary;
  summary["audit"] = report;
  return {std::move(csv), summary, !report.pass};
}

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::forward: return "forward";
    case RunMode::reversed: return "reversed";
    case RunMode::analytic: return "analytic";
    case RunMode::compare: return "compare";
  }
  return "?";
}

}  // namespace

std::vector<double> SweepAxis::points() const {
  if (count < 2) throw ConfigError("sweep count must be at least 2");
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  out.back() = stop;
  return out;
}

std::vector<Diagnostic> validate(const json& config) {
  std::vector<Diagnostic> diags;
  read_config(config, diags);
  return diags;
}

ExperimentConfig parse_config(const json& config) {
  std::vector<Diagnostic> diags;
  auto cfg = read_config(config, diags);
  if (!diags.empty() || !cfg) {
    std::string msg = "invalid config:";
    for (const auto& d : diags) msg += "\n  " + d.field + ": " + d.message;
    throw ConfigError(msg);
  }
  return *cfg;
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  switch (config.experiment) {
    case ExperimentKind::young:
      result = run_young(config, options);
      break;
    case ExperimentKind::focus:
      result = run_focus(config, options);
      break;
    case ExperimentKind::modes_audit:
      result = run_audit(config);
      break;
  }
  json head;
  head["experiment"] = config.experiment == ExperimentKind::young   ? "young"
                       : config.experiment == ExperimentKind::focus ? "focus"
                                                                    : "modes-audit";
  if (config.experiment != ExperimentKind::modes_audit) {
    head["mode"] = mode_name(config.mode);
    head["normalized"] = !options.raw;
  }
  head["seed"] = config.seed;
  const auto rows = static_cast<std::size_t>(std::count(result.csv.begin(), result.csv.end(), '\n'));
  head["rows"] = rows - 1;
  head.update(result.summary);
  result.summary = std::move(head);
  return result;
}

}  // namespace timerev
