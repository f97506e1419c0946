#include "finsler/causal_grid.hpp"
#include "finsler/distance_field.hpp"
#include "finsler/finsler_core.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/io.hpp"
#include "finsler/stationary.hpp"
#include "finsler/suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace finsler;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::vector<std::string> tol_overrides;
  std::string out;
  std::string format = "json";
  Tolerances tol;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::UsageError, "cannot write " + g.out);
  f << text;
}

void emit(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

Json tensor_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(json_vector(m.row(i).transpose()));
  return rows;
}

Json geodesic_json(const Geodesic& g) {
  Json j;
  j["length"] = json_number(g.length);
  j["affine"] = g.affine;
  j["exited_chart"] = g.exited_chart;
  if (g.exit_point) j["exit_point"] = json_vector(*g.exit_point);
  j["speed_drift"] = json_number(g.speed_drift);
  j["start"] = json_vector(g.start());
  j["end"] = json_vector(g.end());
  j["initial_velocity"] = json_vector(g.initial_velocity());
  j["samples"] = g.samples.size();
  return j;
}

Json error_json(const Error& e) {
  Json j;
  j["error"] = std::string(to_string(e.code()));
  j["message"] = e.what();
  return j;
}

// Node of a causal grid given either a flat index or a spacetime point t,x,...
std::size_t causal_node(const CausalGrid& cg, const std::string& text) {
  const Vector v = parse_vector(text);
  if (v.size() == 1) {
    if (v[0] < 0 || v[0] >= static_cast<double>(cg.size()) || v[0] != std::floor(v[0]))
      throw Error(ErrorCode::UsageError, "node index out of range: " + text);
    return static_cast<std::size_t>(v[0]);
  }
  if (v.size() != cg.spatial().dimension() + 1)
    throw Error(ErrorCode::UsageError, "expected a node index or a point t,x0,..: " + text);
  const int level = static_cast<int>(std::lround((v[0] - cg.t0()) / cg.dt()));
  if (level < 0 || level >= cg.levels()) throw Error(ErrorCode::UsageError, "time outside the grid: " + text);
  return cg.node(level, cg.spatial().nearest(v.tail(v.size() - 1)));
}

MetricModel cone_of(const LoadedModel& m) {
  if (const auto* sm = std::get_if<StationaryModel>(&m)) return sm->spacetime;
  const auto& mm = std::get<MetricModel>(m);
  if (!mm.is_spacetime()) throw Error(ErrorCode::UsageError, "model is not a spacetime (need a cone family or stationary)");
  return mm;
}

DistanceField mask_field(const GridSpec& grid, const std::vector<char>& mask, FieldDirection dir, int stencil,
                         const std::string& source) {
  DistanceField f;
  f.grid = grid;
  f.direction = dir;
  f.stencil = stencil;
  f.source = source;
  f.values.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) f.values[i] = mask[i] ? 1.0 : 0.0;
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler metrics, geodesics and stationary causality toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--tol-override", g.tol_overrides, "override a tolerance, key=value (repeatable)");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string model_path, point, vector, grid_path, region_path, from, to, direction = "fwd", source;
  double length = 1.0, t0 = 1.0, budget = 1.0;
  int restarts = 16, levels = 20, stencil = 0, K = 3, pair_budget = 8;
  std::optional<double> dt;
  bool fd = false, past = false, timing = false, relations = false;

  auto model_opt = [&](CLI::App* c) { c->add_option("--model", model_path, "model JSON file")->required(); };

  auto* eval = app.add_subcommand("eval", "L and F at a tangent vector");
  model_opt(eval);
  eval->add_option("--point", point)->required();
  eval->add_option("--vector", vector)->required();

  auto* tensor = app.add_subcommand("tensor", "fundamental tensor at a tangent vector");
  model_opt(tensor);
  tensor->add_option("--point", point)->required();
  tensor->add_option("--vector", vector)->required();
  tensor->add_flag("--fd", fd, "finite-difference vector-slot derivatives");

  auto* classify = app.add_subcommand("classify", "causal character of a spacetime vector (vt, vx)");
  model_opt(classify);
  classify->add_option("--point", point, "spatial point (stationary) or spacetime point (cone)")->required();
  classify->add_option("--vector", vector)->required();

  auto* geod = app.add_subcommand("geodesic", "integrate a geodesic");
  model_opt(geod);
  geod->add_option("--from,--point", point)->required();
  geod->add_option("--dir,--vector", vector)->required();
  geod->add_option("--len,--length", length, "F-length budget")->capture_default_str();

  auto* shootc = app.add_subcommand("shoot", "two-point geodesics");
  model_opt(shootc);
  shootc->add_option("--from", from)->required();
  shootc->add_option("--to", to)->required();
  shootc->add_option("--restarts", restarts)->capture_default_str();

  auto* field = app.add_subcommand("field", "one-way distance field on a grid");
  model_opt(field);
  field->add_option("--source", source, "source point x0,x1,..");
  field->add_option("--source-region", region_path, "source region file (JSON or mask CSV)");
  field->add_option("--grid", grid_path, "grid JSON file");
  field->add_option("--direction", direction)->check(CLI::IsMember({"fwd", "rev"}))->capture_default_str();
  field->add_option("--stencil", stencil, "override the grid file's stencil order");

  auto* stat = app.add_subcommand("stationary", "stationary spacetime tools");
  stat->require_subcommand(1);
  auto* future = stat->add_subcommand("future", "chronological future (or past) slice at time t0");
  model_opt(future);
  future->add_option("--point", point)->required();
  future->add_option("--t0", t0)->required();
  future->add_option("--grid", grid_path);
  future->add_flag("--past", past);
  auto* horizon = stat->add_subcommand("horizon", "Cauchy horizon of a region in the slice t = 0");
  model_opt(horizon);
  horizon->add_option("--region", region_path)->required();
  horizon->add_option("--grid", grid_path);
  auto* ladder = stat->add_subcommand("ladder", "causal ladder proxies within a budget");
  model_opt(ladder);
  ladder->add_option("--budget", budget, "radius / length budget R")->required();
  ladder->add_option("--pairs", pair_budget)->capture_default_str();

  auto* causal = app.add_subcommand("causal", "causal grid tools");
  causal->require_subcommand(1);
  auto grid_opts = [&](CLI::App* c) {
    model_opt(c);
    c->add_option("--grid", grid_path, "spatial grid JSON file")->required();
    c->add_option("--levels", levels)->capture_default_str();
    c->add_option("--dt", dt);
    c->add_option("--stencil", K, "max-norm of spatial edge offsets")->capture_default_str();
  };
  auto* cbuild = causal->add_subcommand("build", "build a causal grid and summarize it");
  grid_opts(cbuild);
  cbuild->add_flag("--check-relations", relations, "exhaustive transitivity and I+ in J+ checks");
  auto* reach = causal->add_subcommand("reach", "I+ and J+ of a node");
  grid_opts(reach);
  reach->add_option("--from", from, "node index or spacetime point t,x0,..")->required();
  auto* sep = causal->add_subcommand("separation", "grid Finsler separation");
  grid_opts(sep);
  sep->add_option("--from", from)->required();
  sep->add_option("--to", to)->required();

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run an acceptance suite");
  suite->add_option("name", suite_name, "suite name or 'all'")->required();
  suite->add_flag("--timing", timing, "include wall times in the report");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& o : g.tol_overrides) g.tol.override_with(o);
    const bool csv = g.format == "csv";

    if (*suite) {
      const SuiteReport rep = run_suite(suite_name, g.seed, g.tol);
      if (csv) {
        std::string s = "suite,criterion,measured,relation,threshold,verdict\n";
        for (const auto& c : rep.criteria)
          s += c.suite + "," + c.name + "," + format_double(c.measured) + "," + c.relation + "," +
               format_double(c.threshold) + "," + (c.passed ? "pass" : "fail") + "\n";
        emit(g, s);
      } else {
        emit(g, rep.to_json(timing));
      }
      return std::min(rep.failures(), 125);
    }

    const LoadedModel loaded = load_model(model_path);
    auto metric = [&]() -> MetricModel {
      if (const auto* sm = std::get_if<StationaryModel>(&loaded)) return sm->fermat;
      return std::get<MetricModel>(loaded);
    };
    auto stationary = [&]() -> StationaryModel { return load_stationary_model(model_path); };
    auto spatial_grid = [&](const MetricModel& m, int& order) -> GridSpec {
      if (grid_path.empty()) {
        order = stencil > 0 ? stencil : 3;
        return default_grid(m);
      }
      const GridFile gf = load_grid(grid_path, m.chart());
      order = stencil > 0 ? stencil : gf.stencil;
      return gf.grid;
    };

    if (*eval) {
      const MetricModel m = metric();
      const TangentSample s{parse_vector(point), parse_vector(vector)};
      const Evaluation e = evaluate(m, s);
      const DomainVerdict d = classify_domain(m, s);
      Json j;
      j["family"] = std::string(to_string(m.family()));
      j["L"] = json_number(e.L);
      j["F"] = json_number(e.F);
      j["domain"] = std::string(to_string(d.classification));
      j["margin"] = json_number(d.margin);
      emit(g, j);
    } else if (*tensor) {
      const MetricModel m = metric();
      const TangentSample s{parse_vector(point), parse_vector(vector)};
      TensorOptions o;
      if (fd) o.mode = DerivativeMode::FiniteDifference;
      const FundamentalTensor t = fundamental_tensor(m, s, o);
      Json j;
      j["matrix"] = tensor_json(t.matrix);
      j["eigenvalues"] = json_vector(t.eigenvalues);
      j["signature"] = {t.signature.plus, t.signature.minus, t.signature.zero};
      j["near_degenerate"] = t.near_degenerate;
      j["hessian_identity_residual"] = json_number(t.hessian_identity_residual);
      j["domain"] = std::string(to_string(t.verdict.classification));
      emit(g, j);
    } else if (*classify) {
      const Vector x = parse_vector(point), v = parse_vector(vector);
      const VectorClass c = std::holds_alternative<StationaryModel>(loaded)
                                ? classify_vector(std::get<StationaryModel>(loaded), x, v)
                                : classify_vector(cone_of(loaded), x, v);
      Json j;
      j["character"] = std::string(to_string(c.character));
      j["margin"] = json_number(c.margin);
      if (std::holds_alternative<StationaryModel>(loaded)) j["lorentz_norm"] = json_number(c.lorentz_norm);
      emit(g, j);
    } else if (*geod) {
      OdeOptions o;
      o.absolute_tolerance = g.tol["ode_atol"];
      o.relative_tolerance = g.tol["ode_rtol"];
      const Geodesic gd = integrate_geodesic(metric(), parse_vector(point), parse_vector(vector), length, o);
      if (csv) emit(g, geodesic_csv(gd));
      else emit(g, geodesic_json(gd));
    } else if (*shootc) {
      ShootOptions o;
      o.restarts = restarts;
      o.endpoint_tolerance = g.tol["shoot_endpoint"];
      o.dedupe_degrees = g.tol["dedupe_degrees"];
      const auto gs = shoot(metric(), parse_vector(from), parse_vector(to), o);
      Json list = Json::array();
      for (const auto& gd : gs) list.push_back(geodesic_json(gd));
      Json j;
      j["geodesics"] = list;
      emit(g, j);
    } else if (*field) {
      const MetricModel m = metric();
      int order = 3;
      const GridSpec grid = spatial_grid(m, order);
      if (source.empty() == region_path.empty())
        throw Error(ErrorCode::UsageError, "give exactly one of --source and --source-region");
      const FieldSource src = source.empty() ? FieldSource::inside(load_region(region_path, m.dimension()))
                                             : FieldSource::at(parse_vector(source));
      FieldOptions fo;
      fo.stencil = order;
      fo.direction = direction == "rev" ? FieldDirection::Reverse : FieldDirection::Forward;
      const DistanceField f = distance_field(m, src, grid, fo);
      if (csv || (!g.out.empty() && g.out.ends_with(".csv"))) {
        emit(g, field_csv(f));
      } else {
        Json j;
        j["source"] = f.source;
        j["direction"] = std::string(to_string(f.direction));
        j["stencil"] = f.stencil;
        j["nodes"] = f.values.size();
        j["reached"] = f.reached();
        j["stencil_max_angular_gap"] = json_number(f.report.max_angular_gap);
        j["stencil_anisotropy_ratio"] = json_number(f.report.anisotropy_ratio);
        Json vals = Json::array();
        for (double v : f.values) vals.push_back(json_number(v));
        j["values"] = vals;
        emit(g, j);
      }
    } else if (*future) {
      const StationaryModel sm = stationary();
      int order = 3;
      const GridSpec grid = spatial_grid(sm.fermat, order);
      const FutureSlice s = chronological_future_slice(sm, parse_vector(point), t0, grid, past, order);
      if (csv || (!g.out.empty() && g.out.ends_with(".csv"))) {
        emit(g, field_csv(mask_field(grid, s.mask, s.field.direction, order, s.field.source)));
      } else {
        Json j;
        j["t0"] = json_number(t0);
        j["past"] = past;
        j["nodes"] = s.mask.size();
        j["inside"] = std::count(s.mask.begin(), s.mask.end(), 1);
        Json idx = Json::array();
        for (std::size_t i = 0; i < s.mask.size(); ++i)
          if (s.mask[i]) idx.push_back(i);
        j["inside_nodes"] = idx;
        emit(g, j);
      }
    } else if (*horizon) {
      const StationaryModel sm = stationary();
      int order = 3;
      const GridSpec grid = spatial_grid(sm.fermat, order);
      const HorizonGraph H = cauchy_horizon(sm, load_region(region_path, sm.spatial_dimension()), grid, order);
      if (csv) {
        DistanceField f;
        f.grid = H.grid;
        f.stencil = order;
        f.values = H.values;
        emit(g, field_csv(f));
      } else {
        Json j;
        j["region"] = H.region;
        j["apex"] = json_vector(H.grid.node(H.apex));
        j["apex_value"] = json_number(H.apex_value);
        j["boundary_max"] = json_number(H.boundary_max);
        Json vals = Json::array();
        for (double v : H.values) vals.push_back(json_number(v));
        j["values"] = vals;
        emit(g, j);
      }
    } else if (*ladder) {
      const StationaryModel sm = stationary();
      LadderOptions lo;
      lo.radius = budget;
      lo.pair_budget = pair_budget;
      lo.seed = g.seed;
      const LadderReport r = causal_ladder_report(sm, lo);
      Json list = Json::array();
      for (const auto& f : r.findings) {
        Json e;
        e["name"] = f.name;
        e["clause"] = f.clause;
        e["proxy"] = f.proxy;
        e["computed"] = f.computed;
        e["verdict"] = f.computed ? (f.passed ? "pass" : "fail") : "cited";
        if (f.witness) e["witness"] = json_vector(*f.witness);
        e["detail"] = f.detail;
        list.push_back(e);
      }
      Json j;
      j["budget"] = json_number(budget);
      j["findings"] = list;
      j["convexity_counterexamples"] = r.convexity.counterexamples;
      emit(g, j);
    } else if (*causal) {
      const MetricModel cone = cone_of(loaded);
      Chart spatial_chart(std::vector<Interval>(cone.chart().box.begin() + 1, cone.chart().box.end()));
      if (const auto* sm = std::get_if<StationaryModel>(&loaded)) spatial_chart = sm->chart;
      const GridSpec spatial = load_grid(grid_path, spatial_chart).grid;
      const CausalGrid cg = CausalGrid::build(cone, spatial, levels, dt, K);
      Json j;
      j["levels"] = cg.levels();
      j["dt"] = json_number(cg.dt());
      j["nodes"] = cg.size();
      if (*cbuild) {
        j["edges"] = cg.edge_count();
        if (relations) {
          const RelationCheck rc = check_relations(cg);
          j["related_pairs"] = rc.related_pairs;
          j["transitive"] = rc.transitive();
          j["chronological_not_causal"] = rc.chronological_not_causal;
          j["reflexive_chronology"] = rc.reflexive_chronology;
        }
      } else if (*reach) {
        const std::size_t p = causal_node(cg, from);
        const Reachability r = causal_reachability(cg, p);
        Json I = Json::array(), J = Json::array();
        for (std::size_t i = 0; i < cg.size(); ++i) {
          if (r.chronological[i]) I.push_back(i);
          if (r.causal[i]) J.push_back(i);
        }
        j["from"] = p;
        j["chronological_future"] = I;
        j["causal_future"] = J;
      } else {
        const std::size_t p = causal_node(cg, from), q = causal_node(cg, to);
        j["from"] = p;
        j["to"] = q;
        j["separation"] = json_number(finsler_separation(cg, p, q));
      }
      emit(g, j);
    }
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  }
  return 0;
}
