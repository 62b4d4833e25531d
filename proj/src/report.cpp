#include "walkharm/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "walkharm/errors.hpp"

namespace walkharm {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  if (message.rfind(field + ":", 0) == 0) throw ValidationError(message);
  throw ValidationError(field + ": " + message);
}

int require_int(const Json& j, const std::string& key, const std::string& field, int lo, int hi) {
  if (!j.contains(key)) fail(field + "." + key, "missing");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(field + "." + key, "must be an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) fail(field + "." + key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

Json scalar_json(const Rational& x) { return to_string(x); }
Json scalar_json(double x) { return x; }

template <class S>
Json values_json(const std::vector<S>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

template <class S>
Json basis_json(const std::vector<GroupFunction<S>>& basis) {
  Json out = Json::array();
  for (const auto& f : basis) out.push_back(values_json(f.values));
  return out;
}

Json element_json(const Group& g, Element x) {
  if (g.is_finite()) return x;
  return g.format(x);
}

Json character_json(const std::optional<Character>& chi) {
  if (!chi) return nullptr;
  Json kernel = Json::array();
  for (auto x : chi->kernel()) kernel.push_back(element_json(*chi->group, x));
  return Json{{"kernel_index", kernel}, {"values", chi->values}};
}

Json eigen_record_json(const EigenvalueRecord& e) {
  return Json{{"re", e.value.real()}, {"im", e.value.imag()}, {"mult", e.multiplicity}, {"residual", e.residual}};
}

std::string csv_number(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

template <class S>
Json run_tasks(const AnalysisConfig& config, const Measure<S>& mu, AnalysisResult& result) {
  const auto& group = mu.group();
  const auto has = [&](const std::string& t) {
    return std::find(config.tasks.begin(), config.tasks.end(), t) != config.tasks.end();
  };
  const double tol = config.options.tol;
  Json out = Json::object();

  if (has("spectrum")) {
    if (!group.is_finite()) throw ValidationError("spectrum requires finite group; use verify/truncated tasks");
    const auto op = right_operator(mu);
    const auto rep = spectrum(op, tol);
    Json s = to_json(rep);
    const auto har = harmonic_space(mu, Side::right, tol);
    const auto anti = anti_harmonic_space(mu, Side::right, tol);
    s["har_dim"] = har.size();
    s["anti_dim"] = anti.size();
    s["harmonic_basis"] = basis_json(har);
    s["anti_harmonic_basis"] = basis_json(anti);
    out["spectrum"] = s;
    std::ostringstream csv;
    csv << "index,re,im,multiplicity,residual,peripheral\n";
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
      const auto& e = rep.eigenvalues[i];
      const bool peripheral = std::abs(e.value) >= rep.peripheral_threshold;
      csv << i << ',' << csv_number(e.value.real()) << ',' << csv_number(e.value.imag()) << ',' << e.multiplicity
          << ',' << csv_number(e.residual) << ',' << (peripheral ? 1 : 0) << '\n';
    }
    result.eigenvalues_csv = csv.str();
  }

  if (has("character")) {
    const auto chi = find_anti_character(mu);
    Json c{{"character", character_json(chi)}};
    if (group.is_finite()) {
      const auto anti = anti_harmonic_space(mu, Side::right, tol);
      c["anti_dim"] = anti.size();
      if (chi) {
        Json factors = Json::array();
        for (const auto& f : anti) factors.push_back(values_json(factor_anti_harmonic(f, *chi, mu, tol).values));
        c["harmonic_factors"] = factors;
      }
    }
    out["character"] = c;
  }

  if (has("biharmonic")) {
    if (!group.is_finite()) fail("tasks", "biharmonic requires finite group");
    const auto basis = jointly_biharmonic_space(mu, tol);
    Json decs = Json::array();
    for (const auto& f : basis) {
      const auto d = decompose(f, mu, tol);
      decs.push_back(Json{{"f", values_json(f.values)},
                          {"harmonic", values_json(d.harmonic.values)},
                          {"anti_harmonic", values_json(d.anti_harmonic.values)},
                          {"constant", d.constant ? scalar_json(*d.constant) : Json(nullptr)}});
    }
    out["biharmonic"] = Json{{"biharmonic_dim", basis.size()}, {"decompositions", decs}};
  }

  if (has("boundary")) {
    if (!group.is_finite()) fail("tasks", "boundary requires finite group");
    if (!is_symmetric(mu) || !is_generating(mu)) fail("measure", "boundary requires a symmetric generating measure");
    const auto b = peripheral_boundary(mu, tol);
    Json table = Json::array();
    for (const auto& row : b.table) {
      Json r = Json::array();
      for (const auto& cell : row) r.push_back(values_json(cell));
      table.push_back(r);
    }
    out["boundary"] = Json{{"dimension", b.dimension()},
                           {"eigenvalues", b.eigenvalues},
                           {"basis", basis_json(b.basis)},
                           {"table", table}};
  }

  if (has("foguel")) {
    if (!group.is_finite()) fail("tasks", "foguel requires finite group");
    const double eps = 1e-6;
    const auto r = foguel_decay(mu, eps, config.options.max_power);
    out["foguel"] = Json{{"eps", eps},
                         {"max_power", config.options.max_power},
                         {"observation_mode", r.observation_mode},
                         {"first_below", r.first_below ? Json(*r.first_below) : Json(nullptr)},
                         {"distances", r.distances}};
    std::ostringstream csv;
    csv << "n,tv\n";
    for (std::size_t i = 0; i < r.distances.size(); ++i) csv << i + 1 << ',' << csv_number(r.distances[i]) << '\n';
    result.decay_csv = csv.str();
  }

  if (has("verify")) {
    VerificationReport rep;
    rep.suite = "config";
    std::string skipped;
    if (!group.is_finite()) {
      // Exact check of the anti-character on the interior, both sides.
      const auto chi = find_anti_character(mu);
      if (!chi) {
        skipped = "no anti-harmonic character on this truncation";
      } else {
        const auto f = PartialFunction<S>::total(chi->template as_function<S>());
        for (auto side : {Side::right, Side::left}) {
          const auto r = apply_truncated(mu, f, side);
          std::size_t bad = 0;
          for (auto g : r.interior) bad += r.result.values[g] == -f.values[g] ? 0 : 1;
          rep.check(group.label(), side == Side::right ? "f*mu=-f" : "mu*f=-f", bad == 0 && !r.interior.empty(),
                    "interior=" + std::to_string(r.interior.size()));
        }
      }
    } else if (!is_generating(mu)) {
      skipped = "measure does not generate the group";
    } else if constexpr (std::is_same_v<S, Rational>) {
      TheoremSuiteOptions opts;
      opts.tol = std::max(tol, 1e-8);
      rep = run_theorem_suite({Fixture{group.label(), mu, false}}, opts);
    } else {
      rep = root_of_unity_check(mu, std::max(tol, 1e-8), static_cast<int>(2 * group.size()), group.label());
      if (is_symmetric(mu)) {
        const auto s = spectrum(right_operator(mu), tol);
        double dev = 0.0;
        for (const auto& e : s.peripheral) dev = std::max(dev, std::min(std::abs(e.value - 1.0), std::abs(e.value + 1.0)));
        rep.check_le(group.label(), "peripheral_pm1", dev, std::max(tol, 1e-8));
      }
    }
    Json v = to_json(rep, config.options.seed);
    if (!skipped.empty()) {
      v["pass"] = nullptr;
      v["skipped"] = skipped;
    }
    out["verify"] = v;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& task_order() {
  static const std::vector<std::string> order{"spectrum", "character", "biharmonic", "boundary", "foguel", "verify"};
  return order;
}

GroupSpec parse_group_spec(const Json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) fail(field + ".kind", "missing or not a string");
  GroupKind kind;
  try {
    kind = parse_group_kind(j.at("kind").get<std::string>());
  } catch (const ValidationError& e) {
    fail(field + ".kind", e.what());
  }
  constexpr int kBig = 1 << 20;
  switch (kind) {
    case GroupKind::cyclic: return GroupSpec::cyclic(require_int(j, "n", field, 1, kBig));
    case GroupKind::dihedral: return GroupSpec::dihedral(require_int(j, "n", field, 1, kBig));
    case GroupKind::symmetric: return GroupSpec::symmetric(require_int(j, "n", field, 1, 8));
    case GroupKind::alternating: return GroupSpec::alternating(require_int(j, "n", field, 1, 8));
    case GroupKind::quaternion8: return GroupSpec::quaternion8();
    case GroupKind::table: {
      if (!j.contains("table") || !j.at("table").is_array()) fail(field + ".table", "missing or not an array");
      std::vector<std::vector<Element>> t;
      for (const auto& row : j.at("table")) {
        if (!row.is_array()) fail(field + ".table", "rows must be arrays");
        std::vector<Element> r;
        for (const auto& x : row) {
          if (!x.is_number_integer() || x.get<long long>() < 0) fail(field + ".table", "entries must be non-negative integers");
          r.push_back(x.get<Element>());
        }
        t.push_back(std::move(r));
      }
      return GroupSpec::from_table(std::move(t));
    }
    case GroupKind::product: {
      if (!j.contains("factors") || !j.at("factors").is_array()) fail(field + ".factors", "missing or not an array");
      std::vector<GroupSpec> factors;
      const auto& fs = j.at("factors");
      for (std::size_t i = 0; i < fs.size(); ++i) {
        factors.push_back(parse_group_spec(fs[i], field + ".factors[" + std::to_string(i) + "]"));
      }
      return GroupSpec::product(std::move(factors));
    }
    case GroupKind::lattice: {
      const int dim = j.contains("dim") ? require_int(j, "dim", field, 1, 64) : require_int(j, "rank", field, 1, 64);
      return GroupSpec::lattice(dim, require_int(j, "radius", field, 1, kBig));
    }
    case GroupKind::free:
      return GroupSpec::free(require_int(j, "rank", field, 1, 13), require_int(j, "radius", field, 1, kBig));
  }
  fail(field, "unsupported kind");
}

Json group_spec_to_json(const GroupSpec& spec) {
  Json j{{"kind", std::string(to_string(spec.kind))}};
  switch (spec.kind) {
    case GroupKind::cyclic:
    case GroupKind::dihedral:
    case GroupKind::symmetric:
    case GroupKind::alternating: j["n"] = spec.n; break;
    case GroupKind::quaternion8: break;
    case GroupKind::table: j["table"] = spec.table; break;
    case GroupKind::product: {
      Json f = Json::array();
      for (const auto& x : spec.factors) f.push_back(group_spec_to_json(x));
      j["factors"] = f;
      break;
    }
    case GroupKind::lattice:
      j["dim"] = spec.rank;
      j["radius"] = spec.radius;
      break;
    case GroupKind::free:
      j["rank"] = spec.rank;
      j["radius"] = spec.radius;
      break;
  }
  return j;
}

bool measure_is_rational(const Json& entries) {
  if (!entries.is_array() || entries.empty()) fail("measure", "must be a nonempty array of {\"g\", \"w\"} entries");
  bool any_rational = false;
  bool any_float = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string field = "measure[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("g") || !e.contains("w")) fail(field, "entries need \"g\" and \"w\"");
    const auto& w = e.at("w");
    if (w.is_string()) {
      any_rational = true;
    } else if (w.is_number()) {
      any_float = true;
    } else {
      fail(field + ".w", "must be a rational string or a number");
    }
  }
  if (any_rational && any_float) fail("measure", "mixes rational-string and floating weights");
  return any_rational;
}

namespace {

Element parse_element(const Group& group, const Json& g, const std::string& field) {
  std::string text;
  if (g.is_string()) {
    text = g.get<std::string>();
  } else if (g.is_number_integer()) {
    text = std::to_string(g.get<long long>());
  } else {
    fail(field + ".g", "must be element text");
  }
  try {
    return group.parse(text);
  } catch (const ValidationError& e) {
    fail(field + ".g", e.what());
  }
}

template <class S>
Measure<S> parse_measure(const GroupPtr& group, const Json& entries) {
  const bool rational = measure_is_rational(entries);
  if (rational != std::is_same_v<S, Rational>) {
    fail("measure", rational ? "weights are rational strings" : "weights are floating numbers");
  }
  std::vector<std::pair<Element, S>> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string field = "measure[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    const Element g = parse_element(*group, e.at("g"), field);
    if constexpr (std::is_same_v<S, Rational>) {
      try {
        out.emplace_back(g, parse_rational(e.at("w").get<std::string>()));
      } catch (const std::invalid_argument& err) {
        fail(field + ".w", err.what());
      }
    } else {
      out.emplace_back(g, e.at("w").get<double>());
    }
  }
  try {
    return make_measure<S>(group, std::move(out));
  } catch (const ValidationError& e) {
    fail("measure", e.what());
  }
}

}  // namespace

RationalMeasure parse_rational_measure(const GroupPtr& group, const Json& entries) {
  return parse_measure<Rational>(group, entries);
}

RealMeasure parse_real_measure(const GroupPtr& group, const Json& entries) {
  return parse_measure<double>(group, entries);
}

AnalysisConfig parse_config(const Json& j) {
  if (!j.is_object()) fail("config", "must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "group" && key != "measure" && key != "tasks" && key != "options") fail(key, "unknown config field");
  }
  AnalysisConfig c;
  if (!j.contains("group")) fail("group", "missing");
  c.group = parse_group_spec(j.at("group"));
  if (!j.contains("measure")) fail("measure", "missing");
  c.measure = j.at("measure");
  measure_is_rational(c.measure);

  if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty()) {
    fail("tasks", "must be a nonempty array");
  }
  std::set<std::string> requested;
  for (const auto& t : j.at("tasks")) {
    if (!t.is_string()) fail("tasks", "entries must be strings");
    const auto name = t.get<std::string>();
    if (std::find(task_order().begin(), task_order().end(), name) == task_order().end()) {
      fail("tasks", "unknown task '" + name + "'");
    }
    requested.insert(name);
  }
  for (const auto& t : task_order())
    if (requested.count(t)) c.tasks.push_back(t);

  if (j.contains("options")) {
    const auto& o = j.at("options");
    if (!o.is_object()) fail("options", "must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key == "tol") {
        if (!value.is_number() || !(value.get<double>() > 0.0)) fail("options.tol", "must be a positive number");
        c.options.tol = value.get<double>();
      } else if (key == "exact") {
        if (!value.is_boolean()) fail("options.exact", "must be a boolean");
        c.options.exact = value.get<bool>();
      } else if (key == "max_power") {
        if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 100000) {
          fail("options.max_power", "must be an integer in [1, 100000]");
        }
        c.options.max_power = value.get<int>();
      } else if (key == "seed") {
        if (!value.is_number_integer() || value.get<long long>() < 0) {
          fail("options.seed", "must be a non-negative integer");
        }
        c.options.seed = value.get<std::uint64_t>();
      } else {
        fail("options." + key, "unknown option");
      }
    }
  }
  return c;
}

Json config_to_json(const AnalysisConfig& config) {
  return Json{{"group", group_spec_to_json(config.group)},
              {"measure", config.measure},
              {"tasks", config.tasks},
              {"options",
               {{"tol", config.options.tol},
                {"exact", config.options.exact},
                {"max_power", config.options.max_power},
                {"seed", config.options.seed}}}};
}

AnalysisResult run_analysis(const AnalysisConfig& config) {
  if (!(config.options.tol > 0.0)) fail("options.tol", "must be positive");
  GroupPtr group;
  try {
    group = build_group(config.group);
  } catch (const ValidationError& e) {
    fail("group", e.what());
  }
  AnalysisResult result;
  Json report{{"config", config_to_json(config)},
              {"group", {{"label", group->label()}, {"order", group->size()}, {"finite", group->is_finite()}}}};
  const bool rational = measure_is_rational(config.measure);
  if (rational && config.options.exact) {
    const auto mu = parse_rational_measure(group, config.measure);
    report["arithmetic"] = "exact";
    report["results"] = run_tasks(config, mu, result);
  } else {
    const auto mu = rational ? parse_rational_measure(group, config.measure).to_real()
                             : parse_real_measure(group, config.measure);
    report["arithmetic"] = "floating";
    report["results"] = run_tasks(config, mu, result);
  }
  result.report = std::move(report);
  return result;
}

Json to_json(const SpectralReport& report) {
  Json all = Json::array();
  for (const auto& e : report.eigenvalues) all.push_back(eigen_record_json(e));
  Json peripheral = Json::array();
  for (const auto& e : report.peripheral) peripheral.push_back(eigen_record_json(e));
  return Json{{"tol", report.tol},
              {"peripheral_threshold", report.peripheral_threshold},
              {"eigenvalues", all},
              {"peripheral", peripheral}};
}

Json to_json(const VerificationReport& report, std::uint64_t seed) {
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back(Json{{"fixture", r.fixture},
                           {"quantity", r.quantity},
                           {"value", r.value},
                           {"threshold", r.threshold},
                           {"pass", r.pass},
                           {"note", r.note}});
  }
  return Json{{"suite", report.suite},
              {"seed", seed},
              {"pass", report.pass()},
              {"checks", report.records.size()},
              {"failures", report.failures()},
              {"records", records}};
}

void write_csv(const AnalysisResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto emit = [&](const std::string& name, const std::string& body) {
    if (body.empty()) return;
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << body;
  };
  emit("eigenvalues.csv", result.eigenvalues_csv);
  emit("decay.csv", result.decay_csv);
}

}  // namespace walkharm
