#include "ctcog/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ctcog/error.hpp"
#include "ctcog/report.hpp"

namespace ctcog::io {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void syntax_at(const std::string& text, std::size_t byte, const std::string& what) {
  std::size_t line = 1, col = 1;
  std::size_t stop = byte > 0 ? byte - 1 : 0;
  for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  raise(Errc::SyntaxError,
        "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    syntax_at(text, e.byte, e.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key))
    raise(Errc::SyntaxError, ctx + ": missing key '" + key + "'");
  return obj.at(key);
}

std::string as_string(const json& v, const std::string& ctx) {
  if (!v.is_string()) raise(Errc::SyntaxError, ctx + ": expected a string");
  return v.get<std::string>();
}

double as_double(const json& v, const std::string& ctx) {
  if (!v.is_number()) raise(Errc::SyntaxError, ctx + ": expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& ctx) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    raise(Errc::SyntaxError, ctx + ": expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_seed(const json& v, const std::string& ctx) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  raise(Errc::SyntaxError, ctx + ": seed must be a nonnegative integer");
}

void check_format_version(const json& doc) {
  const json& v = require(doc, "format_version", "document");
  if (!v.is_number_integer() && !v.is_number_unsigned())
    raise(Errc::SyntaxError, "format_version must be an integer");
  if (v.get<std::int64_t>() != 1)
    raise(Errc::InvariantViolation, "unsupported format_version (expected 1)");
}

la::vec parse_complex_vector(const json& arr, const std::string& ctx) {
  if (!arr.is_array() || arr.empty())
    raise(Errc::SyntaxError, ctx + ": expected a nonempty array of [re, im] pairs");
  la::vec v;
  v.reserve(arr.size());
  for (const json& entry : arr) {
    if (!entry.is_array() || entry.size() != 2)
      raise(Errc::SyntaxError, ctx + ": each amplitude must be a two-element [re, im] array");
    v.emplace_back(as_double(entry.at(0), ctx), as_double(entry.at(1), ctx));
  }
  return v;
}

// A dimension-2 literal: {"angle_deg": 45} or {"vector": [[re, im], ...]}.
la::vec parse_qubit_literal(const json& obj, const std::string& ctx) {
  if (!obj.is_object()) raise(Errc::SyntaxError, ctx + ": expected an object");
  bool has_angle = obj.contains("angle_deg");
  bool has_vector = obj.contains("vector");
  if (has_angle == has_vector)
    raise(Errc::SyntaxError, ctx + ": give exactly one of 'angle_deg' or 'vector'");
  if (has_angle) return la::qubit_at_angle(as_double(obj.at("angle_deg"), ctx));
  return parse_complex_vector(obj.at("vector"), ctx);
}

void check_unique(std::vector<std::string>& seen, const std::string& name,
                  const std::string& section) {
  for (const std::string& s : seen)
    if (s == name)
      raise(Errc::InvariantViolation, "duplicate " + section + " name '" + name + "'");
  seen.push_back(name);
}

json vector_json(const la::vec& v) {
  json out = json::array();
  for (const la::cplx& a : v) out.push_back({quantize(a.real()), quantize(a.imag())});
  return out;
}

}  // namespace

const Substrate& ModelFile::substrate(std::string_view name) const {
  for (const Substrate& s : substrates)
    if (s.name() == name) return s;
  raise(Errc::UnresolvedName, "unknown substrate '" + std::string(name) + "'");
}

const Attribute& ModelFile::attribute(std::string_view name) const {
  for (const Attribute& a : attributes)
    if (a.name() == name) return a;
  raise(Errc::UnresolvedName, "unknown attribute '" + std::string(name) + "'");
}

const Variable& ModelFile::variable(std::string_view name) const {
  for (const Variable& v : variables)
    if (v.name() == name) return v;
  raise(Errc::UnresolvedName, "unknown variable '" + std::string(name) + "'");
}

const State& ModelFile::state(std::string_view name) const {
  for (const auto& [n, s] : states)
    if (n == name) return s;
  raise(Errc::UnresolvedName, "unknown state '" + std::string(name) + "'");
}

const Task& ModelFile::task(std::string_view name) const {
  for (const Task& t : tasks)
    if (t.label() == name) return t;
  raise(Errc::UnresolvedName, "unknown task '" + std::string(name) + "'");
}

std::vector<Variable> ModelFile::variables_on(std::string_view substrate_name) const {
  std::vector<Variable> out;
  for (const Variable& v : variables)
    if (v.substrate().name() == substrate_name) out.push_back(v);
  return out;
}

ModelFile parse_model(const std::string& text) {
  json doc = parse_document(text);
  check_format_version(doc);
  ModelFile model;
  std::vector<std::string> seen;

  if (doc.contains("substrates")) {
    for (const json& e : doc.at("substrates")) {
      std::string name = as_string(require(e, "name", "substrate"), "substrate name");
      std::string ctx = "substrate '" + name + "'";
      check_unique(seen, name, "substrate");
      std::string kind = as_string(require(e, "kind", ctx), ctx + " kind");
      if (kind == "classical") {
        const json& states = require(e, "states", ctx);
        if (!states.is_array()) raise(Errc::SyntaxError, ctx + ": 'states' must be an array");
        std::vector<std::string> labels;
        for (const json& l : states) labels.push_back(as_string(l, ctx + " state label"));
        model.substrates.push_back(Substrate::classical(name, std::move(labels)));
      } else if (kind == "quantum") {
        std::int64_t dim = as_int(require(e, "dimension", ctx), ctx + " dimension");
        if (dim < 1) raise(Errc::InvariantViolation, ctx + ": dimension must be positive");
        double tol = e.contains("tolerance")
                         ? as_double(e.at("tolerance"), ctx + " tolerance")
                         : la::kDefaultTol;
        model.substrates.push_back(
            Substrate::quantum(name, static_cast<std::size_t>(dim), tol));
      } else {
        raise(Errc::SyntaxError, ctx + ": kind must be 'classical' or 'quantum'");
      }
    }
  }

  seen.clear();
  if (doc.contains("attributes")) {
    for (const json& e : doc.at("attributes")) {
      std::string name = as_string(require(e, "name", "attribute"), "attribute name");
      std::string ctx = "attribute '" + name + "'";
      check_unique(seen, name, "attribute");
      const Substrate& s = model.substrate(as_string(require(e, "substrate", ctx), ctx));
      if (s.kind() == BackendKind::Classical) {
        const json& states = require(e, "states", ctx);
        if (!states.is_array()) raise(Errc::SyntaxError, ctx + ": 'states' must be an array");
        std::vector<std::string> labels;
        for (const json& l : states) labels.push_back(as_string(l, ctx + " state label"));
        model.attributes.push_back(Attribute::classical(s, labels, name));
      } else if (e.contains("angle_deg")) {
        if (s.size() != 2)
          raise(Errc::InvariantViolation, ctx + ": angle_deg needs a dimension-2 substrate");
        model.attributes.push_back(
            Attribute::span(s, {la::qubit_at_angle(as_double(e.at("angle_deg"), ctx))}, name));
      } else {
        const json& vectors = require(e, "vectors", ctx);
        if (!vectors.is_array() || vectors.empty())
          raise(Errc::SyntaxError, ctx + ": 'vectors' must be a nonempty array");
        std::vector<la::vec> gens;
        for (const json& vj : vectors) {
          la::vec v = parse_complex_vector(vj, ctx);
          if (v.size() != s.size())
            raise(Errc::InvariantViolation,
                  ctx + ": vector of length " + std::to_string(v.size()) +
                      " on a substrate of dimension " + std::to_string(s.size()));
          gens.push_back(std::move(v));
        }
        model.attributes.push_back(Attribute::span(s, gens, name));
      }
    }
  }

  seen.clear();
  if (doc.contains("variables")) {
    for (const json& e : doc.at("variables")) {
      std::string name = as_string(require(e, "name", "variable"), "variable name");
      std::string ctx = "variable '" + name + "'";
      check_unique(seen, name, "variable");
      std::string sub = as_string(require(e, "substrate", ctx), ctx);
      const Substrate& s = model.substrate(sub);
      const json& attrs = require(e, "attributes", ctx);
      if (!attrs.is_array()) raise(Errc::SyntaxError, ctx + ": 'attributes' must be an array");
      std::vector<Attribute> list;
      for (const json& a : attrs) {
        const Attribute& attr = model.attribute(as_string(a, ctx + " attribute name"));
        if (attr.substrate().name() != sub)
          raise(Errc::SubstrateMismatch,
                ctx + ": attribute '" + attr.name() + "' lives on substrate '" +
                    attr.substrate().name() + "'");
        list.push_back(attr);
      }
      model.variables.push_back(make_variable(s, std::move(list), name));
    }
  }

  seen.clear();
  if (doc.contains("states")) {
    for (const json& e : doc.at("states")) {
      std::string name = as_string(require(e, "name", "state"), "state name");
      std::string ctx = "state '" + name + "'";
      check_unique(seen, name, "state");
      const Substrate& s = model.substrate(as_string(require(e, "substrate", ctx), ctx));
      if (s.kind() == BackendKind::Classical) {
        model.states.emplace_back(
            name, State::classical(s, as_string(require(e, "label", ctx), ctx)));
      } else if (e.contains("angle_deg")) {
        if (s.size() != 2)
          raise(Errc::InvariantViolation, ctx + ": angle_deg needs a dimension-2 substrate");
        model.states.emplace_back(
            name, State::quantum(s, la::qubit_at_angle(as_double(e.at("angle_deg"), ctx))));
      } else {
        la::vec v = parse_complex_vector(require(e, "vector", ctx), ctx);
        if (v.size() != s.size())
          raise(Errc::InvariantViolation,
                ctx + ": vector of length " + std::to_string(v.size()) +
                    " on a substrate of dimension " + std::to_string(s.size()));
        model.states.emplace_back(name, State::quantum(s, std::move(v)));
      }
    }
  }

  seen.clear();
  if (doc.contains("tasks")) {
    for (const json& e : doc.at("tasks")) {
      std::string name = as_string(require(e, "name", "task"), "task name");
      std::string ctx = "task '" + name + "'";
      check_unique(seen, name, "task");
      const json& pairs = require(e, "pairs", ctx);
      if (!pairs.is_array()) raise(Errc::SyntaxError, ctx + ": 'pairs' must be an array");
      std::vector<std::pair<Attribute, Attribute>> list;
      for (const json& p : pairs) {
        const Attribute& in = model.attribute(as_string(require(p, "in", ctx), ctx));
        const Attribute& out = model.attribute(as_string(require(p, "out", ctx), ctx));
        list.emplace_back(in, out);
      }
      model.tasks.push_back(make_task(std::move(list), name));
    }
  }

  return model;
}

ScenarioFile parse_scenario(const std::string& text) {
  json doc = parse_document(text);
  check_format_version(doc);
  const json& sc = require(doc, "scenario", "document");
  if (!sc.is_object()) raise(Errc::SyntaxError, "'scenario' must be an object");

  ScenarioFile out;
  sim::Scenario& s = out.scenario;
  s.name = sc.contains("name") ? as_string(sc.at("name"), "scenario name") : "";
  std::string kind = as_string(require(sc, "kind", "scenario"), "scenario kind");
  if (kind == "classical_joint") {
    s.kind = sim::ScenarioKind::ClassicalJoint;
    const json& t = require(sc, "table", "scenario");
    s.joint.p11 = as_double(require(t, "p11", "table"), "table p11");
    s.joint.p10 = as_double(require(t, "p10", "table"), "table p10");
    s.joint.p01 = as_double(require(t, "p01", "table"), "table p01");
    s.joint.p00 = as_double(require(t, "p00", "table"), "table p00");
  } else if (kind == "quantum_sequential") {
    s.kind = sim::ScenarioKind::QuantumSequential;
    s.psi = parse_qubit_literal(require(sc, "psi", "scenario"), "psi");
    s.basis_x = parse_qubit_literal(require(sc, "basis_x", "scenario"), "basis_x");
    s.basis_y = parse_qubit_literal(require(sc, "basis_y", "scenario"), "basis_y");
    if (sc.contains("order")) {
      std::string order = as_string(sc.at("order"), "scenario order");
      if (order == "x_then_y")
        s.order = sim::MeasurementOrder::XThenY;
      else if (order == "y_then_x")
        s.order = sim::MeasurementOrder::YThenX;
      else
        raise(Errc::SyntaxError, "order must be 'x_then_y' or 'y_then_x'");
    }
  } else {
    raise(Errc::SyntaxError,
          "scenario kind must be 'classical_joint' or 'quantum_sequential'");
  }
  if (sc.contains("noise_rate")) s.noise_rate = as_double(sc.at("noise_rate"), "noise_rate");
  s.samples_per_subject =
      as_int(require(sc, "samples_per_subject", "scenario"), "samples_per_subject");
  s.cohort_size = as_int(require(sc, "cohort_size", "scenario"), "cohort_size");
  if (sc.contains("seed")) {
    s.seed = as_seed(sc.at("seed"), "scenario");
    out.seed_in_file = true;
  }
  s.validate();
  return out;
}

std::string serialize_model(const ModelFile& model) {
  json doc;
  doc["format_version"] = 1;
  json substrates = json::array();
  for (const Substrate& s : model.substrates) {
    json e;
    e["name"] = s.name();
    if (s.kind() == BackendKind::Classical) {
      e["kind"] = "classical";
      e["states"] = s.labels();
    } else {
      e["kind"] = "quantum";
      e["dimension"] = s.size();
      e["tolerance"] = quantize(s.tolerance());
    }
    substrates.push_back(std::move(e));
  }
  doc["substrates"] = std::move(substrates);

  json attributes = json::array();
  for (const Attribute& a : model.attributes) {
    json e;
    e["name"] = a.name();
    e["substrate"] = a.substrate().name();
    if (a.kind() == BackendKind::Classical) {
      e["states"] = a.member_labels();
    } else {
      json vectors = json::array();
      for (const la::vec& g : a.generators()) vectors.push_back(vector_json(g));
      e["vectors"] = std::move(vectors);
    }
    attributes.push_back(std::move(e));
  }
  doc["attributes"] = std::move(attributes);

  json variables = json::array();
  for (const Variable& v : model.variables) {
    json e;
    e["name"] = v.name();
    e["substrate"] = v.substrate().name();
    json names = json::array();
    for (const Attribute& a : v.attributes()) names.push_back(a.name());
    e["attributes"] = std::move(names);
    variables.push_back(std::move(e));
  }
  doc["variables"] = std::move(variables);

  json states = json::array();
  for (const auto& [name, st] : model.states) {
    json e;
    e["name"] = name;
    e["substrate"] = st.substrate().name();
    if (st.kind() == BackendKind::Classical)
      e["label"] = st.label();
    else
      e["vector"] = vector_json(st.amplitudes());
    states.push_back(std::move(e));
  }
  doc["states"] = std::move(states);

  json tasks = json::array();
  for (const Task& t : model.tasks) {
    json e;
    e["name"] = t.label();
    json pairs = json::array();
    for (const auto& [in, outa] : t.pairs())
      pairs.push_back({{"in", in.name()}, {"out", outa.name()}});
    e["pairs"] = std::move(pairs);
    tasks.push_back(std::move(e));
  }
  doc["tasks"] = std::move(tasks);
  return dump_report(doc);
}

std::string serialize_scenario(const sim::Scenario& scenario) {
  json doc;
  doc["format_version"] = 1;
  doc["scenario"] = scenario_to_json(scenario);
  return dump_report(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(Errc::IoError, "failed while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::IoError, "cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) raise(Errc::IoError, "failed while writing '" + path + "'");
}

}  // namespace ctcog::io
