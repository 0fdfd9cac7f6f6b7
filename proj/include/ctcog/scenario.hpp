#pragma once

// File formats: JSON model files (substrates/attributes/variables/states/
// tasks) and JSON scenario files for the simulator, plus their serializers.
// Both carry "format_version": 1 and round-trip through parse/serialize.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctcog/judgement.hpp"
#include "ctcog/substrate.hpp"
#include "ctcog/task.hpp"

namespace ctcog::io {

struct ModelFile {
  std::vector<Substrate> substrates;  // declaration order preserved
  std::vector<Attribute> attributes;
  std::vector<Variable> variables;
  std::vector<std::pair<std::string, State>> states;
  std::vector<Task> tasks;

  const Substrate& substrate(std::string_view name) const;
  const Attribute& attribute(std::string_view name) const;
  const Variable& variable(std::string_view name) const;
  const State& state(std::string_view name) const;
  const Task& task(std::string_view name) const;
  // Variables declared on the named substrate, in declaration order.
  std::vector<Variable> variables_on(std::string_view substrate_name) const;
};

struct ScenarioFile {
  sim::Scenario scenario;
  bool seed_in_file = false;  // lets the CLI apply its seed precedence
};

ModelFile parse_model(const std::string& text);
ScenarioFile parse_scenario(const std::string& text);
std::string serialize_model(const ModelFile& model);
std::string serialize_scenario(const sim::Scenario& scenario);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ctcog::io
