//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "moso/forms.hpp"
#include "moso/testbed.hpp"

namespace moso {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json &j, const char *key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

const json &require(const json &j, const char *key, const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

DesignVariable parse_variable(const json &v, std::size_t i) {
  const std::string where = "variables[" + std::to_string(i) + "]";
  const auto name = require(v, "name", where).get<std::string>();
  const auto type = require(v, "type", where).get<std::string>();
  if (type == "continuous")
    return DesignVariable::continuous(name, require(v, "lower", where).get<double>(),
                                      require(v, "upper", where).get<double>());
  if (type == "integer")
    return DesignVariable::integer(name, require(v, "lower", where).get<double>(),
                                   require(v, "upper", where).get<double>());
  if (type == "categorical")
    return DesignVariable::categorical(name,
                                       require(v, "levels", where).get<std::vector<std::string>>());
  throw ConfigError(where + ": unknown type \"" + type + "\"");
}

struct Context {
  std::map<std::string, std::size_t> sim_offset;
  const DesignSpace *space = nullptr;
  std::size_t total_outputs = 0;
};

std::size_t checked(std::size_t index, const Context &ctx, const std::string &where) {
  if (index >= ctx.total_outputs)
    throw ConfigError(where + ": output index " + std::to_string(index) + " out of range");
  return index;
}

std::size_t output_index(const json &j, const Context &ctx, const std::string &where) {
  std::size_t base = 0;
  if (j.contains("simulation")) {
    const auto name = j.at("simulation").get<std::string>();
    const auto it = ctx.sim_offset.find(name);
    if (it == ctx.sim_offset.end())
      throw ConfigError(where + ": unknown simulation \"" + name + "\"");
    base = it->second;
  }
  return checked(base + require(j, "output", where).get<std::size_t>(), ctx, where);
}

std::size_t variable_index(const std::string &name, const Context &ctx, const std::string &where) {
  if (!ctx.space->contains(name))
    throw ConfigError(where + ": unknown variable \"" + name + "\"");
  return ctx.space->index_of(name);
}

ObjectiveSpec parse_form(const json &f, const Context &ctx, const std::string &where,
                         bool constraint) {
  const auto name = require(f, "name", where).get<std::string>();
  const auto form = require(f, "form", where).get<std::string>();
  const double upper = constraint ? require(f, "upper", where).get<double>() : 0.0;
  if (form == "sum_of_squares") {
    std::vector<std::size_t> idx;
    std::size_t base = 0;
    if (f.contains("simulation")) {
      const auto sim = f.at("simulation").get<std::string>();
      const auto it = ctx.sim_offset.find(sim);
      if (it == ctx.sim_offset.end())
        throw ConfigError(where + ": unknown simulation \"" + sim + "\"");
      base = it->second;
    }
    if (f.contains("outputs")) {
      for (auto i : f.at("outputs").get<std::vector<std::size_t>>())
        idx.push_back(checked(base + i, ctx, where));
    } else {
      const auto range = require(f, "output_range", where).get<std::vector<std::size_t>>();
      if (range.size() != 2 || range[0] >= range[1])
        throw ConfigError(where + ": output_range must be [first, last+1]");
      for (std::size_t i = range[0]; i < range[1]; ++i)
        idx.push_back(checked(base + i, ctx, where));
    }
    return forms::sum_of_squares(name, std::move(idx), upper);
  }
  forms::LinearTerms t;
  if (form == "identity") {
    t.outputs.push_back({output_index(f, ctx, where), 1.0});
  } else if (form == "design") {
    t.design.push_back({variable_index(require(f, "variable", where).get<std::string>(), ctx, where), 1.0});
  } else if (form == "linear") {
    if (f.contains("outputs")) {
      for (const auto &term : f.at("outputs"))
        t.outputs.push_back({output_index(term, ctx, where), require(term, "coef", where).get<double>()});
    }
    if (f.contains("design")) {
      for (const auto &[var, coef] : f.at("design").items())
        t.design.push_back({variable_index(var, ctx, where), coef.get<double>()});
    }
    t.constant = get_or(f, "constant", 0.0);
  } else {
    throw ConfigError(where + ": unknown form \"" + form + "\"");
  }
  t.constant -= upper;
  return forms::linear(name, std::move(t));
}

AcquisitionKind parse_kind(const std::string &kind, const std::string &where) {
  if (kind == "fixed_weight")
    return AcquisitionKind::fixed_weight;
  if (kind == "random_weight")
    return AcquisitionKind::random_weight;
  if (kind == "epsilon_constraint" || kind == "random_epsilon_constraint")
    return AcquisitionKind::random_epsilon_constraint;
  throw ConfigError(where + ": unknown acquisition kind \"" + kind + "\"");
}

RunConfig build(const json &doc) {
  if (!doc.is_object())
    throw ConfigError("config: top level must be an object");
  RunConfig rc;
  MoopDefinition &d = rc.definition;

  const auto &vars = require(doc, "variables", "config");
  for (std::size_t i = 0; i < vars.size(); ++i)
    d.variables.push_back(parse_variable(vars[i], i));
  // Checks bounds and names before forms refer to them.
  const DesignSpace space(d.variables);

  d.rng_seed = get_or<std::uint64_t>(doc, "seed", 0);
  Context ctx;
  ctx.space = &space;
  std::size_t offset = 0;
  const auto &sims = require(doc, "simulations", "config");
  for (std::size_t i = 0; i < sims.size(); ++i) {
    const std::string where = "simulations[" + std::to_string(i) + "]";
    const auto &s = sims[i];
    SimulationSpec spec;
    spec.name = require(s, "name", where).get<std::string>();
    const auto builtin = require(s, "builtin", where).get<std::string>();
    testbed::Builtin b;
    try {
      b = testbed::builtin_simulation(builtin, d.variables.size());
    } catch (const Error &e) {
      throw ConfigError(where + ": " + e.what());
    }
    spec.output_dim = b.output_dim;
    spec.evaluator = b.evaluator;
    if (s.contains("delay")) {
      const auto delay = s.at("delay").get<std::vector<double>>();
      if (delay.size() != 2)
        throw ConfigError(where + ": delay must be [t_min, t_max]");
      try {
        spec.evaluator = testbed::delay_wrapper(spec.evaluator, delay[0], delay[1],
                                                d.rng_seed * 1000003ULL + i);
      } catch (const Error &e) {
        throw ConfigError(where + ": " + e.what());
      }
    }
    spec.search.size = require(s, "search_size", where).get<std::size_t>();
    const auto mode = get_or<std::string>(s, "surrogate", "global");
    if (mode == "global")
      spec.surrogate.mode = SurrogateMode::global;
    else if (mode == "local")
      spec.surrogate.mode = SurrogateMode::local;
    else
      throw ConfigError(where + ": unknown surrogate mode \"" + mode + "\"");
    if (!ctx.sim_offset.emplace(spec.name, offset).second)
      throw ConfigError(where + ": duplicate simulation name \"" + spec.name + "\"");
    offset += spec.output_dim;
    d.simulations.push_back(std::move(spec));
  }

  ctx.total_outputs = offset;
  const auto &objs = require(doc, "objectives", "config");
  for (std::size_t j = 0; j < objs.size(); ++j)
    d.objectives.push_back(parse_form(objs[j], ctx, "objectives[" + std::to_string(j) + "]", false));
  if (doc.contains("constraints")) {
    const auto &cons = doc.at("constraints");
    for (std::size_t j = 0; j < cons.size(); ++j)
      d.constraints.push_back(
          parse_form(cons[j], ctx, "constraints[" + std::to_string(j) + "]", true));
  }
  const auto &acqs = require(doc, "acquisitions", "config");
  for (std::size_t i = 0; i < acqs.size(); ++i) {
    const std::string where = "acquisitions[" + std::to_string(i) + "]";
    const auto &a = acqs[i];
    AcquisitionSpec spec;
    spec.kind = parse_kind(require(a, "kind", where).get<std::string>(), where);
    if (spec.kind == AcquisitionKind::fixed_weight)
      spec.weights = require(a, "weights", where).get<std::vector<double>>();
    const auto count = get_or<std::size_t>(a, "count", 1);
    for (std::size_t c = 0; c < count; ++c)
      d.acquisitions.push_back(spec);
  }

  if (doc.contains("solver")) {
    const auto &s = doc.at("solver");
    auto &o = d.options;
    o.inner_iterations = get_or(s, "inner_iterations", o.inner_iterations);
    o.projected_gradient_tol = get_or(s, "projected_gradient_tol", o.projected_gradient_tol);
    o.sufficient_decrease = get_or(s, "sufficient_decrease", o.sufficient_decrease);
    o.kappa = get_or(s, "kappa", o.kappa);
    o.epsilon_rho = get_or(s, "epsilon_rho", o.epsilon_rho);
    o.feasibility_tol = get_or(s, "feasibility_tol", o.feasibility_tol);
    o.fd_step = get_or(s, "fd_step", o.fd_step);
    o.duplicate_tol = get_or(s, "duplicate_tol", o.duplicate_tol);
    if (s.contains("trust_region_norm")) {
      const auto norm = s.at("trust_region_norm").get<std::string>();
      if (norm == "euclidean")
        o.trust_region_norm = TrustRegionNorm::euclidean;
      else if (norm == "max")
        o.trust_region_norm = TrustRegionNorm::max;
      else
        throw ConfigError("solver.trust_region_norm must be euclidean or max");
    }
    o.parallel_solves = get_or(s, "parallel_solves", o.parallel_solves);
    d.penalty.lambda = get_or(s, "penalty_initial", d.penalty.lambda);
    d.penalty.growth = get_or(s, "penalty_growth", d.penalty.growth);
    d.penalty.cap = get_or(s, "penalty_cap", d.penalty.cap);
  }
  rc.workers = get_or<std::size_t>(doc, "workers", 1);
  d.options.workers = rc.workers;
  rc.budget = get_or<std::size_t>(doc, "budget", 0);
  if (doc.contains("metrics")) {
    const auto &m = doc.at("metrics");
    if (m.contains("reference"))
      rc.reference = m.at("reference").get<std::vector<double>>();
    if (m.contains("hv_max"))
      rc.hv_max = m.at("hv_max").get<double>();
    if (rc.reference && rc.reference->size() != d.objectives.size())
      throw ConfigError("metrics.reference must have one entry per objective");
  }
  rc.canonical = doc.dump();
  return rc;
}

} // namespace

RunConfig parse_config(const std::string &text, const ConfigOverrides &overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (doc.is_object()) {
    if (overrides.seed)
      doc["seed"] = *overrides.seed;
    if (overrides.budget)
      doc["budget"] = *overrides.budget;
    if (overrides.workers)
      doc["workers"] = *overrides.workers;
  }
  try {
    RunConfig rc = build(doc);
    validate(rc.definition); // surfaces the full error list early
    return rc;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path &path, const ConfigOverrides &overrides) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string config_hash(const RunConfig &config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : config.canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace moso
