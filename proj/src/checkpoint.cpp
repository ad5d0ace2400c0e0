//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "moso/orchestrator.hpp"

namespace moso {

namespace {

constexpr int kCheckpointVersion = 1;

nlohmann::json dims_json(const ProblemDims &d) {
  return {{"n", d.n}, {"m", d.m}, {"o", d.o}, {"p", d.p}, {"q", d.q}, {"l", d.l}, {"q0", d.q0}};
}

} // namespace

std::string Moop::checkpoint_string() const {
  nlohmann::json doc;
  doc["version"] = kCheckpointVersion;
  doc["dims"] = dims_json(problem_.dims());
  doc["iteration"] = next_iteration_;
  doc["evaluations"] = evaluations_;
  doc["penalty"] = {{"lambda", penalty_.lambda}, {"growth", penalty_.growth}, {"cap", penalty_.cap}};
  nlohmann::json streams = nlohmann::json::array();
  for (const auto &r : acquisition_rngs_)
    streams.push_back(serialize_rng(r));
  doc["rng"] = {{"search", serialize_rng(search_rng_)}, {"acquisitions", streams}};
  nlohmann::json records = nlohmann::json::array();
  for (const auto &r : db_)
    records.push_back({{"x", std::vector<double>(r.x.values().begin(), r.x.values().end())}, {"outputs", r.outputs}, {"iteration", r.iteration}});
  doc["records"] = std::move(records);
  return doc.dump(1);
}

void Moop::checkpoint_restore(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("version"))
      throw CheckpointError("corrupt checkpoint: missing version");
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw CheckpointError("checkpoint version " + std::to_string(version) +
                            " is not supported (expected " +
                            std::to_string(kCheckpointVersion) + ")");
    if (doc.at("dims") != dims_json(problem_.dims()))
      throw CheckpointError("checkpoint was written for a problem of different size");

    PenaltyState penalty;
    penalty.lambda = doc.at("penalty").at("lambda").get<double>();
    penalty.growth = doc.at("penalty").at("growth").get<double>();
    penalty.cap = doc.at("penalty").at("cap").get<double>();

    const auto &rng = doc.at("rng");
    Rng search = deserialize_rng(rng.at("search").get<std::string>());
    std::vector<Rng> streams;
    for (const auto &s : rng.at("acquisitions"))
      streams.push_back(deserialize_rng(s.get<std::string>()));
    if (streams.size() != acquisition_rngs_.size())
      throw CheckpointError("checkpoint has the wrong number of acquisition streams");

    EvaluationDatabase db;
    const double tol = problem_.definition().options.feasibility_tol;
    for (const auto &r : doc.at("records")) {
      auto x = r.at("x").get<std::vector<double>>();
      auto outputs = r.at("outputs").get<std::vector<double>>();
      if (outputs.size() != problem_.dims().m)
        throw CheckpointError("checkpoint record has the wrong number of outputs");
      db.add(problem_, problem_.point(std::move(x)), std::move(outputs),
             r.at("iteration").get<int>(), tol);
    }

    const int iteration = doc.at("iteration").get<int>();
    const auto evaluations = doc.at("evaluations").get<std::size_t>();
    if (iteration < 0 || evaluations < db.size())
      throw CheckpointError("corrupt checkpoint: inconsistent counters");

    db_ = std::move(db);
    penalty_ = penalty;
    search_rng_ = std::move(search);
    acquisition_rngs_ = std::move(streams);
    next_iteration_ = iteration;
    evaluations_ = evaluations;
  } catch (const CheckpointError &) {
    throw;
  } catch (const std::exception &e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
}

void Moop::checkpoint_save(const std::filesystem::path &path) const {
  // Write-then-rename so an interrupted save leaves the previous file intact.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw CheckpointError("cannot write checkpoint " + tmp.string());
    out << checkpoint_string();
    if (!out)
      throw CheckpointError("cannot write checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw CheckpointError("cannot write checkpoint " + path.string() + ": " + ec.message());
}

void Moop::checkpoint_load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CheckpointError("cannot read checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  checkpoint_restore(ss.str());
}

} // namespace moso
