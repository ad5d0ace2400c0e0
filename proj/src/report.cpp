//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "moso/report.hpp"

#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace moso::report {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void header(std::ostream &out, const Problem &problem, bool with_record) {
  const auto &defn = problem.definition();
  if (with_record)
    out << "record,";
  out << "iteration";
  for (const auto &v : defn.variables)
    out << ",x:" << v.name;
  for (const auto &s : defn.simulations)
    for (std::size_t k = 0; k < s.output_dim; ++k)
      out << ",s:" << s.name << '[' << k << ']';
  for (const auto &f : defn.objectives)
    out << ",f:" << f.name;
  for (const auto &g : defn.constraints)
    out << ",g:" << g.name;
  out << ",feasible\n";
}

void row(std::ostream &out, const Problem &problem, const Record &r) {
  const auto &vars = problem.definition().variables;
  out << r.iteration;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].kind == VariableKind::categorical)
      out << ',' << r.x.label(i);
    else
      out << ',' << format_double(r.x[i]);
  }
  for (double v : r.outputs)
    out << ',' << format_double(v);
  for (double v : r.objectives)
    out << ',' << format_double(v);
  for (double v : r.constraints)
    out << ',' << format_double(v);
  out << ',' << (r.feasible ? 1 : 0) << '\n';
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

double parse_double(const std::string &s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw Error("database csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

} // namespace

void write_database_csv(std::ostream &out, const Problem &problem, const EvaluationDatabase &db) {
  header(out, problem, false);
  for (const auto &r : db)
    row(out, problem, r);
}

void write_pareto_csv(std::ostream &out, const Problem &problem, const EvaluationDatabase &db,
                      const ParetoArchive &archive) {
  header(out, problem, true);
  for (const auto &e : archive.entries()) {
    out << e.record << ',';
    row(out, problem, db[e.record]);
  }
}

DatabaseTable read_database_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error("database csv: missing header");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  const auto head = split(line);
  std::optional<std::size_t> it_col, feas_col;
  std::vector<std::size_t> f_cols;
  DatabaseTable t;
  for (std::size_t c = 0; c < head.size(); ++c) {
    if (head[c] == "iteration")
      it_col = c;
    else if (head[c] == "feasible")
      feas_col = c;
    else if (head[c].rfind("f:", 0) == 0) {
      f_cols.push_back(c);
      t.objective_names.push_back(head[c].substr(2));
    }
  }
  if (!it_col || !feas_col || f_cols.empty())
    throw Error("database csv: header needs iteration, feasible and f: columns");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto cells = split(line);
    if (cells.size() != head.size())
      throw Error("database csv line " + std::to_string(lineno) + ": expected " +
                  std::to_string(head.size()) + " cells, found " + std::to_string(cells.size()));
    const double it = parse_double(cells[*it_col], lineno);
    if (it != static_cast<int>(it))
      throw Error("database csv line " + std::to_string(lineno) + ": bad iteration");
    if (!t.iteration.empty() && static_cast<int>(it) < t.iteration.back())
      throw Error("database csv line " + std::to_string(lineno) + ": iterations out of order");
    t.iteration.push_back(static_cast<int>(it));
    std::vector<double> f;
    for (std::size_t c : f_cols)
      f.push_back(parse_double(cells[c], lineno));
    t.objectives.push_back(std::move(f));
    const auto &fe = cells[*feas_col];
    if (fe != "0" && fe != "1")
      throw Error("database csv line " + std::to_string(lineno) + ": feasible must be 0 or 1");
    t.feasible.push_back(fe == "1");
  }
  return t;
}

std::vector<TrajectoryRow> trajectory(const std::vector<int> &iteration,
                                      const std::vector<std::vector<double>> &objectives,
                                      const std::vector<bool> &feasible,
                                      std::span<const double> ref) {
  std::vector<TrajectoryRow> rows;
  const std::size_t o = ref.size();
  std::vector<std::vector<double>> front;
  std::vector<double> best(o, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < iteration.size(); ++i) {
    if (feasible[i]) {
      front.push_back(objectives[i]);
      for (std::size_t j = 0; j < o; ++j)
        best[j] = std::min(best[j], objectives[i][j]);
    }
    const bool last = i + 1 == iteration.size() || iteration[i + 1] != iteration[i];
    if (!last)
      continue;
    // Keep only the nondominated part so later iterations stay cheap.
    std::vector<std::vector<double>> kept;
    for (std::size_t k : nondominated_filter(front))
      kept.push_back(front[k]);
    front = std::move(kept);
    rows.push_back({iteration[i], i + 1, hypervolume(front, ref), best});
  }
  return rows;
}

std::vector<TrajectoryRow> trajectory(const EvaluationDatabase &db, std::span<const double> ref) {
  std::vector<int> it;
  std::vector<std::vector<double>> f;
  std::vector<bool> feas;
  for (const auto &r : db) {
    it.push_back(r.iteration);
    f.push_back(r.objectives);
    feas.push_back(r.feasible);
  }
  return trajectory(it, f, feas, ref);
}

void write_metrics_csv(std::ostream &out, const std::vector<std::string> &objective_names,
                       const std::vector<TrajectoryRow> &rows) {
  out << "iteration,records,hypervolume";
  for (const auto &n : objective_names)
    out << ",best:" << n;
  out << '\n';
  for (const auto &r : rows) {
    out << r.iteration << ',' << r.records << ',' << format_double(r.hypervolume);
    for (double b : r.best)
      out << ',' << format_double(b);
    out << '\n';
  }
}

} // namespace moso::report
