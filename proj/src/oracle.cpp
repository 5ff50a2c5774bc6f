#include "fso/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace fso {

namespace {

struct CatData {
  const Category* cat;
  int pw;
  bool last_in_pw;
  i64 min_rest_pw, max_rest_pw;        // over later categories of the same PW
  i64 min_rest_store, max_rest_store;  // over all later categories
};

struct Enumerator {
  const Instance& inst;
  std::vector<CatData> cats;
  std::vector<int> current;
  std::vector<int> best;
  i64 best_revenue = std::numeric_limits<i64>::min();
  bool found = false;
  i64 nodes = 0;

  explicit Enumerator(const Instance& instance) : inst(instance) {
    const int n = inst.num_categories();
    cats.resize(n);
    current.assign(n, 0);
    for (int c = 0; c < n; ++c) {
      cats[c].cat = &inst.category(c);
      cats[c].pw = inst.pw_of(c);
      cats[c].last_in_pw = c + 1 == n || inst.pw_of(c + 1) != cats[c].pw;
    }
    i64 min_store = 0, max_store = 0;
    i64 min_pw = 0, max_pw = 0;
    for (int c = n - 1; c >= 0; --c) {
      cats[c].min_rest_store = min_store;
      cats[c].max_rest_store = max_store;
      if (cats[c].last_in_pw) {
        min_pw = 0;
        max_pw = 0;
      }
      cats[c].min_rest_pw = min_pw;
      cats[c].max_rest_pw = max_pw;
      i64 lo = std::numeric_limits<i64>::max(), hi = 0;
      for (const PlanogramOption& opt : cats[c].cat->options) {
        lo = std::min(lo, opt.length);
        hi = std::max(hi, opt.length);
      }
      min_store += lo;
      max_store += hi;
      min_pw += lo;
      max_pw += hi;
    }
  }

  void descend(int c, i64 pw_len, i64 total_len, i64 revenue) {
    if (c == inst.num_categories()) {
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best = current;
        found = true;
      }
      return;
    }
    const CatData& cd = cats[c];
    const PlanogramWorld& pw = inst.pws[cd.pw];
    const int nopts = static_cast<int>(cd.cat->options.size());
    for (int j = 0; j < nopts; ++j) {
      const PlanogramOption& opt = cd.cat->options[j];
      ++nodes;
      const i64 g = pw_len + opt.length;
      if (g + cd.min_rest_pw > pw.upper) continue;
      if (g + cd.max_rest_pw < pw.lower) continue;
      const i64 total = total_len + opt.length;
      if (total + cd.min_rest_store > inst.store_upper) continue;
      if (total + cd.max_rest_store < inst.store_lower) continue;
      current[c] = j;
      descend(c + 1, cd.last_in_pw ? 0 : g, total, revenue + opt.revenue);
    }
  }
};

}  // namespace

OptimalResult brute_force(const Instance& inst, i64 budget) {
  i64 combinations = 1;
  for (int c = 0; c < inst.num_categories(); ++c) {
    const i64 opts = static_cast<i64>(inst.category(c).options.size());
    if (combinations > budget / opts) {
      throw OracleBudgetError("instance too large for the oracle: option product exceeds " +
                              std::to_string(budget));
    }
    combinations *= opts;
  }

  const auto start = std::chrono::steady_clock::now();
  Enumerator en(inst);
  en.descend(0, 0, 0, 0);
  OptimalResult result;
  result.feasible = en.found;
  result.nodes = en.nodes;
  if (en.found) {
    result.revenue = en.best_revenue;
    result.choice = std::move(en.best);
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

i64 revenue_upper_bound(const Instance& inst) {
  i64 bound = 0;
  for (int c = 0; c < inst.num_categories(); ++c) {
    i64 best = 0;
    for (const PlanogramOption& opt : inst.category(c).options)
      best = std::max(best, opt.revenue);
    bound += best;
  }
  return bound;
}

void export_mip(const Instance& inst, std::ostream& out) {
  auto var = [&](int cat_id, int opt_index) {
    return "x_" + std::to_string(cat_id) + "_" + std::to_string(opt_index);
  };

  out << "\\ floor-space assignment model for instance " << inst.id << "\n";
  out << "Maximize\n obj:";
  for (int c = 0; c < inst.num_categories(); ++c) {
    const Category& cat = inst.category(c);
    for (int j = 0; j < static_cast<int>(cat.options.size()); ++j)
      out << " + " << cat.options[j].revenue << " " << var(cat.id, j);
  }
  out << "\nSubject To\n";
  for (int c = 0; c < inst.num_categories(); ++c) {
    const Category& cat = inst.category(c);
    out << " assign_" << cat.id << ":";
    for (int j = 0; j < static_cast<int>(cat.options.size()); ++j)
      out << " + " << var(cat.id, j);
    out << " = 1\n";
  }
  auto length_row = [&](const std::vector<const Category*>& cats) {
    for (const Category* cat : cats)
      for (int j = 0; j < static_cast<int>(cat->options.size()); ++j)
        out << " + " << cat->options[j].length << " " << var(cat->id, j);
  };
  for (const PlanogramWorld& pw : inst.pws) {
    std::vector<const Category*> cats;
    for (const Category& cat : pw.categories) cats.push_back(&cat);
    out << " pw_" << pw.id << "_lo:";
    length_row(cats);
    out << " >= " << pw.lower << "\n";
    out << " pw_" << pw.id << "_hi:";
    length_row(cats);
    out << " <= " << pw.upper << "\n";
  }
  std::vector<const Category*> all;
  for (const PlanogramWorld& pw : inst.pws)
    for (const Category& cat : pw.categories) all.push_back(&cat);
  out << " store_lo:";
  length_row(all);
  out << " >= " << inst.store_lower << "\n";
  out << " store_hi:";
  length_row(all);
  out << " <= " << inst.store_upper << "\n";
  out << "Binaries\n";
  for (int c = 0; c < inst.num_categories(); ++c) {
    const Category& cat = inst.category(c);
    for (int j = 0; j < static_cast<int>(cat.options.size()); ++j)
      out << " " << var(cat.id, j);
  }
  out << "\nEnd\n";
}

void export_mip_file(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write LP file: " + path.string());
  export_mip(inst, out);
}

void save_oracle_result(const Instance& inst, const OptimalResult& result,
                        const std::filesystem::path& path) {
  nlohmann::json j;
  j["schema"] = "fso-oracle/1";
  j["instance_id"] = inst.id;
  j["status"] = result.feasible ? "optimal" : "infeasible";
  j["revenue"] = result.revenue;
  j["nodes"] = result.nodes;
  j["seconds"] = result.seconds;
  nlohmann::json choices = nlohmann::json::array();
  if (result.feasible)
    for (int c = 0; c < inst.num_categories(); ++c)
      choices.push_back({{"category", inst.category(c).id}, {"option", result.choice[c]}});
  j["choices"] = choices;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write oracle result: " + path.string());
  out << j.dump(2) << "\n";
}

std::optional<OptimalResult> load_oracle_result(const Instance& inst,
                                                const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
  const std::string origin = path.filename().string();
  if (j.is_discarded()) throw InputError(origin + ": not valid JSON");
  if (j.value("schema", "") != std::string("fso-oracle/1"))
    throw InputError(origin + ": unsupported schema");
  if (j.value("instance_id", "") != inst.id)
    throw InputError(origin + ": result is for instance '" +
                     j.value("instance_id", "") + "', not '" + inst.id + "'");
  OptimalResult result;
  result.feasible = j.value("status", "") == "optimal";
  result.revenue = j.value("revenue", i64{0});
  result.nodes = j.value("nodes", i64{0});
  result.seconds = j.value("seconds", 0.0);
  if (result.feasible) {
    result.choice.assign(inst.num_categories(), -1);
    for (const auto& jc : j.at("choices")) {
      const int id = jc.at("category").get<int>();
      int ordinal = -1;
      for (int c = 0; c < inst.num_categories(); ++c)
        if (inst.category(c).id == id) {
          ordinal = c;
          break;
        }
      if (ordinal < 0) throw InputError(origin + ": unknown category id " + std::to_string(id));
      result.choice[ordinal] = jc.at("option").get<int>();
    }
    const Evaluation ev = evaluate(inst, result.choice);
    if (ev.violation != 0 || ev.revenue != result.revenue)
      throw InputError(origin + ": recorded optimum disagrees with a re-evaluation");
  }
  return result;
}

}  // namespace fso
