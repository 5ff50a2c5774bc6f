#include "fso/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fso {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << text;
}

json parse_json(const std::string& text, const std::string& origin) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError(origin + ": not valid JSON");
  return j;
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["schema"] = kInstanceSchema;
  j["id"] = inst.id;
  j["penalty"] = inst.penalty;
  j["store"] = {{"ls", inst.store_lower}, {"us", inst.store_upper}};
  json pws = json::array();
  for (const PlanogramWorld& pw : inst.pws) {
    json cats = json::array();
    for (const Category& cat : pw.categories) {
      json opts = json::array();
      for (const PlanogramOption& opt : cat.options)
        opts.push_back({{"id", opt.id}, {"length", opt.length}, {"revenue", opt.revenue}});
      cats.push_back({{"id", cat.id}, {"current", cat.current_option}, {"options", opts}});
    }
    pws.push_back({{"id", pw.id}, {"ll", pw.lower}, {"ul", pw.upper}, {"categories", cats}});
  }
  j["pws"] = pws;
  if (inst.provenance) {
    const GenProvenance& prov = *inst.provenance;
    j["provenance"] = {
        {"seed", prov.seed},
        {"spanner", {{prov.spanner[0].first, prov.spanner[0].second},
                     {prov.spanner[1].first, prov.spanner[1].second}}},
        {"base", prov.base_choice}};
  }
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text, const std::string& origin) {
  const json j = parse_json(text, origin);
  Instance inst;
  const std::string schema = require<std::string>(j, "schema", origin);
  if (schema != kInstanceSchema)
    throw InputError(origin + ": unsupported schema '" + schema + "'");
  inst.id = j.value("id", std::string{});
  inst.penalty = require<i64>(j, "penalty", origin);
  const json store = require<json>(j, "store", origin);
  inst.store_lower = require<i64>(store, "ls", origin + ".store");
  inst.store_upper = require<i64>(store, "us", origin + ".store");
  for (const json& jpw : require<json>(j, "pws", origin)) {
    PlanogramWorld pw;
    pw.id = require<int>(jpw, "id", origin + ".pws");
    const std::string where = origin + ".pws[" + std::to_string(pw.id) + "]";
    pw.lower = require<i64>(jpw, "ll", where);
    pw.upper = require<i64>(jpw, "ul", where);
    for (const json& jcat : require<json>(jpw, "categories", where)) {
      Category cat;
      cat.id = require<int>(jcat, "id", where);
      const std::string cwhere = where + ".categories[" + std::to_string(cat.id) + "]";
      cat.current_option = require<int>(jcat, "current", cwhere);
      for (const json& jopt : require<json>(jcat, "options", cwhere)) {
        PlanogramOption opt;
        opt.id = require<int>(jopt, "id", cwhere);
        opt.length = require<i64>(jopt, "length", cwhere);
        opt.revenue = require<i64>(jopt, "revenue", cwhere);
        cat.options.push_back(opt);
      }
      pw.categories.push_back(std::move(cat));
    }
    inst.pws.push_back(std::move(pw));
  }
  if (j.contains("provenance")) {
    const json& jp = j.at("provenance");
    GenProvenance prov;
    prov.seed = require<std::uint64_t>(jp, "seed", origin + ".provenance");
    const json spanner = require<json>(jp, "spanner", origin + ".provenance");
    if (!spanner.is_array() || spanner.size() != 2 || spanner[0].size() != 2 ||
        spanner[1].size() != 2)
      throw InputError(origin + ".provenance: spanner must be two [l, r] pairs");
    for (int t = 0; t < 2; ++t)
      prov.spanner[t] = {spanner[t][0].get<i64>(), spanner[t][1].get<i64>()};
    prov.base_choice = require<std::vector<int>>(jp, "base", origin + ".provenance");
    inst.provenance = std::move(prov);
  }
  try {
    inst.finalize();
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_file(path), path.filename().string());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_file(path, instance_to_json(inst));
}

std::string solution_to_json(const Instance& inst, const Solution& sol,
                             const Evaluation& ev) {
  json choices = json::array();
  for (int c = 0; c < inst.num_categories(); ++c)
    choices.push_back({{"category", inst.category(c).id}, {"option", sol.choice[c]}});
  json j;
  j["schema"] = kSolutionSchema;
  j["instance_id"] = inst.id;
  j["choices"] = choices;
  j["revenue"] = ev.revenue;
  j["violation"] = ev.violation;
  j["f"] = ev.f;
  j["feasible"] = ev.violation == 0;
  return j.dump(2) + "\n";
}

Solution solution_from_json(const Instance& inst, const std::string& text,
                            const std::string& origin) {
  const json j = parse_json(text, origin);
  const std::string schema = require<std::string>(j, "schema", origin);
  if (schema != kSolutionSchema)
    throw InputError(origin + ": unsupported schema '" + schema + "'");
  std::vector<int> choice(inst.num_categories(), -1);
  // category id -> ordinal
  std::vector<std::pair<int, int>> ids;
  for (int c = 0; c < inst.num_categories(); ++c) ids.emplace_back(inst.category(c).id, c);
  for (const json& jc : require<json>(j, "choices", origin)) {
    const int id = require<int>(jc, "category", origin + ".choices");
    const int opt = require<int>(jc, "option", origin + ".choices");
    auto it = std::find_if(ids.begin(), ids.end(),
                           [id](const auto& p) { return p.first == id; });
    if (it == ids.end())
      throw InputError(origin + ": unknown category id " + std::to_string(id));
    choice[it->second] = opt;
  }
  for (int c = 0; c < inst.num_categories(); ++c)
    if (choice[c] < 0)
      throw InputError(origin + ": no choice for category id " +
                       std::to_string(inst.category(c).id));
  Solution sol = make_solution(inst, std::move(choice));
  const Evaluation ev = evaluate(inst, sol);
  if (require<i64>(j, "f", origin) != ev.f ||
      require<i64>(j, "revenue", origin) != ev.revenue ||
      require<i64>(j, "violation", origin) != ev.violation)
    throw InputError(origin + ": recorded figures disagree with a re-evaluation");
  return sol;
}

void save_solution(const Instance& inst, const Solution& sol, const Evaluation& ev,
                   const std::filesystem::path& path) {
  write_file(path, solution_to_json(inst, sol, ev));
}

Solution load_solution(const Instance& inst, const std::filesystem::path& path) {
  return solution_from_json(inst, read_file(path), path.filename().string());
}

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path) {
  json list = json::array();
  for (const ManifestEntry& e : entries)
    list.push_back({{"id", e.id}, {"seed", e.seed}, {"file", e.file}});
  json j;
  j["schema"] = kManifestSchema;
  j["instances"] = list;
  write_file(path, j.dump(2) + "\n");
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  const std::string origin = path.filename().string();
  const json j = parse_json(read_file(path), origin);
  const std::string schema = require<std::string>(j, "schema", origin);
  if (schema != kManifestSchema)
    throw InputError(origin + ": unsupported schema '" + schema + "'");
  std::vector<ManifestEntry> entries;
  for (const json& je : require<json>(j, "instances", origin)) {
    ManifestEntry e;
    e.id = require<std::string>(je, "id", origin + ".instances");
    e.seed = require<std::uint64_t>(je, "seed", origin + ".instances");
    e.file = require<std::string>(je, "file", origin + ".instances");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<Instance> load_manifest_instances(const std::filesystem::path& manifest_path) {
  const auto entries = load_manifest(manifest_path);
  const auto dir = manifest_path.parent_path();
  std::vector<Instance> instances;
  instances.reserve(entries.size());
  for (const ManifestEntry& e : entries) instances.push_back(load_instance(dir / e.file));
  return instances;
}

}  // namespace fso
