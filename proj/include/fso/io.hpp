#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fso/model.hpp"

namespace fso {

inline constexpr const char* kInstanceSchema = "fso-instance/1";
inline constexpr const char* kSolutionSchema = "fso-solution/1";
inline constexpr const char* kManifestSchema = "fso-manifest/1";

// Instance files are JSON:
//   {schema, id, penalty, store:{ls,us},
//    pws:[{id, ll, ul, categories:[{id, current, options:[{id,length,revenue}]}]}],
//    provenance?:{seed, spanner:[[l,r],[l,r]], base:[...]}}
// Serialization is canonical (sorted keys, fixed indent), so identical
// instances produce byte-identical files.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text, const std::string& origin);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// Solution files: {schema, instance_id, choices:[{category, option}],
// revenue, violation, f, feasible}. `category` is the category id and
// `option` the 0-based index into that category's option sequence.
std::string solution_to_json(const Instance& inst, const Solution& sol,
                             const Evaluation& ev);
/// Reads a solution file back into a choice vector for `inst`, checking the
/// recorded figures against a re-evaluation.
Solution solution_from_json(const Instance& inst, const std::string& text,
                            const std::string& origin);
void save_solution(const Instance& inst, const Solution& sol, const Evaluation& ev,
                   const std::filesystem::path& path);
Solution load_solution(const Instance& inst, const std::filesystem::path& path);

struct ManifestEntry {
  std::string id;
  std::uint64_t seed = 0;
  std::string file;  // relative to the manifest's directory
};

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

/// Loads every instance listed in a manifest, resolving paths against the
/// manifest's directory.
std::vector<Instance> load_manifest_instances(const std::filesystem::path& manifest_path);

}  // namespace fso
