#include <filesystem>

#include "doctest.h"
#include "fso/generator.hpp"
#include "fso/io.hpp"
#include "helpers.hpp"

using namespace fso;

TEST_CASE("instances round-trip through JSON byte-identically") {
  const Instance inst = generate(desk_profile(12));
  const std::string text = instance_to_json(inst);
  const Instance back = instance_from_json(text, "roundtrip");
  CHECK(instance_to_json(back) == text);
  CHECK(back.id == inst.id);
  CHECK(back.penalty == inst.penalty);
  CHECK(back.num_categories() == inst.num_categories());
  REQUIRE(back.provenance.has_value());
  CHECK(back.provenance->seed == inst.provenance->seed);
  CHECK(back.provenance->base_choice == inst.provenance->base_choice);
}

TEST_CASE("instance parsing names missing or malformed fields") {
  CHECK_THROWS_WITH_AS(instance_from_json("{}", "bad.json"),
                       doctest::Contains("missing field 'schema'"), InputError);
  CHECK_THROWS_WITH_AS(instance_from_json("not json at all", "bad.json"),
                       doctest::Contains("not valid JSON"), InputError);
  CHECK_THROWS_WITH_AS(
      instance_from_json(R"({"schema":"fso-instance/1","penalty":1,"store":{"ls":0},"pws":[]})",
                         "bad.json"),
      doctest::Contains("missing field 'us'"), InputError);

  // structurally valid JSON with a model violation
  Instance inst = test::example_instance();
  std::string text = instance_to_json(inst);
  const auto pos = text.find("\"length\": 10");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "\"length\": -3");
  CHECK_THROWS_WITH_AS(instance_from_json(text, "bad.json"),
                       doctest::Contains("positive integer"), InputError);
}

TEST_CASE("solutions round-trip and disagreements are rejected") {
  const Instance inst = test::example_instance();
  Solution sol = make_solution(inst, {0, 1});
  const Evaluation ev = evaluate(inst, sol);
  const std::string text = solution_to_json(inst, sol, ev);
  const Solution back = solution_from_json(inst, text, "sol.json");
  CHECK(back.choice == sol.choice);

  std::string tampered = text;
  const auto pos = tampered.find("\"revenue\": 300");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 14, "\"revenue\": 999");
  CHECK_THROWS_WITH_AS(solution_from_json(inst, tampered, "sol.json"),
                       doctest::Contains("disagree"), InputError);
}

TEST_CASE("manifests list instances and load back") {
  const auto dir = std::filesystem::temp_directory_path() / "fso_manifest_test";
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = generate(desk_profile(seed));
    save_instance(inst, dir / (inst.id + ".json"));
    entries.push_back({inst.id, seed, inst.id + ".json"});
  }
  save_manifest(entries, dir / "manifest.json");
  const auto loaded = load_manifest(dir / "manifest.json");
  REQUIRE(loaded.size() == 3);
  CHECK(loaded[1].seed == 2);
  const auto instances = load_manifest_instances(dir / "manifest.json");
  REQUIRE(instances.size() == 3);
  CHECK(instances[2].id == "desk-s3");
  std::filesystem::remove_all(dir);
}
