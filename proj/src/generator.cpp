#include "fso/generator.hpp"

#include <numeric>

namespace fso {

namespace {

i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

int config_count(const std::vector<int>& values, int index, const char* what) {
  if (values.empty()) throw InputError(std::string(what) + " must not be empty");
  if (values.size() == 1) return values[0];
  if (index >= static_cast<int>(values.size()))
    throw InputError(std::string(what) + " list is shorter than required");
  return values[index];
}

}  // namespace

void GenConfig::validate() const {
  if (pw_count < 1) throw InputError("pw_count must be at least 1");
  if (categories_per_pw.empty()) throw InputError("categories_per_pw must not be empty");
  for (int n : categories_per_pw)
    if (n < 1) throw InputError("each PW needs at least one category");
  if (options_per_category.empty())
    throw InputError("options_per_category must not be empty");
  for (int n : options_per_category)
    if (n < 2) throw InputError("each category needs at least two options");
  if (ratio_lower <= 0 || ratio_lower > 1000 || ratio_upper < 1000)
    throw InputError("bound ratios must satisfy 0 < lower <= 1 <= upper");
  if (value_range < 1 || corr_band < 0 || divisor < 1)
    throw InputError("spanner parameters must be positive");
  if (mult_lo < 1 || mult_hi < mult_lo) throw InputError("bad multiplier range");
  if (penalty < 0) throw InputError("penalty must be nonnegative");
}

std::array<SpannerPair, 2> make_spanner(Rng& rng, const GenConfig& cfg) {
  std::array<SpannerPair, 2> spanner;
  for (SpannerPair& pair : spanner) {
    const i64 l = rng.uniform_int(1, cfg.value_range);
    i64 r = rng.uniform_int(l - cfg.corr_band, l + cfg.corr_band);
    while (r < 1) r = rng.uniform_int(l - cfg.corr_band, l + cfg.corr_band);
    pair.length = ceil_div(l, cfg.divisor);
    pair.revenue = ceil_div(r, cfg.divisor);
  }
  return spanner;
}

PlanogramOption gen_option(const std::array<SpannerPair, 2>& spanner, i64 counter,
                           Rng& rng, const GenConfig& cfg) {
  const SpannerPair& pair = spanner[counter % 2];
  const i64 mult = rng.uniform_int(cfg.mult_lo, cfg.mult_hi);
  PlanogramOption opt;
  opt.id = static_cast<int>(counter);
  opt.length = mult * pair.length;
  opt.revenue = mult * pair.revenue;
  return opt;
}

Instance generate(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto spanner = make_spanner(rng, cfg);

  Instance inst;
  inst.id = cfg.id_prefix + "-s" + std::to_string(cfg.seed);
  inst.penalty = cfg.penalty;

  // draw order: spanner pairs, then every option, then the base assignment
  i64 counter = 0;
  int cat_index = 0;
  for (int k = 0; k < cfg.pw_count; ++k) {
    PlanogramWorld pw;
    pw.id = k;
    const int ncats = config_count(cfg.categories_per_pw, k, "categories_per_pw");
    for (int i = 0; i < ncats; ++i, ++cat_index) {
      Category cat;
      cat.id = cat_index;
      const int nopts =
          config_count(cfg.options_per_category, cat_index, "options_per_category");
      for (int j = 0; j < nopts; ++j)
        cat.options.push_back(gen_option(spanner, counter++, rng, cfg));
      pw.categories.push_back(std::move(cat));
    }
    inst.pws.push_back(std::move(pw));
  }

  GenProvenance prov;
  prov.seed = cfg.seed;
  prov.spanner = {std::pair{spanner[0].length, spanner[0].revenue},
                  std::pair{spanner[1].length, spanner[1].revenue}};

  i64 store_base = 0;
  for (PlanogramWorld& pw : inst.pws) {
    i64 base_len = 0;
    for (Category& cat : pw.categories) {
      cat.current_option = static_cast<int>(
          rng.uniform_int(0, static_cast<i64>(cat.options.size()) - 1));
      prov.base_choice.push_back(cat.current_option);
      base_len += cat.options[cat.current_option].length;
    }
    // floor the lower bound and round the upper bound up so the base
    // assignment itself always stays feasible
    pw.lower = base_len * cfg.ratio_lower / 1000;
    pw.upper = ceil_div(base_len * cfg.ratio_upper, 1000);
    store_base += base_len;
  }
  inst.store_lower = store_base * cfg.ratio_lower / 1000;
  inst.store_upper = ceil_div(store_base * cfg.ratio_upper, 1000);

  inst.provenance = std::move(prov);
  inst.finalize();
  return inst;
}

GenConfig desk_profile(std::uint64_t seed) {
  GenConfig cfg;
  cfg.id_prefix = "desk";
  cfg.pw_count = 3;
  cfg.categories_per_pw = {5};
  cfg.options_per_category = {3};
  cfg.seed = seed;
  return cfg;
}

GenConfig full_profile(std::uint64_t seed) {
  GenConfig cfg;
  cfg.id_prefix = "full";
  cfg.pw_count = 9;
  cfg.categories_per_pw = {6};
  cfg.options_per_category.assign(54, 3);
  for (int c = 0; c < 32; ++c) cfg.options_per_category[c] = 4;  // 32*4 + 22*3 = 194
  cfg.seed = seed;
  return cfg;
}

}  // namespace fso
