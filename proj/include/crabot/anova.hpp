#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "crabot/ingest.hpp"
#include "crabot/resonance.hpp"

namespace crabot::eval {

struct AnovaTable {
  double ss_between = 0;
  double ss_within = 0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  // 0 when both sums of squares vanish, +inf when only ss_within does.
  double f_stat = 0;
};

// Classic one-way ANOVA. Needs at least two groups, none empty, and more
// observations than groups.
AnovaTable one_way_anova(std::span<const std::vector<double>> groups);

enum class Interaction { BotBot = 0, BotControl = 1, ControlControl = 2 };

struct InteractionAnova {
  double f_stat = 0;
  double p_value = 1;
  std::array<double, 3> group_means{};     // indexed by Interaction
  std::array<std::size_t, 3> group_sizes{};
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
};

// Upper-triangle resonances grouped into bot-bot, bot-control and
// control-control pairs (users labeled Unknown are left out). p-value from a
// permutation test that reshuffles the Bot/Control labels across users, so
// each permutation keeps the group sizes and the pair structure of the
// matrix: p = (1 + #{F_perm >= F_obs}) / (1 + permutations).
InteractionAnova anova_interactions(const resonance::ResonanceMatrix& matrix,
                                    const LabelMap& labels, std::size_t permutations = 10000,
                                    std::uint64_t seed = 1, unsigned workers = 0);

// Resonances of each interaction type, upper triangle in row-major order.
std::array<std::vector<double>, 3> interaction_groups(const resonance::ResonanceMatrix& matrix,
                                                      const LabelMap& labels);

}  // namespace crabot::eval
