#include "crabot/anova.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "crabot/error.hpp"
#include "crabot/parallel.hpp"
#include "crabot/random.hpp"

namespace crabot::eval {
namespace {

// F from group sums when the pooled sum of squares is fixed.
double f_from_sums(std::span<const double> sums, std::span<const std::size_t> sizes,
                   double total_sum, double total_sq, std::size_t total_n) {
  const double grand = total_sum * total_sum / static_cast<double>(total_n);
  double between = -grand;
  for (std::size_t g = 0; g < sums.size(); ++g) {
    between += sums[g] * sums[g] / static_cast<double>(sizes[g]);
  }
  const double total = total_sq - grand;
  double within = total - between;
  // Cancellation can leave tiny negatives.
  if (between < 0) between = 0;
  if (within < 0) within = 0;
  const double df_b = static_cast<double>(sums.size() - 1);
  const double df_w = static_cast<double>(total_n - sums.size());
  // Relative to the total spread, sums below this are rounding noise.
  const double noise = 1e-12 * std::max(total_sq, 1e-300);
  if (between <= noise) between = 0;
  if (within <= noise) {
    return between == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (between / df_b) / (within / df_w);
}

}  // namespace

AnovaTable one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw InvalidArgument("ANOVA needs at least two groups");
  std::size_t n = 0;
  double sum = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidArgument("ANOVA group is empty");
    n += g.size();
    for (double x : g) sum += x;
  }
  if (n <= groups.size()) throw InvalidArgument("ANOVA needs more observations than groups");
  const double grand_mean = sum / static_cast<double>(n);

  AnovaTable t;
  for (const auto& g : groups) {
    double group_sum = 0;
    for (double x : g) group_sum += x;
    const double mean = group_sum / static_cast<double>(g.size());
    t.ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double x : g) t.ss_within += (x - mean) * (x - mean);
  }
  t.df_between = groups.size() - 1;
  t.df_within = n - groups.size();
  // Rounding in the means leaves residue on constant data.
  double total_sq = 0;
  for (const auto& g : groups)
    for (double x : g) total_sq += x * x;
  const double noise = 1e-12 * total_sq;
  if (t.ss_between <= noise) t.ss_between = 0;
  if (t.ss_within <= noise) t.ss_within = 0;
  if (t.ss_within == 0) {
    t.f_stat = t.ss_between == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    t.f_stat = (t.ss_between / static_cast<double>(t.df_between)) /
               (t.ss_within / static_cast<double>(t.df_within));
  }
  return t;
}

std::array<std::vector<double>, 3> interaction_groups(const resonance::ResonanceMatrix& matrix,
                                                      const LabelMap& labels) {
  const std::size_t n = matrix.size();
  std::vector<UserLabel> aligned(n, UserLabel::Unknown);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto it = labels.find(matrix.user_ids()[i]); it != labels.end()) aligned[i] = it->second;
  }
  std::array<std::vector<double>, 3> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (aligned[i] == UserLabel::Unknown) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (aligned[j] == UserLabel::Unknown) continue;
      const int bots = (aligned[i] == UserLabel::Bot) + (aligned[j] == UserLabel::Bot);
      const auto type = bots == 2 ? Interaction::BotBot
                        : bots == 1 ? Interaction::BotControl
                                    : Interaction::ControlControl;
      groups[static_cast<int>(type)].push_back(matrix.at(i, j));
    }
  }
  return groups;
}

InteractionAnova anova_interactions(const resonance::ResonanceMatrix& matrix,
                                    const LabelMap& labels, std::size_t permutations,
                                    std::uint64_t seed, unsigned workers) {
  // Users with a known label, in matrix order.
  std::vector<std::size_t> users;
  std::vector<bool> is_bot;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    auto it = labels.find(matrix.user_ids()[i]);
    if (it == labels.end() || it->second == UserLabel::Unknown) continue;
    users.push_back(i);
    is_bot.push_back(it->second == UserLabel::Bot);
  }
  std::size_t bots = 0;
  for (bool b : is_bot) bots += b;
  const std::size_t controls = users.size() - bots;
  if (bots < 2 || controls < 2) {
    throw InvalidArgument(fmt::format(
        "ANOVA needs at least 2 bots and 2 controls, got {} and {}", bots, controls));
  }

  const auto groups = interaction_groups(matrix, labels);
  InteractionAnova result;
  result.permutations = permutations;
  result.seed = seed;
  for (int g = 0; g < 3; ++g) {
    result.group_sizes[g] = groups[g].size();
    double sum = 0;
    for (double x : groups[g]) sum += x;
    result.group_means[g] = sum / static_cast<double>(groups[g].size());
  }
  result.f_stat = one_way_anova(groups).f_stat;

  // The pooled sum and sum of squares are permutation invariant, and so are
  // the group sizes; only the bot-bot and control-control sums move.
  const std::size_t k = users.size();
  std::vector<double> sub(k * k);
  double total_sum = 0;
  double total_sq = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double x = matrix.at(users[a], users[b]);
      sub[a * k + b] = x;
      if (a < b) {
        total_sum += x;
        total_sq += x * x;
      }
    }
  }
  const std::size_t total_n = k * (k - 1) / 2;
  const std::array<std::size_t, 3> sizes = result.group_sizes;

  auto f_for = [&](const std::vector<bool>& bot) {
    std::array<double, 3> sums{};
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        sums[2 - (bot[a] + bot[b])] += sub[a * k + b];
      }
    }
    return f_from_sums(sums, sizes, total_sum, total_sq, total_n);
  };
  const double observed = f_for(is_bot);

  std::vector<char> exceeds(permutations, 0);
  const double slack = 1e-12 * std::max(1.0, std::abs(observed));
  parallel_for(permutations, workers, [&](std::size_t p) {
    Rng rng(seed, p);
    std::vector<bool> shuffled = is_bot;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      const std::size_t j = rng.below(i);
      const bool tmp = shuffled[i - 1];
      shuffled[i - 1] = shuffled[j];
      shuffled[j] = tmp;
    }
    const double f = f_for(shuffled);
    exceeds[p] = std::isinf(observed) ? std::isinf(f) : f >= observed - slack;
  });
  std::size_t count = 0;
  for (char e : exceeds) count += e;
  result.p_value = static_cast<double>(count + 1) / static_cast<double>(permutations + 1);
  return result;
}

}  // namespace crabot::eval
