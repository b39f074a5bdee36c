#include <doctest.h>

#include <cmath>

#include "crabot/anova.hpp"
#include "crabot/cra_graph.hpp"
#include "crabot/error.hpp"
#include "crabot/random.hpp"
#include "crabot/resonance.hpp"
#include "crabot/synthetic.hpp"
#include "crabot/textproc.hpp"

using namespace crabot::eval;
using crabot::LabelMap;
using crabot::UserLabel;
using crabot::resonance::ResonanceMatrix;

namespace {

// Users 0..bots-1 are bots, the rest controls; off-diagonal values from fill(i, j).
template <typename Fill>
std::pair<ResonanceMatrix, LabelMap> labeled_matrix(std::size_t bots, std::size_t controls,
                                                    Fill fill) {
  std::vector<std::string> ids;
  LabelMap labels;
  for (std::size_t i = 0; i < bots + controls; ++i) {
    ids.push_back("u" + std::to_string(i));
    labels[ids.back()] = i < bots ? UserLabel::Bot : UserLabel::Control;
  }
  ResonanceMatrix m(ids);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) m.set(i, j, fill(i, j));
  return {m, labels};
}

}  // namespace

TEST_CASE("hand-computed one-way table") {
  // Means 1, 0, 0; grand mean 1/3; SSB = 3(2/3)^2 + 6(1/3)^2 = 2; SSW = 3 * 0.02 = 0.06.
  const std::vector<std::vector<double>> groups = {{1.1, 1.0, 0.9}, {0.1, 0.0, -0.1},
                                                   {0.1, 0.0, -0.1}};
  const auto t = one_way_anova(groups);
  CHECK(t.ss_between == doctest::Approx(2.0));
  CHECK(t.ss_within == doctest::Approx(0.06));
  CHECK(t.df_between == 2);
  CHECK(t.df_within == 6);
  CHECK(t.f_stat == doctest::Approx(100.0));
}

TEST_CASE("degenerate one-way tables") {
  const std::vector<std::vector<double>> same = {{2, 2}, {2, 2}, {2, 2}};
  CHECK(one_way_anova(same).f_stat == 0.0);
  const std::vector<std::vector<double>> split = {{1, 1}, {0, 0}};
  CHECK(std::isinf(one_way_anova(split).f_stat));
  const std::vector<std::vector<double>> one = {{1, 2}};
  CHECK_THROWS_AS(one_way_anova(one), crabot::InvalidArgument);
  const std::vector<std::vector<double>> empty = {{1, 2}, {}};
  CHECK_THROWS_AS(one_way_anova(empty), crabot::InvalidArgument);
  const std::vector<std::vector<double>> tiny = {{1}, {2}};
  CHECK_THROWS_AS(one_way_anova(tiny), crabot::InvalidArgument);
}

TEST_CASE("interaction grouping") {
  auto [m, labels] = labeled_matrix(2, 2, [](std::size_t i, std::size_t j) {
    return 0.1 * static_cast<double>(i + 1) + 0.01 * static_cast<double>(j);
  });
  labels["u9"] = UserLabel::Unknown;
  const auto groups = interaction_groups(m, labels);
  CHECK(groups[0] == std::vector<double>{m.at(0, 1)});
  CHECK(groups[1].size() == 4);
  CHECK(groups[2] == std::vector<double>{m.at(2, 3)});
}

TEST_CASE("constant resonance gives F = 0 and p = 1") {
  const auto [m, labels] = labeled_matrix(3, 3, [](auto, auto) { return 0.4; });
  const auto r = anova_interactions(m, labels, 200, 1, 2);
  CHECK(r.f_stat == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("clear bot cluster is significant") {
  crabot::Rng noise(2);
  std::vector<double> jitter(400);
  for (auto& x : jitter) x = 0.01 * noise.unit();
  const auto [m, labels] = labeled_matrix(6, 6, [&](std::size_t i, std::size_t j) {
    return (i < 6 && j < 6 ? 0.8 : 0.05) + jitter[i * 12 + j];
  });
  const auto r = anova_interactions(m, labels, 999, 7, 3);
  CHECK(r.group_means[0] > r.group_means[1]);
  CHECK(r.group_means[0] > r.group_means[2]);
  CHECK(r.group_sizes == std::array<std::size_t, 3>{15, 36, 15});
  CHECK(r.p_value < 0.01);
  CHECK(r.permutations == 999);
  CHECK(r.seed == 7);
}

TEST_CASE("permutation p-value is independent of worker count and seeded") {
  crabot::Rng rng(11);
  std::vector<double> values(100);
  for (auto& x : values) x = rng.unit();
  const auto [m, labels] =
      labeled_matrix(4, 5, [&](std::size_t i, std::size_t j) { return values[i * 9 + j]; });
  const auto a = anova_interactions(m, labels, 300, 5, 1);
  const auto b = anova_interactions(m, labels, 300, 5, 4);
  CHECK(a.p_value == b.p_value);
  CHECK(a.f_stat == b.f_stat);
  CHECK(a.p_value >= 1.0 / 301.0);
  CHECK(a.p_value <= 1.0);
}

TEST_CASE("p-values are calibrated under label-independent noise") {
  crabot::Rng rng(2024);
  int rejections = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> values(144);
    for (auto& x : values) x = rng.unit();
    const auto [m, labels] =
        labeled_matrix(6, 6, [&](std::size_t i, std::size_t j) { return values[i * 12 + j]; });
    rejections += anova_interactions(m, labels, 199, static_cast<std::uint64_t>(t), 0).p_value < 0.05;
  }
  const double rate = static_cast<double>(rejections) / trials;
  CHECK(rate >= 0.01);
  CHECK(rate <= 0.11);
}

TEST_CASE("ANOVA needs two users of each label") {
  const auto [m, labels] = labeled_matrix(1, 3, [](auto, auto) { return 0.2; });
  CHECK_THROWS_AS(anova_interactions(m, labels, 10), crabot::InvalidArgument);
}

TEST_CASE("synthetic corpus shows the bot-bot pattern") {
  SyntheticParams params;
  params.n_bots = 10;
  params.n_controls = 10;
  params.control_vocab = 600;
  params.phrases_per_user = 30;
  const auto corpus = generate_synthetic_corpus(params);
  const crabot::textproc::TextProcessor processor;
  std::vector<crabot::cra::DiscursiveGraph> graphs;
  std::vector<std::string> ids;
  for (const auto& u : corpus.users) {
    graphs.push_back(crabot::cra::analyze(processor.user_phrases(u.texts)));
    ids.push_back(u.user_id);
  }
  const auto m = crabot::resonance::resonance_matrix(graphs, ids);
  const auto r = anova_interactions(m, crabot::labels_of(corpus), 500, 1);
  CHECK(r.group_means[0] > r.group_means[1]);
  CHECK(r.group_means[0] > r.group_means[2]);
  CHECK(r.p_value < 0.05);
}
