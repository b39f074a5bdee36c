#include "crabot/synthetic.hpp"

#include <fmt/format.h>

#include "crabot/error.hpp"
#include "crabot/random.hpp"

namespace crabot::eval {
namespace {

constexpr std::size_t kPhrasesPerTweet = 3;
constexpr std::size_t kMinPhraseWords = 2;
constexpr std::size_t kMaxPhraseWords = 4;

template <typename DrawWord>
std::vector<std::string> make_tweets(std::size_t phrase_count, Rng& rng, DrawWord&& draw) {
  std::vector<std::string> tweets;
  std::string tweet;
  for (std::size_t p = 0; p < phrase_count; ++p) {
    if (p % kPhrasesPerTweet == 0 && !tweet.empty()) {
      tweets.push_back(std::move(tweet));
      tweet.clear();
    }
    if (!tweet.empty()) tweet += " and ";
    const std::size_t words =
        kMinPhraseWords + rng.below(kMaxPhraseWords - kMinPhraseWords + 1);
    for (std::size_t w = 0; w < words; ++w) {
      if (w) tweet.push_back(' ');
      tweet += draw();
    }
  }
  if (!tweet.empty()) tweets.push_back(std::move(tweet));
  return tweets;
}

}  // namespace

Corpus generate_synthetic_corpus(const SyntheticParams& params) {
  if (params.n_bots == 0 || params.n_controls == 0 || params.bot_vocab == 0 ||
      params.control_vocab == 0 || params.phrases_per_user == 0) {
    throw InvalidArgument("synthetic corpus counts must all be positive");
  }
  const std::size_t slice = params.control_vocab / params.n_controls;
  if (slice == 0) {
    throw InvalidArgument(fmt::format("control_vocab {} is smaller than n_controls {}",
                                      params.control_vocab, params.n_controls));
  }
  if (!(params.control_common_share >= 0.0 && params.control_common_share <= 1.0)) {
    throw InvalidArgument("control_common_share must lie in [0, 1]");
  }
  if (params.control_common_share > 0.0 && params.common_vocab == 0) {
    throw InvalidArgument("control_common_share > 0 needs a non-empty common_vocab");
  }

  Rng rng(params.seed);
  Corpus corpus;
  const int bot_width = static_cast<int>(std::to_string(params.n_bots - 1).size());
  const int control_width = static_cast<int>(std::to_string(params.n_controls - 1).size());

  for (std::size_t b = 0; b < params.n_bots; ++b) {
    UserRecord user{fmt::format("bot_{:0{}}", b, bot_width), UserLabel::Bot, {}};
    user.texts = make_tweets(params.phrases_per_user, rng, [&] {
      return fmt::format("b{}", rng.below(params.bot_vocab));
    });
    corpus.users.push_back(std::move(user));
  }
  for (std::size_t c = 0; c < params.n_controls; ++c) {
    UserRecord user{fmt::format("control_{:0{}}", c, control_width), UserLabel::Control, {}};
    user.texts = make_tweets(params.phrases_per_user, rng, [&] {
      if (params.control_common_share > 0.0 && rng.unit() < params.control_common_share) {
        return fmt::format("g{}", rng.below(params.common_vocab));
      }
      return fmt::format("c{}", c * slice + rng.below(slice));
    });
    corpus.users.push_back(std::move(user));
  }
  return corpus;
}

}  // namespace crabot::eval
