#pragma once

#include <cstdint>

#include "crabot/ingest.hpp"

namespace crabot::eval {

struct SyntheticParams {
  std::size_t n_bots = 40;
  std::size_t n_controls = 40;
  std::size_t bot_vocab = 30;
  std::size_t control_vocab = 3000;
  std::size_t phrases_per_user = 60;
  std::uint64_t seed = 1;

  // Everyday vocabulary shared by controls (never by bots). Each control word
  // is drawn from it with probability control_common_share, otherwise from the
  // control's own slice. With a share of 0 the slices are fully disjoint and
  // controls never resonate with each other.
  std::size_t common_vocab = 0;
  double control_common_share = 0.0;
};

// Bots draw every phrase word from one shared vocabulary of bot_vocab words.
// Control c draws from its own slice of control_vocab / n_controls words
// (plus the optional common vocabulary). Phrases have 2-4 words and tweets
// carry up to three phrases separated by "and". Words are synthetic tokens
// such as "b17" or "c2041" that the default text pipeline keeps verbatim and
// tags as nouns. Output depends only on the parameters.
Corpus generate_synthetic_corpus(const SyntheticParams& params);

}  // namespace crabot::eval
