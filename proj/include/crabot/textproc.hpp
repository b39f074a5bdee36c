#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace crabot::textproc {

enum class PosTag { Noun, Adj, Verb, Other };

std::string_view tag_name(PosTag tag);
PosTag parse_tag(std::string_view name);

struct Token {
  std::string surface;  // whitespace-delimited token as written
  std::string form;     // case-folded, punctuation removed
  std::string lemma;
  PosTag pos = PosTag::Other;
};

struct NounPhrase {
  std::vector<std::string> words;  // lemmas; the last one was tagged NOUN

  friend bool operator==(const NounPhrase&, const NounPhrase&) = default;
};

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  // `form` is non-empty, lower-case and punctuation-free; so is the result.
  virtual std::string lemmatize(std::string_view form) const = 0;
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual PosTag tag(const Token& token) const = 0;
};

// Suffix-rule lemmatizer driven by a plain-text table (data/lemma_rules.txt):
//
//   keep <word>                         returned unchanged
//   irregular <form> <lemma>            whole-word replacement
//   suffix <suffix> <replacement> <min_stem> [undouble]
//
// A replacement of "-" means the empty string. Suffix rules are tried in file
// order and the first one whose suffix matches with at least min_stem
// characters left in front of it is applied; `undouble` then drops the last
// letter of a stem ending in a doubled consonant other than l, s or z. The
// whole procedure repeats until the word stops changing, so every lemma is a
// fixed point of the lemmatizer.
class RuleLemmatizer final : public Lemmatizer {
 public:
  static RuleLemmatizer from_table(std::string_view table);
  static std::shared_ptr<const RuleLemmatizer> standard();

  std::string lemmatize(std::string_view form) const override;

 private:
  struct SuffixRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem = 0;
    bool undouble = false;
  };

  std::vector<std::string> keep_;  // sorted
  std::unordered_map<std::string, std::string> irregular_;
  std::vector<SuffixRule> suffixes_;
};

// Lexicon + suffix tagger driven by data/tagger_lexicon.txt:
//
//   word <word> <TAG>
//   suffix <suffix> <TAG> <min_stem>
//
// Lookup order: word entry for the form, word entry for the lemma, suffix rules
// against the lemma, suffix rules against the form, then NOUN.
class LexiconTagger final : public Tagger {
 public:
  static LexiconTagger from_table(std::string_view table);
  static std::shared_ptr<const LexiconTagger> standard();

  PosTag tag(const Token& token) const override;

 private:
  struct SuffixRule {
    std::string suffix;
    PosTag tag;
    std::size_t min_stem = 0;
  };
  const SuffixRule* match_suffix(std::string_view word) const;

  std::unordered_map<std::string, PosTag> words_;
  std::vector<SuffixRule> suffixes_;
};

// Text of the shipped tables, embedded at build time.
std::string_view default_lemma_rules();
std::string_view default_tagger_lexicon();

// True for tokens with an http:// or https:// scheme, a www. prefix, or the
// t.co shortener, ignoring leading punctuation and case.
bool is_url(std::string_view token);

// Splits on whitespace, drops URLs, strips punctuation, folds ASCII case and
// lemmatizes. Tokens left empty are dropped.
std::vector<Token> preprocess(std::string_view text, const Lemmatizer& lemmatizer);
std::vector<Token> preprocess(std::string_view text);

std::vector<Token> pos_tag(std::vector<Token> tokens, const Tagger& tagger);
std::vector<Token> pos_tag(std::vector<Token> tokens);

// Maximal runs of ADJ/NOUN, trailing adjectives trimmed; runs without a noun
// are discarded.
std::vector<NounPhrase> extract_noun_phrases(std::span<const Token> tagged);

// Bundles a lemmatizer and tagger for whole-user processing.
class TextProcessor {
 public:
  TextProcessor();
  TextProcessor(std::shared_ptr<const Lemmatizer> lemmatizer,
                std::shared_ptr<const Tagger> tagger);

  std::vector<NounPhrase> phrases(std::string_view text) const;

  // Each tweet is processed on its own, so no phrase spans two tweets; the
  // per-tweet phrase lists are concatenated in tweet order.
  std::vector<NounPhrase> user_phrases(std::span<const std::string> texts) const;

 private:
  std::shared_ptr<const Lemmatizer> lemmatizer_;
  std::shared_ptr<const Tagger> tagger_;
};

}  // namespace crabot::textproc
