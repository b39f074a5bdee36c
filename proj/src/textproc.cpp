#include "crabot/textproc.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

#include "crabot/error.hpp"

namespace crabot::textproc {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
         (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
}

// Length of a UTF-8 punctuation sequence starting at s[i], or 0. Covers the
// Latin-1 punctuation range U+00A1..U+00BF and General Punctuation
// U+2000..U+206F (curly quotes, dashes, ellipsis, zero-width marks).
std::size_t unicode_punct_length(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 == 0xC2 && i + 1 < s.size()) {
    const auto b1 = static_cast<unsigned char>(s[i + 1]);
    if (b1 >= 0xA1 && b1 <= 0xBF) return 2;
  }
  if (b0 == 0xE2 && i + 2 < s.size()) {
    const auto b1 = static_cast<unsigned char>(s[i + 1]);
    if (b1 == 0x80 || b1 == 0x81) {
      const unsigned code = ((b1 & 0x3Fu) << 6) | (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
      // b1 0x80 covers U+2000..U+203F, 0x81 U+2040..U+207F.
      if (b1 == 0x80 || code <= 0x6F) return 3;
    }
  }
  return 0;
}

char fold(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::string normalize(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size();) {
    const auto c = static_cast<unsigned char>(token[i]);
    if (is_ascii_punct(c)) {
      ++i;
      continue;
    }
    if (const std::size_t skip = unicode_punct_length(token, i)) {
      i += skip;
      continue;
    }
    out.push_back(fold(c));
    ++i;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) parts.push_back(text.substr(start, i - start));
  }
  return parts;
}

struct TableLine {
  std::size_t number;
  std::vector<std::string> fields;
};

std::vector<TableLine> table_lines(std::string_view table) {
  std::vector<TableLine> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= table.size()) {
    std::size_t end = table.find('\n', pos);
    if (end == std::string_view::npos) end = table.size();
    std::string_view line = table.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto parts = split_whitespace(line);
    if (parts.empty()) continue;
    lines.push_back({number, {parts.begin(), parts.end()}});
  }
  return lines;
}

[[noreturn]] void table_error(const TableLine& line, std::string_view what) {
  throw DataError(fmt::format("rule table line {}: {}", line.number, what));
}

void require_fields(const TableLine& line, std::size_t min, std::size_t max) {
  if (line.fields.size() < min || line.fields.size() > max) {
    table_error(line, fmt::format("expected {} to {} fields", min, max));
  }
}

std::string table_word(const TableLine& line, std::size_t index) {
  const std::string& word = line.fields[index];
  if (normalize(word) != word) {
    table_error(line, fmt::format("\"{}\" is not lower-case and punctuation-free", word));
  }
  return word;
}

std::size_t table_count(const TableLine& line, std::size_t index) {
  const std::string& text = line.fields[index];
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    table_error(line, fmt::format("\"{}\" is not a non-negative integer", text));
  }
  return value;
}

bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() >= suffix.size() &&
         word.substr(word.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view tag_name(PosTag tag) {
  switch (tag) {
    case PosTag::Noun:
      return "NOUN";
    case PosTag::Adj:
      return "ADJ";
    case PosTag::Verb:
      return "VERB";
    case PosTag::Other:
      break;
  }
  return "OTHER";
}

PosTag parse_tag(std::string_view name) {
  if (name == "NOUN") return PosTag::Noun;
  if (name == "ADJ") return PosTag::Adj;
  if (name == "VERB") return PosTag::Verb;
  if (name == "OTHER") return PosTag::Other;
  throw DataError(fmt::format("unknown tag \"{}\"", name));
}

RuleLemmatizer RuleLemmatizer::from_table(std::string_view table) {
  RuleLemmatizer lemmatizer;
  for (const auto& line : table_lines(table)) {
    const std::string& kind = line.fields[0];
    if (kind == "keep") {
      require_fields(line, 2, 2);
      lemmatizer.keep_.push_back(table_word(line, 1));
    } else if (kind == "irregular") {
      require_fields(line, 3, 3);
      auto form = table_word(line, 1);
      auto lemma = table_word(line, 2);
      if (!lemmatizer.irregular_.emplace(std::move(form), std::move(lemma)).second) {
        table_error(line, "duplicate irregular form");
      }
    } else if (kind == "suffix") {
      require_fields(line, 4, 5);
      SuffixRule rule;
      rule.suffix = table_word(line, 1);
      rule.replacement = line.fields[2] == "-" ? std::string() : table_word(line, 2);
      rule.min_stem = table_count(line, 3);
      if (line.fields.size() == 5) {
        if (line.fields[4] != "undouble") table_error(line, "unknown rule flag");
        rule.undouble = true;
      }
      if (rule.suffix.empty()) table_error(line, "empty suffix");
      if (rule.min_stem + rule.replacement.size() == 0) {
        table_error(line, "rule could produce an empty lemma");
      }
      lemmatizer.suffixes_.push_back(std::move(rule));
    } else {
      table_error(line, fmt::format("unknown directive \"{}\"", kind));
    }
  }
  std::sort(lemmatizer.keep_.begin(), lemmatizer.keep_.end());
  return lemmatizer;
}

std::shared_ptr<const RuleLemmatizer> RuleLemmatizer::standard() {
  static const auto instance =
      std::make_shared<const RuleLemmatizer>(from_table(default_lemma_rules()));
  return instance;
}

std::string RuleLemmatizer::lemmatize(std::string_view form) const {
  std::string word(form);
  // Every rule either shortens the word or maps it through the irregular
  // table, so a handful of rounds always suffices; the cap guards against
  // cyclic irregular entries.
  for (int round = 0; round < 16; ++round) {
    if (std::binary_search(keep_.begin(), keep_.end(), word)) break;
    if (auto it = irregular_.find(word); it != irregular_.end()) {
      if (it->second == word) break;
      word = it->second;
      continue;
    }
    const SuffixRule* applied = nullptr;
    for (const auto& rule : suffixes_) {
      if (ends_with(word, rule.suffix) &&
          word.size() - rule.suffix.size() >= rule.min_stem) {
        applied = &rule;
        break;
      }
    }
    if (!applied) break;
    std::string next = word.substr(0, word.size() - applied->suffix.size());
    if (applied->undouble && next.size() >= 2) {
      const char last = next.back();
      const char prev = next[next.size() - 2];
      const bool consonant = last >= 'a' && last <= 'z' &&
                             std::string_view("aeiou").find(last) == std::string_view::npos;
      if (last == prev && consonant && last != 'l' && last != 's' && last != 'z') {
        next.pop_back();
      }
    }
    next += applied->replacement;
    if (next == word || next.empty()) break;
    word = std::move(next);
  }
  return word;
}

LexiconTagger LexiconTagger::from_table(std::string_view table) {
  LexiconTagger tagger;
  for (const auto& line : table_lines(table)) {
    const std::string& kind = line.fields[0];
    if (kind == "word") {
      require_fields(line, 3, 3);
      PosTag tag;
      try {
        tag = parse_tag(line.fields[2]);
      } catch (const InvalidArgument& e) {
        table_error(line, e.what());
      }
      if (!tagger.words_.emplace(table_word(line, 1), tag).second) {
        table_error(line, "duplicate word entry");
      }
    } else if (kind == "suffix") {
      require_fields(line, 4, 4);
      SuffixRule rule;
      rule.suffix = table_word(line, 1);
      try {
        rule.tag = parse_tag(line.fields[2]);
      } catch (const InvalidArgument& e) {
        table_error(line, e.what());
      }
      rule.min_stem = table_count(line, 3);
      tagger.suffixes_.push_back(std::move(rule));
    } else {
      table_error(line, fmt::format("unknown directive \"{}\"", kind));
    }
  }
  return tagger;
}

std::shared_ptr<const LexiconTagger> LexiconTagger::standard() {
  static const auto instance =
      std::make_shared<const LexiconTagger>(from_table(default_tagger_lexicon()));
  return instance;
}

const LexiconTagger::SuffixRule* LexiconTagger::match_suffix(std::string_view word) const {
  for (const auto& rule : suffixes_) {
    if (ends_with(word, rule.suffix) && word.size() - rule.suffix.size() >= rule.min_stem) {
      return &rule;
    }
  }
  return nullptr;
}

PosTag LexiconTagger::tag(const Token& token) const {
  if (auto it = words_.find(token.form); it != words_.end()) return it->second;
  if (auto it = words_.find(token.lemma); it != words_.end()) return it->second;
  if (const auto* rule = match_suffix(token.lemma)) return rule->tag;
  if (const auto* rule = match_suffix(token.form)) return rule->tag;
  return PosTag::Noun;
}

bool is_url(std::string_view token) {
  std::size_t start = 0;
  while (start < token.size() && is_ascii_punct(static_cast<unsigned char>(token[start]))) {
    ++start;
  }
  std::string head;
  for (std::size_t i = start; i < token.size() && head.size() < 8; ++i) {
    head.push_back(fold(static_cast<unsigned char>(token[i])));
  }
  std::string_view h(head);
  return h.starts_with("http://") || h.starts_with("https://") ||
         h.starts_with("www.") || h.starts_with("t.co/");
}

std::vector<Token> preprocess(std::string_view text, const Lemmatizer& lemmatizer) {
  std::vector<Token> tokens;
  for (std::string_view raw : split_whitespace(text)) {
    if (is_url(raw)) continue;
    std::string form = normalize(raw);
    if (form.empty()) continue;
    Token token;
    token.surface = std::string(raw);
    token.lemma = lemmatizer.lemmatize(form);
    token.form = std::move(form);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<Token> preprocess(std::string_view text) {
  return preprocess(text, *RuleLemmatizer::standard());
}

std::vector<Token> pos_tag(std::vector<Token> tokens, const Tagger& tagger) {
  for (auto& token : tokens) token.pos = tagger.tag(token);
  return tokens;
}

std::vector<Token> pos_tag(std::vector<Token> tokens) {
  return pos_tag(std::move(tokens), *LexiconTagger::standard());
}

std::vector<NounPhrase> extract_noun_phrases(std::span<const Token> tagged) {
  std::vector<NounPhrase> phrases;
  auto in_phrase = [](PosTag t) { return t == PosTag::Adj || t == PosTag::Noun; };
  std::size_t i = 0;
  while (i < tagged.size()) {
    if (!in_phrase(tagged[i].pos)) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < tagged.size() && in_phrase(tagged[end].pos)) ++end;
    // Trim trailing adjectives so the phrase ends in a noun.
    std::size_t last = end;
    while (last > i && tagged[last - 1].pos != PosTag::Noun) --last;
    if (last > i) {
      NounPhrase phrase;
      for (std::size_t k = i; k < last; ++k) phrase.words.push_back(tagged[k].lemma);
      phrases.push_back(std::move(phrase));
    }
    i = end;
  }
  return phrases;
}

TextProcessor::TextProcessor()
    : TextProcessor(RuleLemmatizer::standard(), LexiconTagger::standard()) {}

TextProcessor::TextProcessor(std::shared_ptr<const Lemmatizer> lemmatizer,
                             std::shared_ptr<const Tagger> tagger)
    : lemmatizer_(std::move(lemmatizer)), tagger_(std::move(tagger)) {
  if (!lemmatizer_ || !tagger_) throw InvalidArgument("TextProcessor needs a lemmatizer and a tagger");
}

std::vector<NounPhrase> TextProcessor::phrases(std::string_view text) const {
  auto tokens = pos_tag(preprocess(text, *lemmatizer_), *tagger_);
  return extract_noun_phrases(tokens);
}

std::vector<NounPhrase> TextProcessor::user_phrases(std::span<const std::string> texts) const {
  std::vector<NounPhrase> all;
  for (const auto& text : texts) {
    auto phrases = this->phrases(text);
    all.insert(all.end(), std::make_move_iterator(phrases.begin()),
               std::make_move_iterator(phrases.end()));
  }
  return all;
}

}  // namespace crabot::textproc
