#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace causekit {

/// One public message of one entity. entity_id doubles as the entity's
/// handle for self-mention detection.
struct RawMessage {
    std::string entity_id;
    std::string message_id;
    std::string text;
};

enum class TokenKind { Word, Hashtag, Mention, Url, Punct, RetweetMark, Marker };

enum class PosTag { Pron, Verb, Noun, Adj, Adv, Other };

struct Token {
    std::string surface;  // case-folded; hashtags keep '#', mentions keep '@'
    TokenKind kind = TokenKind::Word;
    PosTag pos = PosTag::Other;
    bool negated = false;
    bool capitalized = false;  // original surface started with A-Z
};

enum class PersonClass { First, Second, Third };

enum class Polarity { Pos, Neg, Neu };

struct AnnotatedMessage {
    RawMessage raw;
    std::vector<Token> tokens;
    bool is_retweet = false;
    bool mentions_self = false;
    bool retweet_of_self = false;
    std::map<PersonClass, int> person_markers;
    Polarity polarity = Polarity::Neu;
};

/// Deterministic social-media tokenizer: words are case-folded (apostrophes
/// stay inside contractions), hashtags and mentions keep their sigils, URLs
/// collapse to a single "<url>" token, a leading "RT" becomes a retweet mark,
/// and punctuation is isolated one character per token.
std::vector<Token> tokenize(const RawMessage& msg);
std::vector<Token> tokenize_text(std::string_view text);

/// Flags every WORD token in the scope of a negation cue (not/no/never/cannot
/// or an n't contraction): up to 3 following WORD tokens, stopping early at
/// punctuation or end of message.
void mark_negation(std::vector<Token>& tokens);

/// Counts pronoun matches against the fixed person lists and appends one
/// synthetic MARKER token ("first_person"/...) per match.
std::map<PersonClass, int> mark_persons(std::vector<Token>& tokens);

struct SelfInteractions {
    bool mentions_self = false;
    bool is_retweet = false;
    bool retweet_of_self = false;
};

/// Handle comparison is case-insensitive and ignores a leading '@'.
SelfInteractions detect_self_interactions(const std::vector<Token>& tokens,
                                          std::string_view entity_handle);

/// Lexicon + suffix tagger over the coarse 6-tag set. Only WORD tokens are
/// tagged; everything else stays OTHER.
void pos_tag(std::vector<Token>& tokens);

/// For every WORD token matching a keyword, collects up to `window` WORD
/// tokens on each side, skipping punctuation and other keyword matches.
std::vector<std::string> keyword_contexts(const std::vector<Token>& tokens,
                                          const std::set<std::string>& keywords,
                                          int window = 1);

/// Word-list file: UTF-8, one word per line, '#' starts a comment.
std::vector<std::string> load_word_list(std::istream& in);
std::vector<std::string> load_word_list_file(const std::string& path);

struct SentimentLexicon {
    std::set<std::string> positive;
    std::set<std::string> negative;

    static SentimentLexicon bundled();
    static SentimentLexicon load_files(const std::string& positive_path,
                                       const std::string& negative_path);
};

/// score = #positive - #negative over WORD tokens, negated tokens counting
/// for the opposite set. POS if score > 0, NEG if < 0, else NEU.
Polarity sentiment_polarity(const std::vector<Token>& tokens,
                            const SentimentLexicon& lexicon);

// Fixed cue lists (case-folded). Shipped under data/lexicons/ as well; the
// bundled copies here are what the annotator uses.
const std::set<std::string>& first_person_pronouns();
const std::set<std::string>& second_person_pronouns();
const std::set<std::string>& third_person_pronouns();
const std::set<std::string>& negation_cues();
const std::set<std::string>& verb_lexicon();

/// Runs the full annotation stack over a raw message. Immutable after
/// construction; safe for concurrent use.
class Annotator {
public:
    Annotator() : lexicon_(SentimentLexicon::bundled()) {}
    explicit Annotator(SentimentLexicon lexicon) : lexicon_(std::move(lexicon)) {}

    AnnotatedMessage annotate(const RawMessage& msg) const;

    const SentimentLexicon& lexicon() const { return lexicon_; }

private:
    SentimentLexicon lexicon_;
};

/// Token surfaces fed to embedding lookups: WORD and HASHTAG kinds only.
/// Synthetic markers and mentions never reach the table.
std::vector<std::string> embeddable_words(const AnnotatedMessage& msg);

const char* to_string(Polarity p);

}  // namespace causekit
