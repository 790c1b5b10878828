#include "causekit/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "causekit/common.hpp"

namespace causekit {

namespace {

// Letters, digits, and non-ASCII bytes form words. '_' is deliberately not a
// word character in plain text, which keeps synthetic feature names such as
// "_NEG_organic" or "first_person" out of reach of raw-text n-grams.
bool is_word_char(unsigned char c) {
    return std::isalnum(c) || c >= 0x80;
}

// Mention/hashtag bodies follow handle rules: alphanumerics plus underscore.
bool is_handle_char(unsigned char c) {
    return std::isalnum(c) || c == '_';
}

bool is_url_chunk(std::string_view chunk) {
    std::string folded = fold_ascii(chunk.substr(0, 8));
    std::string_view f = folded;
    return f.starts_with("http://") || f.starts_with("https://") || f.starts_with("www.");
}

void tokenize_chunk(std::string_view chunk, bool message_start, std::vector<Token>& out) {
    if (message_start && chunk.size() == 2 && fold_ascii(chunk) == "rt") {
        Token t;
        t.surface = "rt";
        t.kind = TokenKind::RetweetMark;
        out.push_back(std::move(t));
        return;
    }
    if (is_url_chunk(chunk)) {
        Token t;
        t.surface = "<url>";
        t.kind = TokenKind::Url;
        out.push_back(std::move(t));
        return;
    }
    std::size_t i = 0;
    while (i < chunk.size()) {
        unsigned char c = static_cast<unsigned char>(chunk[i]);
        if ((c == '@' || c == '#') && i + 1 < chunk.size() &&
            is_handle_char(static_cast<unsigned char>(chunk[i + 1]))) {
            std::size_t j = i + 1;
            while (j < chunk.size() && is_handle_char(static_cast<unsigned char>(chunk[j]))) ++j;
            Token t;
            t.surface = fold_ascii(chunk.substr(i, j - i));
            t.kind = (c == '@') ? TokenKind::Mention : TokenKind::Hashtag;
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t j = i + 1;
            while (j < chunk.size()) {
                unsigned char d = static_cast<unsigned char>(chunk[j]);
                if (is_word_char(d)) {
                    ++j;
                } else if (d == '\'' && j + 1 < chunk.size() &&
                           is_word_char(static_cast<unsigned char>(chunk[j + 1]))) {
                    j += 2;  // apostrophe inside a contraction
                } else {
                    break;
                }
            }
            Token t;
            t.surface = fold_ascii(chunk.substr(i, j - i));
            t.kind = TokenKind::Word;
            t.capitalized = (chunk[i] >= 'A' && chunk[i] <= 'Z');
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        Token t;
        t.surface = std::string(1, static_cast<char>(c));
        t.kind = TokenKind::Punct;
        out.push_back(std::move(t));
        ++i;
    }
}

}  // namespace

std::vector<Token> tokenize_text(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    bool first = true;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        tokenize_chunk(text.substr(i, j - i), first, out);
        first = false;
        i = j;
    }
    return out;
}

std::vector<Token> tokenize(const RawMessage& msg) {
    return tokenize_text(msg.text);
}

namespace {

bool is_negation_cue(const Token& t) {
    if (t.kind != TokenKind::Word) return false;
    if (negation_cues().count(t.surface)) return true;
    return t.surface.size() >= 4 && t.surface.ends_with("n't");
}

}  // namespace

void mark_negation(std::vector<Token>& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!is_negation_cue(tokens[i])) continue;
        int marked = 0;
        for (std::size_t j = i + 1; j < tokens.size() && marked < 3; ++j) {
            if (tokens[j].kind == TokenKind::Punct) break;
            if (tokens[j].kind == TokenKind::Word) {
                tokens[j].negated = true;
                ++marked;
            }
        }
    }
}

std::map<PersonClass, int> mark_persons(std::vector<Token>& tokens) {
    std::map<PersonClass, int> counts;
    std::vector<Token> markers;
    for (const auto& t : tokens) {
        if (t.kind != TokenKind::Word) continue;
        PersonClass cls;
        if (first_person_pronouns().count(t.surface)) {
            cls = PersonClass::First;
        } else if (second_person_pronouns().count(t.surface)) {
            cls = PersonClass::Second;
        } else if (third_person_pronouns().count(t.surface)) {
            cls = PersonClass::Third;
        } else {
            continue;
        }
        ++counts[cls];
        Token m;
        m.surface = cls == PersonClass::First    ? "first_person"
                    : cls == PersonClass::Second ? "second_person"
                                                 : "third_person";
        m.kind = TokenKind::Marker;
        markers.push_back(std::move(m));
    }
    tokens.insert(tokens.end(), markers.begin(), markers.end());
    return counts;
}

SelfInteractions detect_self_interactions(const std::vector<Token>& tokens,
                                          std::string_view entity_handle) {
    std::string handle = fold_ascii(entity_handle);
    if (!handle.empty() && handle.front() == '@') handle.erase(handle.begin());
    if (handle.empty()) {
        throw std::invalid_argument("detect_self_interactions: empty entity handle");
    }
    SelfInteractions s;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::Mention && t.surface.size() > 1 &&
            t.surface.compare(1, std::string::npos, handle) == 0) {
            s.mentions_self = true;
            break;
        }
    }
    s.is_retweet = !tokens.empty() && tokens.front().kind == TokenKind::RetweetMark;
    s.retweet_of_self = s.mentions_self && s.is_retweet;
    return s;
}

void pos_tag(std::vector<Token>& tokens) {
    for (auto& t : tokens) {
        if (t.kind != TokenKind::Word) {
            t.pos = PosTag::Other;
            continue;
        }
        const std::string& w = t.surface;
        if (first_person_pronouns().count(w) || second_person_pronouns().count(w) ||
            third_person_pronouns().count(w)) {
            t.pos = PosTag::Pron;
        } else if (verb_lexicon().count(w)) {
            t.pos = PosTag::Verb;
        } else if (w.size() >= 4 && w.ends_with("ly")) {
            t.pos = PosTag::Adv;
        } else if (w.size() >= 5 && (w.ends_with("ous") || w.ends_with("ful"))) {
            t.pos = PosTag::Adj;
        } else if (w.size() >= 4 && (w.ends_with("ed") || w.ends_with("ing"))) {
            t.pos = PosTag::Verb;
        } else if (w.size() >= 3 && w.back() == 's' &&
                   verb_lexicon().count(w.substr(0, w.size() - 1))) {
            t.pos = PosTag::Verb;
        } else if (t.capitalized) {
            t.pos = PosTag::Noun;
        } else {
            t.pos = PosTag::Other;
        }
    }
}

std::vector<std::string> keyword_contexts(const std::vector<Token>& tokens,
                                          const std::set<std::string>& keywords,
                                          int window) {
    if (window < 1) throw std::invalid_argument("keyword_contexts: window < 1");
    auto is_kw = [&](const Token& t) {
        return t.kind == TokenKind::Word && keywords.count(t.surface) > 0;
    };
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!is_kw(tokens[i])) continue;
        std::vector<std::string> left;
        int got = 0;
        for (std::size_t j = i; j > 0 && got < window;) {
            --j;
            if (tokens[j].kind != TokenKind::Word || is_kw(tokens[j])) continue;
            left.push_back(tokens[j].surface);
            ++got;
        }
        // collected nearest-first; emit in textual order
        out.insert(out.end(), left.rbegin(), left.rend());
        got = 0;
        for (std::size_t j = i + 1; j < tokens.size() && got < window; ++j) {
            if (tokens[j].kind != TokenKind::Word || is_kw(tokens[j])) continue;
            out.push_back(tokens[j].surface);
            ++got;
        }
    }
    return out;
}

std::vector<std::string> load_word_list(std::istream& in) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        std::size_t b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r\n");
        words.push_back(fold_ascii(std::string_view(line).substr(b, e - b + 1)));
    }
    return words;
}

std::vector<std::string> load_word_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word list: " + path);
    return load_word_list(in);
}

SentimentLexicon SentimentLexicon::load_files(const std::string& positive_path,
                                              const std::string& negative_path) {
    SentimentLexicon lex;
    for (auto& w : load_word_list_file(positive_path)) lex.positive.insert(std::move(w));
    for (auto& w : load_word_list_file(negative_path)) lex.negative.insert(std::move(w));
    return lex;
}

Polarity sentiment_polarity(const std::vector<Token>& tokens,
                            const SentimentLexicon& lexicon) {
    int score = 0;
    for (const auto& t : tokens) {
        if (t.kind != TokenKind::Word) continue;
        if (lexicon.positive.count(t.surface)) {
            score += t.negated ? -1 : 1;
        } else if (lexicon.negative.count(t.surface)) {
            score += t.negated ? 1 : -1;
        }
    }
    if (score > 0) return Polarity::Pos;
    if (score < 0) return Polarity::Neg;
    return Polarity::Neu;
}

AnnotatedMessage Annotator::annotate(const RawMessage& msg) const {
    AnnotatedMessage a;
    a.raw = msg;
    a.tokens = tokenize(msg);
    mark_negation(a.tokens);
    a.person_markers = mark_persons(a.tokens);
    auto s = detect_self_interactions(a.tokens, msg.entity_id);
    a.mentions_self = s.mentions_self;
    a.is_retweet = s.is_retweet;
    a.retweet_of_self = s.retweet_of_self;
    pos_tag(a.tokens);
    a.polarity = sentiment_polarity(a.tokens, lexicon_);
    return a;
}

std::vector<std::string> embeddable_words(const AnnotatedMessage& msg) {
    std::vector<std::string> out;
    for (const auto& t : msg.tokens) {
        if (t.kind == TokenKind::Word || t.kind == TokenKind::Hashtag) {
            out.push_back(t.surface);
        }
    }
    return out;
}

const char* to_string(Polarity p) {
    switch (p) {
        case Polarity::Pos: return "positive";
        case Polarity::Neg: return "negative";
        default: return "neutral";
    }
}

}  // namespace causekit
