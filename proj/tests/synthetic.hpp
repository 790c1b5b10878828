// Test-only fixture builders shared by the unit and acceptance suites.
#pragma once

#include <string>
#include <vector>

#include "causekit/rng.hpp"
#include "causekit/textproc.hpp"

namespace causekit::testfix {

struct SyntheticCorpus {
    std::vector<RawMessage> messages;
    std::vector<int> labels4;  // aligned 4-point labels
};

// 100 messages over four disjoint 25-word pools, one pool per label. Labels
// {0,1} share no words with {2,3}, so a bag-of-words support classifier can
// separate them perfectly; likewise label 2 vs 3 for the commitment stage.
inline SyntheticCorpus make_separable_corpus(std::uint64_t seed,
                                             int messages_per_label = 25) {
    const char* prefixes[4] = {"alpha", "bravo", "carol", "delta"};
    Rng rng(seed);
    SyntheticCorpus corpus;
    int msg_id = 0;
    for (int label = 0; label < 4; ++label) {
        for (int i = 0; i < messages_per_label; ++i) {
            std::string text;
            const std::size_t len = 5 + rng.next_index(4);
            for (std::size_t w = 0; w < len; ++w) {
                if (!text.empty()) text += ' ';
                text += prefixes[label] + std::to_string(rng.next_index(25));
            }
            corpus.messages.push_back({"entity" + std::to_string(msg_id % 5),
                                       "m" + std::to_string(msg_id), text});
            corpus.labels4.push_back(label);
            ++msg_id;
        }
    }
    return corpus;
}

inline std::vector<AnnotatedMessage> annotate_corpus(const std::vector<RawMessage>& msgs) {
    Annotator annotator;
    std::vector<AnnotatedMessage> out;
    out.reserve(msgs.size());
    for (const auto& m : msgs) out.push_back(annotator.annotate(m));
    return out;
}

inline AnnotatedMessage annotate_one(const std::string& entity, const std::string& id,
                                     const std::string& text) {
    return Annotator().annotate(RawMessage{entity, id, text});
}

}  // namespace causekit::testfix
