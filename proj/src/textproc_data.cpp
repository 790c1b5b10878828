// Bundled word lists. The same lists are shipped under data/lexicons/ for
// inspection and replacement; a test asserts the two copies stay in sync.

#include "causekit/textproc.hpp"

namespace causekit {

const std::set<std::string>& first_person_pronouns() {
    static const std::set<std::string> words = {
        "i", "we", "me", "us", "my", "our", "mine", "ours",
        "i've", "we've", "i'm", "we're",
    };
    return words;
}

const std::set<std::string>& second_person_pronouns() {
    static const std::set<std::string> words = {
        "you", "your", "yours", "you're",
    };
    return words;
}

const std::set<std::string>& third_person_pronouns() {
    static const std::set<std::string> words = {
        "he", "she", "they", "him", "her", "them", "his", "hers", "their",
    };
    return words;
}

const std::set<std::string>& negation_cues() {
    // n't contractions are matched by suffix, not listed here.
    static const std::set<std::string> words = {"not", "no", "never", "cannot"};
    return words;
}

const std::set<std::string>& verb_lexicon() {
    static const std::set<std::string> words = {
        "am", "is", "are", "was", "were", "be", "been", "being",
        "have", "has", "had", "having", "do", "does", "did", "doing",
        "will", "would", "shall", "should", "can", "could", "may", "might", "must",
        "go", "goes", "going", "went", "gone", "get", "gets", "getting", "got",
        "make", "makes", "making", "made", "take", "takes", "taking", "took", "taken",
        "come", "comes", "coming", "came", "see", "sees", "seeing", "saw", "seen",
        "know", "knows", "knew", "known", "think", "thinks", "thinking", "thought",
        "say", "says", "saying", "said", "want", "wants", "wanted",
        "use", "uses", "using", "used", "find", "finds", "found",
        "give", "gives", "giving", "gave", "given", "tell", "tells", "told",
        "work", "works", "working", "worked", "call", "calls", "called",
        "try", "tries", "tried", "ask", "asks", "asked", "need", "needs", "needed",
        "feel", "feels", "felt", "become", "becomes", "became",
        "leave", "leaves", "left", "put", "puts", "mean", "means", "meant",
        "keep", "keeps", "kept", "let", "lets", "begin", "begins", "began", "begun",
        "seem", "seems", "seemed", "help", "helps", "helped",
        "show", "shows", "showed", "shown", "hear", "hears", "heard",
        "play", "plays", "played", "run", "runs", "ran", "move", "moves", "moved",
        "live", "lives", "lived", "believe", "believes", "believed",
        "bring", "brings", "brought", "happen", "happens", "happened",
        "write", "writes", "wrote", "written", "sit", "sits", "sat",
        "stand", "stands", "stood", "pay", "pays", "paid", "meet", "meets", "met",
        "include", "includes", "included", "continue", "continues", "continued",
        "set", "sets", "learn", "learns", "learned", "change", "changes", "changed",
        "lead", "leads", "led", "understand", "understands", "understood",
        "watch", "watches", "watched", "follow", "follows", "followed",
        "stop", "stops", "stopped", "create", "creates", "created",
        "speak", "speaks", "spoke", "spoken", "read", "reads",
        "spend", "spends", "spent", "grow", "grows", "grew", "grown",
        "open", "opens", "opened", "walk", "walks", "walked",
        "win", "wins", "won", "offer", "offers", "offered",
        "remember", "remembers", "remembered", "consider", "considers", "considered",
        "appear", "appears", "appeared", "buy", "buys", "bought",
        "wait", "waits", "waited", "serve", "serves", "served",
        "die", "dies", "died", "send", "sends", "sent",
        "build", "builds", "built", "stay", "stays", "stayed",
        "fall", "falls", "fell", "fallen", "cut", "cuts",
        "reach", "reaches", "reached", "remain", "remains", "remained",
        "introduce", "introduces", "introduced",
        "support", "supports", "supported",
        "vote", "votes", "voted",
        "conserve", "conserves", "conserved",
        "protect", "protects", "protected",
        "plant", "plants", "planted",
        "eat", "eats", "ate", "eaten",
        "join", "joins", "joined", "launch", "launches", "launched",
        "pledge", "pledges", "pledged", "commit", "commits", "committed",
        "reduce", "reduces", "reduced", "recycle", "recycles", "recycled",
        "donate", "donates", "donated", "sign", "signs", "signed",
        "pass", "passes", "passed", "fight", "fights", "fought",
        "act", "acts", "acted", "celebrate", "celebrates", "celebrated",
    };
    return words;
}

SentimentLexicon SentimentLexicon::bundled() {
    SentimentLexicon lex;
    lex.positive = {
        "able", "abundant", "achieve", "admire", "adore", "advance", "advantage",
        "agree", "amazing", "appreciate", "awesome", "beautiful", "believe",
        "beloved", "benefit", "best", "better", "blessed", "bliss", "bloom",
        "bonus", "boost", "brave", "bright", "brilliant", "calm", "capable",
        "care", "celebrate", "certified", "champion", "charity", "charming",
        "cheer", "cheerful", "clean", "clear", "clever", "comfort", "commend",
        "compassion", "confident", "congratulations", "cool", "courage",
        "creative", "dazzling", "delicious", "delight", "dependable", "deserve",
        "devoted", "dynamic", "eager", "earnest", "easy", "effective",
        "efficient", "elegant", "empower", "encourage", "endorse", "energetic",
        "engaging", "enhance", "enjoy", "enrich", "enthusiastic", "excellent",
        "exceptional", "excite", "exciting", "extraordinary", "fabulous", "fair",
        "faithful", "famous", "fantastic", "favorite", "fearless", "fine",
        "flourish", "fortunate", "free", "fresh", "friendly", "fun", "generous",
        "gentle", "genuine", "gift", "glad", "glorious", "glow", "good",
        "gorgeous", "grace", "graceful", "gracious", "grand", "grateful",
        "great", "grin", "happy", "harmony", "heal", "helpful", "hero", "honest",
        "honor", "hope", "hopeful", "ideal", "impress", "impressive", "improve",
        "incredible", "innovative", "inspire", "inspiring", "integrity",
        "intelligent", "joy", "joyful", "keen", "kind", "kindness", "laugh",
        "legendary", "light", "like", "lively", "love", "lovely", "loyal",
        "lucky", "magnificent", "marvelous", "mighty", "miracle", "motivate",
        "neat", "nice", "noble", "nourish", "nurture", "optimistic",
        "outstanding", "passion", "peace", "peaceful", "perfect", "phenomenal",
        "playful", "pleasant", "please", "pleased", "pleasure", "plentiful",
        "polished", "popular", "positive", "powerful", "praise", "precious",
        "premium", "pretty", "pride", "productive", "progress", "promise",
        "prosper", "proud", "pure", "quality", "radiant", "reliable",
        "remarkable", "renew", "rescue", "respect", "restore", "reward", "rich",
        "right", "robust", "safe", "satisfy", "save", "secure", "serene",
        "share", "shine", "smart", "smile", "smooth", "solid", "spectacular",
        "splendid", "steady", "strong", "stunning", "succeed", "success",
        "successful", "super", "superb", "support", "supportive", "sweet",
        "terrific", "thank", "thankful", "thanks", "thrive", "triumph", "trust",
        "trustworthy", "truthful", "unique", "uplift", "valuable", "vibrant",
        "victory", "vital", "warm", "wealth", "welcome", "wonderful", "worthy",
        "wow", "youthful", "zeal", "zest",
    };
    lex.negative = {
        "abandon", "abuse", "afraid", "aggressive", "alarm", "alarming", "anger",
        "angry", "annoy", "annoying", "anxious", "apathy", "appalling",
        "arrogant", "ashamed", "attack", "awful", "bad", "bankrupt", "betray",
        "bitter", "blame", "bland", "bleak", "broke", "broken", "brutal",
        "burden", "careless", "chaos", "cheap", "cheat", "collapse", "complain",
        "complaint", "concern", "concerned", "confuse", "confusing", "corrupt",
        "costly", "crash", "crime", "criminal", "crisis", "cruel", "damage",
        "danger", "dangerous", "dark", "dead", "deadly", "deceive", "deceptive",
        "decline", "defeat", "deficient", "degrade", "delay", "deny", "deplete",
        "depressed", "depressing", "desperate", "destroy", "destruction",
        "dirty", "disappoint", "disappointed", "disappointing", "disaster",
        "disastrous", "disgrace", "disgust", "disgusting", "dishonest",
        "dismal", "disorder", "dispute", "disrupt", "distress", "disturb",
        "doubt", "dread", "dreadful", "dull", "dump", "evil", "excuse", "fail",
        "failed", "failure", "fake", "false", "fault", "fear", "fearful",
        "fight", "filthy", "flaw", "flawed", "fool", "foolish", "fraud",
        "frighten", "frustrate", "frustrating", "greedy", "grief", "grim",
        "gross", "guilt", "guilty", "harm", "harmful", "harsh", "hate",
        "hazard", "hazardous", "helpless", "hopeless", "horrible", "horrific",
        "hostile", "hurt", "ignorant", "ignore", "illegal", "illness",
        "inadequate", "incompetent", "inferior", "injure", "injury", "insult",
        "jealous", "junk", "lack", "lazy", "lie", "lose", "loss", "lost", "mad",
        "mess", "messy", "miserable", "misery", "mislead", "misleading",
        "mistake", "nasty", "negative", "neglect", "nervous", "noisy", "offend",
        "offensive", "outrage", "pain", "painful", "panic", "pathetic", "petty",
        "poor", "poorly", "problem", "protest", "punish", "regret", "reject",
        "risky", "rotten", "rude", "ruin", "sad", "scam", "scandal", "scare",
        "scared", "scary", "selfish", "severe", "shame", "shameful", "shock",
        "shocking", "shortage", "sick", "sloppy", "slow", "sorrow", "sorry",
        "steal", "stress", "stressful", "struggle", "stupid", "suffer",
        "suspicious", "terrible", "terrify", "threat", "threaten", "toxic",
        "tragedy", "tragic", "trash", "trouble", "ugly", "unacceptable",
        "unfair", "unfortunate", "unhappy", "unhealthy", "unreliable", "unsafe",
        "upset", "useless", "vague", "vicious", "victim", "villain", "violence",
        "violent", "waste", "wasteful", "weak", "weary", "worry", "worse",
        "worst", "wreck", "wrong",
    };
    return lex;
}

}  // namespace causekit
