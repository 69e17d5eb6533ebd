#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sen {

enum class InteractionKind { Reply, Mention, Retweet, QuoteRetweet };

/// One directed ego->alter event. For plain retweets the text is the
/// retweeted content and is ignored downstream; for quote retweets it is
/// the ego's added commentary only.
struct InteractionRecord {
    std::string ego_id;
    std::string alter_id;
    InteractionKind kind = InteractionKind::Reply;
    std::int64_t timestamp = 0;  // UTC seconds since epoch, > 0
    std::string text;

    bool operator==(const InteractionRecord&) const = default;
};

inline std::optional<InteractionKind> kind_from_string(std::string_view s) {
    if (s == "reply") return InteractionKind::Reply;
    if (s == "mention") return InteractionKind::Mention;
    if (s == "retweet") return InteractionKind::Retweet;
    if (s == "quote_retweet") return InteractionKind::QuoteRetweet;
    return std::nullopt;
}

inline std::string_view to_string(InteractionKind k) {
    switch (k) {
        case InteractionKind::Reply: return "reply";
        case InteractionKind::Mention: return "mention";
        case InteractionKind::Retweet: return "retweet";
        case InteractionKind::QuoteRetweet: return "quote_retweet";
    }
    return "reply";
}

}  // namespace sen
