#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "uidsl/dsl.hpp"
#include "uidsl/errors.hpp"

// Incremental parser for DSL JSON. Bytes go in (split anywhere, including
// mid-token and mid-UTF-8-sequence); growing partial trees come out. A
// snapshot is emitted when a node becomes identifiable (type+name known and
// every ancestor already visible), when a visible node gains a completed
// param, when a visible node closes, and when the document completes.

namespace uidsl::stream {

struct PartialTree {
    std::optional<dsl::DslNode> root;
    bool complete = false;
    std::size_t bytes_consumed = 0;
};

class StreamParser {
public:
    StreamParser();
    ~StreamParser();
    StreamParser(StreamParser&&) noexcept;
    StreamParser& operator=(StreamParser&&) noexcept;
    StreamParser(const StreamParser&) = delete;
    StreamParser& operator=(const StreamParser&) = delete;

    // Consumes one chunk and returns the snapshots it triggered, in order.
    // Throws StreamSyntaxError on malformed or schema-invalid input; the
    // parser is unusable afterwards.
    std::vector<PartialTree> feed(std::string_view chunk);

    // Returns the final tree. Throws TruncatedStreamError (naming the deepest
    // open node) if the document is unterminated.
    PartialTree finish();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Convenience: feed the whole text as one chunk and collect every snapshot
// including the finish() result.
std::vector<PartialTree> parse_all(std::string_view text);

}  // namespace uidsl::stream
