#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "uidsl/dsl.hpp"
#include "uidsl/errors.hpp"

// Data-binding: resolves "bindField" paths such as promotions[0].title against
// a mock/runtime JSON document and rewrites Data params into Static ones.

namespace uidsl::binding {

struct PathSegment {
    struct Key {
        std::string name;
        bool operator==(const Key&) const = default;
    };
    struct Index {
        std::uint64_t i = 0;
        bool operator==(const Index&) const = default;
    };
    std::variant<Key, Index> seg;

    bool is_key() const { return std::holds_alternative<Key>(seg); }
    const std::string& key() const { return std::get<Key>(seg).name; }
    std::uint64_t index() const { return std::get<Index>(seg).i; }

    bool operator==(const PathSegment&) const = default;
};

struct DataPath {
    std::vector<PathSegment> segments;

    bool operator==(const DataPath&) const = default;
};

// Grammar: ident ( "." ident | "[" digits "]" )* with ident = [A-Za-z_][A-Za-z0-9_]*.
// The first segment is always a key; leading indices are rejected.
DataPath parse_path(std::string_view text);

std::string to_string(const DataPath& path);

// Walks the path through the data document and returns the scalar leaf.
// Throws MissingPathError when a segment does not match the structure and
// BindTypeError when the leaf is an object, array or null.
nlohmann::json resolve(const DataPath& path, const nlohmann::json& data);

enum class BindPolicy { Strict, Placeholder };

struct BindResult {
    dsl::DslNode root;
    std::vector<std::string> warnings;  // Placeholder mode only
};

// Returns a copy of the tree with every Data param replaced by a Static param
// holding the resolved value. Strict propagates the first resolution error;
// Placeholder substitutes "⟦missing:<path>⟧" and records a warning.
BindResult bind_tree(const dsl::DslNode& root, const nlohmann::json& data, BindPolicy policy);

}  // namespace uidsl::binding
