#include "uidsl/binding.hpp"

#include <cctype>

namespace uidsl::binding {

namespace {

using nlohmann::json;

bool is_ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

constexpr const char* kPlaceholderOpen = "⟦";   // ⟦
constexpr const char* kPlaceholderClose = "⟧";  // ⟧

}  // namespace

DataPath parse_path(std::string_view text) {
    if (text.empty()) {
        throw PathSyntaxError("empty path", 0);
    }
    DataPath path;
    std::size_t i = 0;
    auto read_ident = [&]() {
        const std::size_t start = i;
        if (i >= text.size() || !is_ident_start(text[i])) {
            throw PathSyntaxError("expected identifier", i);
        }
        while (i < text.size() && is_ident_char(text[i])) {
            ++i;
        }
        return std::string(text.substr(start, i - start));
    };

    path.segments.push_back({PathSegment::Key{read_ident()}});
    while (i < text.size()) {
        const char c = text[i];
        if (c == '.') {
            ++i;
            path.segments.push_back({PathSegment::Key{read_ident()}});
        } else if (c == '[') {
            ++i;
            const std::size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
                ++i;
            }
            if (i == start) {
                throw PathSyntaxError("expected digits inside []", i);
            }
            if (i - start > 18) {
                throw PathSyntaxError("index too large", start);
            }
            if (i >= text.size() || text[i] != ']') {
                throw PathSyntaxError("expected ']'", i);
            }
            std::uint64_t value = 0;
            for (std::size_t k = start; k < i; ++k) {
                value = value * 10 + static_cast<std::uint64_t>(text[k] - '0');
            }
            path.segments.push_back({PathSegment::Index{value}});
            ++i;
        } else {
            throw PathSyntaxError(std::string("unexpected character '") + c + "'", i);
        }
    }
    return path;
}

std::string to_string(const DataPath& path) {
    std::string out;
    for (const PathSegment& seg : path.segments) {
        if (seg.is_key()) {
            if (!out.empty()) {
                out += '.';
            }
            out += seg.key();
        } else {
            out += '[' + std::to_string(seg.index()) + ']';
        }
    }
    return out;
}

json resolve(const DataPath& path, const json& data) {
    const json* cur = &data;
    for (const PathSegment& seg : path.segments) {
        if (seg.is_key()) {
            if (!cur->is_object()) {
                throw MissingPathError("path segment \"" + seg.key() +
                                       "\" addresses a non-object value");
            }
            auto it = cur->find(seg.key());
            if (it == cur->end()) {
                throw MissingPathError("missing field \"" + seg.key() + "\" in path " +
                                       to_string(path));
            }
            cur = &*it;
        } else {
            if (!cur->is_array()) {
                throw MissingPathError("index [" + std::to_string(seg.index()) +
                                       "] addresses a non-array value");
            }
            if (seg.index() >= cur->size()) {
                throw MissingPathError("index [" + std::to_string(seg.index()) +
                                       "] out of range in path " + to_string(path));
            }
            cur = &(*cur)[seg.index()];
        }
    }
    if (cur->is_object() || cur->is_array()) {
        throw BindTypeError("path " + to_string(path) +
                            " addresses a non-scalar value; params bind scalars");
    }
    if (cur->is_null()) {
        throw BindTypeError("path " + to_string(path) + " addresses null");
    }
    return *cur;
}

namespace {

void bind_node(dsl::DslNode& node, const json& data, BindPolicy policy,
               std::vector<std::string>& warnings) {
    if (node.params) {
        for (auto& [key, value] : *node.params) {
            if (value.bind_type != dsl::BindType::Data) {
                continue;
            }
            const std::string field = value.bind_field;
            try {
                const DataPath path = parse_path(field);
                value = dsl::ParamValue::static_value(resolve(path, data));
            } catch (const Error& e) {
                if (policy == BindPolicy::Strict) {
                    throw;
                }
                warnings.push_back("param \"" + key + "\": " + e.what());
                value = dsl::ParamValue::static_value(
                    json(std::string(kPlaceholderOpen) + "missing:" + field + kPlaceholderClose));
            }
        }
    }
    if (node.children) {
        for (dsl::DslNode& child : *node.children) {
            bind_node(child, data, policy, warnings);
        }
    }
}

}  // namespace

BindResult bind_tree(const dsl::DslNode& root, const json& data, BindPolicy policy) {
    BindResult result;
    result.root = root;
    bind_node(result.root, data, policy, result.warnings);
    return result;
}

}  // namespace uidsl::binding
