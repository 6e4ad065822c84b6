#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uidsl/errors.hpp"

// Document model for the JSON UI DSL: a tree of Tag/Component nodes carrying
// utility-CSS class tokens and Static/Data-bound params.

namespace uidsl::dsl {

enum class NodeType { Component, Tag };

enum class BindType { Static, Data };

// A single param entry. Static params carry a scalar value (string, number or
// boolean, stored as a JSON scalar); Data params carry the path of the field
// to bind at runtime.
struct ParamValue {
    BindType bind_type = BindType::Static;
    nlohmann::json value;    // populated iff bind_type == Static
    std::string bind_field;  // populated iff bind_type == Data

    static ParamValue static_value(nlohmann::json v) {
        ParamValue p;
        p.bind_type = BindType::Static;
        p.value = std::move(v);
        return p;
    }
    static ParamValue data_binding(std::string field) {
        ParamValue p;
        p.bind_type = BindType::Data;
        p.bind_field = std::move(field);
        return p;
    }

    bool operator==(const ParamValue&) const = default;
};

using ParamMap = std::map<std::string, ParamValue>;

struct DslNode {
    NodeType type = NodeType::Tag;
    std::string name;
    std::optional<std::string> class_name;
    // optional distinguishes "absent" from "present but empty"; the latter is
    // representable in memory and flagged by validate (rule R4).
    std::optional<ParamMap> params;
    std::optional<std::vector<DslNode>> children;

    bool operator==(const DslNode&) const = default;
};

struct Violation {
    std::string rule_id;       // R0..R4
    std::string json_pointer;  // location in the canonically serialized document
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

// Parses a complete DSL document. A single-element top-level array is
// unwrapped; a longer one raises MultipleRootsError. Unknown keys on a node
// are a SchemaError.
DslNode parse_document(std::string_view text);

// Checks R0 (non-empty names), R1 (Component name registered), R2 (param
// bindType consistency), R3 (Data paths parse), R4 (no empty params/children).
// All rules are evaluated on every node; nothing short-circuits.
ValidationReport validate(const DslNode& root, const std::set<std::string>& component_registry);

// Canonical compact JSON: key order type, name, className, params, children;
// params in sorted key order; empty params/children omitted.
std::string serialize(const DslNode& root);

const char* to_string(NodeType t);
const char* to_string(BindType t);

}  // namespace uidsl::dsl
