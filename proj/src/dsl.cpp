#include "uidsl/dsl.hpp"

#include <utility>

#include "uidsl/binding.hpp"

namespace uidsl::dsl {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// RFC 6901 escaping for one pointer token.
std::string pointer_escape(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    for (char c : token) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

bool is_scalar(const json& v) {
    return v.is_string() || v.is_number() || v.is_boolean();
}

ParamValue param_from_json(const json& j, const std::string& pointer) {
    if (!j.is_object()) {
        throw SchemaError("param must be an object", pointer);
    }
    ParamValue out;
    bool saw_bind_type = false;
    bool saw_value = false;
    bool saw_bind_field = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "bindType") {
            if (!value.is_string()) {
                throw SchemaError("bindType must be a string", pointer);
            }
            const std::string s = value.get<std::string>();
            if (s == "Static") {
                out.bind_type = BindType::Static;
            } else if (s == "Data") {
                out.bind_type = BindType::Data;
            } else {
                throw SchemaError("bindType must be \"Static\" or \"Data\", got \"" + s + "\"",
                                  pointer);
            }
            saw_bind_type = true;
        } else if (key == "value") {
            if (!is_scalar(value)) {
                throw SchemaError("param value must be a scalar", pointer);
            }
            out.value = value;
            saw_value = true;
        } else if (key == "bindField") {
            if (!value.is_string()) {
                throw SchemaError("bindField must be a string", pointer);
            }
            out.bind_field = value.get<std::string>();
            saw_bind_field = true;
        } else {
            throw SchemaError("unknown param key \"" + key + "\"", pointer);
        }
    }
    if (!saw_bind_type) {
        throw SchemaError("param is missing bindType", pointer);
    }
    if (out.bind_type == BindType::Static) {
        if (!saw_value || saw_bind_field) {
            throw SchemaError("Static param requires \"value\" and forbids \"bindField\"",
                              pointer);
        }
    } else {
        if (!saw_bind_field || saw_value) {
            throw SchemaError("Data param requires \"bindField\" and forbids \"value\"", pointer);
        }
    }
    return out;
}

DslNode node_from_json(const json& j, const std::string& pointer) {
    if (!j.is_object()) {
        throw SchemaError("node must be an object", pointer.empty() ? "/" : pointer);
    }
    DslNode node;
    bool saw_type = false;
    bool saw_name = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "type") {
            if (!value.is_string()) {
                throw SchemaError("type must be a string", pointer + "/type");
            }
            const std::string s = value.get<std::string>();
            if (s == "Tag") {
                node.type = NodeType::Tag;
            } else if (s == "Component") {
                node.type = NodeType::Component;
            } else {
                throw SchemaError("type must be \"Tag\" or \"Component\", got \"" + s + "\"",
                                  pointer + "/type");
            }
            saw_type = true;
        } else if (key == "name") {
            if (!value.is_string()) {
                throw SchemaError("name must be a string", pointer + "/name");
            }
            node.name = value.get<std::string>();
            if (node.name.empty()) {
                throw SchemaError("name must be non-empty", pointer + "/name");
            }
            saw_name = true;
        } else if (key == "className") {
            if (!value.is_string()) {
                throw SchemaError("className must be a string", pointer + "/className");
            }
            node.class_name = value.get<std::string>();
        } else if (key == "params") {
            if (!value.is_object()) {
                throw SchemaError("params must be an object", pointer + "/params");
            }
            ParamMap params;
            for (const auto& [pkey, pvalue] : value.items()) {
                params.emplace(pkey, param_from_json(
                                         pvalue, pointer + "/params/" + pointer_escape(pkey)));
            }
            node.params = std::move(params);
        } else if (key == "children") {
            if (!value.is_array()) {
                throw SchemaError("children must be an array", pointer + "/children");
            }
            std::vector<DslNode> children;
            children.reserve(value.size());
            for (std::size_t i = 0; i < value.size(); ++i) {
                children.push_back(
                    node_from_json(value[i], pointer + "/children/" + std::to_string(i)));
            }
            node.children = std::move(children);
        } else {
            throw SchemaError("unknown node key \"" + key + "\"", pointer.empty() ? "/" : pointer);
        }
    }
    if (!saw_type) {
        throw SchemaError("node is missing \"type\"", pointer.empty() ? "/" : pointer);
    }
    if (!saw_name) {
        throw SchemaError("node is missing \"name\"", pointer.empty() ? "/" : pointer);
    }
    return node;
}

ordered_json node_to_json(const DslNode& node) {
    ordered_json out = ordered_json::object();
    out["type"] = to_string(node.type);
    out["name"] = node.name;
    if (node.class_name) {
        out["className"] = *node.class_name;
    }
    if (node.params && !node.params->empty()) {
        ordered_json params = ordered_json::object();
        for (const auto& [key, value] : *node.params) {  // std::map: sorted keys
            ordered_json p = ordered_json::object();
            p["bindType"] = to_string(value.bind_type);
            if (value.bind_type == BindType::Static) {
                p["value"] = value.value;
            } else {
                p["bindField"] = value.bind_field;
            }
            params[key] = std::move(p);
        }
        out["params"] = std::move(params);
    }
    if (node.children && !node.children->empty()) {
        ordered_json children = ordered_json::array();
        for (const DslNode& child : *node.children) {
            children.push_back(node_to_json(child));
        }
        out["children"] = std::move(children);
    }
    return out;
}

struct Validator {
    const std::set<std::string>& registry;
    std::vector<Violation> violations;

    void check(const DslNode& node, const std::string& pointer) {
        const std::string self = pointer.empty() ? "" : pointer;
        if (node.name.empty()) {
            violations.push_back({"R0", self + "/name", "node name must be non-empty"});
        }
        if (node.type == NodeType::Component && !registry.count(node.name)) {
            violations.push_back({"R1", self + "/name",
                                  "component \"" + node.name + "\" is not in the registry"});
        }
        if (node.params) {
            if (node.params->empty()) {
                violations.push_back({"R4", self + "/params", "params present but empty"});
            }
            for (const auto& [key, value] : *node.params) {
                const std::string ppointer = self + "/params/" + pointer_escape(key);
                check_param(key, value, ppointer);
            }
        }
        if (node.children) {
            if (node.children->empty()) {
                violations.push_back({"R4", self + "/children", "children present but empty"});
            }
            for (std::size_t i = 0; i < node.children->size(); ++i) {
                check((*node.children)[i], self + "/children/" + std::to_string(i));
            }
        }
    }

    void check_param(const std::string& key, const ParamValue& value,
                     const std::string& pointer) {
        (void)key;
        if (value.bind_type == BindType::Static) {
            if (!is_scalar(value.value) || !value.bind_field.empty()) {
                violations.push_back(
                    {"R2", pointer, "Static param must carry a scalar value and no bindField"});
            }
        } else {
            if (!value.value.is_null() || value.bind_field.empty()) {
                violations.push_back(
                    {"R2", pointer, "Data param must carry a bindField and no value"});
            }
            if (!value.bind_field.empty()) {
                try {
                    binding::parse_path(value.bind_field);
                } catch (const PathSyntaxError& e) {
                    violations.push_back({"R3", pointer + "/bindField",
                                          std::string("invalid bindField path: ") + e.what()});
                }
            }
        }
    }
};

}  // namespace

const char* to_string(NodeType t) {
    return t == NodeType::Tag ? "Tag" : "Component";
}

const char* to_string(BindType t) {
    return t == BindType::Static ? "Static" : "Data";
}

DslNode parse_document(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw JsonSyntaxError(e.what());
    }
    if (j.is_array()) {
        // Single-element top-level arrays are an observed LLM output quirk.
        if (j.size() > 1) {
            throw MultipleRootsError(j.size());
        }
        if (j.empty()) {
            throw SchemaError("top-level array is empty", "/");
        }
        j = j[0];
    }
    return node_from_json(j, "");
}

ValidationReport validate(const DslNode& root, const std::set<std::string>& component_registry) {
    Validator v{component_registry, {}};
    v.check(root, "");
    ValidationReport report;
    report.violations = std::move(v.violations);
    report.valid = report.violations.empty();
    return report;
}

std::string serialize(const DslNode& root) {
    return node_to_json(root).dump();
}

}  // namespace uidsl::dsl
