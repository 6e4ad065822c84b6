#include "uidsl/render.hpp"

#include <array>
#include <unordered_set>

namespace uidsl::render {

namespace {

using dsl::BindType;
using dsl::DslNode;
using dsl::NodeType;

// Elements that take no content per the DSL contract.
const std::unordered_set<std::string>& void_elements() {
    static const std::unordered_set<std::string> kVoid = {"img", "br",   "hr",
                                                          "input", "meta", "link"};
    return kVoid;
}

const std::unordered_set<std::string>& known_tags() {
    static const std::unordered_set<std::string> kTags = {
        "a",        "abbr",    "address", "article",  "aside",   "audio",    "b",
        "bdi",      "bdo",     "blockquote", "body",  "br",      "button",   "canvas",
        "caption",  "cite",    "code",    "col",      "colgroup", "data",    "datalist",
        "dd",       "del",     "details", "dfn",      "dialog",  "div",      "dl",
        "dt",       "em",      "embed",   "fieldset", "figcaption", "figure", "footer",
        "form",     "h1",      "h2",      "h3",       "h4",      "h5",       "h6",
        "head",     "header",  "hgroup",  "hr",       "html",    "i",        "iframe",
        "img",      "input",   "ins",     "kbd",      "label",   "legend",   "li",
        "link",     "main",    "map",     "mark",     "menu",    "meta",     "meter",
        "nav",      "noscript", "object", "ol",       "optgroup", "option",  "output",
        "p",        "picture", "pre",     "progress", "q",       "rp",       "rt",
        "ruby",     "s",       "samp",    "section",  "select",  "slot",     "small",
        "source",   "span",    "strong",  "sub",      "summary", "sup",      "table",
        "tbody",    "td",      "template", "textarea", "tfoot",  "th",       "thead",
        "time",     "title",   "tr",      "track",    "u",       "ul",       "var",
        "video",    "wbr"};
    return kTags;
}

void escape_text(std::string_view in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
}

void escape_attr(std::string_view in, std::string& out) {
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
}

// Deterministic text form of a param value: strings verbatim, numbers and
// booleans in shortest round-trip form, raw Data params as their placeholder.
std::string param_text(const dsl::ParamValue& p) {
    if (p.bind_type == BindType::Data) {
        return "⟦data:" + p.bind_field + "⟧";
    }
    if (p.value.is_string()) {
        return p.value.get<std::string>();
    }
    return p.value.dump();
}

struct Emitter {
    std::string out;
    std::vector<std::string> warnings;

    void node(const DslNode& n) {
        if (n.type == NodeType::Component) {
            component(n);
            return;
        }
        tag(n);
    }

    void attributes(const DslNode& n, bool include_component_name) {
        bool has_class_param_shadow = false;
        if (n.class_name) {
            out += " class=\"";
            escape_attr(*n.class_name, out);
            out += '"';
        }
        if (include_component_name) {
            out += " data-component=\"";
            escape_attr(n.name, out);
            out += '"';
        }
        if (n.params) {
            for (const auto& [key, value] : *n.params) {  // sorted by std::map
                if (key == "textContent") {
                    continue;
                }
                if (key == "class" && n.class_name) {
                    has_class_param_shadow = true;
                    continue;
                }
                out += ' ';
                out += key;
                out += "=\"";
                escape_attr(param_text(value), out);
                out += '"';
            }
        }
        if (has_class_param_shadow) {
            warnings.push_back("param \"class\" ignored: node also has className");
        }
    }

    void tag(const DslNode& n) {
        const bool is_void = void_elements().count(n.name) > 0;
        if (!known_tags().count(n.name)) {
            warnings.push_back("unknown tag <" + n.name + "> emitted as-is");
        }
        if (is_void) {
            const bool has_children = n.children && !n.children->empty();
            const bool has_text = n.params && n.params->count("textContent") > 0;
            if (has_children || has_text) {
                throw VoidElementChildrenError("void element <" + n.name +
                                               "> cannot have children or text content");
            }
        }
        out += '<';
        out += n.name;
        attributes(n, false);
        out += '>';
        if (is_void) {
            return;
        }
        body(n);
        out += "</";
        out += n.name;
        out += '>';
    }

    void component(const DslNode& n) {
        out += "<div";
        attributes(n, true);
        out += '>';
        body(n);
        out += "</div>";
    }

    void body(const DslNode& n) {
        if (n.params) {
            auto it = n.params->find("textContent");
            if (it != n.params->end()) {
                escape_text(param_text(it->second), out);
            }
        }
        if (n.children) {
            for (const DslNode& child : *n.children) {
                node(child);
            }
        }
    }
};

}  // namespace

RenderOutput render(const DslNode& root, const RenderOptions& options) {
    Emitter emitter;
    emitter.out.reserve(1024);
    emitter.out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
    emitter.out += "<link rel=\"stylesheet\" href=\"";
    escape_attr(options.inline_stylesheet_href, emitter.out);
    emitter.out += "\">\n</head>\n<body>\n";
    emitter.node(root);
    emitter.out += "\n</body>\n</html>\n";
    return RenderOutput{std::move(emitter.out), std::move(emitter.warnings)};
}

std::vector<RenderOutput> render_stream(std::span<const stream::PartialTree> snapshots,
                                        const RenderOptions& options) {
    std::vector<RenderOutput> outputs;
    outputs.reserve(snapshots.size());
    for (const stream::PartialTree& snap : snapshots) {
        if (!snap.root) {
            RenderOutput empty;
            empty.html = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
                         "<link rel=\"stylesheet\" href=\"";
            std::string href;
            escape_attr(options.inline_stylesheet_href, href);
            empty.html += href + "\">\n</head>\n<body>\n\n</body>\n</html>\n";
            outputs.push_back(std::move(empty));
            continue;
        }
        outputs.push_back(render(*snap.root, options));
    }
    return outputs;
}

RenderCheck check_renderable(const DslNode& root,
                             const std::set<std::string>& component_registry) {
    RenderCheck check;
    const dsl::ValidationReport report = dsl::validate(root, component_registry);
    for (const dsl::Violation& v : report.violations) {
        check.warnings.push_back(v.rule_id + " " + v.json_pointer + ": " + v.message);
    }
    if (!report.valid) {
        check.renderable = false;
        return check;
    }
    try {
        RenderOutput out = render(root);
        for (std::string& w : out.warnings) {
            check.warnings.push_back(std::move(w));
        }
        check.renderable = true;
    } catch (const Error& e) {
        check.warnings.push_back(e.what());
        check.renderable = false;
    }
    return check;
}

}  // namespace uidsl::render
