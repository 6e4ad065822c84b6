#include "uidsl/stream.hpp"

#include <charconv>
#include <cstdint>
#include <memory>
#include <set>
#include <utility>

namespace uidsl::stream {

namespace {

using nlohmann::json;

void utf8_append(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Grammar check for a complete number token:
// -? ( 0 | [1-9][0-9]* ) ( . [0-9]+ )? ( [eE] [+-]? [0-9]+ )?
bool valid_number(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && s[i] == '-') ++i;
    if (i >= s.size()) return false;
    if (s[i] == '0') {
        ++i;
    } else if (s[i] >= '1' && s[i] <= '9') {
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    } else {
        return false;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    }
    return i == s.size();
}

// Matches the batch parser's numeric typing: integer text becomes int64 (or
// uint64 when it only fits unsigned), everything else a double.
json number_to_json(const std::string& text) {
    const bool integral = text.find_first_of(".eE") == std::string::npos;
    if (integral) {
        std::int64_t i64 = 0;
        auto r = std::from_chars(text.data(), text.data() + text.size(), i64);
        if (r.ec == std::errc() && r.ptr == text.data() + text.size()) {
            return json(i64);
        }
        std::uint64_t u64 = 0;
        r = std::from_chars(text.data(), text.data() + text.size(), u64);
        if (r.ec == std::errc() && r.ptr == text.data() + text.size()) {
            return json(u64);
        }
    }
    double d = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), d);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        return json();  // unreachable for grammar-valid numbers
    }
    return json(d);
}

struct BuildNode {
    std::optional<dsl::NodeType> type;
    std::optional<std::string> name;
    std::optional<std::string> class_name;
    bool params_present = false;
    bool params_closed = false;
    dsl::ParamMap params;  // completed params only
    bool children_present = false;
    bool children_closed = false;
    std::vector<std::unique_ptr<BuildNode>> children;
    BuildNode* parent = nullptr;
    bool visible = false;  // already part of an emitted snapshot
    bool closed = false;
    std::set<std::string> seen_keys;

    bool identifiable() const { return type.has_value() && name.has_value(); }
};

dsl::DslNode materialize(const BuildNode& b) {
    dsl::DslNode out;
    out.type = *b.type;
    out.name = *b.name;
    out.class_name = b.class_name;
    if (b.params_present && (!b.params.empty() || b.params_closed)) {
        out.params = b.params;
    }
    if (b.children_present) {
        std::vector<dsl::DslNode> kids;
        for (const auto& child : b.children) {
            if (child->visible) {
                kids.push_back(materialize(*child));
            }
        }
        if (!kids.empty() || b.children_closed) {
            out.children = std::move(kids);
        }
    }
    return out;
}

}  // namespace

struct StreamParser::Impl {
    // ---- lexer ----
    enum class Lex { Default, Str, StrEscape, StrUnicode, Number, Literal };
    Lex lex = Lex::Default;
    std::string buf;           // current string/number/literal text
    int hex_count = 0;
    std::uint32_t hex_value = 0;
    std::uint32_t pending_high = 0;  // pending high surrogate, 0 = none
    bool expect_low_escape = false;  // just saw a high surrogate; next must be \uXXXX

    // ---- parser ----
    enum class FrameKind { Root, RootArray, Node, Params, ParamValue, Children };
    // Object-ish frames share the member cycle: AfterOpen -> (key) ExpectColon
    // -> ExpectValue -> AfterValue -> (comma) ExpectKey.
    enum State { AfterOpen = 0, ExpectColon, ExpectValue, AfterValue, ExpectKey };

    struct Frame {
        explicit Frame(FrameKind k, int s = AfterOpen, BuildNode* n = nullptr)
            : kind(k), state(s), node(n) {}

        FrameKind kind;
        int state = AfterOpen;
        BuildNode* node = nullptr;   // owning node for Node/Params/ParamValue/Children
        std::string current_key;     // Node/ParamValue: member being parsed
        std::string param_key;       // Params: name of the param being built
        // ParamValue accumulation
        std::optional<dsl::BindType> pv_bind_type;
        std::optional<json> pv_value;
        std::optional<std::string> pv_bind_field;
        std::set<std::string> seen_keys;
    };

    std::unique_ptr<BuildNode> root;
    std::vector<Frame> stack;
    bool document_complete = false;
    bool failed = false;
    std::size_t offset = 0;  // bytes fully processed
    std::vector<PartialTree> pending;  // snapshots produced by the current feed()

    Impl() { stack.push_back(Frame{FrameKind::Root}); }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) {
        failed = true;
        throw StreamSyntaxError(msg, at);
    }

    void emit(bool complete, std::size_t at) {
        PartialTree snap;
        if (root && root->visible) {
            snap.root = materialize(*root);
        }
        snap.complete = complete;
        snap.bytes_consumed = at + 1;
        pending.push_back(std::move(snap));
    }

    void make_visible(BuildNode& node) {
        node.visible = true;
        for (auto& child : node.children) {
            if (child->identifiable() && !child->visible) {
                make_visible(*child);
            }
        }
    }

    // Called whenever a node's type or name was just set.
    void on_node_field_set(BuildNode& node, std::size_t at) {
        if (!node.identifiable() || node.visible) {
            return;
        }
        if (node.parent == nullptr || node.parent->visible) {
            make_visible(node);
            emit(false, at);
        }
    }

    // ---- token handling ----

    enum class Tok { LBrace, RBrace, LBracket, RBracket, Comma, Colon, Scalar };

    void token(Tok t, std::size_t at, json scalar = {}, bool is_string = false) {
        if (document_complete) {
            fail("trailing content after complete document", at);
        }
        Frame& f = stack.back();
        switch (f.kind) {
            case FrameKind::Root:
                if (t == Tok::LBrace) {
                    root = std::make_unique<BuildNode>();
                    stack.push_back(Frame{FrameKind::Node, AfterOpen, root.get()});
                } else if (t == Tok::LBracket) {
                    f.kind = FrameKind::RootArray;
                    f.state = AfterOpen;
                } else {
                    fail("document root must be an object or array", at);
                }
                return;
            case FrameKind::RootArray:
                if (f.state == AfterOpen) {
                    if (t == Tok::LBrace) {
                        root = std::make_unique<BuildNode>();
                        f.state = AfterValue;
                        stack.push_back(Frame{FrameKind::Node, AfterOpen, root.get()});
                    } else if (t == Tok::RBracket) {
                        fail("top-level array is empty", at);
                    } else {
                        fail("expected a node object", at);
                    }
                } else {  // AfterValue: root node already parsed
                    if (t == Tok::RBracket) {
                        document_complete = true;
                        emit(true, at);
                    } else if (t == Tok::Comma) {
                        fail("document must have a single root node", at);
                    } else {
                        fail("expected ']' after root node", at);
                    }
                }
                return;
            case FrameKind::Node:
                node_token(f, t, at, std::move(scalar), is_string);
                return;
            case FrameKind::Params:
                params_token(f, t, at, std::move(scalar), is_string);
                return;
            case FrameKind::ParamValue:
                param_value_token(f, t, at, std::move(scalar), is_string);
                return;
            case FrameKind::Children:
                children_token(f, t, at);
                return;
        }
    }

    void node_token(Frame& f, Tok t, std::size_t at, json scalar, bool is_string) {
        BuildNode& node = *f.node;
        switch (f.state) {
            case AfterOpen:
            case ExpectKey:
                if (t == Tok::RBrace && f.state == AfterOpen) {
                    close_node(at);
                    return;
                }
                if (t != Tok::Scalar || !is_string) {
                    fail("expected an object key", at);
                }
                {
                    const std::string key = scalar.get<std::string>();
                    if (key != "type" && key != "name" && key != "className" &&
                        key != "params" && key != "children") {
                        fail("unknown node key \"" + key + "\"", at);
                    }
                    if (!node.seen_keys.insert(key).second) {
                        fail("duplicate node key \"" + key + "\"", at);
                    }
                    f.current_key = key;
                    f.state = ExpectColon;
                }
                return;
            case ExpectColon:
                if (t != Tok::Colon) {
                    fail("expected ':'", at);
                }
                f.state = ExpectValue;
                return;
            case ExpectValue:
                if (f.current_key == "type") {
                    if (t != Tok::Scalar || !is_string) {
                        fail("type must be a string", at);
                    }
                    const std::string s = scalar.get<std::string>();
                    if (s == "Tag") {
                        node.type = dsl::NodeType::Tag;
                    } else if (s == "Component") {
                        node.type = dsl::NodeType::Component;
                    } else {
                        fail("type must be \"Tag\" or \"Component\"", at);
                    }
                    f.state = AfterValue;
                    on_node_field_set(node, at);
                } else if (f.current_key == "name") {
                    if (t != Tok::Scalar || !is_string) {
                        fail("name must be a string", at);
                    }
                    const std::string s = scalar.get<std::string>();
                    if (s.empty()) {
                        fail("name must be non-empty", at);
                    }
                    node.name = s;
                    f.state = AfterValue;
                    on_node_field_set(node, at);
                } else if (f.current_key == "className") {
                    if (t != Tok::Scalar || !is_string) {
                        fail("className must be a string", at);
                    }
                    node.class_name = scalar.get<std::string>();
                    f.state = AfterValue;
                } else if (f.current_key == "params") {
                    if (t != Tok::LBrace) {
                        fail("params must be an object", at);
                    }
                    node.params_present = true;
                    f.state = AfterValue;
                    stack.push_back(Frame{FrameKind::Params, AfterOpen, &node});
                } else {  // children
                    if (t != Tok::LBracket) {
                        fail("children must be an array", at);
                    }
                    node.children_present = true;
                    f.state = AfterValue;
                    stack.push_back(Frame{FrameKind::Children, AfterOpen, &node});
                }
                return;
            case AfterValue:
                if (t == Tok::Comma) {
                    f.state = ExpectKey;
                } else if (t == Tok::RBrace) {
                    close_node(at);
                } else {
                    fail("expected ',' or '}'", at);
                }
                return;
        }
    }

    void close_node(std::size_t at) {
        BuildNode& node = *stack.back().node;
        if (!node.identifiable()) {
            fail("node closed without both \"type\" and \"name\"", at);
        }
        node.closed = true;
        stack.pop_back();
        const bool at_root = stack.back().kind == FrameKind::Root;
        if (at_root) {
            document_complete = true;
            stack.back().state = AfterValue;
            emit(true, at);
            return;
        }
        if (node.visible) {
            emit(false, at);
        }
    }

    void params_token(Frame& f, Tok t, std::size_t at, json scalar, bool is_string) {
        switch (f.state) {
            case AfterOpen:
            case ExpectKey:
                if (t == Tok::RBrace && f.state == AfterOpen) {
                    f.node->params_closed = true;
                    stack.pop_back();
                    return;
                }
                if (t != Tok::Scalar || !is_string) {
                    fail("expected a param name", at);
                }
                f.param_key = scalar.get<std::string>();
                if (!f.seen_keys.insert(f.param_key).second) {
                    fail("duplicate param \"" + f.param_key + "\"", at);
                }
                f.state = ExpectColon;
                return;
            case ExpectColon:
                if (t != Tok::Colon) {
                    fail("expected ':'", at);
                }
                f.state = ExpectValue;
                return;
            case ExpectValue: {
                if (t != Tok::LBrace) {
                    fail("param must be an object", at);
                }
                f.state = AfterValue;
                Frame pv{FrameKind::ParamValue, AfterOpen, f.node};
                pv.param_key = f.param_key;
                stack.push_back(std::move(pv));
                return;
            }
            case AfterValue:
                if (t == Tok::Comma) {
                    f.state = ExpectKey;
                } else if (t == Tok::RBrace) {
                    f.node->params_closed = true;
                    stack.pop_back();
                } else {
                    fail("expected ',' or '}'", at);
                }
                return;
        }
    }

    void param_value_token(Frame& f, Tok t, std::size_t at, json scalar, bool is_string) {
        switch (f.state) {
            case AfterOpen:
            case ExpectKey:
                if (t == Tok::RBrace && f.state == AfterOpen) {
                    close_param(f, at);
                    return;
                }
                if (t != Tok::Scalar || !is_string) {
                    fail("expected a param key", at);
                }
                {
                    const std::string key = scalar.get<std::string>();
                    if (key != "bindType" && key != "value" && key != "bindField") {
                        fail("unknown param key \"" + key + "\"", at);
                    }
                    if (!f.seen_keys.insert(key).second) {
                        fail("duplicate param key \"" + key + "\"", at);
                    }
                    f.current_key = key;
                    f.state = ExpectColon;
                }
                return;
            case ExpectColon:
                if (t != Tok::Colon) {
                    fail("expected ':'", at);
                }
                f.state = ExpectValue;
                return;
            case ExpectValue:
                if (f.current_key == "bindType") {
                    if (t != Tok::Scalar || !is_string) {
                        fail("bindType must be a string", at);
                    }
                    const std::string s = scalar.get<std::string>();
                    if (s == "Static") {
                        f.pv_bind_type = dsl::BindType::Static;
                    } else if (s == "Data") {
                        f.pv_bind_type = dsl::BindType::Data;
                    } else {
                        fail("bindType must be \"Static\" or \"Data\"", at);
                    }
                } else if (f.current_key == "value") {
                    if (t != Tok::Scalar || scalar.is_null()) {
                        fail("param value must be a scalar", at);
                    }
                    f.pv_value = std::move(scalar);
                } else {  // bindField
                    if (t != Tok::Scalar || !is_string) {
                        fail("bindField must be a string", at);
                    }
                    f.pv_bind_field = scalar.get<std::string>();
                }
                f.state = AfterValue;
                return;
            case AfterValue:
                if (t == Tok::Comma) {
                    f.state = ExpectKey;
                } else if (t == Tok::RBrace) {
                    close_param(f, at);
                } else {
                    fail("expected ',' or '}'", at);
                }
                return;
        }
    }

    void close_param(Frame& f, std::size_t at) {
        if (!f.pv_bind_type) {
            fail("param is missing bindType", at);
        }
        dsl::ParamValue value;
        if (*f.pv_bind_type == dsl::BindType::Static) {
            if (!f.pv_value || f.pv_bind_field) {
                fail("Static param requires \"value\" and forbids \"bindField\"", at);
            }
            value = dsl::ParamValue::static_value(std::move(*f.pv_value));
        } else {
            if (!f.pv_bind_field || f.pv_value) {
                fail("Data param requires \"bindField\" and forbids \"value\"", at);
            }
            value = dsl::ParamValue::data_binding(std::move(*f.pv_bind_field));
        }
        BuildNode& node = *f.node;
        node.params.emplace(f.param_key, std::move(value));
        stack.pop_back();
        if (node.visible) {
            emit(false, at);
        }
    }

    void children_token(Frame& f, Tok t, std::size_t at) {
        switch (f.state) {
            case AfterOpen:
            case ExpectValue:
                if (t == Tok::RBracket && f.state == AfterOpen) {
                    f.node->children_closed = true;
                    stack.pop_back();
                    return;
                }
                if (t != Tok::LBrace) {
                    fail("expected a child node object", at);
                }
                {
                    auto child = std::make_unique<BuildNode>();
                    child->parent = f.node;
                    BuildNode* raw = child.get();
                    f.node->children.push_back(std::move(child));
                    f.state = AfterValue;
                    stack.push_back(Frame{FrameKind::Node, AfterOpen, raw});
                }
                return;
            case AfterValue:
                if (t == Tok::Comma) {
                    f.state = ExpectValue;
                } else if (t == Tok::RBracket) {
                    f.node->children_closed = true;
                    stack.pop_back();
                } else {
                    fail("expected ',' or ']'", at);
                }
                return;
            default:
                fail("unexpected token in children array", at);
        }
    }

    // ---- byte handling ----

    void byte(unsigned char c, std::size_t at) {
        switch (lex) {
            case Lex::Default:
                default_byte(c, at);
                return;
            case Lex::Str:
                if (expect_low_escape) {
                    if (c != '\\') {
                        fail("expected low surrogate escape", at);
                    }
                    lex = Lex::StrEscape;
                    return;
                }
                if (c == '"') {
                    lex = Lex::Default;
                    token(Tok::Scalar, at, json(std::move(buf)), true);
                    buf.clear();
                } else if (c == '\\') {
                    lex = Lex::StrEscape;
                } else if (c < 0x20) {
                    fail("unescaped control character in string", at);
                } else {
                    buf += static_cast<char>(c);
                }
                return;
            case Lex::StrEscape:
                if (expect_low_escape && c != 'u') {
                    fail("expected low surrogate escape", at);
                }
                switch (c) {
                    case '"': buf += '"'; lex = Lex::Str; break;
                    case '\\': buf += '\\'; lex = Lex::Str; break;
                    case '/': buf += '/'; lex = Lex::Str; break;
                    case 'b': buf += '\b'; lex = Lex::Str; break;
                    case 'f': buf += '\f'; lex = Lex::Str; break;
                    case 'n': buf += '\n'; lex = Lex::Str; break;
                    case 'r': buf += '\r'; lex = Lex::Str; break;
                    case 't': buf += '\t'; lex = Lex::Str; break;
                    case 'u':
                        hex_count = 0;
                        hex_value = 0;
                        lex = Lex::StrUnicode;
                        break;
                    default:
                        fail("invalid escape sequence", at);
                }
                return;
            case Lex::StrUnicode: {
                int digit;
                if (c >= '0' && c <= '9') {
                    digit = c - '0';
                } else if (c >= 'a' && c <= 'f') {
                    digit = c - 'a' + 10;
                } else if (c >= 'A' && c <= 'F') {
                    digit = c - 'A' + 10;
                } else {
                    fail("invalid \\u escape", at);
                }
                hex_value = (hex_value << 4) | static_cast<std::uint32_t>(digit);
                if (++hex_count < 4) {
                    return;
                }
                lex = Lex::Str;
                if (expect_low_escape) {
                    if (hex_value < 0xDC00 || hex_value > 0xDFFF) {
                        fail("invalid low surrogate", at);
                    }
                    const std::uint32_t cp =
                        0x10000 + ((pending_high - 0xD800) << 10) + (hex_value - 0xDC00);
                    utf8_append(buf, cp);
                    pending_high = 0;
                    expect_low_escape = false;
                } else if (hex_value >= 0xD800 && hex_value <= 0xDBFF) {
                    pending_high = hex_value;
                    expect_low_escape = true;
                } else if (hex_value >= 0xDC00 && hex_value <= 0xDFFF) {
                    fail("lone low surrogate", at);
                } else {
                    utf8_append(buf, hex_value);
                }
                return;
            }
            case Lex::Number:
                if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' || c == 'e' ||
                    c == 'E') {
                    buf += static_cast<char>(c);
                    return;
                }
                finish_number(at);
                default_byte(c, at);  // reprocess the delimiter
                return;
            case Lex::Literal:
                if (c >= 'a' && c <= 'z') {
                    buf += static_cast<char>(c);
                    return;
                }
                finish_literal(at);
                default_byte(c, at);
                return;
        }
    }

    void default_byte(unsigned char c, std::size_t at) {
        switch (c) {
            case ' ':
            case '\t':
            case '\n':
            case '\r':
                return;
            case '{': token(Tok::LBrace, at); return;
            case '}': token(Tok::RBrace, at); return;
            case '[': token(Tok::LBracket, at); return;
            case ']': token(Tok::RBracket, at); return;
            case ',': token(Tok::Comma, at); return;
            case ':': token(Tok::Colon, at); return;
            case '"':
                lex = Lex::Str;
                buf.clear();
                return;
            default:
                if (c == '-' || (c >= '0' && c <= '9')) {
                    lex = Lex::Number;
                    buf.clear();
                    buf += static_cast<char>(c);
                    return;
                }
                if (c == 't' || c == 'f' || c == 'n') {
                    lex = Lex::Literal;
                    buf.clear();
                    buf += static_cast<char>(c);
                    return;
                }
                fail("unexpected character", at);
        }
    }

    void finish_number(std::size_t at) {
        if (!valid_number(buf)) {
            fail("malformed number \"" + buf + "\"", at);
        }
        lex = Lex::Default;
        json value = number_to_json(buf);
        buf.clear();
        token(Tok::Scalar, at, std::move(value), false);
    }

    void finish_literal(std::size_t at) {
        lex = Lex::Default;
        json value;
        if (buf == "true") {
            value = json(true);
        } else if (buf == "false") {
            value = json(false);
        } else if (buf == "null") {
            value = json(nullptr);
        } else {
            fail("malformed literal \"" + buf + "\"", at);
        }
        buf.clear();
        token(Tok::Scalar, at, std::move(value), false);
    }

    std::string deepest_open_node() const {
        std::string path;
        std::string name = "(root)";
        for (const Frame& f : stack) {
            if (f.kind == FrameKind::Node && f.node != nullptr) {
                name = f.node->name ? *f.node->name : "(unnamed node)";
            }
        }
        return name;
    }
};

StreamParser::StreamParser() : impl_(std::make_unique<Impl>()) {}
StreamParser::~StreamParser() = default;
StreamParser::StreamParser(StreamParser&&) noexcept = default;
StreamParser& StreamParser::operator=(StreamParser&&) noexcept = default;

std::vector<PartialTree> StreamParser::feed(std::string_view chunk) {
    if (impl_->failed) {
        throw StreamSyntaxError("stream already failed", impl_->offset);
    }
    for (char c : chunk) {
        impl_->byte(static_cast<unsigned char>(c), impl_->offset);
        ++impl_->offset;
    }
    return std::exchange(impl_->pending, {});
}

PartialTree StreamParser::finish() {
    Impl& im = *impl_;
    if (im.failed) {
        throw StreamSyntaxError("stream already failed", im.offset);
    }
    // Flush a token that only a delimiter would have terminated.
    if (im.lex == Impl::Lex::Number) {
        im.finish_number(im.offset);
    } else if (im.lex == Impl::Lex::Literal) {
        im.finish_literal(im.offset);
    }
    if (im.lex != Impl::Lex::Default) {
        throw TruncatedStreamError("stream ended inside a string literal",
                                   im.deepest_open_node());
    }
    if (!im.document_complete) {
        throw TruncatedStreamError(
            "stream ended before the document completed (deepest open node: " +
                im.deepest_open_node() + ")",
            im.deepest_open_node());
    }
    PartialTree out;
    if (im.root) {
        out.root = materialize(*im.root);
    }
    out.complete = true;
    out.bytes_consumed = im.offset;
    return out;
}

std::vector<PartialTree> parse_all(std::string_view text) {
    StreamParser parser;
    std::vector<PartialTree> snapshots = parser.feed(text);
    parser.finish();  // raises TruncatedStreamError on unterminated input
    return snapshots;
}

}  // namespace uidsl::stream
