#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "uidsl/dsl.hpp"
#include "uidsl/errors.hpp"
#include "uidsl/stream.hpp"

// Deterministic HTML emission from a DSL tree, batch or per streaming
// snapshot. Output bytes are identical across runs for identical input.

namespace uidsl::render {

struct RenderOptions {
    // href emitted on the utility-CSS <link> in the document head.
    std::string inline_stylesheet_href = "styles.css";
};

struct RenderOutput {
    std::string html;
    std::vector<std::string> warnings;
};

// Tag nodes become elements; className maps to the class attribute verbatim;
// the textContent param becomes an escaped text child placed before element
// children; other params become attributes in sorted key order. Component
// nodes become <div data-component="NAME"> wrappers. Void elements (img, br,
// hr, input, meta, link) reject children.
RenderOutput render(const dsl::DslNode& root, const RenderOptions& options = {});

// One output per snapshot; the final output equals render() of the
// batch-parsed tree.
std::vector<RenderOutput> render_stream(std::span<const stream::PartialTree> snapshots,
                                        const RenderOptions& options = {});

struct RenderCheck {
    bool renderable = false;
    std::vector<std::string> warnings;
};

// True iff dsl::validate passes against the registry and render() raises no
// error. Used as the render-success signal for preference-pair construction.
RenderCheck check_renderable(const dsl::DslNode& root,
                             const std::set<std::string>& component_registry = {});

}  // namespace uidsl::render
