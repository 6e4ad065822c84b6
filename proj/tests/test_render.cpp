#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "uidsl/binding.hpp"
#include "uidsl/render.hpp"
#include "uidsl/stream.hpp"

using namespace uidsl;
using nlohmann::json;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

dsl::DslNode bound_event_card() {
    const auto root = dsl::parse_document(fixtures::event_card_json());
    const json data = json::parse(fixtures::event_card_data_json());
    return binding::bind_tree(root, data, binding::BindPolicy::Strict).root;
}

}  // namespace

TEST_CASE("render: link fragment") {
    const auto root = dsl::parse_document(
        R"({"type":"Tag","name":"a","className":"color-gray-500",
            "params":{"textContent":{"bindType":"Static","value":"Test Link"}}})");
    const auto out = render::render(root);
    CHECK(out.html.find(R"(<a class="color-gray-500">Test Link</a>)") != std::string::npos);
    CHECK(out.warnings.empty());
}

TEST_CASE("render: empty div and full document shell") {
    const auto root = dsl::parse_document(R"({"type":"Tag","name":"div"})");
    const auto out = render::render(root, {.inline_stylesheet_href = "utility.css"});
    CHECK(out.html.find("<div></div>") != std::string::npos);
    CHECK(out.html.find("<!DOCTYPE html>") == 0);
    CHECK(out.html.find(R"(<link rel="stylesheet" href="utility.css">)") != std::string::npos);
    CHECK(out.html.find("</html>") != std::string::npos);
}

TEST_CASE("render: bound event card emits the expected elements in order") {
    const auto out = render::render(bound_event_card());
    CHECK(count_occurrences(out.html, "<img") == 1);
    CHECK(count_occurrences(out.html, "<h2") == 1);
    CHECK(count_occurrences(out.html, "<p") == 4);
    CHECK(count_occurrences(out.html, "<a ") == 1);
    const std::size_t img = out.html.find("<img");
    const std::size_t h2 = out.html.find("<h2");
    const std::size_t p = out.html.find("<p");
    const std::size_t a = out.html.find("<a ");
    CHECK(img < h2);
    CHECK(h2 < p);
    CHECK(p < a);
    CHECK(out.html.find("Spring Fair") != std::string::npos);
    CHECK(out.html.find("Learn More") != std::string::npos);

    // Byte determinism.
    const auto again = render::render(bound_event_card());
    CHECK(out.html == again.html);
}

TEST_CASE("render: void elements reject children and text") {
    dsl::DslNode img;
    img.name = "img";
    img.children = std::vector<dsl::DslNode>{dsl::parse_document(R"({"type":"Tag","name":"br"})")};
    CHECK_THROWS_AS(render::render(img), VoidElementChildrenError);

    dsl::DslNode img_text;
    img_text.name = "img";
    dsl::ParamMap params;
    params.emplace("textContent", dsl::ParamValue::static_value(json("x")));
    img_text.params = std::move(params);
    CHECK_THROWS_AS(render::render(img_text), VoidElementChildrenError);

    const auto br = dsl::parse_document(R"({"type":"Tag","name":"br"})");
    const auto out = render::render(br);
    CHECK(out.html.find("<br>") != std::string::npos);
    CHECK(out.html.find("</br>") == std::string::npos);
}

TEST_CASE("render: unknown tags are emitted with a warning") {
    const auto root = dsl::parse_document(R"({"type":"Tag","name":"sparkle"})");
    const auto out = render::render(root);
    CHECK(out.html.find("<sparkle></sparkle>") != std::string::npos);
    REQUIRE(out.warnings.size() == 1);
    CHECK(out.warnings[0].find("sparkle") != std::string::npos);
}

TEST_CASE("render: text and attributes are escaped") {
    const auto root = dsl::parse_document(
        R"({"type":"Tag","name":"a",
            "params":{"textContent":{"bindType":"Static","value":"5 < 6 & \"quoted\""},
                      "href":{"bindType":"Static","value":"/q?a=1&b=\"2\""}}})");
    const auto out = render::render(root);
    CHECK(out.html.find("5 &lt; 6 &amp; \"quoted\"") != std::string::npos);
    CHECK(out.html.find(R"(href="/q?a=1&amp;b=&quot;2&quot;")") != std::string::npos);
}

TEST_CASE("render: components become annotated divs") {
    const auto root = dsl::parse_document(
        R"({"type":"Component","name":"PriceTag","className":"font-bold",
            "children":[{"type":"Tag","name":"span",
                         "params":{"textContent":{"bindType":"Static","value":"$5"}}}]})");
    const auto out = render::render(root);
    CHECK(out.html.find(R"(<div class="font-bold" data-component="PriceTag"><span>$5</span></div>)") !=
          std::string::npos);
}

TEST_CASE("render: attribute order is class first then sorted params") {
    const auto root = dsl::parse_document(
        R"({"type":"Tag","name":"img","className":"w-full",
            "params":{"src":{"bindType":"Static","value":"pic"},
                      "alt":{"bindType":"Static","value":"photo"}}})");
    const auto out = render::render(root);
    CHECK(out.html.find(R"(<img class="w-full" alt="photo" src="pic">)") != std::string::npos);
}

TEST_CASE("render: raw Data params render as placeholder text") {
    const auto root = dsl::parse_document(
        R"({"type":"Tag","name":"p",
            "params":{"textContent":{"bindType":"Data","bindField":"title"}}})");
    const auto out = render::render(root);
    CHECK(out.html.find("<p>⟦data:title⟧</p>") != std::string::npos);
}

TEST_CASE("render: numeric and boolean values use shortest decimal form") {
    const auto root = dsl::parse_document(
        R"({"type":"Tag","name":"p",
            "params":{"textContent":{"bindType":"Static","value":41.5},
                      "data-live":{"bindType":"Static","value":true}}})");
    const auto out = render::render(root);
    CHECK(out.html.find(R"(<p data-live="true">41.5</p>)") != std::string::npos);
}

TEST_CASE("render_stream: final frame equals the batch render") {
    const std::string text = fixtures::event_card_json();
    const auto snaps = stream::parse_all(text);
    const auto frames = render::render_stream(snaps);
    REQUIRE(frames.size() == snaps.size());
    const auto batch = render::render(dsl::parse_document(text));
    CHECK(frames.back().html == batch.html);
}

TEST_CASE("render_stream: text appears exactly from the frame its param completed in") {
    const std::string text =
        R"({"type":"Tag","name":"p","params":{"textContent":{"bindType":"Static","value":"Hello"}}})";
    const auto snaps = stream::parse_all(text);
    const auto frames = render::render_stream(snaps);
    REQUIRE(frames.size() >= 2);
    std::size_t first_with_text = frames.size();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].html.find("Hello") != std::string::npos) {
            first_with_text = i;
            break;
        }
    }
    REQUIRE(first_with_text < frames.size());
    CHECK(first_with_text > 0);  // identifiability frame precedes the text
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const bool has_text = frames[i].html.find("Hello") != std::string::npos;
        CHECK(has_text == (i >= first_with_text));
    }
}

TEST_CASE("check_renderable") {
    CHECK(render::check_renderable(dsl::parse_document(fixtures::event_card_json())).renderable);

    dsl::DslNode img;
    img.name = "img";
    img.children = std::vector<dsl::DslNode>{dsl::parse_document(R"({"type":"Tag","name":"br"})")};
    const auto check = render::check_renderable(img);
    CHECK_FALSE(check.renderable);
    CHECK_FALSE(check.warnings.empty());

    // Unregistered components fail validation, registered ones pass.
    const auto comp = dsl::parse_document(R"({"type":"Component","name":"Card"})");
    CHECK_FALSE(render::check_renderable(comp).renderable);
    CHECK(render::check_renderable(comp, {"Card"}).renderable);
}
