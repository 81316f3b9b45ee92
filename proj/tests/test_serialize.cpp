#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>

#include "monores/parse.hpp"
#include "monores/serialize.hpp"

using namespace monores;

namespace {

ChartTreeDoc doc_for(const std::string& text) {
    auto vars = scan_variables(text);
    auto res = resolve_germ({parse_polynomial(text, vars)}, {});
    return make_doc(std::move(res), vars, {text});
}

void count_tags(const nlohmann::json& node, std::map<std::string, int>& tags) {
    for (auto& s : node.at("steps"))
        for (auto& [k, v] : s.items()) ++tags[k];
    for (auto& c : node.at("children")) count_tags(c, tags);
}

}  // namespace

TEST_CASE("chart tree serializes with the expected shape") {
    auto doc = doc_for("x^2 + y^3");
    auto j = to_json(doc);
    CHECK(j.at("dimension") == 2);
    CHECK(j.at("functions").at(0) == "x^2 + y^3");
    CHECK(j.at("variables") == nlohmann::json::array({"x", "y"}));
    CHECK(j.at("config").at("D") == 24);
    CHECK(j.at("config").at("constants").at("eta").is_string());
    CHECK(j.at("root").at("status") == "internal");
    CHECK(j.at("root").at("children").size() == 4);

    std::map<std::string, int> tags;
    count_tags(j.at("root"), tags);
    CHECK(tags["reflection"] >= 4);
    CHECK(tags["monomial_map"] >= 4);
    CHECK(tags["translation"] >= 1);
}

TEST_CASE("quasi-translation steps serialize with their series") {
    auto doc = doc_for("(y - x^2)^2 + x^7");
    auto j = to_json(doc);
    std::map<std::string, int> tags;
    count_tags(j.at("root"), tags);
    CHECK(tags["quasi_translation"] >= 1);
}

TEST_CASE("round trip is the identity on the document") {
    for (auto text : {"x^2 + y^3", "x*y^2", "(y - x^2)^2 + x^7"}) {
        auto doc = doc_for(text);
        auto j = to_json(doc);
        auto doc2 = doc_from_json(j);
        auto j2 = to_json(doc2);
        CHECK(j == j2);
    }
}

TEST_CASE("terminal leaves carry forms, internal nodes do not") {
    auto doc = doc_for("x*y");
    auto j = to_json(doc);
    CHECK(!j.at("root").contains("f_forms"));
    std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& node) {
        if (node.at("status") == "terminal") {
            REQUIRE(node.contains("f_forms"));
            REQUIRE(node.contains("jac_form"));
            CHECK(node.at("jac_form").at("unit_bounds").size() == 2);
        } else {
            CHECK(!node.contains("jac_form"));
        }
        for (auto& c : node.at("children")) walk(c);
    };
    walk(j.at("root"));
}
