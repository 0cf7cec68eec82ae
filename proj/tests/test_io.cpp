#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "cbnorm/channels.hpp"
#include "cbnorm/io.hpp"
#include "doctest.h"

using namespace cbnorm;

namespace {

std::string parse_error_message(const std::string& text) {
    try {
        parse_input(text, "test");
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("density pairs parse") {
    const std::string text = R"({
        "kind": "density-pair",
        "dims": {"n": 2},
        "matrices": {
            "P": [[[0.5, 0.0], [0.0, 0.1]], [[0.0, -0.1], [0.5, 0.0]]],
            "Q": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
        }
    })";
    InputDocument doc = parse_input(text, "test");
    CHECK(doc.kind == "density-pair");
    CHECK(doc.n == 2);
    REQUIRE(doc.matrices.size() == 2);
    CHECK(doc.matrices[0](0, 1) == Complex(0.0, 0.1));
    CHECK(doc.matrices[1](0, 0) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(doc.to_channel(), Error);
}

TEST_CASE("channel kinds parse and convert") {
    const std::string stine = R"({
        "kind": "stinespring",
        "dims": {"n": 1, "m": 2, "k": 1},
        "matrices": {
            "A0": [[[1.0, 0.0]], [[0.0, 0.0]]],
            "A1": [[[1.0, 0.0]], [[0.0, 0.0]]]
        }
    })";
    InputDocument sdoc = parse_input(stine, "test");
    ChannelRep srep = sdoc.to_channel();
    CHECK(srep.is_stinespring());
    CHECK(srep.input_dim() == 1);
    CHECK(srep.output_dim() == 2);

    const std::string choi = R"({
        "kind": "choi",
        "dims": {"n": 1, "m": 2},
        "matrices": {
            "J": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
        }
    })";
    InputDocument cdoc = parse_input(choi, "test");
    ChannelRep crep = cdoc.to_channel();
    CHECK(crep.is_choi());
    CHECK(crep.output_dim() == 2);
}

TEST_CASE("syntax errors carry line positions") {
    const std::string broken = "{\n  \"kind\": \"choi\",\n  oops\n}";
    try {
        parse_input(broken, "test");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("invalid JSON") != std::string::npos);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("schema errors name the offending field") {
    CHECK(parse_error_message(R"({"dims": {"n": 2}})").find("\"kind\"") != std::string::npos);
    CHECK(parse_error_message(R"({"kind": "waffle", "dims": {"n": 2}})").find("density-pair") !=
          std::string::npos);
    CHECK(parse_error_message(R"({"kind": "density-pair"})").find("\"dims\"") !=
          std::string::npos);
    CHECK(parse_error_message(R"({"kind": "density-pair", "dims": 3, "matrices": {}})")
              .find("must be an object") != std::string::npos);
    CHECK(parse_error_message(R"({"kind": "density-pair", "dims": {}, "matrices": {}})")
              .find("\"dims.n\"") != std::string::npos);
    CHECK(parse_error_message(R"({"kind": "density-pair", "dims": {"n": 0}, "matrices": {}})")
              .find("positive") != std::string::npos);

    const std::string missing_q = R"({
        "kind": "density-pair",
        "dims": {"n": 1},
        "matrices": {"P": [[[1.0, 0.0]]]}
    })";
    CHECK(parse_error_message(missing_q).find("\"matrices.Q\"") != std::string::npos);

    const std::string short_row = R"({
        "kind": "density-pair",
        "dims": {"n": 2},
        "matrices": {
            "P": [[[1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
            "Q": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
        }
    })";
    CHECK(parse_error_message(short_row).find("row 0") != std::string::npos);

    const std::string bad_entry = R"({
        "kind": "density-pair",
        "dims": {"n": 1},
        "matrices": {"P": [[1.0]], "Q": [[[1.0, 0.0]]]}
    })";
    CHECK(parse_error_message(bad_entry).find("[re, im]") != std::string::npos);
}

TEST_CASE("non-finite entries are rejected") {
    const std::string huge = R"({
        "kind": "density-pair",
        "dims": {"n": 1},
        "matrices": {"P": [[[1e999, 0.0]]], "Q": [[[1.0, 0.0]]]}
    })";
    CHECK_THROWS_AS(parse_input(huge, "test"), ParseError);
}

TEST_CASE("unreadable files raise a position-free parse error") {
    try {
        load_input("/nonexistent/nope.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 0);
        CHECK(std::string(e.what()).find("cannot open") != std::string::npos);
    }
}
