#include "doctest.h"

#include "core/errors.hpp"
#include "core/text.hpp"
#include "ingest/comps.hpp"
#include "ingest/xml.hpp"
#include "test_support.hpp"

using namespace ftb;

TEST_CASE("text helpers") {
    CHECK(to_lower("AbC") == "abc");
    CHECK(trim("  x y \n") == "x y");
    CHECK(trim("") == "");
    CHECK(normalize_name("  Web  Server! ") == "web server");
    CHECK(slugify("Web  Server!") == "web-server");
    CHECK(slugify("C++ (Dev)") == "c-dev");
    CHECK(title_case("hello world") == "Hello World");
    CHECK(first_line("a\nb\nc") == "a");
    CHECK(first_line("plain") == "plain");

    const std::vector<std::string> tokens = tokenize("Hello, World! 2nd try_");
    CHECK(tokens == std::vector<std::string>{"hello", "world", "2nd", "try"});
    CHECK(tokenize(" ,;! ").empty());
}

TEST_CASE("xml parser handles prolog, doctype, comments, and entities") {
    const XmlElement root = parse_xml(
        "<?xml version=\"1.0\"?>\n"
        "<!DOCTYPE comps [ <!ELEMENT x (y)> ]>\n"
        "<!-- header comment -->\n"
        "<comps><group><name>A &amp; B &#65;</name></group></comps>");
    CHECK(root.name == "comps");
    REQUIRE(root.children.size() == 1);
    const XmlElement* name = root.children[0].find_child("name");
    REQUIRE(name != nullptr);
    CHECK(name->text == "A & B A");
}

TEST_CASE("xml parser reports malformed input") {
    CHECK_THROWS_AS(parse_xml("<comps><group></comps>"), error);
    CHECK_THROWS_AS(parse_xml(""), error);
    CHECK_THROWS_AS(parse_xml("<a>&bogus;</a>"), error);
    try {
        parse_xml("<comps><group></comps>");
        FAIL("expected a parse error");
    } catch (const error& e) {
        CHECK(e.code() == errc::malformed_metadata);
    }
}

TEST_CASE("comps parsing extracts untranslated names and descriptions") {
    const std::string bytes = ftest::read_file(ftest::fixture_path("comps_lang.xml"));
    const std::vector<RawArtifact> raws = parse_group_metadata(bytes, MetadataFormat::comps_xml);
    REQUIRE(raws.size() == 1);
    CHECK(raws[0].name == "Translated Group");
    CHECK(raws[0].description == "The untranslated description wins.");
    CHECK(raws[0].raw_id == "translated");
}

TEST_CASE("comps parsing skips nameless groups and tolerates missing descriptions") {
    const auto nameless = parse_group_metadata(
        ftest::read_file(ftest::fixture_path("comps_nameless.xml")), MetadataFormat::comps_xml);
    REQUIRE(nameless.size() == 1);
    CHECK(nameless[0].name == "Named Group");

    const auto bare = parse_group_metadata(
        ftest::read_file(ftest::fixture_path("comps_missing_description.xml")),
        MetadataFormat::comps_xml);
    REQUIRE(bare.size() == 1);
    CHECK(bare[0].name == "Bare Group");
    CHECK(bare[0].description.empty());

    const auto empty = parse_group_metadata(
        ftest::read_file(ftest::fixture_path("comps_empty.xml")), MetadataFormat::comps_xml);
    CHECK(empty.empty());
}

TEST_CASE("comps parsing rejects malformed files and wrong roots") {
    CHECK_THROWS_AS(parse_group_metadata(
                        ftest::read_file(ftest::fixture_path("comps_malformed.xml")),
                        MetadataFormat::comps_xml),
                    error);
    try {
        parse_group_metadata("<notcomps></notcomps>", MetadataFormat::comps_xml);
        FAIL("expected a root element error");
    } catch (const error& e) {
        CHECK(e.code() == errc::malformed_metadata);
    }
}

TEST_CASE("fixture sources parse to the hand-counted group totals") {
    const struct {
        const char* file;
        std::size_t expected;
    } cases[] = {
        {"comps_alpha.xml", 16}, {"comps_beta.xml", 9},  {"comps_gamma.xml", 5},
        {"comps_delta.xml", 7},  {"comps_epsilon.xml", 4},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        const auto raws = parse_group_metadata(ftest::read_file(ftest::fixture_path(c.file)),
                                               MetadataFormat::comps_xml);
        CHECK(raws.size() == c.expected);
    }
}

TEST_CASE("alpha fixture decodes entities and ignores translations") {
    const auto raws = parse_group_metadata(
        ftest::read_file(ftest::fixture_path("comps_alpha.xml")), MetadataFormat::comps_xml);
    REQUIRE(raws.size() == 16);
    CHECK(raws[0].name == "Editors");
    CHECK(raws[0].description ==
          "Text editors and integrated development tools for writing code and documents.");
    bool saw_mail = false;
    for (const RawArtifact& raw : raws) {
        if (raw.raw_id == "mail-server") {
            saw_mail = true;
            CHECK(raw.description ==
                  "Mail transfer agents and services for sending & receiving email.");
        }
    }
    CHECK(saw_mail);
}

TEST_CASE("library json source format") {
    const auto raws = parse_group_metadata(
        ftest::read_file(ftest::fixture_path("library_json_source.json")),
        MetadataFormat::library_json);
    REQUIRE(raws.size() == 3);
    CHECK(raws[0].raw_id == "alpha-entry");
    CHECK(raws[1].raw_id == "beta entry");  // normalized from the name
    CHECK(raws[2].name == "Web Server");

    CHECK_THROWS_AS(parse_group_metadata("{\"artifacts\": 3}", MetadataFormat::library_json),
                    error);
}

TEST_CASE("metadata format names round-trip") {
    CHECK(metadata_format_from_name("comps_xml") == MetadataFormat::comps_xml);
    CHECK(metadata_format_from_name("library_json") == MetadataFormat::library_json);
    CHECK(metadata_format_name(MetadataFormat::comps_xml) == "comps_xml");
    try {
        metadata_format_from_name("tarball");
        FAIL("expected an unsupported format error");
    } catch (const error& e) {
        CHECK(e.code() == errc::unsupported_format);
    }
}
