#include <gtest/gtest.h>

#include "btz/json_io.hpp"

using namespace btz;

TEST(Config, ParseAndFormat)
{
    const RunConfig c = parse_config("# comment\nseed = 42\nleaves = 0.25, 3\nnormalize_theta = yes\nt_max = 12.5 # inline\n");
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.leaves, (std::vector<double>{0.25, 3.0}));
    EXPECT_TRUE(c.normalize_theta);
    EXPECT_EQ(c.t_max, 12.5);
    EXPECT_EQ(c.grid_n, 15);
    const RunConfig back = parse_config(format_config(c));
    EXPECT_EQ(format_config(back), format_config(c));
}

TEST(Config, RejectsBadInput)
{
    for (const char* text : {"nonsense = 1", "seed = abc", "t_min = 0", "grid_n", "normalize_theta = maybe",
                             "t_min = 5\nt_max = 1"}) {
        try {
            parse_config(text);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidInput) << text;
        }
    }
}

TEST(Json, SeventeenDigits)
{
    Json j = {{"x", 0.1}, {"n", 3}, {"v", Json::array({1.0, -2.5})}};
    const std::string s = dump17(j);
    EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(s.find("\"n\": 3"), std::string::npos);
    EXPECT_NE(s.find("[1.0, -2.5]"), std::string::npos);
    EXPECT_EQ(parse_json(s)["x"].get<double>(), 0.1);
    try {
        parse_json("{\"a\": ");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
    }
}

TEST(Json, RepresentationRoundTrip)
{
    for (const auto& name : builtin_names()) {
        const BuiltinExample ex = builtin_example(name, true);
        const Json j = representation_to_json(ex.rep);
        const AffineRepresentation back = representation_from_json(parse_json(dump17(j)));
        EXPECT_EQ(dump17(representation_to_json(back)), dump17(j));
        EXPECT_EQ(back.certificate, ex.rep.certificate);
        for (const auto& [g, a] : ex.rep.generators) {
            EXPECT_EQ(back.generator(g).translation(), a.translation());
            EXPECT_EQ(back.generator(g).linear().matrix(), a.linear().matrix());
        }
        const IdealTriangulation tri = triangulation_from_json(parse_json(dump17(triangulation_to_json(ex.tri))));
        EXPECT_EQ(dump17(triangulation_to_json(tri)), dump17(triangulation_to_json(ex.tri)));
    }
}

TEST(Json, MissingPeripheralIsCompleted)
{
    const BuiltinExample ex = builtin_example("gamma2");
    Json j = representation_to_json(ex.rep);
    j["generators"].erase("c3");
    const AffineRepresentation rep = representation_from_json(j);
    EXPECT_LT((rep.generator("c3").linear().matrix() - ex.rep.generator("c3").linear().matrix()).norm(), 1e-12);
    j["generators"].erase("c2");
    EXPECT_THROW(representation_from_json(j), Error);
    Json unknown = representation_to_json(ex.rep);
    unknown["generators"]["z9"] = unknown["generators"]["c1"];
    try {
        representation_from_json(unknown);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownGenerator);
    }
}

TEST(Json, Profiles)
{
    const BoundaryProfile bp = profile_from_json(parse_json(R"({"R": 2, "cos": [0.1], "sin": [0, 0.3], "const": 0.5})"));
    EXPECT_EQ(bp.R, 2.0);
    EXPECT_EQ(bp.cos, std::vector<double>{0.1});
    EXPECT_EQ(bp.constant, 0.5);
    const BoundaryProfile back = profile_from_json(profile_to_json(bp));
    EXPECT_EQ(back.sin, bp.sin);
    EXPECT_THROW(profile_from_json(parse_json(R"({"R": -1})")), Error);
    EXPECT_THROW(profile_from_json(parse_json(R"({"cos": [1]})")), Error);
}

TEST(Json, ConfigEmbedding)
{
    RunConfig c;
    c.seed = 77;
    c.trace_step = 0.013;
    EXPECT_EQ(format_config(config_from_json(config_to_json(c))), format_config(c));
}
