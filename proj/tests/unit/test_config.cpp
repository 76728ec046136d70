#include <doctest.h>

#include <fstream>

#include "akg/config.hpp"
#include "akg/error.hpp"
#include "fixtures.hpp"

using namespace akg;

TEST_CASE("defaults") {
    ServiceConfig c;
    CHECK(c.chi == 0.6);
    CHECK(c.minsupp == 0.0);
    CHECK(c.relatedness == "token-overlap");
    CHECK(c.relatedness_threshold == 0.7);
    CHECK(c.k == 10);
}

TEST_CASE("config file resolves relative paths") {
    auto c = load_config(fixture::data("config.json"));
    CHECK(c.dataset == fixture::data("fleet_tickets_graded.csv"));
    CHECK(c.dictionary == fixture::data("dictionary.json"));
    CHECK(c.strategy == Strategy::reactive);
    CHECK_NOTHROW(c.validate());
    auto back = config_from_json(to_json(c));
    CHECK(back.dataset == c.dataset);
    CHECK(back.port == c.port);
}

TEST_CASE("bad config values") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"colour", "blue"}}), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"chi", "high"}}), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
    ServiceConfig c;
    c.data_dir = "x";
    c.chi = 1.5;
    CHECK_THROWS_AS(c.validate(), Error);
    c.chi = 0.6;
    c.k = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.k = 1;
    c.port = 70000;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("environment overrides") {
    std::map<std::string, std::string> env{{"AKG_PORT", "9090"}, {"AKG_CHI", "0.75"}, {"AKG_STRATEGY", "planned"},
                                           {"AKG_APPLY_FEEDBACK", "false"}, {"AKG_DATA_DIR", "/tmp/x"}};
    auto lookup = [&](const char* key) -> const char* {
        auto it = env.find(key);
        return it == env.end() ? nullptr : it->second.c_str();
    };
    ServiceConfig c;
    apply_env_overrides(c, lookup);
    CHECK(c.port == 9090);
    CHECK(c.chi == 0.75);
    CHECK(c.strategy == Strategy::planned);
    CHECK_FALSE(c.apply_feedback);
    CHECK(c.data_dir == "/tmp/x");
    env["AKG_K"] = "many";
    CHECK_THROWS_AS(apply_env_overrides(c, lookup), Error);
}
