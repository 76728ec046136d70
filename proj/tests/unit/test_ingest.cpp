#include <doctest.h>

#include <fstream>

#include "akg/error.hpp"
#include "akg/canonical.hpp"
#include "akg/ingest.hpp"
#include "akg/lattice.hpp"
#include "fixtures.hpp"

using namespace akg;

namespace {

Ticket ticket_t() {
    return {"", "Emirates", "Engine separation, hot start and fuel leak observed after landing", "Boeing 777-300ER",
            "2021-03-14T09:30:00Z", "USA"};
}

std::set<std::string> names(const FeatureSet& f) { return {f.features().begin(), f.features().end()}; }

}  // namespace

TEST_CASE("ticket validation") {
    CHECK_NOTHROW(validate_ticket(ticket_t()));
    auto t = ticket_t();
    t.problem_description = "   ";
    CHECK_THROWS_AS(validate_ticket(t), Error);
    t = ticket_t();
    t.customer.clear();
    CHECK_THROWS_AS(validate_ticket(t), Error);
    t = ticket_t();
    t.timestamp = "yesterday";
    CHECK_THROWS_AS(validate_ticket(t), Error);
    CHECK(timestamp_year("2019-05-01") == 2019);
    CHECK(timestamp_year("2018-01-01T00:00:00Z") == 2018);
    CHECK_THROWS_AS(ticket_from_json(nlohmann::json{{"customer", "x"}}), Error);
    auto back = ticket_from_json(to_json(ticket_t()));
    CHECK(back.problem_description == ticket_t().problem_description);
    CHECK(back.location == "USA");
}

TEST_CASE("dictionary scan is leftmost-longest and case-insensitive") {
    auto dict = fixture::dictionary();
    auto m = dict.scan("Hot start, Engine separation, MINOR fuel leak");
    REQUIRE(m.size() == 3);
    CHECK(m[0].entry.attribute == "HotStart");
    CHECK(m[1].entry.attribute == "EngineSeparation");
    CHECK(m[2].entry.attribute == "FuelLeak");
    CHECK(m[2].entry.confidence == 0.7);
    CHECK(m[2].length == 3);
    CHECK(dict.scan("nothing relevant here").empty());
}

TEST_CASE("dictionary order does not change extraction") {
    nlohmann::json a = nlohmann::json::parse(R"({"fuel leak": {"attribute": "FuelLeak", "confidence": 1.0},
        "minor fuel leak": {"attribute": "FuelLeak", "confidence": 0.7},
        "leak": {"attribute": "Leak", "confidence": 0.4}})");
    TaxonomyDictionary d1 = TaxonomyDictionary::from_json(a), d2;
    d2.add("leak", {"Leak", 0.4, AttributeKind::symptom});
    d2.add("minor fuel leak", {"FuelLeak", 0.7, AttributeKind::symptom});
    d2.add("fuel leak", {"FuelLeak", 1.0, AttributeKind::symptom});
    auto t = ticket_t();
    t.problem_description = "minor fuel leak then leak";
    StrategyPreset p(Strategy::reactive);
    auto x1 = extract_attributes(t, d1, p), x2 = extract_attributes(t, d2, p);
    REQUIRE(x1.size() == x2.size());
    for (std::size_t i = 0; i < x1.size(); ++i) {
        CHECK(x1[i].attribute.name == x2[i].attribute.name);
        CHECK(x1[i].membership == x2[i].membership);
    }
}

TEST_CASE("dictionary errors") {
    TaxonomyDictionary d;
    d.add("fuel leak", {"FuelLeak", 1.0, AttributeKind::symptom});
    CHECK_THROWS_AS(d.add("Fuel  Leak", {"Other", 1.0, AttributeKind::symptom}), Error);
    CHECK_THROWS_AS(d.add("x", {"X", 1.4, AttributeKind::symptom}), Error);
    CHECK_THROWS_AS(d.add("  ", {"X", 1.0, AttributeKind::symptom}), Error);
    CHECK_THROWS_AS(TaxonomyDictionary::from_json(nlohmann::json::array()), Error);
    CHECK_THROWS_AS(TaxonomyDictionary::load("/nonexistent/dict.json"), Error);
}

TEST_CASE("worked example ticket features") {
    auto f = extract_features(ticket_t(), fixture::dictionary(), StrategyPreset(Strategy::reactive));
    CHECK(names(f) == std::set<std::string>{"EngineSeparation", "FuelLeak", "HotStart"});

    auto planned = extract_features(ticket_t(), fixture::dictionary(), StrategyPreset(Strategy::planned));
    for (const char* n : {"EngineSeparation", "HotStart", "FuelLeak", "Model_Boeing777-300ER", "Country_USA",
                          "Client_Emirates", "Year_2021"}) {
        CHECK(names(planned).count(n) == 1);
    }
}

TEST_CASE("five-ticket sample row 2 description") {
    auto t = ticket_t();
    t.problem_description = "Fuel leak, Engine separation";
    auto f = names(extract_features(t, fixture::dictionary(), StrategyPreset(Strategy::planned)));
    CHECK(f.count("FuelLeak") == 1);
    CHECK(f.count("EngineSeparation") == 1);
    CHECK(f.count("Model_Boeing777-300ER") == 1);
}

TEST_CASE("no dictionary hit leaves structured features only") {
    auto t = ticket_t();
    t.problem_description = "unexplained noise in cabin";
    auto f = names(extract_features(t, fixture::dictionary(), StrategyPreset(Strategy::planned)));
    CHECK(f == std::set<std::string>{"Client_Emirates", "Country_USA", "Model_Boeing777-300ER", "Year_2021"});
    CHECK(extract_features(t, TaxonomyDictionary{}, StrategyPreset(Strategy::planned)).size() == 4);
    CHECK(extract_features(t, fixture::dictionary(), StrategyPreset(Strategy::reactive)).empty());
}

TEST_CASE("strategy presets filter attribute kinds") {
    auto t = ticket_t();
    t.problem_description = "fuel leak after foreign object damage, high EGT";
    auto dict = fixture::dictionary();
    auto reactive = names(extract_features(t, dict, StrategyPreset(Strategy::reactive)));
    auto proactive = names(extract_features(t, dict, StrategyPreset(Strategy::proactive)));
    auto predictive = names(extract_features(t, dict, StrategyPreset(Strategy::predictive)));
    CHECK(reactive == std::set<std::string>{"FuelLeak"});
    CHECK(proactive.count("ForeignObjectDamage") == 1);
    CHECK(proactive.count("HighEGT") == 0);
    CHECK(proactive.count("Year_2021") == 0);
    CHECK(predictive.count("HighEGT") == 1);
    CHECK(predictive.count("ForeignObjectDamage") == 0);
    CHECK(predictive.count("Year_2021") == 1);

    CHECK(StrategyPreset(Strategy::reactive).includes(AttributeKind::symptom));
    CHECK(StrategyPreset(Strategy::planned).includes(AttributeKind::time_bucket));
    CHECK(StrategyPreset(Strategy::proactive).includes(AttributeKind::cause));
    CHECK(StrategyPreset(Strategy::predictive).includes(AttributeKind::sensor_observation));
    CHECK_THROWS_AS(StrategyPreset(Strategy::proactive, {AttributeKind::symptom}), Error);
    CHECK_NOTHROW(StrategyPreset(Strategy::reactive, {AttributeKind::symptom, AttributeKind::model}));
    CHECK_THROWS_AS(parse_strategy("corrective"), Error);
}

TEST_CASE("every emitted name is canonical") {
    auto loaded = load_dataset(fixture::data("fleet_tickets_graded.csv"));
    auto dict = fixture::dictionary();
    for (auto s : {Strategy::reactive, Strategy::planned, Strategy::proactive, Strategy::predictive}) {
        for (const auto& t : loaded.tickets) {
            auto fs = extract_features(t, dict, StrategyPreset(s));
            for (const auto& f : fs.features()) CHECK(canonicalize(f) == f);
        }
    }
}

TEST_CASE("five-ticket sample row 1 as a context row") {
    auto loaded = load_dataset(fixture::data("fleet_tickets.csv"));
    REQUIRE(loaded.tickets.size() == 5);
    auto row = ticket_to_context_row(loaded.tickets[0], fixture::dictionary(), StrategyPreset(Strategy::planned));
    CHECK(row.object.name == "ticket_1");
    CHECK(row.object.kind == ObjectKind::ticket);
    std::map<std::string, double> got;
    for (const auto& m : row.memberships) got[m.attribute.name] = m.membership;
    CHECK(got == std::map<std::string, double>{{"ReverserInadvertedDeploy", 1.0},
                                               {"Model_Boeing777-300ER", 1.0},
                                               {"Country_USA", 1.0},
                                               {"Year_2019", 1.0},
                                               {"Client_Emirates", 1.0}});
}

TEST_CASE("dictionary confidence passes through as membership") {
    TaxonomyDictionary d;
    d.add("surge", {"Surge", 0.8, AttributeKind::symptom});
    auto t = ticket_t();
    t.id = "ticket_9";
    t.problem_description = "Surge on climb";
    auto row = ticket_to_context_row(t, d, StrategyPreset(Strategy::reactive));
    REQUIRE(row.memberships.size() == 1);
    CHECK(row.memberships[0].membership == 0.8);
}

TEST_CASE("duplicate ticket ids are rejected when building a context") {
    auto loaded = load_dataset(fixture::data("fleet_tickets.csv"));
    auto tickets = loaded.tickets;
    tickets.push_back(tickets[0]);
    CHECK_THROWS_AS(build_context(tickets, fixture::dictionary(), StrategyPreset(Strategy::reactive)), Error);
}

TEST_CASE("five-ticket sample lattice holds EngineSeparation with three tickets") {
    auto ctx = fixture::fleet_tickets(Strategy::planned);
    auto l = build_lattice(ctx);
    auto id = ctx.attribute_index("EngineSeparation");
    Bitset intent(ctx.attribute_count());
    intent.set(id);
    auto c = l.find_by_intent(intent);
    REQUIRE(c);
    CHECK(l.concept_at(*c).extent.count() == 3);
}

TEST_CASE("CSV loading") {
    auto loaded = load_dataset(fixture::data("fleet_tickets.csv"));
    CHECK(loaded.errors.empty());
    CHECK(loaded.tickets[1].problem_description == "Fuel leak, Engine separation");
    CHECK(loaded.tickets[2].location == "Germany");
    CHECK(loaded.tickets[2].customer == "EasyJet");
    CHECK(timestamp_year(loaded.tickets[4].timestamp) == 2017);

    auto empty = parse_csv_dataset("");
    CHECK(empty.tickets.empty());
    CHECK_FALSE(empty.warnings.empty());

    auto partial = parse_csv_dataset(
        "model,selling_country,selling_year,client,symptoms\n"
        "A380-800,Germany,2018,EasyJet,Engine separation\n"
        "A330-200,France,,Alitalia,Tail pipe fires\n"
        "Boeing 777,Italy,2019,Emirates,\"Hot start, Engine separation\"\n");
    CHECK(partial.tickets.size() == 2);
    REQUIRE(partial.errors.size() == 1);
    CHECK(partial.errors[0].line == 3);
    CHECK(partial.tickets[1].id == "ticket_3");

    CHECK_THROWS_AS(parse_csv_dataset("model,client\nA,B\n"), Error);
    CHECK_THROWS_AS(load_dataset("/nonexistent/file.csv"), Error);
}

TEST_CASE("JSON dataset loading") {
    auto doc = nlohmann::json::parse(R"([
        {"customer": "Emirates", "problem_description": "Fuel leak", "configuration": "Boeing 777-9X",
         "timestamp": "2018-02-01T00:00:00Z", "location": "USA"},
        {"customer": "EasyJet", "configuration": "A380-800", "timestamp": "2018-01-01"},
        {"id": "custom", "customer": "Alitalia", "description": "Tail pipe fires", "configuration": "A330-200",
         "timestamp": "2017-01-01"}])");
    auto r = parse_json_dataset(doc);
    REQUIRE(r.tickets.size() == 2);
    CHECK(r.tickets[0].id == "ticket_1");
    CHECK(r.tickets[1].id == "custom");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].line == 2);
    CHECK(parse_json_dataset(nlohmann::json{{"tickets", doc}}).tickets.size() == 2);

    auto dir = fixture::scratch("json-dataset");
    std::ofstream(dir / "set.json") << doc.dump();
    CHECK(load_dataset(dir / "set.json").tickets.size() == 2);
}
