#include <doctest.h>

#include <random>

#include "akg/error.hpp"
#include "akg/lattice.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace akg;

namespace {

std::optional<ConceptId> by_names(const ConceptLattice& l, const FuzzyContext& ctx, std::set<std::string> names) {
    for (const auto& c : l.concepts()) {
        auto got = l.intent_names(c.id, ctx);
        if (std::set<std::string>(got.begin(), got.end()) == names) return c.id;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("single object lattice") {
    FuzzyContext ctx(0.6);
    ctx.add_object({"o", ObjectKind::ticket}, MembershipMap{{"a", 0.8}, {"b", 0.5}});
    auto l = build_lattice(ctx);
    REQUIRE(l.size() == 2);
    const auto& top = l.concept_at(l.top());
    CHECK(l.intent_names(top.id, ctx) == std::vector<std::string>{"a"});
    CHECK(l.extent_memberships(top.id, ctx) == std::map<std::string, double>{{"o", 0.8}});
    const auto& bottom = l.concept_at(l.bottom());
    CHECK(bottom.extent.none());
    CHECK(bottom.intent.count() == 2);
    CHECK(bottom.support == 0.0);
}

TEST_CASE("empty context has one concept") {
    FuzzyContext ctx;
    auto l = build_lattice(ctx);
    CHECK(l.size() == 1);
    CHECK(l.top() == l.bottom());
    CHECK(l.traverse_top_down() == std::vector<ConceptId>{l.top()});
}

TEST_CASE("worked example lattice") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto c5 = by_names(l, ctx, {"EngineSeparation"});
    auto c6 = by_names(l, ctx, {"EngineSeparation", "HotStart", "FuelLeak", "BirdIngestion"});
    auto c7 = by_names(l, ctx, {"EngineSeparation", "Surge"});
    REQUIRE(c5);
    REQUIRE(c6);
    REQUIRE(c7);
    CHECK(l.extent_memberships(*c6, ctx) == std::map<std::string, double>{{"ticket_4", 0.7}, {"ticket_6", 1.0}});
    CHECK(l.is_subconcept(*c6, *c5));
    CHECK(l.is_subconcept(*c7, *c5));
    CHECK_FALSE(l.is_subconcept(*c5, *c6));

    auto order = l.traverse_top_down();
    auto pos = [&](ConceptId id) { return std::find(order.begin(), order.end(), id) - order.begin(); };
    CHECK(pos(*c5) < pos(*c6));
    CHECK(pos(*c5) < pos(*c7));
}

TEST_CASE("lattice equals exhaustive enumeration") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 300; ++iter) {
        auto d = oracle::random_context(rng, 6, 6);
        auto ctx = oracle::to_context(d);
        std::string why;
        CHECK_MESSAGE(oracle::same(oracle::view_of(build_lattice(ctx), ctx), oracle::enumerate(d), 1e-12, &why), why);
    }
}

TEST_CASE("threaded build matches the sequential build") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 20; ++iter) {
        auto d = oracle::random_context(rng, 12, 10);
        auto ctx = oracle::to_context(d);
        auto a = build_lattice(ctx);
        auto b = build_lattice(ctx, {4});
        REQUIRE(a.size() == b.size());
        for (const auto& c : a.concepts()) {
            CHECK(b.concept_at(c.id).intent == c.intent);
            CHECK(b.children(c.id) == a.children(c.id));
        }
    }
}

TEST_CASE("lattice structure invariants") {
    std::mt19937_64 rng(9);
    for (int iter = 0; iter < 100; ++iter) {
        auto d = oracle::random_context(rng, 6, 6);
        auto ctx = oracle::to_context(d);
        auto l = build_lattice(ctx);
        CHECK(l.concept_at(l.top()).extent.count() == ctx.object_count());
        CHECK(l.concept_at(l.bottom()).intent.count() == ctx.attribute_count());

        for (const auto& [super, sub] : l.cover_edges()) {
            CHECK(l.support(sub) <= l.support(super));
            CHECK(l.is_subconcept(sub, super));
            CHECK_FALSE(l.is_subconcept(super, sub));
        }
        // reflexive, bottom below everything
        for (const auto& c : l.concepts()) {
            CHECK(l.is_subconcept(c.id, c.id));
            CHECK(l.is_subconcept(l.bottom(), c.id));
            CHECK(l.is_subconcept(c.id, l.top()));
        }

        auto order = l.traverse_top_down();
        CHECK(order.size() == l.size());
        CHECK(order.front() == l.top());
        std::vector<bool> seen(l.size());
        for (auto id : order) {
            CHECK_FALSE(seen[id]);
            if (id != l.top()) {
                bool parent_seen = false;
                for (auto p : l.parents(id)) parent_seen = parent_seen || seen[p];
                CHECK(parent_seen);
            }
            seen[id] = true;
        }

        for (double minsupp : {0.0, 0.25, 0.4, 0.5, 1.0}) {
            CHECK(l.frequent_concepts(minsupp) == oracle::scan_frequent(l, minsupp));
        }
    }
}

TEST_CASE("is_subconcept agrees with extent inclusion") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 50; ++iter) {
        auto ctx = oracle::to_context(oracle::random_context(rng, 6, 6));
        auto l = build_lattice(ctx);
        for (const auto& a : l.concepts()) {
            for (const auto& b : l.concepts()) {
                CHECK(l.is_subconcept(a.id, b.id) == oracle::extent_below(a, b));
            }
        }
    }
}

TEST_CASE("support and frequent concepts") {
    auto ctx = fixture::fleet_tickets();
    auto l = build_lattice(ctx);
    CHECK(l.support(l.top()) == 1.0);
    CHECK(l.support(l.bottom()) == 0.0);
    auto es = by_names(l, ctx, {"EngineSeparation"});
    REQUIRE(es);
    CHECK(l.support(*es) == doctest::Approx(0.6));
    auto fl = by_names(l, ctx, {"EngineSeparation", "FuelLeak"});
    REQUIRE(fl);
    CHECK(l.support(*fl) == doctest::Approx(0.2));
    CHECK(l.frequent_concepts(0.0).size() == l.size());
    CHECK(l.frequent_concepts(1.0) == std::vector<ConceptId>{l.top()});
    CHECK_THROWS_AS(l.frequent_concepts(1.5), Error);
    CHECK_THROWS_AS(l.frequent_concepts(-0.1), Error);
    CHECK_THROWS_AS(l.support(999), Error);

    auto sample = fixture::graded_tickets();
    auto sl = build_lattice(sample);
    CHECK(sl.frequent_concepts(0.4) == oracle::scan_frequent(sl, 0.4));
}

TEST_CASE("concept with two of five tickets has support 0.4") {
    FuzzyContext ctx;
    ctx.add_object({"t1", ObjectKind::ticket}, MembershipMap{{"a", 1.0}});
    ctx.add_object({"t2", ObjectKind::ticket}, MembershipMap{{"a", 1.0}});
    for (const char* n : {"t3", "t4", "t5"}) ctx.add_object({n, ObjectKind::ticket}, MembershipMap{{"b", 1.0}});
    auto l = build_lattice(ctx);
    auto a = by_names(l, ctx, {"a"});
    REQUIRE(a);
    CHECK(l.support(*a) == doctest::Approx(0.4));
}

TEST_CASE("universal attribute gives a full-support top with that intent") {
    FuzzyContext ctx;
    ctx.add_object({"t1", ObjectKind::ticket}, MembershipMap{{"u", 1.0}, {"a", 1.0}});
    ctx.add_object({"t2", ObjectKind::ticket}, MembershipMap{{"u", 0.9}});
    auto l = build_lattice(ctx);
    CHECK(l.intent_names(l.top(), ctx) == std::vector<std::string>{"u"});
    CHECK(l.frequent_concepts(1.0) == std::vector<ConceptId>{l.top()});
}

TEST_CASE("chain traversal") {
    FuzzyContext ctx;
    ctx.add_object({"t1", ObjectKind::ticket}, MembershipMap{{"a", 1.0}});
    ctx.add_object({"t2", ObjectKind::ticket}, MembershipMap{{"a", 1.0}, {"b", 1.0}});
    auto l = build_lattice(ctx);
    REQUIRE(l.size() == 2);
    CHECK(l.traverse_top_down() == std::vector<ConceptId>{l.top(), l.bottom()});
    ctx.add_object({"t3", ObjectKind::ticket}, MembershipMap{});
    auto l3 = build_lattice(ctx);
    REQUIRE(l3.size() == 3);
    auto order = l3.traverse_top_down();
    CHECK(order.front() == l3.top());
    CHECK(order.back() == l3.bottom());
}

TEST_CASE("ids follow traversal order and errors on unknown ids") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    CHECK(l.top() == 0);
    auto order = l.traverse_top_down();
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
    CHECK_THROWS_AS(l.concept_at(100), Error);
    CHECK_THROWS_AS(l.is_subconcept(0, 100), Error);
}

TEST_CASE("lattice snapshot round-trip") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto doc = nlohmann::json::parse(to_json(l, ctx).dump());
    auto back = lattice_from_json(doc, ctx);
    CHECK(oracle::same(oracle::view_of(back, ctx), oracle::view_of(l, ctx)));
    for (const auto& c : l.concepts()) CHECK(back.concept_at(c.id).intent == c.intent);

    FuzzyContext other = ctx;
    other.add_object({"extra", ObjectKind::ticket}, MembershipMap{{"Surge", 1.0}});
    CHECK_THROWS_AS(lattice_from_json(doc, other), Error);
}

TEST_CASE("labels and DOT export") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto c7 = by_names(l, ctx, {"EngineSeparation", "Surge"});
    REQUIRE(c7);
    auto labels = l.labels(*c7, ctx);
    CHECK(labels.own_attributes == std::vector<std::string>{"Surge"});
    CHECK(labels.own_objects == std::vector<std::string>{"ticket_7"});
    auto dot = to_dot(l, ctx);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("Surge") != std::string::npos);
    CHECK(std::count(dot.begin(), dot.end(), '>') >= static_cast<long>(l.cover_edges().size()));
}
