#include <doctest.h>

#include <random>

#include "akg/canonical.hpp"
#include "akg/error.hpp"
#include "akg/match_rank.hpp"
#include "akg/matching.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace akg;

namespace {

const std::vector<std::string> kQuery{"EngineSeparation", "HotStart", "FuelLeak"};

/// Relatedness driven by a lookup table, for random bipartite instances.
RelatednessFunction table_relatedness(std::map<std::pair<std::string, std::string>, double> table) {
    auto shared = std::make_shared<decltype(table)>(std::move(table));
    return {"table", 0.7, [shared](std::string_view x, std::string_view y) {
                auto it = shared->find({std::string(x), std::string(y)});
                if (it == shared->end()) it = shared->find({std::string(y), std::string(x)});
                return it == shared->end() ? 0.0 : it->second;
            }};
}

bool valid_matching(const std::vector<FeatureAttributePair>& m) {
    std::set<std::string> f, a;
    for (const auto& p : m) {
        if (!f.insert(p.feature).second || !a.insert(p.attribute).second) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("F-measure") {
    CHECK(f_measure(0.75, 1.0) == doctest::Approx(6.0 / 7.0));
    CHECK(f_measure(1.0, 1.0) == 1.0);
    CHECK(f_measure(0.0, 0.0) == 0.0);
    for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        for (double r : {0.0, 0.2, 0.5, 1.0}) {
            double f = f_measure(p, r);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(f <= std::max(p, r) + 1e-15);
            CHECK(f >= std::min(p, r) - 1e-15);
        }
    }
}

TEST_CASE("feature sets are canonical, sorted and unique") {
    FeatureSet f({"fuel leak", "FuelLeak", "engine separation"});
    CHECK(f.features() == std::vector<std::string>{"EngineSeparation", "FuelLeak"});
    CHECK(FeatureSet({"b", "a"}) == FeatureSet({"a", "b"}));
}

TEST_CASE("intersection size on the worked example") {
    auto r = intersection_size(FeatureSet(kQuery), {"EngineSeparation", "HotStart", "FuelLeak", "BirdIngestion"},
                               exact_relatedness());
    CHECK(r.count == 3);
    CHECK(r.matching.size() == 3);
    CHECK(valid_matching(r.matching));
    CHECK(intersection_size(FeatureSet({"x"}), {"y"}, table_relatedness({{{"X", "Y"}, 0.2}})).count == 0);
    CHECK(intersection_size(FeatureSet({"x"}), {}, exact_relatedness()).count == 0);
}

TEST_CASE("intersection size equals brute-force matching") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int iter = 0; iter < 500; ++iter) {
        std::size_t nf = dim(rng), na = dim(rng);
        std::vector<std::string> fs, as;
        for (std::size_t i = 0; i < nf; ++i) fs.push_back("F" + std::to_string(i));
        for (std::size_t j = 0; j < na; ++j) as.push_back("A" + std::to_string(j));
        std::map<std::pair<std::string, std::string>, double> table;
        std::vector<std::vector<bool>> adj(nf, std::vector<bool>(na));
        for (std::size_t i = 0; i < nf; ++i) {
            for (std::size_t j = 0; j < na; ++j) {
                double v = u(rng);
                table[{fs[i], as[j]}] = v;
                adj[i][j] = v >= 0.7;
            }
        }
        auto r = intersection_size(FeatureSet(fs), as, table_relatedness(table));
        CHECK(r.count == oracle::max_matching(adj, na));
        CHECK(r.count == r.matching.size());
        CHECK(valid_matching(r.matching));
        for (const auto& p : r.matching) CHECK(table.at({p.feature, p.attribute}) >= 0.7);
    }
}

TEST_CASE("maximum_matching on hand-built graphs") {
    // Greedy would take 0-0 and block 1; the augmenting path fixes it.
    CHECK(maximum_matching({{0, 1}, {0}}, 2).size == 2);
    CHECK(maximum_matching({{0}, {0}, {0}}, 1).size == 1);
    CHECK(maximum_matching({}, 3).size == 0);
    CHECK_THROWS_AS(maximum_matching({{5}}, 2), Error);
}

TEST_CASE("worked example scores") {
    auto fn = exact_relatedness();
    FeatureSet q(kQuery);
    auto c6 = score_intent(q, {"EngineSeparation", "HotStart", "FuelLeak", "BirdIngestion"}, fn);
    CHECK(c6.precision == doctest::Approx(0.75));
    CHECK(c6.recall == doctest::Approx(1.0));
    CHECK(c6.f_measure == doctest::Approx(0.857).epsilon(0.001));
    auto c5 = score_intent(q, {"EngineSeparation"}, fn);
    CHECK(c5.precision == doctest::Approx(1.0));
    CHECK(c5.recall == doctest::Approx(1.0 / 3.0));
    CHECK(c5.f_measure == doctest::Approx(0.5));
    auto c7 = score_intent(q, {"EngineSeparation", "Surge"}, fn);
    CHECK(c7.precision == doctest::Approx(0.5));
    CHECK(c7.f_measure == doctest::Approx(0.4));
    auto top = score_intent(q, {}, fn);
    CHECK(top.precision == 0.0);
    CHECK(top.f_measure == 0.0);
}

TEST_CASE("scores are permutation invariant") {
    auto fn = token_overlap_relatedness();
    std::vector<std::string> intent{"EngineSeparation", "HotStartEngine", "FuelLeak", "BirdIngestion"};
    auto base = score_intent(FeatureSet(kQuery), intent, fn);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        auto q = kQuery;
        auto a = intent;
        std::shuffle(q.begin(), q.end(), rng);
        std::shuffle(a.begin(), a.end(), rng);
        auto s = score_intent(FeatureSet(q), a, fn);
        CHECK(s.f_measure == base.f_measure);
    }
}

TEST_CASE("rank_concepts on the worked example") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto ranked = rank_concepts(l, ctx, FeatureSet(kQuery), exact_relatedness());
    REQUIRE_FALSE(ranked.empty());
    auto names = l.intent_names(ranked[0].concept_id, ctx);
    CHECK(std::set<std::string>(names.begin(), names.end()) ==
          std::set<std::string>{"EngineSeparation", "HotStart", "FuelLeak", "BirdIngestion"});
    CHECK(ranked[0].f_measure == doctest::Approx(6.0 / 7.0));
    CHECK_THROWS_AS(rank_concepts(l, ctx, FeatureSet(), exact_relatedness()), Error);
    RankOptions zero;
    zero.limit = 0;
    CHECK_THROWS_AS(rank_concepts(l, ctx, FeatureSet(kQuery), exact_relatedness(), zero), Error);
}

TEST_CASE("full intent query scores 1 and ranks first") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto ranked = rank_concepts(l, ctx, FeatureSet({"EngineSeparation", "Surge"}), exact_relatedness());
    REQUIRE_FALSE(ranked.empty());
    CHECK(ranked[0].f_measure == 1.0);
    CHECK(l.intent_names(ranked[0].concept_id, ctx) == std::vector<std::string>{"EngineSeparation", "Surge"});
}

TEST_CASE("ranking equals brute-force scoring of every concept") {
    std::mt19937_64 rng(31);
    auto fn = exact_relatedness();
    for (int iter = 0; iter < 200; ++iter) {
        auto d = oracle::random_context(rng, 6, 6);
        auto ctx = oracle::to_context(d);
        auto l = build_lattice(ctx);
        std::vector<std::string> q;
        for (const auto& a : d.attributes) {
            if (rng() % 2) q.push_back(a);
        }
        if (rng() % 3 == 0) q.push_back("zz_unmatched");
        if (q.empty()) q.push_back(d.attributes[0]);
        FeatureSet fs(q);

        struct Row {
            double f;
            double support;
            ConceptId id;
        };
        std::vector<Row> want;
        for (const auto& c : l.concepts()) {
            auto names = l.intent_names(c.id, ctx);
            std::size_t hits = 0;
            for (const auto& n : names) {
                for (const auto& f : fs.features()) hits += canonical_key(f) == canonical_key(n);
            }
            want.push_back({oracle::f_measure(hits, fs.size(), names.size()), c.support, c.id});
        }
        std::sort(want.begin(), want.end(), [](const Row& a, const Row& b) {
            if (a.f != b.f) return a.f > b.f;
            if (a.support != b.support) return a.support > b.support;
            return a.id < b.id;
        });

        RankOptions opts;
        opts.limit = l.size();
        auto got = rank_concepts(l, ctx, fs, fn, opts);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].concept_id == want[i].id);
            CHECK(got[i].f_measure == doctest::Approx(want[i].f));
        }

        // Pruning keeps the top of the ranking intact.
        for (std::size_t limit : {1, 3}) {
            RankOptions pruned;
            pruned.limit = limit;
            pruned.prune = true;
            auto p = rank_concepts(l, ctx, fs, fn, pruned);
            REQUIRE(p.size() == std::min(limit, want.size()));
            for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i].concept_id == want[i].id);
        }
    }
}

TEST_CASE("minsupp skips infrequent concepts") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    RankOptions opts;
    opts.limit = l.size();
    opts.minsupp = 0.5;
    for (const auto& s : rank_concepts(l, ctx, FeatureSet(kQuery), exact_relatedness(), opts)) {
        CHECK(l.support(s.concept_id) >= 0.5);
    }
}

TEST_CASE("recommend on the worked example") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto hints = recommend(l, ctx, FeatureSet(kQuery), exact_relatedness(), 2);
    REQUIRE(hints.size() == 2);
    CHECK(hints[0].object == "ticket_6");
    CHECK(hints[1].object == "ticket_4");
    CHECK(hints[0].score == doctest::Approx(6.0 / 7.0));
    CHECK(hints[1].membership == doctest::Approx(0.7));
    CHECK(hints[1].score == doctest::Approx(0.6));

    auto all = recommend(l, ctx, FeatureSet(kQuery), exact_relatedness(), 100);
    CHECK(all.size() <= ctx.object_count());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(seen.insert(all[i].object).second);
        CHECK(all[i].score == doctest::Approx(all[i].f_measure * all[i].membership));
        if (i > 0) CHECK(all[i - 1].score >= all[i].score);
    }
    CHECK_THROWS_AS(recommend(l, ctx, FeatureSet(kQuery), exact_relatedness(), 0), Error);
    CHECK_THROWS_AS(recommend(l, ctx, FeatureSet(), exact_relatedness(), 3), Error);
}

TEST_CASE("higher membership ranks first within a concept") {
    FuzzyContext ctx(0.6);
    ctx.add_object({"low", ObjectKind::ticket}, MembershipMap{{"a", 0.7}});
    ctx.add_object({"high", ObjectKind::ticket}, MembershipMap{{"a", 0.9}});
    auto l = build_lattice(ctx);
    auto hints = recommend(l, ctx, FeatureSet({"a"}), exact_relatedness(), 10);
    REQUIRE(hints.size() == 2);
    CHECK(hints[0].object == "high");
    CHECK(hints[1].object == "low");
}

TEST_CASE("unmatched features yield no hints") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    CHECK(recommend(l, ctx, FeatureSet({"LandingGearCollapse"}), token_overlap_relatedness(), 10).empty());
}

TEST_CASE("ranking is deterministic") {
    auto ctx = fixture::graded_tickets();
    auto l = build_lattice(ctx);
    auto a = recommend(l, ctx, FeatureSet(kQuery), token_overlap_relatedness(), 10);
    auto b = recommend(l, ctx, FeatureSet(kQuery), token_overlap_relatedness(), 10);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].object == b[i].object);
        CHECK(a[i].score == b[i].score);
    }
}
