#include <gtest/gtest.h>

#include "body/error.hpp"
#include "body/fsio.hpp"
#include "body/simulate.hpp"
#include "support.hpp"

using namespace body;

namespace {

std::size_t count_kind(const GroundTruth& t, EndpointKind k) {
    return static_cast<std::size_t>(
        std::count_if(t.endpoints.begin(), t.endpoints.end(), [&](const TruthEndpoint& e) { return e.kind == k; }));
}

}  // namespace

TEST(Simulate, SameSeedSameWorld) {
    auto spec = support::random_spec(3);
    auto a = generate_campus(spec);
    auto b = generate_campus(spec);
    EXPECT_EQ(a.truth, b.truth);
    EXPECT_EQ(a.registry, b.registry);
    ASSERT_EQ(a.switches.size(), b.switches.size());
    for (std::size_t i = 0; i < a.switches.size(); ++i) EXPECT_EQ(a.switches[i].profile, b.switches[i].profile);
    spec.seed = 4;
    EXPECT_NE(generate_campus(spec).truth, a.truth);
}

TEST(Simulate, GroundTruthJsonRoundTrip) {
    auto w = generate_campus(support::random_spec(8));
    EXPECT_EQ(ground_truth_from_json(to_json(w.truth)), w.truth);
    EXPECT_EQ(endpoint_kind_from_string("camera_cascade"), EndpointKind::camera_cascade);
    EXPECT_FALSE(endpoint_kind_from_string("printer"));
}

TEST(Simulate, CommittedCorpusIsReproducible) {
    auto spec = load_campus_spec(support::source_dir() / "specs" / "uff-like.yml");
    support::TempDir out;
    write_world(generate_campus(spec), out.path());
    EXPECT_EQ(support::snapshot_tree(out.path()), support::snapshot_tree(support::fixture_corpus()));
}

TEST(Simulate, UffLikeCounts) {
    auto w = generate_campus(load_campus_spec(support::source_dir() / "specs" / "uff-like.yml"));
    EXPECT_EQ(w.switches.size(), 26u);
    EXPECT_EQ(w.registry.size(), 541u);
    EXPECT_EQ(count_kind(w.truth, EndpointKind::camera_direct), 191u);
    EXPECT_EQ(count_kind(w.truth, EndpointKind::unregistered), 11u);
    EXPECT_EQ(count_kind(w.truth, EndpointKind::stale), 11u);
    for (const auto& e : w.truth.endpoints) EXPECT_EQ(e.visible, e.kind != EndpointKind::stale);
}

TEST(Simulate, ProfilesAreValidAndRoundTripThroughTranscripts) {
    auto w = generate_campus(support::random_spec(21));
    for (const auto& sw : w.switches) {
        EXPECT_NO_THROW(sw.profile.validate());
        auto parsed = parse_cli_bundle(sw.profile.vendor_dialect, emit_cli_bundle(sw.profile, sw.lldp));
        parsed.profile.switch_id = sw.profile.switch_id;
        parsed.profile.collected_at = sw.profile.collected_at;
        if (!sw.lldp) {
            EXPECT_TRUE(sw.profile.lldp_neighbors.empty());
        }
        EXPECT_EQ(parsed.profile, sw.profile) << sw.profile.switch_id;
    }
}

TEST(Simulate, NoiseFreeWorldsInferExactly) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto w = generate_campus(support::random_spec(seed));
        auto d = diff_topology(support::classify_world(w), w.truth);
        EXPECT_DOUBLE_EQ(d.accuracy, 1.0) << "seed " << seed << ", first mismatch "
                                          << (d.mismatches.empty() ? "" : d.mismatches[0].mac.str());
        EXPECT_TRUE(d.missing_hil.empty()) << "seed " << seed;
    }
}

TEST(Simulate, DiffReportsMisplacements) {
    auto w = generate_campus(support::random_spec(2));
    auto trees = support::classify_world(w);
    ASSERT_FALSE(trees.empty());
    auto missing = trees;
    missing.erase(missing.begin());
    EXPECT_THROW(diff_topology(missing, w.truth), SwitchSetMismatch);

    auto it = std::find_if(w.truth.endpoints.begin(), w.truth.endpoints.end(),
                           [](const TruthEndpoint& e) { return e.registered && e.kind == EndpointKind::camera_direct; });
    ASSERT_NE(it, w.truth.endpoints.end());
    auto truth = w.truth;
    auto& moved = *std::find(truth.endpoints.begin(), truth.endpoints.end(), *it);
    moved.floor_key = "bldzz-flr9";
    auto d = diff_topology(trees, truth);
    ASSERT_EQ(d.mismatches.size(), 1u);
    EXPECT_EQ(d.mismatches[0].mac, it->mac);
    EXPECT_LT(d.accuracy, 1.0);
}

TEST(Simulate, ExpectedPlacements) {
    TruthEndpoint e;
    e.switch_id = "sw";
    e.floor_key = "bldb-flr1";
    e.port = "3";
    e.kind = EndpointKind::camera_cascade;
    EXPECT_EQ(expected_placement(e), "sw/bldb-flr1/mini-3");
    e.kind = EndpointKind::server;
    EXPECT_EQ(expected_placement(e), "sw/-");
    e.kind = EndpointKind::unknown;
    EXPECT_EQ(expected_placement(e), "sw/others");
}

TEST(Simulate, SpecValidation) {
    EXPECT_THROW(parse_campus_spec("- 1\n"), ConfigError);
    EXPECT_THROW(parse_campus_spec("cascade_fraction: 1.5\n"), ConfigError);
    EXPECT_THROW(parse_campus_spec("cameras_per_switch: [5, 2]\n"), ConfigError);
    EXPECT_THROW(parse_campus_spec("layout:\n  campuses:\n    - id: g\n      distribution:\n        - id: d\n"
                                   "          access:\n            - {id: a, cascades: [1]}\n"),
                 ConfigError);
    auto s = parse_campus_spec("seed: 9\ncameras_per_switch: 12\ndialect_mix: {dialect_b: 1}\n");
    EXPECT_EQ(s.seed, 9u);
    EXPECT_EQ(s.cameras_per_switch.min, 12);
    EXPECT_EQ(s.dialect_mix[0], 0.0);
    EXPECT_EQ(s.dialect_mix[1], 1.0);
}

TEST(Simulate, SampledLayoutsStayWithinRanges) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto spec = support::random_spec(seed);
        auto layout = resolve_layout(spec);
        EXPECT_EQ(static_cast<int>(layout.campuses.size()), spec.campuses);
        for (const auto& c : layout.campuses)
            for (const auto& d : c.distribution) {
                EXPECT_GE(static_cast<int>(d.access.size()), spec.switches_per_campus.min);
                EXPECT_LE(static_cast<int>(d.access.size()), spec.switches_per_campus.max);
            }
    }
}
