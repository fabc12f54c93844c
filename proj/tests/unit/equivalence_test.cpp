#include "oracles.hpp"

#include "sosw/equivalence.hpp"

#include <gtest/gtest.h>

using namespace sosw;

namespace {

// a.(b + c)
ExplicitSemantics late_choice() { return ExplicitSemantics({{{"a", 1}}, {{"b", 2}, {"c", 3}}, {}, {}}); }
// a.b + a.c
ExplicitSemantics early_choice() { return ExplicitSemantics({{{"a", 1}, {"a", 2}}, {{"b", 3}}, {{"c", 4}}, {}, {}}); }

oracle::SilentFn marker_silent() { return [](const Label& l) { return l.is_silent_marker(); }; }

} // namespace

TEST(Bisimulation, DistributivityFails)
{
    auto out = compare_branching_bisim(late_choice(), early_choice(), 0, 0);
    EXPECT_EQ(out.verdict, Verdict::not_bisimilar);
    ASSERT_TRUE(out.play.has_value());
    EXPECT_TRUE(replay_play(*out.play, out.left, out.right));
    EXPECT_FALSE(oracle::brute_force_bisimilar(out.left, out.right, [](const Label&) { return false; }));
}

TEST(Traces, DistributivityHolds)
{
    auto out = compare_traces(late_choice(), early_choice(), 0, 0);
    EXPECT_TRUE(out.equal());
}

TEST(Bisimulation, IdenticalSystemsAreRelated)
{
    auto out = compare_branching_bisim(late_choice(), late_choice(), 0, 0);
    ASSERT_TRUE(out.bisimilar());
    EXPECT_TRUE(verify_bisimulation(out.relation, out.left, out.right));
    EXPECT_TRUE(std::is_sorted(out.relation.begin(), out.relation.end()));
}

TEST(Bisimulation, InertSilentStepIsAbsorbed)
{
    ExplicitSemantics with_tau({{{"a", 1}}, {{"", 2}}, {{"b", 3}}, {}});
    ExplicitSemantics without({{{"a", 1}}, {{"b", 2}}, {}});
    auto strong = compare_branching_bisim(with_tau, without, 0, 0);
    EXPECT_EQ(strong.verdict, Verdict::not_bisimilar);
    auto branching = compare_branching_bisim(with_tau, without, 0, 0, SilentSpec::marker());
    ASSERT_TRUE(branching.bisimilar());
    EXPECT_TRUE(verify_bisimulation(branching.relation, branching.left, branching.right, SilentSpec::marker()));
}

TEST(Bisimulation, PreemptiveSilentStepIsObservable)
{
    // tau.a + b  versus  a + b
    ExplicitSemantics left({{{"", 1}, {"b", 2}}, {{"a", 2}}, {}});
    ExplicitSemantics right({{{"a", 1}, {"b", 1}}, {}});
    auto out = compare_branching_bisim(left, right, 0, 0, SilentSpec::marker());
    EXPECT_EQ(out.verdict, Verdict::not_bisimilar);
    ASSERT_TRUE(out.play.has_value());
    EXPECT_TRUE(replay_play(*out.play, out.left, out.right, SilentSpec::marker()));
}

TEST(Bisimulation, AcceptanceIsObservable)
{
    ExplicitSemantics a({{{"a", 1}}, {}}, {false, true});
    ExplicitSemantics b({{{"a", 1}}, {}}, {false, false});
    auto out = compare_branching_bisim(a, b, 0, 0);
    EXPECT_EQ(out.verdict, Verdict::not_bisimilar);
    ASSERT_TRUE(out.play.has_value());
    EXPECT_EQ(out.play->final_challenge, PlayStep::Kind::accept);
    EXPECT_TRUE(replay_play(*out.play, out.left, out.right));
}

TEST(Bisimulation, SilentLabelsFromSpecAreOneAction)
{
    ExplicitSemantics a({{{"i", 1}}, {}});
    ExplicitSemantics b({{{"j", 1}}, {}});
    EXPECT_TRUE(compare_branching_bisim(a, b, 0, 0, SilentSpec::labels({"i", "j"})).bisimilar());
    EXPECT_FALSE(compare_branching_bisim(a, b, 0, 0).bisimilar());
}

TEST(Bisimulation, TruncationGivesBound)
{
    ExplicitSemantics chain({{{"a", 1}}, {{"a", 2}}, {{"a", 3}}, {}});
    ExploreLimits limits;
    limits.max_states = 2;
    auto out = compare_branching_bisim(chain, chain, 0, 0, {}, limits);
    EXPECT_EQ(out.verdict, Verdict::bound);
    ASSERT_TRUE(out.bound.has_value());
    EXPECT_EQ(out.bound->reason, BoundReason::states);
    EXPECT_EQ(out.bound->limit, 2u);
}

TEST(Bisimulation, VerifyRejectsBrokenRelations)
{
    auto out = compare_branching_bisim(late_choice(), late_choice(), 0, 0);
    ASSERT_TRUE(out.bisimilar());
    Relation broken = out.relation;
    broken.erase(broken.begin() + 1);
    EXPECT_FALSE(verify_bisimulation(broken, out.left, out.right));
    EXPECT_FALSE(verify_bisimulation({}, out.left, out.right));
}

TEST(Bisimulation, RandomVerdictsAgreeWithBruteForce)
{
    oracle::Rng rng(2024);
    int bisimilar = 0;
    for (int round = 0; round < 150; ++round) {
        const bool with_tau = round % 2 == 1;
        std::vector<std::string> alphabet{"a", "b"};
        if (with_tau)
            alphabet.push_back("");
        auto t1 = oracle::random_table(rng, 1 + oracle::pick(rng, 4), alphabet, 0.25);
        auto t2 = round % 3 == 0 ? t1 : oracle::random_table(rng, 1 + oracle::pick(rng, 4), alphabet, 0.25);
        SilentSpec silent = with_tau ? SilentSpec::marker() : SilentSpec{};
        auto out = compare_branching_bisim(t1.semantics(), t2.semantics(), 0, 0, silent);
        ASSERT_NE(out.verdict, Verdict::bound);
        oracle::SilentFn fn = with_tau ? marker_silent() : oracle::SilentFn([](const Label&) { return false; });
        EXPECT_EQ(out.bisimilar(), oracle::brute_force_bisimilar(out.left, out.right, fn)) << "round " << round;
        if (out.bisimilar()) {
            ++bisimilar;
            EXPECT_TRUE(verify_bisimulation(out.relation, out.left, out.right, silent));
        } else {
            ASSERT_TRUE(out.play.has_value());
            EXPECT_TRUE(replay_play(*out.play, out.left, out.right, silent)) << "round " << round;
        }
    }
    EXPECT_GT(bisimilar, 10);
}

TEST(Traces, RandomVerdictsAgreeWithEnumeration)
{
    oracle::Rng rng(99);
    for (int round = 0; round < 150; ++round) {
        auto t1 = oracle::random_table(rng, 1 + oracle::pick(rng, 4), {"a", "b", ""}, 0.25);
        auto t2 = oracle::random_table(rng, 1 + oracle::pick(rng, 4), {"a", "b", ""}, 0.25);
        auto out = compare_traces(t1.semantics(), t2.semantics(), 0, 0, SilentSpec::marker());
        const std::size_t len = 8;
        auto l = oracle::visible_traces(out.left, len, marker_silent());
        auto r = oracle::visible_traces(out.right, len, marker_silent());
        if (out.equal()) {
            EXPECT_EQ(l, r) << "round " << round;
        } else {
            ASSERT_EQ(out.verdict.kind, TraceVerdict::Kind::distinct);
            std::vector<std::string> w;
            for (const auto& label : out.verdict.witness)
                w.push_back(label.text);
            const auto& owner = out.verdict.owner == Side::left ? l : r;
            const auto& other = out.verdict.owner == Side::left ? r : l;
            ASSERT_LE(w.size(), len);
            EXPECT_TRUE(owner.count(w)) << "round " << round;
            EXPECT_FALSE(other.count(w)) << "round " << round;
        }
    }
}
