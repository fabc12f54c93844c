#include "oracles.hpp"

#include "sosw/lang/choreo.hpp"

#include <gtest/gtest.h>

using namespace sosw;
using namespace sosw::choreo;

namespace {

const char* kWorkers = "ctr->wrk1:Work;ctr->wrk2:Work;(wrk1->ctr:Done||wrk2->ctr:Done)";

Choreo parse(const std::string& s) { return parse_choreo(s); }

Choreo random_choreo(oracle::Rng& rng, std::size_t depth)
{
    static const std::vector<std::string> names{"a", "b", "c"};
    if (depth == 0 || oracle::coin(rng, 0.3)) {
        std::size_t from = oracle::pick(rng, 3);
        std::size_t to = (from + 1 + oracle::pick(rng, 2)) % 3;
        return Choreo::interaction(names[from], names[to], oracle::coin(rng) ? "m" : "n");
    }
    switch (oracle::pick(rng, 3)) {
    case 0:
        return Choreo::seq(random_choreo(rng, depth - 1), random_choreo(rng, depth - 1));
    case 1:
        return Choreo::par(random_choreo(rng, depth - 1), random_choreo(rng, depth - 1));
    default:
        return Choreo::choice(random_choreo(rng, depth - 1), random_choreo(rng, depth - 1));
    }
}

} // namespace

TEST(ChoreoParser, Workers)
{
    Choreo c = parse(kWorkers);
    EXPECT_EQ(to_string(c), "ctr->wrk1:Work; ctr->wrk2:Work; wrk1->ctr:Done || wrk2->ctr:Done");
    EXPECT_EQ(agents(c), (std::set<std::string>{"ctr", "wrk1", "wrk2"}));
    EXPECT_EQ(c.op(), Choreo::Op::seq);
    EXPECT_EQ(c.rhs().op(), Choreo::Op::seq);
    EXPECT_EQ(c.rhs().rhs().op(), Choreo::Op::par);
}

TEST(ChoreoParser, Precedence)
{
    EXPECT_EQ(parse("a->b:x; b->a:y + a->c:z").op(), Choreo::Op::seq);
    EXPECT_EQ(parse("a->b:x + b->a:y || a->c:z").op(), Choreo::Op::choice);
    EXPECT_EQ(to_string(parse("(a->b:x; b->a:y) + a->c:z")), "(a->b:x; b->a:y) + a->c:z");
}

TEST(ChoreoParser, Errors)
{
    EXPECT_THROW(parse("a->a:x"), ParseError);
    EXPECT_THROW(parse("a->b"), ParseError);
    EXPECT_THROW(parse("a->b:x;"), ParseError);
    try {
        parse("a->b:x +\n  ->c:y");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.col(), 3u);
    }
}

TEST(ChoreoParser, RoundTrip)
{
    oracle::Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        Choreo c = random_choreo(rng, 4);
        EXPECT_EQ(parse(to_string(c)), c) << to_string(c);
    }
}

TEST(ChoreoSemantics, WorkersGlobalLts)
{
    auto lts = explore(GlobalSemantics{}, parse(kWorkers));
    EXPECT_EQ(lts.size(), 6u);
    EXPECT_EQ(lts.edge_count(), 6u);
    EXPECT_TRUE(lts.accepting(5));
    EXPECT_EQ(to_string(lts.state(5)), "end");
}

TEST(ChoreoSemantics, Termination)
{
    EXPECT_TRUE(terminable(Choreo::end()));
    EXPECT_FALSE(terminable(parse("a->b:x")));
    EXPECT_TRUE(global_next(Choreo::end()).empty());
    EXPECT_EQ(global_next(parse("a->b:x + a->c:y")).size(), 2u);
}

TEST(Projection, Workers)
{
    Choreo c = parse(kWorkers);
    EXPECT_EQ(to_string(project(c, "ctr")), "wrk1!Work; wrk2!Work; wrk1?Done || wrk2?Done");
    EXPECT_EQ(to_string(project(c, "wrk1")), "ctr?Work; ctr!Done");
    EXPECT_EQ(to_string(project(c, "zed")), "end");
}

TEST(Projection, DropsUninvolvedBranches)
{
    Choreo c = parse("a->b:x + a->c:y");
    EXPECT_EQ(to_string(project(c, "b")), "a?x");
    EXPECT_EQ(to_string(project(c, "c")), "a?y");
    EXPECT_EQ(to_string(project(c, "a")), "b!x + c!y");
}

TEST(LocalLabels, RoundTrip)
{
    LocalAction send{"a", "b", "m", true};
    LocalAction recv{"a", "b", "m", false};
    EXPECT_EQ(local_label(send), Label("a->b!m"));
    EXPECT_EQ(local_label(recv), Label("a->b?m"));
    EXPECT_EQ(parse_local_label(local_label(send)), send);
    EXPECT_EQ(parse_local_label(local_label(recv)), recv);
    EXPECT_FALSE(parse_local_label(Label("junk")).has_value());
    EXPECT_EQ(global_label("a", "b", "m"), Label("a->b:m"));
}

TEST(Realisability, WorkersAreRealisable)
{
    auto out = realisability(parse(kWorkers));
    ASSERT_TRUE(out.bisimilar());
    EXPECT_TRUE(verify_bisimulation(out.relation, out.left, out.right));
    EXPECT_TRUE(oracle::naive_strong_bisimilar(out.left, out.right));
}

TEST(Realisability, UninformedChoiceIsNot)
{
    auto out = realisability(parse("a->b:x + a->c:y"));
    EXPECT_EQ(out.verdict, Verdict::not_bisimilar);
    EXPECT_FALSE(oracle::naive_strong_bisimilar(out.left, out.right));
    ASSERT_TRUE(out.play.has_value());
    EXPECT_TRUE(replay_play(*out.play, out.left, out.right));
}

TEST(Realisability, InformedChoiceIs)
{
    EXPECT_TRUE(realisability(parse("(a->b:x; b->c:x) + (a->b:y; b->c:y)")).bisimilar());
}

TEST(Realisability, SequenceBindsLooserThanChoice)
{
    EXPECT_FALSE(realisability(parse("a->b:x; b->c:x + a->b:y; b->c:y")).bisimilar());
}

TEST(Realisability, RandomChoreographiesAgreeWithNaiveFixpoint)
{
    oracle::Rng rng(4);
    for (int i = 0; i < 120; ++i) {
        Choreo c = random_choreo(rng, 3);
        auto out = realisability(c);
        ASSERT_NE(out.verdict, Verdict::bound) << to_string(c);
        EXPECT_EQ(out.bisimilar(), oracle::naive_strong_bisimilar(out.left, out.right)) << to_string(c);
        if (out.left.size() * out.right.size() <= 20)
            EXPECT_EQ(out.bisimilar(), oracle::brute_force_bisimilar(out.left, out.right,
                                                                      [](const Label&) { return false; }));
    }
}

TEST(Realisability, BufferedReceivesAreSilent)
{
    auto out = buffered_realisability(parse("a->b:x; a->b:y"));
    ASSERT_TRUE(out.bisimilar());
    EXPECT_TRUE(verify_bisimulation(out.relation, out.left, out.right, SilentSpec::marker()));
    bool saw_silent = false;
    for (const auto& e : out.right.edges())
        saw_silent = saw_silent || e.label.is_silent_marker();
    EXPECT_TRUE(saw_silent);
}

TEST(Realisability, BufferedSendsMayOvertake)
{
    EXPECT_FALSE(buffered_realisability(parse(kWorkers)).bisimilar());
}

TEST(Realisability, ComposeNeedsAgents)
{
    EXPECT_THROW(compose(Choreo::end()), EvalError);
    EXPECT_TRUE(realisability(Choreo::end()).bisimilar());
}

TEST(Realisability, BoundIsReported)
{
    ExploreLimits limits;
    limits.max_states = 2;
    auto out = realisability(parse(kWorkers), limits);
    EXPECT_EQ(out.verdict, Verdict::bound);
}

TEST(Composition, HandshakeIsSynchronous)
{
    auto comp = compose(parse("a->b:x; b->a:y"));
    EXPECT_EQ(comp.agents, (std::vector<std::string>{"a", "b"}));
    auto lts = explore(comp.sos, comp.initial);
    EXPECT_EQ(lts.size(), 3u);
    for (const auto& e : lts.edges())
        EXPECT_FALSE(parse_local_label(e.label).has_value()) << e.label.text;
}
