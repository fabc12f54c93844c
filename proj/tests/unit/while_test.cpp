#include "oracles.hpp"

#include "sosw/lang/while.hpp"

#include <gtest/gtest.h>

using namespace sosw;
using namespace sosw::whilelang;

namespace {

/// Iterates the small-step relation to a final configuration.
Config run_small(Config cfg, std::size_t max_steps = 100000)
{
    for (std::size_t i = 0; i < max_steps; ++i) {
        auto steps = small_step(cfg);
        EXPECT_LE(steps.size(), 1u);
        if (steps.empty())
            return cfg.status == Config::Status::running && cfg.cmd == Cmd::skip() ? Config::finished(cfg.store) : cfg;
        cfg = steps.front().second;
    }
    ADD_FAILURE() << "small-step run did not finish";
    return cfg;
}

Store initial_store(oracle::Rng& rng, const std::vector<std::string>& vars)
{
    Store s;
    for (const auto& v : vars)
        s[v] = static_cast<long>(oracle::pick(rng, 11)) - 5;
    return s;
}

} // namespace

TEST(WhileParser, Examples)
{
    EXPECT_EQ(parse_while("skip"), Cmd::skip());
    auto two = AExp::num(2);
    auto x = AExp::var("x");
    auto inc = AExp::bin(AExp::Op::add, x, AExp::num(1));
    EXPECT_EQ(parse_while("x := 2; x := x + 1"), Cmd::seq(Cmd::assign("x", two), Cmd::assign("x", inc)));
    EXPECT_EQ(parse_while("while x < 3 do x := x + 1"),
              Cmd::loop(BExp::compare(BExp::Op::lt, x, AExp::num(3)), std::nullopt, Cmd::assign("x", inc)));
}

TEST(WhileParser, Precedence)
{
    EXPECT_EQ(to_string(parse_while("x := 1 + 2 * 3")), "x := 1 + 2 * 3");
    EXPECT_EQ(to_string(parse_while("x := (1 + 2) * 3")), "x := (1 + 2) * 3");
    EXPECT_EQ(to_string(parse_while("x := 1 - (2 - 3)")), "x := 1 - (2 - 3)");
    EXPECT_EQ(to_string(parse_bexp("x < 1 or y < 2 and tt")), "x < 1 or y < 2 and tt");
    EXPECT_EQ(to_string(parse_bexp("(x < 1 or y < 2) and tt")), "(x < 1 or y < 2) and tt");
    EXPECT_EQ(parse_while("a := 1; b := 2; c := 3").second(), parse_while("b := 2; c := 3"));
}

TEST(WhileParser, BlocksAndBranches)
{
    auto c = parse_while("if x < 0 then { y := 1; z := 2 } else skip; assert tt");
    ASSERT_EQ(c.op(), Cmd::Op::seq);
    EXPECT_EQ(c.first().op(), Cmd::Op::ite);
    EXPECT_EQ(c.first().first().op(), Cmd::Op::seq);
    EXPECT_EQ(c.second().op(), Cmd::Op::assertion);
    auto loop = parse_while("while 0 < n inv 0 <= n do { n := n - 1 }");
    ASSERT_TRUE(loop.invariant().has_value());
    EXPECT_EQ(to_string(*loop.invariant()), "0 <= n");
}

TEST(WhileParser, ErrorsCarryPositions)
{
    try {
        parse_while("x := ;");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.col(), 6u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse_while("x := 1;\nwhile do skip");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.col(), 7u);
    }
}

TEST(WhileParser, RoundTrip)
{
    oracle::Rng rng(8);
    for (int i = 0; i < 300; ++i) {
        std::size_t counter = 0;
        Cmd c = oracle::random_cmd(rng, 4, {"a", "b"}, true, counter);
        EXPECT_EQ(parse_while(to_string(c)), c) << to_string(c);
        BExp b = oracle::random_bexp(rng, 3, {"a", "b"});
        EXPECT_EQ(parse_bexp(to_string(b)), b) << to_string(b);
    }
}

TEST(WhileSmallStep, Examples)
{
    EXPECT_TRUE(small_step(Config::start(Cmd::skip())).empty());
    auto s = small_step(Config::start(parse_while("x := 2+1")));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].first, Label("asg[x:=3]"));
    EXPECT_EQ(s[0].second, Config::finished({{"x", 3}}));

    auto u = small_step(Config::start(parse_while("while ff do skip")));
    ASSERT_EQ(u.size(), 1u);
    EXPECT_EQ(u[0].first, Label("while-unfold"));
    EXPECT_EQ(to_string(u[0].second.cmd), "if ff then (skip; while ff do skip) else skip");
}

TEST(WhileSmallStep, AssertionFailureIsNotAccepting)
{
    auto s = small_step(Config::start(parse_while("assert 1 = 2")));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].first, Label("assert-fail"));
    EXPECT_EQ(s[0].second.status, Config::Status::failed);
    EXPECT_FALSE(is_final(s[0].second));
    EXPECT_TRUE(is_final(Config::start(Cmd::skip())));
}

TEST(WhileSmallStep, UnboundReadIsAnError)
{
    EXPECT_THROW(small_step(Config::start(parse_while("y := x"))), EvalError);
    EXPECT_THROW(big_step(parse_while("y := x"), {}), EvalError);
}

TEST(WhileBigStep, Examples)
{
    EXPECT_EQ(big_step(Cmd::skip(), {{"x", 1}}).store, (Store{{"x", 1}}));
    auto r = big_step(parse_while("x := 2; x := x + 1"), {});
    EXPECT_EQ(r.kind, BigStepResult::Kind::ok);
    EXPECT_EQ(r.store, (Store{{"x", 3}}));
    EXPECT_EQ(big_step(parse_while("while tt do skip"), {}, 100).kind, BigStepResult::Kind::nontermination);
    auto f = big_step(parse_while("x := 1; assert x = 2"), {});
    EXPECT_EQ(f.kind, BigStepResult::Kind::assert_failure);
    ASSERT_TRUE(f.failed.has_value());
    EXPECT_EQ(to_string(*f.failed), "x = 2");
}

TEST(WhileBigStep, Factorial)
{
    auto r = big_step(parse_while("n := 20; f := 1; while 0 < n do { f := f * n; n := n - 1 }"), {});
    EXPECT_EQ(r.store.at("f").str(), "2432902008176640000");
}

TEST(WhileAgreement, SmallStepMatchesBigStep)
{
    oracle::Rng rng(42);
    const std::vector<std::string> vars{"a", "b", "c"};
    for (int i = 0; i < 200; ++i) {
        std::size_t counter = 0;
        Cmd c = oracle::random_cmd(rng, 4, vars, true, counter);
        Store s = initial_store(rng, vars);
        Config end = run_small(Config::start(c, s));
        auto big = big_step(c, s);
        ASSERT_NE(big.kind, BigStepResult::Kind::nontermination);
        if (big.kind == BigStepResult::Kind::ok)
            EXPECT_EQ(end, Config::finished(big.store)) << to_string(c);
        else
            EXPECT_EQ(end, Config::failure(big.store)) << to_string(c);
        auto ref = oracle::ref_run(c, s);
        EXPECT_EQ(ref.has_value(), big.kind == BigStepResult::Kind::ok);
        if (ref)
            EXPECT_EQ(*ref, big.store);
    }
}

TEST(WhileWp, Examples)
{
    auto q = parse_bexp("x < 3");
    EXPECT_EQ(wp(Cmd::skip(), q).precondition, q);
    EXPECT_EQ(to_string(wp(parse_while("x := x + 1"), parse_bexp("x <= 5")).precondition), "x + 1 <= 5");
    auto r = wp(parse_while("if x < 0 then y := 0 - x else y := x"), parse_bexp("0 <= y"));
    EXPECT_EQ(to_string(r.precondition), "(x < 0 ==> 0 <= 0 - x) and (not (x < 0) ==> 0 <= x)");
    EXPECT_TRUE(r.obligations.empty());
}

TEST(WhileWp, LoopsNeedInvariants)
{
    EXPECT_THROW(wp(parse_while("while tt do skip"), parse_bexp("tt")), EvalError);
    auto r = wp(parse_while("while x < 3 inv x <= 3 do x := x + 1"), parse_bexp("x = 3"));
    EXPECT_EQ(to_string(r.precondition), "x <= 3");
    ASSERT_EQ(r.obligations.size(), 2u);
    EXPECT_EQ(to_string(r.obligations[0]), "x <= 3 and x < 3 ==> x + 1 <= 3");
    EXPECT_EQ(to_string(r.obligations[1]), "x <= 3 and not (x < 3) ==> x = 3");
}

TEST(WhileWp, EvaluationOracle)
{
    oracle::Rng rng(1234);
    const std::vector<std::string> vars{"a", "b", "c"};
    for (int i = 0; i < 300; ++i) {
        std::size_t counter = 0;
        Cmd c = oracle::random_cmd(rng, 4, vars, false, counter);
        BExp post = oracle::random_bexp(rng, 2, vars);
        Store s = initial_store(rng, vars);
        auto pre = wp(c, post);
        ASSERT_TRUE(pre.obligations.empty());
        auto end = oracle::ref_run(c, s);
        bool expected = end.has_value() && oracle::ref_eval(post, *end);
        EXPECT_EQ(oracle::ref_eval(pre.precondition, s), expected) << to_string(c) << "  {" << to_string(post) << "}";
        EXPECT_EQ(eval(pre.precondition, s), expected);
    }
}

TEST(WhileCheck, Warnings)
{
    EXPECT_TRUE(check_while(parse_while("x := 1; y := x")).empty());
    EXPECT_EQ(check_while(parse_while("y := x")), std::vector<std::string>{"variable 'x' may be read before assignment"});
    EXPECT_EQ(check_while(parse_while("while tt do skip")), std::vector<std::string>{"loop without invariant annotation"});
    EXPECT_EQ(check_while(parse_while("if tt then x := 1 else skip; y := x")),
              std::vector<std::string>{"variable 'x' may be read before assignment"});
    EXPECT_EQ(check_while(parse_while("y := x + x; z := x")).size(), 1u);
}

TEST(WhilePrinter, Configurations)
{
    EXPECT_EQ(to_string(Config::start(parse_while("x := 1"), {{"y", 2}})), "⟨x := 1, {y ↦ 2}⟩");
    EXPECT_EQ(to_string(Config::finished({{"x", 3}})), "⟨done, {x ↦ 3}⟩");
    EXPECT_EQ(to_string(Config::failure({})), "⟨assertion failed, {}⟩");
}

TEST(WhileTree, Shape)
{
    TreeNode t = to_tree(parse_while("x := 1; skip"));
    EXPECT_EQ(t.children.size(), 2u);
}
