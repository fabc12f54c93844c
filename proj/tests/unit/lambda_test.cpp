#include "oracles.hpp"

#include "sosw/lang/lambda.hpp"

#include <gtest/gtest.h>

using namespace sosw;
using namespace sosw::lambda;

namespace {

Term parse(const std::string& s) { return parse_lambda(s); }

std::size_t count_states(const auto& sem, const std::string& program)
{
    auto lts = explore(sem, parse(program));
    EXPECT_TRUE(lts.complete());
    return lts.size();
}

/// Terms whose binders are pairwise distinct and never clash with the free variable `f`.
Term distinct_binders(oracle::Rng& rng, std::size_t depth, std::vector<std::string>& scope, std::size_t& next)
{
    if (depth == 0 || oracle::coin(rng, 0.2)) {
        if (!scope.empty() && oracle::coin(rng, 0.7))
            return Term::var(scope[oracle::pick(rng, scope.size())]);
        return oracle::coin(rng) ? Term::var("f") : Term::val(static_cast<long>(oracle::pick(rng, 3)));
    }
    switch (oracle::pick(rng, 5)) {
    case 0:
    case 1: {
        std::string b = "v" + std::to_string(next++);
        scope.push_back(b);
        Term body = distinct_binders(rng, depth - 1, scope, next);
        scope.pop_back();
        return Term::lam(b, body);
    }
    case 2: {
        Term f = distinct_binders(rng, depth - 1, scope, next);
        return Term::app(f, distinct_binders(rng, depth - 1, scope, next));
    }
    case 3: {
        Term l = distinct_binders(rng, depth - 1, scope, next);
        return Term::add(l, distinct_binders(rng, depth - 1, scope, next));
    }
    default: {
        Term g = distinct_binders(rng, depth - 1, scope, next);
        Term t = distinct_binders(rng, depth - 1, scope, next);
        return Term::if0(g, t, distinct_binders(rng, depth - 1, scope, next));
    }
    }
}

std::multiset<std::string> alpha_classes(const std::vector<Term>& terms)
{
    std::multiset<std::string> out;
    for (const auto& t : terms) {
        std::vector<std::string> scope;
        out.insert(oracle::nameless(t, scope));
    }
    return out;
}

std::multiset<std::string> alpha_classes(const Steps& steps)
{
    std::vector<Term> terms;
    for (const auto& s : steps)
        terms.push_back(s.second);
    return alpha_classes(terms);
}

bool delays_beta(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::var:
    case Term::Kind::val:
        return false;
    case Term::Kind::lam:
        return delays_beta(t.child(0));
    case Term::Kind::app:
        if (t.child(0).is(Term::Kind::lam) && !strict_next(t.child(1)).empty())
            return true;
        return delays_beta(t.child(0)) || delays_beta(t.child(1));
    case Term::Kind::add:
        return delays_beta(t.child(0)) || delays_beta(t.child(1));
    case Term::Kind::if0:
        return delays_beta(t.child(0)) || delays_beta(t.child(1)) || delays_beta(t.child(2));
    }
    return false;
}

bool contained(const Steps& part, const Steps& whole)
{
    auto all = alpha_classes(whole);
    for (const auto& c : alpha_classes(part))
        if (!all.count(c))
            return false;
    return true;
}

} // namespace

TEST(LambdaParser, Precedence)
{
    EXPECT_EQ(debug_string(parse("(\\x -> x + 1) 2")), "App(Lam(x,Add(Var(x),Val(1))),Val(2))");
    EXPECT_EQ(debug_string(parse("f x y")), "App(App(Var(f),Var(x)),Var(y))");
    EXPECT_EQ(debug_string(parse("f x + g y")), "Add(App(Var(f),Var(x)),App(Var(g),Var(y)))");
    EXPECT_EQ(debug_string(parse("\\x -> \\y -> x y")), "Lam(x,Lam(y,App(Var(x),Var(y))))");
    EXPECT_EQ(debug_string(parse("λx -> x")), "Lam(x,Var(x))");
    EXPECT_EQ(debug_string(parse("if0 x then 1 else 2 + 3")), "If0(Var(x),Val(1),Add(Val(2),Val(3)))");
}

TEST(LambdaParser, ErrorsCarryPositions)
{
    try {
        parse("\\ -> 1");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_EQ(e.col(), 3u);
        EXPECT_EQ(e.expected(), std::vector<std::string>{"binder name"});
    }
    EXPECT_THROW(parse("(1"), ParseError);
    EXPECT_THROW(parse("1 )"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
}

TEST(LambdaParser, PrintParseRoundTrip)
{
    oracle::Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        Term t = oracle::random_term(rng, 5, {"x", "y", "z"});
        EXPECT_EQ(parse(to_string(t)), t) << to_string(t);
    }
}

TEST(LambdaPrinter, Examples)
{
    EXPECT_EQ(to_string(parse("(\\x -> x + 1) 2")), "(\\x -> x + 1) 2");
    EXPECT_EQ(to_string(parse("1 + (2 + 3)")), "1 + (2 + 3)");
    EXPECT_EQ(to_string(parse("(1 + 2) + 3")), "1 + 2 + 3");
    EXPECT_EQ(to_string(parse("f (g x)")), "f (g x)");
}

TEST(Subst, FreeVariablesShrink)
{
    oracle::Rng rng(17);
    const std::vector<std::string> names{"x", "y", "z", "x1"};
    for (int i = 0; i < 1000; ++i) {
        Term e = oracle::random_term(rng, 4, names);
        Term arg = oracle::random_term(rng, 3, names);
        const std::string& x = names[oracle::pick(rng, names.size())];
        auto result = oracle::free_vars(subst(e, x, arg));
        auto allowed = oracle::free_vars(e);
        allowed.erase(x);
        if (oracle::free_vars(e).count(x)) {
            auto fa = oracle::free_vars(arg);
            allowed.insert(fa.begin(), fa.end());
        }
        for (const auto& v : result)
            EXPECT_TRUE(allowed.count(v)) << v << " escaped in " << to_string(e);
        EXPECT_EQ(oracle::free_vars(e), free_vars(e));
    }
}

TEST(Subst, AvoidsCapture)
{
    Term r = subst(parse("\\y -> x + y"), "x", Term::var("y"));
    EXPECT_TRUE(oracle::alpha_equivalent(r, parse("\\z -> y + z"))) << to_string(r);
    EXPECT_EQ(to_string(r), "\\y1 -> y + y1");
    Term nested = subst(parse("\\y -> \\y1 -> x + y + y1"), "x", parse("y + y1"));
    EXPECT_TRUE(oracle::alpha_equivalent(nested, parse("\\a -> \\b -> y + y1 + a + b"))) << to_string(nested);
}

TEST(Subst, BoundOccurrencesUntouched)
{
    EXPECT_EQ(subst(parse("\\x -> x"), "x", Term::val(1)), parse("\\x -> x"));
    EXPECT_EQ(subst(parse("x + \\x -> x"), "x", Term::val(1)), parse("1 + \\x -> x"));
}

TEST(LambdaSemantics, SuccessorReachesThreeInTwoSteps)
{
    const std::string succ = "(\\x -> x + 1) 2";
    for (auto s : {oracle::RefLambda::Strategy::full, oracle::RefLambda::Strategy::lazy,
                   oracle::RefLambda::Strategy::strict})
        EXPECT_EQ(oracle::RefLambda(s).distance(parse(succ), "3"), 2u);
    EXPECT_EQ(count_states(FullSemantics{}, succ), 3u);
    EXPECT_EQ(count_states(LazySemantics{}, succ), 3u);
    EXPECT_EQ(count_states(StrictSemantics{}, succ), 3u);
}

TEST(LambdaSemantics, StrategyStateCounts)
{
    const std::string p = "(\\x -> 1) (2 + 3)";
    EXPECT_EQ(count_states(FullSemantics{}, p), oracle::RefLambda(oracle::RefLambda::Strategy::full).reachable(parse(p)));
    EXPECT_EQ(count_states(LazySemantics{}, p), oracle::RefLambda(oracle::RefLambda::Strategy::lazy).reachable(parse(p)));
    EXPECT_EQ(count_states(StrictSemantics{}, p),
              oracle::RefLambda(oracle::RefLambda::Strategy::strict).reachable(parse(p)));
    EXPECT_EQ(count_states(FullSemantics{}, p), 2u);
    EXPECT_EQ(count_states(LazySemantics{}, p), 2u);
    EXPECT_EQ(count_states(StrictSemantics{}, p), 3u);
}

TEST(LambdaSemantics, LabelsNameTheRule)
{
    auto steps = full_next(parse("(\\x -> x) (1 + 2)"));
    ASSERT_EQ(steps.size(), 1u);
    EXPECT_EQ(steps[0].first, Label("beta-x"));
    EXPECT_EQ(full_next(parse("1 + 2"))[0].first, Label("add"));
    EXPECT_EQ(full_next(parse("if0 0 then 1 else 2"))[0].first, Label("if0-tt"));
    EXPECT_EQ(full_next(parse("if0 3 then 1 else 2"))[0].first, Label("if0-ff"));
    EXPECT_TRUE(full_next(parse("x")).empty());
    EXPECT_TRUE(full_next(parse("if0 (\\x -> x) then 1 else 2")).empty());
}

TEST(LambdaSemantics, FullIsNondeterministic)
{
    auto steps = full_next(parse("(1 + 2) + (3 + 4)"));
    EXPECT_EQ(steps.size(), 2u);
    EXPECT_EQ(lazy_next(parse("(1 + 2) + (3 + 4)")).size(), 1u);
    EXPECT_EQ(to_string(lazy_next(parse("(1 + 2) + (3 + 4)"))[0].second), "3 + (3 + 4)");
}

TEST(LambdaSemantics, MatchesReferenceReducer)
{
    oracle::Rng rng(31);
    using S = oracle::RefLambda::Strategy;
    for (int i = 0; i < 800; ++i) {
        std::vector<std::string> scope;
        std::size_t next = 0;
        Term t = distinct_binders(rng, 5, scope, next);
        EXPECT_EQ(alpha_classes(full_next(t)), alpha_classes(oracle::RefLambda(S::full).next(t))) << to_string(t);
        EXPECT_EQ(alpha_classes(lazy_next(t)), alpha_classes(oracle::RefLambda(S::lazy).next(t))) << to_string(t);
        EXPECT_EQ(alpha_classes(strict_next(t)), alpha_classes(oracle::RefLambda(S::strict).next(t))) << to_string(t);
    }
}

TEST(LambdaSemantics, LazyAndStrictAreDeterministic)
{
    oracle::Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        Term t = oracle::random_term(rng, 5, {"x", "y"});
        EXPECT_LE(lazy_next(t).size(), 1u);
        EXPECT_LE(strict_next(t).size(), 1u);
    }
}

TEST(LambdaSemantics, StrategiesRefineFull)
{
    oracle::Rng rng(11);
    int strict_checked = 0;
    for (int i = 0; i < 400; ++i) {
        Term t = oracle::random_term(rng, 5, {"x", "y"});
        EXPECT_TRUE(contained(lazy_next(t), full_next(t))) << to_string(t);
        if (!delays_beta(t)) {
            ++strict_checked;
            EXPECT_TRUE(contained(strict_next(t), full_next(t))) << to_string(t);
        }
    }
    EXPECT_GT(strict_checked, 100);
}

TEST(LambdaSemantics, StrictStepsInsideARedexFullDoesNot)
{
    Term t = parse("(\\x -> 1) (2 + 3)");
    EXPECT_FALSE(contained(strict_next(t), full_next(t)));
}

TEST(LambdaTree, Labels)
{
    TreeNode t = to_tree(parse("(\\x -> x + 1) 2"));
    EXPECT_EQ(t.label, "App");
    ASSERT_EQ(t.children.size(), 2u);
    EXPECT_EQ(t.children[0].label, "λx");
    EXPECT_EQ(t.children[0].children[0].label, "+");
    EXPECT_EQ(t.children[1].label, "2");
}

TEST(LambdaTerm, StructuralEqualityAndHash)
{
    Term a = parse("\\x -> x + 1");
    Term b = parse("\\x -> x + 1");
    EXPECT_EQ(a, b);
    EXPECT_EQ(std::hash<Term>{}(a), std::hash<Term>{}(b));
    EXPECT_NE(a, parse("\\y -> y + 1"));
    EXPECT_EQ(a.size(), 4u);
}
