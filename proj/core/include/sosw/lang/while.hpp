#pragma once

// A small imperative language with unbounded integers, loops with optional invariants and
// assertions. Provides a structural small-step semantics, a fuel-bounded natural semantics,
// weakest preconditions and a couple of static warnings.
//
//   c ::= skip | x := a | c; c | if b then c else c | while b [inv b] do c | assert b
//   b ::= tt | ff | a = a | a <= a | a < a | not b | b and b | b or b | b ==> b
//   a ::= n | x | a + a | a - a | a * a
//
// Branches and loop bodies are single commands; use `( ... )` or `{ ... }` to group sequences.

#include "sosw/render.hpp"
#include "sosw/sos.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sosw::whilelang {

using Int = boost::multiprecision::cpp_int;
using Store = std::map<std::string, Int>;

class AExp {
public:
    enum class Op { num, var, add, sub, mul };

    static AExp num(Int n);
    static AExp var(std::string name);
    static AExp bin(Op op, AExp lhs, AExp rhs);

    [[nodiscard]] Op op() const;
    [[nodiscard]] const Int& value() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] const AExp& lhs() const;
    [[nodiscard]] const AExp& rhs() const;
    [[nodiscard]] std::size_t hash() const;

    bool operator==(const AExp& other) const;

private:
    struct Data;
    explicit AExp(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

class BExp {
public:
    enum class Op { tt, ff, eq, le, lt, negation, conj, disj, implies };

    static BExp truth(bool value);
    static BExp compare(Op op, AExp lhs, AExp rhs);
    static BExp negate(BExp operand);
    static BExp bin(Op op, BExp lhs, BExp rhs);

    [[nodiscard]] Op op() const;
    [[nodiscard]] bool is_comparison() const { return op() == Op::eq || op() == Op::le || op() == Op::lt; }
    /// Operands of a comparison.
    [[nodiscard]] const AExp& left_exp() const;
    [[nodiscard]] const AExp& right_exp() const;
    /// Operands of a connective; `lhs` is the operand of `not`.
    [[nodiscard]] const BExp& lhs() const;
    [[nodiscard]] const BExp& rhs() const;
    [[nodiscard]] std::size_t hash() const;

    bool operator==(const BExp& other) const;

private:
    struct Data;
    explicit BExp(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

class Cmd {
public:
    enum class Op { skip, assign, seq, ite, loop, assertion };

    static Cmd skip();
    static Cmd assign(std::string var, AExp value);
    static Cmd seq(Cmd first, Cmd second);
    static Cmd ite(BExp cond, Cmd then_branch, Cmd else_branch);
    static Cmd loop(BExp cond, std::optional<BExp> invariant, Cmd body);
    static Cmd assertion(BExp cond);

    [[nodiscard]] Op op() const;
    [[nodiscard]] const std::string& var() const;
    [[nodiscard]] const AExp& value() const;
    [[nodiscard]] const BExp& cond() const;
    [[nodiscard]] const std::optional<BExp>& invariant() const;
    /// Sequence parts, conditional branches (then, else) and the loop body (first).
    [[nodiscard]] const Cmd& first() const;
    [[nodiscard]] const Cmd& second() const;
    [[nodiscard]] std::size_t hash() const;

    bool operator==(const Cmd& other) const;

private:
    struct Data;
    explicit Cmd(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

std::string to_string(const AExp& a);
std::string to_string(const BExp& b);
std::string to_string(const Cmd& c);
std::string to_string(const Store& store);

Cmd parse_while(std::string_view text);
BExp parse_bexp(std::string_view text);

/// Throws EvalError when a variable is unbound.
Int eval(const AExp& a, const Store& store);
bool eval(const BExp& b, const Store& store);

AExp subst(const AExp& a, const std::string& x, const AExp& by);
BExp subst(const BExp& b, const std::string& x, const AExp& by);

/// A running command, or one of the two final markers.
struct Config {
    enum class Status { running, done, failed };

    Status status = Status::running;
    Cmd cmd = Cmd::skip();
    Store store;

    static Config start(Cmd c, Store s = {}) { return Config{Status::running, std::move(c), std::move(s)}; }
    static Config finished(Store s) { return Config{Status::done, Cmd::skip(), std::move(s)}; }
    static Config failure(Store s) { return Config{Status::failed, Cmd::skip(), std::move(s)}; }

    bool operator==(const Config&) const = default;
};

std::string to_string(const Config& cfg);

/// At most one step: labels `asg[x:=v]`, `skip`, `if-tt`, `if-ff`, `while-unfold`, `assert-ok`,
/// `assert-fail`.
std::vector<std::pair<Label, Config>> small_step(const Config& cfg);

/// `skip` and the done marker are accepting; a failed assertion is not.
bool is_final(const Config& cfg);

struct SmallStep {
    using State = Config;
    [[nodiscard]] std::vector<std::pair<Label, Config>> next(const Config& c) const { return small_step(c); }
    [[nodiscard]] bool accepting(const Config& c) const { return is_final(c); }
};

struct BigStepResult {
    enum class Kind { ok, nontermination, assert_failure };

    Kind kind = Kind::ok;
    /// The final store, or the store at the failing assertion.
    Store store;
    std::optional<BExp> failed;
};

/// Natural semantics; `fuel` bounds the total number of loop iterations.
BigStepResult big_step(const Cmd& c, const Store& store, std::size_t fuel = 10000);

struct WpResult {
    BExp precondition;
    /// Verification conditions contributed by annotated loops.
    std::vector<BExp> obligations;
};

/// Weakest precondition. Loops must carry an invariant; otherwise throws EvalError.
WpResult wp(const Cmd& c, const BExp& post);

std::vector<std::string> check_while(const Cmd& c);

TreeNode to_tree(const Cmd& c);

} // namespace sosw::whilelang

template <>
struct std::hash<sosw::whilelang::Cmd> {
    std::size_t operator()(const sosw::whilelang::Cmd& c) const noexcept { return c.hash(); }
};

template <>
struct std::hash<sosw::whilelang::Config> {
    std::size_t operator()(const sosw::whilelang::Config& c) const noexcept;
};
