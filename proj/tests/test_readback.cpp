#include <gtest/gtest.h>

#include "lamspace/bench.hpp"
#include "lamspace/readback.hpp"

using namespace lamspace;

namespace {

struct Final {
    CodePtr code;
    KamState state;
    Term decoded;
};

std::optional<Final> space_final(const Term& t, std::uint64_t fuel = 1'000'000) {
    CodePtr c = compile(t);
    SpaceKam m(c);
    auto out = drive(m, m.initial(), fuel);
    if (!out.profile.completed) return std::nullopt;
    return Final{c, out.state, *out.profile.result};
}

}  // namespace

TEST(Readback, Identity) {
    auto f = space_final(parse("(\\x.x) (\\y.y)"));
    ASSERT_TRUE(f);
    EXPECT_EQ(constructor_at(*f->code, f->state, parse_address("")), Label::lambda());
    EXPECT_EQ(constructor_at(*f->code, f->state, parse_address("0")), Label::db(1));
    EXPECT_EQ(constructor_at(*f->code, f->state, parse_address("00")), Label::undefined());
}

TEST(Readback, FollowsEnvironments) {
    // the result \y. (\z.z) with the inner abstraction held in an environment
    auto f = space_final(parse("(\\x y. x) (\\z. z)"));
    ASSERT_TRUE(f);
    ASSERT_FALSE(f->state.env.empty());
    ReadbackStats st;
    EXPECT_EQ(constructor_at(*f->code, f->state, parse_address("0"), &st), Label::lambda());
    EXPECT_EQ(st.jumps, 1u);
    EXPECT_EQ(constructor_at(*f->code, f->state, parse_address("00"), &st), Label::db(1));
}

TEST(Readback, RejectsNonFinalStates) {
    CodePtr c = compile(parse("(\\x.x) (\\y.y)"));
    SpaceKam m(c);
    auto s = m.initial();
    m.step(s);
    EXPECT_THROW(constructor_at(*c, s, {}), std::invalid_argument);
}

TEST(Readback, MatchesDecodedTermOnCorpus) {
    auto addrs = all_addresses(8);
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        auto f = space_final(generate_closed_term(seed, 40));
        if (!f) continue;
        ++checked;
        for (const auto& a : addrs) {
            ReadbackStats st;
            Cursor::reset_max();
            Label got = constructor_at(*f->code, f->state, a, &st);
            EXPECT_EQ(got, constructor_at_tree_address(f->decoded, a)) << "seed " << seed << " at " << address_string(a);
            EXPECT_EQ(Cursor::max_live(), 1u);
            EXPECT_LE(st.steps, a.size() + st.jumps + 1);
        }
    }
    EXPECT_GT(checked, 40u);
    EXPECT_EQ(Cursor::live(), 0u);
}

TEST(Readback, GlCpyResult) {
    auto f = space_final(experiment_term(ExperimentKind::GlCpy, 0, 2));
    ASSERT_TRUE(f);
    Term expect = scott_string(bool_alphabet(), sample_string(2));
    for (const auto& a : all_addresses(10))
        EXPECT_EQ(constructor_at(*f->code, f->state, a), constructor_at_tree_address(expect, a)) << address_string(a);
}

TEST(Readback, FinalsEqualAt) {
    auto i1 = space_final(parse("(\\x.x) (\\y.y)"));
    auto i2 = space_final(parse("(\\a b. b) (\\c. c) (\\y.y)"));
    auto k = space_final(parse("\\x y. x"));
    ASSERT_TRUE(i1 && i2 && k);
    for (const auto& a : all_addresses(4))
        EXPECT_TRUE(finals_equal_at(i1->state, i2->state, a, *i1->code, *i2->code)) << address_string(a);
    EXPECT_FALSE(finals_equal_at(i1->state, k->state, parse_address("0"), *i1->code, *k->code));
}

TEST(Readback, LamAndKamFinalsAgree) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        Term t = generate_closed_term(seed, 40, {true});
        auto f = space_final(t);
        if (!f) continue;
        CodePtr c = compile(t);
        SpaceLam lam(c);
        auto out = drive(lam, lam.initial(), 1'000'000);
        ASSERT_TRUE(out.profile.completed);
        for (const auto& a : all_addresses(6))
            EXPECT_TRUE(finals_equal_at(f->state, out.state, a, *f->code, *c)) << seed << " " << address_string(a);
    }
}
