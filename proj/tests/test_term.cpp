#include <gtest/gtest.h>

#include "lamspace/code.hpp"
#include "lamspace/encodings.hpp"

using namespace lamspace;

TEST(Parse, Identity) {
    Term t = parse("\\x.x");
    ASSERT_EQ(t->kind, Kind::Lam);
    EXPECT_EQ(t->a->kind, Kind::Var);
    EXPECT_EQ(t->a->index, 1u);
}

TEST(Parse, ApplicationOfIdentities) {
    Term t = parse("(\\x.x) (\\y.y)");
    ASSERT_EQ(t->kind, Kind::App);
    EXPECT_TRUE(term_equal(t->a, parse("\\z.z")));
    EXPECT_TRUE(term_equal(t->b, parse("\\z.z")));
}

TEST(Parse, Theta) {
    Term t = parse("\\x.\\y. y (x x y)");
    EXPECT_TRUE(term_equal(t, theta()));
    EXPECT_EQ(render(parse(render(t))), render(t));
    EXPECT_TRUE(term_equal(parse(render(t)), t));
}

TEST(Parse, ErrorsCarryPosition) {
    try {
        parse("\\x.\n  (x y");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
    }
    EXPECT_THROW(parse("\\x. y"), ParseError);
    Term open = parse_open("\\x. y x");
    EXPECT_EQ(free_depth(open), 1u);
    EXPECT_FALSE(is_closed(open));
}

TEST(Parse, RoundTripOnCorpus) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Term t = generate_closed_term(seed, 40);
        EXPECT_TRUE(term_equal(parse(render(t)), t)) << render(t);
    }
}

TEST(Size, Examples) {
    EXPECT_EQ(constructor_size(parse("\\x.x")), 2u);
    EXPECT_EQ(constructor_size(parse("(\\x.x)(\\y.y)")), 5u);
    EXPECT_EQ(constructor_size(theta()), 9u);
}

TEST(TreeAddress, Examples) {
    Term t = parse("\\x. x x");
    EXPECT_EQ(constructor_at_tree_address(t, parse_address("")), Label::lambda());
    EXPECT_EQ(constructor_at_tree_address(t, parse_address("0")), Label::apply());
    EXPECT_EQ(constructor_at_tree_address(t, parse_address("00")), Label::db(1));
    EXPECT_EQ(constructor_at_tree_address(t, parse_address("000")), Label::undefined());
    EXPECT_THROW(parse_address("02"), std::invalid_argument);
    EXPECT_EQ(address_string(parse_address("0110")), "0110");
}

TEST(LeftAddress, Examples) {
    Code c(parse("\\x.x"));
    EXPECT_EQ(c.left_address(c.root()), 1u);
    EXPECT_EQ(c.left_address_bits(c.root()), 1u);
    Code d(parse("(\\x.x) (\\y. y y)"));
    ASSERT_GE(d.size(), 5u);
    // the fifth constructor in left-to-right order
    EXPECT_EQ(d.left_address_bits(4), 3u);
    EXPECT_EQ(d.uniform_log_bits(), bits(d.size()));
}

TEST(Eta, Examples) {
    EXPECT_TRUE(term_equal(eta_expand(identity(), 0), identity()));
    EXPECT_TRUE(term_equal(eta_expand(identity(), 1), parse("\\x. (\\y.y) x")));
    for (std::uint32_t n : {1u, 2u, 5u})
        EXPECT_EQ(constructor_size(eta_expand(identity(), n)), constructor_size(identity()) + 3 * n);
}

TEST(Whnf, Examples) {
    auto r = reference_whnf(parse("(\\x.x)(\\y.y)"), 100);
    EXPECT_TRUE(term_equal(r.value, identity()));
    EXPECT_EQ(r.steps, 1u);
    EXPECT_THROW(reference_whnf(parse("(\\x.x x)(\\x.x x)"), 100), FuelExhausted);
    // stops at the head abstraction, not under it
    auto w = reference_whnf(parse("\\x. (\\y.y) x"), 10);
    EXPECT_EQ(w.steps, 0u);
}

TEST(Whnf, ToyIsLinear) {
    std::vector<std::uint64_t> steps;
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        std::string s(n, '0');
        auto r = reference_whnf(app(scroller(ScrollerKind::Toy), scott_string(bool_alphabet(), s)), 100000);
        EXPECT_TRUE(term_equal(r.value, identity()));
        steps.push_back(r.steps);
    }
    // equal increments per character
    EXPECT_EQ(steps[2] - steps[1], 2 * (steps[1] - steps[0]));
    EXPECT_EQ(steps[3] - steps[2], 2 * (steps[2] - steps[1]));
}

TEST(LambdaDet, Examples) {
    EXPECT_TRUE(in_lambda_det(parse("\\x. x (\\y.y)")));
    EXPECT_FALSE(in_lambda_det(parse("\\y z. (\\x.x) (y z)")));
    EXPECT_FALSE(in_lambda_det(theta()));
    EXPECT_TRUE(in_lambda_det(library().get("THETAD")));
}

TEST(Generator, SmallestIsIdentity) {
    for (std::uint64_t seed = 1; seed < 20; ++seed) EXPECT_TRUE(term_equal(generate_closed_term(seed, 2), identity()));
}

TEST(Generator, Deterministic) {
    EXPECT_TRUE(term_equal(generate_closed_term(7, 40), generate_closed_term(7, 40)));
    EXPECT_FALSE(term_equal(generate_closed_term(7, 40), generate_closed_term(8, 40)));
}

TEST(Generator, CorpusShape) {
    std::size_t normalizing = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        Term t = generate_closed_term(seed, 40);
        ASSERT_TRUE(is_closed(t));
        ASSERT_LE(constructor_size(t), 40u);
        try {
            reference_whnf(t, 10000);
            ++normalizing;
        } catch (const FuelExhausted&) {
        }
    }
    EXPECT_GE(normalizing, 300u);
}

TEST(Generator, DetOnlyStaysInFragment) {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) EXPECT_TRUE(in_lambda_det(generate_closed_term(seed, 40, {true})));
}
