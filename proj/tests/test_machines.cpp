#include <gtest/gtest.h>

#include "lamspace/bench.hpp"

using namespace lamspace;

namespace {

const MachineKind all_kam[] = {MachineKind::Naive, MachineKind::Space, MachineKind::Time};

std::vector<Transition> kinds(const RunProfile& p) {
    std::vector<Transition> out;
    for (const auto& l : p.trace) out.push_back(l.kind);
    return out;
}

}  // namespace

TEST(Decode, InitialStateIsTheCode) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Term t = generate_closed_term(seed, 30);
        SpaceKam m(compile(t));
        EXPECT_TRUE(term_equal(m.decode(m.initial()), t));
        NaiveKam n(compile(t));
        EXPECT_TRUE(term_equal(n.decode(n.initial()), t));
    }
}

TEST(Decode, SingletonEnvironment) {
    CodePtr c = compile(parse("(\\x. x) (\\y. y)"));
    SpaceKam m(c);
    // (x, [x <- (I, e)], e)
    NodeId x = (*c)[(*c)[c->root()].left].left;
    NodeId lx = (*c)[c->root()].left;
    KamState s{x, {EnvEntry{lx, m.make((*c)[c->root()].right, {})}}, {}};
    EXPECT_TRUE(term_equal(m.decode(s), identity()));
}

TEST(Space, InitialState) {
    SpaceKam m(compile(parse("\\x. (\\y. y) x")));
    auto s = m.initial();
    EXPECT_EQ(m.bit_size(s), 1u);
    EXPECT_EQ(m.abstract_space(s), 1u);
    // an application root sits after its left sub-term in the in-order layout
    SpaceKam a(compile(parse("(\\x. x) (\\y. y)")));
    EXPECT_EQ(a.bit_size(a.initial()), bits(3));
}

TEST(Space, AbstractSpaceCountsStackClosures) {
    CodePtr c = compile(parse("(\\x. x) (\\y. y)"));
    SpaceKam m(c);
    auto s = m.initial();
    NodeId i = (*c)[c->root()].right;
    for (int k = 0; k < 3; ++k) s.stack.push(m.make(i, {}));
    EXPECT_EQ(m.abstract_space(s), 4u);
}

TEST(Run, IdentityOnEveryMachine) {
    for (MachineKind k : {MachineKind::Naive, MachineKind::Space, MachineKind::Time, MachineKind::Lam}) {
        RunProfile p = run(k, parse("(\\x.x)(\\y.y)"), 100);
        ASSERT_TRUE(p.completed);
        EXPECT_TRUE(term_equal(*p.result, identity()));
        EXPECT_EQ(p.beta_steps, 1u);
    }
}

TEST(Run, TransitionShapes) {
    RunOptions opt;
    opt.trace = true;
    Term t = parse("(\\x.x)(\\y.y)");
    EXPECT_EQ(kinds(run(MachineKind::Naive, t, 100, opt)), (std::vector{Transition::Sea, Transition::Beta, Transition::Sub}));
    EXPECT_EQ(kinds(run(MachineKind::Space, t, 100, opt)),
              (std::vector{Transition::SeaNV, Transition::BetaNW, Transition::Sub}));
    EXPECT_EQ(kinds(run(MachineKind::Lam, t, 100, opt)),
              (std::vector{Transition::Sea, Transition::Ret, Transition::BetaNW, Transition::Sub}));
    // weakening discards the argument
    EXPECT_EQ(kinds(run(MachineKind::Space, parse("(\\x y. y)(\\z.z)"), 100, opt)),
              (std::vector{Transition::SeaNV, Transition::BetaW}));
}

TEST(Run, BetaCountMatchesTransitionCounts) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Term t = generate_closed_term(seed, 40);
        RunProfile s = run(MachineKind::Space, t, 20000);
        EXPECT_EQ(s.beta_steps, s.count(Transition::BetaW) + s.count(Transition::BetaNW));
        RunProfile n = run(MachineKind::Naive, t, 20000);
        EXPECT_EQ(n.beta_steps, n.count(Transition::Beta));
    }
}

TEST(Run, ProfilingIsInert) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Term t = generate_closed_term(seed, 40);
        RunOptions traced;
        traced.trace = true;
        for (MachineKind k : all_kam) {
            RunProfile a = run(k, t, 5000), b = run(k, t, 5000, traced);
            EXPECT_EQ(a.transitions, b.transitions);
            EXPECT_EQ(a.max_bit_space, b.max_bit_space);
            EXPECT_EQ(a.max_heap_cells, b.max_heap_cells);
            EXPECT_EQ(b.trace.size(), b.transitions);
        }
    }
}

TEST(Run, FuelExhaustionIsFlagged) {
    RunProfile p = run(MachineKind::Space, parse("(\\x.x x)(\\x.x x)"), 50);
    EXPECT_FALSE(p.completed);
    EXPECT_EQ(p.transitions, 50u);
    EXPECT_FALSE(p.result.has_value());
    EXPECT_GT(p.max_bit_space, 0u);
}

TEST(Run, AgreesWithReferenceOnSmallCorpus) {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        Term t = generate_closed_term(seed, 40);
        WhnfResult r;
        try {
            r = reference_whnf(t, 10000);
        } catch (const FuelExhausted&) {
            continue;
        }
        for (MachineKind k : all_kam) {
            RunProfile p = run(k, t, 10'000'000);
            ASSERT_TRUE(p.completed) << machine_name(k) << " seed " << seed;
            EXPECT_TRUE(term_equal(*p.result, r.value)) << machine_name(k) << " seed " << seed;
            EXPECT_EQ(p.beta_steps, r.steps) << machine_name(k) << " seed " << seed;
        }
    }
}

// env entries only accumulate between two sub transitions of the Naive KAM
TEST(Naive, EnvironmentsNeverShrinkWithoutSub) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        NaiveKam m(compile(generate_closed_term(seed, 40)));
        std::size_t last = 0;
        drive(m, m.initial(), 5000, {}, [&](const KamState& s, std::optional<Transition> k) {
            if (k && *k != Transition::Sub) EXPECT_GE(s.env.size(), last);
            last = s.env.size();
            EXPECT_LE(s.env.size(), m.code().size());
        });
    }
}

TEST(Naive, ToyExplodes) {
    std::vector<std::uint64_t> b;
    for (std::size_t n = 6; n <= 10; ++n)
        b.push_back(run(MachineKind::Naive, experiment_term(ExperimentKind::Toy, 0, n), 10'000'000).max_bit_space);
    for (std::size_t k = 1; k < b.size(); ++k) EXPECT_GE(static_cast<double>(b[k]), 1.5 * static_cast<double>(b[k - 1]));
}

TEST(Space, RestrictionSplitsEnvironment) {
    // |e|t| + |e|u| >= |e| for every sea_nv on a corpus
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        CodePtr c = compile(generate_closed_term(seed, 40));
        SpaceKam m(c);
        auto s = m.initial();
        for (int step = 0; step < 3000 && !m.is_final(s); ++step) {
            const auto& n = (*c)[s.code];
            std::size_t before = s.env.size();
            bool nv = n.kind == Kind::App && (*c)[n.right].kind != Kind::Var;
            Transition k = m.step(s);
            if (nv) {
                ASSERT_EQ(k, Transition::SeaNV);
                std::size_t split = s.env.size() + s.stack.top()->env.size();
                EXPECT_GE(split, before);
                std::vector<NodeId> shared;
                std::set_intersection((*c)[n.left].fv.begin(), (*c)[n.left].fv.end(), (*c)[n.right].fv.begin(),
                                      (*c)[n.right].fv.end(), std::back_inserter(shared));
                EXPECT_EQ(split == before, shared.empty());
            }
        }
    }
}

TEST(Space, EnvRestrictExamples) {
    CodePtr c = compile(parse("\\x. x"));
    SpaceKam m(c);
    Env e{EnvEntry{c->root(), m.make(c->root(), {})}};
    EXPECT_TRUE(env_restrict(e, {}).empty());
    Env same = env_restrict(e, {c->root()});
    ASSERT_EQ(same.size(), 1u);
    EXPECT_EQ(same[0].value, e[0].value);
    EXPECT_THROW(env_restrict(e, {c->root() + 1}), InvariantViolation);
}

TEST(Space, SubOnWideEnvironmentIsRejected) {
    CodePtr c = compile(parse("\\x y. x"));
    SpaceKam m(c);
    NodeId lx = c->root(), ly = (*c)[lx].left, x = (*c)[ly].left;
    ClosurePtr i = m.make(lx, {});
    KamState s{x, {EnvEntry{lx, i}, EnvEntry{ly, i}}, {}};
    EXPECT_THROW(m.step(s), InvariantViolation);
}

TEST(Space, ThetaUnfolds) {
    // theta theta u: two binds, the sea of y (x x y), then y is replaced by u
    RunOptions opt;
    opt.trace = true;
    RunProfile p = run(MachineKind::Space, parse("THETA THETA (\\f. \\z. z)", &library().defs()), 100, opt);
    auto k = kinds(p);
    ASSERT_GE(k.size(), 6u);
    EXPECT_EQ(std::vector(k.begin() + 2, k.begin() + 6),
              (std::vector{Transition::BetaNW, Transition::BetaNW, Transition::SeaNV, Transition::Sub}));
}

TEST(Space, GlCpyReturnsItsInput) {
    for (std::size_t n : {1u, 5u, 12u}) {
        std::string s = sample_string(n);
        RunProfile p = run(MachineKind::Space, experiment_term(ExperimentKind::GlCpy, 0, n), 1'000'000);
        ASSERT_TRUE(p.completed);
        EXPECT_EQ(read_scott_string(*p.result, bool_alphabet()), s);
    }
}

TEST(Space, CounterEnvironmentExplodes) {
    for (std::uint32_t n = 2; n <= 8; ++n) {
        RunProfile p = run(MachineKind::Space, counter_term(n), 10'000'000);
        ASSERT_TRUE(p.completed);
        EXPECT_TRUE(term_equal(*p.result, identity()));
        EXPECT_GE(p.max_bit_space, 1ull << n);
    }
}

TEST(Time, HeapGrowsMonotonically) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        TimeKam m(compile(generate_closed_term(seed, 40)));
        std::uint64_t last = 0;
        std::uint64_t betas = 0;
        auto out = drive(m, m.initial(), 5000, {}, [&](const TimeState& s, std::optional<Transition> k) {
            EXPECT_GE(s.cells(), last);
            last = s.cells();
            if (k && is_beta(*k)) ++betas;
        });
        if (betas > 0) EXPECT_GT(out.profile.max_heap_cells, 0u);
    }
}

TEST(Time, AbstractSpaceIsUndefined) {
    TimeKam m(compile(identity()));
    EXPECT_THROW(m.abstract_space(m.initial()), InvariantViolation);
}

TEST(Time, CounterHeapStaysSmall) {
    for (std::uint32_t n = 2; n <= 10; ++n) {
        RunProfile p = run(MachineKind::Time, counter_term(n), 10'000'000);
        ASSERT_TRUE(p.completed);
        EXPECT_LE(p.max_heap_cells, 4u * n + 8);
    }
}

TEST(Lam, SimulatesSeaVarInThreeSteps) {
    // t x with x bound to an abstraction: sea, sub, ret against the KAM's sea_v
    RunOptions opt;
    opt.trace = true;
    Term t = parse("(\\x. (\\y. y) x) (\\z. z)");
    auto lam = kinds(run(MachineKind::Lam, t, 100, opt));
    auto kam = kinds(run(MachineKind::Space, t, 100, opt));
    using T = Transition;
    EXPECT_EQ(kam, (std::vector{T::SeaNV, T::BetaNW, T::SeaV, T::BetaNW, T::Sub}));
    EXPECT_EQ(lam, (std::vector{T::Sea, T::Ret, T::BetaNW, T::Sea, T::Sub, T::Ret, T::BetaNW, T::Sub}));
}

TEST(Lam, AgreesWithSpaceKamOnDetCorpus) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Term t = generate_closed_term(seed, 40, {true});
        RunProfile a = run(MachineKind::Space, t, 1'000'000), b = run(MachineKind::Lam, t, 1'000'000);
        if (!a.completed) continue;
        ASSERT_TRUE(b.completed);
        EXPECT_TRUE(term_equal(*a.result, *b.result));
        EXPECT_EQ(a.beta_steps, b.beta_steps);
    }
}

TEST(Machines, ParseNames) {
    for (MachineKind k : {MachineKind::Naive, MachineKind::Space, MachineKind::Time, MachineKind::Lam})
        EXPECT_EQ(parse_machine(machine_name(k)), k);
    EXPECT_THROW(parse_machine("fast"), std::invalid_argument);
}
