// Copyright 2026 The qeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/hardy_search.hpp"
#include "qeval/lattice.hpp"
#include "qeval/scenarios.hpp"

namespace qeval {
namespace {

SamplerConfig trials(std::uint64_t n) {
    SamplerConfig c;
    c.trials = n;
    return c;
}

double frequency(const ScenarioReport &r, const std::string &key) {
    for (const auto &[k, v] : r.sampling.frequencies) {
        if (k == key) {
            return v;
        }
    }
    ADD_FAILURE() << "no frequency '" << key << "'";
    return -1.0;
}

TEST(RelationKind, NamesRoundTrip) {
    for (RelationKind k :
         {RelationKind::perfect_correlation, RelationKind::commute, RelationKind::not_commute,
          RelationKind::state_equality, RelationKind::probability_positive,
          RelationKind::conditional_probability_one}) {
        EXPECT_EQ(parse_relation_kind(to_string(k)), k);
    }
    EXPECT_THROW((void)parse_relation_kind("entangled"), InvalidArgument);
}

TEST(RelationKind, Arity) {
    EXPECT_TRUE(arity_ok(RelationKind::commute, 2));
    EXPECT_FALSE(arity_ok(RelationKind::commute, 3));
    EXPECT_TRUE(arity_ok(RelationKind::probability_positive, 1));
    EXPECT_TRUE(arity_ok(RelationKind::probability_positive, 3));
    EXPECT_FALSE(arity_ok(RelationKind::probability_positive, 0));
    EXPECT_TRUE(needs_projections(RelationKind::conditional_probability_one));
    EXPECT_FALSE(needs_projections(RelationKind::state_equality));
}

TEST(Scenario, ConstructorValidates) {
    const Observable a("A", DenseMatrix::Identity(2, 2));
    const Observable b("B", DenseMatrix::Identity(3, 3));
    const DensityOperator rho = DensityOperator::maximally_mixed(2);
    EXPECT_THROW(Scenario("x", rho, {a, b}, {}), DimensionMismatch);
    EXPECT_THROW(Scenario("x", rho, {a, a}, {}), InvalidArgument);
    EXPECT_THROW(Scenario("x", rho, {a}, {{RelationKind::commute, {"A", "Z"}}}), InvalidArgument);
    EXPECT_THROW(Scenario("x", rho, {a}, {{RelationKind::commute, {"A"}}}), InvalidArgument);
    DenseMatrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    const Observable zz("Z", z);
    EXPECT_THROW(Scenario("x", rho, {zz}, {{RelationKind::probability_positive, {"Z"}}}),
                 NotProjection);
    EXPECT_THROW(Scenario("x", rho, {zz}, {{RelationKind::commute, {"Z", "Z'"}}}), NotProjection);
}

TEST(Scenario, ResolvesComplement) {
    const Scenario s = build_hardy();
    const Observable r2p = s.resolve("R2'");
    const DenseMatrix expected =
        DenseMatrix::Identity(4, 4) - to_dense(s.observable("R2").matrix());
    EXPECT_LT((to_dense(r2p.matrix()) - expected).norm(), 1e-14);
    EXPECT_THROW((void)s.observable("nope"), InvalidArgument);
}

TEST(SternGerlach, AllRelationsPass) {
    const Scenario s = build_stern_gerlach();
    EXPECT_TRUE(check_perfect_correlation(s.observable("S_z"), s.observable("T_up"), s.state()).holds);
    EXPECT_NEAR(probability_one(s.state(), Projection(s.observable("T_up"))), 0.5, 1e-12);
    const ScenarioReport r = verify_scenario(s, trials(100000));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(frequency(r, "coincide(S_z,T_up)"), 1.0);
}

TEST(DoubleSlit, FrozenSeedIsFirstAccepted) {
    EXPECT_EQ(find_double_slit_seed(0), kDoubleSlitSeed);
    ASSERT_TRUE(try_build_double_slit(kDoubleSlitSeed).has_value());
}

TEST(DoubleSlit, RelationsAndJointMeasurability) {
    const Scenario s = build_double_slit();
    EXPECT_GE(frobenius(commutator(s.observable("Q_S"), s.observable("Q_F"))),
              kDoubleSlitMinCommutator);
    EXPECT_TRUE(check_perfect_correlation(s.observable("Q_S"), s.observable("T_S"), s.state()).holds);
    const std::vector<Observable> ok{s.observable("T_S"), s.observable("Q_F")};
    const std::vector<Observable> bad{s.observable("Q_S"), s.observable("Q_F")};
    EXPECT_NO_THROW((void)sample_joint(ok, s.state(), trials(1000)));
    EXPECT_THROW((void)sample_joint(bad, s.state(), trials(1000)), NotCommuting);
    EXPECT_TRUE(verify_scenario(s, trials(20000)).pass);
}

TEST(Hardy, ConstantsMatchSearch) {
    const double u = HardyConstants::u();
    EXPECT_NEAR(u, (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
    EXPECT_NEAR(HardyConstants::optimum(), std::pow(u, 5), 1e-15);
    EXPECT_NEAR(HardyConstants::state().norm(), 1.0, 1e-14);
    const oracle::HardyPoint best = oracle::hardy_search(12, 1e-9);
    EXPECT_NEAR(best.value, HardyConstants::optimum(), 1e-6);
}

TEST(Hardy, ChainIsCertainAndRefuted) {
    const Scenario s = build_hardy();
    for (const Relation &r : s.relations()) {
        const RelationResult res = check_relation(s, r, 1e-12);
        EXPECT_TRUE(res.pass) << describe(r) << " residual " << res.residual;
    }
    const ScenarioReport rep = verify_scenario(s, trials(100000));
    EXPECT_TRUE(rep.pass);
    const double p = frequency(rep, "P(L1=1,R2'=1)");
    EXPECT_GT(p, 0.0);
    EXPECT_LE(std::abs(p - HardyConstants::optimum()),
              binomial_bound(HardyConstants::optimum(), 100000));
    EXPECT_EQ(frequency(rep, "P(R1=1|L1=1)"), 1.0);
}

TEST(Lattice, ConfigurationIndexRoundTrip) {
    const std::array<Index, 3> sites{2, 0, 4};
    const Index idx = configuration_index(sites, 5);
    EXPECT_EQ(idx, 2 * 25 + 0 * 5 + 4);
    EXPECT_EQ(configuration_sites(idx, 5, 3), (std::vector<Index>{2, 0, 4}));
}

TEST(Lattice, RigidSupportSatisfiesDistances) {
    const std::array<Index, 2> mobile{0, 3};
    const RigidChain chain = build_rigid_chain(LatticeConfig{}, mobile, 1 << 20);
    EXPECT_EQ(chain.rigid.size(), 5U);  // starts 0..L-N
    EXPECT_NEAR(chain.psi.norm(), 1.0, 1e-14);
    for (Index k = 0; k < chain.dim; ++k) {
        if (std::abs(chain.psi(k)) == 0.0) {
            continue;
        }
        const std::vector<Index> x = configuration_sites(k, 8, 4);
        for (std::size_t j = 1; j < x.size(); ++j) {
            EXPECT_EQ(x[j] - x[j - 1], 1);
        }
    }
}

TEST(Lattice, InvalidConfigurationsRejected) {
    const std::array<Index, 1> mobile{0};
    LatticeConfig c;
    c.sites = 3;
    EXPECT_THROW((void)build_rigid_chain(c, mobile, 1 << 20), InvalidArgument);
    c = LatticeConfig{};
    c.mass = 0.0;
    EXPECT_THROW((void)build_rigid_chain(c, mobile, 1 << 20), InvalidArgument);
    c = LatticeConfig{};
    EXPECT_THROW((void)build_rigid_chain(c, mobile, 100), InvalidArgument);
    const std::array<Index, 1> out_of_range{7};
    EXPECT_THROW((void)build_rigid_chain(LatticeConfig{}, out_of_range, 1 << 20), InvalidArgument);
}

TEST(RigidToy, RelationsAtL8) {
    const Scenario s = build_rigid_toy();
    const ScenarioReport r = verify_scenario(s, trials(0));
    EXPECT_TRUE(r.pass);
    EXPECT_GT(frobenius(commutator(s.observable("Q_CM"), s.observable("V_CM"))), 0.01);
    EXPECT_LE(frobenius(commutator(s.observable("T_Q"), s.observable("T_V"))), 1e-12);
}

TEST(RigidToy, BothProfilesPass) {
    LatticeConfig c;
    c.profile = Profile::uniform;
    EXPECT_TRUE(verify_scenario(build_rigid_toy(c), trials(0)).pass);
    c.profile = Profile::gaussian;
    EXPECT_TRUE(verify_scenario(build_rigid_toy(c), trials(0)).pass);
}

TEST(RigidToy, ResidualsDoNotGrowWithL) {
    LatticeConfig small;
    small.sites = 8;
    LatticeConfig large;
    large.sites = 16;
    const ScenarioReport a = verify_scenario(build_rigid_toy(small), trials(0));
    const ScenarioReport b = verify_scenario(build_rigid_toy(large), trials(0));
    ASSERT_EQ(a.relations.size(), b.relations.size());
    for (std::size_t k = 0; k < a.relations.size(); ++k) {
        if (a.relations[k].relation.kind == RelationKind::not_commute) {
            continue;
        }
        EXPECT_LE(b.relations[k].residual, a.relations[k].residual + 1e-13);
    }
}

TEST(RigidToy, RequiresFourParticles) {
    LatticeConfig c;
    c.particles = 5;
    EXPECT_THROW((void)build_rigid_toy(c), InvalidArgument);
}

TEST(RigidRealistic, DefaultAndSweep) {
    EXPECT_TRUE(verify_scenario(build_rigid_realistic(), trials(0)).pass);
    LatticeConfig c;
    c.particles = 5;
    c.sites = 5;
    EXPECT_TRUE(verify_scenario(build_builtin("rigid-realistic", c), trials(0)).pass);
}

TEST(RigidRealistic, GroupValidation) {
    LatticeConfig c;
    c.sites = 6;
    const std::array<Index, 2> j{1, 2};
    const std::array<Index, 2> overlap{1, 2};
    const std::array<Index, 1> off_centre{0};
    const std::array<Index, 2> k{0, 3};
    EXPECT_THROW((void)build_rigid_realistic(c, j, overlap), InvalidArgument);
    EXPECT_THROW((void)build_rigid_realistic(c, off_centre, k), InvalidArgument);
    EXPECT_THROW((void)build_rigid_realistic(c, std::span<const Index>{}, k), InvalidArgument);
    c.sites = 20;
    EXPECT_THROW((void)build_rigid_realistic(c, j, k), InvalidArgument);  // 20^4 > cap
}

TEST(Builtins, FixedList) {
    const auto &list = builtin_scenarios();
    ASSERT_EQ(list.size(), 5U);
    for (const BuiltinInfo &b : list) {
        EXPECT_NO_THROW((void)build_builtin(b.name));
    }
    EXPECT_THROW((void)build_builtin("nope"), InvalidArgument);
}

TEST(Verify, CorruptedStateFailsStateEquality) {
    const Scenario good = build_rigid_toy();
    // Adding one non-rigid configuration leaves the rigid sector.
    const DenseMatrix rho = to_dense(good.state().matrix());
    const Matrix dq = good.observable("Q_CM").matrix() - good.observable("T_Q").matrix();
    const Matrix dv = good.observable("V_CM").matrix() - good.observable("T_V").matrix();
    Index on = 0;
    Index off = -1;
    for (Index k = 0; k < good.dim(); ++k) {
        if (rho(k, k).real() > 0.0) {
            on = k;
        } else if (off < 0 && dq.col(k).norm() > 0.1 && dv.col(k).norm() > 0.1) {
            off = k;
        }
    }
    ASSERT_GE(off, 0);
    Vector psi = rho.col(on);
    psi(off) = psi.norm();
    const Scenario bad("corrupted", DensityOperator::pure(psi), good.observables(),
                       good.relations());
    const ScenarioReport r = verify_scenario(bad, trials(0));
    EXPECT_FALSE(r.pass);
    bool saw = false;
    for (const RelationResult &x : r.relations) {
        if (x.relation.kind == RelationKind::state_equality) {
            EXPECT_FALSE(x.pass);
            EXPECT_GT(x.residual, 0.0);
            saw = true;
        }
    }
    EXPECT_TRUE(saw);
}

TEST(Verify, ToleranceOverrideCanFail) {
    const Scenario s = build_stern_gerlach();
    const Relation r{RelationKind::not_commute, {"S_z", "T_up"}};
    EXPECT_FALSE(check_relation(s, r).pass);
}

} // namespace
} // namespace qeval
