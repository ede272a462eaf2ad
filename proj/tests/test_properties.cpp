#include <gtest/gtest.h>

#include "support/properties.hpp"

namespace {

constexpr std::size_t kPrograms = 500;
constexpr std::size_t kMinInstances = 200;

void expect_clean(const props::Tally& t, std::size_t min_instances = kMinInstances) {
    EXPECT_EQ(t.counterexamples, 0u) << t.first;
    EXPECT_GE(t.instances, min_instances);
}

}  // namespace

TEST(Properties, FlpAnswerSetsAreUnfoundedFreeModels) { expect_clean(props::flp_equivalence(kPrograms)); }

TEST(Properties, CutRemovalKeepsUnfoundedness) { expect_clean(props::cut_removal(kPrograms)); }

TEST(Properties, UnfoundedWithoutInnerExternalEdgeTransfersToGuess) { expect_clean(props::guess_transfer(kPrograms)); }

TEST(Properties, NoECycleInsideGivesGuessWitness) { expect_clean(props::no_e_cycle_witness(kPrograms)); }

TEST(Properties, AvoidingCyclicInputsGivesGuessWitness) { expect_clean(props::no_cyclic_input_witness(kPrograms)); }

TEST(Properties, SomeComponentCarriesTheUnfoundedSet) { expect_clean(props::component_carrier(kPrograms)); }

TEST(Properties, ComponentUnfoundedSetsLift) { expect_clean(props::component_lift(kPrograms)); }

TEST(Properties, RestrictingToTrueAtomsKeepsUnfoundedness) { expect_clean(props::restriction(kPrograms)); }

TEST(Properties, CyclicInputRestrictionPreservesExistence) { expect_clean(props::component_restriction(4 * kPrograms)); }

TEST(Properties, ModesAgree) { expect_clean(props::mode_equivalence(kPrograms), kPrograms); }

TEST(Properties, EnginesAgree) { expect_clean(props::engine_agreement(kPrograms), kPrograms); }

TEST(Properties, EffortIsMonotoneAcrossModes) {
    const auto t = props::monotone_effort(kPrograms);
    EXPECT_EQ(t.counterexamples, 0u) << t.first;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto e = props::effort(hexufs::generate_instance({6, 1, 3, seed}), hexufs::builtin_registry(), 64);
        EXPECT_LE(e.full, e.no_decomposition) << seed;
        EXPECT_LE(e.no_decomposition, e.no_criterion) << seed;
    }
}
