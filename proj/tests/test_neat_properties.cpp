#include <gtest/gtest.h>

#include "support/properties.hpp"

namespace ut = uavneat::testing;

constexpr std::size_t kCases = 10000;

TEST(NeatProperties, AcyclicityAndWeightRangeClosure) { EXPECT_EQ(ut::check_acyclicity_closure(kCases, 101), ""); }
TEST(NeatProperties, InnovationContainment) { EXPECT_EQ(ut::check_innovation_containment(kCases, 102), ""); }
TEST(NeatProperties, AddNodeAccounting) { EXPECT_EQ(ut::check_add_node_accounting(kCases, 103), ""); }
TEST(NeatProperties, DistanceSymmetry) { EXPECT_EQ(ut::check_distance_properties(kCases, 104), ""); }
TEST(NeatProperties, SpeciationPartition) { EXPECT_EQ(ut::check_speciation_partition(kCases, 105), ""); }
TEST(NeatProperties, OffspringConservation) { EXPECT_EQ(ut::check_offspring_conservation(kCases, 106), ""); }
