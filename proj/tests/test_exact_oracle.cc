#include <gtest/gtest.h>

#include "zipfsketch/errors.h"
#include "zipfsketch/exact_oracle.h"
#include "zipfsketch/freq_model.h"

using namespace zipfsketch;

TEST(ExactCountMin, TwoItemsOneRow) {
  const TinyInstance inst{zipf_frequencies(2, 1.0), 1, 2};
  EXPECT_NEAR(static_cast<double>(exact_cm_error(inst, 1)), 0.25, 1e-15);
  EXPECT_NEAR(static_cast<double>(exact_cm_error(inst, 2)), 0.5, 1e-15);
}

TEST(ExactCountMin, TwoItemsTwoRows) {
  const TinyInstance inst{zipf_frequencies(2, 1.0), 2, 2};
  EXPECT_NEAR(static_cast<double>(exact_cm_error(inst, 1)), 0.125, 1e-15);
}

TEST(ExactCountMin, ThreeItemsTwoRowsWidthThree) {
  const TinyInstance inst{zipf_frequencies(3, 1.0), 2, 3};
  EXPECT_NEAR(static_cast<double>(exact_cm_error(inst, 1)), 61.0 / 486, 1e-14);
}

TEST(ExactCountMin, SingleBucketIsDeterministic) {
  const TinyInstance inst{zipf_frequencies(4, 1.0), 2, 1};
  EXPECT_NEAR(static_cast<double>(exact_cm_error(inst, 2)), 1.0 + 1.0 / 3 + 0.25, 1e-15);
}

TEST(ExactCountSketch, ThreeItemsOneRow) {
  const TinyInstance inst{zipf_frequencies(3, 1.0), 1, 2};
  EXPECT_NEAR(static_cast<double>(exact_cs_error(inst, 1)), 1.0 / 3, 1e-15);
}

TEST(ExactCountSketch, TwoItemsThreeRows) {
  const TinyInstance inst{zipf_frequencies(2, 1.0), 3, 2};
  EXPECT_NEAR(static_cast<double>(exact_cs_error(inst, 1)), 10.0 / 64, 1e-15);
}

TEST(ExactCountSketch, AllPositiveSignsMatchCountMinForOneRow) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const TinyInstance inst{zipf_frequencies(n, 1.5), 1, 3};
    EXPECT_NEAR(static_cast<double>(exact_cs_error(inst, 1, SignModel::kAllPositive)),
                static_cast<double>(exact_cm_error(inst, 1)), 1e-15);
  }
}

TEST(ExactCountSketch, EvenRowsRejected) {
  const TinyInstance inst{zipf_frequencies(2, 1.0), 2, 2};
  EXPECT_THROW(exact_cs_error(inst, 1), std::invalid_argument);
}

TEST(ExactOracle, Guards) {
  const TinyInstance huge{zipf_frequencies(30, 1.0), 1, 4};
  EXPECT_THROW(exact_cm_error(huge, 1), GuardError);
  EXPECT_THROW(exact_cs_error(huge, 1), GuardError);
  const TinyInstance inst{zipf_frequencies(3, 1.0), 1, 2};
  EXPECT_THROW(exact_cm_error(inst, 0), std::invalid_argument);
  EXPECT_THROW(exact_cm_error(inst, 4), std::invalid_argument);
}

TEST(ExactDetection, TwoItemsTopOne) {
  const FrequencyVector f = zipf_frequencies(2, 1.0);
  EXPECT_NEAR(static_cast<double>(exact_detection_probability(f, 2, 1, 1)), 8.0 / 9, 1e-15);
  EXPECT_NEAR(static_cast<double>(exact_detection_probability(f, 2, 1, 2)), 1.0 / 9, 1e-15);
}

TEST(ExactDetection, ThreeItems) {
  const FrequencyVector f = zipf_frequencies(3, 1.0);
  EXPECT_NEAR(static_cast<double>(exact_detection_probability(f, 3, 1, 1)), 972.0 / 1331, 1e-14);
  EXPECT_NEAR(static_cast<double>(exact_detection_probability(f, 3, 2, 3)), 386.0 / 1331, 1e-14);
}

TEST(ExactDetection, FullTableAlwaysDetects) {
  const FrequencyVector f = zipf_frequencies(3, 1.0);
  EXPECT_NEAR(static_cast<double>(exact_detection_probability(f, 4, 3, 3)), 1.0, 1e-15);
}

TEST(ExactDetection, Guards) {
  const FrequencyVector f = zipf_frequencies(100, 1.0);
  EXPECT_THROW(exact_detection_probability(f, 50, 10, 1), GuardError);
  EXPECT_THROW(exact_detection_probability(f, 2, 0, 1), std::invalid_argument);
}
