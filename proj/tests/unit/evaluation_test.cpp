#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "leafangle/errors.hpp"
#include "leafangle/evaluation.hpp"
#include "support/oracles.hpp"

namespace leafangle {
namespace {

TEST(CosineSimilarityTest, HandValues) {
    const std::vector<double> a{10, 20, 30};
    EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
    EXPECT_EQ(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
    EXPECT_EQ(cosine_similarity(std::vector<double>{30, 40}, std::vector<double>{40, 30}), 0.96);
}

TEST(CosineSimilarityTest, Errors) {
    EXPECT_THROW(cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{1}), ShapeError);
    EXPECT_THROW(cosine_similarity(std::vector<double>{}, std::vector<double>{}), ShapeError);
    EXPECT_THROW(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 2}), UndefinedSimilarityError);
    EXPECT_THROW(cosine_similarity(std::vector<double>{-1, 2}, std::vector<double>{1, 2}), ValidationError);
}

TEST(CosineSimilarityTest, ScaleInvariance) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 90.0), scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(20), b(20);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        const double c = scale(rng);
        std::vector<double> ca;
        for (double v : a) ca.push_back(c * v);
        EXPECT_NEAR(cosine_similarity(ca, b), cosine_similarity(a, b), 1e-12);
        EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
    }
}

TEST(ImpliedAngleTest, Values) {
    EXPECT_EQ(implied_angle_deg(1.0), 0.0);
    EXPECT_NEAR(implied_angle_deg(0.96), 16.26, 0.01);
    EXPECT_NEAR(implied_angle_deg(0.98), 11.48, 0.01);
    EXPECT_EQ(implied_angle_deg(1.0 + 1e-15), 0.0);
    EXPECT_NEAR(implied_angle_deg(0.0), 90.0, 1e-12);
}

TEST(CompareTest, HandArithmetic) {
    const MeasurementSet alg{"alg", {{"img1", 30}, {"img2", 50}}};
    const MeasurementSet manual{"student1", {{"img2", 49}, {"img1", 20}}};
    const auto r = compare(alg, manual, PipelineConfig{});
    EXPECT_EQ(r.label, "alg vs student1");
    EXPECT_EQ(r.n_common, 2u);
    ASSERT_EQ(r.outliers.size(), 1u);
    EXPECT_EQ(r.outliers[0].image_id, "img1");
    EXPECT_EQ(r.outliers[0].abs_diff_deg, 10.0);
    EXPECT_DOUBLE_EQ(r.mean_signed_diff_deg, 5.5);
    EXPECT_DOUBLE_EQ(r.mean_abs_diff_deg, 5.5);
    EXPECT_DOUBLE_EQ(r.non_outlier_mean_abs_diff_deg, 1.0);
}

TEST(CompareTest, IdenticalSets) {
    const MeasurementSet a{"a", {{"x", 12}, {"y", 40}, {"z", 77}}};
    const auto r = compare(a, a, PipelineConfig{});
    EXPECT_NEAR(r.cosine_similarity, 1.0, 1e-12);
    EXPECT_TRUE(r.outliers.empty());
    EXPECT_EQ(r.mean_signed_diff_deg, 0.0);
    EXPECT_EQ(r.mean_abs_diff_deg, 0.0);
    EXPECT_EQ(r.non_outlier_mean_abs_diff_deg, 0.0);
}

TEST(CompareTest, ThresholdIsStrict) {
    const MeasurementSet a{"a", {{"x", 18}, {"y", 18.000001}}};
    const MeasurementSet b{"b", {{"x", 10}, {"y", 10}}};
    const auto r = compare(a, b, PipelineConfig{});
    ASSERT_EQ(r.outliers.size(), 1u);
    EXPECT_EQ(r.outliers[0].image_id, "y");
}

TEST(CompareTest, AllOutliersLeavesNonOutlierStatUndefined) {
    const MeasurementSet a{"a", {{"x", 40}}};
    const MeasurementSet b{"b", {{"x", 10}}};
    const auto r = compare(a, b, PipelineConfig{});
    EXPECT_TRUE(std::isnan(r.non_outlier_mean_abs_diff_deg));
    EXPECT_TRUE(to_json(r)["non_outlier_mean_abs_diff_deg"].is_null());
}

TEST(CompareTest, JoinErrorsAndValidation) {
    const MeasurementSet a{"a", {{"x", 40}}};
    const MeasurementSet b{"b", {{"y", 10}, {"z", 3}}};
    try {
        compare(a, b, PipelineConfig{});
        FAIL() << "expected JoinError";
    } catch (const JoinError& e) {
        EXPECT_EQ(e.left_count(), 1u);
        EXPECT_EQ(e.right_count(), 2u);
    }
    EXPECT_THROW(compare(MeasurementSet{"d", {{"x", 1}, {"x", 2}}}, a, PipelineConfig{}), ValidationError);
    EXPECT_THROW(compare(MeasurementSet{"d", {{"x", 181}}}, a, PipelineConfig{}), ValidationError);
}

TEST(CompareTest, AboveNinetyIsFlaggedNotRejected) {
    const MeasurementSet a{"a", {{"x", 95}, {"y", 30}}};
    const MeasurementSet b{"b", {{"x", 92}, {"y", 31}}};
    const auto r = compare(a, b, PipelineConfig{});
    EXPECT_EQ(r.above_90, (std::vector<std::string>{"x"}));
}

TEST(CompareTest, RandomTablesMatchDirectComputation) {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        const auto [alg, manual] = oracle::random_tables(rng, 50);
        const auto r = compare(alg, manual, PipelineConfig{});
        const auto o = oracle::evaluate_direct(alg, manual, 8.0);
        EXPECT_EQ(r.n_common, o.n);
        EXPECT_EQ(r.only_in_alg, 1u);
        EXPECT_EQ(r.only_in_manual, 1u);
        EXPECT_NEAR(r.cosine_similarity, o.similarity, 1e-9);
        EXPECT_NEAR(r.mean_signed_diff_deg, o.mean_signed, 1e-9);
        EXPECT_NEAR(r.mean_abs_diff_deg, o.mean_abs, 1e-9);
        EXPECT_NEAR(r.non_outlier_mean_abs_diff_deg, o.non_outlier_mean_abs, 1e-9);
        std::vector<std::string> ids;
        for (const auto& out : r.outliers) ids.push_back(out.image_id);
        EXPECT_EQ(ids, o.outlier_ids);
    }
}

TEST(CompareTest, SymmetricExceptSignedMean) {
    std::mt19937_64 rng(56);
    const auto [a, b] = oracle::random_tables(rng, 40);
    const auto ab = compare(a, b, PipelineConfig{});
    const auto ba = compare(b, a, PipelineConfig{});
    EXPECT_EQ(ab.cosine_similarity, ba.cosine_similarity);
    EXPECT_EQ(ab.mean_abs_diff_deg, ba.mean_abs_diff_deg);
    EXPECT_EQ(ab.outliers.size(), ba.outliers.size());
    EXPECT_NEAR(ab.mean_signed_diff_deg, -ba.mean_signed_diff_deg, 1e-12);
}

}  // namespace
}  // namespace leafangle
