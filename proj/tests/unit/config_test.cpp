#include <gtest/gtest.h>

#include "leafangle/config.hpp"
#include "leafangle/errors.hpp"

namespace leafangle {
namespace {

TEST(ConfigTest, AbsentSourceGivesDefaults) {
    const auto c = load_config();
    EXPECT_EQ(c.slope_band_low_deg, 80.0);
    EXPECT_EQ(c.slope_band_high_deg, 90.0);
    EXPECT_EQ(c.boundary_min_px, 100.0);
    EXPECT_EQ(c.orientation_bin_deg, 1.0);
    EXPECT_EQ(c.outlier_threshold_deg, 8.0);
    EXPECT_EQ(c.min_instance_score, 0.5);
    EXPECT_EQ(c.sharpness_warn_threshold, 100.0);
    EXPECT_EQ(c.roi_padding_px, 10);
}

TEST(ConfigTest, OverlaysProvidedKeys) {
    const auto c = load_config("boundary_min_px: 50\n");
    PipelineConfig expected;
    expected.boundary_min_px = 50;
    EXPECT_EQ(c, expected);
}

TEST(ConfigTest, AcceptsJsonDocuments) {
    const auto c = load_config(R"({"outlier_threshold_deg": 5, "roi_padding_px": 3})");
    EXPECT_EQ(c.outlier_threshold_deg, 5.0);
    EXPECT_EQ(c.roi_padding_px, 3);
}

TEST(ConfigTest, EmptyDocumentGivesDefaults) { EXPECT_EQ(load_config(""), PipelineConfig{}); }

TEST(ConfigTest, BandAboveNinetyIsRejectedByName) {
    try {
        load_config("slope_band_low_deg: 95");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.key(), "slope_band_low_deg");
    }
}

TEST(ConfigTest, InvertedBandIsRejected) {
    EXPECT_THROW(load_config("slope_band_low_deg: 85\nslope_band_high_deg: 85"), ValidationError);
}

TEST(ConfigTest, UnknownKeyIsAnError) {
    try {
        load_config("boundary_min: 50");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.key(), "boundary_min");
    }
}

TEST(ConfigTest, MalformedDocumentIsParseError) {
    EXPECT_THROW(load_config("boundary_min_px: [1, 2"), ParseError);
    EXPECT_THROW(load_config("- 1\n- 2\n"), ParseError);
    EXPECT_THROW(load_config("boundary_min_px: lots"), ParseError);
    EXPECT_THROW(load_config("roi_padding_px: 2.5"), ParseError);
}

TEST(ConfigTest, RangeChecksPerKey) {
    EXPECT_THROW(load_config("min_instance_score: 1.5"), ValidationError);
    EXPECT_THROW(load_config("orientation_bin_deg: 0"), ValidationError);
    EXPECT_THROW(load_config("outlier_threshold_deg: -1"), ValidationError);
    EXPECT_THROW(load_config("boundary_min_px: -3"), ValidationError);
    EXPECT_THROW(load_config("roi_padding_px: -1"), ValidationError);
}

TEST(ConfigTest, SnapshotListsEveryKey) {
    const auto snapshot = PipelineConfig{}.to_json();
    ASSERT_EQ(snapshot.size(), config_keys().size());
    for (const auto& key : config_keys()) EXPECT_TRUE(snapshot.contains(key)) << key;
}

TEST(ConfigTest, SetValueRoundTripsEveryKey) {
    PipelineConfig c;
    for (const auto& key : config_keys()) set_config_value(c, key, "7");
    const auto snapshot = c.to_json();
    for (const auto& item : snapshot.items()) EXPECT_EQ(item.value().get<double>(), 7.0) << item.key();
}

}  // namespace
}  // namespace leafangle
