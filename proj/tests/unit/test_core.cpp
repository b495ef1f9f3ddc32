/*
 * Copyright 2026 The radarseg Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "radarseg/config.hpp"
#include "radarseg/core.hpp"

using namespace radarseg;

namespace {

// Label table written out by hand from the mapping figure.
struct Row {
    FusedLabel f;
    ClutterLabel c;
    SemSegLabel s;
};
const Row kTable[] = {
    {FusedLabel::Car, ClutterLabel::MovingObject, SemSegLabel::Car},
    {FusedLabel::Pedestrian, ClutterLabel::MovingObject, SemSegLabel::Pedestrian},
    {FusedLabel::PedestrianGroup, ClutterLabel::MovingObject, SemSegLabel::PedestrianGroup},
    {FusedLabel::TwoWheeler, ClutterLabel::MovingObject, SemSegLabel::TwoWheeler},
    {FusedLabel::LargeVehicle, ClutterLabel::MovingObject, SemSegLabel::LargeVehicle},
    {FusedLabel::OtherObject, ClutterLabel::MovingObject, SemSegLabel::Unlabeled},
    {FusedLabel::InaccurateMeasurement, ClutterLabel::MovingObject, SemSegLabel::Background},
    {FusedLabel::Clutter, ClutterLabel::Clutter, SemSegLabel::Background},
    {FusedLabel::Stationary, ClutterLabel::Stationary, SemSegLabel::Background},
};

bool forbidden(ClutterLabel c, SemSegLabel s) {
    const bool not_moving = c == ClutterLabel::Clutter || c == ClutterLabel::Stationary;
    const bool labeled_object = s != SemSegLabel::Background;  // object types and Unlabeled
    return not_moving && labeled_object;
}

}  // namespace

TEST(Labels, MappingsMatchTable) {
    for (const Row& r : kTable) {
        EXPECT_EQ(fused_to_clutter(r.f), r.c) << to_string(r.f);
        EXPECT_EQ(fused_to_semseg(r.f), r.s) << to_string(r.f);
    }
}

TEST(Labels, VocabularySizes) {
    EXPECT_EQ(kAllClutterLabels.size(), 3u);
    EXPECT_EQ(kAllSemSegLabels.size(), 7u);
    EXPECT_EQ(kAllFusedLabels.size(), 9u);
}

TEST(Labels, PairingArithmetic) {
    int pairs = 0, eliminated = 0;
    for (ClutterLabel c : kAllClutterLabels)
        for (SemSegLabel s : kAllSemSegLabels) {
            ++pairs;
            if (forbidden(c, s)) ++eliminated;
        }
    EXPECT_EQ(pairs, 21);
    EXPECT_EQ(eliminated, 12);
    EXPECT_EQ(pairs - eliminated, 9);
    EXPECT_EQ(pairs - eliminated, kNumFusedLabels);
}

TEST(Labels, MappingsTotalInjectiveAndAllowed) {
    std::set<std::pair<int, int>> images;
    for (FusedLabel f : kAllFusedLabels) {
        const ClutterLabel c = fused_to_clutter(f);
        const SemSegLabel s = fused_to_semseg(f);
        EXPECT_FALSE(forbidden(c, s)) << to_string(f);
        images.insert({static_cast<int>(c), static_cast<int>(s)});
    }
    EXPECT_EQ(images.size(), 9u);
}

TEST(Labels, FuseIsInverseOnAllowedPairs) {
    for (ClutterLabel c : kAllClutterLabels)
        for (SemSegLabel s : kAllSemSegLabels) {
            const auto f = fuse_labels(c, s);
            if (forbidden(c, s)) {
                EXPECT_FALSE(f.has_value());
                continue;
            }
            ASSERT_TRUE(f.has_value());
            EXPECT_EQ(fused_to_clutter(*f), c);
            EXPECT_EQ(fused_to_semseg(*f), s);
        }
}

TEST(Labels, NamedExamples) {
    EXPECT_EQ(fused_to_clutter(FusedLabel::InaccurateMeasurement), ClutterLabel::MovingObject);
    EXPECT_EQ(fused_to_clutter(FusedLabel::Clutter), ClutterLabel::Clutter);
    EXPECT_EQ(fused_to_clutter(FusedLabel::OtherObject), ClutterLabel::MovingObject);
    EXPECT_EQ(fused_to_semseg(FusedLabel::Car), SemSegLabel::Car);
    EXPECT_EQ(fused_to_semseg(FusedLabel::InaccurateMeasurement), SemSegLabel::Background);
    EXPECT_EQ(fused_to_semseg(FusedLabel::OtherObject), SemSegLabel::Unlabeled);
}

TEST(Labels, NamesRoundTrip) {
    for (ClutterLabel l : kAllClutterLabels) EXPECT_EQ(parse_clutter_label(to_string(l)), l);
    for (SemSegLabel l : kAllSemSegLabels) EXPECT_EQ(parse_semseg_label(to_string(l)), l);
    for (FusedLabel l : kAllFusedLabels) EXPECT_EQ(parse_fused_label(to_string(l)), l);
    EXPECT_FALSE(parse_fused_label("car").has_value());
    EXPECT_FALSE(parse_semseg_label("").has_value());
}

TEST(Labels, ObjectClasses) {
    int n = 0;
    for (SemSegLabel s : kAllSemSegLabels) n += is_object_class(s);
    EXPECT_EQ(n, kNumObjectClasses);
    EXPECT_FALSE(is_object_class(SemSegLabel::Background));
    EXPECT_FALSE(is_object_class(SemSegLabel::Unlabeled));
}

TEST(Detection, Validity) {
    Detection d;
    d.set_fused(FusedLabel::Clutter);
    EXPECT_TRUE(is_valid(d));
    d.semseg_label = SemSegLabel::Car;
    EXPECT_FALSE(is_valid(d));
    d.set_fused(FusedLabel::Car);
    d.rcs = std::numeric_limits<double>::quiet_NaN();
    EXPECT_FALSE(is_valid(d));
    Detection unlabeled;
    EXPECT_TRUE(is_valid(unlabeled));
}

TEST(Geometry, WrapAngle) {
    EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
    EXPECT_DOUBLE_EQ(wrap_angle(kPi), -kPi);
    EXPECT_NEAR(wrap_angle(3 * kPi + 0.25), -kPi + 0.25, 1e-12);
    EXPECT_NEAR(wrap_angle(-kPi - 0.5), kPi - 0.5, 1e-12);
    for (double a = -20.0; a < 20.0; a += 0.37) {
        const double w = wrap_angle(a);
        EXPECT_GE(w, -kPi);
        EXPECT_LT(w, kPi);
        EXPECT_NEAR(std::remainder(w - a, 2 * kPi), 0.0, 1e-9);
    }
}

TEST(Config, ParsesKeysCommentsAndLists) {
    std::istringstream in("# scene\nduration = 2.5\n  n_car=3 # inline\nwalls = 1, 2,3,4\nname = desk\n\n");
    const auto kv = KeyValueConfig::parse(in);
    EXPECT_EQ(kv.get_double("duration"), 2.5);
    EXPECT_EQ(kv.get_int("n_car"), 3);
    EXPECT_EQ(kv.get_doubles("walls"), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_FALSE(kv.get_double("missing").has_value());
    EXPECT_EQ(kv.unconsumed(), std::vector<std::string>{"name"});
    EXPECT_EQ(kv.get_string("name"), "desk");
    EXPECT_TRUE(kv.unconsumed().empty());
}

TEST(Config, RejectsMalformedInput) {
    std::istringstream no_eq("just words\n");
    EXPECT_THROW(KeyValueConfig::parse(no_eq), InputError);
    std::istringstream bad_num("x = 1.5abc\n");
    const auto kv = KeyValueConfig::parse(bad_num);
    EXPECT_THROW(kv.get_double("x"), InputError);
    std::istringstream frac("n = 2.5\n");
    EXPECT_THROW(KeyValueConfig::parse(frac).get_int("n"), InputError);
    EXPECT_THROW(KeyValueConfig::load("/nonexistent/file.cfg"), InputError);
}

TEST(Config, ContentHashIsStable) {
    EXPECT_EQ(content_hash("abc"), content_hash("abc"));
    EXPECT_NE(content_hash("abc"), content_hash("abd"));
    EXPECT_EQ(content_hash("").size(), 16u);
}
