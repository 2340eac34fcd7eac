// Copyright 2026 The rfshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rfshare/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rfshare/testing/oracles.hpp"

using namespace rfshare;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_near(const Vec3& a, const Vec3& b, double tol) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

}  // namespace

TEST(UnitVector3, normalizes_and_rejects_zero) {
    const UnitVector3 u(3.0, 0.0, 4.0);
    EXPECT_NEAR(u.x(), 0.6, 1e-15);
    EXPECT_NEAR(u.z(), 0.8, 1e-15);
    EXPECT_THROW(UnitVector3(0.0, 0.0, 0.0), ContractError);
    EXPECT_THROW(UnitVector3(NAN, 0.0, 1.0), ContractError);
}

TEST(Rotate, examples) {
    expect_near(rotate(Rotation::identity(), UnitVector3::unit_z()).vec(), {0, 0, 1}, 0.0);
    expect_near(rotate(Rotation::from_axis_angle(UnitVector3::unit_y(), kPi / 2), UnitVector3::unit_z()).vec(),
                {1, 0, 0}, 1e-15);

    // 120 degrees about the body diagonal cycles x -> y; checked against Rodrigues.
    const UnitVector3 diag(1, 1, 1);
    const auto m = rfshare::testing::rotation_matrix(diag, 2 * kPi / 3);
    const Vec3 oracle = rfshare::testing::apply(m, {1, 0, 0});
    expect_near(oracle, {0, 1, 0}, 1e-15);
    expect_near(rotate(Rotation::from_axis_angle(diag, 2 * kPi / 3), UnitVector3::unit_x()).vec(), oracle,
                1e-15);
}

TEST(Rotate, matches_matrix_oracle_on_random_inputs) {
    Stream rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto axis = random_unit_vector(rng);
        const double angle = rng.uniform() * 2 * kPi;
        const auto v = random_unit_vector(rng);
        expect_near(rotate(Rotation::from_axis_angle(axis, angle), v).vec(),
                    rfshare::testing::apply(rfshare::testing::rotation_matrix(axis, angle), v.vec()), 1e-13);
    }
}

TEST(Compose, examples) {
    Stream rng(1);
    const Rotation r = haar_random_rotation(rng);
    EXPECT_LT(compose(r, Rotation::identity()).distance(r), 1e-15);
    EXPECT_LT(compose(r, inverse(r)).distance(Rotation::identity()), 1e-15);

    // 90 about z after 90 about x. The matrix product sends x->y->z->x:
    // 120 degrees about (1,1,1)/sqrt(3).
    const Rotation rz = Rotation::from_axis_angle(UnitVector3::unit_z(), kPi / 2);
    const Rotation rx = Rotation::from_axis_angle(UnitVector3::unit_x(), kPi / 2);
    const auto product = rfshare::testing::multiply(rfshare::testing::rotation_matrix(UnitVector3::unit_z(), kPi / 2),
                                           rfshare::testing::rotation_matrix(UnitVector3::unit_x(), kPi / 2));
    const auto expected_matrix = rfshare::testing::rotation_matrix(UnitVector3(1, 1, 1), 2 * kPi / 3);
    ASSERT_LT(rfshare::testing::max_abs_diff(product, expected_matrix), 1e-15);
    const Rotation c = compose(rz, rx);
    EXPECT_LT(c.distance(Rotation::from_axis_angle(UnitVector3(1, 1, 1), 2 * kPi / 3)), 1e-15);
    EXPECT_NEAR(rotation_angle(c), 2 * kPi / 3, 1e-15);
}

TEST(Compose, agrees_with_sequential_rotation) {
    Stream rng(2);
    for (int i = 0; i < 100; ++i) {
        const Rotation a = haar_random_rotation(rng);
        const Rotation b = haar_random_rotation(rng);
        const auto v = random_unit_vector(rng);
        expect_near(rotate(compose(a, b), v).vec(), rotate(a, rotate(b, v)).vec(), 1e-12);
    }
}

TEST(Compose, associative) {
    Stream rng(3);
    for (int i = 0; i < 100; ++i) {
        const Rotation a = haar_random_rotation(rng);
        const Rotation b = haar_random_rotation(rng);
        const Rotation c = haar_random_rotation(rng);
        EXPECT_LT(compose(compose(a, b), c).distance(compose(a, compose(b, c))), 1e-12);
    }
}

TEST(Inverse, examples) {
    EXPECT_TRUE(inverse(Rotation::identity()).same_rotation(Rotation::identity()));
    const auto y90 = Rotation::from_axis_angle(UnitVector3::unit_y(), kPi / 2);
    EXPECT_LT(inverse(y90).distance(Rotation::from_axis_angle(UnitVector3::unit_y(), -kPi / 2)), 1e-15);

    Stream rng(4);
    const Rotation r = haar_random_rotation(rng);
    for (int i = 0; i < 100; ++i) {
        const auto v = random_unit_vector(rng);
        expect_near(rotate(inverse(r), rotate(r, v)).vec(), v.vec(), 1e-12);
    }
}

TEST(Rotation, canonical_identifies_q_and_minus_q) {
    Stream rng(5);
    for (int i = 0; i < 100; ++i) {
        const Rotation h = haar_random_rotation(rng);
        // Build both signs through the same normalization so only the sign differs.
        const Rotation r = Rotation::from_quaternion(h.w(), h.x(), h.y(), h.z());
        const Rotation neg = Rotation::from_quaternion(-h.w(), -h.x(), -h.y(), -h.z());
        EXPECT_TRUE(r.same_rotation(neg));
        EXPECT_GE(r.canonical().w(), 0.0);
    }
    // w == 0: first nonzero vector component decides.
    const Rotation half = Rotation::from_quaternion(0.0, -1.0, 0.0, 0.0);
    EXPECT_EQ(half.canonical().x(), 1.0);
    EXPECT_TRUE(half.same_rotation(Rotation::from_quaternion(0.0, 1.0, 0.0, 0.0)));
}

TEST(RotationAngle, examples) {
    EXPECT_EQ(rotation_angle(Rotation::identity()), 0.0);
    Stream rng(6);
    for (int i = 0; i < 20; ++i) {
        EXPECT_NEAR(rotation_angle(Rotation::from_axis_angle(random_unit_vector(rng), kPi / 2)), kPi / 2, 1e-15);
    }
    // Angles past pi come back as 2 pi - angle.
    EXPECT_NEAR(rotation_angle(Rotation::from_axis_angle(UnitVector3::unit_x(), 1.5 * kPi)), 0.5 * kPi, 1e-15);
}

TEST(RotationAngle, matches_matrix_trace) {
    Stream rng(7);
    for (int i = 0; i < 200; ++i) {
        const Rotation r = haar_random_rotation(rng);
        EXPECT_NEAR(rotation_angle(r), rfshare::testing::matrix_angle(rfshare::testing::rotation_matrix(r)), 1e-7);
    }
}

TEST(AngleBetween, examples) {
    EXPECT_EQ(angle_between(UnitVector3::unit_z(), UnitVector3::unit_z()), 0.0);
    EXPECT_NEAR(angle_between(UnitVector3::unit_x(), UnitVector3::unit_z()), kPi / 2, 1e-15);
    EXPECT_NEAR(angle_between(UnitVector3::unit_z(), UnitVector3(1, 0, 1)), kPi / 4, 1e-15);
    // Clamping keeps antiparallel inputs finite.
    EXPECT_NEAR(angle_between(UnitVector3::unit_z(), -UnitVector3::unit_z()), kPi, 1e-15);
}

TEST(AngleBetween, symmetric_and_triangle_inequality) {
    Stream rng(8);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_unit_vector(rng);
        const auto b = random_unit_vector(rng);
        const auto c = random_unit_vector(rng);
        EXPECT_EQ(angle_between(a, b), angle_between(b, a));
        EXPECT_LE(angle_between(a, c), angle_between(a, b) + angle_between(b, c) + 1e-12);
    }
}

TEST(Rotate, preserves_dot_products) {
    Stream rng(9);
    for (int i = 0; i < 1000; ++i) {
        const Rotation r = haar_random_rotation(rng);
        const auto v = random_unit_vector(rng);
        const auto w = random_unit_vector(rng);
        EXPECT_NEAR(dot(rotate(r, v), rotate(r, w)), dot(v, w), 1e-12);
    }
}

TEST(HaarRandomRotation, deterministic_for_fixed_seed) {
    Stream a(42), b(42);
    EXPECT_TRUE(haar_random_rotation(a).same_rotation(haar_random_rotation(b)));
}

TEST(HaarRandomRotation, mean_angle_matches_haar_density) {
    // Angle density (1 - cos t)/pi on [0, pi]; integrate t against it by
    // Simpson's rule for the target.
    const int steps = 2000;
    const double h = kPi / steps;
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double t = i * h;
        const double f = t * (1 - std::cos(t)) / kPi;
        integral += f * (i == 0 || i == steps ? 1 : (i % 2 ? 4 : 2));
    }
    integral *= h / 3;
    ASSERT_NEAR(integral, kPi / 2 + 2 / kPi, 1e-10);

    Stream rng(10);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rotation_angle(haar_random_rotation(rng));
    EXPECT_NEAR(sum / n, integral, 0.01);
}

TEST(HaarRandomRotation, rotated_z_is_isotropic) {
    Stream rng(12);
    const int n = 100000;
    double m[3] = {}, s[3] = {};
    for (int i = 0; i < n; ++i) {
        const auto v = rotate(haar_random_rotation(rng), UnitVector3::unit_z());
        const double c[3] = {v.x(), v.y(), v.z()};
        for (int k = 0; k < 3; ++k) {
            m[k] += c[k];
            s[k] += c[k] * c[k];
        }
    }
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(m[k] / n, 0.0, 0.01);
        EXPECT_NEAR(s[k] / n, 1.0 / 3.0, 0.01);
    }
}

TEST(RandomUnitVector, moments) {
    Stream a(13), b(13);
    EXPECT_EQ(random_unit_vector(a), random_unit_vector(b));

    Stream rng(14);
    const int n = 100000;
    double m[3] = {}, cov[3][3] = {};
    for (int i = 0; i < n; ++i) {
        const auto v = random_unit_vector(rng);
        const double c[3] = {v.x(), v.y(), v.z()};
        for (int j = 0; j < 3; ++j) {
            m[j] += c[j];
            for (int k = 0; k < 3; ++k) cov[j][k] += c[j] * c[k];
        }
    }
    for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(m[j] / n, 0.0, 0.01);
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(cov[j][k] / n, j == k ? 1.0 / 3.0 : 0.0, 0.01);
    }
}

TEST(Frame, validates_axes) {
    EXPECT_NO_THROW(Frame::lab());
    EXPECT_THROW(Frame(UnitVector3::unit_x(), UnitVector3::unit_x(), UnitVector3::unit_z()), ContractError);
    // Left-handed.
    EXPECT_THROW(Frame(UnitVector3::unit_y(), UnitVector3::unit_x(), UnitVector3::unit_z()), ContractError);
}

TEST(Frame, with_z_axis_and_coordinates) {
    Stream rng(15);
    for (int i = 0; i < 100; ++i) {
        const auto z = random_unit_vector(rng);
        const Frame f = Frame::with_z_axis(z);
        expect_near(f.z_axis().vec(), z.vec(), 1e-12);
        EXPECT_NO_THROW(Frame(f.x_axis(), f.y_axis(), f.z_axis()));
        const auto v = random_unit_vector(rng);
        expect_near(f.to_lab(f.to_local(v.vec())), v.vec(), 1e-12);
    }
    expect_near(Frame::with_z_axis(-UnitVector3::unit_z()).z_axis().vec(), {0, 0, -1}, 1e-15);
}
