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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "rfshare/errors.hpp"
#include "rfshare/random.hpp"

namespace rfshare {

/// Plain 3-vector used for intermediate arithmetic. No norm invariant.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3&) const = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

/// A direction in lab space or on the Bloch sphere. Always unit norm.
class UnitVector3 {
   public:
    /// Normalizes (x, y, z). Rejects zero-length and non-finite input.
    UnitVector3(double x, double y, double z) : v_(normalize({x, y, z})) {}
    explicit UnitVector3(const Vec3& v) : v_(normalize(v)) {}

    static UnitVector3 unit_x() { return {1.0, 0.0, 0.0}; }
    static UnitVector3 unit_y() { return {0.0, 1.0, 0.0}; }
    static UnitVector3 unit_z() { return {0.0, 0.0, 1.0}; }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    const Vec3& vec() const { return v_; }

    UnitVector3 operator-() const { return UnitVector3(Tag{}, -v_); }
    bool operator==(const UnitVector3&) const = default;

    friend std::ostream& operator<<(std::ostream& os, const UnitVector3& u) { return os << u.v_; }

   private:
    struct Tag {};
    UnitVector3(Tag, const Vec3& v) : v_(v) {}

    static Vec3 normalize(const Vec3& v) {
        const double n = v.norm();
        if (!std::isfinite(n) || n < 1e-12) {
            throw ContractError("UnitVector3: cannot normalize a zero or non-finite vector");
        }
        // Leave already-unit input bit-exact.
        if (std::abs(n - 1.0) <= 1e-15) return v;
        return v * (1.0 / n);
    }

    Vec3 v_;
};

inline double dot(const UnitVector3& a, const UnitVector3& b) { return dot(a.vec(), b.vec()); }

/// Angle in [0, pi] between two directions.
inline double angle_between(const UnitVector3& a, const UnitVector3& b) {
    return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

/// Element of SO(3), stored as a unit quaternion (w, x, y, z).
class Rotation {
   public:
    Rotation() = default;

    static Rotation identity() { return {}; }

    /// Normalizes the quaternion; rejects zero-length input.
    static Rotation from_quaternion(double w, double x, double y, double z) {
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        if (!std::isfinite(n) || n < 1e-12) {
            throw ContractError("Rotation: cannot normalize a zero or non-finite quaternion");
        }
        return Rotation(w / n, x / n, y / n, z / n);
    }

    /// Right-handed rotation by `radians` about `axis`.
    static Rotation from_axis_angle(const UnitVector3& axis, double radians) {
        const double s = std::sin(0.5 * radians);
        return Rotation(std::cos(0.5 * radians), s * axis.x(), s * axis.y(), s * axis.z());
    }

    double w() const { return w_; }
    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    /// Representative of {q, -q} with w >= 0; when w == 0 the first nonzero
    /// vector component is made positive.
    Rotation canonical() const {
        const std::array<double, 4> c{w_, x_, y_, z_};
        for (double v : c) {
            if (v > 0.0) return *this;
            if (v < 0.0) return Rotation(-w_, -x_, -y_, -z_);
        }
        return *this;
    }

    /// Exact equality of canonical representatives.
    bool same_rotation(const Rotation& o) const {
        const Rotation a = canonical();
        const Rotation b = o.canonical();
        return a.w_ == b.w_ && a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
    }

    /// Max componentwise distance between canonical representatives.
    double distance(const Rotation& o) const {
        const Rotation a = canonical();
        const Rotation b = o.canonical();
        return std::max({std::abs(a.w_ - b.w_), std::abs(a.x_ - b.x_), std::abs(a.y_ - b.y_),
                         std::abs(a.z_ - b.z_)});
    }

    friend std::ostream& operator<<(std::ostream& os, const Rotation& r) {
        return os << "Rotation(" << r.w_ << ", " << r.x_ << ", " << r.y_ << ", " << r.z_ << ")";
    }

   private:
    Rotation(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

    double w_ = 1.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;

    friend Rotation compose(const Rotation& r1, const Rotation& r2);
    friend Rotation inverse(const Rotation& r);
};

inline Vec3 rotate(const Rotation& r, const Vec3& v) {
    const Vec3 u{r.x(), r.y(), r.z()};
    const Vec3 t = 2.0 * cross(u, v);
    return v + r.w() * t + cross(u, t);
}

/// Image of v under r.
inline UnitVector3 rotate(const Rotation& r, const UnitVector3& v) {
    return UnitVector3(rotate(r, v.vec()));
}

/// r1 after r2: rotate(compose(r1, r2), v) == rotate(r1, rotate(r2, v)).
inline Rotation compose(const Rotation& r1, const Rotation& r2) {
    const double w = r1.w_ * r2.w_ - r1.x_ * r2.x_ - r1.y_ * r2.y_ - r1.z_ * r2.z_;
    const double x = r1.w_ * r2.x_ + r1.x_ * r2.w_ + r1.y_ * r2.z_ - r1.z_ * r2.y_;
    const double y = r1.w_ * r2.y_ - r1.x_ * r2.z_ + r1.y_ * r2.w_ + r1.z_ * r2.x_;
    const double z = r1.w_ * r2.z_ + r1.x_ * r2.y_ - r1.y_ * r2.x_ + r1.z_ * r2.w_;
    // Renormalize so that long chains do not drift off the unit sphere.
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    return Rotation(w / n, x / n, y / n, z / n);
}

inline Rotation inverse(const Rotation& r) { return Rotation(r.w_, -r.x_, -r.y_, -r.z_); }

/// Geodesic angle in [0, pi].
inline double rotation_angle(const Rotation& r) {
    const Rotation c = r.canonical();
    const double vn = std::sqrt(c.x() * c.x() + c.y() * c.y() + c.z() * c.z());
    // atan2 stays accurate near the identity where acos(w) loses precision.
    return 2.0 * std::atan2(vn, std::clamp(c.w(), 0.0, 1.0));
}

/// Haar-uniform rotation: four standard normals normalized to a unit quaternion.
inline Rotation haar_random_rotation(Stream& rng) {
    for (;;) {
        const double w = rng.normal();
        const double x = rng.normal();
        const double y = rng.normal();
        const double z = rng.normal();
        if (w * w + x * x + y * y + z * z > 1e-12) return Rotation::from_quaternion(w, x, y, z);
    }
}

/// Uniform direction on the unit sphere.
inline UnitVector3 random_unit_vector(Stream& rng) {
    for (;;) {
        const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
        if (v.norm() > 1e-12) return UnitVector3(v);
    }
}

enum class AxisLabel { X = 0, Y = 1, Z = 2 };

inline const char* to_string(AxisLabel a) {
    switch (a) {
        case AxisLabel::X: return "X";
        case AxisLabel::Y: return "Y";
        case AxisLabel::Z: return "Z";
    }
    return "?";
}

/// Right-handed orthonormal triad expressed in lab coordinates.
class Frame {
   public:
    /// Validates orthonormality and handedness to 1e-9.
    Frame(const UnitVector3& x_axis, const UnitVector3& y_axis, const UnitVector3& z_axis)
        : x_(x_axis), y_(y_axis), z_(z_axis) {
        constexpr double tol = 1e-9;
        if (std::abs(dot(x_, y_)) > tol || std::abs(dot(y_, z_)) > tol ||
            std::abs(dot(z_, x_)) > tol) {
            throw ContractError("Frame: axes are not mutually orthogonal");
        }
        if ((cross(x_.vec(), y_.vec()) - z_.vec()).norm() > tol) {
            throw ContractError("Frame: axes are not right-handed (x cross y != z)");
        }
    }

    static Frame lab() {
        return {UnitVector3::unit_x(), UnitVector3::unit_y(), UnitVector3::unit_z()};
    }

    /// The lab frame carried by r.
    static Frame from_rotation(const Rotation& r) { return lab().rotated(r); }

    /// The frame reached from the lab frame by the minimal rotation taking
    /// lab z onto `z_axis`.
    static Frame with_z_axis(const UnitVector3& z_axis) {
        const Vec3 ez{0.0, 0.0, 1.0};
        const Vec3 c = cross(ez, z_axis.vec());
        const double s = c.norm();
        const double cz = z_axis.z();
        if (s < 1e-15) {
            if (cz > 0.0) return lab();
            return from_rotation(Rotation::from_axis_angle(UnitVector3::unit_x(), std::numbers::pi));
        }
        return from_rotation(Rotation::from_axis_angle(UnitVector3(c), std::atan2(s, cz)));
    }

    const UnitVector3& x_axis() const { return x_; }
    const UnitVector3& y_axis() const { return y_; }
    const UnitVector3& z_axis() const { return z_; }

    const UnitVector3& axis(AxisLabel a) const {
        switch (a) {
            case AxisLabel::X: return x_;
            case AxisLabel::Y: return y_;
            case AxisLabel::Z: return z_;
        }
        return z_;
    }

    Frame rotated(const Rotation& r) const {
        return Frame(Unchecked{}, rotate(r, x_), rotate(r, y_), rotate(r, z_));
    }

    /// Lab vector with the given coordinates in this frame.
    Vec3 to_lab(const Vec3& local) const {
        return local.x * x_.vec() + local.y * y_.vec() + local.z * z_.vec();
    }

    /// Coordinates of a lab vector in this frame.
    Vec3 to_local(const Vec3& lab_vec) const {
        return {dot(lab_vec, x_.vec()), dot(lab_vec, y_.vec()), dot(lab_vec, z_.vec())};
    }

   private:
    struct Unchecked {};
    Frame(Unchecked, const UnitVector3& x, const UnitVector3& y, const UnitVector3& z)
        : x_(x), y_(y), z_(z) {}

    UnitVector3 x_;
    UnitVector3 y_;
    UnitVector3 z_;
};

}  // namespace rfshare
