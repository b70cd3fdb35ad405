//! Unit conversions for the crate's boundaries. Everything downstream of
//! these helpers works in SI.

use std::f64::consts::PI;

/// Standard gravity (m/s^2) used to convert mass to weight.
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// One kilogram-centimeter of torque in newton-meters.
pub const NEWTON_METERS_PER_KG_CM: f64 = 0.098_066_5;

pub fn newtons_from_kilograms(mass_kg: f64) -> f64 {
    mass_kg * STANDARD_GRAVITY
}

pub fn kilograms_from_newtons(weight_n: f64) -> f64 {
    weight_n / STANDARD_GRAVITY
}

pub fn newtons_from_grams(mass_g: f64) -> f64 {
    newtons_from_kilograms(mass_g / 1000.0)
}

pub fn grams_from_newtons(weight_n: f64) -> f64 {
    kilograms_from_newtons(weight_n) * 1000.0
}

pub fn torque_nm_from_kg_cm(torque_kg_cm: f64) -> f64 {
    torque_kg_cm * NEWTON_METERS_PER_KG_CM
}

pub fn torque_kg_cm_from_nm(torque_nm: f64) -> f64 {
    torque_nm / NEWTON_METERS_PER_KG_CM
}

pub fn radians_from_degrees(deg: f64) -> f64 {
    deg * (PI / 180.0)
}

pub fn degrees_from_radians(rad: f64) -> f64 {
    rad * (180.0 / PI)
}
