//! Unit conversions.

/// One atomic unit of time in femtoseconds.
pub const AU_TIME_FS: f64 = 0.024_188_84;
/// Speed of light in atomic units.
pub const C_AU: f64 = 137.035_999;

pub fn au_to_fs(t: f64) -> f64 {
    t * AU_TIME_FS
}

pub fn fs_to_au(t: f64) -> f64 {
    t / AU_TIME_FS
}

/// Converts a specific rotation in deg·dm⁻¹·(g/mL)⁻¹ times a density in g/mL to rad/m.
pub fn specific_rotation_to_rad_per_m(specific_rotation: f64, density: f64) -> f64 {
    specific_rotation * density * std::f64::consts::PI / 180.0 * 10.0
}
