use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbDirection {
    ToLinear,
    ToDb,
}

/// 10^(x/10) or 10·log10(x).
pub fn db_convert(x: f64, direction: DbDirection) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("dB conversion input".into()));
    }
    match direction {
        DbDirection::ToLinear => Ok(db_to_linear(x)),
        DbDirection::ToDb if x > 0.0 => Ok(10.0 * x.log10()),
        DbDirection::ToDb => Err(Error::InvalidInput(format!("cannot express {x} in dB"))),
    }
}

pub fn db_to_linear(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    db_convert(x, DbDirection::ToDb)
}

/// dBm to milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}
