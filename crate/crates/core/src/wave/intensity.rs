//! Time profiles `λ(t)` of a separable source `λ(t) f(x)`.

use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use crate::registry::{parse_f64_arg, Registry};

pub trait Intensity: Send + Sync + Debug {
    fn label(&self) -> String;
    fn eval(&self, t: f64) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantIntensity(pub f64);

impl Intensity for ConstantIntensity {
    fn label(&self) -> String {
        format!("constant:{}", self.0)
    }
    fn eval(&self, _t: f64) -> f64 {
        self.0
    }
}

/// `cos(ω t)`.
#[derive(Debug, Clone, Copy)]
pub struct CosineIntensity(pub f64);

impl Intensity for CosineIntensity {
    fn label(&self) -> String {
        format!("cos:{}", self.0)
    }
    fn eval(&self, t: f64) -> f64 {
        (self.0 * t).cos()
    }
}

/// `exp(-r t)`.
#[derive(Debug, Clone, Copy)]
pub struct DecayIntensity(pub f64);

impl Intensity for DecayIntensity {
    fn label(&self) -> String {
        format!("decay:{}", self.0)
    }
    fn eval(&self, t: f64) -> f64 {
        (-self.0 * t).exp()
    }
}

pub fn intensities() -> &'static Registry<dyn Intensity> {
    static REG: OnceLock<Registry<dyn Intensity>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("intensity")
            .with("constant", "λ(t) = c, default 1  (constant[:c])", |arg| {
                let c = match arg {
                    Some(_) => parse_f64_arg("constant", arg)?,
                    None => 1.0,
                };
                Ok(Arc::new(ConstantIntensity(c)) as Arc<dyn Intensity>)
            })
            .with("cos", "λ(t) = cos(ωt)  (cos:<ω>)", |arg| {
                Ok(Arc::new(CosineIntensity(parse_f64_arg("cos", arg)?)) as Arc<dyn Intensity>)
            })
            .with("decay", "λ(t) = exp(-rt)  (decay:<r>)", |arg| {
                Ok(Arc::new(DecayIntensity(parse_f64_arg("decay", arg)?)) as Arc<dyn Intensity>)
            })
    })
}

pub(crate) fn constant_one() -> Arc<dyn Intensity> {
    Arc::new(ConstantIntensity(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_defaults() {
        assert_eq!(intensities().build("constant").unwrap().eval(2.0), 1.0);
        assert_eq!(intensities().build("constant:3").unwrap().eval(2.0), 3.0);
        assert!((intensities().build("cos:2").unwrap().eval(0.5) - 1f64.cos()).abs() < 1e-15);
        assert!(intensities().build("cos").is_err());
    }
}
