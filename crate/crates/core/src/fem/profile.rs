//! Functions on [0, 1] used as potentials, sources and initial data.
//!
//! Each concrete profile is a [`Profile`] trait object; the selectable ones
//! are registered by name in [`potentials`] and [`sources`].

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::registry::{parse_f64_arg, Registry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    SmoothFormula,
    PiecewiseConstant,
    PiecewisePolynomial,
    Tabulated,
}

pub trait Profile: Send + Sync + fmt::Debug {
    /// Selector-style label, used for provenance in reports.
    fn label(&self) -> String;

    fn kind(&self) -> ProfileKind;

    fn eval(&self, x: f64) -> f64;

    /// One-sided limit at `x` (from the right when `from_right`).
    /// Only profiles with jumps need to override this.
    fn eval_limit(&self, x: f64, _from_right: bool) -> f64 {
        self.eval(x)
    }

    /// Points in (0, 1) where the profile or its derivative jumps.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }

    /// Upper bound for `|f(x)|` on [0, 1].
    fn sup_bound(&self) -> f64;

    /// First derivative, when known in closed form.
    fn derivative(&self, _x: f64) -> Option<f64> {
        None
    }
}

/// `c` everywhere.
#[derive(Debug, Clone)]
pub struct Constant {
    value: f64,
}

impl Constant {
    pub fn new(value: f64) -> Self {
        Self { value }
    }
}

impl Profile for Constant {
    fn label(&self) -> String {
        format!("constant:{}", self.value)
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::SmoothFormula
    }
    fn eval(&self, _x: f64) -> f64 {
        self.value
    }
    fn sup_bound(&self) -> f64 {
        self.value.abs()
    }
    fn derivative(&self, _x: f64) -> Option<f64> {
        Some(0.0)
    }
}

/// `base + amplitude * sin(2π x)`.
#[derive(Debug, Clone)]
pub struct SineModulated {
    base: f64,
    amplitude: f64,
}

impl SineModulated {
    pub fn new(base: f64, amplitude: f64) -> Self {
        Self { base, amplitude }
    }

    /// `1 + 0.5 sin(2π x)`.
    pub fn standard() -> Self {
        Self::new(1.0, 0.5)
    }
}

impl Profile for SineModulated {
    fn label(&self) -> String {
        if self.base == 1.0 && self.amplitude == 0.5 {
            "smooth-sine".into()
        } else {
            format!("sine-modulated:{},{}", self.base, self.amplitude)
        }
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::SmoothFormula
    }
    fn eval(&self, x: f64) -> f64 {
        self.base + self.amplitude * (2.0 * PI * x).sin()
    }
    fn sup_bound(&self) -> f64 {
        self.base.abs() + self.amplitude.abs()
    }
    fn derivative(&self, x: f64) -> Option<f64> {
        Some(2.0 * PI * self.amplitude * (2.0 * PI * x).cos())
    }
}

/// Two-valued step: `left` on [0, at] (or [0, at) when `left_closed` is
/// false) and `right` elsewhere.
#[derive(Debug, Clone)]
pub struct Step {
    left: f64,
    right: f64,
    at: [f64; 1],
    left_closed: bool,
}

impl Step {
    pub fn new(left: f64, right: f64, at: f64, left_closed: bool) -> Self {
        Self {
            left,
            right,
            at: [at],
            left_closed,
        }
    }

    /// `30 χ_[0,0.5] + 10 χ_(0.5,1]`.
    pub fn standard() -> Self {
        Self::new(30.0, 10.0, 0.5, true)
    }
}

impl Profile for Step {
    fn label(&self) -> String {
        if self.left == 30.0 && self.right == 10.0 && self.at[0] == 0.5 {
            "discontinuous-step".into()
        } else {
            format!("step:{},{},{}", self.left, self.right, self.at[0])
        }
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::PiecewiseConstant
    }
    fn eval(&self, x: f64) -> f64 {
        let at = self.at[0];
        if x < at || (x == at && self.left_closed) {
            self.left
        } else {
            self.right
        }
    }
    fn eval_limit(&self, x: f64, from_right: bool) -> f64 {
        let at = self.at[0];
        if x < at || (x == at && !from_right) {
            self.left
        } else {
            self.right
        }
    }
    fn breakpoints(&self) -> &[f64] {
        &self.at
    }
    fn sup_bound(&self) -> f64 {
        self.left.abs().max(self.right.abs())
    }
}

/// `scale (x - 1/2)^2 χ_(lo, hi)(x)`.
#[derive(Debug, Clone)]
pub struct TruncatedParabola {
    scale: f64,
    support: [f64; 2],
}

impl TruncatedParabola {
    pub fn new(scale: f64, lo: f64, hi: f64) -> Self {
        Self {
            scale,
            support: [lo, hi],
        }
    }

    /// `20 (x - 1/2)^2 χ_(1/4, 3/4)`.
    pub fn standard() -> Self {
        Self::new(20.0, 0.25, 0.75)
    }

    fn inside(&self, x: f64) -> f64 {
        self.scale * (x - 0.5).powi(2)
    }
}

impl Profile for TruncatedParabola {
    fn label(&self) -> String {
        "f-discontinuous".into()
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::PiecewisePolynomial
    }
    fn eval(&self, x: f64) -> f64 {
        let [lo, hi] = self.support;
        if x > lo && x < hi {
            self.inside(x)
        } else {
            0.0
        }
    }
    fn eval_limit(&self, x: f64, from_right: bool) -> f64 {
        let [lo, hi] = self.support;
        let inside = if from_right {
            x >= lo && x < hi
        } else {
            x > lo && x <= hi
        };
        if inside {
            self.inside(x)
        } else {
            0.0
        }
    }
    fn breakpoints(&self) -> &[f64] {
        &self.support
    }
    fn sup_bound(&self) -> f64 {
        let [lo, hi] = self.support;
        self.inside(lo).max(self.inside(hi))
    }
}

/// `x (1 - x) [5 (x + 0.1)^2 + 1 / (x + 0.1)]`.
#[derive(Debug, Clone, Default)]
pub struct SmoothBump;

impl Profile for SmoothBump {
    fn label(&self) -> String {
        "g-smooth".into()
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::SmoothFormula
    }
    fn eval(&self, x: f64) -> f64 {
        let s = x + 0.1;
        x * (1.0 - x) * (5.0 * s * s + 1.0 / s)
    }
    fn sup_bound(&self) -> f64 {
        // max of x(1-x) is 1/4, the bracket is at most 5*1.21 + 10.
        0.25 * (5.0 * 1.21 + 10.0)
    }
    fn derivative(&self, x: f64) -> Option<f64> {
        let s = x + 0.1;
        let p = x * (1.0 - x);
        let q = 5.0 * s * s + 1.0 / s;
        Some((1.0 - 2.0 * x) * q + p * (10.0 * s - 1.0 / (s * s)))
    }
}

/// `sin(k π x)`, vanishing at both ends.
#[derive(Debug, Clone)]
pub struct SineMode {
    k: f64,
}

impl SineMode {
    pub fn new(k: u32) -> Self {
        Self { k: k as f64 }
    }
}

impl Profile for SineMode {
    fn label(&self) -> String {
        format!("sine:{}", self.k)
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::SmoothFormula
    }
    fn eval(&self, x: f64) -> f64 {
        (self.k * PI * x).sin()
    }
    fn sup_bound(&self) -> f64 {
        1.0
    }
    fn derivative(&self, x: f64) -> Option<f64> {
        Some(self.k * PI * (self.k * PI * x).cos())
    }
}

/// Piecewise-linear interpolation through tabulated `(x, value)` points,
/// constant beyond the first and last abscissa.
#[derive(Debug, Clone)]
pub struct Tabulated {
    label: String,
    xs: Vec<f64>,
    values: Vec<f64>,
    interior: Vec<f64>,
}

impl Tabulated {
    pub fn new(label: impl Into<String>, xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 2 {
            return Err(Error::invalid("table needs at least two (x, value) rows"));
        }
        if !xs.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::invalid(
                "table abscissae must be strictly increasing",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("table values must be finite"));
        }
        let interior = xs.iter().copied().filter(|&x| x > 0.0 && x < 1.0).collect();
        Ok(Self {
            label: label.into(),
            xs,
            values,
            interior,
        })
    }

    /// Reads a two-column `x,value` CSV with a header row.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::csv(path, e))?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::invalid(format!("{}: malformed row {:?}", path.display(), record))
                    })
            };
            xs.push(parse(0)?);
            values.push(parse(1)?);
        }
        Self::new(format!("table:{}", path.display()), xs, values)
    }
}

impl Profile for Tabulated {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn kind(&self) -> ProfileKind {
        ProfileKind::Tabulated
    }
    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.values[0];
        }
        if x >= self.xs[n - 1] {
            return self.values[n - 1];
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }
    fn breakpoints(&self) -> &[f64] {
        &self.interior
    }
    fn sup_bound(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn constant_ctor(arg: Option<&str>) -> Result<Arc<dyn Profile>> {
    Ok(Arc::new(Constant::new(parse_f64_arg("constant", arg)?)))
}

fn table_ctor(arg: Option<&str>) -> Result<Arc<dyn Profile>> {
    let path = arg.ok_or_else(|| Error::invalid("table requires a file path: table:<path>"))?;
    Ok(Arc::new(Tabulated::from_csv(Path::new(path))?))
}

fn shared<P: Profile + 'static>(p: P) -> Result<Arc<dyn Profile>> {
    Ok(Arc::new(p))
}

/// Potentials selectable by name.
pub fn potentials() -> &'static Registry<dyn Profile> {
    static REG: OnceLock<Registry<dyn Profile>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("potential")
            .with("smooth-sine", "a(x) = 1 + 0.5 sin(2πx)", |_| {
                shared(SineModulated::standard())
            })
            .with(
                "discontinuous-step",
                "a(x) = 30 on [0,0.5], 10 on (0.5,1]",
                |_| shared(Step::standard()),
            )
            .with("constant", "a(x) = c  (constant:<c>)", constant_ctor)
            .with("zero", "a(x) = 0", |_| shared(Constant::new(0.0)))
            .with(
                "table",
                "piecewise-linear x,value CSV  (table:<path>)",
                table_ctor,
            )
    })
}

/// Source profiles selectable by name.
pub fn sources() -> &'static Registry<dyn Profile> {
    static REG: OnceLock<Registry<dyn Profile>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("source")
            .with(
                "f-discontinuous",
                "f(x) = 20 (x-1/2)^2 on (1/4,3/4), 0 elsewhere",
                |_| shared(TruncatedParabola::standard()),
            )
            .with("g-smooth", "g(x) = x(1-x)[5(x+0.1)^2 + 1/(x+0.1)]", |_| {
                shared(SmoothBump)
            })
            .with("zero", "f(x) = 0", |_| shared(Constant::new(0.0)))
            .with("constant", "f(x) = c  (constant:<c>)", constant_ctor)
            .with("sine", "f(x) = sin(kπx)  (sine:<k>)", |arg| {
                let k = parse_f64_arg("sine", arg)?;
                if k < 1.0 || k.fract() != 0.0 {
                    return Err(Error::invalid("sine:<k> needs a positive integer k"));
                }
                shared(SineMode::new(k as u32))
            })
            .with(
                "table",
                "piecewise-linear x,value CSV  (table:<path>)",
                table_ctor,
            )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_potentials_evaluate() {
        let a = potentials().build("smooth-sine").unwrap();
        assert!((a.eval(0.25) - 1.5).abs() < 1e-15);
        let b = potentials().build("discontinuous-step").unwrap();
        assert_eq!(b.eval(0.5), 30.0);
        assert_eq!(b.eval(0.5000001), 10.0);
        assert_eq!(b.eval_limit(0.5, true), 10.0);
        assert_eq!(b.sup_bound(), 30.0);
    }

    #[test]
    fn sources_evaluate() {
        let f = sources().build("f-discontinuous").unwrap();
        assert_eq!(f.eval(0.25), 0.0);
        assert!((f.eval(0.3) - 20.0 * 0.04).abs() < 1e-14);
        assert_eq!(f.breakpoints(), &[0.25, 0.75]);
        let g = sources().build("g-smooth").unwrap();
        assert_eq!(g.eval(0.0), 0.0);
        assert!(g.eval(1.0).abs() < 1e-15);
        for x in [0.1, 0.4, 0.77] {
            let fd = (g.eval(x + 1e-6) - g.eval(x - 1e-6)) / 2e-6;
            assert!((fd - g.derivative(x).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_needs_argument() {
        assert!(potentials().build("constant").is_err());
        assert_eq!(potentials().build("constant:2.5").unwrap().eval(0.3), 2.5);
    }

    #[test]
    fn tabulated_interpolates() {
        let t = Tabulated::new("t", vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert!((t.eval(0.25) - 1.0).abs() < 1e-15);
        assert_eq!(t.breakpoints(), &[0.5]);
        assert!(Tabulated::new("t", vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn tabulated_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        std::fs::write(&path, "x,value\n0,1\n1,3\n").unwrap();
        let t = potentials()
            .build(&format!("table:{}", path.display()))
            .unwrap();
        assert!((t.eval(0.5) - 2.0).abs() < 1e-15);
    }
}
