//! Checks of `2πM(P) ≥ vol⋄(L)` and of the dilogarithm identities behind the
//! closed form for the 4·8·8 lattice.

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{example, ExampleRecord};
use crate::error::{Error, Result};
use crate::isoradial::{check_isoradial, isoradial_mahler};
use crate::kasteleyn::{assign_kasteleyn_signs, char_poly, uniformizing_gauge};
use crate::mahler::{mahler_jensen, mahler_quadrature};
use crate::spanning_tree::{temperley_lift, tree_entropy_fd, DEFAULT_SCHEDULE};
use crate::special_functions::{bipyramid_volume, bloch_wigner, ti2, CATALAN};

/// `vol⋄(L) = Σ_f vol(B_{|f|})`.
pub fn bipyramid_volume_of_link(face_degrees: &[usize]) -> Result<f64> {
    face_degrees.iter().map(|&d| bipyramid_volume(d)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    Jensen,
    Quadrature,
    Isoradial,
    Trees,
}

impl MethodKind {
    pub const ALL: [MethodKind; 4] =
        [MethodKind::Jensen, MethodKind::Quadrature, MethodKind::Isoradial, MethodKind::Trees];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Jensen => "jensen",
            MethodKind::Quadrature => "quadrature",
            MethodKind::Isoradial => "isoradial",
            MethodKind::Trees => "trees",
        }
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MethodKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method \"{s}\"")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub methods: Vec<MethodKind>,
    /// Base grid of the quadrature method.
    pub grid: usize,
    /// Initial panels and absolute tolerance of the Jensen method.
    pub panels: usize,
    pub jensen_tol: f64,
    pub n_schedule: Vec<usize>,
    /// Largest allowed difference between any two methods.
    pub agreement: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            methods: MethodKind::ALL.to_vec(),
            grid: 256,
            panels: 64,
            jensen_tol: 1e-10,
            n_schedule: DEFAULT_SCHEDULE.to_vec(),
            agreement: 2e-5,
        }
    }
}

/// One Mahler estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MethodValue {
    pub method: MethodKind,
    pub value: f64,
    pub error_estimate: f64,
    pub millis: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CklReport {
    pub example: String,
    pub methods: Vec<MethodValue>,
    pub two_pi_m: f64,
    pub vol_bipyramid: f64,
    pub face_degrees: Option<Vec<usize>>,
    pub margin: f64,
    pub combined_error: f64,
    pub pass: bool,
    /// `log Z` shift of the gauge taking critical weights to uniform ones.
    pub gauge_shift: Option<f64>,
}

impl CklReport {
    pub fn value(&self, m: MethodKind) -> Option<f64> {
        self.methods.iter().find(|v| v.method == m).map(|v| v.value)
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64() * 1e3))
}

/// `(M with uniform weights, gauge shift)` from the closed edge-sum formula.
pub fn isoradial_uniform_mahler(ex: &ExampleRecord) -> Result<Option<(f64, f64)>> {
    let Some(lattice) = ex.isoradial_lattice else {
        return Ok(None);
    };
    let lift = temperley_lift(&ex.tait_graph)?;
    let emb = check_isoradial(&lift, lattice, None)?;
    let critical = emb.critical_graph()?;
    let gauge = uniformizing_gauge(&critical)?
        .ok_or_else(|| Error::InvalidArgument(format!("{}: critical weights are not gauge-uniform", ex.name)))?;
    let shift = gauge.log_shift();
    Ok(Some((isoradial_mahler(&emb) + shift, shift)))
}

/// Runs every requested method on one example and compares `2πM` with `vol⋄`.
pub fn verify_example(ex: &ExampleRecord, config: &VerifyConfig) -> Result<CklReport> {
    let mut methods = Vec::new();
    let mut gauge_shift = None;
    let wants = |m| config.methods.contains(&m);
    if wants(MethodKind::Jensen) || wants(MethodKind::Quadrature) {
        let lift = temperley_lift(&ex.tait_graph)?;
        let a = assign_kasteleyn_signs(&lift)?;
        let (p, poly_ms) = timed(|| char_poly(&lift, &a))?;
        if wants(MethodKind::Jensen) {
            let (r, ms) = timed(|| mahler_jensen(&p, config.panels, config.jensen_tol))?;
            methods.push(MethodValue {
                method: MethodKind::Jensen,
                value: r.value,
                error_estimate: r.error_estimate,
                millis: ms + poly_ms,
            });
        }
        if wants(MethodKind::Quadrature) {
            let (r, ms) = timed(|| mahler_quadrature(&p, config.grid))?;
            methods.push(MethodValue {
                method: MethodKind::Quadrature,
                value: r.value,
                error_estimate: r.error_estimate,
                millis: ms + poly_ms,
            });
        }
    }
    if wants(MethodKind::Isoradial) {
        if let (Some((m, shift)), ms) = timed(|| isoradial_uniform_mahler(ex))? {
            gauge_shift = Some(shift);
            methods.push(MethodValue {
                method: MethodKind::Isoradial,
                value: m,
                error_estimate: 1e-13 * m.abs(),
                millis: ms,
            });
        }
    }
    if wants(MethodKind::Trees) {
        let (t, ms) = timed(|| tree_entropy_fd(&ex.tait_graph, &config.n_schedule))?;
        methods.push(MethodValue {
            method: MethodKind::Trees,
            value: t.per_fd,
            error_estimate: t.error_estimate,
            millis: ms,
        });
    }
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no applicable method selected".into()));
    }

    let mut spread: f64 = 0.0;
    for (i, a) in methods.iter().enumerate() {
        for b in &methods[i + 1..] {
            let d = (a.value - b.value).abs();
            if d > config.agreement {
                return Err(Error::MethodDisagreement {
                    example: ex.name.to_string(),
                    detail: format!("{} = {} vs {} = {}", a.method.name(), a.value, b.method.name(), b.value),
                });
            }
            spread = spread.max(d);
        }
    }
    let vol = match (&ex.face_degrees, ex.expected.vol_bipyramid) {
        (Some(f), _) => bipyramid_volume_of_link(f)?,
        (None, Some(v)) => v,
        (None, None) => return Err(Error::MissingVolume(ex.name.to_string())),
    };
    let m = methods[0].value;
    let worst = methods.iter().map(|v| v.error_estimate).fold(0.0, f64::max);
    let two_pi_m = 2.0 * PI * m;
    let margin = two_pi_m - vol;
    let combined_error = 2.0 * PI * (worst + spread);
    methods.sort_by_key(|v| v.method);
    Ok(CklReport {
        example: ex.name.to_string(),
        methods,
        two_pi_m,
        vol_bipyramid: vol,
        face_degrees: ex.face_degrees.clone(),
        margin,
        combined_error,
        pass: margin > -combined_error,
        gauge_shift,
    })
}

/// [`verify_example`] for a catalog entry by name.
pub fn verify_ckl(name: &str, config: &VerifyConfig) -> Result<CklReport> {
    verify_example(&example(name)?, config)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AppendixReport {
    pub tolerance: f64,
    pub theta: f64,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

/// Reference value of `2πM(P_{4·8·8})` to ten decimals.
pub const TWO_PI_M_488: f64 = 19.7715323218;

/// Chang–Shrock form `8C + 4π log(√2−1) + 8 Ti₂(3+2√2)`.
pub fn chang_shrock_488() -> f64 {
    let s2 = 2f64.sqrt();
    8.0 * CATALAN + 4.0 * PI * (s2 - 1.0).ln() + 8.0 * ti2(3.0 + 2.0 * s2)
}

/// Dilogarithm form `8D(i) + arccos(−7/9) log(17+12√2) + 4D(e^{iθ}) − 4D(−e^{iθ})`.
pub fn dilogarithm_488() -> f64 {
    let s2 = 2f64.sqrt();
    let u = Complex64::new(2.0 * s2, 1.0) / 3.0;
    8.0 * bloch_wigner(Complex64::i()) + (-7.0f64 / 9.0).acos() * (17.0 + 12.0 * s2).ln() + 4.0 * bloch_wigner(u)
        - 4.0 * bloch_wigner(-u)
}

/// Evaluates every identity and reports residuals against `tolerance`.
pub fn appendix_report(tolerance: f64) -> AppendixReport {
    let s2 = 2f64.sqrt();
    let x = 3.0 + 2.0 * s2;
    let theta = 1f64.atan2(2.0 * s2);
    let u = Complex64::from_polar(1.0, theta);
    let root = Complex64::new(7.0, 4.0 * s2).sqrt() / 3.0;
    let mut checks = Vec::new();
    let mut push = |name, lhs: f64, rhs: f64| {
        let residual = (lhs - rhs).abs();
        checks.push(IdentityCheck { name, lhs, rhs, residual, pass: residual <= tolerance });
    };
    push("sqrt(7+4*sqrt2*i)/3 = e^(i*theta), real part", root.re, u.re);
    push("sqrt(7+4*sqrt2*i)/3 = e^(i*theta), imaginary part", root.im, u.im);
    push("arccos(-7/9) = pi - 2*theta", (-7.0f64 / 9.0).acos(), PI - 2.0 * theta);
    push("log(17+12*sqrt2) = 4*log(1+sqrt2)", (17.0 + 12.0 * s2).ln(), 4.0 * (1.0 + s2).ln());
    push("log(17+12*sqrt2) = 2*log(3+2*sqrt2)", (17.0 + 12.0 * s2).ln(), 2.0 * x.ln());
    push("arg(1-(3+2*sqrt2)i) = -(pi/2 - theta/2)", Complex64::new(1.0, -x).arg(), -(PI / 2.0 - theta / 2.0));
    push(
        "Ti2(3+2*sqrt2) = D((3+2*sqrt2)i) - arg(1-(3+2*sqrt2)i)*log(3+2*sqrt2)",
        ti2(x),
        bloch_wigner(Complex64::new(0.0, x)) - Complex64::new(1.0, -x).arg() * x.ln(),
    );
    push(
        "8D((3+2*sqrt2)i) = 4D(e^(i*theta)) - 4D(-e^(i*theta))",
        8.0 * bloch_wigner(Complex64::new(0.0, x)),
        4.0 * bloch_wigner(u) - 4.0 * bloch_wigner(-u),
    );
    push("Chang-Shrock form = dilogarithm form", chang_shrock_488(), dilogarithm_488());
    push("Chang-Shrock form = 19.7715323218", chang_shrock_488(), TWO_PI_M_488);
    push("dilogarithm form = 19.7715323218", dilogarithm_488(), TWO_PI_M_488);
    let pass = checks.iter().all(|c| c.pass);
    AppendixReport { tolerance, theta, checks, pass }
}

/// As [`appendix_report`], failing on the first residual above `tolerance`.
pub fn appendix_identity_check(tolerance: f64) -> Result<AppendixReport> {
    let r = appendix_report(tolerance);
    if let Some(c) = r.checks.iter().find(|c| !c.pass) {
        return Err(Error::AppendixResidual { name: c.name.to_string(), residual: c.residual, tolerance });
    }
    Ok(r)
}
